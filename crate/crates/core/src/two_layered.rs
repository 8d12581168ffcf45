//! Two-layered models: a BD or Kripke base, the measures a logic needs,
//! and evaluation of outer formulas.

use crate::bd::{cells, extents, BDModel, BdError, WSet};
use crate::kripke::{extents_modal, KripkeError, KripkeModel};
use crate::luk::{eval_pair, eval_single, EvalError, Pair};
use crate::measures::{
    audit_belief, audit_four_probability, audit_plausibility, audit_pm_probability, Measure, MeasureError,
};
use crate::rat::{one, show, Rat};
use crate::syntax::{Fm, LogicId, ModalAtom, Tag};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TLError {
    #[error("{0} is not a two-layered logic")]
    NotTwoLayered(LogicId),
    #[error("`{0}` is not an atom of {1}")]
    Tag(String, LogicId),
    #[error("model shape does not fit {0}: {1}")]
    Shape(LogicId, String),
    #[error("measure fails audit: {0}")]
    Audit(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Bd(#[from] BdError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    /// A BD model with `μ`, `μ4`, `bel` or `bel`+`pl`.
    Measured { base: BDModel, measures: Vec<Measure> },
    /// A Kripke model carrying its own probabilities.
    Kripke(KripkeModel),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLModel {
    pub logic: LogicId,
    pub structure: Structure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OuterValue {
    Single(Rat),
    Pair(Pair),
}

impl OuterValue {
    pub fn truth(&self) -> &Rat {
        match self {
            OuterValue::Single(r) => r,
            OuterValue::Pair(p) => &p.t,
        }
    }
}

impl fmt::Display for OuterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterValue::Single(r) => write!(f, "{}", show(r)),
            OuterValue::Pair(p) => write!(f, "{p}"),
        }
    }
}

/// Whether `v` is designated in `logic`.
pub fn designated(logic: LogicId, v: &OuterValue) -> bool {
    match v {
        OuterValue::Single(r) => *r == one(),
        OuterValue::Pair(p) if logic.paired_designation() => p.designated(),
        OuterValue::Pair(p) => p.t == one(),
    }
}

fn shape_error(logic: LogicId, msg: &str) -> TLError {
    TLError::Shape(logic, msg.to_string())
}

fn check_shape(logic: LogicId, s: &Structure) -> Result<(), TLError> {
    let want_measures = match logic {
        LogicId::PrLuk2 | LogicId::FourPr | LogicId::BelLuk2 => Some(1),
        LogicId::BelNLuk => Some(2),
        LogicId::ProbS5 | LogicId::ProbNLukS5 => None,
        l => return Err(TLError::NotTwoLayered(l)),
    };
    match (want_measures, s) {
        (Some(k), Structure::Measured { base, measures }) => {
            if measures.len() != k {
                return Err(shape_error(logic, &format!("{k} measure(s) expected")));
            }
            for m in measures {
                if m.n() != base.n() {
                    return Err(MeasureError::Size(m.n(), base.n()).into());
                }
            }
            Ok(())
        }
        (None, Structure::Kripke(k)) => {
            let rels = if logic == LogicId::ProbS5 { 1 } else { 2 };
            if k.relations() != rels || k.measures.len() != rels {
                return Err(shape_error(logic, &format!("{rels} relation(s) with measures expected")));
            }
            Ok(())
        }
        (Some(_), _) => Err(shape_error(logic, "a BD model with measures expected")),
        (None, _) => Err(shape_error(logic, "a Kripke model expected")),
    }
}

impl TLModel {
    /// Builds a model after auditing its measures.
    pub fn new(logic: LogicId, structure: Structure) -> Result<TLModel, TLError> {
        let m = TLModel::unchecked(logic, structure)?;
        m.audit()?;
        Ok(m)
    }

    /// Builds a model without auditing the measures.
    pub fn unchecked(logic: LogicId, structure: Structure) -> Result<TLModel, TLError> {
        check_shape(logic, &structure)?;
        Ok(TLModel { logic, structure })
    }

    pub fn base(&self) -> &BDModel {
        match &self.structure {
            Structure::Measured { base, .. } => base,
            Structure::Kripke(k) => &k.base,
        }
    }

    pub fn audit(&self) -> Result<(), TLError> {
        let fail = |r: Vec<crate::measures::AuditReport>| -> Result<(), TLError> {
            match r.into_iter().find(|r| !r.pass) {
                Some(r) => Err(TLError::Audit(r.to_string())),
                None => Ok(()),
            }
        };
        match &self.structure {
            Structure::Kripke(_) => Ok(()),
            Structure::Measured { base, measures } => match self.logic {
                LogicId::PrLuk2 => fail(audit_pm_probability(base, &measures[0])?),
                LogicId::FourPr => fail(audit_four_probability(base, &measures[0])?),
                LogicId::BelLuk2 => {
                    let k = base.n().min(4);
                    fail(vec![audit_belief(&base.worlds, &measures[0], k)?])
                }
                LogicId::BelNLuk => {
                    let k = base.n().min(4);
                    fail(vec![
                        audit_belief(&base.worlds, &measures[0], k)?,
                        audit_plausibility(&base.worlds, &measures[1], k)?,
                    ])
                }
                l => Err(TLError::NotTwoLayered(l)),
            },
        }
    }

    /// The value the model induces on a modal atom.
    pub fn induce(&self, a: &ModalAtom) -> Result<OuterValue, TLError> {
        if !self.logic.tags().contains(&a.tag) {
            return Err(TLError::Tag(a.to_string(), self.logic));
        }
        let pair = |t, f| Ok(OuterValue::Pair(Pair::new(t, f)));
        match &self.structure {
            Structure::Measured { base, measures } => {
                let e = extents(base, &a.body)?;
                let mu = &measures[0];
                match (self.logic, a.tag) {
                    (LogicId::BelNLuk, Tag::B) => pair(mu.of(&e.pos)?, measures[1].of(&e.neg)?),
                    (LogicId::BelNLuk, Tag::Pl) => pair(measures[1].of(&e.pos)?, mu.of(&e.neg)?),
                    (LogicId::FourPr, tag) => {
                        let c = cells(&base.all(), &e);
                        let set = match tag {
                            Tag::Bl => c.b,
                            Tag::Db => c.d,
                            Tag::Cf => c.c,
                            _ => c.u,
                        };
                        Ok(OuterValue::Single(mu.of(&set)?))
                    }
                    _ => pair(mu.of(&e.pos)?, mu.of(&e.neg)?),
                }
            }
            Structure::Kripke(k) => {
                let rel = if a.tag == Tag::Pr2 { 1 } else { 0 };
                let e = extents_modal(k, &a.body)?;
                pair(k.pi(rel, &e.pos), k.pi(rel, &e.neg))
            }
        }
    }

    pub fn eval(&self, f: &Fm) -> Result<OuterValue, TLError> {
        let mut err = None;
        let out = if self.logic == LogicId::FourPr {
            let mut leaf = |g: &Fm| match g {
                Fm::Atom(a) => match self.induce(a) {
                    Ok(v) => Ok(v.truth().clone()),
                    Err(e) => {
                        err = Some(e);
                        Err(EvalError::Other("atom".into()))
                    }
                },
                other => Err(EvalError::Other(format!("outer variable `{other}` in a two-layered formula"))),
            };
            eval_single(f, &mut leaf).map(OuterValue::Single)
        } else {
            let mut leaf = |g: &Fm| match g {
                Fm::Atom(a) => match self.induce(a) {
                    Ok(OuterValue::Pair(p)) => Ok(p),
                    Ok(OuterValue::Single(_)) => unreachable!(),
                    Err(e) => {
                        err = Some(e);
                        Err(EvalError::Other("atom".into()))
                    }
                },
                other => Err(EvalError::Other(format!("outer variable `{other}` in a two-layered formula"))),
            };
            eval_pair(f, &mut leaf).map(OuterValue::Pair)
        };
        match (out, err) {
            (_, Some(e)) => Err(e),
            (Ok(v), None) => Ok(v),
            (Err(e), None) => Err(e.into()),
        }
    }

    pub fn designates(&self, f: &Fm) -> Result<bool, TLError> {
        Ok(designated(self.logic, &self.eval(f)?))
    }

    /// False iff every premise is designated and `alpha` is not.
    pub fn entails_on_model(&self, gamma: &[Fm], alpha: &Fm) -> Result<bool, TLError> {
        for g in gamma {
            if !self.designates(g)? {
                return Ok(true);
            }
        }
        self.designates(alpha)
    }
}

fn star(base: &BDModel) -> BDModel {
    let all = base.all();
    let mut out = base.clone();
    for p in base.vars() {
        let pos = base.vplus.get(&p).cloned().unwrap_or_else(|| WSet::empty(base.n()));
        let neg = base.vminus.get(&p).cloned().unwrap_or_else(|| WSet::empty(base.n()));
        out.vplus.insert(p.clone(), all.minus(&neg));
        out.vminus.insert(p, all.minus(&pos));
    }
    out
}

/// The starred model `(v*)⁺ = W∖v⁻`, `(v*)⁻ = W∖v⁺`, same measure.
pub fn conflate(m: &TLModel) -> Result<TLModel, TLError> {
    let structure = match (&m.logic, &m.structure) {
        (LogicId::PrLuk2, Structure::Measured { base, measures }) => {
            if !measures[0].is_probability() {
                return Err(shape_error(m.logic, "conflation needs a classical probability"));
            }
            Structure::Measured { base: star(base), measures: measures.clone() }
        }
        (LogicId::ProbS5, Structure::Kripke(k)) => Structure::Kripke(KripkeModel::new(
            star(&k.base),
            k.partitions.clone(),
            k.measures.clone(),
        )?),
        _ => return Err(shape_error(m.logic, "conflation is defined for pr-luk2 and prob-s5")),
    };
    TLModel::new(m.logic, structure)
}

/// `(1 − e₂, 1 − e₁)`: the value a formula takes in the starred model.
pub fn flip(p: &Pair) -> Pair {
    Pair::new(one() - &p.f, one() - &p.t)
}
