//! Syntactic translations between the two-layered logics, plus the
//! length envelopes they are expected to respect.

use crate::syntax::{atom, bd_len, fm_len, nnf, Bd, Fm, LogicId, ModalAtom, Tag, RESERVED_SUFFIX};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("residual outer negation in {0}")]
    OuterNeg(String),
    #[error("unexpected {0} in {1} formula")]
    Foreign(String, &'static str),
    #[error("no translation from {0} to {1}")]
    Unsupported(&'static str, &'static str),
}

type TResult<T> = Result<T, TranslateError>;

// ---------------------------------------------------------------- ¬ elimination

/// Dual atom `A'` with `e(¬A) = e(A')` (first coordinate only under NŁ,
/// where `¬B` becomes `Pl¬`).
pub fn atom_neg(a: &ModalAtom, nelson: bool) -> Option<ModalAtom> {
    let (tag, body) = match (a.tag, &a.body) {
        (Tag::Pr | Tag::Pr1 | Tag::Pr2, Bd::Nec(i, b)) => (a.tag, b.clone().neg().pos(*i)),
        (Tag::Pr | Tag::Pr1 | Tag::Pr2, Bd::Pos(i, b)) => (a.tag, b.clone().neg().nec(*i)),
        (Tag::Pr, b) => (Tag::Pr, b.clone().neg()),
        (Tag::B, b) if nelson => (Tag::Pl, b.clone().neg()),
        (Tag::B, b) => (Tag::B, b.clone().neg()),
        (Tag::Pl, b) => (Tag::B, b.clone().neg()),
        _ => return None,
    };
    Some(ModalAtom { tag, body })
}

fn negated_atom(a: &ModalAtom, nelson: bool) -> Fm {
    match atom_neg(a, nelson) {
        Some(d) => Fm::Atom(d),
        None => Fm::Atom(a.clone()).neg(),
    }
}

/// Pushes outer `¬` through the Ł² connectives and into modal atoms:
/// `¬¬α ⇝ α`, `¬∼α ⇝ ∼¬α`, `¬(α→β) ⇝ ∼(¬β→¬α)`, `¬Δα ⇝ ∼Δ∼¬α`, and
/// `¬Prφ ⇝ Pr¬φ` (`¬Pr□φ ⇝ Pr◇¬φ` over S5, `¬Bφ ⇝ B¬φ` for belief).
/// Outer variables keep their `¬`.
pub fn neg_push(f: &Fm) -> Fm {
    fn go(f: &Fm, neg: bool) -> Fm {
        match f {
            Fm::Var(_) => {
                if neg {
                    f.clone().neg()
                } else {
                    f.clone()
                }
            }
            Fm::Atom(a) => {
                if neg {
                    negated_atom(a, false)
                } else {
                    f.clone()
                }
            }
            Fm::Neg(a) => go(a, !neg),
            Fm::Tilde(a) => go(a, neg).tilde(),
            Fm::Delta(a) if neg => go(a, true).tilde().delta().tilde(),
            Fm::Delta(a) => go(a, false).delta(),
            Fm::Imp(a, b) if neg => go(b, true).imp(go(a, true)).tilde(),
            Fm::Imp(a, b) => go(a, false).imp(go(b, false)),
            Fm::NTilde(a) => go(a, neg).ntilde(),
            Fm::NImp(a, b) => go(a, neg).nimp(go(b, neg)),
            Fm::And(a, b) => go(a, neg).nand(go(b, neg)),
        }
    }
    go(f, false)
}

/// NŁ counterpart of [`neg_push`]: the result has the same first
/// coordinate as the input on every model.
pub fn neg_push_nluk(f: &Fm) -> Fm {
    fn pos(f: &Fm) -> Fm {
        match f {
            Fm::Var(_) | Fm::Atom(_) => f.clone(),
            Fm::Neg(a) => neg(a),
            Fm::NTilde(a) => pos(a).ntilde(),
            Fm::And(a, b) => pos(a).nand(pos(b)),
            Fm::NImp(a, b) => pos(a).nimp(pos(b)),
            Fm::Tilde(a) => pos(a).tilde(),
            Fm::Delta(a) => pos(a).delta(),
            Fm::Imp(a, b) => pos(a).imp(pos(b)),
        }
    }
    fn neg(f: &Fm) -> Fm {
        match f {
            Fm::Var(_) => f.clone().neg(),
            Fm::Atom(a) => negated_atom(a, true),
            Fm::Neg(a) => pos(a),
            Fm::NTilde(a) => pos(a),
            Fm::And(a, b) => {
                let nb = neg(b);
                neg(a).nimp(nb.clone()).nimp(nb)
            }
            Fm::NImp(a, b) => pos(a).nimp(neg(b).ntilde()).ntilde(),
            Fm::Tilde(_) | Fm::Delta(_) | Fm::Imp(..) => f.clone().neg(),
        }
    }
    pos(f)
}

/// Logic-appropriate ¬ elimination.
pub fn normalize(logic: LogicId, f: &Fm) -> Fm {
    if logic.nelson() {
        neg_push_nluk(f)
    } else {
        neg_push(f)
    }
}

fn require_neg_free(f: &Fm) -> TResult<()> {
    if f.has_outer_neg() {
        Err(TranslateError::OuterNeg(f.to_string()))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------- Pr ↔ 4Pr

/// `(Prφ)^4 = Blφ ⊕ Cfφ`, homomorphic elsewhere.
pub fn to_four(f: &Fm) -> TResult<Fm> {
    require_neg_free(f)?;
    let mut bad = None;
    let out = f.map_atoms(&mut |a| {
        if a.tag != Tag::Pr {
            bad = Some(a.tag.keyword().to_string());
        }
        atom(Tag::Bl, a.body.clone()).oplus(atom(Tag::Cf, a.body.clone()))
    });
    match bad {
        Some(t) => Err(TranslateError::Foreign(t, "Pr")),
        None => Ok(out),
    }
}

/// `β^±`: each 4Pr atom rewritten with `Pr` over the four-cell decomposition.
pub fn to_pm(f: &Fm) -> TResult<Fm> {
    let mut bad = None;
    let out = f.map_atoms(&mut |a| {
        let phi = a.body.clone();
        let conflict = || atom(Tag::Pr, phi.clone().and(phi.clone().neg()));
        match a.tag {
            Tag::Bl => atom(Tag::Pr, phi.clone()).ominus(conflict()),
            Tag::Cf => conflict(),
            Tag::Uc => atom(Tag::Pr, phi.clone().or(phi.clone().neg())).tilde(),
            Tag::Db => atom(Tag::Pr, phi.clone().neg()).ominus(conflict()),
            t => {
                bad = Some(t.keyword().to_string());
                Fm::Atom(a.clone())
            }
        }
    });
    match bad {
        Some(t) => Err(TranslateError::Foreign(t, "4Pr")),
        None => Ok(out),
    }
}

// ---------------------------------------------------------------- ¬ removal

pub fn primed(p: &str) -> String {
    format!("{p}{RESERVED_SUFFIX}")
}

/// NNF, then every `¬p` becomes the fresh variable `p__n`.
pub fn star_body(b: &Bd) -> Bd {
    fn go(b: &Bd) -> Bd {
        match b {
            Bd::Var(_) => b.clone(),
            Bd::Neg(a) => match &**a {
                Bd::Var(p) => Bd::Var(primed(p)),
                _ => unreachable!("nnf leaves negation on variables only"),
            },
            Bd::And(a, c) => go(a).and(go(c)),
            Bd::Or(a, c) => go(a).or(go(c)),
            Bd::Nec(i, a) => go(a).nec(*i),
            Bd::Pos(i, a) => go(a).pos(*i),
        }
    }
    go(&nnf(b))
}

pub fn star_neg_removal(f: &Fm) -> TResult<Fm> {
    require_neg_free(f)?;
    Ok(f.map_atoms(&mut |a| atom(a.tag, star_body(&a.body))))
}

// ---------------------------------------------------------------- belief

/// `α^⊞`: `Bφ ↦ Pr□φ`, homomorphic.
pub fn boxplus(f: &Fm) -> TResult<Fm> {
    require_neg_free(f)?;
    bel_atoms_only(f)?;
    Ok(f.map_atoms(&mut |a| atom(Tag::Pr, a.body.clone().nec(0))))
}

/// `α^⊟`: `Bφ ↦ Pr□¬φ`, `(Δβ)^⊟ = ∼Δ∼β^⊟`, `(β→γ)^⊟ = γ^⊟ ⊖ β^⊟`.
pub fn boxminus(f: &Fm) -> TResult<Fm> {
    require_neg_free(f)?;
    bel_atoms_only(f)?;
    fn go(f: &Fm) -> Fm {
        match f {
            Fm::Atom(a) => atom(Tag::Pr, a.body.clone().neg().nec(0)),
            Fm::Tilde(a) => go(a).tilde(),
            Fm::Delta(a) => go(a).tilde().delta().tilde(),
            Fm::Imp(a, b) => go(b).ominus(go(a)),
            _ => unreachable!("checked by bel_atoms_only"),
        }
    }
    Ok(go(f))
}

fn bel_atoms_only(f: &Fm) -> TResult<()> {
    match f {
        Fm::Atom(a) if a.tag == Tag::B && a.body.is_modal_free() => Ok(()),
        Fm::Atom(a) => Err(TranslateError::Foreign(a.to_string(), "Bel")),
        Fm::Tilde(a) | Fm::Delta(a) => bel_atoms_only(a),
        Fm::Imp(a, b) => {
            bel_atoms_only(a)?;
            bel_atoms_only(b)
        }
        other => Err(TranslateError::Foreign(other.to_string(), "Bel")),
    }
}

/// `Bφ ↦ Pr1□1φ`, `Plφ ↦ Pr2◇2φ`.
pub fn box_dia(f: &Fm) -> TResult<Fm> {
    require_neg_free(f)?;
    let mut bad = None;
    let out = f.map_atoms(&mut |a| match a.tag {
        Tag::B => atom(Tag::Pr1, a.body.clone().nec(1)),
        Tag::Pl => atom(Tag::Pr2, a.body.clone().pos(2)),
        t => {
            bad = Some(t.keyword().to_string());
            Fm::Atom(a.clone())
        }
    });
    match bad {
        Some(t) => Err(TranslateError::Foreign(t, "Bel")),
        None => Ok(out),
    }
}

pub fn b_to_pr(f: &Fm) -> Fm {
    f.map_atoms(&mut |a| {
        let tag = if a.tag == Tag::B { Tag::Pr } else { a.tag };
        atom(tag, a.body.clone())
    })
}

// ---------------------------------------------------------------- lengths

pub fn neg_push_envelope(l: usize) -> usize {
    3 * l + 3
}

pub fn four_envelope(l: usize) -> usize {
    3 * l + 8
}

pub fn pm_envelope(l: usize) -> usize {
    4 * l + 16
}

/// Checks all three envelopes on a Pr formula and on `β`; returns the
/// first violation.
pub fn check_length_envelopes(alpha: &Fm, beta: &Fm) -> Result<(), String> {
    let la = fm_len(alpha);
    let pushed = neg_push(alpha);
    let lp = fm_len(&pushed);
    if lp > neg_push_envelope(la) {
        return Err(format!("ℓ(α^¬)={lp} > 3·{la}+3"));
    }
    let four = to_four(&pushed).map_err(|e| e.to_string())?;
    let l4 = fm_len(&four);
    if l4 > four_envelope(lp) {
        return Err(format!("ℓ((α^¬)^4)={l4} > 3·{lp}+8"));
    }
    let lb = fm_len(beta);
    let pm = to_pm(beta).map_err(|e| e.to_string())?;
    let lpm = fm_len(&pm);
    if lpm > pm_envelope(lb) {
        return Err(format!("ℓ(β^±)={lpm} > 4·{lb}+16"));
    }
    Ok(())
}

/// Inner-formula length of a starred body never exceeds twice the input.
pub fn star_growth_ok(b: &Bd) -> bool {
    bd_len(&star_body(b)) <= 2 * bd_len(b)
}

// ---------------------------------------------------------------- dispatcher

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    NegPush,
    Star,
    Four,
    Pm,
    BoxPlusMinus,
    BoxDia,
    BToPr,
}

impl Transform {
    pub fn name(self) -> &'static str {
        match self {
            Transform::NegPush => "neg-push",
            Transform::Star => "star",
            Transform::Four => "four",
            Transform::Pm => "pm",
            Transform::BoxPlusMinus => "boxplus-boxminus",
            Transform::BoxDia => "box-dia",
            Transform::BToPr => "b-to-pr",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Translation {
    pub source: LogicId,
    pub target: LogicId,
    pub transform: Transform,
}

impl fmt::Display for Translation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} ({})", self.source.name(), self.target.name(), self.transform.name())
    }
}

/// The transform used for `from → to`; same-logic pairs mean ¬ elimination.
pub fn translation(from: LogicId, to: LogicId, star: bool) -> TResult<Translation> {
    use LogicId::*;
    let transform = match (from, to) {
        (a, b) if a == b && star && matches!(a, PrLuk2 | ProbS5 | ProbNLukS5) => Transform::Star,
        (a, b) if a == b => Transform::NegPush,
        (PrLuk2, FourPr) => Transform::Four,
        (FourPr, PrLuk2) => Transform::Pm,
        (BelLuk2, ProbS5) => Transform::BoxPlusMinus,
        (BelNLuk, ProbNLukS5) => Transform::BoxDia,
        (BelLuk2, PrLuk2) => Transform::BToPr,
        _ => return Err(TranslateError::Unsupported(from.name(), to.name())),
    };
    Ok(Translation { source: from, target: to, transform })
}

/// Runs a translation (normalizing first where required); the result is a
/// list of labelled formulas, two for `⊞/⊟`.
pub fn apply(t: Translation, f: &Fm) -> TResult<Vec<(&'static str, Fm)>> {
    let norm = || normalize(t.source, f);
    Ok(match t.transform {
        Transform::NegPush => vec![("", norm())],
        Transform::Star => vec![("", star_neg_removal(&norm())?)],
        Transform::Four => vec![("", to_four(&norm())?)],
        Transform::Pm => vec![("", to_pm(f)?)],
        Transform::BoxPlusMinus => {
            let n = norm();
            vec![("boxplus", boxplus(&n)?), ("boxminus", boxminus(&n)?)]
        }
        Transform::BoxDia => vec![("", box_dia(&norm())?)],
        Transform::BToPr => vec![("", b_to_pr(f))],
    })
}
