//! The standard ŁΔ algebra on [0,1] ∩ ℚ and the paired valuations of
//! Ł²(Δ,→) and NŁ.

use crate::rat::{one, zero, Rat};
use crate::syntax::Fm;
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LukOp {
    Tilde,
    Delta,
    And,
    Or,
    Imp,
    Odot,
    Oplus,
    Ominus,
}

pub fn tilde(a: &Rat) -> Rat {
    one() - a
}

pub fn delta(a: &Rat) -> Rat {
    if *a == one() {
        one()
    } else {
        zero()
    }
}

pub fn imp(a: &Rat, b: &Rat) -> Rat {
    let v = one() - a + b;
    if v > one() {
        one()
    } else {
        v
    }
}

pub fn odot(a: &Rat, b: &Rat) -> Rat {
    let v = a + b - one();
    if v < zero() {
        zero()
    } else {
        v
    }
}

pub fn oplus(a: &Rat, b: &Rat) -> Rat {
    let v = a + b;
    if v > one() {
        one()
    } else {
        v
    }
}

pub fn ominus(a: &Rat, b: &Rat) -> Rat {
    let v = a - b;
    if v < zero() {
        zero()
    } else {
        v
    }
}

pub fn min(a: &Rat, b: &Rat) -> Rat {
    a.min(b).clone()
}

pub fn max(a: &Rat, b: &Rat) -> Rat {
    a.max(b).clone()
}

/// `b` is ignored by the unary operations.
pub fn luk_op(op: LukOp, a: &Rat, b: &Rat) -> Rat {
    match op {
        LukOp::Tilde => tilde(a),
        LukOp::Delta => delta(a),
        LukOp::And => min(a, b),
        LukOp::Or => max(a, b),
        LukOp::Imp => imp(a, b),
        LukOp::Odot => odot(a, b),
        LukOp::Oplus => oplus(a, b),
        LukOp::Ominus => ominus(a, b),
    }
}

/// `(v1, v2)`: support of truth and support of falsity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub t: Rat,
    pub f: Rat,
}

impl Pair {
    pub fn new(t: Rat, f: Rat) -> Pair {
        Pair { t, f }
    }

    pub fn designated(&self) -> bool {
        self.t == one() && self.f.is_zero()
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", crate::rat::Show(&self.t), crate::rat::Show(&self.f))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unassigned variable `{0}`")]
    Unassigned(String),
    #[error("connective not interpreted here: {0}")]
    Connective(String),
    #[error("{0}")]
    Other(String),
}

/// Single-valued ŁΔ evaluation; leaves (variables, modal atoms) come from `leaf`.
pub fn eval_single(f: &Fm, leaf: &mut dyn FnMut(&Fm) -> Result<Rat, EvalError>) -> Result<Rat, EvalError> {
    Ok(match f {
        Fm::Var(_) | Fm::Atom(_) => leaf(f)?,
        Fm::Tilde(a) => tilde(&eval_single(a, leaf)?),
        Fm::Delta(a) => delta(&eval_single(a, leaf)?),
        Fm::Imp(a, b) => {
            let x = eval_single(a, leaf)?;
            imp(&x, &eval_single(b, leaf)?)
        }
        other => return Err(EvalError::Connective(crate::syntax::print_primitive(other))),
    })
}

/// Paired evaluation. Łukasiewicz connectives follow the Ł²(Δ,→) clauses,
/// `NTilde`/`NImp`/`And` the NŁ clauses; `Neg` swaps the components in both.
pub fn eval_pair(f: &Fm, leaf: &mut dyn FnMut(&Fm) -> Result<Pair, EvalError>) -> Result<Pair, EvalError> {
    Ok(match f {
        Fm::Var(_) | Fm::Atom(_) => leaf(f)?,
        Fm::Neg(a) => {
            let v = eval_pair(a, leaf)?;
            Pair::new(v.f, v.t)
        }
        Fm::Tilde(a) => {
            let v = eval_pair(a, leaf)?;
            Pair::new(tilde(&v.t), tilde(&v.f))
        }
        Fm::Delta(a) => {
            let v = eval_pair(a, leaf)?;
            Pair::new(delta(&v.t), tilde(&delta(&tilde(&v.f))))
        }
        Fm::Imp(a, b) => {
            let x = eval_pair(a, leaf)?;
            let y = eval_pair(b, leaf)?;
            Pair::new(imp(&x.t, &y.t), ominus(&y.f, &x.f))
        }
        Fm::NTilde(a) => {
            let v = eval_pair(a, leaf)?;
            Pair::new(tilde(&v.t), v.t)
        }
        Fm::NImp(a, b) => {
            let x = eval_pair(a, leaf)?;
            let y = eval_pair(b, leaf)?;
            Pair::new(imp(&x.t, &y.t), odot(&x.t, &y.f))
        }
        Fm::And(a, b) => {
            let x = eval_pair(a, leaf)?;
            let y = eval_pair(b, leaf)?;
            Pair::new(min(&x.t, &y.t), max(&x.f, &y.f))
        }
    })
}

fn lookup<T: Clone>(v: &BTreeMap<String, T>, f: &Fm) -> Result<T, EvalError> {
    match f {
        Fm::Var(p) => v.get(p).cloned().ok_or_else(|| EvalError::Unassigned(p.clone())),
        Fm::Atom(a) => Err(EvalError::Other(format!("modal atom `{a}` in a propositional formula"))),
        _ => unreachable!(),
    }
}

pub fn eval_luk_delta(v: &BTreeMap<String, Rat>, f: &Fm) -> Result<Rat, EvalError> {
    eval_single(f, &mut |leaf| lookup(v, leaf))
}

pub fn eval_luk2(v: &BTreeMap<String, Pair>, f: &Fm) -> Result<Pair, EvalError> {
    if contains(f, |g| matches!(g, Fm::NTilde(_) | Fm::NImp(..) | Fm::And(..))) {
        return Err(EvalError::Connective("NŁ connective in Ł²(Δ,→)".into()));
    }
    eval_pair(f, &mut |leaf| lookup(v, leaf))
}

pub fn eval_nluk(v: &BTreeMap<String, Pair>, f: &Fm) -> Result<Pair, EvalError> {
    if contains(f, |g| matches!(g, Fm::Tilde(_) | Fm::Imp(..) | Fm::Delta(_))) {
        return Err(EvalError::Connective("Ł²(Δ,→) connective in NŁ".into()));
    }
    eval_pair(f, &mut |leaf| lookup(v, leaf))
}

fn contains(f: &Fm, p: fn(&Fm) -> bool) -> bool {
    if p(f) {
        return true;
    }
    match f {
        Fm::Var(_) | Fm::Atom(_) => false,
        Fm::Neg(a) | Fm::Tilde(a) | Fm::Delta(a) | Fm::NTilde(a) => contains(a, p),
        Fm::Imp(a, b) | Fm::NImp(a, b) | Fm::And(a, b) => contains(a, p) || contains(b, p),
    }
}
