//! Independent oracles shared by the integration tests.
//!
//! The evaluators here are written against the connective tables and BD
//! clauses directly and never call into the library's evaluators.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use twolayer::bd::{BDModel, FourValue, WSet};
use twolayer::kripke::KripkeModel;
use twolayer::linarith::{is_feasible, Constraint, Lin};
use twolayer::measures::Measure;
use twolayer::rat::{frac, one, zero, Rat};
use twolayer::syntax::{pvar, Bd, Fm, LogicId, ModalAtom, Tag};
use twolayer::two_layered::{Structure, TLModel};
use twolayer::tableau::{branch_to_constraints, for_each_branch_pruned, Arena, Branch, Calculus, Dir};

pub const STEP: i32 = 8;

/// A pair in eighths; single-valued logics use only `.0`.
pub type G = (i32, i32);

fn not(a: i32) -> i32 {
    STEP - a
}
fn imp(a: i32, b: i32) -> i32 {
    STEP.min(STEP - a + b)
}
fn odot(a: i32, b: i32) -> i32 {
    0.max(a + b - STEP)
}
fn ominus(a: i32, b: i32) -> i32 {
    0.max(a - b)
}
fn delta(a: i32) -> i32 {
    if a == STEP {
        STEP
    } else {
        0
    }
}

pub fn grid_eval(f: &Fm, v: &dyn Fn(&str) -> G) -> G {
    match f {
        Fm::Var(p) => v(p),
        Fm::Neg(a) => {
            let (t, u) = grid_eval(a, v);
            (u, t)
        }
        Fm::Tilde(a) => {
            let (t, u) = grid_eval(a, v);
            (not(t), not(u))
        }
        Fm::Delta(a) => {
            let (t, u) = grid_eval(a, v);
            (delta(t), if u > 0 { STEP } else { 0 })
        }
        Fm::Imp(a, b) => {
            let (x, y) = (grid_eval(a, v), grid_eval(b, v));
            (imp(x.0, y.0), ominus(y.1, x.1))
        }
        Fm::NTilde(a) => {
            let t = grid_eval(a, v).0;
            (not(t), t)
        }
        Fm::NImp(a, b) => {
            let (x, y) = (grid_eval(a, v), grid_eval(b, v));
            (imp(x.0, y.0), odot(x.0, y.1))
        }
        Fm::And(a, b) => {
            let (x, y) = (grid_eval(a, v), grid_eval(b, v));
            (x.0.min(y.0), x.1.max(y.1))
        }
        Fm::Atom(_) => panic!("grid oracle is propositional"),
    }
}

pub fn grid_designated(logic: LogicId, g: G) -> bool {
    match logic {
        LogicId::Luk2Delta => g == (STEP, 0),
        _ => g.0 == STEP,
    }
}

/// First grid valuation (in enumeration order) at which `f` is not designated.
pub fn grid_countermodel(logic: LogicId, f: &Fm) -> Option<BTreeMap<String, G>> {
    let vars: Vec<String> = f.pvars().into_iter().collect();
    let per_var: Vec<G> = if logic == LogicId::LukDelta {
        (0..=STEP).map(|t| (t, 0)).collect()
    } else {
        (0..=STEP).flat_map(|t| (0..=STEP).map(move |u| (t, u))).collect()
    };
    let k = per_var.len();
    let total = k.pow(vars.len() as u32);
    for mut idx in 0..total {
        let mut val = BTreeMap::new();
        for p in &vars {
            val.insert(p.clone(), per_var[idx % k]);
            idx /= k;
        }
        if !grid_designated(logic, grid_eval(f, &|p| val[p])) {
            return Some(val);
        }
    }
    None
}

pub fn calc_of(logic: LogicId) -> Calculus {
    if logic.nelson() {
        Calculus::NLuk
    } else {
        Calculus::Luk2
    }
}

fn eighths(n: i32) -> Rat {
    frac(n as i64, STEP as i64)
}

/// Whether some complete tableau branch for the failure of `f` stays
/// feasible once the leaves are pinned to `val`.
pub fn branch_matches(logic: LogicId, f: &Fm, val: &BTreeMap<String, G>) -> bool {
    let value = grid_eval(f, &|p| val[p]);
    let mut arena = Arena::new();
    let root_node = arena.intern(f).expect("intern");
    let mut b = Branch::new();
    let c = b.fresh("c");
    if value.0 < STEP {
        b.constrain(Constraint::lt(Lin::var(c), Lin::one()));
        b.add_entry(&arena, root_node, 1, Dir::Le, Lin::var(c));
    } else {
        b.constrain(Constraint::gt(Lin::var(c), Lin::zero()));
        b.add_entry(&arena, root_node, 2, Dir::Ge, Lin::var(c));
    }
    let sides: &[u8] = if logic == LogicId::LukDelta { &[1] } else { &[1, 2] };
    for (p, g) in val {
        let leaf = arena.intern(&pvar(p)).expect("intern");
        for &s in sides {
            let x = Lin::konst(eighths(if s == 1 { g.0 } else { g.1 }));
            b.add_entry(&arena, leaf, s, Dir::Le, x.clone());
            b.add_entry(&arena, leaf, s, Dir::Ge, x);
        }
    }
    let mut hit = false;
    let feasible = |b: &Branch| is_feasible(&branch_to_constraints(b, &arena).0);
    let _ = for_each_branch_pruned(b, &arena, calc_of(logic), &mut |b| !feasible(b), &mut |b| {
        if feasible(b) {
            hit = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .expect("tableau");
    hit
}

/// All formulas with exactly `n` primitive connectives over `p`, `q`, by size.
pub fn enumerate_by_size(logic: LogicId, max: usize) -> Vec<Vec<Fm>> {
    let mut by: Vec<Vec<Fm>> = vec![vec![pvar("p"), pvar("q")]];
    for n in 1..=max {
        let mut out = Vec::new();
        for a in &by[n - 1] {
            unary(logic, a, &mut |g| out.push(g));
        }
        for i in 0..n {
            for a in &by[i] {
                for b in &by[n - 1 - i] {
                    binary(logic, a, b, &mut |g| out.push(g));
                }
            }
        }
        by.push(out);
    }
    by
}

pub fn unary(logic: LogicId, a: &Fm, out: &mut dyn FnMut(Fm)) {
    match logic {
        LogicId::LukDelta => {
            out(a.clone().tilde());
            out(a.clone().delta());
        }
        LogicId::Luk2Delta => {
            out(a.clone().neg());
            out(a.clone().tilde());
            out(a.clone().delta());
        }
        _ => {
            out(a.clone().neg());
            out(a.clone().ntilde());
        }
    }
}

pub fn binary(logic: LogicId, a: &Fm, b: &Fm, out: &mut dyn FnMut(Fm)) {
    if logic.nelson() {
        out(a.clone().nimp(b.clone()));
        out(a.clone().nand(b.clone()));
    } else {
        out(a.clone().imp(b.clone()));
    }
}

/// Whether `p` occurs before `q` (or `q` does not occur): one representative
/// per renaming class.
pub fn p_first(f: &Fm) -> bool {
    fn first(f: &Fm) -> Option<&str> {
        match f {
            Fm::Var(p) => Some(p),
            Fm::Atom(_) => None,
            Fm::Neg(a) | Fm::Tilde(a) | Fm::Delta(a) | Fm::NTilde(a) => first(a),
            Fm::Imp(a, b) | Fm::NImp(a, b) | Fm::And(a, b) => first(a).or_else(|| first(b)),
        }
    }
    first(f) != Some("q")
}

// ---------------------------------------------------------------- measured models

/// `(⁺, ⁻)` of a modal-free body at world `w`, straight from the BD clauses.
pub fn bd_at(m: &BDModel, f: &Bd, w: usize) -> (bool, bool) {
    match f {
        Bd::Var(p) => match m.value(p, w) {
            FourValue::T => (true, false),
            FourValue::B => (true, true),
            FourValue::N => (false, false),
            FourValue::F => (false, true),
        },
        Bd::Neg(a) => {
            let (t, u) = bd_at(m, a, w);
            (u, t)
        }
        Bd::And(a, b) => {
            let (x, y) = (bd_at(m, a, w), bd_at(m, b, w));
            (x.0 && y.0, x.1 || y.1)
        }
        Bd::Or(a, b) => {
            let (x, y) = (bd_at(m, a, w), bd_at(m, b, w));
            (x.0 || y.0, x.1 && y.1)
        }
        Bd::Nec(..) | Bd::Pos(..) => panic!("modal body in a measured model"),
    }
}

/// `(⁺, ⁻)` at `w` with S5 clauses over relation 0.
pub fn modal_at(k: &KripkeModel, f: &Bd, w: usize) -> (bool, bool) {
    let block = |w: usize| -> Vec<usize> { k.partitions[0].iter().find(|b| b.contains(w)).unwrap().iter().collect() };
    match f {
        Bd::Var(_) => bd_at(&k.base, f, w),
        Bd::Neg(a) => {
            let (t, u) = modal_at(k, a, w);
            (u, t)
        }
        Bd::And(a, b) => {
            let (x, y) = (modal_at(k, a, w), modal_at(k, b, w));
            (x.0 && y.0, x.1 || y.1)
        }
        Bd::Or(a, b) => {
            let (x, y) = (modal_at(k, a, w), modal_at(k, b, w));
            (x.0 || y.0, x.1 && y.1)
        }
        Bd::Nec(_, a) => {
            let vs: Vec<_> = block(w).into_iter().map(|v| modal_at(k, a, v)).collect();
            (vs.iter().all(|v| v.0), vs.iter().any(|v| v.1))
        }
        Bd::Pos(_, a) => {
            let vs: Vec<_> = block(w).into_iter().map(|v| modal_at(k, a, v)).collect();
            (vs.iter().any(|v| v.0), vs.iter().all(|v| v.1))
        }
    }
}

pub fn set_of(n: usize, pred: impl Fn(usize) -> bool) -> WSet {
    WSet::from_iter(n, (0..n).filter(|&w| pred(w)))
}

/// Set function of a measure, recomputed from its defining data.
pub fn measure_of(mu: &Measure, x: &WSet) -> Rat {
    match mu {
        Measure::Atoms(w) => x.iter().fold(zero(), |a, i| a + &w[i]),
        Measure::Subsets { table, .. } => table[x].clone(),
        Measure::Belief(m) => m.masses.iter().filter(|(s, _)| s.is_subset(x)).fold(zero(), |a, (_, v)| a + v),
        Measure::Plausibility(m) => {
            m.masses.iter().filter(|(s, _)| !s.inter(x).is_empty()).fold(zero(), |a, (_, v)| a + v)
        }
    }
}

fn r_imp(a: &Rat, b: &Rat) -> Rat {
    let v = one() - a + b;
    if v > one() {
        one()
    } else {
        v
    }
}

fn r_ominus(a: &Rat, b: &Rat) -> Rat {
    let v = a - b;
    if v < zero() {
        zero()
    } else {
        v
    }
}

fn r_odot(a: &Rat, b: &Rat) -> Rat {
    r_ominus(&(a + b), &one())
}

fn r_delta(a: &Rat) -> Rat {
    if *a == one() {
        one()
    } else {
        zero()
    }
}

/// Outer pair semantics on exact rationals with leaves from `atom`.
pub fn pair_eval(f: &Fm, atom: &dyn Fn(&ModalAtom) -> (Rat, Rat)) -> (Rat, Rat) {
    let go = |g: &Fm| pair_eval(g, atom);
    match f {
        Fm::Atom(a) => atom(a),
        Fm::Var(_) => panic!("propositional variable in a two-layered formula"),
        Fm::Neg(a) => {
            let (t, u) = go(a);
            (u, t)
        }
        Fm::Tilde(a) => {
            let (t, u) = go(a);
            (one() - t, one() - u)
        }
        Fm::Delta(a) => {
            let (t, u) = go(a);
            (r_delta(&t), if u > zero() { one() } else { zero() })
        }
        Fm::Imp(a, b) => {
            let (x, y) = (go(a), go(b));
            (r_imp(&x.0, &y.0), r_ominus(&y.1, &x.1))
        }
        Fm::NTilde(a) => {
            let t = go(a).0;
            (one() - &t, t)
        }
        Fm::NImp(a, b) => {
            let (x, y) = (go(a), go(b));
            (r_imp(&x.0, &y.0), r_odot(&x.0, &y.1))
        }
        Fm::And(a, b) => {
            let (x, y) = (go(a), go(b));
            (x.0.min(y.0), x.1.max(y.1))
        }
    }
}

/// Value of `f` on a measured model; single-valued logics report `(v, 0)`.
pub fn direct_value(m: &TLModel, f: &Fm) -> (Rat, Rat) {
    let Structure::Measured { base, measures } = &m.structure else { panic!("measured model expected") };
    let n = base.n();
    let atom = |a: &ModalAtom| -> (Rat, Rat) {
        let at: Vec<(bool, bool)> = (0..n).map(|w| bd_at(base, &a.body, w)).collect();
        let pos = set_of(n, |w| at[w].0);
        let neg = set_of(n, |w| at[w].1);
        let mu = &measures[0];
        match a.tag {
            Tag::Bl => (measure_of(mu, &set_of(n, |w| at[w] == (true, false))), zero()),
            Tag::Db => (measure_of(mu, &set_of(n, |w| at[w] == (false, true))), zero()),
            Tag::Cf => (measure_of(mu, &set_of(n, |w| at[w] == (true, true))), zero()),
            Tag::Uc => (measure_of(mu, &set_of(n, |w| at[w] == (false, false))), zero()),
            Tag::Pl if m.logic == LogicId::BelNLuk => (measure_of(&measures[1], &pos), measure_of(mu, &neg)),
            Tag::B if m.logic == LogicId::BelNLuk => (measure_of(mu, &pos), measure_of(&measures[1], &neg)),
            _ => (measure_of(mu, &pos), measure_of(mu, &neg)),
        }
    };
    pair_eval(f, &atom)
}

/// Value of `f` on a single-relation Kripke model.
pub fn kripke_value(k: &KripkeModel, f: &Fm) -> (Rat, Rat) {
    let n = k.n();
    let atom = |a: &ModalAtom| -> (Rat, Rat) {
        let at: Vec<(bool, bool)> = (0..n).map(|w| modal_at(k, &a.body, w)).collect();
        let pi = |x: WSet| x.iter().fold(zero(), |s, i| s + &k.measures[0][i]);
        (pi(set_of(n, |w| at[w].0)), pi(set_of(n, |w| at[w].1)))
    };
    pair_eval(f, &atom)
}

pub fn designated_pair(logic: LogicId, v: &(Rat, Rat)) -> bool {
    match logic {
        LogicId::PrLuk2 | LogicId::ProbS5 | LogicId::Luk2Delta | LogicId::BelLuk2 => v.0 == one() && v.1 == zero(),
        _ => v.0 == one(),
    }
}
