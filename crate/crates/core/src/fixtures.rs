//! Small fixed models shared by unit tests, acceptance checks and the CLI.

use crate::bd::{BDModel, FourValue, WSet};
use crate::measures::Measure;
use crate::rat::{frac, one, zero};
use crate::syntax::LogicId;
use crate::two_layered::{Structure, TLModel};
use std::collections::HashMap;

fn model(worlds: &[&str], vals: &[(&str, usize, FourValue)]) -> BDModel {
    let mut m = BDModel::new(worlds.iter().map(|w| w.to_string()).collect());
    for (p, w, v) in vals {
        m.set(p, *w, *v);
    }
    m
}

/// Two worlds where `p` is neither true nor false, with the non-additive
/// `μ({u1}) = μ({u2}) = 1/3`, `μ(W) = 1`, `μ(∅) = 0`.
pub fn neither_pair() -> (BDModel, Measure) {
    let m = model(&["u1", "u2"], &[("p", 0, FourValue::N), ("p", 1, FourValue::N)]);
    let table: HashMap<WSet, _> = [(0u64, zero()), (1, frac(1, 3)), (2, frac(1, 3)), (3, one())]
        .into_iter()
        .map(|(k, v)| (WSet::from_mask(2, k), v))
        .collect();
    (m, Measure::subsets(2, table).expect("values in [0,1]"))
}

/// `W = {w1: p⁺, w2: p±}` with the uniform `μ ≡ 1/2`, and
/// `W' = {w1': p⁺, w2': p±, w3': p N}` with atom weights `0, 1/2, 1/2`.
pub fn agreeing_pair() -> ((BDModel, Measure), (BDModel, Measure)) {
    let w = model(&["w1", "w2"], &[("p", 0, FourValue::T), ("p", 1, FourValue::B)]);
    let mu = Measure::constant(2, frac(1, 2)).expect("small");
    let w2 = model(
        &["w1'", "w2'", "w3'"],
        &[("p", 0, FourValue::T), ("p", 1, FourValue::B), ("p", 2, FourValue::N)],
    );
    let pi = Measure::atoms(vec![zero(), frac(1, 2), frac(1, 2)]).expect("probability");
    ((w, mu), (w2, pi))
}

/// `w1: p⁺ q±`, `w2: p N q⁻`, `w3: p⁻ q N` with `μ = 1/3, 1/2, 1/6`, as a
/// model of `pr-luk2` or `4pr`.
pub fn three_worlds(logic: LogicId) -> TLModel {
    let base = model(
        &["w1", "w2", "w3"],
        &[
            ("p", 0, FourValue::T),
            ("q", 0, FourValue::B),
            ("p", 1, FourValue::N),
            ("q", 1, FourValue::F),
            ("p", 2, FourValue::F),
            ("q", 2, FourValue::N),
        ],
    );
    let mu = Measure::atoms(vec![frac(1, 3), frac(1, 2), frac(1, 6)]).expect("probability");
    TLModel::new(logic, Structure::Measured { base, measures: vec![mu] }).expect("three_worlds is a legal model")
}
