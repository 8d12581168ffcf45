//! Measures on finite sets of worlds and their axiom auditors.

use crate::bd::{cells, definable_extent_closure, BDModel, ExtentPair, WSet};
use crate::rat::{one, parse_rat, show, zero, Rat};
use num::{Signed, Zero};
use serde_json::{json, Map, Value};
use std::collections::HashMap;
use std::fmt;

/// Largest world count for which set functions are stored as full tables.
pub const TABLE_CAP: usize = 12;
/// Largest world count for which `mon` is audited over all pairs `X ⊆ Y`.
pub const PAIR_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("measure undefined on {0}")]
    Undefined(String),
    #[error("not a probability: {0}")]
    NotProbability(String),
    #[error("invalid mass function: {0}")]
    BadMass(String),
    #[error("value {0} outside [0,1]")]
    Range(String),
    #[error("{0} worlds exceed the table cap of {TABLE_CAP}")]
    TooLarge(usize),
    #[error("world count mismatch: measure over {0}, model has {1}")]
    Size(usize, usize),
    #[error("bad measure file: {0}")]
    Format(String),
}

/// Nonnegative weights on nonempty subsets summing to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mass {
    pub n: usize,
    pub masses: Vec<(WSet, Rat)>,
}

impl Mass {
    pub fn new(n: usize, masses: Vec<(WSet, Rat)>) -> Result<Mass, MeasureError> {
        let mut total = zero();
        let mut merged: Vec<(WSet, Rat)> = Vec::new();
        for (s, m) in masses {
            if m.is_negative() {
                return Err(MeasureError::BadMass(format!("negative mass {}", show(&m))));
            }
            if s.is_empty() && !m.is_zero() {
                return Err(MeasureError::BadMass("mass on the empty set".into()));
            }
            if s.iter().any(|w| w >= n) {
                return Err(MeasureError::BadMass("focal set outside the world set".into()));
            }
            total += &m;
            if m.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(t, _)| *t == s) {
                Some((_, v)) => *v += m,
                None => merged.push((s, m)),
            }
        }
        if total != one() {
            return Err(MeasureError::BadMass(format!("masses sum to {}", show(&total))));
        }
        merged.sort();
        Ok(Mass { n, masses: merged })
    }

    pub fn bel(&self, x: &WSet) -> Rat {
        self.masses.iter().filter(|(s, _)| s.is_subset(x)).fold(zero(), |a, (_, m)| a + m)
    }

    pub fn pl(&self, x: &WSet) -> Rat {
        self.masses.iter().filter(|(s, _)| !s.inter(x).is_empty()).fold(zero(), |a, (_, m)| a + m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Classical probability given by atom weights.
    Atoms(Vec<Rat>),
    /// General set function, possibly partial.
    Subsets { n: usize, table: HashMap<WSet, Rat> },
    Belief(Mass),
    Plausibility(Mass),
}

impl Measure {
    pub fn atoms(weights: Vec<Rat>) -> Result<Measure, MeasureError> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(MeasureError::NotProbability(format!("negative weight {}", show(w))));
        }
        let total = weights.iter().fold(zero(), |a, w| a + w);
        if total != one() {
            return Err(MeasureError::NotProbability(format!("weights sum to {}", show(&total))));
        }
        Ok(Measure::Atoms(weights))
    }

    pub fn uniform(n: usize) -> Measure {
        Measure::Atoms(vec![Rat::new(1.into(), (n as i64).into()); n])
    }

    pub fn subsets(n: usize, table: HashMap<WSet, Rat>) -> Result<Measure, MeasureError> {
        if n > TABLE_CAP {
            return Err(MeasureError::TooLarge(n));
        }
        if let Some(v) = table.values().find(|v| !crate::rat::in_unit(v)) {
            return Err(MeasureError::Range(show(v)));
        }
        Ok(Measure::Subsets { n, table })
    }

    /// `X ↦ c` for every `X`.
    pub fn constant(n: usize, c: Rat) -> Result<Measure, MeasureError> {
        if n > TABLE_CAP {
            return Err(MeasureError::TooLarge(n));
        }
        let table = (0..1u64 << n).map(|m| (WSet::from_mask(n, m), c.clone())).collect();
        Measure::subsets(n, table)
    }

    pub fn n(&self) -> usize {
        match self {
            Measure::Atoms(w) => w.len(),
            Measure::Subsets { n, .. } => *n,
            Measure::Belief(m) | Measure::Plausibility(m) => m.n,
        }
    }

    pub fn is_probability(&self) -> bool {
        matches!(self, Measure::Atoms(_))
    }

    pub fn of(&self, x: &WSet) -> Result<Rat, MeasureError> {
        match self {
            Measure::Atoms(w) => Ok(x.iter().filter(|&i| i < w.len()).fold(zero(), |a, i| a + &w[i])),
            Measure::Subsets { table, .. } => {
                table.get(x).cloned().ok_or_else(|| MeasureError::Undefined(format!("{x:?}")))
            }
            Measure::Belief(m) => Ok(m.bel(x)),
            Measure::Plausibility(m) => Ok(m.pl(x)),
        }
    }

    /// Full table over `2^W`.
    pub fn table(&self) -> Result<Vec<Rat>, MeasureError> {
        let n = self.n();
        if n > TABLE_CAP {
            return Err(MeasureError::TooLarge(n));
        }
        (0..1u64 << n).map(|m| self.of(&WSet::from_mask(n, m))).collect()
    }
}

pub fn bel_from_mass(m: &Mass) -> Measure {
    Measure::Belief(m.clone())
}

pub fn pl_from_mass(m: &Mass) -> Measure {
    Measure::Plausibility(m.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub axiom: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl AuditReport {
    fn ok(axiom: &str) -> AuditReport {
        AuditReport { axiom: axiom.to_string(), pass: true, witness: None }
    }

    fn fail(axiom: &str, witness: String) -> AuditReport {
        AuditReport { axiom: axiom.to_string(), pass: false, witness: Some(witness) }
    }

    pub fn to_json(&self) -> Value {
        json!({"axiom": self.axiom, "pass": self.pass, "witness": self.witness})
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<8} {}", self.axiom, if self.pass { "pass" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, "  {w}")?;
        }
        Ok(())
    }
}

/// `{w1,w2}` with the model's world names.
pub fn set_name(worlds: &[String], x: &WSet) -> String {
    let names: Vec<&str> = x.iter().map(|i| worlds.get(i).map_or("?", |s| s.as_str())).collect();
    format!("{{{}}}", names.join(","))
}

fn check_size(m: &BDModel, mu: &Measure) -> Result<(), MeasureError> {
    if m.n() != mu.n() {
        return Err(MeasureError::Size(mu.n(), m.n()));
    }
    Ok(())
}

/// Sets over which `mon` is checked: all subsets when small and total,
/// otherwise the components of the definable closure.
fn mon_sets(m: &BDModel, mu: &Measure, closure: &[ExtentPair]) -> Vec<WSet> {
    let n = m.n();
    if n <= PAIR_CAP && mu.table().is_ok() {
        return (0..1u64 << n).map(|k| WSet::from_mask(n, k)).collect();
    }
    let mut v: Vec<WSet> = closure.iter().flat_map(|e| [e.pos.clone(), e.neg.clone()]).collect();
    v.sort();
    v.dedup();
    v
}

fn audit_mon(m: &BDModel, mu: &Measure, sets: &[WSet]) -> Result<AuditReport, MeasureError> {
    let vals: Vec<Rat> = sets.iter().map(|s| mu.of(s)).collect::<Result<_, _>>()?;
    for (i, x) in sets.iter().enumerate() {
        for (j, y) in sets.iter().enumerate() {
            if x.is_subset(y) && vals[i] > vals[j] {
                return Ok(AuditReport::fail(
                    "mon",
                    format!(
                        "μ({})={} > μ({})={}",
                        set_name(&m.worlds, x),
                        show(&vals[i]),
                        set_name(&m.worlds, y),
                        show(&vals[j])
                    ),
                ));
            }
        }
    }
    Ok(AuditReport::ok("mon"))
}

/// `mon`, `neg` and `ex` of a ±-probability.
pub fn audit_pm_probability(m: &BDModel, mu: &Measure) -> Result<Vec<AuditReport>, MeasureError> {
    check_size(m, mu)?;
    let closure = definable_extent_closure(m);
    let w = &m.worlds;
    let mut out = vec![audit_mon(m, mu, &mon_sets(m, mu, &closure))?];

    let mut neg = AuditReport::ok("neg");
    for e in &closure {
        let negated = ExtentPair { pos: e.neg.clone(), neg: e.pos.clone() };
        let (a, b) = (mu.of(&e.neg)?, mu.of(&negated.pos)?);
        if a != b {
            neg = AuditReport::fail("neg", format!("μ({})={} ≠ {}", set_name(w, &e.neg), show(&a), show(&b)));
            break;
        }
    }
    out.push(neg);

    let mut ex = AuditReport::ok("ex");
    'outer: for (i, e) in closure.iter().enumerate() {
        for f in &closure[i..] {
            let (p, q) = (&e.pos, &f.pos);
            let lhs = mu.of(&p.union(q))?;
            let rhs = mu.of(p)? + mu.of(q)? - mu.of(&p.inter(q))?;
            if lhs != rhs {
                ex = AuditReport::fail(
                    "ex",
                    format!(
                        "μ({})={} ≠ μ({})+μ({})−μ({})={}",
                        set_name(w, &p.union(q)),
                        show(&lhs),
                        set_name(w, p),
                        set_name(w, q),
                        set_name(w, &p.inter(q)),
                        show(&rhs)
                    ),
                );
                break 'outer;
            }
        }
    }
    out.push(ex);
    Ok(out)
}

/// The unrestricted import–export identity on one pair of sets.
pub fn import_export(worlds: &[String], mu: &Measure, x: &WSet, y: &WSet) -> Result<AuditReport, MeasureError> {
    let lhs = mu.of(&x.union(y))?;
    let rhs = mu.of(x)? + mu.of(y)? - mu.of(&x.inter(y))?;
    Ok(if lhs == rhs {
        AuditReport::ok("IE")
    } else {
        AuditReport::fail(
            "IE",
            format!("μ({})={} ≠ {}", set_name(worlds, &x.union(y)), show(&lhs), show(&rhs)),
        )
    })
}

/// `part`, `neg`, `contr`, `BCmon`, `BCex` of a 4-probability.
pub fn audit_four_probability(m: &BDModel, mu: &Measure) -> Result<Vec<AuditReport>, MeasureError> {
    check_size(m, mu)?;
    let closure = definable_extent_closure(m);
    let all = m.all();
    let w = &m.worlds;
    let bc = |e: &ExtentPair| -> Result<Rat, MeasureError> {
        let c = cells(&all, e);
        Ok(mu.of(&c.b)? + mu.of(&c.c)?)
    };

    let mut part = AuditReport::ok("part");
    let mut neg = AuditReport::ok("neg");
    let mut contr = AuditReport::ok("contr");
    for e in &closure {
        let c = cells(&all, e);
        let total = mu.of(&c.b)? + mu.of(&c.d)? + mu.of(&c.u)? + mu.of(&c.c)?;
        if part.pass && total != one() {
            part = AuditReport::fail(
                "part",
                format!("cells of ({}, {}) sum to {}", set_name(w, &e.pos), set_name(w, &e.neg), show(&total)),
            );
        }
        let nc = cells(&all, &ExtentPair { pos: e.neg.clone(), neg: e.pos.clone() });
        if neg.pass && (mu.of(&nc.b)? != mu.of(&c.d)? || mu.of(&nc.c)? != mu.of(&c.c)?) {
            neg = AuditReport::fail("neg", format!("at ({}, {})", set_name(w, &e.pos), set_name(w, &e.neg)));
        }
        let contra = ExtentPair { pos: e.pos.inter(&e.neg), neg: e.neg.union(&e.pos) };
        let cc = cells(&all, &contra);
        let (b0, c0, c1) = (mu.of(&cc.b)?, mu.of(&cc.c)?, mu.of(&c.c)?);
        if contr.pass && (!b0.is_zero() || c0 != c1) {
            contr = AuditReport::fail(
                "contr",
                format!("μ4(b)={} μ4(c)={} vs {} at ({}, {})", show(&b0), show(&c0), show(&c1), set_name(w, &e.pos), set_name(w, &e.neg)),
            );
        }
    }

    let vals: Vec<Rat> = closure.iter().map(bc).collect::<Result<_, _>>()?;
    let mut bcmon = AuditReport::ok("BCmon");
    let mut bcex = AuditReport::ok("BCex");
    for (i, e) in closure.iter().enumerate() {
        for (j, f) in closure.iter().enumerate() {
            if bcmon.pass && e.pos.is_subset(&f.pos) && vals[i] > vals[j] {
                bcmon = AuditReport::fail(
                    "BCmon",
                    format!("{} > {} though {} ⊆ {}", show(&vals[i]), show(&vals[j]), set_name(w, &e.pos), set_name(w, &f.pos)),
                );
            }
            if bcex.pass && j >= i {
                let meet = ExtentPair { pos: e.pos.inter(&f.pos), neg: e.neg.union(&f.neg) };
                let join = ExtentPair { pos: e.pos.union(&f.pos), neg: e.neg.inter(&f.neg) };
                let lhs = &vals[i] + &vals[j];
                let rhs = bc(&meet)? + bc(&join)?;
                if lhs != rhs {
                    bcex = AuditReport::fail(
                        "BCex",
                        format!("{} ≠ {} at {} and {}", show(&lhs), show(&rhs), set_name(w, &e.pos), set_name(w, &f.pos)),
                    );
                }
            }
        }
    }
    Ok(vec![part, neg, contr, bcmon, bcex])
}

fn bit_sets(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Belief audit on a full table indexed by subset masks. Order-`k`
/// monotonicity is checked in the equivalent form
/// `Σ_{B⊆L⊆A} m(L) ≥ 0` for `B ⊆ A`, `2 ≤ |B| ≤ k`, with `m` the Möbius
/// transform; a failure is reported as the tuple `(A∖{b})_{b∈B}`.
fn audit_belief_table(worlds: &[String], t: &[Rat], n: usize, k: usize, axiom: &str, what: &str) -> AuditReport {
    let full = (1u64 << n) - 1;
    let name = |m: u64| set_name(worlds, &WSet::from_mask(n, m));
    if !t[0].is_zero() || t[full as usize] != one() {
        return AuditReport::fail(axiom, format!("{what}(∅)={}, {what}(W)={}", show(&t[0]), show(&t[full as usize])));
    }
    for x in 0..=full {
        for i in 0..n {
            let y = x | 1 << i;
            if t[x as usize] > t[y as usize] {
                return AuditReport::fail(
                    axiom,
                    format!("{what}({})={} > {what}({})={}", name(x), show(&t[x as usize]), name(y), show(&t[y as usize])),
                );
            }
        }
    }
    let mut mob = vec![zero(); 1 << n];
    for a in 0..=full {
        let mut s = a;
        let mut acc = zero();
        loop {
            let sign = (a & !s).count_ones() % 2 == 1;
            if sign {
                acc -= &t[s as usize];
            } else {
                acc += &t[s as usize];
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & a;
        }
        mob[a as usize] = acc;
    }
    for a in 0..=full {
        let mut b = a;
        loop {
            let size = b.count_ones() as usize;
            if size >= 2 && size <= k {
                let rest = a & !b;
                let mut s = rest;
                let mut sum = zero();
                loop {
                    sum += &mob[(b | s) as usize];
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & rest;
                }
                if sum.is_negative() {
                    let tuple: Vec<String> = bit_sets(n, b).iter().map(|&x| name(a & !(1 << x))).collect();
                    return AuditReport::fail(
                        axiom,
                        format!("{}-monotonicity fails on ({}) by {}", size, tuple.join(", "), show(&-sum)),
                    );
                }
            }
            if b == 0 {
                break;
            }
            b = (b - 1) & a;
        }
    }
    AuditReport::ok(axiom)
}

/// Normalization, monotonicity and `k`-monotonicity of a belief function.
pub fn audit_belief(worlds: &[String], mu: &Measure, k: usize) -> Result<AuditReport, MeasureError> {
    let t = mu.table()?;
    Ok(audit_belief_table(worlds, &t, mu.n(), k, "bel", "bel"))
}

/// Dual audit: `pl` passes iff `X ↦ 1 − pl(W∖X)` is a belief function of order `k`.
pub fn audit_plausibility(worlds: &[String], mu: &Measure, k: usize) -> Result<AuditReport, MeasureError> {
    let t = mu.table()?;
    let n = mu.n();
    let full = (1usize << n) - 1;
    if !t[0].is_zero() || t[full] != one() {
        return Ok(AuditReport::fail("pl", format!("pl(∅)={}, pl(W)={}", show(&t[0]), show(&t[full]))));
    }
    let dual: Vec<Rat> = (0..=full).map(|x| one() - &t[full & !x]).collect();
    let mut r = audit_belief_table(worlds, &dual, n, k, "pl", "1−pl(W∖·)");
    if let Some(w) = &r.witness {
        r.witness = Some(format!("dual belief: {w}"));
    }
    Ok(r)
}

/// `pl(|φ|⁺) = 1 − bel(|φ|⁻)` over the definable closure, as (extent pair, value).
pub fn dual_pl_of_bel(m: &BDModel, bel: &Measure) -> Result<Vec<(ExtentPair, Rat)>, MeasureError> {
    definable_extent_closure(m)
        .into_iter()
        .map(|e| {
            let v = one() - bel.of(&e.neg)?;
            Ok((e, v))
        })
        .collect()
}

// ---------------------------------------------------------------- JSON

fn parse_set(worlds: &[String], key: &str) -> Result<WSet, MeasureError> {
    let n = worlds.len();
    let mut s = WSet::empty(n);
    for name in key.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let i = worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| MeasureError::Format(format!("unknown world `{name}`")))?;
        s.insert(i);
    }
    Ok(s)
}

fn value_rat(v: &Value) -> Result<Rat, MeasureError> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| MeasureError::Format(e.to_string())),
        Value::Number(n) => parse_rat(&n.to_string()).map_err(|e| MeasureError::Format(e.to_string())),
        _ => Err(MeasureError::Format(format!("expected a rational, got {v}"))),
    }
}

fn set_map(worlds: &[String], v: &Value) -> Result<Vec<(WSet, Rat)>, MeasureError> {
    let obj = v.as_object().ok_or_else(|| MeasureError::Format("expected an object".into()))?;
    obj.iter().map(|(k, v)| Ok((parse_set(worlds, k)?, value_rat(v)?))).collect()
}

/// Reads `{"atoms":…}`, `{"subsets":…}` or `{"mass":…[, "as":"pl"]}`.
pub fn measure_from_json(worlds: &[String], v: &Value) -> Result<Measure, MeasureError> {
    let n = worlds.len();
    if let Some(a) = v.get("atoms") {
        let obj = a.as_object().ok_or_else(|| MeasureError::Format("atoms must be an object".into()))?;
        let mut w = vec![zero(); n];
        for (k, x) in obj {
            let i = worlds
                .iter()
                .position(|w| w == k)
                .ok_or_else(|| MeasureError::Format(format!("unknown world `{k}`")))?;
            w[i] = value_rat(x)?;
        }
        return Measure::atoms(w);
    }
    if let Some(s) = v.get("subsets") {
        return Measure::subsets(n, set_map(worlds, s)?.into_iter().collect());
    }
    if let Some(s) = v.get("mass") {
        let mass = Mass::new(n, set_map(worlds, s)?)?;
        return Ok(match v.get("as").and_then(Value::as_str) {
            Some("pl") => Measure::Plausibility(mass),
            None | Some("bel") => Measure::Belief(mass),
            Some(o) => return Err(MeasureError::Format(format!("unknown mass reading `{o}`"))),
        });
    }
    Err(MeasureError::Format("expected one of atoms, subsets, mass".into()))
}

fn set_key(worlds: &[String], s: &WSet) -> String {
    s.iter().map(|i| worlds[i].as_str()).collect::<Vec<_>>().join(",")
}

pub fn measure_to_json(worlds: &[String], m: &Measure) -> Value {
    let sets = |v: Vec<(&WSet, &Rat)>| {
        let mut v = v;
        v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
        Value::Object(v.into_iter().map(|(s, r)| (set_key(worlds, s), Value::String(show(r)))).collect::<Map<_, _>>())
    };
    match m {
        Measure::Atoms(w) => {
            json!({"atoms": Value::Object(worlds.iter().zip(w).map(|(k, r)| (k.clone(), Value::String(show(r)))).collect())})
        }
        Measure::Subsets { table, .. } => json!({"subsets": sets(table.iter().collect())}),
        Measure::Belief(mass) => json!({"mass": sets(mass.masses.iter().map(|(s, r)| (s, r)).collect())}),
        Measure::Plausibility(mass) => {
            json!({"mass": sets(mass.masses.iter().map(|(s, r)| (s, r)).collect()), "as": "pl"})
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bd::FourValue;
    use crate::rat::frac;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("w{i}")).collect()
    }

    fn neither_pair() -> (BDModel, Measure) {
        let mut m = BDModel::new(vec!["u1".into(), "u2".into()]);
        m.set("p", 0, FourValue::N);
        m.set("p", 1, FourValue::N);
        let mut t = HashMap::new();
        t.insert(WSet::from_mask(2, 0), zero());
        t.insert(WSet::from_mask(2, 1), frac(1, 3));
        t.insert(WSet::from_mask(2, 2), frac(1, 3));
        t.insert(WSet::from_mask(2, 3), one());
        (m, Measure::subsets(2, t).unwrap())
    }

    #[test]
    fn neither_pair_pm_but_not_ie() {
        let (m, mu) = neither_pair();
        assert!(audit_pm_probability(&m, &mu).unwrap().iter().all(|r| r.pass));
        let r = import_export(&m.worlds, &mu, &WSet::from_mask(2, 1), &WSet::from_mask(2, 2)).unwrap();
        assert!(!r.pass);
        assert!(r.witness.unwrap().contains("μ({u1,u2})=1 ≠ 2/3"));
    }

    #[test]
    fn constant_measure_is_pm() {
        let (m, _) = neither_pair();
        for c in [zero(), frac(2, 7), one()] {
            let mu = Measure::constant(2, c).unwrap();
            assert!(audit_pm_probability(&m, &mu).unwrap().iter().all(|r| r.pass));
        }
    }

    #[test]
    fn mass_examples() {
        let n = 2;
        let vac = Mass::new(n, vec![(WSet::full(n), one())]).unwrap();
        assert_eq!(vac.bel(&WSet::from_mask(n, 1)), zero());
        assert_eq!(vac.bel(&WSet::full(n)), one());
        let m = Mass::new(n, vec![(WSet::from_mask(n, 1), frac(1, 2)), (WSet::full(n), frac(1, 2))]).unwrap();
        assert_eq!(m.bel(&WSet::from_mask(n, 1)), frac(1, 2));
        assert_eq!(m.pl(&WSet::from_mask(n, 2)), frac(1, 2));
        assert!(audit_belief(&names(2), &bel_from_mass(&m), 2).unwrap().pass);
        assert!(audit_plausibility(&names(2), &pl_from_mass(&m), 2).unwrap().pass);
        assert!(Mass::new(n, vec![(WSet::full(n), frac(1, 2))]).is_err());
    }

    #[test]
    fn belief_failure_has_witness() {
        // 2-monotonicity fails: bel({a,b}) < bel({a}) + bel({b}).
        let n = 3;
        let mut t = HashMap::new();
        for mask in 0..8u64 {
            let v = match mask.count_ones() {
                0 => zero(),
                1 => frac(1, 3),
                2 => frac(1, 2),
                _ => one(),
            };
            t.insert(WSet::from_mask(n, mask), v);
        }
        let r = audit_belief(&names(3), &Measure::subsets(n, t).unwrap(), 2).unwrap();
        assert!(!r.pass);
        assert!(r.witness.unwrap().starts_with("2-monotonicity"));
    }

    #[test]
    fn four_probability_audits() {
        let mut m = BDModel::new(names(2));
        m.set("p", 0, FourValue::B);
        m.set("p", 1, FourValue::T);
        let mu = Measure::atoms(vec![frac(1, 2), frac(1, 2)]).unwrap();
        assert!(audit_four_probability(&m, &mu).unwrap().iter().all(|r| r.pass));
        let half = Measure::constant(2, frac(1, 8)).unwrap();
        let r = audit_four_probability(&m, &half).unwrap();
        assert!(!r[0].pass);
        let mut t: HashMap<WSet, Rat> = (0..4u64).map(|k| (WSet::from_mask(2, k), zero())).collect();
        t.insert(WSet::empty(2), frac(1, 4));
        let r = audit_four_probability(&m, &Measure::subsets(2, t).unwrap()).unwrap();
        assert!(!r[2].pass);
    }

    #[test]
    fn json_round_trip() {
        let w = names(2);
        let (_, mu) = neither_pair();
        let w1 = vec!["u1".to_string(), "u2".to_string()];
        assert_eq!(measure_from_json(&w1, &measure_to_json(&w1, &mu)).unwrap(), mu);
        let m = Mass::new(2, vec![(WSet::from_mask(2, 1), frac(1, 2)), (WSet::full(2), frac(1, 2))]).unwrap();
        for x in [Measure::Belief(m.clone()), Measure::Plausibility(m), Measure::uniform(2)] {
            assert_eq!(measure_from_json(&w, &measure_to_json(&w, &x)).unwrap(), x);
        }
    }
}
