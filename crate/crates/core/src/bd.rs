//! Finite Belnap–Dunn models, positive/negative extensions and the BD
//! entailment oracle.

use crate::syntax::Bd;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

/// A set of worlds `0..n`, as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WSet {
    words: Vec<u64>,
}

impl WSet {
    pub fn empty(_n: usize) -> WSet {
        WSet { words: Vec::new() }
    }

    pub fn full(n: usize) -> WSet {
        let mut s = WSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_iter(n: usize, it: impl IntoIterator<Item = usize>) -> WSet {
        let mut s = WSet::empty(n);
        for i in it {
            s.insert(i);
        }
        s
    }

    /// Set whose members are the 1-bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> WSet {
        WSet::from_iter(n, (0..n.min(64)).filter(|i| mask >> i & 1 == 1))
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    fn zip(&self, o: &WSet, f: impl Fn(u64, u64) -> u64) -> WSet {
        let n = self.words.len().max(o.words.len());
        let g = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        let mut words: Vec<u64> = (0..n).map(|i| f(g(&self.words, i), g(&o.words, i))).collect();
        while words.last() == Some(&0) {
            words.pop();
        }
        WSet { words }
    }

    pub fn union(&self, o: &WSet) -> WSet {
        self.zip(o, |a, b| a | b)
    }

    pub fn inter(&self, o: &WSet) -> WSet {
        self.zip(o, |a, b| a & b)
    }

    pub fn minus(&self, o: &WSet) -> WSet {
        self.zip(o, |a, b| a & !b)
    }

    pub fn is_subset(&self, o: &WSet) -> bool {
        self.minus(o).is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(k, w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b))
    }

    /// Low 64 members as a mask.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for WSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FourValue {
    T,
    B,
    N,
    F,
}

impl FourValue {
    pub const ALL: [FourValue; 4] = [FourValue::T, FourValue::B, FourValue::N, FourValue::F];

    pub fn from_bits(pos: bool, neg: bool) -> FourValue {
        match (pos, neg) {
            (true, false) => FourValue::T,
            (true, true) => FourValue::B,
            (false, false) => FourValue::N,
            (false, true) => FourValue::F,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            FourValue::T => (true, false),
            FourValue::B => (true, true),
            FourValue::N => (false, false),
            FourValue::F => (false, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtentPair {
    pub pos: WSet,
    pub neg: WSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourCells {
    pub b: WSet,
    pub d: WSet,
    pub c: WSet,
    pub u: WSet,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BdError {
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("modal formula `{0}` needs a Kripke model")]
    Modal(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BDModel {
    pub worlds: Vec<String>,
    pub vplus: BTreeMap<String, WSet>,
    pub vminus: BTreeMap<String, WSet>,
}

impl BDModel {
    pub fn new(worlds: Vec<String>) -> BDModel {
        BDModel { worlds, vplus: BTreeMap::new(), vminus: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.worlds.len()
    }

    pub fn all(&self) -> WSet {
        WSet::full(self.n())
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    /// Sets the Belnapian value of `p` at world `w`.
    pub fn set(&mut self, p: &str, w: usize, v: FourValue) {
        let n = self.n();
        let (pos, neg) = v.bits();
        for (map, bit) in [(&mut self.vplus, pos), (&mut self.vminus, neg)] {
            let e = map.entry(p.to_string()).or_insert_with(|| WSet::empty(n));
            if bit {
                e.insert(w);
            } else {
                *e = e.minus(&WSet::from_iter(n, [w]));
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.vplus.keys().chain(self.vminus.keys()).cloned().collect()
    }

    pub fn knows(&self, p: &str) -> bool {
        self.vplus.contains_key(p) || self.vminus.contains_key(p)
    }

    pub fn var_pair(&self, p: &str) -> Result<ExtentPair, BdError> {
        if !self.knows(p) {
            return Err(BdError::UnknownVar(p.to_string()));
        }
        let n = self.n();
        Ok(ExtentPair {
            pos: self.vplus.get(p).cloned().unwrap_or_else(|| WSet::empty(n)),
            neg: self.vminus.get(p).cloned().unwrap_or_else(|| WSet::empty(n)),
        })
    }

    pub fn value(&self, p: &str, w: usize) -> FourValue {
        let pos = self.vplus.get(p).is_some_and(|s| s.contains(w));
        let neg = self.vminus.get(p).is_some_and(|s| s.contains(w));
        FourValue::from_bits(pos, neg)
    }
}

/// `(|φ|⁺, |φ|⁻)` for a propositional `φ`.
pub fn extents(m: &BDModel, f: &Bd) -> Result<ExtentPair, BdError> {
    Ok(match f {
        Bd::Var(p) => m.var_pair(p)?,
        Bd::Neg(a) => {
            let e = extents(m, a)?;
            ExtentPair { pos: e.neg, neg: e.pos }
        }
        Bd::And(a, b) => {
            let (x, y) = (extents(m, a)?, extents(m, b)?);
            ExtentPair { pos: x.pos.inter(&y.pos), neg: x.neg.union(&y.neg) }
        }
        Bd::Or(a, b) => {
            let (x, y) = (extents(m, a)?, extents(m, b)?);
            ExtentPair { pos: x.pos.union(&y.pos), neg: x.neg.inter(&y.neg) }
        }
        Bd::Nec(..) | Bd::Pos(..) => return Err(BdError::Modal(f.to_string())),
    })
}

pub fn cells(all: &WSet, e: &ExtentPair) -> FourCells {
    FourCells {
        b: e.pos.minus(&e.neg),
        d: e.neg.minus(&e.pos),
        c: e.pos.inter(&e.neg),
        u: all.minus(&e.pos.union(&e.neg)),
    }
}

pub fn four_extents(m: &BDModel, f: &Bd) -> Result<FourCells, BdError> {
    Ok(cells(&m.all(), &extents(m, f)?))
}

/// Support of truth and falsity at a single point, with variable values from `val`.
pub fn eval_point(f: &Bd, val: &dyn Fn(&str) -> FourValue) -> (bool, bool) {
    match f {
        Bd::Var(p) => val(p).bits(),
        Bd::Neg(a) => {
            let (t, n) = eval_point(a, val);
            (n, t)
        }
        Bd::And(a, b) => {
            let (t1, n1) = eval_point(a, val);
            let (t2, n2) = eval_point(b, val);
            (t1 && t2, n1 || n2)
        }
        Bd::Or(a, b) => {
            let (t1, n1) = eval_point(a, val);
            let (t2, n2) = eval_point(b, val);
            (t1 || t2, n1 && n2)
        }
        Bd::Nec(_, a) | Bd::Pos(_, a) => eval_point(a, val),
    }
}

/// A single four-valued valuation with `φ` true and `χ` not, if any.
pub fn bd_countermodel(phi: &Bd, chi: &Bd) -> Option<BTreeMap<String, FourValue>> {
    let mut vars = phi.vars();
    vars.extend(chi.vars());
    let vars: Vec<String> = vars.into_iter().collect();
    let n = vars.len();
    for code in 0..4usize.pow(n as u32) {
        let vals: Vec<FourValue> = (0..n).map(|i| FourValue::ALL[code / 4usize.pow(i as u32) % 4]).collect();
        let look = |p: &str| vals[vars.iter().position(|v| v == p).unwrap()];
        if eval_point(phi, &look).0 && !eval_point(chi, &look).0 {
            return Some(vars.iter().cloned().zip(vals).collect());
        }
    }
    None
}

/// `φ ⊨_BD χ`, by exhausting the 4ⁿ valuations of the shared variables.
pub fn bd_entails(phi: &Bd, chi: &Bd) -> bool {
    bd_countermodel(phi, chi).is_none()
}

pub fn bd_equiv(phi: &Bd, chi: &Bd) -> bool {
    bd_entails(phi, chi) && bd_entails(chi, phi)
}

/// Least set of extent pairs containing the variables' pairs and closed
/// under the ¬, ∧, ∨ clauses. Iteration order is deterministic.
pub fn definable_extent_closure(m: &BDModel) -> Vec<ExtentPair> {
    let mut seen: HashSet<ExtentPair> = HashSet::new();
    let mut list: Vec<ExtentPair> = Vec::new();
    let push = |e: ExtentPair, seen: &mut HashSet<ExtentPair>, list: &mut Vec<ExtentPair>| {
        if seen.insert(e.clone()) {
            list.push(e);
        }
    };
    for p in m.vars() {
        let e = m.var_pair(&p).expect("known variable");
        push(e, &mut seen, &mut list);
    }
    let mut i = 0;
    while i < list.len() {
        let e = list[i].clone();
        push(ExtentPair { pos: e.neg.clone(), neg: e.pos.clone() }, &mut seen, &mut list);
        for j in 0..=i {
            let f = list[j].clone();
            push(
                ExtentPair { pos: e.pos.inter(&f.pos), neg: e.neg.union(&f.neg) },
                &mut seen,
                &mut list,
            );
            push(
                ExtentPair { pos: e.pos.union(&f.pos), neg: e.neg.inter(&f.neg) },
                &mut seen,
                &mut list,
            );
        }
        i += 1;
    }
    list.sort();
    list
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_bd, var};

    pub(crate) fn three_worlds() -> BDModel {
        let mut m = BDModel::new(vec!["w1".into(), "w2".into(), "w3".into()]);
        m.set("p", 0, FourValue::T);
        m.set("q", 0, FourValue::B);
        m.set("p", 1, FourValue::N);
        m.set("q", 1, FourValue::F);
        m.set("p", 2, FourValue::F);
        m.set("q", 2, FourValue::N);
        m
    }

    fn ws(n: usize, v: &[usize]) -> WSet {
        WSet::from_iter(n, v.iter().copied())
    }

    #[test]
    fn three_worlds_extents() {
        let m = three_worlds();
        let e = extents(&m, &parse_bd("p & !q").unwrap()).unwrap();
        assert_eq!(e.pos, ws(3, &[0]));
        assert_eq!(e.neg, ws(3, &[0, 2]));
        let c = four_extents(&m, &parse_bd("p & !q").unwrap()).unwrap();
        assert_eq!(c.d, ws(3, &[2]));
        let c = four_extents(&m, &parse_bd("q | !q").unwrap()).unwrap();
        assert_eq!(c.b, ws(3, &[1]));
    }

    #[test]
    fn empty_variable_and_unknown() {
        let mut m = BDModel::new(vec!["a".into()]);
        m.set("p", 0, FourValue::N);
        let e = extents(&m, &var("p")).unwrap();
        assert!(e.pos.is_empty() && e.neg.is_empty());
        assert_eq!(extents(&m, &var("z")), Err(BdError::UnknownVar("z".into())));
    }

    #[test]
    fn entailment_examples() {
        let f = |s: &str| parse_bd(s).unwrap();
        assert!(bd_entails(&f("p & q"), &f("p")));
        assert!(!bd_entails(&f("p & !p"), &f("q")));
        assert!(!bd_entails(&f("p"), &f("q | !q")));
        assert!(bd_equiv(&f("!(p & q)"), &f("!p | !q")));
    }

    #[test]
    fn closure_examples() {
        let mut m = BDModel::new(vec!["w".into()]);
        m.set("p", 0, FourValue::T);
        let c = definable_extent_closure(&m);
        assert_eq!(c.len(), 2);
        let mut m = BDModel::new(vec!["a".into(), "b".into()]);
        m.set("p", 0, FourValue::B);
        m.set("p", 1, FourValue::B);
        assert_eq!(definable_extent_closure(&m), vec![ExtentPair { pos: m.all(), neg: m.all() }]);
    }

    #[test]
    fn wset_ops() {
        let a = ws(70, &[1, 65]);
        let b = ws(70, &[1, 2]);
        assert_eq!(a.inter(&b), ws(70, &[1]));
        assert_eq!(a.union(&b).len(), 3);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 65]);
        assert!(ws(70, &[1]).is_subset(&a));
    }
}
