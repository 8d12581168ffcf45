//! BD S5 Kripke models with one or two equivalence relations, stored as
//! partitions, each with an atom-weight probability.

use crate::bd::{BDModel, BdError, ExtentPair, FourValue, WSet};
use crate::measures::{Mass, MeasureError};
use crate::rat::{one, zero, Rat};
use crate::syntax::{Bd, Literal};
use num::Signed;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Largest literal set for which the canonical model is materialized.
pub const CANONICAL_LIT_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KripkeError {
    #[error("modality index {0} has no relation in this model")]
    Relation(u8),
    #[error("bad partition: {0}")]
    Partition(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Bd(#[from] BdError),
    #[error("{0} literals exceed the canonical-model cap of {CANONICAL_LIT_CAP}")]
    TooLarge(usize),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub base: BDModel,
    /// One partition per relation.
    pub partitions: Vec<Vec<WSet>>,
    /// Atom weights per relation; empty for a skeleton.
    pub measures: Vec<Vec<Rat>>,
    owner: Vec<Vec<usize>>,
}

impl KripkeModel {
    pub fn new(base: BDModel, partitions: Vec<Vec<WSet>>, measures: Vec<Vec<Rat>>) -> Result<KripkeModel, KripkeError> {
        let n = base.n();
        if partitions.is_empty() || partitions.len() > 2 {
            return Err(KripkeError::Partition("one or two relations expected".into()));
        }
        if !measures.is_empty() && measures.len() != partitions.len() {
            return Err(KripkeError::Partition("one measure per relation expected".into()));
        }
        let mut owner = Vec::new();
        for (r, part) in partitions.iter().enumerate() {
            let mut own = vec![usize::MAX; n];
            for (bi, block) in part.iter().enumerate() {
                if block.is_empty() {
                    return Err(KripkeError::Partition(format!("empty block in relation {}", r + 1)));
                }
                for w in block.iter() {
                    if w >= n {
                        return Err(KripkeError::Partition(format!("world {w} out of range")));
                    }
                    if own[w] != usize::MAX {
                        return Err(KripkeError::Partition(format!("world `{}` in two blocks", base.worlds[w])));
                    }
                    own[w] = bi;
                }
            }
            if let Some(w) = own.iter().position(|&b| b == usize::MAX) {
                return Err(KripkeError::Partition(format!("world `{}` in no block", base.worlds[w])));
            }
            owner.push(own);
        }
        for m in &measures {
            if m.len() != n {
                return Err(MeasureError::Size(m.len(), n).into());
            }
            crate::measures::Measure::atoms(m.clone())?;
        }
        Ok(KripkeModel { base, partitions, measures, owner })
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn relations(&self) -> usize {
        self.partitions.len()
    }

    /// Relation used by a modality index: 0 (unindexed) and 1 name the first.
    pub fn rel_index(&self, i: u8) -> Result<usize, KripkeError> {
        let r = if i <= 1 { 0 } else { i as usize - 1 };
        if r < self.partitions.len() {
            Ok(r)
        } else {
            Err(KripkeError::Relation(i))
        }
    }

    pub fn block_of(&self, rel: usize, w: usize) -> &WSet {
        &self.partitions[rel][self.owner[rel][w]]
    }

    pub fn block_index(&self, rel: usize, w: usize) -> usize {
        self.owner[rel][w]
    }

    /// `π_rel(X)`.
    pub fn pi(&self, rel: usize, x: &WSet) -> Rat {
        let w = &self.measures[rel];
        x.iter().fold(zero(), |a, i| a + &w[i])
    }

    /// The single-relation model of relation `rel`.
    pub fn project(&self, rel: usize) -> KripkeModel {
        let ms = if self.measures.is_empty() { vec![] } else { vec![self.measures[rel].clone()] };
        KripkeModel::new(self.base.clone(), vec![self.partitions[rel].clone()], ms).expect("projection of a valid model")
    }
}

fn union_where(part: &[WSet], n: usize, keep: impl Fn(&WSet) -> bool) -> WSet {
    part.iter().filter(|b| keep(b)).fold(WSet::empty(n), |a, b| a.union(b))
}

/// `(|φ|⁺, |φ|⁻)` with the S5 clauses for `□ᵢ`/`◇ᵢ`.
pub fn extents_modal(m: &KripkeModel, f: &Bd) -> Result<ExtentPair, KripkeError> {
    let n = m.n();
    Ok(match f {
        Bd::Var(p) => m.base.var_pair(p)?,
        Bd::Neg(a) => {
            let e = extents_modal(m, a)?;
            ExtentPair { pos: e.neg, neg: e.pos }
        }
        Bd::And(a, b) => {
            let (x, y) = (extents_modal(m, a)?, extents_modal(m, b)?);
            ExtentPair { pos: x.pos.inter(&y.pos), neg: x.neg.union(&y.neg) }
        }
        Bd::Or(a, b) => {
            let (x, y) = (extents_modal(m, a)?, extents_modal(m, b)?);
            ExtentPair { pos: x.pos.union(&y.pos), neg: x.neg.inter(&y.neg) }
        }
        Bd::Nec(i, a) => {
            let part = &m.partitions[m.rel_index(*i)?];
            let e = extents_modal(m, a)?;
            ExtentPair {
                pos: union_where(part, n, |b| b.is_subset(&e.pos)),
                neg: union_where(part, n, |b| !b.inter(&e.neg).is_empty()),
            }
        }
        Bd::Pos(i, a) => {
            let part = &m.partitions[m.rel_index(*i)?];
            let e = extents_modal(m, a)?;
            ExtentPair {
                pos: union_where(part, n, |b| !b.inter(&e.pos).is_empty()),
                neg: union_where(part, n, |b| b.is_subset(&e.neg)),
            }
        }
    })
}

/// `(w ⊨⁺ φ, w ⊨⁻ φ)`.
pub fn eval_modal(m: &KripkeModel, w: usize, f: &Bd) -> Result<(bool, bool), KripkeError> {
    let e = extents_modal(m, f)?;
    Ok((e.pos.contains(w), e.neg.contains(w)))
}

fn modal_subformulas(f: &Bd, out: &mut Vec<Bd>) {
    match f {
        Bd::Var(_) => {}
        Bd::Neg(a) => modal_subformulas(a, out),
        Bd::And(a, b) | Bd::Or(a, b) => {
            modal_subformulas(a, out);
            modal_subformulas(b, out);
        }
        Bd::Nec(_, a) | Bd::Pos(_, a) => {
            modal_subformulas(a, out);
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
    }
}

/// Modal subformulas of `gamma`, innermost first, without repetition.
pub fn tracked_formulas(gamma: &[Bd]) -> Vec<Bd> {
    let mut out = Vec::new();
    for g in gamma {
        modal_subformulas(g, &mut out);
    }
    out
}

/// States kept when shrinking block `x`: the least world as seed plus the
/// least witness for each positive or negative condition of a tracked
/// formula that holds on `x` only because of some particular world.
fn witnesses(m: &KripkeModel, tracked: &[Bd], x: &WSet) -> Result<WSet, KripkeError> {
    let n = m.n();
    let seed = x.iter().next().expect("nonempty block");
    let mut keep = WSet::from_iter(n, [seed]);
    for s in tracked {
        let (body, boxed) = match s {
            Bd::Nec(_, a) => (a, true),
            Bd::Pos(_, a) => (a, false),
            _ => unreachable!("tracked formulas are modal"),
        };
        let e = extents_modal(m, body)?;
        let (p, q) = (x.inter(&e.pos), x.inter(&e.neg));
        // For □: ⁺ fails somewhere outside P, ⁻ holds somewhere in N.
        // For ◇: ⁺ holds somewhere in P, ⁻ fails somewhere outside N.
        let needs = if boxed { [x.minus(&p), q] } else { [p, x.minus(&q)] };
        for cand in needs {
            if !cand.is_empty() && cand.inter(&keep).is_empty() {
                keep.insert(cand.iter().next().unwrap());
            }
        }
    }
    Ok(keep)
}

/// Keeps only the worlds in `keep`; the mass of a dropped world moves to the
/// least kept world of its block.
fn restrict(m: &KripkeModel, keep: &WSet) -> KripkeModel {
    let old: Vec<usize> = keep.iter().collect();
    let mut new_index = vec![usize::MAX; m.n()];
    for (i, &w) in old.iter().enumerate() {
        new_index[w] = i;
    }
    let k = old.len();
    let mut base = BDModel::new(old.iter().map(|&w| m.base.worlds[w].clone()).collect());
    for p in m.base.vars() {
        let remap = |s: Option<&WSet>| {
            WSet::from_iter(k, s.into_iter().flat_map(|s| s.iter()).filter(|&w| keep.contains(w)).map(|w| new_index[w]))
        };
        base.vplus.insert(p.clone(), remap(m.base.vplus.get(&p)));
        base.vminus.insert(p.clone(), remap(m.base.vminus.get(&p)));
    }
    let partitions = m
        .partitions
        .iter()
        .map(|part| {
            part.iter()
                .map(|b| WSet::from_iter(k, b.iter().filter(|&w| keep.contains(w)).map(|w| new_index[w])))
                .filter(|b| !b.is_empty())
                .collect()
        })
        .collect();
    let measures = m
        .measures
        .iter()
        .enumerate()
        .map(|(r, ws)| {
            let mut out: Vec<Rat> = old.iter().map(|&w| ws[w].clone()).collect();
            for w in (0..m.n()).filter(|&w| !keep.contains(w)) {
                let sink = m.block_of(r, w).iter().find(|&v| keep.contains(v)).expect("block keeps a world");
                out[new_index[sink]] += &ws[w];
            }
            out
        })
        .collect();
    KripkeModel::new(base, partitions, measures).expect("restriction of a valid model")
}

/// Shrinks block `block` of a single-relation model to at most `2m+1`
/// worlds (`m` tracked modal formulas) while preserving `π(|σ|±)` for each
/// of them; removed mass goes to the least world of the block.
pub fn shrink_cluster(m: &KripkeModel, gamma: &[Bd], block: usize) -> Result<KripkeModel, KripkeError> {
    if m.relations() != 1 {
        return Err(KripkeError::Unsupported("shrinking works on one relation; project first".into()));
    }
    let tracked = tracked_formulas(gamma);
    let x = m.partitions[0][block].clone();
    if x.len() <= 2 * tracked.len() + 1 {
        return Ok(m.clone());
    }
    let kept = witnesses(m, &tracked, &x)?;
    Ok(restrict(m, &m.base.all().minus(&x).union(&kept)))
}

/// Shrinks every block.
pub fn shrink_all(m: &KripkeModel, gamma: &[Bd]) -> Result<KripkeModel, KripkeError> {
    if m.relations() != 1 {
        return Err(KripkeError::Unsupported("shrinking works on one relation; project first".into()));
    }
    let tracked = tracked_formulas(gamma);
    let mut keep = WSet::empty(m.n());
    for x in &m.partitions[0] {
        keep = if x.len() <= 2 * tracked.len() + 1 { keep.union(x) } else { keep.union(&witnesses(m, &tracked, x)?) };
    }
    Ok(restrict(m, &keep))
}

// ---------------------------------------------------------------- canonical model

/// The literal set `{p, ¬p : p ∈ Prop(Γ)}`, ordered `p1, ¬p1, p2, ¬p2, …`.
pub fn canonical_literals(gamma: &[Bd]) -> Vec<Literal> {
    let mut props = BTreeSet::new();
    for g in gamma {
        g.vars_into(&mut props);
    }
    props
        .into_iter()
        .flat_map(|p| [Literal { var: p.clone(), positive: true }, Literal { var: p, positive: false }])
        .collect()
}

/// A state is a subset of the literal list, as a bitmask (bit `i` = `lits[i]`).
pub fn state_of(m: &BDModel, lits: &[Literal], w: usize) -> u32 {
    let mut s = 0;
    for (i, l) in lits.iter().enumerate() {
        let (pos, neg) = m.value(&l.var, w).bits();
        if (l.positive && pos) || (!l.positive && neg) {
            s |= 1 << i;
        }
    }
    s
}

fn state_name(lits: &[Literal], s: u32) -> String {
    let parts: Vec<String> = lits.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).map(|(_, l)| l.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// `1000;1100;0101` style code of a cluster (states in ascending order).
pub fn cluster_code(lits: &[Literal], states: &[u32]) -> String {
    states
        .iter()
        .map(|s| (0..lits.len()).map(|i| if s >> i & 1 == 1 { '1' } else { '0' }).collect::<String>())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn decode_cluster(lits: &[Literal], code: &str) -> Result<Vec<u32>, KripkeError> {
    let mut out = Vec::new();
    for part in code.split(';') {
        if part.len() != lits.len() || !part.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(KripkeError::Partition(format!("bad cluster code `{part}`")));
        }
        out.push(part.bytes().enumerate().filter(|(_, b)| *b == b'1').fold(0u32, |a, (i, _)| a | 1 << i));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Builds a model with one block per listed cluster (each a set of states).
pub fn model_of_clusters(lits: &[Literal], clusters: &[Vec<u32>], weights: Option<&[Vec<Rat>]>) -> Result<KripkeModel, KripkeError> {
    let mut names = Vec::new();
    let mut states = Vec::new();
    let mut blocks = Vec::new();
    for c in clusters {
        let code = cluster_code(lits, c);
        let start = names.len();
        for &s in c {
            names.push(format!("[{code}]{}", state_name(lits, s)));
            states.push(s);
        }
        blocks.push(start..names.len());
    }
    let n = names.len();
    let mut base = BDModel::new(names);
    for l in lits {
        base.vplus.entry(l.var.clone()).or_insert_with(|| WSet::empty(n));
        base.vminus.entry(l.var.clone()).or_insert_with(|| WSet::empty(n));
    }
    for (w, &s) in states.iter().enumerate() {
        for (i, l) in lits.iter().enumerate() {
            if s >> i & 1 == 1 {
                let map = if l.positive { &mut base.vplus } else { &mut base.vminus };
                map.get_mut(&l.var).unwrap().insert(w);
            }
        }
    }
    let part = blocks.iter().map(|r| WSet::from_iter(n, r.clone())).collect();
    let measures = match weights {
        None => vec![],
        Some(ws) => vec![ws.iter().flatten().cloned().collect()],
    };
    KripkeModel::new(base, vec![part], measures)
}

/// Disjoint union of all nonempty clusters of states over `Lit[Γ]` (no measure).
pub fn canonical_s5_model(gamma: &[Bd]) -> Result<KripkeModel, KripkeError> {
    let lits = canonical_literals(gamma);
    if lits.is_empty() {
        return Err(KripkeError::Unsupported("no literals".into()));
    }
    if lits.len() > CANONICAL_LIT_CAP {
        return Err(KripkeError::TooLarge(lits.len()));
    }
    let nstates = 1u32 << lits.len();
    let clusters: Vec<Vec<u32>> =
        (1u64..1 << nstates).map(|c| (0..nstates).filter(|s| c >> s & 1 == 1).collect()).collect();
    model_of_clusters(&lits, &clusters, None)
}

/// A measure on the canonical model, kept sparse: weight per (cluster, state).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalMeasure {
    pub lits: Vec<Literal>,
    pub weights: BTreeMap<(Vec<u32>, u32), Rat>,
}

impl CanonicalMeasure {
    /// The fragment of the canonical model made of the clusters with mass.
    pub fn to_model(&self) -> Result<KripkeModel, KripkeError> {
        let clusters: BTreeSet<Vec<u32>> = self.weights.keys().map(|(c, _)| c.clone()).collect();
        let clusters: Vec<Vec<u32>> = clusters.into_iter().collect();
        let ws: Vec<Vec<Rat>> = clusters
            .iter()
            .map(|c| c.iter().map(|s| self.weights.get(&(c.clone(), *s)).cloned().unwrap_or_else(zero)).collect())
            .collect();
        model_of_clusters(&self.lits, &clusters, Some(&ws))
    }

    pub fn max_cluster(&self) -> usize {
        self.weights.keys().map(|(c, _)| c.len()).max().unwrap_or(0)
    }
}

/// Sums the measure of each relation over bisimilarity classes of the
/// canonical model over `Lit[Γ]`. Relation `r` uses the formulas of `gamma`
/// whose modalities address it.
pub fn transfer_measure_to_canonical(m: &KripkeModel, gamma: &[Bd]) -> Result<Vec<CanonicalMeasure>, KripkeError> {
    if m.measures.is_empty() {
        return Err(KripkeError::Unsupported("model has no measure".into()));
    }
    let lits = canonical_literals(gamma);
    if lits.len() > CANONICAL_LIT_CAP {
        return Err(KripkeError::TooLarge(lits.len()));
    }
    let states: Vec<u32> = (0..m.n()).map(|w| state_of(&m.base, &lits, w)).collect();
    let mut out = Vec::new();
    for r in 0..m.relations() {
        let mut weights: BTreeMap<(Vec<u32>, u32), Rat> = BTreeMap::new();
        for block in &m.partitions[r] {
            let mut profile: Vec<u32> = block.iter().map(|w| states[w]).collect();
            profile.sort_unstable();
            profile.dedup();
            for w in block.iter() {
                let wt = &m.measures[r][w];
                if wt.is_positive() {
                    *weights.entry((profile.clone(), states[w])).or_insert_with(zero) += wt;
                }
            }
        }
        out.push(CanonicalMeasure { lits: lits.clone(), weights });
    }
    Ok(out)
}

// ---------------------------------------------------------------- bisimulation

/// Greatest bisimulation between two models with the same number of
/// relations, by partition refinement on the disjoint union. Pairs are
/// `(world of m1, world of m2)`; `None` if no pair is related.
pub fn bisimilar(m1: &KripkeModel, m2: &KripkeModel) -> Option<Vec<(usize, usize)>> {
    if m1.relations() != m2.relations() {
        return None;
    }
    let vars: BTreeSet<String> = m1.base.vars().union(&m2.base.vars()).cloned().collect();
    let (n1, n2) = (m1.n(), m2.n());
    let at = |w: usize| if w < n1 { (m1, w) } else { (m2, w - n1) };
    let mut color: Vec<usize> = {
        let mut ids: HashMap<Vec<FourValue>, usize> = HashMap::new();
        (0..n1 + n2)
            .map(|w| {
                let (m, v) = at(w);
                let prof: Vec<FourValue> = vars.iter().map(|p| m.base.value(p, v)).collect();
                let k = ids.len();
                *ids.entry(prof).or_insert(k)
            })
            .collect()
    };
    loop {
        let mut ids: HashMap<(usize, Vec<Vec<usize>>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n1 + n2)
            .map(|w| {
                let (m, v) = at(w);
                let off = if w < n1 { 0 } else { n1 };
                let succ: Vec<Vec<usize>> = (0..m.relations())
                    .map(|r| {
                        let mut cs: Vec<usize> = m.block_of(r, v).iter().map(|u| color[u + off]).collect();
                        cs.sort_unstable();
                        cs.dedup();
                        cs
                    })
                    .collect();
                let k = ids.len();
                *ids.entry((color[w], succ)).or_insert(k)
            })
            .collect();
        let before = color.iter().collect::<BTreeSet<_>>().len();
        let after = next.iter().collect::<BTreeSet<_>>().len();
        color = next;
        if before == after {
            break;
        }
    }
    let mut pairs = Vec::new();
    for a in 0..n1 {
        for b in 0..n2 {
            if color[a] == color[n1 + b] {
                pairs.push((a, b));
            }
        }
    }
    if pairs.is_empty() {
        None
    } else {
        Some(pairs)
    }
}

// ---------------------------------------------------------------- belief

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BelPl {
    pub bel_pos: Rat,
    pub bel_neg: Rat,
    pub pl_pos: Rat,
    pub pl_neg: Rat,
}

/// `bel(|φ|⁺)=π(|□φ|⁺)`, `bel(|φ|⁻)=π(|□¬φ|⁺)`, `pl(|φ|⁺)=π(|◇φ|⁺)`, `pl(|φ|⁻)=π(|◇¬φ|⁺)`.
pub fn induced_bel_pl(m: &KripkeModel, phis: &[Bd]) -> Result<Vec<BelPl>, KripkeError> {
    if m.relations() != 1 || m.measures.is_empty() {
        return Err(KripkeError::Unsupported("needs one relation with a measure".into()));
    }
    let pi = |f: Bd| -> Result<Rat, KripkeError> { Ok(m.pi(0, &extents_modal(m, &f)?.pos)) };
    phis.iter()
        .map(|f| {
            Ok(BelPl {
                bel_pos: pi(f.clone().nec(0))?,
                bel_neg: pi(f.clone().neg().nec(0))?,
                pl_pos: pi(f.clone().pos(0))?,
                pl_neg: pi(f.clone().neg().pos(0))?,
            })
        })
        .collect()
}

/// Mass `m(C) = π(C)` on the blocks of relation `rel`; its belief function
/// is `X ↦ π(⋃{C : C ⊆ X})`.
pub fn induced_mass(m: &KripkeModel, rel: usize) -> Mass {
    let masses = m.partitions[rel].iter().map(|b| (b.clone(), m.pi(rel, b))).collect();
    Mass::new(m.n(), masses).expect("blocks carry a probability")
}

/// Total weight check used by constructors of derived models.
pub fn is_probability(w: &[Rat]) -> bool {
    w.iter().all(|x| !x.is_negative()) && w.iter().fold(zero(), |a, x| a + x) == one()
}
