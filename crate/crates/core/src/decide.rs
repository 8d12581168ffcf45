//! Validity and entailment deciders.
//!
//! Every two-layered logic is reduced to the same engine: ¬ is pushed out of
//! the outer layer, each modal atom becomes a leaf `q_i`, the tableau for the
//! outer calculus is expanded, and each complete branch is checked together
//! with coherence constraints saying that the values of the `q_i` are
//! realised by some measure. Columns of the coherence system are the
//! distinct truth-signatures of the atoms' bodies over classical valuations
//! (plain probabilities) or over clusters of BD states (S5 probabilities).

use crate::bd::{BDModel, FourValue, WSet};
use crate::kripke::{canonical_literals, induced_mass, model_of_clusters, tracked_formulas, KripkeModel};
use crate::linarith::{solve, Constraint, Lin, Outcome};
use crate::luk::{eval_luk2, eval_luk_delta, eval_nluk, EvalError, Pair};
use crate::measures::Measure;
use crate::rat::{one, zero, Rat};
use crate::syntax::{Bd, Fm, Literal, LogicId, ModalAtom, Tag};
use crate::tableau::{
    branch_to_constraints, for_each_branch_pruned, leaf_values, random_branch, Arena, Branch, Calculus, Dir, NodeId,
    TableauError,
};
use crate::translate::{box_dia, boxminus, boxplus, neg_push, normalize, star_body, TranslateError};
use crate::two_layered::{designated, OuterValue, Structure, TLError, TLModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Model(#[from] TLError),
    #[error("{0}; use --mode random")]
    TooLarge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal: countermodel fails re-check: {0}")]
    Unsound(String),
}

type DResult<T> = Result<T, DecideError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Randomized,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Randomized => "random",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub mode: Mode,
    pub seed: u64,
    /// Randomized mode: number of (branch, support list) guesses.
    pub budget: usize,
    /// Exhaustive mode: most variables after ¬ removal for plain probabilities.
    pub prop_cap: usize,
    /// Exhaustive mode: most literals for S5 signature closure.
    pub lit_cap: usize,
    /// Exhaustive mode: most variables when bodies nest modalities.
    pub nested_var_cap: usize,
    /// Randomized mode: support list size; defaults to atoms + 1.
    pub support: Option<usize>,
    pub dump_lp: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            mode: Mode::Exhaustive,
            seed: 0,
            budget: 2000,
            prop_cap: 10,
            lit_cap: 16,
            nested_var_cap: 2,
            support: None,
            dump_lp: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Valid,
    NotValid,
    /// Randomized search found nothing; not a proof of validity.
    Unknown,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Valid => "VALID",
            Status::NotValid => "NOT VALID",
            Status::Unknown => "UNKNOWN-LEANING-VALID",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Valid => 0,
            Status::NotValid => 1,
            Status::Unknown => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Valuation(BTreeMap<String, OuterValue>),
    Model(TLModel),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub witness: Witness,
    /// Value of each modal atom (or variable) of the decided formula.
    pub atoms: Vec<(String, OuterValue)>,
    pub branch: String,
    pub value: OuterValue,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub branches: usize,
    pub systems: usize,
    pub columns: usize,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub mode: Mode,
    pub countermodel: Option<Countermodel>,
    pub stats: Stats,
    pub lp_dump: Vec<String>,
}

impl Verdict {
    pub fn valid(&self) -> bool {
        self.status == Status::Valid
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status.label())?;
        if let Some(c) = &self.countermodel {
            write!(f, "\nvalue {} on branch {}", c.value, c.branch)?;
            for (a, v) in &c.atoms {
                write!(f, "\n  {a} = {v}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- queries

/// Root alternative `φ ⩽ₛ c, c<1` (`Le`) or `φ ⩾ₛ c, c>0` (`Ge`).
#[derive(Clone, Debug)]
struct Alt {
    f: Fm,
    side: u8,
    dir: Dir,
}

/// Premise entry `φ ⩾ₛ 1` or `φ ⩽ₛ 0`.
#[derive(Clone, Debug)]
struct Prem {
    f: Fm,
    side: u8,
    dir: Dir,
}

impl Prem {
    fn designated(f: Fm, side: u8) -> Prem {
        Prem { f, side, dir: if side == 1 { Dir::Ge } else { Dir::Le } }
    }
}

struct Query {
    calc: Calculus,
    alts: Vec<Alt>,
    prems: Vec<Prem>,
}

fn root_branch(arena: &Arena, alt: (NodeId, u8, Dir), prems: &[(NodeId, u8, Dir)]) -> Branch {
    let mut b = Branch::new();
    let c = b.fresh("c");
    let (node, side, dir) = alt;
    b.constrain(match dir {
        Dir::Le => Constraint::lt(Lin::var(c), Lin::one()),
        Dir::Ge => Constraint::gt(Lin::var(c), Lin::zero()),
    });
    b.add_entry(arena, node, side, dir, Lin::var(c));
    for &(n, s, d) in prems {
        let bound = if d == Dir::Ge { Lin::one() } else { Lin::zero() };
        b.add_entry(arena, n, s, d, bound);
    }
    b
}

struct Interned {
    arena: Arena,
    alts: Vec<(NodeId, u8, Dir)>,
    prems: Vec<(NodeId, u8, Dir)>,
    /// Leaf `q_i` stands for `atoms[i]`.
    atoms: Vec<ModalAtom>,
}

/// Replaces modal atoms by leaves `q0, q1, …` and interns everything.
fn intern(q: &Query) -> DResult<Interned> {
    let mut atoms: Vec<ModalAtom> = Vec::new();
    let mut abstract_fm = |f: &Fm| {
        f.map_atoms(&mut |a| {
            let i = match atoms.iter().position(|b| b == a) {
                Some(i) => i,
                None => {
                    atoms.push(a.clone());
                    atoms.len() - 1
                }
            };
            Fm::Var(format!("q{i}"))
        })
    };
    let alts: Vec<(Fm, u8, Dir)> = q.alts.iter().map(|a| (abstract_fm(&a.f), a.side, a.dir)).collect();
    let prems: Vec<(Fm, u8, Dir)> = q.prems.iter().map(|p| (abstract_fm(&p.f), p.side, p.dir)).collect();
    let mut arena = Arena::new();
    for i in 0..atoms.len() {
        arena.leaf(&format!("q{i}"));
    }
    let mut out = Interned { arena, alts: Vec::new(), prems: Vec::new(), atoms };
    for (f, s, d) in alts {
        let n = out.arena.intern(&f)?;
        out.alts.push((n, s, d));
    }
    for (f, s, d) in prems {
        let n = out.arena.intern(&f)?;
        out.prems.push((n, s, d));
    }
    Ok(out)
}

// ---------------------------------------------------------------- columns

/// Where the measure for a group of atoms lives.
#[derive(Clone, Debug)]
enum Space {
    /// Classical valuations of the listed variables (bit `i` = `vars[i]`).
    Valuations { vars: Vec<String>, bodies: Vec<Bd> },
    /// Nonempty clusters of BD states over `lits`.
    Clusters { lits: Vec<Literal>, bodies: Vec<Bd> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Column {
    sig: Vec<bool>,
    /// A valuation (one element) or a cluster of states.
    wit: Vec<u32>,
}

struct Group {
    atoms: Vec<usize>,
    space: Space,
}

fn classical(b: &Bd, vars: &[String], v: u32) -> bool {
    match b {
        Bd::Var(p) => vars.iter().position(|x| x == p).is_some_and(|i| v >> i & 1 == 1),
        Bd::Neg(a) => !classical(a, vars, v),
        Bd::And(a, c) => classical(a, vars, v) && classical(c, vars, v),
        Bd::Or(a, c) => classical(a, vars, v) || classical(c, vars, v),
        Bd::Nec(_, a) | Bd::Pos(_, a) => classical(a, vars, v),
    }
}

fn lit_bits(lits: &[Literal], p: &str) -> (usize, usize) {
    let i = lits.iter().position(|l| l.var == p && l.positive).expect("literal listed");
    (i, i + 1)
}

/// `(⁺, ⁻)` of `b` at `state` inside `cluster`.
fn cluster_eval(b: &Bd, lits: &[Literal], state: u32, cluster: &[u32]) -> (bool, bool) {
    match b {
        Bd::Var(p) => {
            let (i, j) = lit_bits(lits, p);
            (state >> i & 1 == 1, state >> j & 1 == 1)
        }
        Bd::Neg(a) => {
            let (t, f) = cluster_eval(a, lits, state, cluster);
            (f, t)
        }
        Bd::And(a, c) => {
            let (t1, f1) = cluster_eval(a, lits, state, cluster);
            let (t2, f2) = cluster_eval(c, lits, state, cluster);
            (t1 && t2, f1 || f2)
        }
        Bd::Or(a, c) => {
            let (t1, f1) = cluster_eval(a, lits, state, cluster);
            let (t2, f2) = cluster_eval(c, lits, state, cluster);
            (t1 || t2, f1 && f2)
        }
        Bd::Nec(_, a) => {
            let vs: Vec<_> = cluster.iter().map(|&s| cluster_eval(a, lits, s, cluster)).collect();
            (vs.iter().all(|v| v.0), vs.iter().any(|v| v.1))
        }
        Bd::Pos(_, a) => {
            let vs: Vec<_> = cluster.iter().map(|&s| cluster_eval(a, lits, s, cluster)).collect();
            (vs.iter().any(|v| v.0), vs.iter().all(|v| v.1))
        }
    }
}

impl Space {
    fn signature(&self, wit: &[u32]) -> Vec<bool> {
        match self {
            Space::Valuations { vars, bodies } => bodies.iter().map(|b| classical(b, vars, wit[0])).collect(),
            Space::Clusters { lits, bodies } => {
                bodies.iter().map(|b| cluster_eval(b, lits, wit[0], wit).0).collect()
            }
        }
    }

    fn nested(&self) -> bool {
        match self {
            Space::Valuations { .. } => false,
            Space::Clusters { bodies, .. } => bodies.iter().any(|b| match b {
                Bd::Nec(_, a) | Bd::Pos(_, a) => !a.is_modal_free(),
                _ => true,
            }),
        }
    }

    fn max_cluster(&self) -> usize {
        match self {
            Space::Valuations { .. } => 1,
            Space::Clusters { bodies, .. } => 2 * tracked_formulas(bodies).len() + 1,
        }
    }

    /// All distinct signatures, each with its least witness.
    fn exhaustive(&self, opts: &Options) -> DResult<Vec<Column>> {
        let mut seen: BTreeMap<Vec<bool>, Vec<u32>> = BTreeMap::new();
        match self {
            Space::Valuations { vars, .. } => {
                if vars.len() > opts.prop_cap {
                    return Err(DecideError::TooLarge(format!(
                        "{} variables after ¬ removal exceed the cap {}",
                        vars.len(),
                        opts.prop_cap
                    )));
                }
                for v in 0..1u32 << vars.len() {
                    seen.entry(self.signature(&[v])).or_insert_with(|| vec![v]);
                }
            }
            Space::Clusters { lits, bodies } if !self.nested() => {
                if lits.len() > opts.lit_cap {
                    return Err(DecideError::TooLarge(format!(
                        "{} literals exceed the cap {}",
                        lits.len(),
                        opts.lit_cap
                    )));
                }
                // A cluster's signature is the AND (for □) / OR (for ◇) of
                // its states' signatures, so closing the singleton
                // signatures under that combination yields every cluster.
                let boxed: Vec<bool> = bodies.iter().map(|b| matches!(b, Bd::Nec(..))).collect();
                let mut singles: BTreeMap<Vec<bool>, u32> = BTreeMap::new();
                for s in 0..1u32 << lits.len() {
                    singles.entry(self.signature(&[s])).or_insert(s);
                }
                for (sig, s) in &singles {
                    seen.insert(sig.clone(), vec![*s]);
                }
                let mut frontier: Vec<Vec<bool>> = seen.keys().cloned().collect();
                while let Some(sig) = frontier.pop() {
                    let wit = seen[&sig].clone();
                    for (s_sig, s) in &singles {
                        let comb: Vec<bool> = sig
                            .iter()
                            .zip(s_sig)
                            .zip(&boxed)
                            .map(|((a, b), bx)| if *bx { *a && *b } else { *a || *b })
                            .collect();
                        if !seen.contains_key(&comb) {
                            let mut w = wit.clone();
                            if !w.contains(s) {
                                w.push(*s);
                                w.sort_unstable();
                            }
                            seen.insert(comb.clone(), w);
                            frontier.push(comb);
                        }
                    }
                }
            }
            Space::Clusters { lits, .. } => {
                let vars = lits.len() / 2;
                if vars > opts.nested_var_cap {
                    return Err(DecideError::TooLarge(format!(
                        "{vars} variables under nested modalities exceed the cap {}",
                        opts.nested_var_cap
                    )));
                }
                let nstates = 1u32 << lits.len();
                let max = self.max_cluster().min(nstates as usize);
                for mask in 1u64..1 << nstates {
                    if mask.count_ones() as usize > max {
                        continue;
                    }
                    let c: Vec<u32> = (0..nstates).filter(|s| mask >> s & 1 == 1).collect();
                    seen.entry(self.signature(&c)).or_insert(c);
                }
            }
        }
        Ok(seen.into_iter().map(|(sig, wit)| Column { sig, wit }).collect())
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> Column {
        let wit = match self {
            Space::Valuations { vars, .. } => vec![random_bits(rng, vars.len())],
            Space::Clusters { lits, .. } => {
                let size = rng.gen_range(1..=self.max_cluster());
                let mut c: Vec<u32> = (0..size).map(|_| random_bits(rng, lits.len())).collect();
                c.sort_unstable();
                c.dedup();
                c
            }
        };
        Column { sig: self.signature(&wit), wit }
    }
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        rng.gen::<u32>() & (u32::MAX >> (32 - n))
    }
}

// ---------------------------------------------------------------- engine

struct Found {
    branch: String,
    /// Values `(side 1, side 2)` of each leaf.
    leaves: Vec<(Rat, Rat)>,
    /// Per group: (column, weight) with positive weight.
    support: Vec<Vec<(Column, Rat)>>,
}

struct Engine<'a> {
    it: &'a Interned,
    calc: Calculus,
    groups: &'a [Group],
    opts: &'a Options,
    stats: Stats,
    dump: Vec<String>,
}

impl Engine<'_> {
    /// Branch system plus coherence over `cols`; a witness if feasible.
    fn check(&mut self, b: &Branch, cols: &[Vec<Column>]) -> Option<Found> {
        let (mut sys, mut lv) = branch_to_constraints(b, &self.it.arena);
        self.stats.systems += 1;
        let coherent = !self.groups.is_empty();
        if coherent {
            // Cheap pre-check without coherence.
            if !solve(&sys, false).0.is_feasible() {
                if self.opts.dump_lp {
                    self.dump.push(format!("# branch {} (infeasible)\n{}", b.id(), sys.dump()));
                }
                return None;
            }
        }
        let mut uvars: Vec<Vec<usize>> = Vec::new();
        for (g, group) in self.groups.iter().enumerate() {
            let us: Vec<usize> = (0..cols[g].len()).map(|k| sys.fresh(format!("u{g}_{k}"))).collect();
            let total = us.iter().fold(Lin::zero(), |acc, &u| acc.add(&Lin::var(u)));
            sys.push(Constraint::eq(total, Lin::one()));
            for (pos, &atom) in group.atoms.iter().enumerate() {
                let z = lv.ensure(&mut sys, &self.it.arena, atom as u32, 1);
                let mut sum = Lin::zero();
                for (k, c) in cols[g].iter().enumerate() {
                    if c.sig[pos] {
                        sum = sum.add(&Lin::var(us[k]));
                    }
                }
                sys.push(Constraint::eq(Lin::var(z), sum));
            }
            uvars.push(us);
        }
        let out = solve(&sys, true).0;
        if self.opts.dump_lp {
            let tag = if out.is_feasible() { "feasible" } else { "infeasible" };
            self.dump.push(format!("# branch {} ({tag})\n{}", b.id(), sys.dump()));
        }
        let Outcome::Feasible(x) = out else { return None };
        debug_assert!(sys.satisfied_by(&x));
        let support = uvars
            .iter()
            .enumerate()
            .map(|(g, us)| {
                us.iter()
                    .enumerate()
                    .filter(|(_, &u)| x[u] > zero())
                    .map(|(k, &u)| (cols[g][k].clone(), x[u].clone()))
                    .collect()
            })
            .collect();
        Some(Found { branch: b.id(), leaves: leaf_values(&lv, &self.it.arena, &x), support })
    }

    fn exhaustive(&mut self) -> DResult<Option<Found>> {
        let cols: Vec<Vec<Column>> =
            self.groups.iter().map(|g| g.space.exhaustive(self.opts)).collect::<DResult<_>>()?;
        self.stats.columns = cols.iter().map(|c| c.len()).sum();
        let it = self.it;
        for &alt in &it.alts {
            let root = root_branch(&it.arena, alt, &it.prems);
            let mut found = None;
            let mut prune = |b: &Branch| !solve(&branch_to_constraints(b, &it.arena).0, false).0.is_feasible();
            let _ = for_each_branch_pruned(root, &it.arena, self.calc, &mut prune, &mut |b| {
                self.stats.branches += 1;
                match self.check(b, &cols) {
                    Some(f) => {
                        found = Some(f);
                        ControlFlow::Break(())
                    }
                    None => ControlFlow::Continue(()),
                }
            })?;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn randomized(&mut self) -> DResult<Option<Found>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let size = self.opts.support.unwrap_or(self.it.atoms.len() + 1).max(1);
        for _ in 0..self.opts.budget {
            let alt = self.it.alts[rng.gen_range(0..self.it.alts.len())];
            let root = root_branch(&self.it.arena, alt, &self.it.prems);
            let b = random_branch(root, &self.it.arena, self.calc, &mut rng)?;
            self.stats.branches += 1;
            let cols: Vec<Vec<Column>> = self
                .groups
                .iter()
                .map(|g| {
                    let mut cs: Vec<Column> = Vec::new();
                    for _ in 0..size {
                        let c = g.space.random(&mut rng);
                        if !cs.iter().any(|d| d.sig == c.sig) {
                            cs.push(c);
                        }
                    }
                    cs
                })
                .collect();
            if let Some(f) = self.check(&b, &cols) {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }
}

fn run(q: &Query, groups_of: &dyn Fn(&[ModalAtom]) -> Vec<Group>, opts: &Options) -> DResult<(Interned, Option<Found>, Stats, Vec<String>)> {
    let it = intern(q)?;
    let groups = groups_of(&it.atoms);
    let mut e = Engine { it: &it, calc: q.calc, groups: &groups, opts, stats: Stats::default(), dump: Vec::new() };
    let found = match opts.mode {
        Mode::Exhaustive => e.exhaustive()?,
        Mode::Randomized => e.randomized()?,
    };
    let (stats, dump) = (e.stats, e.dump);
    Ok((it, found, stats, dump))
}

fn verdict(found: bool, opts: &Options, countermodel: Option<Countermodel>, stats: Stats, dump: Vec<String>) -> Verdict {
    let status = match (found, opts.mode) {
        (true, _) => Status::NotValid,
        (false, Mode::Exhaustive) => Status::Valid,
        (false, Mode::Randomized) => Status::Unknown,
    };
    Verdict { status, mode: opts.mode, countermodel, stats, lp_dump: dump }
}

// ---------------------------------------------------------------- propositional

fn prop_query(logic: LogicId, alpha: &Fm, gamma: &[Fm]) -> DResult<Query> {
    let le = |f: &Fm| Alt { f: f.clone(), side: 1, dir: Dir::Le };
    Ok(match logic {
        LogicId::LukDelta => Query {
            calc: Calculus::Luk2,
            alts: vec![le(alpha)],
            prems: gamma.iter().map(|g| Prem::designated(g.clone(), 1)).collect(),
        },
        LogicId::Luk2Delta => Query {
            calc: Calculus::Luk2,
            alts: vec![le(alpha), Alt { f: alpha.clone(), side: 2, dir: Dir::Ge }],
            prems: gamma
                .iter()
                .flat_map(|g| [Prem::designated(g.clone(), 1), Prem::designated(g.clone(), 2)])
                .collect(),
        },
        LogicId::NLuk => Query {
            calc: Calculus::NLuk,
            alts: vec![le(alpha)],
            prems: gamma.iter().map(|g| Prem::designated(g.clone(), 1)).collect(),
        },
        l => return Err(DecideError::Unsupported(format!("{} is not propositional", l.name()))),
    })
}

pub fn prop_value(logic: LogicId, v: &BTreeMap<String, Pair>, f: &Fm) -> Result<OuterValue, EvalError> {
    Ok(match logic {
        LogicId::LukDelta => {
            let s: BTreeMap<String, Rat> = v.iter().map(|(k, p)| (k.clone(), p.t.clone())).collect();
            OuterValue::Single(eval_luk_delta(&s, f)?)
        }
        LogicId::Luk2Delta => OuterValue::Pair(eval_luk2(v, f)?),
        _ => OuterValue::Pair(eval_nluk(v, f)?),
    })
}

/// Propositional ŁΔ, Ł²(Δ,→) and NŁ: `Γ ⊨ α` by tableau.
pub fn decide_prop(logic: LogicId, alpha: &Fm, gamma: &[Fm], opts: &Options) -> DResult<Verdict> {
    let q = prop_query(logic, alpha, gamma)?;
    let mut it = Interned { arena: Arena::new(), alts: Vec::new(), prems: Vec::new(), atoms: Vec::new() };
    for a in &q.alts {
        let n = it.arena.intern(&a.f)?;
        it.alts.push((n, a.side, a.dir));
    }
    for p in &q.prems {
        let n = it.arena.intern(&p.f)?;
        it.prems.push((n, p.side, p.dir));
    }
    let mut e = Engine { it: &it, calc: q.calc, groups: &[], opts, stats: Stats::default(), dump: Vec::new() };
    let found = match opts.mode {
        Mode::Exhaustive => e.exhaustive()?,
        Mode::Randomized => e.randomized()?,
    };
    let (stats, dump) = (e.stats, e.dump);
    let Some(found) = found else { return Ok(verdict(false, opts, None, stats, dump)) };

    let mut vars = alpha.pvars();
    for g in gamma {
        g.pvars_into(&mut vars);
    }
    let mut val: BTreeMap<String, Pair> = BTreeMap::new();
    for p in &vars {
        let (t, f) = match it.arena.leaf_id(p) {
            Some(l) => found.leaves[l as usize].clone(),
            None => (zero(), zero()),
        };
        val.insert(p.clone(), Pair::new(t, f));
    }
    let eval = |f: &Fm| prop_value(logic, &val, f).map_err(|e| DecideError::Unsound(e.to_string()));
    let value = eval(alpha)?;
    if designated(logic, &value) {
        return Err(DecideError::Unsound(format!("{alpha} gets designated {value}")));
    }
    for g in gamma {
        let v = eval(g)?;
        if !designated(logic, &v) {
            return Err(DecideError::Unsound(format!("premise {g} gets {v}")));
        }
    }
    let show_val = |p: &Pair| match logic {
        LogicId::LukDelta => OuterValue::Single(p.t.clone()),
        _ => OuterValue::Pair(p.clone()),
    };
    let table: BTreeMap<String, OuterValue> = val.iter().map(|(k, p)| (k.clone(), show_val(p))).collect();
    let cm = Countermodel {
        atoms: table.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        witness: Witness::Valuation(table),
        branch: found.branch,
        value,
    };
    Ok(verdict(true, opts, Some(cm), stats, dump))
}

// ---------------------------------------------------------------- plain probabilities

/// Coherence over classical valuations of the starred bodies; worlds of the
/// countermodel are BD points built back from `p` and `p__n`.
fn valuation_group(atoms: &[ModalAtom]) -> Vec<Group> {
    valuations_of(atoms.iter().map(|a| star_body(&a.body)).collect())
}

/// As [`valuation_group`], with each 4Pr atom read as membership in its cell.
fn cell_group(atoms: &[ModalAtom]) -> Vec<Group> {
    let bodies = atoms
        .iter()
        .map(|a| {
            let t = star_body(&a.body);
            let f = star_body(&a.body.clone().neg());
            match a.tag {
                Tag::Bl => t.and(f.neg()),
                Tag::Db => t.neg().and(f),
                Tag::Cf => t.and(f),
                _ => t.neg().and(f.neg()),
            }
        })
        .collect();
    valuations_of(bodies)
}

fn valuations_of(bodies: Vec<Bd>) -> Vec<Group> {
    let mut vs = BTreeSet::new();
    for b in &bodies {
        b.vars_into(&mut vs);
    }
    vec![Group { atoms: (0..bodies.len()).collect(), space: Space::Valuations { vars: vs.into_iter().collect(), bodies } }]
}

fn bd_world_model(vars: &[String], support: &[(Column, Rat)]) -> (BDModel, Vec<Rat>) {
    let names: Vec<String> = support
        .iter()
        .map(|(c, _)| {
            let on: Vec<&str> =
                vars.iter().enumerate().filter(|(i, _)| c.wit[0] >> i & 1 == 1).map(|(_, v)| v.as_str()).collect();
            format!("v{{{}}}", on.join(","))
        })
        .collect();
    let mut base = BDModel::new(names);
    let props: BTreeSet<&str> =
        vars.iter().map(|v| v.strip_suffix(crate::syntax::RESERVED_SUFFIX).unwrap_or(v)).collect();
    for (w, (c, _)) in support.iter().enumerate() {
        let bit = |name: &str| vars.iter().position(|v| v == name).is_some_and(|i| c.wit[0] >> i & 1 == 1);
        for p in &props {
            let pos = bit(p);
            let neg = bit(&crate::translate::primed(p));
            base.set(p, w, FourValue::from_bits(pos, neg));
        }
    }
    let weights = support.iter().map(|(_, r)| r.clone()).collect();
    (base, weights)
}

fn pm_query(alpha: &Fm, gamma: &[Fm], both: bool) -> Query {
    let pushed = |f: &Fm| neg_push(f);
    let mut alts = vec![Alt { f: pushed(alpha), side: 1, dir: Dir::Le }];
    let mut prems: Vec<Prem> = gamma.iter().map(|g| Prem::designated(pushed(g), 1)).collect();
    if both {
        alts.push(Alt { f: pushed(&alpha.clone().neg()), side: 1, dir: Dir::Ge });
        prems.extend(gamma.iter().map(|g| Prem { f: pushed(&g.clone().neg()), side: 1, dir: Dir::Le }));
    }
    Query { calc: Calculus::Luk2, alts, prems }
}

/// Evaluates `α` and `Γ` on `m` and insists on a genuine countermodel.
fn recheck(m: &TLModel, alpha: &Fm, gamma: &[Fm], found: Found) -> DResult<Countermodel> {
    let value = m.eval(alpha)?;
    if designated(m.logic, &value) {
        return Err(DecideError::Unsound(format!("{alpha} gets designated {value}")));
    }
    for g in gamma {
        let v = m.eval(g)?;
        if !designated(m.logic, &v) {
            return Err(DecideError::Unsound(format!("premise {g} gets {v}")));
        }
    }
    let mut atoms = alpha.atoms();
    for g in gamma {
        g.atoms_into(&mut atoms);
    }
    let table = atoms
        .iter()
        .map(|a| Ok((a.to_string(), m.induce(a)?)))
        .collect::<Result<Vec<_>, TLError>>()?;
    Ok(Countermodel { witness: Witness::Model(m.clone()), atoms: table, branch: found.branch, value })
}

fn decide_measured(logic: LogicId, alpha: &Fm, gamma: &[Fm], q: Query, opts: &Options) -> DResult<Verdict> {
    let groups_of = if logic == LogicId::FourPr { cell_group } else { valuation_group };
    let (it, found, stats, dump) = run(&q, &groups_of, opts)?;
    let Some(found) = found else { return Ok(verdict(false, opts, None, stats, dump)) };
    let vars = match &groups_of(&it.atoms)[0].space {
        Space::Valuations { vars, .. } => vars.clone(),
        Space::Clusters { .. } => unreachable!(),
    };
    let (base, weights) = bd_world_model(&vars, &found.support[0]);
    let m = TLModel::unchecked(logic, Structure::Measured { base, measures: vec![Measure::atoms(weights).map_err(TLError::from)?] })?;
    let cm = recheck(&m, alpha, gamma, found)?;
    Ok(verdict(true, opts, Some(cm), stats, dump))
}

/// `Γ ⊨ α` in Pr^Ł²Δ: designation `(1,0)` splits into `e₁(α^¬)=1` and
/// `e₁((¬α)^¬)=0`.
pub fn decide_pr_luk2(alpha: &Fm, gamma: &[Fm], opts: &Options) -> DResult<Verdict> {
    decide_measured(LogicId::PrLuk2, alpha, gamma, pm_query(alpha, gamma, true), opts)
}

/// `Γ ⊨ β` in 4Pr^ŁΔ. Atoms are read directly as measures of the four
/// cells, so this route shares nothing with `β^±` beyond the LP engine.
pub fn decide_four_pr(beta: &Fm, gamma: &[Fm], opts: &Options) -> DResult<Verdict> {
    let q = Query {
        calc: Calculus::Luk2,
        alts: vec![Alt { f: beta.clone(), side: 1, dir: Dir::Le }],
        prems: gamma.iter().map(|g| Prem::designated(g.clone(), 1)).collect(),
    };
    decide_measured(LogicId::FourPr, beta, gamma, q, opts)
}

// ---------------------------------------------------------------- S5 probabilities

fn cluster_groups(atoms: &[ModalAtom], rels: usize) -> Vec<Group> {
    (0..rels)
        .map(|r| {
            let mine: Vec<usize> =
                (0..atoms.len()).filter(|&i| usize::from(atoms[i].tag == Tag::Pr2) == r).collect();
            let bodies: Vec<Bd> = mine.iter().map(|&i| atoms[i].body.clone()).collect();
            let lits = canonical_literals(&bodies);
            Group { atoms: mine, space: Space::Clusters { lits, bodies } }
        })
        .collect()
}

/// One block per supported cluster, its weight on the block's least state.
fn cluster_model(group: &Group, support: &[(Column, Rat)]) -> DResult<KripkeModel> {
    let Space::Clusters { lits, .. } = &group.space else { unreachable!() };
    let clusters: Vec<Vec<u32>> = support.iter().map(|(c, _)| c.wit.clone()).collect();
    let weights: Vec<Vec<Rat>> = support
        .iter()
        .map(|(c, r)| {
            let mut w = vec![zero(); c.wit.len()];
            w[0] = r.clone();
            w
        })
        .collect();
    model_of_clusters(lits, &clusters, Some(&weights)).map_err(|e| DecideError::Model(e.into()))
}

/// Side by side union of two single-relation models; each relation sees the
/// other model's worlds as measure-zero singletons.
fn join_models(a: &KripkeModel, b: &KripkeModel) -> DResult<KripkeModel> {
    let (na, nb) = (a.n(), b.n());
    let n = na + nb;
    let names = a.base.worlds.iter().map(|w| format!("1{w}")).chain(b.base.worlds.iter().map(|w| format!("2{w}"))).collect();
    let mut base = BDModel::new(names);
    for (m, off) in [(a, 0), (b, na)] {
        for p in m.base.vars() {
            for w in 0..m.n() {
                base.set(&p, w + off, m.base.value(&p, w));
            }
        }
    }
    let shift = |s: &WSet, off: usize| WSet::from_iter(n, s.iter().map(|w| w + off));
    let single = |w: usize| WSet::from_iter(n, [w]);
    let p1 = a.partitions[0].iter().map(|s| shift(s, 0)).chain((na..n).map(single)).collect();
    let p2 = (0..na).map(single).chain(b.partitions[0].iter().map(|s| shift(s, na))).collect();
    let m1 = a.measures[0].iter().cloned().chain(std::iter::repeat(zero()).take(nb)).collect();
    let m2 = std::iter::repeat(zero()).take(na).chain(b.measures[0].iter().cloned()).collect();
    KripkeModel::new(base, vec![p1, p2], vec![m1, m2]).map_err(|e| DecideError::Model(e.into()))
}

/// Runs the S5 engine and returns the Kripke countermodel, if any.
fn s5_search(q: &Query, rels: usize, opts: &Options) -> DResult<(Option<(KripkeModel, Found)>, Stats, Vec<String>)> {
    let groups_of = |atoms: &[ModalAtom]| cluster_groups(atoms, rels);
    let (it, found, stats, dump) = run(q, &groups_of, opts)?;
    let Some(found) = found else { return Ok((None, stats, dump)) };
    let groups = cluster_groups(&it.atoms, rels);
    let models: Vec<KripkeModel> = groups
        .iter()
        .zip(&found.support)
        .map(|(g, s)| {
            if g.atoms.is_empty() {
                // No atom reads this relation: any probability will do.
                let one_state = vec![(Column { sig: vec![], wit: vec![0] }, one())];
                cluster_model(&Group { atoms: vec![], space: Space::Clusters { lits: vec![], bodies: vec![] } }, &one_state)
            } else {
                cluster_model(g, s)
            }
        })
        .collect::<DResult<_>>()?;
    let k = if rels == 1 { models.into_iter().next().unwrap() } else { join_models(&models[0], &models[1])? };
    Ok((Some((k, found)), stats, dump))
}

fn nelson_query(alpha: &Fm, gamma: &[Fm], logic: LogicId) -> Query {
    Query {
        calc: Calculus::NLuk,
        alts: vec![Alt { f: normalize(logic, alpha), side: 1, dir: Dir::Le }],
        prems: gamma.iter().map(|g| Prem::designated(normalize(logic, g), 1)).collect(),
    }
}

fn check_single_relation(fs: &[&Fm], idx: &[u8]) -> DResult<()> {
    fn ok(b: &Bd, i: u8) -> bool {
        match b {
            Bd::Var(_) => true,
            Bd::Neg(a) => ok(a, i),
            Bd::And(a, c) | Bd::Or(a, c) => ok(a, i) && ok(c, i),
            Bd::Nec(j, a) | Bd::Pos(j, a) => *j == i && ok(a, i),
        }
    }
    for f in fs {
        for a in f.atoms() {
            let i = match a.tag {
                Tag::Pr1 => 1,
                Tag::Pr2 => 2,
                _ => 0,
            };
            if idx.contains(&i) && !ok(&a.body, i) {
                return Err(DecideError::Unsupported(format!("`{a}` nests modalities of the other relation")));
            }
        }
    }
    Ok(())
}

/// `Γ ⊨ α` in Prob_S5^(Δ,→), designation `(1,0)`.
pub fn decide_prob_s5(alpha: &Fm, gamma: &[Fm], opts: &Options) -> DResult<Verdict> {
    let q = pm_query(alpha, gamma, true);
    let (res, stats, dump) = s5_search(&q, 1, opts)?;
    let Some((k, found)) = res else { return Ok(verdict(false, opts, None, stats, dump)) };
    let m = TLModel::unchecked(LogicId::ProbS5, Structure::Kripke(k))?;
    let cm = recheck(&m, alpha, gamma, found)?;
    Ok(verdict(true, opts, Some(cm), stats, dump))
}

/// `Γ ⊨ α` in Prob^NŁ_S5 with the truth coordinate designated.
pub fn decide_prob_nluk_s5(alpha: &Fm, gamma: &[Fm], opts: &Options) -> DResult<Verdict> {
    let mut all: Vec<&Fm> = vec![alpha];
    all.extend(gamma);
    check_single_relation(&all, &[1, 2])?;
    let q = nelson_query(alpha, gamma, LogicId::ProbNLukS5);
    let (res, stats, dump) = s5_search(&q, 2, opts)?;
    let Some((k, found)) = res else { return Ok(verdict(false, opts, None, stats, dump)) };
    let m = TLModel::unchecked(LogicId::ProbNLukS5, Structure::Kripke(k))?;
    let cm = recheck(&m, alpha, gamma, found)?;
    Ok(verdict(true, opts, Some(cm), stats, dump))
}

// ---------------------------------------------------------------- belief

/// Bel^Ł²Δ via `⊞/⊟`: `α` fails iff `e₁(α^⊞)<1` or `e₁(α^⊟)>0` somewhere.
pub fn decide_bel_luk2(alpha: &Fm, gamma: &[Fm], opts: &Options) -> DResult<Verdict> {
    let n = neg_push(alpha);
    let gs: Vec<Fm> = gamma.iter().map(neg_push).collect();
    let mut prems = Vec::new();
    for g in &gs {
        prems.push(Prem { f: boxplus(g)?, side: 1, dir: Dir::Ge });
        prems.push(Prem { f: boxminus(g)?, side: 1, dir: Dir::Le });
    }
    let q = Query {
        calc: Calculus::Luk2,
        alts: vec![Alt { f: boxplus(&n)?, side: 1, dir: Dir::Le }, Alt { f: boxminus(&n)?, side: 1, dir: Dir::Ge }],
        prems,
    };
    let (res, stats, dump) = s5_search(&q, 1, opts)?;
    let Some((k, found)) = res else { return Ok(verdict(false, opts, None, stats, dump)) };
    let mass = induced_mass(&k, 0);
    let m = TLModel::unchecked(LogicId::BelLuk2, Structure::Measured { base: k.base.clone(), measures: vec![Measure::Belief(mass)] })?;
    let cm = recheck(&m, alpha, gamma, found)?;
    Ok(verdict(true, opts, Some(cm), stats, dump))
}

/// Bel^NŁ via `□,◇`: belief from the first relation, plausibility from the second.
pub fn decide_bel_nluk(alpha: &Fm, gamma: &[Fm], opts: &Options) -> DResult<Verdict> {
    let tr = |f: &Fm| box_dia(&normalize(LogicId::BelNLuk, f));
    let q = Query {
        calc: Calculus::NLuk,
        alts: vec![Alt { f: tr(alpha)?, side: 1, dir: Dir::Le }],
        prems: gamma.iter().map(|g| Ok(Prem::designated(tr(g)?, 1))).collect::<DResult<_>>()?,
    };
    let (res, stats, dump) = s5_search(&q, 2, opts)?;
    let Some((k, found)) = res else { return Ok(verdict(false, opts, None, stats, dump)) };
    let measures = vec![Measure::Belief(induced_mass(&k, 0)), Measure::Plausibility(induced_mass(&k, 1))];
    let m = TLModel::unchecked(LogicId::BelNLuk, Structure::Measured { base: k.base.clone(), measures })?;
    let cm = recheck(&m, alpha, gamma, found)?;
    Ok(verdict(true, opts, Some(cm), stats, dump))
}

/// Dispatches on the logic.
pub fn decide(logic: LogicId, alpha: &Fm, gamma: &[Fm], opts: &Options) -> DResult<Verdict> {
    match logic {
        LogicId::LukDelta | LogicId::Luk2Delta | LogicId::NLuk => decide_prop(logic, alpha, gamma, opts),
        LogicId::PrLuk2 => decide_pr_luk2(alpha, gamma, opts),
        LogicId::FourPr => decide_four_pr(alpha, gamma, opts),
        LogicId::ProbS5 => decide_prob_s5(alpha, gamma, opts),
        LogicId::ProbNLukS5 => decide_prob_nluk_s5(alpha, gamma, opts),
        LogicId::BelLuk2 => decide_bel_luk2(alpha, gamma, opts),
        LogicId::BelNLuk => decide_bel_nluk(alpha, gamma, opts),
    }
}

// ---------------------------------------------------------------- random search

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    let mut raw: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=6) }).collect();
    if raw.iter().all(|&x| x == 0) {
        raw[rng.gen_range(0..n)] = 1;
    }
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|x| crate::rat::frac(x, total)).collect()
}

fn random_base(rng: &mut ChaCha8Rng, vars: &BTreeSet<String>, n: usize) -> BDModel {
    let mut base = BDModel::new((0..n).map(|i| format!("w{}", i + 1)).collect());
    for p in vars {
        for w in 0..n {
            base.set(p, w, FourValue::ALL[rng.gen_range(0..4)]);
        }
    }
    base
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<WSet> {
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n.max(1))).collect();
    let mut seen: Vec<usize> = labels.clone();
    seen.sort_unstable();
    seen.dedup();
    seen.iter().map(|l| WSet::from_iter(n, (0..n).filter(|&w| labels[w] == *l))).collect()
}

fn random_mass(rng: &mut ChaCha8Rng, n: usize) -> crate::measures::Mass {
    let k = rng.gen_range(1..=3usize);
    let ws = random_weights(rng, k);
    let sets: Vec<WSet> = (0..k)
        .map(|_| {
            let mut s = WSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.5)));
            if s.is_empty() {
                s.insert(rng.gen_range(0..n));
            }
            s
        })
        .collect();
    crate::measures::Mass::new(n, sets.into_iter().zip(ws).collect()).expect("weights sum to 1")
}

/// A random model of `logic` over the variables of `fs`.
pub fn random_model(logic: LogicId, fs: &[&Fm], rng: &mut ChaCha8Rng) -> Option<TLModel> {
    let mut vars = BTreeSet::new();
    for f in fs {
        vars.extend(f.inner_vars());
    }
    let n = rng.gen_range(1..=4usize);
    let base = random_base(rng, &vars, n);
    let structure = match logic {
        LogicId::PrLuk2 | LogicId::FourPr => {
            Structure::Measured { base, measures: vec![Measure::atoms(random_weights(rng, n)).ok()?] }
        }
        LogicId::BelLuk2 => Structure::Measured { base, measures: vec![Measure::Belief(random_mass(rng, n))] },
        LogicId::BelNLuk => Structure::Measured {
            base,
            measures: vec![Measure::Belief(random_mass(rng, n)), Measure::Plausibility(random_mass(rng, n))],
        },
        LogicId::ProbS5 => {
            let p = random_partition(rng, n);
            Structure::Kripke(KripkeModel::new(base, vec![p], vec![random_weights(rng, n)]).ok()?)
        }
        LogicId::ProbNLukS5 => {
            let (p1, p2) = (random_partition(rng, n), random_partition(rng, n));
            let ms = vec![random_weights(rng, n), random_weights(rng, n)];
            Structure::Kripke(KripkeModel::new(base, vec![p1, p2], ms).ok()?)
        }
        _ => return None,
    };
    TLModel::unchecked(logic, structure).ok()
}

/// Samples random models looking for one that designates `Γ` but not `α`.
pub fn falsify_by_search(logic: LogicId, alpha: &Fm, gamma: &[Fm], budget: usize, seed: u64) -> Option<TLModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fs: Vec<&Fm> = vec![alpha];
    fs.extend(gamma);
    for _ in 0..budget {
        let m = random_model(logic, &fs, &mut rng)?;
        if let Ok(false) = m.entails_on_model(gamma, alpha) {
            return Some(m);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn check(logic: LogicId, src: &str) -> Verdict {
        let f = parse(src, logic).unwrap();
        decide(logic, &f, &[], &Options::default()).unwrap()
    }

    #[test]
    fn propositional() {
        assert!(check(LogicId::LukDelta, "((p -> q) -> q) -> ((q -> p) -> p)").valid());
        assert!(check(LogicId::LukDelta, "#p | ~#p").valid());
        let v = check(LogicId::LukDelta, "p");
        assert_eq!(v.status, Status::NotValid);
        assert_eq!(v.countermodel.unwrap().atoms, vec![("p".to_string(), OuterValue::Single(zero()))]);
        assert!(check(LogicId::Luk2Delta, "p -> p").valid());
        assert!(check(LogicId::Luk2Delta, "!p -> !p").valid());
        assert!(!check(LogicId::Luk2Delta, "p | !p").valid());
        assert!(check(LogicId::NLuk, "(p & q) -> p").valid());
    }

    #[test]
    fn pr_luk2() {
        assert!(check(LogicId::PrLuk2, "Pr !p <-> !Pr p").valid());
        assert!(!check(LogicId::PrLuk2, "Pr p (+) Pr !p").valid());
        assert!(!check(LogicId::PrLuk2, "~(Pr p (+) Pr !p)").valid());
        assert!(check(LogicId::PrLuk2, "Pr (p & q) -> Pr p").valid());
    }

    #[test]
    fn four_pr() {
        assert!(check(LogicId::FourPr, "Bl p (+) Db p (+) Cf p (+) Uc p").valid());
        assert!(check(LogicId::FourPr, "Bl !p <-> Db p").valid());
        assert!(check(LogicId::FourPr, "~Bl (p & !p)").valid());
        assert!(!check(LogicId::FourPr, "Bl p -> Bl q").valid());
    }

    #[test]
    fn prob_s5() {
        assert!(check(LogicId::ProbS5, "Pr []p -> Pr <>p").valid());
        assert!(check(LogicId::ProbS5, "Pr []p -> Pr [](p | q)").valid());
        assert!(!check(LogicId::ProbS5, "Pr <>p -> Pr []p").valid());
    }

    #[test]
    fn belief() {
        assert!(check(LogicId::BelLuk2, "B p -> B (p | q)").valid());
        assert!(!check(LogicId::BelLuk2, "B (p & q) <-> (B p (.) B q)").valid());
        // A conflicted world believes both p and ¬p.
        let v = check(LogicId::BelLuk2, "B p -> ~B !p");
        assert_eq!(v.status, Status::NotValid);
        assert!(check(LogicId::BelNLuk, "B p -> B p").valid());
        assert!(!check(LogicId::BelNLuk, "B p -> Pl p").valid());
        assert!(!check(LogicId::BelNLuk, "~B (p & !p)").valid());
    }
}
