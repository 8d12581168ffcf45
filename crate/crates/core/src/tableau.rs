//! Constraint tableaux T(Ł²(Δ,→)) and T(NŁ).
//!
//! Entries are `φ ⩽ₛ i` / `φ ⩾ₛ i` with `s` the component (1 = truth
//! support, 2 = falsity support) and `i` an affine label over label
//! variables. A complete branch is open iff its linear system (see
//! [`branch_to_constraints`]) is feasible.

use crate::linarith::{Constraint, Lin, LinSystem, VarId};
use crate::rat::Rat;
use crate::syntax::Fm;
use rand::Rng;
use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;

pub type NodeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(u32),
    Neg(NodeId),
    Tilde(NodeId),
    Delta(NodeId),
    Imp(NodeId, NodeId),
    NTilde(NodeId),
    NImp(NodeId, NodeId),
    And(NodeId, NodeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calculus {
    Luk2,
    NLuk,
}

impl Calculus {
    fn admits(self, n: Node) -> bool {
        match n {
            Node::Leaf(_) | Node::Neg(_) => true,
            Node::Tilde(_) | Node::Delta(_) | Node::Imp(..) => self == Calculus::Luk2,
            Node::NTilde(_) | Node::NImp(..) | Node::And(..) => self == Calculus::NLuk,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableauError {
    #[error("connective `{0}` has no rule in this calculus")]
    Connective(String),
    #[error("modal atom `{0}` must be abstracted to a variable first")]
    Atom(String),
}

/// Hash-consed formula DAG; leaves are propositional variables.
#[derive(Clone, Debug, Default)]
pub struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    leaf_names: Vec<String>,
    leaf_index: HashMap<String, u32>,
}

impl Arena {
    pub fn new() -> Arena {
        Arena::default()
    }

    pub fn mk(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n);
        self.index.insert(n, id);
        id
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    pub fn leaf(&mut self, name: &str) -> u32 {
        if let Some(&l) = self.leaf_index.get(name) {
            return l;
        }
        let l = self.leaf_names.len() as u32;
        self.leaf_names.push(name.to_string());
        self.leaf_index.insert(name.to_string(), l);
        l
    }

    pub fn leaf_name(&self, l: u32) -> &str {
        &self.leaf_names[l as usize]
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_names.len()
    }

    pub fn leaf_id(&self, name: &str) -> Option<u32> {
        self.leaf_index.get(name).copied()
    }

    pub fn intern(&mut self, f: &Fm) -> Result<NodeId, TableauError> {
        let n = match f {
            Fm::Var(p) => Node::Leaf(self.leaf(p)),
            Fm::Atom(a) => return Err(TableauError::Atom(a.to_string())),
            Fm::Neg(a) => Node::Neg(self.intern(a)?),
            Fm::Tilde(a) => Node::Tilde(self.intern(a)?),
            Fm::Delta(a) => Node::Delta(self.intern(a)?),
            Fm::NTilde(a) => Node::NTilde(self.intern(a)?),
            Fm::Imp(a, b) => {
                let x = self.intern(a)?;
                Node::Imp(x, self.intern(b)?)
            }
            Fm::NImp(a, b) => {
                let x = self.intern(a)?;
                Node::NImp(x, self.intern(b)?)
            }
            Fm::And(a, b) => {
                let x = self.intern(a)?;
                Node::And(x, self.intern(b)?)
            }
        };
        Ok(self.mk(n))
    }

    pub fn to_fm(&self, id: NodeId) -> Fm {
        let b = |x: NodeId| Box::new(self.to_fm(x));
        match self.node(id) {
            Node::Leaf(l) => Fm::Var(self.leaf_name(l).to_string()),
            Node::Neg(a) => Fm::Neg(b(a)),
            Node::Tilde(a) => Fm::Tilde(b(a)),
            Node::Delta(a) => Fm::Delta(b(a)),
            Node::NTilde(a) => Fm::NTilde(b(a)),
            Node::Imp(x, y) => Fm::Imp(b(x), b(y)),
            Node::NImp(x, y) => Fm::NImp(b(x), b(y)),
            Node::And(x, y) => Fm::And(b(x), b(y)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Le,
    Ge,
}

impl Dir {
    fn flip(self) -> Dir {
        match self {
            Dir::Le => Dir::Ge,
            Dir::Ge => Dir::Le,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub node: NodeId,
    pub side: u8,
    pub dir: Dir,
    pub label: Lin,
}

#[derive(Clone, Debug, Default)]
pub struct Branch {
    pub entries: Vec<Entry>,
    pub cons: Vec<Constraint>,
    /// Label variable names; label variable `v` is `labels[v]`.
    pub labels: Vec<String>,
    /// Column chosen at each branching rule, root first.
    pub path: Vec<u8>,
    next: usize,
}

enum Item {
    E(NodeId, u8, Dir, Lin),
    C(Constraint),
}

impl Branch {
    pub fn new() -> Branch {
        Branch::default()
    }

    pub fn fresh(&mut self, name: impl Into<String>) -> VarId {
        self.labels.push(name.into());
        self.labels.len() - 1
    }

    pub fn constrain(&mut self, c: Constraint) {
        self.cons.push(c);
    }

    /// Adds an entry; compound entries also get the label bound that keeps
    /// the entry within the value range.
    pub fn add_entry(&mut self, arena: &Arena, node: NodeId, side: u8, dir: Dir, label: Lin) {
        if !matches!(arena.node(node), Node::Leaf(_)) {
            self.cons.push(match dir {
                Dir::Le => Constraint::ge(label.clone(), Lin::zero()),
                Dir::Ge => Constraint::le(label.clone(), Lin::one()),
            });
        }
        self.entries.push(Entry { node, side, dir, label });
    }

    pub fn id(&self) -> String {
        if self.path.is_empty() {
            "root".to_string()
        } else {
            self.path.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
        }
    }

    fn advance(&mut self, arena: &Arena) {
        while self.next < self.entries.len() && matches!(arena.node(self.entries[self.next].node), Node::Leaf(_)) {
            self.next += 1;
        }
    }

    pub fn is_complete(&mut self, arena: &Arena) -> bool {
        self.advance(arena);
        self.next == self.entries.len()
    }

    pub fn display<'a>(&'a self, arena: &'a Arena) -> BranchDisplay<'a> {
        BranchDisplay { b: self, arena }
    }
}

fn k(r: i64) -> Lin {
    Lin::konst(crate::rat::int(r))
}

/// Conclusion columns of the rule for `e`; `None` for leaves.
fn rule(e: &Entry, n: Node, b: &mut Branch, calc: Calculus) -> Result<Option<Vec<Vec<Item>>>, TableauError> {
    use Dir::*;
    use Item::{C, E};
    if !calc.admits(n) {
        return Err(TableauError::Connective(format!("{n:?}")));
    }
    let i = e.label.clone();
    let s = e.side;
    let mut j = || Lin::var(b.fresh(format!("j{}", b.labels.len())));
    let cols = match (n, s, e.dir) {
        (Node::Leaf(_), ..) => return Ok(None),
        (Node::Neg(a), _, d) => vec![vec![E(a, 3 - s, d, i)]],
        (Node::Tilde(a), _, d) => vec![vec![E(a, s, d.flip(), i.one_minus())]],
        (Node::NTilde(a), 1, d) => vec![vec![E(a, 1, d.flip(), i.one_minus())]],
        (Node::NTilde(a), _, d) => vec![vec![E(a, 1, d, i)]],
        (Node::Delta(a), 1, Ge) => {
            let j = j();
            vec![vec![C(Constraint::le(i, k(0)))], vec![E(a, 1, Ge, j.clone()), C(Constraint::ge(j, k(1)))]]
        }
        (Node::Delta(a), 1, Le) => {
            let j = j();
            vec![vec![C(Constraint::ge(i, k(1)))], vec![E(a, 1, Le, j.clone()), C(Constraint::lt(j, k(1)))]]
        }
        (Node::Delta(a), _, Le) => {
            let j = j();
            vec![vec![C(Constraint::ge(i, k(1)))], vec![E(a, 2, Le, j.clone()), C(Constraint::le(j, k(0)))]]
        }
        (Node::Delta(a), _, Ge) => {
            let j = j();
            vec![vec![C(Constraint::le(i, k(0)))], vec![E(a, 2, Ge, j.clone()), C(Constraint::gt(j, k(0)))]]
        }
        (Node::Imp(x, y) | Node::NImp(x, y), 1, Le) => {
            let j = j();
            vec![
                vec![C(Constraint::ge(i.clone(), k(1)))],
                vec![
                    E(x, 1, Ge, i.one_minus().add(&j)),
                    E(y, 1, Le, j.clone()),
                    C(Constraint::le(j, i)),
                ],
            ]
        }
        (Node::Imp(x, y) | Node::NImp(x, y), 1, Ge) => {
            let j = j();
            vec![vec![E(x, 1, Le, i.one_minus().add(&j)), E(y, 1, Ge, j)]]
        }
        (Node::Imp(x, y), _, Le) => {
            let j = j();
            vec![vec![E(x, 2, Ge, j.clone()), E(y, 2, Le, i.add(&j))]]
        }
        (Node::Imp(x, y), _, Ge) => {
            let j = j();
            vec![
                vec![C(Constraint::le(i.clone(), k(0)))],
                vec![
                    E(x, 2, Le, j.clone()),
                    E(y, 2, Ge, i.add(&j)),
                    C(Constraint::le(j, i.one_minus())),
                ],
            ]
        }
        (Node::NImp(x, y), _, Le) => {
            let j = j();
            vec![vec![E(x, 1, Le, i.add(&j)), E(y, 2, Le, j.one_minus())]]
        }
        (Node::NImp(x, y), _, Ge) => {
            let j = j();
            vec![
                vec![C(Constraint::le(i.clone(), k(0)))],
                vec![
                    E(x, 1, Ge, i.add(&j)),
                    E(y, 2, Ge, j.one_minus()),
                    C(Constraint::le(j, i.one_minus())),
                ],
            ]
        }
        (Node::And(x, y), 1, Le) => vec![vec![E(x, 1, Le, i.clone())], vec![E(y, 1, Le, i)]],
        (Node::And(x, y), 1, Ge) => vec![vec![E(x, 1, Ge, i.clone()), E(y, 1, Ge, i)]],
        (Node::And(x, y), _, Le) => vec![vec![E(x, 2, Le, i.clone()), E(y, 2, Le, i)]],
        (Node::And(x, y), _, Ge) => vec![vec![E(x, 2, Ge, i.clone())], vec![E(y, 2, Ge, i)]],
    };
    Ok(Some(cols))
}

/// Expands the first unexpanded compound entry; one successor per column.
/// A complete branch yields no successors.
pub fn expand(mut b: Branch, arena: &Arena, calc: Calculus) -> Result<Vec<Branch>, TableauError> {
    b.advance(arena);
    if b.next == b.entries.len() {
        return Ok(Vec::new());
    }
    let e = b.entries[b.next].clone();
    b.next += 1;
    let cols = rule(&e, arena.node(e.node), &mut b, calc)?.expect("compound entry");
    let many = cols.len() > 1;
    let mut out = Vec::with_capacity(cols.len());
    let last = cols.len() - 1;
    for (ci, col) in cols.into_iter().enumerate() {
        let mut nb = if ci == last { std::mem::take(&mut b) } else { b.clone() };
        if many {
            nb.path.push(ci as u8);
        }
        for it in col {
            match it {
                Item::E(n, s, d, l) => nb.add_entry(arena, n, s, d, l),
                Item::C(c) => nb.cons.push(c),
            }
        }
        out.push(nb);
    }
    Ok(out)
}

/// Depth-first enumeration of complete branches, columns left to right.
pub fn for_each_branch(
    root: Branch,
    arena: &Arena,
    calc: Calculus,
    f: &mut dyn FnMut(&Branch) -> ControlFlow<()>,
) -> Result<ControlFlow<()>, TableauError> {
    for_each_branch_pruned(root, arena, calc, &mut |_| false, f)
}

/// Like [`for_each_branch`], but drops a partial branch created by a
/// branching rule when `prune` holds for it. Constraints of a partial branch
/// are kept by every completion, so pruning on infeasibility loses nothing.
pub fn for_each_branch_pruned(
    root: Branch,
    arena: &Arena,
    calc: Calculus,
    prune: &mut dyn FnMut(&Branch) -> bool,
    f: &mut dyn FnMut(&Branch) -> ControlFlow<()>,
) -> Result<ControlFlow<()>, TableauError> {
    let mut stack = vec![root];
    while let Some(mut b) = stack.pop() {
        if b.is_complete(arena) {
            if f(&b).is_break() {
                return Ok(ControlFlow::Break(()));
            }
            continue;
        }
        let kids = expand(b, arena, calc)?;
        let branching = kids.len() > 1;
        for mut k in kids.into_iter().rev() {
            if branching && !k.is_complete(arena) && prune(&k) {
                continue;
            }
            stack.push(k);
        }
    }
    Ok(ControlFlow::Continue(()))
}

pub fn enumerate_branches(root: Branch, arena: &Arena, calc: Calculus) -> Result<Vec<Branch>, TableauError> {
    let mut out = Vec::new();
    let _ = for_each_branch(root, arena, calc, &mut |b| {
        out.push(b.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// One complete branch, choosing columns uniformly at random.
pub fn random_branch<R: Rng>(root: Branch, arena: &Arena, calc: Calculus, rng: &mut R) -> Result<Branch, TableauError> {
    let mut b = root;
    loop {
        if b.is_complete(arena) {
            return Ok(b);
        }
        let mut kids = expand(b, arena, calc)?;
        let pick = rng.gen_range(0..kids.len());
        b = kids.swap_remove(pick);
    }
}

/// Variables of a branch system: label variables first, then one `x` per
/// (leaf, side) occurring on the branch.
#[derive(Clone, Debug, Default)]
pub struct LeafVars {
    pub map: HashMap<(u32, u8), VarId>,
}

impl LeafVars {
    pub fn get(&self, leaf: u32, side: u8) -> Option<VarId> {
        self.map.get(&(leaf, side)).copied()
    }

    /// Variable for (leaf, side), created in `sys` if the branch had none.
    pub fn ensure(&mut self, sys: &mut LinSystem, arena: &Arena, leaf: u32, side: u8) -> VarId {
        *self.map.entry((leaf, side)).or_insert_with(|| sys.fresh(leaf_var_name(arena, leaf, side)))
    }
}

fn leaf_var_name(arena: &Arena, leaf: u32, side: u8) -> String {
    format!("x_{}^{}", arena.leaf_name(leaf), if side == 1 { "L" } else { "R" })
}

/// Translation `t` of a complete branch into a linear system.
pub fn branch_to_constraints(b: &Branch, arena: &Arena) -> (LinSystem, LeafVars) {
    let mut sys = LinSystem { names: b.labels.clone(), cons: b.cons.clone() };
    let mut lv = LeafVars::default();
    for e in &b.entries {
        if let Node::Leaf(l) = arena.node(e.node) {
            let x = Lin::var(lv.ensure(&mut sys, arena, l, e.side));
            sys.push(match e.dir {
                Dir::Le => Constraint::le(x, e.label.clone()),
                Dir::Ge => Constraint::ge(x, e.label.clone()),
            });
        }
    }
    (sys, lv)
}

/// Reads the leaf values off a solution; leaves absent from the branch get 0.
pub fn leaf_values(lv: &LeafVars, arena: &Arena, x: &[Rat]) -> Vec<(Rat, Rat)> {
    (0..arena.leaf_count() as u32)
        .map(|l| {
            let get = |s| lv.get(l, s).map(|v| x[v].clone()).unwrap_or_else(crate::rat::zero);
            (get(1), get(2))
        })
        .collect()
}

pub struct BranchDisplay<'a> {
    b: &'a Branch,
    arena: &'a Arena,
}

fn show_lin(names: &[String], l: &Lin) -> String {
    let mut parts: Vec<String> = l.terms.iter().map(|(v, c)| format!("{} {}", crate::rat::show(c), names[*v])).collect();
    if parts.is_empty() || l.k != crate::rat::zero() {
        parts.push(crate::rat::show(&l.k));
    }
    parts.join(" + ")
}

impl fmt::Display for BranchDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "branch {}", self.b.id())?;
        for e in &self.b.entries {
            let rel = match e.dir {
                Dir::Le => "<=",
                Dir::Ge => ">=",
            };
            writeln!(f, "  {} {}{} {}", self.arena.to_fm(e.node), rel, e.side, show_lin(&self.b.labels, &e.label))?;
        }
        let sys = LinSystem { names: self.b.labels.clone(), cons: self.b.cons.clone() };
        for line in sys.dump().lines().filter(|l| !l.starts_with("0 <= ")) {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Root of a validity-style check `α ⩽₁ c, c < 1`; returns the branch and `c`.
pub fn refutation_root(arena: &Arena, alpha: NodeId) -> Branch {
    let mut b = Branch::new();
    let c = b.fresh("c");
    b.constrain(Constraint::lt(Lin::var(c), k(1)));
    b.add_entry(arena, alpha, 1, Dir::Le, Lin::var(c));
    b
}
