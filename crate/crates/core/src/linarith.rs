//! Exact feasibility of affine constraint systems over variables bounded to
//! [0,1], with strict and non-strict inequalities and equalities.
//!
//! The main engine is fraction-free Fourier–Motzkin elimination on integer
//! rows (first with `i128`, then `BigInt` on overflow). Equalities are
//! eliminated by substitution first. Systems whose projection grows past
//! [`FM_ROW_LIMIT`] rows are handed to an exact two-phase simplex.

use crate::rat::{one, show, zero, Rat};
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

pub type VarId = usize;

/// Affine expression `Σ cᵢ·xᵢ + k`; terms sorted by variable, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Lin {
    pub terms: Vec<(VarId, Rat)>,
    pub k: Rat,
}

impl Lin {
    pub fn konst(k: Rat) -> Lin {
        Lin { terms: Vec::new(), k }
    }

    pub fn var(v: VarId) -> Lin {
        Lin { terms: vec![(v, one())], k: zero() }
    }

    pub fn zero() -> Lin {
        Lin::konst(zero())
    }

    pub fn one() -> Lin {
        Lin::konst(one())
    }

    fn combine(&self, o: &Lin, s: &Rat) -> Lin {
        let mut terms = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let take_left = j >= o.terms.len() || (i < self.terms.len() && self.terms[i].0 < o.terms[j].0);
            let take_right = i >= self.terms.len() || (j < o.terms.len() && o.terms[j].0 < self.terms[i].0);
            if take_left {
                terms.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                terms.push((o.terms[j].0, &o.terms[j].1 * s));
                j += 1;
            } else {
                let c = &self.terms[i].1 + &o.terms[j].1 * s;
                if !c.is_zero() {
                    terms.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Lin { terms, k: &self.k + &o.k * s }
    }

    pub fn add(&self, o: &Lin) -> Lin {
        self.combine(o, &one())
    }

    pub fn sub(&self, o: &Lin) -> Lin {
        self.combine(o, &-one())
    }

    pub fn scale(&self, s: &Rat) -> Lin {
        if s.is_zero() {
            return Lin::zero();
        }
        Lin { terms: self.terms.iter().map(|(v, c)| (*v, c * s)).collect(), k: &self.k * s }
    }

    /// `1 - self`
    pub fn one_minus(&self) -> Lin {
        Lin::one().sub(self)
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.terms.iter().fold(self.k.clone(), |acc, (v, c)| acc + c * &x[*v])
    }

    pub fn is_const(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_var(&self) -> Option<VarId> {
        self.terms.last().map(|(v, _)| *v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Le,
    Lt,
    Eq,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
        }
    }
}

/// `lhs rel rhs`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub lhs: Lin,
    pub rel: Rel,
    pub rhs: Lin,
}

impl Constraint {
    pub fn le(lhs: Lin, rhs: Lin) -> Constraint {
        Constraint { lhs, rel: Rel::Le, rhs }
    }
    pub fn lt(lhs: Lin, rhs: Lin) -> Constraint {
        Constraint { lhs, rel: Rel::Lt, rhs }
    }
    pub fn ge(lhs: Lin, rhs: Lin) -> Constraint {
        Constraint { lhs: rhs, rel: Rel::Le, rhs: lhs }
    }
    pub fn gt(lhs: Lin, rhs: Lin) -> Constraint {
        Constraint { lhs: rhs, rel: Rel::Lt, rhs: lhs }
    }
    pub fn eq(lhs: Lin, rhs: Lin) -> Constraint {
        Constraint { lhs, rel: Rel::Eq, rhs }
    }

    /// `lhs - rhs`, compared against 0.
    pub fn normal(&self) -> Lin {
        self.lhs.sub(&self.rhs)
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        let d = self.normal().eval(x);
        match self.rel {
            Rel::Le => d <= zero(),
            Rel::Lt => d < zero(),
            Rel::Eq => d.is_zero(),
        }
    }
}

/// Constraints over variables `0..names.len()`, each implicitly in [0,1].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinSystem {
    pub names: Vec<String>,
    pub cons: Vec<Constraint>,
}

impl LinSystem {
    pub fn new() -> LinSystem {
        LinSystem::default()
    }

    pub fn fresh(&mut self, name: impl Into<String>) -> VarId {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn push(&mut self, c: Constraint) {
        self.cons.push(c);
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        x.len() == self.names.len()
            && x.iter().all(crate::rat::in_unit)
            && self.cons.iter().all(|c| c.holds(x))
    }

    fn write_lin(&self, l: &Lin, out: &mut String) {
        let mut first = true;
        for (v, c) in &l.terms {
            if !first {
                out.push_str(" + ");
            }
            first = false;
            out.push_str(&format!("{} {}", show(c), self.names[*v]));
        }
        if first {
            out.push_str(&show(&l.k));
        }
    }

    /// One constraint per line, `3/4 x + 1 y < 2`; variables moved left,
    /// constants right.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.cons {
            let d = c.normal();
            let lhs = Lin { terms: d.terms.clone(), k: zero() };
            self.write_lin(&lhs, &mut out);
            out.push_str(&format!(" {} {}\n", c.rel.symbol(), show(&-d.k)));
        }
        for n in &self.names {
            out.push_str(&format!("0 <= {n} <= 1\n"));
        }
        out
    }
}

impl fmt::Display for LinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Feasible(Vec<Rat>),
    Infeasible,
}

impl Outcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Feasible(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    FourierMotzkin,
    Simplex,
}

/// Row count beyond which elimination gives up in favour of the simplex.
pub const FM_ROW_LIMIT: usize = 4000;

/// Decides feasibility; the witness satisfies every constraint exactly.
pub fn feasible(sys: &LinSystem) -> Outcome {
    solve(sys, true).0
}

/// Feasibility without back-substitution.
pub fn is_feasible(sys: &LinSystem) -> bool {
    solve(sys, false).0.is_feasible()
}

/// Also reports which engine produced the answer.
pub fn solve(sys: &LinSystem, witness: bool) -> (Outcome, Engine) {
    match fm::<i128>(sys, witness) {
        Ok(o) => return (o, Engine::FourierMotzkin),
        Err(FmStop::Overflow) => {}
        Err(FmStop::Budget) => return (simplex::solve(sys), Engine::Simplex),
    }
    match fm::<BigInt>(sys, witness) {
        Ok(o) => (o, Engine::FourierMotzkin),
        Err(_) => (simplex::solve(sys), Engine::Simplex),
    }
}

/// Fourier–Motzkin only; `None` if the row budget was exceeded.
pub fn feasible_fm(sys: &LinSystem) -> Option<Outcome> {
    match fm::<i128>(sys, true) {
        Ok(o) => Some(o),
        Err(FmStop::Budget) => None,
        Err(FmStop::Overflow) => fm::<BigInt>(sys, true).ok(),
    }
}

pub fn feasible_simplex(sys: &LinSystem) -> Outcome {
    simplex::solve(sys)
}

// ---------------------------------------------------------------- integer rows

trait Int: Clone + Eq + Ord + Hash + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn sign(&self) -> i32;
    fn abs(&self) -> Option<Self> {
        if self.sign() < 0 {
            self.neg()
        } else {
            Some(self.clone())
        }
    }
    fn is_zero(&self) -> bool {
        self.sign() == 0
    }
}

impl Int for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128().filter(|v| v.unsigned_abs() < (1u128 << 120))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i32 {
        self.signum() as i32
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// `Σ a[i]·x[i] + b ⋈ 0`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row<N> {
    a: Vec<N>,
    b: N,
    strict: bool,
}

#[derive(Debug)]
enum FmStop {
    Overflow,
    Budget,
}

type FmResult<T> = Result<T, FmStop>;

fn ov<T>(o: Option<T>) -> FmResult<T> {
    o.ok_or(FmStop::Overflow)
}

/// Integer row equivalent to `normal ⋈ 0` (scaled by a positive number).
fn to_row<N: Int>(l: &Lin, n: usize) -> FmResult<(Vec<N>, N)> {
    let mut den = <BigInt as One>::one();
    for (_, c) in &l.terms {
        den = den.lcm(c.denom());
    }
    den = den.lcm(l.k.denom());
    let mut a = vec![N::zero(); n];
    for (v, c) in &l.terms {
        let x = c.numer() * (&den / c.denom());
        a[*v] = ov(N::from_big(&x))?;
    }
    let kb = l.k.numer() * (&den / l.k.denom());
    Ok((a, ov(N::from_big(&kb))?))
}

fn reduce<N: Int>(r: &mut Row<N>) {
    let mut g = r.b.abs().unwrap_or_else(|| r.b.clone());
    for x in &r.a {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if g.sign() > 0 && g != N::one() {
        for x in r.a.iter_mut() {
            *x = x.div_exact(&g);
        }
        r.b = r.b.div_exact(&g);
    }
}

/// `c1·r1 + c2·r2`, with c1, c2 > 0 for inequalities.
fn lincomb<N: Int>(c1: &N, r1: &Row<N>, c2: &N, r2: &Row<N>) -> FmResult<Row<N>> {
    let mut a = Vec::with_capacity(r1.a.len());
    for (x, y) in r1.a.iter().zip(&r2.a) {
        a.push(ov(ov(c1.mul(x))?.add(&ov(c2.mul(y))?))?);
    }
    let b = ov(ov(c1.mul(&r1.b))?.add(&ov(c2.mul(&r2.b))?))?;
    let mut r = Row { a, b, strict: r1.strict || r2.strict };
    reduce(&mut r);
    Ok(r)
}

struct Elim<N> {
    var: usize,
    rows: Vec<Row<N>>,
}

struct Subst<N> {
    var: usize,
    eq: Row<N>,
}

fn fm<N: Int>(sys: &LinSystem, witness: bool) -> FmResult<Outcome> {
    let n = sys.names.len();
    let mut rows: Vec<Row<N>> = Vec::new();
    let mut eqs: Vec<Row<N>> = Vec::new();
    for c in &sys.cons {
        let (a, b) = to_row::<N>(&c.normal(), n)?;
        let mut r = Row { a, b, strict: c.rel == Rel::Lt };
        reduce(&mut r);
        if c.rel == Rel::Eq {
            eqs.push(r);
        } else {
            rows.push(r);
        }
    }
    let one_n = N::one();
    let minus_one = ov(one_n.neg())?;
    for v in 0..n {
        let mut lo = vec![N::zero(); n];
        lo[v] = minus_one.clone();
        rows.push(Row { a: lo, b: N::zero(), strict: false });
        let mut hi = vec![N::zero(); n];
        hi[v] = one_n.clone();
        rows.push(Row { a: hi, b: minus_one.clone(), strict: false });
    }

    // Gaussian substitution of the equalities.
    let mut substs: Vec<Subst<N>> = Vec::new();
    let mut pending = eqs;
    while let Some(e) = pending.pop() {
        let Some(k) = (0..n).find(|&i| !e.a[i].is_zero()) else {
            if !e.b.is_zero() {
                return Ok(Outcome::Infeasible);
            }
            continue;
        };
        let ek = e.a[k].clone();
        let ek_abs = ov(ek.abs())?;
        let eliminate = |r: &Row<N>| -> FmResult<Row<N>> {
            if r.a[k].is_zero() {
                return Ok(r.clone());
            }
            // |e_k|·r − sign(e_k)·r_k·e
            let mut c2 = r.a[k].clone();
            if ek.sign() > 0 {
                c2 = ov(c2.neg())?;
            }
            lincomb(&ek_abs, r, &c2, &e)
        };
        for r in rows.iter_mut() {
            *r = eliminate(r)?;
        }
        for r in pending.iter_mut() {
            let s = r.strict;
            *r = eliminate(r)?;
            r.strict = s;
        }
        for s in substs.iter_mut() {
            let st = s.eq.strict;
            s.eq = eliminate(&s.eq)?;
            s.eq.strict = st;
        }
        substs.push(Subst { var: k, eq: e });
    }

    let mut elims: Vec<Elim<N>> = Vec::new();
    let mut rows = dedup(rows);
    loop {
        // ground rows
        let mut keep = Vec::with_capacity(rows.len());
        for r in rows {
            if r.a.iter().all(|x| x.is_zero()) {
                let bad = if r.strict { r.b.sign() >= 0 } else { r.b.sign() > 0 };
                if bad {
                    return Ok(Outcome::Infeasible);
                }
            } else {
                keep.push(r);
            }
        }
        rows = keep;
        if rows.is_empty() {
            break;
        }
        let mut best: Option<(usize, i64)> = None;
        for v in 0..n {
            let (mut p, mut q) = (0i64, 0i64);
            for r in &rows {
                match r.a[v].sign() {
                    1 => p += 1,
                    -1 => q += 1,
                    _ => {}
                }
            }
            if p + q == 0 {
                continue;
            }
            let score = p * q - p - q;
            if best.is_none_or(|(_, s)| score < s) {
                best = Some((v, score));
            }
        }
        let (v, score) = best.expect("non-ground rows mention a variable");
        if score + rows.len() as i64 > FM_ROW_LIMIT as i64 {
            return Err(FmStop::Budget);
        }
        let (with, without): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| !r.a[v].is_zero());
        let mut next = without;
        {
            let pos: Vec<&Row<N>> = with.iter().filter(|r| r.a[v].sign() > 0).collect();
            let neg: Vec<&Row<N>> = with.iter().filter(|r| r.a[v].sign() < 0).collect();
            for p in &pos {
                for q in &neg {
                    let cp = ov(q.a[v].neg())?;
                    let cq = p.a[v].clone();
                    next.push(lincomb(&cp, p, &cq, q)?);
                }
            }
        }
        elims.push(Elim { var: v, rows: if witness { with } else { Vec::new() } });
        rows = dedup(next);
    }

    if !witness {
        return Ok(Outcome::Feasible(Vec::new()));
    }
    let mut x = vec![zero(); n];
    for e in elims.iter().rev() {
        x[e.var] = pick(e.var, &e.rows, &x);
    }
    for s in substs.iter().rev() {
        let k = s.var;
        let mut rest = Rat::from_integer(s.eq.b.to_big());
        for (i, c) in s.eq.a.iter().enumerate() {
            if i != k && !c.is_zero() {
                rest += Rat::from_integer(c.to_big()) * &x[i];
            }
        }
        x[k] = -rest / Rat::from_integer(s.eq.a[k].to_big());
    }
    debug_assert!(sys.satisfied_by(&x), "FM witness fails:\n{}\n{:?}", sys.dump(), x);
    Ok(Outcome::Feasible(x))
}

/// Keeps, per coefficient vector, only the tightest row.
fn dedup<N: Int>(rows: Vec<Row<N>>) -> Vec<Row<N>> {
    let mut best: HashMap<Vec<N>, (N, bool)> = HashMap::with_capacity(rows.len());
    let mut order: Vec<Vec<N>> = Vec::new();
    for r in rows {
        match best.get_mut(&r.a) {
            Some((b, s)) => {
                if r.b > *b || (r.b == *b && r.strict && !*s) {
                    *b = r.b;
                    *s = r.strict;
                }
            }
            None => {
                order.push(r.a.clone());
                best.insert(r.a, (r.b, r.strict));
            }
        }
    }
    order
        .into_iter()
        .map(|a| {
            let (b, strict) = best.remove(&a).unwrap();
            Row { a, b, strict }
        })
        .collect()
}

fn pick<N: Int>(v: usize, rows: &[Row<N>], x: &[Rat]) -> Rat {
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for r in rows {
        let mut rest = Rat::from_integer(r.b.to_big());
        for (i, c) in r.a.iter().enumerate() {
            if i != v && !c.is_zero() {
                rest += Rat::from_integer(c.to_big()) * &x[i];
            }
        }
        let a = Rat::from_integer(r.a[v].to_big());
        let bound = -rest / &a;
        if a.is_positive() {
            let tighter = match &hi {
                None => true,
                Some((h, s)) => bound < *h || (bound == *h && r.strict && !s),
            };
            if tighter {
                hi = Some((bound, r.strict));
            }
        } else {
            let tighter = match &lo {
                None => true,
                Some((l, s)) => bound > *l || (bound == *l && r.strict && !s),
            };
            if tighter {
                lo = Some((bound, r.strict));
            }
        }
    }
    match (lo, hi) {
        (None, None) => zero(),
        (Some((l, false)), _) => l,
        (Some((l, true)), None) => l + one(),
        (None, Some((h, false))) => h,
        (None, Some((h, true))) => h - one(),
        (Some((_, true)), Some((h, false))) => h,
        (Some((l, true)), Some((h, true))) => (l + h) / Rat::from_integer(BigInt::from(2)),
    }
}

// ---------------------------------------------------------------- simplex

mod simplex {
    //! Dense two-phase simplex with Bland's rule. Strict rows get a shared
    //! slack `t` that is maximised; the system is feasible iff the optimum
    //! is positive (or there are no strict rows).

    use super::*;

    pub fn solve(sys: &LinSystem) -> Outcome {
        let n = sys.names.len();
        let has_strict = sys.cons.iter().any(|c| c.rel == Rel::Lt);
        // columns: x_0..x_{n-1}, t
        let nv = n + 1;
        // rows as (coeffs over nv, rhs, is_eq): Σ a x ≤ rhs
        let mut rows: Vec<(Vec<Rat>, Rat, bool)> = Vec::new();
        for c in &sys.cons {
            let d = c.normal();
            let mut a = vec![zero(); nv];
            for (v, k) in &d.terms {
                a[*v] = k.clone();
            }
            if c.rel == Rel::Lt {
                a[n] = one();
            }
            rows.push((a, -d.k.clone(), c.rel == Rel::Eq));
        }
        for v in 0..nv {
            let mut a = vec![zero(); nv];
            a[v] = one();
            rows.push((a, one(), false));
        }
        let m = rows.len();
        let n_slack = rows.iter().filter(|r| !r.2).count();
        // artificial for every row whose rhs is negative after slack, or equality
        let mut needs_art = Vec::with_capacity(m);
        for r in &rows {
            needs_art.push(r.2 || r.1.is_negative());
        }
        let n_art = needs_art.iter().filter(|b| **b).count();
        let total = nv + n_slack + n_art;
        let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut basis = vec![0usize; m];
        let (mut si, mut ai) = (nv, nv + n_slack);
        for (i, (a, b, is_eq)) in rows.iter().enumerate() {
            let mut row = vec![zero(); total + 1];
            row[..nv].clone_from_slice(a);
            let mut slack_col = None;
            if !is_eq {
                row[si] = one();
                slack_col = Some(si);
                si += 1;
            }
            row[total] = b.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            if needs_art[i] {
                row[ai] = one();
                basis[i] = ai;
                ai += 1;
            } else {
                basis[i] = slack_col.unwrap();
            }
            tab.push(row);
        }
        // phase 1: minimise Σ artificials == maximise −Σ
        let mut obj = vec![zero(); total + 1];
        for c in nv + n_slack..total {
            obj[c] = one();
        }
        let mut t = Tableau { tab, basis, obj, total };
        t.price_out();
        t.run(&|_| true);
        if t.obj[t.total].is_negative() || !t.obj[t.total].is_zero() {
            // objective row holds −(Σ art); nonzero means infeasible
            return Outcome::Infeasible;
        }
        // drive artificials out of the basis where possible
        for i in 0..t.tab.len() {
            if t.basis[i] >= nv + n_slack {
                if let Some(c) = (0..nv + n_slack).find(|&c| !t.tab[i][c].is_zero()) {
                    t.pivot(i, c);
                }
            }
        }
        let allowed = |c: usize| c < nv + n_slack;
        if has_strict {
            let mut obj = vec![zero(); total + 1];
            obj[n] = -one();
            t.obj = obj;
            t.price_out();
            t.run(&allowed);
            let x = t.values(nv);
            if !x[n].is_positive() {
                return Outcome::Infeasible;
            }
            return Outcome::Feasible(x[..n].to_vec());
        }
        let x = t.values(nv);
        Outcome::Feasible(x[..n].to_vec())
    }

    struct Tableau {
        tab: Vec<Vec<Rat>>,
        basis: Vec<usize>,
        /// reduced costs for minimisation; last entry is −objective value
        obj: Vec<Rat>,
        total: usize,
    }

    impl Tableau {
        fn price_out(&mut self) {
            for i in 0..self.tab.len() {
                let b = self.basis[i];
                let c = self.obj[b].clone();
                if !c.is_zero() {
                    for j in 0..=self.total {
                        let v = &self.tab[i][j] * &c;
                        self.obj[j] -= v;
                    }
                }
            }
        }

        fn pivot(&mut self, r: usize, c: usize) {
            let p = self.tab[r][c].clone();
            for x in self.tab[r].iter_mut() {
                *x /= &p;
            }
            let prow = self.tab[r].clone();
            for i in 0..self.tab.len() {
                if i != r {
                    let f = self.tab[i][c].clone();
                    if !f.is_zero() {
                        for (x, y) in self.tab[i].iter_mut().zip(&prow) {
                            *x -= &f * y;
                        }
                    }
                }
            }
            let f = self.obj[c].clone();
            if !f.is_zero() {
                for (x, y) in self.obj.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
            self.basis[r] = c;
        }

        fn run(&mut self, allowed: &dyn Fn(usize) -> bool) {
            loop {
                let Some(c) = (0..self.total).find(|&j| allowed(j) && self.obj[j].is_negative()) else {
                    return;
                };
                let mut best: Option<(usize, Rat)> = None;
                for i in 0..self.tab.len() {
                    let a = &self.tab[i][c];
                    if a.is_positive() {
                        let ratio = &self.tab[i][self.total] / a;
                        let better = match &best {
                            None => true,
                            Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                        };
                        if better {
                            best = Some((i, ratio));
                        }
                    }
                }
                match best {
                    Some((r, _)) => self.pivot(r, c),
                    None => return, // unbounded cannot happen: all columns are bounded
                }
            }
        }

        fn values(&self, nv: usize) -> Vec<Rat> {
            let mut x = vec![zero(); nv];
            for (i, b) in self.basis.iter().enumerate() {
                if *b < nv {
                    x[*b] = self.tab[i][self.total].clone();
                }
            }
            x
        }
    }
}
