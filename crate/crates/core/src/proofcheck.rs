//! Hilbert-style proof checking for HŁΔ, HŁ²(Δ,→), HPrŁ² and H4PrŁΔ.
//!
//! Axiom schemes are templates whose outer metavariables are `Fm::Var("$x")`
//! and whose inner metavariables are `Bd::Var("$x")`; the parser never yields
//! such names, so a template matches a formula iff a substitution exists.

use crate::bd::{bd_entails, bd_equiv};
use crate::decide::{decide_prop, Options, Status};
use crate::syntax::{atom, parse, Bd, Fm, LogicId, ModalAtom, Tag};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calculus {
    LukDelta,
    Luk2,
    PrLuk2,
    FourPr,
}

impl Calculus {
    pub const ALL: [Calculus; 4] = [Calculus::LukDelta, Calculus::Luk2, Calculus::PrLuk2, Calculus::FourPr];

    pub fn name(self) -> &'static str {
        match self {
            Calculus::LukDelta => "luk-delta",
            Calculus::Luk2 => "luk2",
            Calculus::PrLuk2 => "pr-luk2",
            Calculus::FourPr => "4pr",
        }
    }

    pub fn logic(self) -> LogicId {
        match self {
            Calculus::LukDelta => LogicId::LukDelta,
            Calculus::Luk2 => LogicId::Luk2Delta,
            Calculus::PrLuk2 => LogicId::PrLuk2,
            Calculus::FourPr => LogicId::FourPr,
        }
    }

    /// The logic whose validities the `valid` pseudo-axiom admits.
    fn outer_logic(self) -> Option<LogicId> {
        match self {
            Calculus::PrLuk2 => Some(LogicId::Luk2Delta),
            Calculus::FourPr => Some(LogicId::LukDelta),
            _ => None,
        }
    }

    fn has_conf(self) -> bool {
        matches!(self, Calculus::Luk2 | Calculus::PrLuk2)
    }

    /// Axiom identifiers accepted by the calculus, in a fixed order.
    pub fn schemes(self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.outer_logic().is_some() {
            out.push("valid");
        }
        out.extend(LUK_SCHEMES);
        if matches!(self, Calculus::Luk2 | Calculus::PrLuk2) {
            out.extend(LUK2_SCHEMES);
        }
        match self {
            Calculus::PrLuk2 => out.extend(["pm-mon", "pm-neg", "pm-ex"]),
            Calculus::FourPr => out.extend(["4equiv", "4contr", "4neg", "4mon", "4part1", "4part2", "4ex"]),
            _ => {}
        }
        out
    }
}

impl FromStr for Calculus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "luk-delta" | "hlukdelta" | "luk" => Ok(Calculus::LukDelta),
            "luk2" | "luk2-delta" | "hluk2" => Ok(Calculus::Luk2),
            "pr-luk2" | "hprluk2" => Ok(Calculus::PrLuk2),
            "4pr" | "four-pr" | "h4pr" => Ok(Calculus::FourPr),
            _ => Err(format!("unknown calculus `{s}` (luk-delta, luk2, pr-luk2, 4pr)")),
        }
    }
}

const LUK_SCHEMES: [&str; 9] = ["w", "sf", "waj", "co", "delta1", "delta2", "delta3", "delta4", "delta5"];
const LUK2_SCHEMES: [&str; 4] = ["negneg", "negtilde", "tildenegimp", "negdelta"];

#[derive(Clone, Debug, PartialEq)]
pub enum Justification {
    Axiom(String),
    Premise(usize),
    Mp(usize, usize),
    DeltaNec(usize),
    Conf(usize),
}

impl Justification {
    pub fn to_json(&self) -> Value {
        match self {
            Justification::Axiom(s) => serde_json::json!({ "axiom": s }),
            Justification::Premise(i) => serde_json::json!({ "premise": i }),
            Justification::Mp(i, j) => serde_json::json!({ "mp": [i, j] }),
            Justification::DeltaNec(i) => serde_json::json!({ "deltanec": i }),
            Justification::Conf(i) => serde_json::json!({ "conf": i }),
        }
    }

    fn from_json(v: &Value) -> Result<Justification, String> {
        let obj = v.as_object().filter(|o| o.len() == 1).ok_or("\"by\" must have exactly one key")?;
        let (k, x) = obj.iter().next().unwrap();
        let idx = |x: &Value| x.as_u64().map(|n| n as usize).ok_or_else(|| format!("`{k}` expects a line number"));
        match k.as_str() {
            "axiom" => Ok(Justification::Axiom(x.as_str().ok_or("axiom name must be a string")?.to_string())),
            "premise" => Ok(Justification::Premise(idx(x)?)),
            "mp" => {
                let a = x.as_array().filter(|a| a.len() == 2).ok_or("`mp` expects [minor, major]")?;
                Ok(Justification::Mp(idx(&a[0])?, idx(&a[1])?))
            }
            "deltanec" | "delta-nec" => Ok(Justification::DeltaNec(idx(x)?)),
            "conf" => Ok(Justification::Conf(idx(x)?)),
            _ => Err(format!("unknown justification `{k}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Line {
    pub formula: Fm,
    pub by: Justification,
}

#[derive(Clone, Debug)]
pub struct Proof {
    pub calculus: Calculus,
    pub premises: Vec<Fm>,
    pub lines: Vec<Line>,
}

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("proof file: {0}")]
    Format(String),
    #[error("line {line}: {msg}")]
    Bad { line: usize, msg: String },
}

impl ProofError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ProofError::Bad { line, .. } => Some(*line),
            ProofError::Format(_) => None,
        }
    }
}

/// A witness for an axiom instance.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Subst {
    pub outer: BTreeMap<String, Fm>,
    pub inner: BTreeMap<String, Bd>,
    pub tags: Vec<Tag>,
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, v) in &self.outer {
            parts.push(format!("{} := {v}", &k[1..]));
        }
        for (k, v) in &self.inner {
            parts.push(format!("{} := {v}", &k[1..]));
        }
        for (i, t) in self.tags.iter().enumerate() {
            parts.push(format!("X{} := {}", i + 1, t.keyword()));
        }
        write!(f, "{}", parts.join(", "))
    }
}

fn ov(n: &str) -> Fm {
    Fm::Var(format!("${n}"))
}

fn iv(n: &str) -> Bd {
    Bd::Var(format!("${n}"))
}

/// Templates for a named scheme. Side conditions are checked separately.
fn templates(name: &str) -> Vec<(Fm, Vec<Tag>)> {
    let (a, b, c) = (ov("phi"), ov("chi"), ov("psi"));
    let (p, q) = (iv("phi"), iv("chi"));
    let pr = |x: Bd| atom(Tag::Pr, x);
    let bc = |x: Bd| atom(Tag::Bl, x.clone()).oplus(atom(Tag::Cf, x));
    let plain = |f: Fm| vec![(f, vec![])];
    match name {
        "w" => plain(a.clone().imp(b.imp(a))),
        "sf" => plain(a.clone().imp(b.clone()).imp(b.imp(c.clone()).imp(a.imp(c)))),
        "waj" => plain(a.clone().imp(b.clone()).imp(b.clone()).imp(b.imp(a.clone()).imp(a))),
        "co" => plain(b.clone().tilde().imp(a.clone().tilde()).imp(a.imp(b))),
        "delta1" => plain(a.clone().delta().lor(a.delta().tilde())),
        "delta2" => plain(a.clone().delta().imp(a)),
        "delta3" => plain(a.clone().delta().imp(a.delta().delta())),
        "delta4" => plain(a.clone().lor(b.clone()).delta().imp(a.delta().lor(b.delta()))),
        "delta5" => plain(a.clone().imp(b.clone()).delta().imp(a.delta().imp(b.delta()))),
        "negneg" => plain(a.clone().neg().neg().iff(a)),
        "negtilde" => plain(a.clone().tilde().neg().iff(a.neg().tilde())),
        "tildenegimp" => plain(
            a.clone().neg().tilde().imp(b.clone().neg().tilde()).iff(a.imp(b).neg().tilde()),
        ),
        "negdelta" => plain(a.clone().delta().neg().iff(a.neg().tilde().delta().tilde())),
        "pm-mon" => plain(pr(p).imp(pr(q))),
        "pm-neg" => plain(pr(p.clone().neg()).iff(pr(p).neg())),
        "pm-ex" => plain(pr(p.clone().or(q.clone())).iff(
            pr(p.clone()).ominus(pr(p.and(q.clone()))).oplus(pr(q)),
        )),
        "4equiv" => [Tag::Bl, Tag::Db, Tag::Cf, Tag::Uc]
            .into_iter()
            .map(|t| (atom(t, p.clone()).iff(atom(t, q.clone())), vec![t]))
            .collect(),
        "4contr" => vec![
            (atom(Tag::Bl, p.clone().and(p.clone().neg())).tilde(), vec![]),
            (atom(Tag::Cf, p.clone()).iff(atom(Tag::Cf, p.clone().and(p.neg()))), vec![]),
        ],
        "4neg" => vec![
            (atom(Tag::Bl, p.clone().neg()).iff(atom(Tag::Db, p.clone())), vec![]),
            (atom(Tag::Cf, p.clone().neg()).iff(atom(Tag::Cf, p)), vec![]),
        ],
        "4mon" => plain(bc(p).imp(bc(q))),
        "4part1" => plain(
            atom(Tag::Bl, p.clone())
                .oplus(atom(Tag::Db, p.clone()))
                .oplus(atom(Tag::Cf, p.clone()))
                .oplus(atom(Tag::Uc, p)),
        ),
        "4part2" => {
            let mut out = Vec::new();
            for xs in tag_permutations() {
                let x = |i: usize| atom(xs[i], p.clone());
                let three = x(0).oplus(x(1)).oplus(x(2));
                let f = three.clone().oplus(x(3)).ominus(x(3)).iff(three);
                out.push((f, xs.to_vec()));
            }
            out
        }
        "4ex" => plain(bc(p.clone().or(q.clone())).iff(
            bc(p.clone()).ominus(bc(p.and(q.clone()))).oplus(bc(q)),
        )),
        _ => vec![],
    }
}

fn tag_permutations() -> Vec<[Tag; 4]> {
    let ts = [Tag::Bl, Tag::Db, Tag::Cf, Tag::Uc];
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let idx = [a, b, c, d];
                    if (0..4).all(|i| (0..i).all(|j| idx[i] != idx[j])) {
                        out.push(idx.map(|i| ts[i]));
                    }
                }
            }
        }
    }
    out
}

fn match_bd(t: &Bd, f: &Bd, s: &mut Subst) -> bool {
    match (t, f) {
        (Bd::Var(n), _) if n.starts_with('$') => match s.inner.get(n) {
            Some(g) => g == f,
            None => {
                s.inner.insert(n.clone(), f.clone());
                true
            }
        },
        (Bd::Var(a), Bd::Var(b)) => a == b,
        (Bd::Neg(a), Bd::Neg(b)) => match_bd(a, b, s),
        (Bd::And(a1, a2), Bd::And(b1, b2)) | (Bd::Or(a1, a2), Bd::Or(b1, b2)) => {
            match_bd(a1, b1, s) && match_bd(a2, b2, s)
        }
        (Bd::Nec(i, a), Bd::Nec(j, b)) | (Bd::Pos(i, a), Bd::Pos(j, b)) => i == j && match_bd(a, b, s),
        _ => false,
    }
}

fn match_fm(t: &Fm, f: &Fm, s: &mut Subst) -> bool {
    match (t, f) {
        (Fm::Var(n), _) if n.starts_with('$') => match s.outer.get(n) {
            Some(g) => g == f,
            None => {
                s.outer.insert(n.clone(), f.clone());
                true
            }
        },
        (Fm::Var(a), Fm::Var(b)) => a == b,
        (Fm::Atom(ModalAtom { tag: t1, body: b1 }), Fm::Atom(ModalAtom { tag: t2, body: b2 })) => {
            t1 == t2 && match_bd(b1, b2, s)
        }
        (Fm::Neg(a), Fm::Neg(b))
        | (Fm::Tilde(a), Fm::Tilde(b))
        | (Fm::Delta(a), Fm::Delta(b))
        | (Fm::NTilde(a), Fm::NTilde(b)) => match_fm(a, b, s),
        (Fm::Imp(a1, a2), Fm::Imp(b1, b2))
        | (Fm::NImp(a1, a2), Fm::NImp(b1, b2))
        | (Fm::And(a1, a2), Fm::And(b1, b2)) => match_fm(a1, b1, s) && match_fm(a2, b2, s),
        _ => false,
    }
}

fn side_condition(name: &str, s: &Subst) -> bool {
    let get = |k: &str| s.inner.get(k);
    match name {
        "pm-mon" | "4mon" => match (get("$phi"), get("$chi")) {
            (Some(p), Some(q)) => bd_entails(p, q),
            _ => false,
        },
        "4equiv" => match (get("$phi"), get("$chi")) {
            (Some(p), Some(q)) => bd_equiv(p, q),
            _ => false,
        },
        _ => true,
    }
}

/// Matches a named axiom scheme of `calc` against `f`, including side conditions.
/// The `valid` pseudo-axiom is not a scheme and never matches here.
pub fn match_axiom(calc: Calculus, name: &str, f: &Fm) -> Option<Subst> {
    if !calc.schemes().contains(&name) {
        return None;
    }
    for (t, tags) in templates(name) {
        let mut s = Subst { tags, ..Subst::default() };
        if match_fm(&t, f, &mut s) && side_condition(name, &s) {
            return Some(s);
        }
    }
    None
}

fn subst_bd(t: &Bd, s: &BTreeMap<String, Bd>) -> Bd {
    match t {
        Bd::Var(n) => s.get(n).cloned().unwrap_or_else(|| t.clone()),
        Bd::Neg(a) => subst_bd(a, s).neg(),
        Bd::And(a, b) => subst_bd(a, s).and(subst_bd(b, s)),
        Bd::Or(a, b) => subst_bd(a, s).or(subst_bd(b, s)),
        Bd::Nec(i, a) => subst_bd(a, s).nec(*i),
        Bd::Pos(i, a) => subst_bd(a, s).pos(*i),
    }
}

/// All instances of a measure scheme (one whose metavariables are inner
/// formulas `phi`, `chi`) that satisfy its side condition.
pub fn instantiate(calc: Calculus, name: &str, phi: &Bd, chi: &Bd) -> Vec<Fm> {
    if !calc.schemes().contains(&name) {
        return Vec::new();
    }
    let inner: BTreeMap<String, Bd> = [("$phi".to_string(), phi.clone()), ("$chi".to_string(), chi.clone())].into();
    let s = Subst { inner: inner.clone(), ..Subst::default() };
    if !side_condition(name, &s) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (t, _) in templates(name) {
        let f = t.map_atoms(&mut |a| atom(a.tag, subst_bd(&a.body, &inner)));
        if f.pvars().is_empty() && !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Replaces each distinct modal atom by a fresh propositional variable.
fn abstract_atoms(f: &Fm) -> Fm {
    let mut seen: Vec<ModalAtom> = Vec::new();
    f.map_atoms(&mut |a| {
        let i = seen.iter().position(|b| b == a).unwrap_or_else(|| {
            seen.push(a.clone());
            seen.len() - 1
        });
        Fm::Var(format!("a{i}"))
    })
}

fn outer_valid(logic: LogicId, f: &Fm) -> Result<bool, String> {
    let g = abstract_atoms(f);
    let v = decide_prop(logic, &g, &[], &Options::default()).map_err(|e| e.to_string())?;
    Ok(v.status == Status::Valid)
}

fn bad(line: usize, msg: impl Into<String>) -> ProofError {
    ProofError::Bad { line, msg: msg.into() }
}

/// Checks every line; returns the conclusion (the last line).
pub fn check_proof(p: &Proof) -> Result<Fm, ProofError> {
    let calc = p.calculus;
    for (k, line) in p.lines.iter().enumerate() {
        let n = k + 1;
        let earlier = |i: usize| -> Result<&Fm, ProofError> {
            if i == 0 || i >= n {
                Err(bad(n, format!("reference to line {i}, which is not an earlier line")))
            } else {
                Ok(&p.lines[i - 1].formula)
            }
        };
        let f = &line.formula;
        let expect = |want: &Fm, rule: &str| -> Result<(), ProofError> {
            if want == f {
                Ok(())
            } else {
                Err(bad(n, format!("{rule} yields `{want}`, found `{f}`")))
            }
        };
        match &line.by {
            Justification::Axiom(name) if name == "valid" => {
                let Some(logic) = calc.outer_logic() else {
                    return Err(bad(n, format!("{} has no `valid` axiom", calc.name())));
                };
                match outer_valid(logic, f) {
                    Ok(true) => {}
                    Ok(false) => return Err(bad(n, format!("`{f}` is not a {} validity", logic.name()))),
                    Err(e) => return Err(bad(n, e)),
                }
            }
            Justification::Axiom(name) => {
                if !calc.schemes().contains(&name.as_str()) {
                    return Err(bad(n, format!("{} has no axiom `{name}`", calc.name())));
                }
                if match_axiom(calc, name, f).is_none() {
                    return Err(bad(n, format!("`{f}` is not an instance of {name}")));
                }
            }
            Justification::Premise(i) => match p.premises.get(i.wrapping_sub(1)) {
                Some(g) if g == f => {}
                Some(g) => return Err(bad(n, format!("premise {i} is `{g}`, found `{f}`"))),
                None => return Err(bad(n, format!("no premise {i}"))),
            },
            Justification::Mp(i, j) => {
                let (minor, major) = (earlier(*i)?, earlier(*j)?);
                match major {
                    Fm::Imp(a, b) if **a == *minor => expect(b, "MP")?,
                    _ => return Err(bad(n, format!("line {j} is not an implication from line {i}"))),
                }
            }
            Justification::DeltaNec(i) => {
                expect(&earlier(*i)?.clone().delta(), "DeltaNec")?;
            }
            Justification::Conf(i) => {
                if !calc.has_conf() {
                    return Err(bad(n, format!("{} has no conf rule", calc.name())));
                }
                expect(&earlier(*i)?.clone().neg().tilde(), "conf")?;
            }
        }
    }
    p.lines.last().map(|l| l.formula.clone()).ok_or_else(|| ProofError::Format("empty proof".into()))
}

/// Reads a proof: either `{"calculus":..., "premises":[...], "lines":[...]}`
/// or a bare line array, in which case `calculus` must be given.
pub fn proof_from_json(v: &Value, calculus: Option<Calculus>) -> Result<Proof, ProofError> {
    let ferr = |m: String| ProofError::Format(m);
    let (calc, premises, lines) = match v {
        Value::Array(lines) => (calculus.ok_or_else(|| ferr("missing calculus".into()))?, &[][..], lines),
        Value::Object(o) => {
            let calc = match (calculus, o.get("calculus").and_then(Value::as_str)) {
                (Some(c), _) => c,
                (None, Some(s)) => s.parse().map_err(ferr)?,
                (None, None) => return Err(ferr("missing \"calculus\"".into())),
            };
            let prem = o.get("premises").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]);
            let lines = o.get("lines").and_then(Value::as_array).ok_or_else(|| ferr("missing \"lines\"".into()))?;
            (calc, prem, lines)
        }
        _ => return Err(ferr("a proof is an object or an array of lines".into())),
    };
    let logic = calc.logic();
    let fm = |x: &Value, what: String| -> Result<Fm, ProofError> {
        let s = x.as_str().ok_or_else(|| ferr(format!("{what}: formula must be a string")))?;
        parse(s, logic).map_err(|e| ferr(format!("{what}: {e}")))
    };
    let premises = premises.iter().enumerate().map(|(i, x)| fm(x, format!("premise {}", i + 1))).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (k, l) in lines.iter().enumerate() {
        let what = format!("line {}", k + 1);
        let formula = fm(l.get("formula").unwrap_or(&Value::Null), what.clone())?;
        let by = Justification::from_json(l.get("by").unwrap_or(&Value::Null)).map_err(|e| ferr(format!("{what}: {e}")))?;
        out.push(Line { formula, by });
    }
    Ok(Proof { calculus: calc, premises, lines: out })
}

pub fn proof_to_json(p: &Proof) -> Value {
    serde_json::json!({
        "calculus": p.calculus.name(),
        "premises": p.premises.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "lines": p.lines.iter().map(|l| serde_json::json!({"formula": l.formula.to_string(), "by": l.by.to_json()})).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str, c: Calculus) -> Fm {
        parse(s, c.logic()).unwrap()
    }

    #[test]
    fn w_scheme_binds_both_metavariables() {
        let c = Calculus::PrLuk2;
        let s = match_axiom(c, "w", &f("Pr p -> (Pr q -> Pr p)", c)).unwrap();
        assert_eq!(s.outer["$phi"], f("Pr p", c));
        assert_eq!(s.outer["$chi"], f("Pr q", c));
    }

    #[test]
    fn monotonicity_side_condition() {
        let c = Calculus::PrLuk2;
        assert!(match_axiom(c, "pm-mon", &f("Pr (p & q) -> Pr p", c)).is_some());
        assert!(match_axiom(c, "pm-mon", &f("Pr p -> Pr q", c)).is_none());
    }

    #[test]
    fn part2_needs_distinct_tags() {
        let c = Calculus::FourPr;
        let ok = "((Bl p (+) Db p (+) Cf p (+) Uc p) (-) Uc p) <-> (Bl p (+) Db p (+) Cf p)";
        assert!(match_axiom(c, "4part2", &f(ok, c)).is_some());
        let rep = "((Bl p (+) Bl p (+) Cf p (+) Uc p) (-) Uc p) <-> (Bl p (+) Bl p (+) Cf p)";
        assert!(match_axiom(c, "4part2", &f(rep, c)).is_none());
    }

    #[test]
    fn swapped_mp_is_flagged() {
        let c = Calculus::PrLuk2;
        let a = f("Pr (p & q) -> Pr p", c);
        let line = |formula: Fm, by| Line { formula, by };
        let mut p = Proof {
            calculus: c,
            premises: vec![f("Pr (p & q)", c)],
            lines: vec![
                line(f("Pr (p & q)", c), Justification::Premise(1)),
                line(a, Justification::Axiom("pm-mon".into())),
                line(f("Pr p", c), Justification::Mp(1, 2)),
            ],
        };
        assert_eq!(check_proof(&p).unwrap(), f("Pr p", c));
        p.lines[2].by = Justification::Mp(2, 1);
        assert_eq!(check_proof(&p).unwrap_err().line(), Some(3));
    }

    #[test]
    fn validity_axiom_uses_outer_decider() {
        let c = Calculus::FourPr;
        let p = Proof {
            calculus: c,
            premises: vec![],
            lines: vec![Line { formula: f("Bl p -> (Db q -> Bl p)", c), by: Justification::Axiom("valid".into()) }],
        };
        assert!(check_proof(&p).is_ok());
        let q = Proof {
            lines: vec![Line { formula: f("Bl p -> Db q", c), by: Justification::Axiom("valid".into()) }],
            ..p
        };
        assert_eq!(check_proof(&q).unwrap_err().line(), Some(1));
    }
}
