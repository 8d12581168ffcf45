//! Seeded cross-checks between deciders, translations and model search.
//!
//! Each iteration draws its own seed from the run seed, so a failure can be
//! replayed by running one iteration with the recorded seed.

use crate::decide::{
    decide, decide_four_pr, decide_pr_luk2, decide_prob_nluk_s5, decide_prob_s5,
    falsify_by_search, prop_value, random_model, DecideError, Options, Status, Verdict,
};
use crate::gen::random_formula;
use crate::luk::Pair;
use crate::rat::frac;
use crate::syntax::{Fm, LogicId};
use crate::translate::{box_dia, boxminus, boxplus, neg_push, normalize, to_four, to_pm};
use crate::two_layered::{conflate, designated, flip, OuterValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub logics: Vec<LogicId>,
    pub iterations: usize,
    pub seed: u64,
    pub depth: usize,
    pub inner_depth: usize,
    /// Random models tried against each VALID verdict.
    pub search_budget: usize,
    pub corpus: Option<PathBuf>,
    pub workers: usize,
}

impl Default for FuzzConfig {
    fn default() -> FuzzConfig {
        FuzzConfig {
            logics: LogicId::ALL.to_vec(),
            iterations: 500,
            seed: 0,
            depth: 3,
            inner_depth: 2,
            search_budget: 20,
            corpus: None,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FailureKind {
    /// A NOT VALID countermodel failed re-evaluation.
    Soundness,
    /// A VALID verdict was refuted by search.
    Oracle,
    /// Two routes through a translation disagree.
    Translation,
    /// Conflated model does not flip the value.
    Conflation,
    /// The decider reported an internal error.
    Internal,
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub kind: FailureKind,
    pub logic: LogicId,
    pub seed: u64,
    pub formula: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct FuzzReport {
    pub iterations: usize,
    pub valid: usize,
    pub not_valid: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
}

impl FuzzReport {
    pub fn count(&self, kind: FailureKind) -> usize {
        self.failures.iter().filter(|f| f.kind == kind).count()
    }
}

pub fn iteration_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

struct Ctx<'a> {
    logic: LogicId,
    seed: u64,
    formula: &'a Fm,
    out: &'a mut Vec<Failure>,
}

impl Ctx<'_> {
    fn fail(&mut self, kind: FailureKind, detail: String) {
        self.out.push(Failure { kind, logic: self.logic, seed: self.seed, formula: self.formula.to_string(), detail });
    }
}

/// Runs one iteration; returns the main verdict, or `None` when skipped.
pub fn run_one(logic: LogicId, seed: u64, cfg: &FuzzConfig, failures: &mut Vec<Failure>) -> Option<Status> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = ["p", "q"];
    let f = random_formula(&mut rng, logic, &vars, cfg.depth, cfg.inner_depth);
    let opts = Options { seed, ..Options::default() };
    let mut cx = Ctx { logic, seed, formula: &f, out: failures };
    let v = match decide(logic, &f, &[], &opts) {
        Ok(v) => v,
        Err(DecideError::TooLarge(_)) | Err(DecideError::Unsupported(_)) => return None,
        Err(DecideError::Unsound(e)) => {
            cx.fail(FailureKind::Soundness, e);
            return None;
        }
        Err(e) => {
            cx.fail(FailureKind::Internal, e.to_string());
            return None;
        }
    };
    if v.status == Status::Valid {
        oracle_check(&mut cx, &mut rng, cfg);
    }
    translation_check(&mut cx, &v, &opts);
    conflation_check(&mut cx, &mut rng);
    Some(v.status)
}

fn oracle_check(cx: &mut Ctx, rng: &mut ChaCha8Rng, cfg: &FuzzConfig) {
    let logic = cx.logic;
    if logic.propositional() {
        let vars: Vec<String> = cx.formula.pvars().into_iter().collect();
        for _ in 0..cfg.search_budget * 4 {
            let val: BTreeMap<String, Pair> = vars
                .iter()
                .map(|p| (p.clone(), Pair::new(frac(rng.gen_range(0..=8), 8), frac(rng.gen_range(0..=8), 8))))
                .collect();
            match prop_value(logic, &val, cx.formula) {
                Ok(x) if !designated(logic, &x) => {
                    let shown: Vec<String> = val.iter().map(|(k, p)| format!("{k}={p}")).collect();
                    cx.fail(FailureKind::Oracle, format!("VALID but {} gives {x}", shown.join(" ")));
                    return;
                }
                Ok(_) => {}
                Err(e) => {
                    cx.fail(FailureKind::Internal, e.to_string());
                    return;
                }
            }
        }
    } else if let Some(m) = falsify_by_search(logic, cx.formula, &[], cfg.search_budget, rng.gen()) {
        let value = m.eval(cx.formula).map(|v| v.to_string()).unwrap_or_default();
        cx.fail(FailureKind::Oracle, format!("VALID but a random model gives {value}"));
    }
}

fn same(cx: &mut Ctx, what: &str, a: &Verdict, b: Result<Verdict, DecideError>) {
    match b {
        Ok(b) if b.status == a.status => {}
        Ok(b) => cx.fail(FailureKind::Translation, format!("{what}: {} vs {}", a.status.label(), b.status.label())),
        Err(DecideError::TooLarge(_)) => {}
        Err(e) => cx.fail(FailureKind::Internal, format!("{what}: {e}")),
    }
}

fn translation_check(cx: &mut Ctx, v: &Verdict, opts: &Options) {
    let f = cx.formula.clone();
    match cx.logic {
        LogicId::FourPr => match to_pm(&f) {
            Ok(g) => same(cx, "β vs β^±", v, decide_pr_luk2(&g, &[], opts)),
            Err(e) => cx.fail(FailureKind::Internal, e.to_string()),
        },
        LogicId::PrLuk2 => match to_four(&neg_push(&f)) {
            Ok(g) => same(cx, "α vs (α^¬)^4", v, decide_four_pr(&g, &[], opts)),
            Err(e) => cx.fail(FailureKind::Internal, e.to_string()),
        },
        // e₁ ≡ 1 on all models iff (1,0) on all models, by conflation.
        LogicId::BelLuk2 => {
            let n = neg_push(&f);
            let both = boxplus(&n).and_then(|p| Ok((p, boxminus(&n)?)));
            match both {
                Ok((p, m)) => {
                    let r = decide_prob_s5(&p, &[], opts).and_then(|a| {
                        if a.status != Status::Valid {
                            return Ok(a);
                        }
                        decide_prob_s5(&m.tilde(), &[], opts)
                    });
                    same(cx, "α vs α^⊞ and α^⊟", v, r);
                }
                Err(e) => cx.fail(FailureKind::Internal, e.to_string()),
            }
        }
        LogicId::BelNLuk => match box_dia(&normalize(LogicId::BelNLuk, &f)) {
            Ok(g) => same(cx, "α vs α^{□,◇}", v, decide_prob_nluk_s5(&g, &[], opts)),
            Err(e) => cx.fail(FailureKind::Internal, e.to_string()),
        },
        _ => {}
    }
}

fn conflation_check(cx: &mut Ctx, rng: &mut ChaCha8Rng) {
    if !matches!(cx.logic, LogicId::PrLuk2 | LogicId::ProbS5) {
        return;
    }
    let Some(m) = random_model(cx.logic, &[cx.formula], rng) else { return };
    let Ok(star) = conflate(&m) else { return };
    match (m.eval(cx.formula), star.eval(cx.formula)) {
        (Ok(OuterValue::Pair(a)), Ok(OuterValue::Pair(b))) => {
            if flip(&a) != b {
                cx.fail(FailureKind::Conflation, format!("e = {a}, e* = {b}"));
            }
        }
        (a, b) => cx.fail(FailureKind::Internal, format!("conflation values {a:?} / {b:?}")),
    }
}

/// Iterations are split round-robin over `cfg.workers` threads; the report is
/// assembled in iteration order, so it does not depend on the worker count.
pub fn fuzz(cfg: &FuzzConfig) -> FuzzReport {
    let workers = cfg.workers.clamp(1, cfg.iterations.max(1));
    let mut slots: Vec<(Option<Status>, Vec<Failure>)> = vec![(None, Vec::new()); cfg.iterations];
    let work = |w: usize| -> Vec<(usize, Option<Status>, Vec<Failure>)> {
        (w..cfg.iterations)
            .step_by(workers)
            .map(|i| {
                let mut fails = Vec::new();
                let st = run_one(cfg.logics[i % cfg.logics.len()], iteration_seed(cfg.seed, i), cfg, &mut fails);
                (i, st, fails)
            })
            .collect()
    };
    let parts: Vec<_> = if workers == 1 {
        vec![work(0)]
    } else {
        std::thread::scope(|s| {
            let hs: Vec<_> = (0..workers).map(|w| s.spawn(move || work(w))).collect();
            hs.into_iter().map(|h| h.join().expect("fuzz worker panicked")).collect()
        })
    };
    for (i, st, fails) in parts.into_iter().flatten() {
        slots[i] = (st, fails);
    }
    let mut rep = FuzzReport::default();
    for (st, fails) in slots {
        match st {
            Some(Status::Valid) => rep.valid += 1,
            Some(_) => rep.not_valid += 1,
            None => rep.skipped += 1,
        }
        rep.iterations += 1;
        if let Some(dir) = &cfg.corpus {
            for f in &fails {
                let _ = write_corpus(dir, f);
            }
        }
        rep.failures.extend(fails);
    }
    rep
}

fn write_corpus(dir: &PathBuf, f: &Failure) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let body = json!({
        "kind": format!("{:?}", f.kind),
        "logic": f.logic.name(),
        "seed": f.seed,
        "formula": f.formula,
        "detail": f.detail,
    });
    std::fs::write(dir.join(format!("{}-{}.json", f.logic.name(), f.seed)), serde_json::to_string_pretty(&body)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_is_deterministic() {
        let cfg = FuzzConfig { iterations: 1, ..FuzzConfig::default() };
        let s = iteration_seed(7, 3);
        let mut a = Vec::new();
        let mut b = Vec::new();
        let x = run_one(LogicId::PrLuk2, s, &cfg, &mut a);
        let y = run_one(LogicId::PrLuk2, s, &cfg, &mut b);
        assert_eq!(x, y);
        assert_eq!(a.len(), b.len());
    }

    #[test]
    fn short_run_is_clean() {
        let cfg = FuzzConfig { iterations: 90, seed: 7, ..FuzzConfig::default() };
        let rep = fuzz(&cfg);
        assert!(rep.failures.is_empty(), "{:?}", rep.failures);
    }

    #[test]
    fn worker_count_does_not_change_report() {
        let base = FuzzConfig { iterations: 20, seed: 11, ..FuzzConfig::default() };
        let a = fuzz(&base);
        let b = fuzz(&FuzzConfig { workers: 3, ..base });
        assert_eq!((a.valid, a.not_valid, a.skipped), (b.valid, b.not_valid, b.skipped));
    }
}
