//! The ten acceptance criteria, each printed as one PASS/FAIL line.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture`.

mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;
use twolayer::bd::{BDModel, FourValue, WSet};
use twolayer::decide::{decide, decide_bel_luk2, decide_four_pr, decide_pr_luk2, decide_prob_s5, decide_prop, Options, Status, Verdict, Witness};
use twolayer::fixtures::{neither_pair, agreeing_pair, three_worlds};
use twolayer::fuzz::{fuzz, FailureKind, FuzzConfig};
use twolayer::gen::{random_bd, random_formula, random_modal_body};
use twolayer::kripke::{induced_bel_pl, induced_mass, shrink_all, shrink_cluster, tracked_formulas, transfer_measure_to_canonical, KripkeModel};
use twolayer::luk::Pair;
use twolayer::measures::{audit_belief, audit_plausibility, audit_pm_probability, bel_from_mass, import_export, pl_from_mass};
use twolayer::proofcheck::{check_proof, instantiate, proof_from_json, Calculus, Justification, Proof};
use twolayer::rat::{frac, one, zero, Rat};
use twolayer::syntax::{bd_len, fm_len, nnf, parse, parse_bd, var, Bd, Fm, LogicId};
use twolayer::translate::{boxminus, boxplus, check_length_envelopes, neg_push, to_four, to_pm};
use twolayer::two_layered::{OuterValue, Structure};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pf(logic: LogicId, s: &str) -> Fm {
    parse(s, logic).unwrap_or_else(|e| panic!("{s}: {e}"))
}

// ---------------------------------------------------------------- 1

fn c1_three_worlds_values() -> Outcome {
    let pr = three_worlds(LogicId::PrLuk2);
    let four = three_worlds(LogicId::FourPr);
    let want = [
        (&pr, "Pr (p & !q)", OuterValue::Pair(Pair::new(frac(1, 3), frac(1, 2)))),
        (&four, "Db (p & !q)", OuterValue::Single(frac(1, 6))),
        (&four, "Bl (q | !q)", OuterValue::Single(frac(1, 2))),
    ];
    for (m, s, v) in want {
        let got = m.eval(&pf(m.logic, s)).map_err(|e| e.to_string())?;
        ensure(got == v, || format!("{s} = {got}, expected {v}"))?;
        let (t, f) = direct_value(m, &pf(m.logic, s));
        ensure(t == *v.truth(), || format!("{s}: oracle gives {t}"))?;
        if let OuterValue::Pair(p) = &v {
            ensure(f == p.f, || format!("{s}: oracle falsity {f}"))?;
        }
    }
    Ok("(1/3, 1/2), 1/6, 1/2".into())
}

// ---------------------------------------------------------------- 2

fn c2_neither_pair_agreeing_pair() -> Outcome {
    let (m, mu) = neither_pair();
    let reports = audit_pm_probability(&m, &mu).map_err(|e| e.to_string())?;
    ensure(reports.iter().all(|r| r.pass), || format!("neither-pair audit: {reports:?}"))?;
    let n = m.n();
    let ie = import_export(&m.worlds, &mu, &WSet::from_iter(n, [0]), &WSet::from_iter(n, [1])).map_err(|e| e.to_string())?;
    let w = ie.witness.clone().unwrap_or_default();
    ensure(!ie.pass && w.contains("=1") && w.contains("2/3"), || format!("IE: {ie}"))?;
    let ((w1, mu1), (w2, pi)) = agreeing_pair();
    ensure(pi.is_probability(), || "agreeing-pair π is not classical".into())?;
    let sample = ["p", "!p", "p | !p", "p & !p", "!!p", "(p & !p) | p"];
    for s in sample {
        let b = parse_bd(s).map_err(|e| e.to_string())?;
        for (base, mu) in [(&w1, &mu1), (&w2, &pi)] {
            let pos = set_of(base.n(), |w| bd_at(base, &b, w).0);
            let v = measure_of(mu, &pos);
            ensure(v == frac(1, 2), || format!("π(|{s}|⁺) = {v}"))?;
        }
    }
    Ok(format!("audit passes, IE witness {w}, {} sampled formulas at 1/2", sample.len()))
}

// ---------------------------------------------------------------- 3

/// Inner formulas over `p`, `q` of depth at most `d`, deduplicated.
fn inner_formulas(d: usize) -> Vec<Bd> {
    let mut lv = vec![var("p"), var("q")];
    for _ in 0..d {
        let prev = lv.clone();
        let mut next = prev.clone();
        next.extend(prev.iter().map(|a| a.clone().neg()));
        for a in &prev {
            for b in &prev {
                next.push(a.clone().and(b.clone()));
                next.push(a.clone().or(b.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        next.retain(|x| seen.insert(x.clone()));
        lv = next;
    }
    lv
}

fn bd_signature(b: &Bd) -> Vec<(bool, bool)> {
    let vs = [FourValue::T, FourValue::B, FourValue::N, FourValue::F];
    let mut m = BDModel::new((0..16).map(|i| format!("w{i}")).collect());
    for (i, (x, y)) in vs.iter().flat_map(|x| vs.iter().map(move |y| (x, y))).enumerate() {
        m.set("p", i, *x);
        m.set("q", i, *y);
    }
    (0..16).map(|w| bd_at(&m, b, w)).collect()
}

fn countermodel_sound(logic: LogicId, f: &Fm, v: &Verdict) -> Result<(), String> {
    let cm = v.countermodel.as_ref().ok_or_else(|| format!("{f}: NOT VALID without countermodel"))?;
    let val = match &cm.witness {
        Witness::Model(m) => match &m.structure {
            Structure::Measured { .. } => direct_value(m, f),
            Structure::Kripke(k) => kripke_value(k, f),
        },
        Witness::Valuation(_) => return Err("unexpected valuation witness".into()),
    };
    ensure(!designated_pair(logic, &val), || format!("{f}: countermodel gives designated ({}, {})", val.0, val.1))
}

fn c3_axiom_suite() -> Outcome {
    let all = inner_formulas(2);
    // Values of an atom depend only on the extents of its body, so two
    // members per BD-equivalence class cover every instance.
    let mut by_class: BTreeMap<Vec<(bool, bool)>, Vec<Bd>> = BTreeMap::new();
    for b in &all {
        let members = by_class.entry(bd_signature(b)).or_default();
        if members.len() < 2 {
            members.push(b.clone());
        }
    }
    let pool: Vec<Bd> = by_class.values().flatten().cloned().collect();
    let opts = Options::default();
    let schemes = [
        (Calculus::PrLuk2, ["pm-mon", "pm-neg", "pm-ex"].as_slice()),
        (Calculus::FourPr, ["4equiv", "4contr", "4neg", "4mon", "4part1", "4part2", "4ex"].as_slice()),
    ];
    let mut count = 0;
    for (calc, names) in schemes {
        for name in names {
            let mut seen = BTreeSet::new();
            for a in &pool {
                for b in &pool {
                    for f in instantiate(calc, name, a, b) {
                        if !seen.insert(f.clone()) {
                            continue;
                        }
                        let v = decide(calc.logic(), &f, &[], &opts).map_err(|e| format!("{f}: {e}"))?;
                        ensure(v.valid(), || format!("{name} instance {f} is {}", v.status.label()))?;
                        count += 1;
                    }
                }
            }
            ensure(!seen.is_empty(), || format!("{name}: no instances"))?;
        }
    }
    let non_theorems = [
        (LogicId::PrLuk2, "Pr (p & !p) -> Pr q"),
        (LogicId::PrLuk2, "Pr (p | !p)"),
        (LogicId::PrLuk2, "Pr p (+) Pr !p"),
        (LogicId::FourPr, "Cf (p & !p) -> Bl q"),
        (LogicId::FourPr, "Bl (p | !p)"),
        (LogicId::FourPr, "Bl p (+) Bl !p"),
    ];
    for (logic, s) in non_theorems {
        let f = pf(logic, s);
        let v = decide(logic, &f, &[], &opts).map_err(|e| e.to_string())?;
        ensure(v.status == Status::NotValid, || format!("{s} is {}", v.status.label()))?;
        countermodel_sound(logic, &f, &v)?;
    }
    Ok(format!(
        "{count} instances over {} bodies ({} classes of {} formulas) VALID; {} non-theorems refuted",
        pool.len(),
        by_class.len(),
        all.len(),
        non_theorems.len()
    ))
}

// ---------------------------------------------------------------- 4

fn c4_embeddings() -> Outcome {
    let opts = Options::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 200;
    let mut refuted = 0;
    for _ in 0..n {
        let beta = random_formula(&mut rng, LogicId::FourPr, &["p", "q"], 3, 2);
        let pm = to_pm(&beta).map_err(|e| e.to_string())?;
        let a = decide_four_pr(&beta, &[], &opts).map_err(|e| format!("{beta}: {e}"))?;
        let b = decide_pr_luk2(&pm, &[], &opts).map_err(|e| format!("{pm}: {e}"))?;
        ensure(a.status == b.status, || format!("{beta}: {} vs β^± {}", a.status.label(), b.status.label()))?;
        if !a.valid() {
            countermodel_sound(LogicId::FourPr, &beta, &a)?;
            countermodel_sound(LogicId::PrLuk2, &pm, &b)?;
            refuted += 1;
        }
    }
    for _ in 0..n {
        let alpha = random_formula(&mut rng, LogicId::BelLuk2, &["p", "q"], 3, 2);
        let v = decide_bel_luk2(&alpha, &[], &opts).map_err(|e| format!("{alpha}: {e}"))?;
        let pushed = neg_push(&alpha);
        let plus = boxplus(&pushed).map_err(|e| e.to_string())?;
        let minus = boxminus(&pushed).map_err(|e| e.to_string())?;
        // e₁(α^⊞) = 1 everywhere, checked as Prob_S5 validity of α^⊞ itself.
        let vp = decide_prob_s5(&plus, &[], &opts).map_err(|e| format!("{plus}: {e}"))?;
        let vm = decide_prob_s5(&minus.clone().tilde(), &[], &opts).map_err(|e| format!("{minus}: {e}"))?;
        let two = vp.valid() && vm.valid();
        ensure(v.valid() == two, || format!("{alpha}: {} vs two-condition {two}", v.status.label()))?;
        if !v.valid() {
            countermodel_sound(LogicId::BelLuk2, &alpha, &v)?;
            let (w, f) = if vp.valid() { (&vm, minus.clone().tilde()) } else { (&vp, plus.clone()) };
            countermodel_sound(LogicId::ProbS5, &f, w)?;
            refuted += 1;
        }
    }
    Ok(format!("{} formulas per pair, 0 disagreements, {refuted} countermodels re-validated", n))
}

// ---------------------------------------------------------------- 5

fn c5_lengths() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = (0.0f64, 0.0f64);
    for i in 0..10_000 {
        let depth = 1 + i % 5;
        let alpha = random_formula(&mut rng, LogicId::PrLuk2, &["p", "q", "r"], depth, 3);
        let beta = random_formula(&mut rng, LogicId::FourPr, &["p", "q", "r"], depth, 3);
        check_length_envelopes(&alpha, &beta).map_err(|e| format!("{alpha} / {beta}: {e}"))?;
        let (la, lb) = (fm_len(&alpha), fm_len(&beta));
        let l4 = fm_len(&to_four(&neg_push(&alpha)).map_err(|e| e.to_string())?);
        let lpm = fm_len(&to_pm(&beta).map_err(|e| e.to_string())?);
        // Composite envelope 3(3ℓ+3)+8 for (α^¬)^4, and 4ℓ+16 for β^±.
        ensure(l4 <= 9 * la + 17, || format!("ℓ((α^¬)^4) = {l4} for ℓ(α) = {la}"))?;
        ensure(lpm <= 4 * lb + 16, || format!("ℓ(β^±) = {lpm} for ℓ(β) = {lb}"))?;
        for a in alpha.atoms() {
            let l = bd_len(&a.body);
            ensure(bd_len(&nnf(&a.body)) <= 2 * l + 1, || format!("nnf of {} too long", a.body))?;
        }
        worst.0 = worst.0.max(l4 as f64 / la as f64);
        worst.1 = worst.1.max(lpm as f64 / lb as f64);
    }
    Ok(format!("10000 pairs; worst ratios {:.2} and {:.2}", worst.0, worst.1))
}

// ---------------------------------------------------------------- 6

/// Uniform sample of formulas with exactly `n` connectives.
fn sample_sized(logic: LogicId, n: usize, counts: &[u128], rng: &mut ChaCha8Rng) -> Fm {
    if n == 0 {
        return twolayer::syntax::pvar(if rng.gen_bool(0.5) { "p" } else { "q" });
    }
    let (un, bin) = if logic.nelson() { (2u128, 2u128) } else if logic == LogicId::LukDelta { (2, 1) } else { (3, 1) };
    let total = counts[n];
    let mut r = rng.gen_range(0..total);
    let u = un * counts[n - 1];
    if r < u {
        let a = sample_sized(logic, n - 1, counts, rng);
        let mut out = Vec::new();
        unary(logic, &a, &mut |g| out.push(g));
        return out.swap_remove((r / counts[n - 1]) as usize);
    }
    r -= u;
    for i in 0..n {
        let w = bin * counts[i] * counts[n - 1 - i];
        if r < w {
            let a = sample_sized(logic, i, counts, rng);
            let b = sample_sized(logic, n - 1 - i, counts, rng);
            let mut out = Vec::new();
            binary(logic, &a, &b, &mut |g| out.push(g));
            return out.swap_remove(rng.gen_range(0..out.len()));
        }
        r -= w;
    }
    unreachable!()
}

fn size_counts(logic: LogicId, max: usize) -> Vec<u128> {
    let (un, bin) = if logic.nelson() { (2u128, 2u128) } else if logic == LogicId::LukDelta { (2, 1) } else { (3, 1) };
    let mut c = vec![2u128];
    for n in 1..=max {
        let b: u128 = (0..n).map(|i| c[i] * c[n - 1 - i]).sum();
        c.push(un * c[n - 1] + bin * b);
    }
    c
}

struct GridTally {
    formulas: usize,
    falsified: usize,
}

fn grid_agree(logic: LogicId, f: &Fm, t: &mut GridTally) -> Result<(), String> {
    let v = decide_prop(logic, f, &[], &Options::default()).map_err(|e| format!("{f}: {e}"))?;
    let cm = grid_countermodel(logic, f);
    t.formulas += 1;
    if let Some(cm) = cm {
        t.falsified += 1;
        ensure(!v.valid(), || format!("{}: tableau VALID, grid countermodel {cm:?}", f))?;
        ensure(branch_matches(logic, f, &cm), || format!("{f}: no feasible branch for {cm:?}"))?;
    }
    Ok(())
}

fn c6_tableau_vs_grid() -> Outcome {
    let mut parts = Vec::new();
    // (logic, exhaustive up to, sampled size-6 formulas)
    let plan = [(LogicId::LukDelta, 6, 0), (LogicId::Luk2Delta, 6, 0), (LogicId::NLuk, 5, 40_000)];
    for (logic, max, sampled) in plan {
        let mut t = GridTally { formulas: 0, falsified: 0 };
        let by = enumerate_by_size(logic, max.min(5));
        for layer in &by {
            for f in layer.iter().filter(|f| p_first(f)) {
                grid_agree(logic, f, &mut t)?;
            }
        }
        if max == 6 {
            // The top layer is generated on the fly to keep memory flat.
            for i in 0..6 {
                for a in &by[i] {
                    for b in &by[5 - i] {
                        let mut fs = Vec::new();
                        binary(logic, a, b, &mut |g| fs.push(g));
                        for f in fs.iter().filter(|f| p_first(f)) {
                            grid_agree(logic, f, &mut t)?;
                        }
                    }
                }
            }
            for a in &by[5] {
                let mut fs = Vec::new();
                unary(logic, a, &mut |g| fs.push(g));
                for f in fs.iter().filter(|f| p_first(f)) {
                    grid_agree(logic, f, &mut t)?;
                }
            }
        }
        if sampled > 0 {
            let counts = size_counts(logic, 6);
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            for _ in 0..sampled {
                let f = sample_sized(logic, 6, &counts, &mut rng);
                grid_agree(logic, &f, &mut t)?;
            }
        }
        let scope = if sampled > 0 { format!("≤{max} + {sampled} sampled at 6") } else { format!("≤{max}") };
        parts.push(format!("{} {scope}: {} formulas, {} grid-falsified", logic.name(), t.formulas, t.falsified));
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- 7, 8

fn random_kripke(rng: &mut ChaCha8Rng) -> KripkeModel {
    let n = rng.gen_range(3..=8);
    let mut base = BDModel::new((0..n).map(|i| format!("w{i}")).collect());
    let vals = [FourValue::T, FourValue::B, FourValue::N, FourValue::F];
    for w in 0..n {
        for p in ["p", "q"] {
            base.set(p, w, vals[rng.gen_range(0..4)]);
        }
    }
    let blocks = rng.gen_range(1..=2);
    let owner: Vec<usize> = (0..n).map(|w| if w < blocks { w } else { rng.gen_range(0..blocks) }).collect();
    let partition: Vec<WSet> = (0..blocks).map(|b| set_of(n, |w| owner[w] == b)).collect();
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..6)).collect();
    let total: i64 = raw.iter().sum();
    let weights: Vec<Rat> = if total == 0 {
        (0..n).map(|w| if w == 0 { one() } else { zero() }).collect()
    } else {
        raw.iter().map(|&x| frac(x, total)).collect()
    };
    KripkeModel::new(base, vec![partition], vec![weights]).expect("random model")
}

/// A Γ with at most three tracked modal formulas.
fn random_gamma(rng: &mut ChaCha8Rng) -> Vec<Bd> {
    loop {
        let k = rng.gen_range(1..=3);
        let g: Vec<Bd> = (0..k).map(|_| random_modal_body(rng, &["p", "q"], 2, 0, true)).collect();
        if tracked_formulas(&g).len() <= 3 {
            return g;
        }
    }
}

fn pi_pair(k: &KripkeModel, f: &Bd) -> (Rat, Rat) {
    let n = k.n();
    let at: Vec<(bool, bool)> = (0..n).map(|w| modal_at(k, f, w)).collect();
    let pi = |x: WSet| x.iter().fold(zero(), |s, i| s + &k.measures[0][i]);
    (pi(set_of(n, |w| at[w].0)), pi(set_of(n, |w| at[w].1)))
}

fn models_for_7_and_8() -> Vec<(KripkeModel, Vec<Bd>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..100).map(|_| (random_kripke(&mut rng), random_gamma(&mut rng))).collect()
}

fn c7_small_model_transfer() -> Outcome {
    let (mut oversized, mut shrunk_blocks) = (0, 0);
    for (m, gamma) in models_for_7_and_8() {
        let tracked = tracked_formulas(&gamma);
        let bound = 2 * tracked.len() + 1;
        for b in 0..m.partitions[0].len() {
            if m.partitions[0][b].len() > bound {
                oversized += 1;
            }
            let s = shrink_cluster(&m, &gamma, b).map_err(|e| e.to_string())?;
            if s.n() < m.n() {
                shrunk_blocks += 1;
            }
            for sigma in &tracked {
                ensure(pi_pair(&m, sigma) == pi_pair(&s, sigma), || format!("shrinking block {b} changes π(|{sigma}|±)"))?;
            }
        }
        let all = shrink_all(&m, &gamma).map_err(|e| e.to_string())?;
        ensure(all.partitions[0].iter().all(|c| c.len() <= bound), || format!("a cluster exceeds {bound} states"))?;
        for (src, label, bounded) in [(&m, "model", false), (&all, "shrunk model", true)] {
            let cms = transfer_measure_to_canonical(src, &gamma).map_err(|e| e.to_string())?;
            let c = cms[0].to_model().map_err(|e| e.to_string())?;
            for sigma in &tracked {
                ensure(pi_pair(&m, sigma) == pi_pair(&c, sigma), || format!("transfer of the {label} changes π(|{sigma}|±)"))?;
            }
            if bounded {
                ensure(cms[0].max_cluster() <= bound, || format!("canonical measure charges a cluster above {bound}"))?;
            }
        }
    }
    Ok(format!("100 models, {oversized} oversized blocks, {shrunk_blocks} shrunk; all measures preserved"))
}

fn c8_belief_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut literal: Option<String> = None;
    let mut checked = 0;
    for (m, _) in models_for_7_and_8() {
        let n = m.n();
        let phis: Vec<Bd> = (0..4).map(|_| random_bd(&mut rng, &["p", "q"], 2)).collect();
        let bp = induced_bel_pl(&m, &phis).map_err(|e| e.to_string())?;
        let mass = induced_mass(&m, 0);
        let (bel, pl) = (bel_from_mass(&mass), pl_from_mass(&mass));
        let worlds = &m.base.worlds;
        let ab = audit_belief(worlds, &bel, n).map_err(|e| e.to_string())?;
        let ap = audit_plausibility(worlds, &pl, n).map_err(|e| e.to_string())?;
        ensure(ab.pass && ap.pass, || format!("audit at order {n}: {ab} / {ap}"))?;
        for (phi, v) in phis.iter().zip(&bp) {
            let at: Vec<(bool, bool)> = (0..n).map(|w| bd_at(&m.base, phi, w)).collect();
            let pos = set_of(n, |w| at[w].0);
            let neg = set_of(n, |w| at[w].1);
            ensure(v.bel_pos == measure_of(&bel, &pos) && v.bel_neg == measure_of(&bel, &neg), || format!("bel of {phi}"))?;
            ensure(v.pl_pos == measure_of(&pl, &pos) && v.pl_neg == measure_of(&pl, &neg), || format!("pl of {phi}"))?;
            let complement = m.base.all().minus(&pos);
            ensure(v.pl_pos == one() - measure_of(&bel, &complement), || format!("pl(X) ≠ 1 − bel(W∖X) for {phi}"))?;
            if literal.is_none() && v.pl_pos != one() - &v.bel_neg {
                literal = Some(format!("{phi}: pl(|φ|⁺) = {} but 1 − bel(|φ|⁻) = {}", v.pl_pos, one() - &v.bel_neg));
            }
            checked += 1;
        }
    }
    match literal {
        None => Ok(format!("{checked} formulas: audits pass and pl(|φ|⁺) = 1 − bel(|φ|⁻)")),
        Some(w) => Err(format!(
            "audits pass and pl(X) = 1 − bel(W∖X) on {checked} formulas, but the literal identity fails: {w}"
        )),
    }
}

// ---------------------------------------------------------------- 9

fn load_proof(name: &str) -> Proof {
    let path = format!("{}/assets/proofs/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).expect("proof asset");
    proof_from_json(&serde_json::from_str(&text).expect("json"), None).expect("proof")
}

fn mutations(p: &Proof, k: usize) -> Vec<Justification> {
    use Justification::*;
    let mut out = Vec::new();
    let names: Vec<&str> = p.calculus.schemes().into_iter().filter(|s| *s != "valid").collect();
    match &p.lines[k].by {
        Axiom(a) => {
            let i = names.iter().position(|s| s == a).unwrap_or(0);
            for step in 1..names.len() {
                out.push(Axiom(names[(i + step) % names.len()].to_string()));
            }
            out.push(Mp(k, k));
        }
        Premise(i) => {
            out.push(Premise(i + 1));
            out.push(Axiom(names[0].to_string()));
        }
        Mp(i, j) => {
            out.push(Mp(*j, *i));
            out.push(Mp(i.saturating_sub(1), *j));
            out.push(Mp(*i, j.saturating_sub(1)));
            out.push(Mp(*i, k + 1));
            out.push(DeltaNec(*i));
        }
        DeltaNec(i) => {
            out.push(Conf(*i));
            out.push(DeltaNec(i.saturating_sub(1)));
            out.push(Mp(*i, *i));
        }
        Conf(i) => {
            out.push(DeltaNec(*i));
            out.push(Conf(i.saturating_sub(1)));
        }
    }
    out
}

fn c9_proofs() -> Outcome {
    let mut total = 0;
    let mut benign = 0;
    for file in ["luk_delta.json", "luk2.json", "pr_luk2.json", "four_pr.json"] {
        let p = load_proof(file);
        check_proof(&p).map_err(|e| format!("{file}: {e}"))?;
        for k in 0..p.lines.len() {
            for by in mutations(&p, k) {
                let mut q = p.clone();
                q.lines[k].by = by.clone();
                match check_proof(&q) {
                    Err(e) => ensure(e.line() == Some(k + 1), || format!("{file} line {}: {by:?} rejected at {e}", k + 1))?,
                    // A rotated axiom name can still name a scheme the line instantiates.
                    Ok(_) if matches!(by, Justification::Axiom(_)) => benign += 1,
                    Ok(_) => return Err(format!("{file} line {}: mutation {by:?} accepted", k + 1)),
                }
                total += 1;
            }
        }
    }
    Ok(format!("4 proofs OK; {} of {total} mutations rejected at the mutated line, {benign} still valid instances", total - benign))
}

// ---------------------------------------------------------------- 10

fn c10_fuzz() -> Outcome {
    let cfg = FuzzConfig { iterations: 10_000, seed: 10, ..FuzzConfig::default() };
    let rep = fuzz(&cfg);
    let bad = rep.count(FailureKind::Soundness) + rep.count(FailureKind::Oracle);
    let summary = format!(
        "{} iterations: {} valid, {} not valid, {} skipped; soundness {}, oracle {}, translation {}, conflation {}, internal {}",
        rep.iterations,
        rep.valid,
        rep.not_valid,
        rep.skipped,
        rep.count(FailureKind::Soundness),
        rep.count(FailureKind::Oracle),
        rep.count(FailureKind::Translation),
        rep.count(FailureKind::Conflation),
        rep.count(FailureKind::Internal)
    );
    if bad == 0 && rep.failures.is_empty() {
        Ok(summary)
    } else {
        let first = rep.failures.first().map(|f| format!("; first: {:?} {} seed {} {}", f.kind, f.logic.name(), f.seed, f.detail));
        Err(summary + &first.unwrap_or_default())
    }
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "three-world values", c1_three_worlds_values),
        (2, "neither and agreeing pairs", c2_neither_pair_agreeing_pair),
        (3, "axiom validity suite", c3_axiom_suite),
        (4, "embedding equivalences", c4_embeddings),
        (5, "length bounds", c5_lengths),
        (6, "tableau vs 1/8 grid", c6_tableau_vs_grid),
        (7, "small model and transfer", c7_small_model_transfer),
        (8, "belief coherence", c8_belief_coherence),
        (9, "proof checking", c9_proofs),
        (10, "fuzz soundness", c10_fuzz),
    ];
    let only: Option<BTreeSet<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = BTreeSet::new();
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        // Written to the handle directly so the lines survive test output capture.
        let line = match out {
            Ok(msg) => format!("criterion {id:>2} PASS ({name}, {secs:.1}s): {msg}"),
            Err(msg) => {
                failed.insert(id);
                format!("criterion {id:>2} FAIL ({name}, {secs:.1}s): {msg}")
            }
        };
        let mut so = std::io::stdout().lock();
        let _ = writeln!(so, "{line}");
        let _ = so.flush();
    }
    // The literal bel/pl duality does not hold for BD models; see the README.
    let expected: BTreeSet<u32> = [8].into_iter().filter(|i| only.as_ref().map_or(true, |o| o.contains(i))).collect();
    assert_eq!(failed, expected, "unexpected acceptance outcome");
}
