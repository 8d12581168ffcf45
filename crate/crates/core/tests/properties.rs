//! Invariants checked as properties over seeded random inputs.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use twolayer::bd::{extents, BDModel, FourValue, WSet};
use twolayer::decide::random_model;
use twolayer::gen::{random_bd, random_formula};
use twolayer::io::{bd_model_from_json, bd_model_to_json, tl_model_from_json, tl_model_to_json};
use twolayer::linarith::{feasible_fm, feasible_simplex, Constraint, Lin, LinSystem, Outcome};
use twolayer::measures::{audit_belief, Mass, Measure};
use twolayer::proofcheck::{check_proof, proof_from_json, Proof};
use twolayer::rat::{frac, one, Rat};
use twolayer::syntax::{atom, bd_len, fm_len, nnf, parse, parse_bd, Bd, Fm, LogicId};
use twolayer::translate::{check_length_envelopes, neg_push, neg_push_nluk};
use twolayer::two_layered::{conflate, flip, OuterValue};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn logic_strategy() -> impl Strategy<Value = LogicId> {
    (0..LogicId::ALL.len()).prop_map(|i| LogicId::ALL[i])
}

fn bd_model(r: &mut ChaCha8Rng, n: usize) -> BDModel {
    let mut m = BDModel::new((0..n).map(|i| format!("w{i}")).collect());
    let vals = [FourValue::T, FourValue::B, FourValue::N, FourValue::F];
    for w in 0..n {
        for p in ["p", "q", "r"] {
            m.set(p, w, vals[r.gen_range(0..4)]);
        }
    }
    m
}

fn rename_fm(f: &Fm, map: &dyn Fn(&str) -> String) -> Fm {
    let go = |g: &Fm| rename_fm(g, map);
    let b = |g: &Fm| Box::new(rename_fm(g, map));
    match f {
        Fm::Var(p) => Fm::Var(map(p)),
        Fm::Atom(a) => atom(a.tag, a.body.rename(map)),
        Fm::Neg(a) => go(a).neg(),
        Fm::Tilde(a) => go(a).tilde(),
        Fm::Delta(a) => go(a).delta(),
        Fm::NTilde(a) => go(a).ntilde(),
        Fm::Imp(x, y) => Fm::Imp(b(x), b(y)),
        Fm::NImp(x, y) => Fm::NImp(b(x), b(y)),
        Fm::And(x, y) => Fm::And(b(x), b(y)),
    }
}

fn load_proof(name: &str) -> Proof {
    let path = format!("{}/assets/proofs/{name}", env!("CARGO_MANIFEST_DIR"));
    let v = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    proof_from_json(&v, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>(), logic in logic_strategy()) {
        let f = random_formula(&mut rng(seed), logic, &["p", "q", "r"], 4, 3);
        let back = parse(&f.to_string(), logic).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn inner_printing_round_trips(seed in any::<u64>()) {
        let b = random_bd(&mut rng(seed), &["p", "q"], 4);
        prop_assert_eq!(parse_bd(&b.to_string()).unwrap(), b);
    }

    #[test]
    fn nnf_keeps_extents_and_stays_short(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let b = random_bd(&mut r, &["p", "q", "r"], 4);
        let m = bd_model(&mut r, n);
        let k = nnf(&b);
        prop_assert_eq!(extents(&m, &b).unwrap(), extents(&m, &k).unwrap());
        for w in 0..n {
            prop_assert_eq!(bd_at(&m, &b, w), bd_at(&m, &k, w));
        }
        prop_assert!(bd_len(&k) <= 2 * bd_len(&b) + 1);
    }

    #[test]
    fn neg_push_preserves_values(seed in any::<u64>(), which in 0usize..2) {
        let logic = [LogicId::PrLuk2, LogicId::ProbS5][which];
        let mut r = rng(seed);
        let f = random_formula(&mut r, logic, &["p", "q"], 4, 2);
        let g = neg_push(&f);
        prop_assert!(!g.has_outer_neg());
        if let Some(m) = random_model(logic, &[&f, &g], &mut r) {
            prop_assert_eq!(m.eval(&f).unwrap(), m.eval(&g).unwrap());
        }
    }

    #[test]
    fn nelson_neg_push_preserves_truth(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_formula(&mut r, LogicId::BelNLuk, &["p", "q"], 4, 2);
        let g = neg_push_nluk(&f);
        if let Some(m) = random_model(LogicId::BelNLuk, &[&f, &g], &mut r) {
            prop_assert_eq!(m.eval(&f).unwrap().truth().clone(), m.eval(&g).unwrap().truth().clone());
        }
    }

    #[test]
    fn translations_stay_within_length_envelopes(seed in any::<u64>(), depth in 1usize..6) {
        let mut r = rng(seed);
        let a = random_formula(&mut r, LogicId::PrLuk2, &["p", "q", "r"], depth, 3);
        let b = random_formula(&mut r, LogicId::FourPr, &["p", "q", "r"], depth, 3);
        prop_assert!(check_length_envelopes(&a, &b).is_ok());
        prop_assert!(fm_len(&neg_push(&a)) <= 3 * fm_len(&a) + 3);
    }

    #[test]
    fn conflation_flips_values_and_is_an_involution(seed in any::<u64>(), which in 0usize..2) {
        let logic = [LogicId::PrLuk2, LogicId::ProbS5][which];
        let mut r = rng(seed);
        let f = random_formula(&mut r, logic, &["p", "q"], 3, 2);
        if let Some(m) = random_model(logic, &[&f], &mut r) {
            let star = conflate(&m).unwrap();
            let (OuterValue::Pair(a), OuterValue::Pair(b)) = (m.eval(&f).unwrap(), star.eval(&f).unwrap()) else {
                panic!("paired logic")
            };
            prop_assert_eq!(flip(&a), b);
            prop_assert_eq!(conflate(&star).unwrap(), m);
        }
    }

    #[test]
    fn library_evaluation_matches_direct_oracle(seed in any::<u64>(), which in 0usize..4) {
        let logic = [LogicId::PrLuk2, LogicId::FourPr, LogicId::BelLuk2, LogicId::BelNLuk][which];
        let mut r = rng(seed);
        let f = random_formula(&mut r, logic, &["p", "q"], 4, 2);
        if let Some(m) = random_model(logic, &[&f], &mut r) {
            let got = m.eval(&f).unwrap();
            let (t, u) = direct_value(&m, &f);
            prop_assert_eq!(got.truth(), &t);
            if let OuterValue::Pair(p) = got {
                prop_assert_eq!(p.f, u);
            }
        }
    }

    #[test]
    fn kripke_evaluation_matches_direct_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_formula(&mut r, LogicId::ProbS5, &["p", "q"], 4, 2);
        if let Some(m) = random_model(LogicId::ProbS5, &[&f], &mut r) {
            let twolayer::two_layered::Structure::Kripke(k) = &m.structure else { panic!("kripke") };
            let (t, u) = kripke_value(k, &f);
            prop_assert_eq!(m.eval(&f).unwrap(), OuterValue::Pair(twolayer::luk::Pair::new(t, u)));
        }
    }

    #[test]
    fn propositional_evaluation_matches_grid(seed in any::<u64>(), which in 0usize..3) {
        let logic = [LogicId::LukDelta, LogicId::Luk2Delta, LogicId::NLuk][which];
        let mut r = rng(seed);
        let f = random_formula(&mut r, logic, &["p", "q"], 5, 0);
        let g: std::collections::BTreeMap<String, G> = ["p", "q"]
            .iter()
            .map(|p| (p.to_string(), (r.gen_range(0..=STEP), if logic == LogicId::LukDelta { 0 } else { r.gen_range(0..=STEP) })))
            .collect();
        let val = g.iter().map(|(k, (t, u))| (k.clone(), twolayer::luk::Pair::new(frac(*t as i64, 8), frac(*u as i64, 8)))).collect();
        let got = twolayer::decide::prop_value(logic, &val, &f).unwrap();
        let (t, u) = grid_eval(&f, &|p| g[p]);
        prop_assert_eq!(got.truth(), &frac(t as i64, 8));
        if let OuterValue::Pair(p) = got {
            prop_assert_eq!(p.f, frac(u as i64, 8));
        }
    }

    #[test]
    fn model_files_round_trip(seed in any::<u64>(), logic in logic_strategy()) {
        prop_assume!(!logic.propositional());
        let mut r = rng(seed);
        let f = random_formula(&mut r, logic, &["p", "q"], 2, 2);
        if let Some(m) = random_model(logic, &[&f], &mut r) {
            let back = tl_model_from_json(&tl_model_to_json(&m), Some(logic)).unwrap();
            prop_assert_eq!(back.eval(&f).unwrap(), m.eval(&f).unwrap());
            let base = m.base().clone();
            prop_assert_eq!(bd_model_from_json(&bd_model_to_json(&base)).unwrap(), base);
        }
    }

    #[test]
    fn fm_and_simplex_agree(seed in any::<u64>(), vars in 1usize..5, rows in 1usize..8) {
        let mut r = rng(seed);
        let mut sys = LinSystem::new();
        let xs: Vec<usize> = (0..vars).map(|i| sys.fresh(format!("x{i}"))).collect();
        let lin = |r: &mut ChaCha8Rng| {
            let mut l = Lin::konst(frac(r.gen_range(-4..=4), 4));
            for &x in &xs {
                l = l.add(&Lin::var(x).scale(&frac(r.gen_range(-3..=3), 2)));
            }
            l
        };
        for _ in 0..rows {
            let (a, b) = (lin(&mut r), lin(&mut r));
            sys.push(match r.gen_range(0..3) {
                0 => Constraint::le(a, b),
                1 => Constraint::lt(a, b),
                _ => Constraint::eq(a, b),
            });
        }
        let fm = feasible_fm(&sys).expect("small systems stay under the row limit");
        let sx = feasible_simplex(&sys);
        prop_assert_eq!(fm.is_feasible(), sx.is_feasible());
        for o in [fm, sx] {
            if let Outcome::Feasible(x) = o {
                prop_assert!(sys.satisfied_by(&x));
                prop_assert!(x.iter().all(|v| *v >= Rat::from_integer(0.into()) && *v <= one()));
            }
        }
    }

    #[test]
    fn two_monotonicity_audit_matches_brute_force(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let mut table = HashMap::new();
        for mask in 0..1u64 << n {
            let v = if mask == 0 { frac(0, 1) } else if mask == (1 << n) - 1 { one() } else { frac(r.gen_range(0..=4), 4) };
            table.insert(WSet::from_mask(n, mask), v);
        }
        let mu = Measure::subsets(n, table.clone()).unwrap();
        let worlds: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let rep = audit_belief(&worlds, &mu, 2).unwrap();
        let full = (1u64 << n) - 1;
        let g = |m: u64| table[&WSet::from_mask(n, m)].clone();
        let mut ok = true;
        for a in 0..=full {
            for b in 0..=full {
                if g(a | b) + g(a & b) < g(a) + g(b) {
                    ok = false;
                }
            }
            for b in 0..=full {
                if a & b == a && g(a) > g(b) {
                    ok = false;
                }
            }
        }
        prop_assert_eq!(rep.pass, ok, "{:?}", rep.witness);
    }

    #[test]
    fn mass_beliefs_pass_every_order(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let focal: Vec<(WSet, i64)> = (0..3).map(|_| (WSet::from_mask(n, r.gen_range(1..1u64 << n)), r.gen_range(1..5))).collect();
        let total: i64 = focal.iter().map(|(_, w)| w).sum();
        let mass = Mass::new(n, focal.into_iter().map(|(s, w)| (s, frac(w, total))).collect()).unwrap();
        let worlds: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        prop_assert!(audit_belief(&worlds, &Measure::Belief(mass), n).unwrap().pass);
    }
}

#[test]
fn proofs_survive_renaming() {
    let swap = |p: &str| match p {
        "p" => "q".to_string(),
        "q" => "p".to_string(),
        "a" => "b".to_string(),
        "b" => "a".to_string(),
        other => format!("{other}_r"),
    };
    for name in ["luk_delta.json", "luk2.json", "pr_luk2.json", "four_pr.json"] {
        let mut p = load_proof(name);
        let before = check_proof(&p).unwrap();
        p.premises = p.premises.iter().map(|f| rename_fm(f, &swap)).collect();
        for l in &mut p.lines {
            l.formula = rename_fm(&l.formula, &swap);
        }
        let after = check_proof(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(after, rename_fm(&before, &swap));
    }
}

#[test]
fn renamed_inner_formulas_keep_validity() {
    let f = parse("Pr (p & q) -> Pr p", LogicId::PrLuk2).unwrap();
    let g = rename_fm(&f, &|v: &str| if v == "p" { "r".into() } else { v.into() });
    let o = twolayer::decide::Options::default();
    let a = twolayer::decide::decide(LogicId::PrLuk2, &f, &[], &o).unwrap();
    let b = twolayer::decide::decide(LogicId::PrLuk2, &g, &[], &o).unwrap();
    assert!(a.valid() && b.valid());
    let _: Bd = parse_bd("p").unwrap();
}
