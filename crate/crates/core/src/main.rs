use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use twolayer::bd::{extents, WSet};
use twolayer::decide::{decide, DecideError, Mode, Options, Status};
use twolayer::fuzz::{fuzz, iteration_seed, run_one, FuzzConfig};
use twolayer::io::{bd_model_from_json, read_json, tl_model_from_json, tl_model_to_json, verdict_to_json};
use twolayer::kripke::extents_modal;
use twolayer::linarith::{is_feasible, Constraint, Lin};
use twolayer::measures::{
    audit_belief, audit_four_probability, audit_plausibility, audit_pm_probability, import_export,
    measure_from_json, set_name, AuditReport, Measure,
};
use twolayer::proofcheck::{check_proof, proof_from_json, Calculus};
use twolayer::rat::one;
use twolayer::syntax::{fm_len, formula_lines, parse, parse_bd, print_primitive, Fm, LogicId};
use twolayer::tableau::{
    branch_to_constraints, enumerate_branches, refutation_root, Arena, Branch, Calculus as TCalc, Dir,
};
use twolayer::translate::{apply, translation};

const USAGE: u8 = 64;
const INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "twolayer", version, about = "Two-layered probability and belief logics over Belnap-Dunn logic")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditKind {
    Pm,
    Four,
    Bel,
    Pl,
}

#[derive(Args)]
struct Input {
    /// Formula text.
    #[arg(long, short = 'e')]
    expr: Option<String>,
    /// File with one formula per line (`;` comments).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long)]
    logic: LogicId,
    #[command(flatten)]
    input: Input,
    /// File of premises, one per line.
    #[arg(long)]
    premises: Option<PathBuf>,
    /// A premise formula; may be repeated.
    #[arg(long)]
    premise: Vec<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    budget: usize,
    /// Randomized mode: support size.
    #[arg(long)]
    support: Option<usize>,
    #[arg(long, default_value_t = 10)]
    prop_cap: usize,
    #[arg(long, default_value_t = 16)]
    lit_cap: usize,
    /// Print the linear systems of feasible branches.
    #[arg(long)]
    dump_lp: bool,
    /// Write the countermodel (if any) to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse and print a formula.
    Parse {
        #[arg(long)]
        logic: Option<LogicId>,
        #[command(flatten)]
        input: Input,
        /// Print with derived connectives expanded.
        #[arg(long)]
        primitive: bool,
    },
    /// Evaluate a formula on a model file.
    Eval {
        #[arg(long)]
        logic: Option<LogicId>,
        #[arg(long)]
        model: PathBuf,
        /// Model name inside a multi-model file.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, short = 'e')]
        expr: Option<String>,
        /// Inner BD formula: print its positive and negative extensions.
        #[arg(long)]
        bd: Option<String>,
    },
    /// Decide validity.
    Check(DecideArgs),
    /// Decide entailment from premises.
    Entails(DecideArgs),
    /// Translate between logics.
    Translate {
        #[arg(long)]
        from: LogicId,
        #[arg(long)]
        to: LogicId,
        #[command(flatten)]
        input: Input,
        /// Use ¬ removal by primed variables instead of ¬ pushing.
        #[arg(long)]
        star: bool,
    },
    /// Run the constraint tableau on a propositional formula.
    Tableau {
        #[arg(long)]
        logic: LogicId,
        #[arg(long, short = 'e')]
        expr: String,
        /// Print every complete branch.
        #[arg(long)]
        dump: bool,
    },
    /// Audit a measure against its axioms.
    Audit {
        #[arg(long, value_enum)]
        kind: AuditKind,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        name: Option<String>,
        /// Order of monotonicity for bel/pl (default |W|).
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, short = 'v')]
        verbose: bool,
    },
    /// Check a Hilbert-style proof file.
    Proof {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        calculus: Option<Calculus>,
    },
    /// Seeded cross-checks of deciders, translations and search.
    Fuzz {
        /// Logics to cycle through (default: all).
        #[arg(long)]
        logic: Vec<LogicId>,
        #[arg(long, default_value_t = 500)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Directory receiving one JSON file per failure.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Re-run a single iteration seed taken from a corpus file.
        #[arg(long)]
        replay: Option<u64>,
        /// Worker threads; the report is identical for any count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

enum Fail {
    Usage(String),
    Internal(String),
}

type CResult<T> = Result<T, Fail>;

fn usage(e: impl ToString) -> Fail {
    Fail::Usage(e.to_string())
}

fn formulas(input: &Input, logic: LogicId) -> CResult<Vec<Fm>> {
    let mut out = Vec::new();
    if let Some(e) = &input.expr {
        out.push(parse(e, logic).map_err(usage)?);
    }
    if let Some(path) = &input.file {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        for (n, line) in formula_lines(&text) {
            out.push(parse(line, logic).map_err(|e| usage(format!("{}:{n}: {e}", path.display())))?);
        }
    }
    if out.is_empty() {
        return Err(usage("give --expr or --file"));
    }
    Ok(out)
}

fn select<'a>(v: &'a Value, name: Option<&str>) -> CResult<Vec<(String, &'a Value)>> {
    match (v.get("models").and_then(Value::as_object), name) {
        (Some(ms), Some(n)) => ms.get(n).map(|m| vec![(n.to_string(), m)]).ok_or_else(|| usage(format!("no model `{n}`"))),
        (Some(ms), None) => Ok(ms.iter().map(|(k, m)| (k.clone(), m)).collect()),
        (None, _) => Ok(vec![(String::new(), v)]),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> CResult<u8> {
    let json_out = cli.format == Format::Json;
    match cli.verb {
        Verb::Parse { logic, input, primitive } => {
            let Some(logic) = logic else {
                let e = input.expr.as_deref().ok_or_else(|| usage("inner formulas need --expr"))?;
                let b = parse_bd(e).map_err(usage)?;
                if json_out {
                    print_json(&json!({"formula": b.to_string(), "vars": b.vars()}));
                } else {
                    println!("{b}");
                }
                return Ok(0);
            };
            for f in formulas(&input, logic)? {
                if json_out {
                    print_json(&json!({
                        "formula": f.to_string(),
                        "primitive": print_primitive(&f),
                        "length": fm_len(&f),
                        "inner_vars": f.inner_vars(),
                    }));
                } else if primitive {
                    println!("{}", print_primitive(&f));
                } else {
                    println!("{f}");
                }
            }
            Ok(0)
        }
        Verb::Eval { logic, model, name, expr, bd } => {
            let v = read_json(&model).map_err(usage)?;
            let picked = select(&v, name.as_deref())?;
            if picked.len() != 1 {
                return Err(usage("the file holds several models; pick one with --name"));
            }
            let mv = picked[0].1;
            if let Some(b) = bd {
                let f = parse_bd(&b).map_err(usage)?;
                let e = if mv.get("partitions").is_some() {
                    let k = twolayer::io::kripke_from_json(mv).map_err(usage)?;
                    (extents_modal(&k, &f).map_err(usage)?, k.base.worlds.clone())
                } else {
                    let m = bd_model_from_json(mv).map_err(usage)?;
                    (extents(&m, &f).map_err(usage)?, m.worlds.clone())
                };
                let (pos, neg) = (set_name(&e.1, &e.0.pos), set_name(&e.1, &e.0.neg));
                if json_out {
                    print_json(&json!({"formula": f.to_string(), "plus": pos, "minus": neg}));
                } else {
                    println!("|{f}|+ = {pos}\n|{f}|- = {neg}");
                }
                return Ok(0);
            }
            let m = tl_model_from_json(mv, logic).map_err(usage)?;
            let e = expr.ok_or_else(|| usage("give --expr or --bd"))?;
            let f = parse(&e, m.logic).map_err(usage)?;
            let value = m.eval(&f).map_err(usage)?;
            if json_out {
                print_json(&json!({"formula": f.to_string(), "value": value.to_string(), "designated": m.designates(&f).unwrap_or(false)}));
            } else {
                println!("{value}");
            }
            Ok(0)
        }
        Verb::Check(a) => decide_verb(a, false, json_out),
        Verb::Entails(a) => decide_verb(a, true, json_out),
        Verb::Translate { from, to, input, star } => {
            let t = translation(from, to, star).map_err(usage)?;
            for f in formulas(&input, from)? {
                let out = apply(t, &f).map_err(usage)?;
                if json_out {
                    let items: Vec<Value> = out.iter().map(|(l, g)| json!({"label": l, "formula": g.to_string()})).collect();
                    print_json(&json!({"translation": t.to_string(), "source": f.to_string(), "result": items}));
                } else {
                    for (label, g) in out {
                        if label.is_empty() {
                            println!("{g}");
                        } else {
                            println!("{label}: {g}");
                        }
                    }
                }
            }
            Ok(0)
        }
        Verb::Tableau { logic, expr, dump } => tableau_verb(logic, &expr, dump, json_out),
        Verb::Audit { kind, model, name, order, verbose } => audit_verb(kind, &model, name.as_deref(), order, verbose, json_out),
        Verb::Proof { file, calculus } => {
            let v = read_json(&file).map_err(usage)?;
            let p = proof_from_json(&v, calculus).map_err(usage)?;
            match check_proof(&p) {
                Ok(c) => {
                    if json_out {
                        print_json(&json!({"ok": true, "calculus": p.calculus.name(), "lines": p.lines.len(), "conclusion": c.to_string()}));
                    } else {
                        println!("OK ({} lines): {c}", p.lines.len());
                    }
                    Ok(0)
                }
                Err(e) => {
                    if json_out {
                        print_json(&json!({"ok": false, "line": e.line(), "error": e.to_string()}));
                    } else {
                        println!("REJECTED {e}");
                    }
                    Ok(1)
                }
            }
        }
        Verb::Fuzz { logic, iterations, seed, depth, corpus, replay, workers } => {
            let logics = if logic.is_empty() { LogicId::ALL.to_vec() } else { logic };
            let cfg = FuzzConfig { logics: logics.clone(), iterations, seed, depth, corpus, workers, ..FuzzConfig::default() };
            if let Some(s) = replay {
                let mut fails = Vec::new();
                for l in &logics {
                    let st = run_one(*l, s, &cfg, &mut fails);
                    println!("{} seed {s}: {}", l.name(), st.map_or("skipped", Status::label));
                }
                for f in &fails {
                    println!("{:?} {}: {} [{}]", f.kind, f.logic.name(), f.detail, f.formula);
                }
                return Ok(if fails.is_empty() { 0 } else { 1 });
            }
            let rep = fuzz(&cfg);
            if json_out {
                let fails: Vec<Value> = rep
                    .failures
                    .iter()
                    .map(|f| json!({"kind": format!("{:?}", f.kind), "logic": f.logic.name(), "seed": f.seed, "formula": f.formula, "detail": f.detail}))
                    .collect();
                print_json(&json!({"iterations": rep.iterations, "valid": rep.valid, "not_valid": rep.not_valid, "skipped": rep.skipped, "failures": fails}));
            } else {
                println!(
                    "{} iterations (first seed {}): {} valid, {} not valid, {} skipped, {} failures",
                    rep.iterations,
                    iteration_seed(seed, 0),
                    rep.valid,
                    rep.not_valid,
                    rep.skipped,
                    rep.failures.len()
                );
                for f in &rep.failures {
                    println!("  {:?} {} seed {}: {} [{}]", f.kind, f.logic.name(), f.seed, f.detail, f.formula);
                }
            }
            Ok(if rep.failures.is_empty() { 0 } else { 1 })
        }
    }
}

fn decide_verb(a: DecideArgs, need_premises: bool, json_out: bool) -> CResult<u8> {
    let logic = a.logic;
    let mut gamma = Vec::new();
    for p in &a.premise {
        gamma.push(parse(p, logic).map_err(usage)?);
    }
    if let Some(path) = &a.premises {
        gamma.extend(formulas(&Input { expr: None, file: Some(path.clone()) }, logic)?);
    }
    if need_premises && gamma.is_empty() {
        return Err(usage("entails needs --premise or --premises"));
    }
    let opts = Options {
        mode: match a.mode {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Random => Mode::Randomized,
        },
        seed: a.seed,
        budget: a.budget,
        prop_cap: a.prop_cap,
        lit_cap: a.lit_cap,
        support: a.support,
        dump_lp: a.dump_lp,
        ..Options::default()
    };
    let mut code = 0;
    for f in formulas(&a.input, logic)? {
        let v = match decide(logic, &f, &gamma, &opts) {
            Ok(v) => v,
            Err(e @ DecideError::Unsound(_)) => return Err(Fail::Internal(e.to_string())),
            Err(e) => return Err(usage(e)),
        };
        if json_out {
            let mut j = verdict_to_json(&v);
            j["formula"] = Value::String(f.to_string());
            if a.dump_lp {
                j["lp"] = json!(v.lp_dump);
            }
            print_json(&j);
        } else {
            println!("{v}");
            if a.dump_lp {
                for s in &v.lp_dump {
                    println!("{s}");
                }
            }
        }
        if let (Some(out), Some(cm)) = (&a.out, &v.countermodel) {
            if let twolayer::decide::Witness::Model(m) = &cm.witness {
                let text = serde_json::to_string_pretty(&tl_model_to_json(m)).expect("serializable");
                std::fs::write(out, text).map_err(|e| usage(format!("{}: {e}", out.display())))?;
            }
        }
        code = code.max(v.status.exit_code() as u8);
    }
    Ok(code)
}

fn tableau_verb(logic: LogicId, expr: &str, dump: bool, json_out: bool) -> CResult<u8> {
    if !logic.propositional() {
        return Err(usage("tableau works on luk-delta, luk2 and nluk formulas; use check for two-layered logics"));
    }
    let f = parse(expr, logic).map_err(usage)?;
    let calc = if logic.nelson() { TCalc::NLuk } else { TCalc::Luk2 };
    let mut arena = Arena::new();
    let n = arena.intern(&f).map_err(usage)?;
    let mut roots = vec![("e1 < 1", refutation_root(&arena, n))];
    if logic.paired_designation() {
        let mut b = Branch::new();
        let c = b.fresh("c");
        b.constrain(Constraint::gt(Lin::var(c), Lin::zero()));
        b.add_entry(&arena, n, 2, Dir::Ge, Lin::var(c));
        roots.push(("e2 > 0", b));
    }
    let mut total = 0;
    let mut open = 0;
    let mut shown = Vec::new();
    for (what, root) in roots {
        let branches = enumerate_branches(root, &arena, calc).map_err(usage)?;
        for b in &branches {
            let feasible = is_feasible(&branch_to_constraints(b, &arena).0);
            total += 1;
            open += feasible as usize;
            if dump {
                shown.push(json!({"root": what, "branch": b.id(), "feasible": feasible, "text": b.display(&arena).to_string()}));
                if !json_out {
                    print!("[{what}] {}", b.display(&arena));
                    println!("  => {}", if feasible { "open" } else { "closed" });
                }
            }
        }
    }
    let status = if open == 0 { Status::Valid } else { Status::NotValid };
    if json_out {
        print_json(&json!({"formula": f.to_string(), "branches": total, "open": open, "verdict": status.label(), "dump": shown}));
    } else {
        println!("{}: {total} complete branches, {open} open", status.label());
    }
    Ok(status.exit_code() as u8)
}

fn audit_verb(kind: AuditKind, path: &Path, name: Option<&str>, order: Option<usize>, verbose: bool, json_out: bool) -> CResult<u8> {
    let v = read_json(path).map_err(usage)?;
    let mut all_pass = true;
    let mut out = Vec::new();
    for (label, mv) in select(&v, name)? {
        let base = bd_model_from_json(mv).map_err(usage)?;
        let key = match kind {
            AuditKind::Bel if mv.get("bel").is_some() => "bel",
            AuditKind::Pl if mv.get("pl").is_some() => "pl",
            _ => "measure",
        };
        let mjson = mv.get(key).ok_or_else(|| usage(format!("model has no \"{key}\"")))?;
        let mu = measure_from_json(&base.worlds, mjson).map_err(usage)?;
        let k = order.unwrap_or(base.n());
        let mut reports: Vec<AuditReport> = match kind {
            AuditKind::Pm => audit_pm_probability(&base, &mu).map_err(usage)?,
            AuditKind::Four => audit_four_probability(&base, &mu).map_err(usage)?,
            AuditKind::Bel => vec![audit_belief(&base.worlds, &mu, k).map_err(usage)?],
            AuditKind::Pl => vec![audit_plausibility(&base.worlds, &mu, k).map_err(usage)?],
        };
        all_pass &= reports.iter().all(|r| r.pass);
        if verbose {
            if let Some(r) = ie_failure(&base.worlds, &mu) {
                reports.push(r);
            }
            if mu.is_probability() {
                let w = WSet::full(base.n());
                let total = mu.of(&w).map_err(usage)?;
                if total != one() {
                    reports.push(AuditReport { axiom: "norm".into(), pass: false, witness: Some(format!("μ(W)={total}")) });
                }
            }
        }
        if json_out {
            out.push(json!({"model": label, "reports": reports.iter().map(AuditReport::to_json).collect::<Vec<_>>()}));
        } else {
            if !label.is_empty() {
                println!("{label}:");
            }
            for r in &reports {
                println!("  {r}");
            }
        }
    }
    if json_out {
        print_json(&Value::Array(out));
    }
    Ok(if all_pass { 0 } else { 1 })
}

/// First pair of sets violating inclusion–exclusion, if any.
fn ie_failure(worlds: &[String], mu: &Measure) -> Option<AuditReport> {
    let n = worlds.len();
    if n > 10 {
        return None;
    }
    for a in 0..1u64 << n {
        for b in a..1u64 << n {
            let r = import_export(worlds, mu, &WSet::from_mask(n, a), &WSet::from_mask(n, b)).ok()?;
            if !r.pass {
                return Some(AuditReport { axiom: "IE (not required)".into(), ..r });
            }
        }
    }
    None
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(USAGE)
        }
        Err(Fail::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(INTERNAL)
        }
    }
}

