//! The `ulogic` command line.
//!
//! Exit codes: 0 when the check succeeds (holds, valid, accepted), 1 when
//! it finds a counterexample or the input is invalid or rejected, 2 for
//! usage and input errors. `ULOGIC_SEED` sets the default seed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{check_laws, fmt_num};
use crate::eval::{validate, AssignmentDoc, ConjunctionPolicy, ViolationKind};
use crate::formula::{parse, Formula};
use crate::probability::{
    event_set, extend_to_evaluation, mp_bounds, restrict_evaluation, validate_space, FuzzyRandomJudgment,
    ProbError, ProbabilitySpace,
};
use crate::proof::{check_proof, ProofScript};
use crate::tautology::{check, AndMode, Outcome, Sampling, Strategy, SEARCH_TRIALS};
use crate::zoo::{algebra_by_id, catalogue, make_algebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "ulogic", version, about = "Uncertain propositional logic: algebras, evaluations, tautologies, proofs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the algebra laws on sampled triples (all triples if finite).
    Laws {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate a formula under an assignment document.
    Eval {
        /// Defaults to the algebra named in the assignment.
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        assign: PathBuf,
    },
    /// Test whether 1 ≤ e(φ) over a sampling strategy.
    Taut {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        formula: String,
        /// exhaustive, grid:STEP or random:N:SEED
        #[arg(long)]
        strategy: String,
        /// Quantify over lawful `&` values instead of a fixed policy.
        #[arg(long)]
        search_and: bool,
        /// min, star or product-then-min
        #[arg(long, default_value = "min")]
        policy: String,
    },
    /// Check a proof script.
    ProofCheck {
        #[arg(long)]
        script: PathBuf,
        /// Also sample the conclusion on the theory's reference algebras.
        #[arg(long)]
        soundness: bool,
    },
    /// Validate a probability space document.
    ProbValidate {
        #[arg(long)]
        space: PathBuf,
    },
    /// Extend a space to a prob-ray evaluation, optionally evaluating a formula.
    ProbExtend {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Restrict an evaluation to the space's events and validate the result.
    ProbRestrict {
        #[arg(long)]
        space: PathBuf,
        /// Evaluation to restrict; defaults to the space's own extension.
        #[arg(long)]
        assign: Option<PathBuf>,
    },
    /// Modus ponens bounds for truth/belief judgments.
    Bounds {
        #[arg(long)]
        p_phi: f64,
        #[arg(long)]
        p_imp: f64,
        #[arg(long)]
        t_phi: f64,
        #[arg(long)]
        t_imp: f64,
    },
    /// List the built-in algebras.
    Catalogue,
}

struct Reply {
    code: i32,
    text: String,
    json: serde_json::Value,
}

fn reply(code: i32, text: String, json: serde_json::Value) -> Result<Reply, String> {
    Ok(Reply { code, text, json })
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(&cli.command) {
        Ok(r) => {
            let _ = match cli.format {
                Format::Text => write!(out, "{}", r.text),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("json")),
            };
            r.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn default_seed() -> Result<u64, String> {
    match std::env::var("ULOGIC_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| format!("ULOGIC_SEED=`{s}` is not an unsigned integer")),
        Err(_) => Ok(0),
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| format!("formula `{text}`: {e}"))
}

fn load_space(path: &Path) -> Result<ProbabilitySpace, String> {
    ProbabilitySpace::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn dispatch(cmd: &Command) -> Result<Reply, String> {
    match cmd {
        Command::Laws { algebra, samples, seed } => laws(algebra, *samples, *seed),
        Command::Eval { algebra, formula, assign } => eval(algebra.as_deref(), formula, assign),
        Command::Taut {
            algebra,
            formula,
            strategy,
            search_and,
            policy,
        } => taut(algebra, formula, strategy, *search_and, policy),
        Command::ProofCheck { script, soundness } => proof_check(script, *soundness),
        Command::ProbValidate { space } => prob_validate(space),
        Command::ProbExtend { space, formula } => prob_extend(space, formula.as_deref()),
        Command::ProbRestrict { space, assign } => prob_restrict(space, assign.as_deref()),
        Command::Bounds {
            p_phi,
            p_imp,
            t_phi,
            t_imp,
        } => bounds(*p_phi, *p_imp, *t_phi, *t_imp),
        Command::Catalogue => cat(),
    }
}

fn laws(algebra: &str, samples: u64, seed: Option<u64>) -> Result<Reply, String> {
    let h = algebra_by_id(algebra).map_err(|e| e.to_string())?;
    let seed = match seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let rep = check_laws(&h, samples, seed);
    let mut text = format!(
        "{}: {} triples{}, seed {}\n",
        rep.algebra,
        rep.samples,
        if rep.exhaustive { " (exhaustive)" } else { "" },
        rep.seed
    );
    for o in &rep.outcomes {
        let _ = write!(
            text,
            "{} {:<14} {:<10} {} checked",
            if o.failed == 0 { "PASS" } else { "FAIL" },
            o.law.name(),
            o.group,
            o.passed + o.failed
        );
        if let Some(w) = &o.witness {
            let w: Vec<String> = w.iter().map(|v| h.display(v)).collect();
            let _ = write!(text, ", first failure at ({})", w.join(", "));
        }
        text.push('\n');
    }
    let code = if rep.all_pass() { 0 } else { 1 };
    reply(code, text, serde_json::to_value(&rep).expect("json"))
}

fn eval(algebra: Option<&str>, text: &str, assign: &Path) -> Result<Reply, String> {
    let f = formula(text)?;
    let doc = AssignmentDoc::from_json(&read(assign)?).map_err(|e| format!("{}: {e}", assign.display()))?;
    if let Some(a) = algebra {
        let want = algebra_by_id(a).map_err(|e| e.to_string())?;
        let have = algebra_by_id(&doc.algebra).map_err(|e| e.to_string())?;
        if want.id() != have.id() {
            return Err(format!("--algebra {} but the assignment is over {}", want.id(), have.id()));
        }
    }
    let ev = doc.to_evaluation_lenient().map_err(|e| e.to_string())?;
    let rep = validate(&ev, &f);
    if let Some(v) = rep.violations.iter().find(|v| v.kind == ViolationKind::Unassigned) {
        return Err(format!("atom `{}` is not assigned", v.node));
    }
    if !rep.is_valid() {
        let mut text = format!("INVALID evaluation for {f}\n");
        for v in &rep.violations {
            let _ = writeln!(text, "  {} at {}: {}", v.kind, v.node, v.detail);
        }
        return reply(1, text, json!({ "formula": f.to_string(), "valid": false, "violations": rep.violations }));
    }
    let value = ev.value(&f).map_err(|e| e.to_string())?;
    let ops = ev.algebra().ops();
    let holds = ops.leq(&ops.one(), &value);
    let text = format!("{} = {}\n", f, ops.display(&value));
    reply(
        0,
        text,
        json!({
            "formula": f.to_string(),
            "algebra": ev.algebra().id(),
            "valid": true,
            "value": ops.value_to_json(&value),
            "at_least_one": holds,
        }),
    )
}

fn taut(algebra: &str, text: &str, strategy: &str, search_and: bool, policy: &str) -> Result<Reply, String> {
    let h = algebra_by_id(algebra).map_err(|e| e.to_string())?;
    let f = formula(text)?;
    let mut s = Strategy::parse(strategy).map_err(|e| e.to_string())?;
    let p = ConjunctionPolicy::from_id(policy)
        .ok_or_else(|| format!("unknown policy `{policy}` (expected min, star or product-then-min)"))?;
    s = s.with_policy(p);
    if search_and {
        let seed = match s.sampling {
            Sampling::Random { seed, .. } => seed,
            _ => default_seed()?,
        };
        s.and_mode = AndMode::Search {
            trials: SEARCH_TRIALS,
            seed,
        };
    }
    let v = check(&f, &h, &s).map_err(|e| e.to_string())?;
    let mut text = format!("{} {} on {} [{}]\n", v.name(), v.formula, v.algebra, v.strategy);
    if let Outcome::Counterexample { witness, value } = &v.outcome {
        let ops = h.ops();
        for (a, x) in witness.atoms() {
            let _ = writeln!(text, "  {a} = {}", ops.display(x));
        }
        if let ConjunctionPolicy::Table { table, .. } = witness.policy() {
            for ((l, r), x) in table.entries() {
                let _ = writeln!(text, "  e({}) = {}", Formula::and(l.clone(), r.clone()), ops.display(x));
            }
        }
        let _ = writeln!(text, "  value = {}", ops.display(value));
    }
    let _ = writeln!(text, "  points = {}, evaluations = {}", v.points, v.evaluations);
    let code = if v.is_counterexample() { 1 } else { 0 };
    reply(code, text, v.to_json())
}

fn proof_check(path: &Path, soundness: bool) -> Result<Reply, String> {
    let script = ProofScript::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let rep = check_proof(&script);
    let mut text = format!("theory {}\n", rep.theory);
    for l in &rep.lines {
        let _ = write!(
            text,
            "{:>4} {} {} ;; {}",
            l.number,
            if l.ok { "ok  " } else { "FAIL" },
            l.formula,
            l.justification
        );
        if let Some(r) = &l.reason {
            let _ = write!(text, "  <- {r}");
        }
        text.push('\n');
    }
    let mut code = if rep.accepted() { 0 } else { 1 };
    match rep.first_failure {
        Some(n) => {
            let _ = writeln!(text, "REJECTED at line {n}");
        }
        None if rep.lines.is_empty() => text.push_str("REJECTED: empty proof\n"),
        None => {
            let _ = writeln!(text, "ACCEPTED: {}", rep.conclusion.clone().unwrap_or_default());
        }
    }
    let mut sampled = Vec::new();
    if soundness && rep.accepted() {
        let goal = script.conclusion().expect("accepted proofs are nonempty");
        let seed = default_seed()?;
        for spec in script.theory.reference_algebras() {
            let h = make_algebra(spec).map_err(|e| e.to_string())?;
            for s in [Strategy::grid(0.1), Strategy::random(10_000, seed)] {
                let v = check(goal, &h, &s).map_err(|e| e.to_string())?;
                let _ = writeln!(text, "  {} on {} [{}]", v.name(), v.algebra, v.strategy);
                if v.is_counterexample() {
                    code = 1;
                }
                sampled.push(v.to_json());
            }
        }
    }
    let mut doc = serde_json::to_value(&rep).expect("json");
    doc["accepted"] = json!(rep.accepted());
    if soundness {
        doc["soundness"] = json!(sampled);
    }
    reply(code, text, doc)
}

fn prob_validate(path: &Path) -> Result<Reply, String> {
    let s = load_space(path)?;
    let rep = validate_space(&s);
    let ok = |b: bool| if b { "ok" } else { "fails" };
    let mut text = format!(
        "{}\n  field and P: {}\n  P1+P2: {}\n  P1'-P3': {}\n",
        if rep.is_valid() { "VALID" } else { "INVALID" },
        ok(rep.structure_ok),
        ok(rep.kolmogorov_ok),
        ok(rep.alternative_ok)
    );
    for v in &rep.violations {
        let _ = writeln!(text, "  {v}");
    }
    let code = if rep.is_valid() { 0 } else { 1 };
    let mut doc = serde_json::to_value(&rep).expect("json");
    doc["valid"] = json!(rep.is_valid());
    reply(code, text, doc)
}

fn prob_extend(path: &Path, text: Option<&str>) -> Result<Reply, String> {
    let s = load_space(path)?;
    let ev = match extend_to_evaluation(&s) {
        Ok(ev) => ev,
        Err(e @ ProbError::Invalid(_)) => return reply(1, format!("INVALID space: {e}\n"), json!({ "valid": false, "error": e.to_string() })),
        Err(e) => return Err(e.to_string()),
    };
    let ops = ev.algebra().ops();
    let Some(text) = text else {
        let mut out = String::from("prob-ray evaluation, & on events = P(intersection)\n");
        for (a, v) in ev.atoms() {
            let _ = writeln!(out, "  {a} = {}", ops.display(v));
        }
        let atoms: serde_json::Map<String, serde_json::Value> =
            ev.atoms().iter().map(|(a, v)| (a.clone(), ops.value_to_json(v))).collect();
        return reply(0, out, json!({ "algebra": "prob-ray", "atoms": atoms, "policy": "intersection" }));
    };
    let f = formula(text)?;
    let value = ev.value(&f).map_err(|e| e.to_string())?;
    let mut out = format!("{f} = {}\n", ops.display(&value));
    let mut doc = json!({ "formula": f.to_string(), "value": ops.value_to_json(&value) });
    if let Some(e) = event_set(&f.desugar(), &s.field) {
        let p = s.prob(e).unwrap_or(f64::NAN);
        let _ = writeln!(out, "  P({{{}}}) = {}", s.field.key(e), fmt_num(p));
        doc["event"] = json!(s.field.key(e));
        doc["probability"] = json!(p);
    }
    let m = ev.materialize(&f).map_err(|e| e.to_string())?;
    doc["assignment"] = serde_json::to_value(AssignmentDoc::from_evaluation(&m).map_err(|e| e.to_string())?)
        .expect("json");
    reply(0, out, doc)
}

fn prob_restrict(path: &Path, assign: Option<&Path>) -> Result<Reply, String> {
    let s = load_space(path)?;
    let ev = match assign {
        Some(a) => AssignmentDoc::from_json(&read(a)?)
            .and_then(|d| d.to_evaluation())
            .map_err(|e| format!("{}: {e}", a.display()))?,
        None => match extend_to_evaluation(&s) {
            Ok(ev) => ev,
            Err(e @ ProbError::Invalid(_)) => {
                return reply(1, format!("INVALID space: {e}\n"), json!({ "valid": false, "error": e.to_string() }))
            }
            Err(e) => return Err(e.to_string()),
        },
    };
    let r = match restrict_evaluation(&ev, &s.field) {
        Ok(r) => r,
        Err(e @ ProbError::AboveOne { .. }) => {
            return reply(1, format!("REJECTED: {e}\n"), json!({ "valid": false, "error": e.to_string() }))
        }
        Err(e) => return Err(e.to_string()),
    };
    let round_trip = assign.is_none().then(|| r.space.p == s.p);
    let valid = r.report.is_valid() && round_trip != Some(false);
    let mut text = format!("{}\n", if valid { "VALID restriction" } else { "INVALID restriction" });
    for (e, p) in &r.space.p {
        let _ = writeln!(text, "  P({{{}}}) = {}", r.space.field.key(*e), fmt_num(*p));
    }
    for v in &r.report.violations {
        let _ = writeln!(text, "  {v}");
    }
    if let Some(rt) = round_trip {
        let _ = writeln!(text, "  round trip: {}", if rt { "exact" } else { "differs" });
    }
    let doc = json!({
        "valid": valid,
        "space": r.space.to_doc(),
        "report": r.report,
        "round_trip_exact": round_trip,
    });
    reply(if valid { 0 } else { 1 }, text, doc)
}

fn bounds(p_phi: f64, p_imp: f64, t_phi: f64, t_imp: f64) -> Result<Reply, String> {
    let phi = FuzzyRandomJudgment::new(p_phi, t_phi).map_err(|e| e.to_string())?;
    let imp = FuzzyRandomJudgment::new(p_imp, t_imp).map_err(|e| e.to_string())?;
    let b = mp_bounds(phi, imp).map_err(|e| e.to_string())?;
    let r = |x: f64| fmt_num(x).parse::<f64>().expect("numeric");
    let text = format!(
        "p:[{},{}] t:[{},{}]\n",
        fmt_num(b.p[0]),
        fmt_num(b.p[1]),
        fmt_num(b.t[0]),
        fmt_num(b.t[1])
    );
    reply(0, text, json!({ "p": [r(b.p[0]), r(b.p[1])], "t": [r(b.t[0]), r(b.t[1])] }))
}

fn cat() -> Result<Reply, String> {
    let mut text = String::new();
    let mut docs = Vec::new();
    for spec in catalogue() {
        let h = make_algebra(&spec).map_err(|e| e.to_string())?;
        let finite = h.ops().enumerate().map(|v| v.len());
        match finite {
            Some(n) => {
                let _ = writeln!(text, "{} ({n} elements)", spec.id());
            }
            None => {
                let _ = writeln!(text, "{}", spec.id());
            }
        }
        docs.push(json!({ "id": spec.id(), "elements": finite, "spec": spec }));
    }
    reply(0, text, json!(docs))
}
