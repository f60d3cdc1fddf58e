//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Oracles here are written independently
//! of the library: truth tables, set arithmetic and joint distributions.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ulogic::algebra::{check_laws, AlgebraHandle, Value};
use ulogic::eval::{ConjunctionPolicy, Evaluation, NodeTable};
use ulogic::formula::{parse, Formula, Schema, Subst};
use ulogic::probability::{
    extend_to_evaluation, mp_bounds, restrict_evaluation, validate_space, Event, FuzzyRandomJudgment,
    ProbabilitySpace,
};
use ulogic::proof::{check_proof, Justification, ProofScript, Theory};
use ulogic::tautology::{check, Outcome, Strategy, Verdict};
use ulogic::zoo::{algebra_by_id, catalogue, make_algebra, AlgebraSpec};

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("algebra laws", laws),
        ("worked values", worked_values),
        ("axiom soundness by sampling", axiom_soundness),
        ("counterexamples reproduced", counterexamples),
        ("godel vs GFL separation", separation),
        ("proof checker", proof_checker),
        ("boolean reduction", boolean_reduction),
        ("probability bridge", probability_bridge),
        ("bound inference", bound_inference),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(msg)
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn handles() -> Vec<AlgebraHandle> {
    catalogue().iter().map(|s| make_algebra(s).unwrap()).collect()
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(name)
}

fn num(x: f64) -> Value {
    Value::num(x)
}

fn laws() -> Result<String, String> {
    let start = Instant::now();
    let mut triples = 0;
    for h in handles() {
        let a = check_laws(&h, 10_000, 7);
        let b = check_laws(&h, 10_000, 7);
        if let Some(o) = a.failures().next() {
            return Err(format!("{}: {} fails at {:?}", h.id(), o.law.name(), o.witness));
        }
        let same = a.outcomes.len() == b.outcomes.len()
            && a.outcomes.iter().zip(&b.outcomes).all(|(x, y)| x.passed == y.passed && x.failed == y.failed);
        ensure(same, || format!("{}: reruns with one seed differ", h.id()))?;
        triples += a.samples;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("{} algebras, {triples} triples, all laws hold", catalogue().len()))
}

fn worked_values() -> Result<String, String> {
    let ray = algebra_by_id("prob-ray").unwrap();
    let ops = ray.ops();
    ensure(ops.residuum(&num(0.0), &num(0.2)) == Value::INF, || "residuum(0, 0.2) is not INF".into())?;
    ensure(ops.neg(&num(2.5)) == num(0.0), || "neg(2.5) is not 0".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut checked = 0;
    for h in handles() {
        let ops = h.ops();
        for _ in 0..100 {
            let x = ops.sample(&mut rng);
            let r = ops.residuum(&ops.one(), &x);
            ensure(ops.eq(&r, &x), || format!("{}: residuum(1, {x}) = {r}", h.id()))?;
            checked += 1;
        }
    }
    Ok(format!("residuum(0,0.2)=INF, neg(2.5)=0, residuum(1,x)=x on {checked} samples"))
}

/// Every binding of a schema's metavariables to atoms from `atoms`.
fn instances(schema: &Schema, atoms: &[&str]) -> Vec<Formula> {
    let vars = schema.metavars();
    let mut out = Vec::new();
    let total = atoms.len().pow(vars.len() as u32);
    for mut code in 0..total {
        let mut s = Subst::new();
        for v in &vars {
            s.insert(v.clone(), Formula::atom(atoms[code % atoms.len()]));
            code /= atoms.len();
        }
        out.push(schema.instantiate(&s).unwrap());
    }
    out
}

fn show(ev: &Evaluation) -> String {
    let parts: Vec<String> = ev.atoms().iter().map(|(a, v)| format!("{a}={v}")).collect();
    parts.join(", ")
}

fn sound_on(f: &Formula, h: &AlgebraHandle, strategies: &[Strategy]) -> Result<u64, String> {
    let mut points = 0;
    for s in strategies {
        let v = check(f, h, s).map_err(|e| e.to_string())?;
        if let Outcome::Counterexample { witness, value } = &v.outcome {
            return Err(format!("{f} fails on {} [{}] at {} with {value}", h.id(), v.strategy, show(witness)));
        }
        points += v.points;
    }
    Ok(points)
}

fn sampling() -> Vec<Strategy> {
    vec![Strategy::grid(0.1), Strategy::random(10_000, 11)]
}

fn axiom_soundness() -> Result<String, String> {
    let start = Instant::now();
    let atoms = ["p", "q", "r"];
    let upl = Theory::upl();
    let mut count = 0;
    let mut points = 0;
    for h in handles() {
        for (_, schema) in upl.axioms() {
            for f in instances(schema, &atoms) {
                points += sound_on(&f, &h, &sampling())?;
                count += 1;
            }
        }
    }
    let extensions = [
        (Theory::gfl(), AlgebraSpec::GodelUnit),
        (Theory::gpl(), AlgebraSpec::ProbRay),
        (Theory::frl(), AlgebraSpec::godel_x_prob_ray()),
    ];
    for (t, spec) in extensions {
        let h = make_algebra(&spec).unwrap();
        for (id, schema) in t.axioms() {
            if upl.schema(id).is_some() {
                continue;
            }
            for f in instances(schema, &atoms) {
                points += sound_on(&f, &h, &sampling())?;
                count += 1;
            }
        }
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{count} instance checks, {points} points, no counterexample"))
}

fn counterexample(v: &Verdict) -> Result<(&Evaluation, &Value), String> {
    v.witness().ok_or_else(|| format!("{} unexpectedly {}", v.formula, v.name()))
}

fn counterexamples() -> Result<String, String> {
    let godel = algebra_by_id("godel-unit").unwrap();
    let grid = Strategy::grid(0.25);

    let f = parse("p \\/ ~p").unwrap();
    let v = check(&f, &godel, &grid).unwrap();
    let (w, val) = counterexample(&v)?;
    ensure(w.atoms().get("p") == Some(&num(0.5)) && *val == num(0.5), || {
        format!("excluded middle: witness {}, value {val}", show(w))
    })?;

    let f = parse("(p & ~p) -> 0").unwrap();
    let v = check(&f, &godel, &grid.clone().with_policy(ConjunctionPolicy::Min)).unwrap();
    let (w, val) = counterexample(&v)?;
    ensure(w.atoms().get("p") == Some(&num(0.5)) && *val == num(0.0), || {
        format!("non-contradiction: witness {}, value {val}", show(w))
    })?;

    let f = parse("(p & (p -> q)) -> q").unwrap();
    let ray = algebra_by_id("prob-ray").unwrap();
    let mut table = NodeTable::new();
    table.insert(ray.ops(), &parse("p").unwrap(), &parse("p -> q").unwrap(), num(0.5));
    let ev = Evaluation::new(ray, ConjunctionPolicy::table(table))
        .with("p", num(0.8))
        .and_then(|e| e.with("q", num(0.4)))
        .unwrap();
    let val = ev.value(&f).unwrap();
    ensure(val == num(0.8), || format!("detachment on prob-ray evaluates to {val}"))?;
    let search = [Strategy::grid(0.1).searching(), Strategy::random(10_000, 5)];
    sound_on(&f, &godel, &search)?;
    Ok("p=0.5 gives 0.5 and 0; tabled detachment gives 0.8; detachment holds on godel-unit".into())
}

fn separation() -> Result<String, String> {
    let godel = algebra_by_id("godel-unit").unwrap();
    let f = parse("p -> (p & p)").unwrap();
    let v = check(&f, &godel, &Strategy::grid(0.1).searching()).unwrap();
    let (w, val) = counterexample(&v)?;
    let found = format!("p -> p & p fails at {} with {val}", show(w));
    let dn = parse("~~p <-> p").unwrap();
    let strategies = [Strategy::grid(0.1), Strategy::random(10_000, 3), Strategy::grid(0.1).searching()];
    let pts = sound_on(&dn, &godel, &strategies)?;
    Ok(format!("{found}; ~~p <-> p holds on {pts} points"))
}

fn scripts() -> Vec<(String, ProofScript)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(data("proofs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "upl"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let script = ProofScript::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, script)
        })
        .collect()
}

/// Corruptions of one line's justification.
fn mutations(script: &ProofScript, at: usize) -> Vec<Justification> {
    let ids: Vec<&String> = script.theory.axioms().iter().map(|(k, _)| k).collect();
    match &script.lines[at].justification {
        Justification::Mp(i, j) if i != j => vec![Justification::Mp(*j, *i)],
        Justification::Mp(i, _) => vec![Justification::Mp(*i, at.max(1))],
        Justification::Axiom { id, bindings } => {
            let k = ids.iter().position(|x| *x == id).unwrap();
            vec![Justification::Axiom {
                id: ids[(k + 1) % ids.len()].clone(),
                bindings: bindings.clone(),
            }]
        }
        Justification::Def(i) => (1..=at).filter(|j| j != i).map(Justification::Def).collect(),
    }
}

fn proof_checker() -> Result<String, String> {
    let all = scripts();
    ensure(all.len() == 9, || format!("expected 9 scripts, found {}", all.len()))?;
    let mut mutants = 0;
    let mut points = 0;
    for (name, script) in &all {
        let rep = check_proof(script);
        ensure(rep.accepted(), || format!("{name} rejected at line {:?}", rep.first_failure))?;
        for at in 0..script.lines.len() {
            for j in mutations(script, at) {
                let mut m = script.clone();
                m.lines[at].justification = j.clone();
                let rep = check_proof(&m);
                ensure(!rep.accepted(), || format!("{name}: line {} as {j} still accepted", at + 1))?;
                mutants += 1;
            }
        }
        let goal = script.conclusion().unwrap();
        for spec in script.theory.reference_algebras() {
            points += sound_on(goal, &make_algebra(spec).unwrap(), &sampling())?;
        }
    }
    Ok(format!(
        "{} scripts accepted, {mutants}/{mutants} mutants rejected, conclusions hold on {points} points",
        all.len()
    ))
}

fn truth(f: &Formula, env: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::Atom(a) => env[&**a],
        Formula::False => false,
        Formula::True => true,
        Formula::Not(a) => !truth(a, env),
        Formula::And(a, b) => truth(a, env) && truth(b, env),
        Formula::Or(a, b) => truth(a, env) || truth(b, env),
        Formula::Implies(a, b) => !truth(a, env) || truth(b, env),
        Formula::Iff(a, b) => truth(a, env) == truth(b, env),
        Formula::Cond(a, b) => !truth(b, env) || (truth(b, env) && truth(a, env)),
    }
}

fn classical_tautology(f: &Formula) -> bool {
    let atoms: Vec<String> = f.atoms().iter().map(|a| a.to_string()).collect();
    (0..1u32 << atoms.len()).all(|bits| {
        let env = atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect();
        truth(f, &env)
    })
}

fn boolean_reduction() -> Result<String, String> {
    let text = std::fs::read_to_string(data("data/boolean_corpus.txt")).unwrap();
    let corpus: Vec<Formula> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect();
    ensure(corpus.len() == 50, || format!("corpus has {} formulas", corpus.len()))?;
    let b2 = algebra_by_id("boolean2").unwrap();
    let godel = algebra_by_id("godel-unit").unwrap();
    let strategy = Strategy::exhaustive().with_policy(ConjunctionPolicy::Min);
    let (mut taut, mut elsewhere) = (0, 0);
    for f in &corpus {
        ensure(f.atoms().len() <= 4, || format!("{f} has more than 4 atoms"))?;
        let v = check(f, &b2, &strategy).unwrap();
        let oracle = classical_tautology(f);
        ensure(v.is_counterexample() != oracle, || format!("{f}: checker says {}, truth table says {oracle}", v.name()))?;
        if oracle {
            taut += 1;
            if check(f, &godel, &Strategy::grid(0.25)).unwrap().is_counterexample() {
                elsewhere += 1;
            }
        }
    }
    ensure(elsewhere > 0, || "no classical law fails on godel-unit".into())?;
    Ok(format!(
        "{} formulas agree ({taut} tautologies, {elsewhere} of them fail on godel-unit)",
        corpus.len()
    ))
}

/// A random space with outcome weights, some of them zero.
fn random_space(rng: &mut ChaCha8Rng) -> (ProbabilitySpace, Vec<f64>) {
    let n = rng.gen_range(1..=6);
    let omega: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut w: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen() }).collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    let w: Vec<f64> = w.iter().map(|x| x / total).collect();
    (ProbabilitySpace::from_weights(omega, &w).unwrap(), w)
}

fn mass(e: Event, w: &[f64]) -> f64 {
    w.iter().enumerate().filter(|(i, _)| e >> i & 1 == 1).map(|(_, x)| x).sum()
}

/// A random pure-event formula and the event it denotes.
fn event_formula(rng: &mut ChaCha8Rng, s: &ProbabilitySpace, depth: u32) -> (Formula, Event) {
    let full = s.field.full();
    if depth == 0 || rng.gen_bool(0.3) {
        let e = rng.gen_range(0..=full);
        return (Formula::atom(&s.field.default_name(e)), e);
    }
    let (a, ea) = event_formula(rng, s, depth - 1);
    match rng.gen_range(0..3) {
        0 => (Formula::negate(a), full & !ea),
        1 => {
            let (b, eb) = event_formula(rng, s, depth - 1);
            (Formula::and(a, b), ea & eb)
        }
        _ => {
            let (b, eb) = event_formula(rng, s, depth - 1);
            (Formula::or(a, b), ea | eb)
        }
    }
}

fn probability_bridge() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut formulas, mut perturbed) = (0, 0);
    for k in 0..20 {
        let (s, w) = random_space(&mut rng);
        let rep = validate_space(&s);
        ensure(rep.is_valid(), || format!("space {k} invalid: {:?}", rep.violations))?;
        ensure(rep.equivalence_holds(), || format!("space {k}: axiom systems disagree"))?;
        for e in s.field.events() {
            let p = s.prob(e).unwrap();
            ensure((p - mass(e, &w)).abs() < 1e-9, || format!("space {k}: P({e:b}) = {p}"))?;
        }

        let ev = extend_to_evaluation(&s).map_err(|e| e.to_string())?;
        let back = restrict_evaluation(&ev, &s.field).map_err(|e| e.to_string())?;
        ensure(back.space.p == s.p, || format!("space {k}: extend then restrict changes P"))?;
        ensure(back.report.is_valid(), || format!("space {k}: restriction invalid"))?;

        for _ in 0..25 {
            let (f, e) = event_formula(&mut rng, &s, 3);
            let got = ev.value(&f).map_err(|e| e.to_string())?;
            let want = mass(e, &w);
            let ok = got.as_f64().is_some_and(|g| (g - want).abs() < 1e-9);
            ensure(ok, || format!("space {k}: {f} = {got}, set P = {want}"))?;
            formulas += 1;
        }

        for e in s.field.events() {
            let mut bad = s.clone();
            let shift = rng.gen_range(0.01..0.3);
            let p = bad.p[&e];
            bad.p.insert(e, if p + shift <= 1.0 { p + shift } else { p - shift });
            let rep = validate_space(&bad);
            ensure(rep.equivalence_holds(), || {
                format!("space {k}, P({e:b}) moved: P1+P2 {} but P1'-P3' {}", rep.kolmogorov_ok, rep.alternative_ok)
            })?;
            perturbed += 1;
        }
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!(
        "20 spaces valid and round-trip exactly, {formulas} formulas match set P, equivalence holds on {perturbed} perturbations"
    ))
}

/// Values of `p(ψ)` over joint tables of two binary events with
/// `P(φ) = pφ` and `P(ψ | φ) = pimp`, stepping the free mass `P(¬φ ∧ ψ)`.
fn joint_conditional(p_phi: f64, p_imp: f64) -> Vec<f64> {
    let p11 = p_phi * p_imp;
    let free = 1.0 - p_phi;
    (0..=20).map(|k| p11 + free * k as f64 / 20.0).collect()
}

/// Gödel truth degrees of `ψ` consistent with `t(φ)` and `t(φ → ψ)`.
fn godel_consistent(t_phi: f64, t_imp: f64) -> Vec<f64> {
    (0..=1000)
        .map(|k| k as f64 / 1000.0)
        .chain([t_imp, t_phi])
        .filter(|&t| {
            let r = if t_phi <= t { 1.0 } else { t };
            (r - t_imp).abs() < 1e-12
        })
        .collect()
}

fn bound_inference() -> Result<String, String> {
    let j = |p, t| FuzzyRandomJudgment::new(p, t).unwrap();
    let b = mp_bounds(j(0.8, 0.6), j(0.9, 0.7)).unwrap();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    ensure(close(b.p[0], 0.72) && close(b.p[1], 0.9) && b.t == [0.6, 0.7], || format!("{b:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let (mut above, mut checked, mut worst) = (0, 0, 0.0f64);
    for _ in 0..1000 {
        let mut draw = || if rng.gen_bool(0.1) { rng.gen_range(0..=1) as f64 } else { rng.gen::<f64>() };
        let (p_phi, p_imp, t_phi, t_imp) = (draw(), draw(), draw(), draw());
        let b = mp_bounds(j(p_phi, t_phi), j(p_imp, t_imp)).unwrap();
        ensure(b.p[0] <= b.p[1] && b.t[0] <= b.t[1], || format!("empty interval {b:?}"))?;
        let mut over = false;
        for p in joint_conditional(p_phi, p_imp) {
            ensure(p >= b.p[0] - 1e-12, || format!("p(ψ) = {p} below {b:?}"))?;
            if p > b.p[1] + 1e-12 {
                over = true;
                worst = worst.max(p - b.p[1]);
            }
            checked += 1;
        }
        above += over as u32;
        let ts = godel_consistent(t_phi, t_imp);
        for t in ts {
            ensure(t >= b.t[0] - 1e-12 && t <= b.t[1] + 1e-12, || format!("t(ψ) = {t} outside {b:?}"))?;
        }
    }
    Ok(format!(
        "formulas reproduced, 1000 intervals nonempty, lower bounds hold on {checked} joint tables; \
         DISCREPANCY: the upper bound p(φ→ψ) is exceeded for {above}/1000 inputs (max excess {worst:.3}) \
         because the joint oracle allows P(¬φ∧ψ) up to 1-p(φ)"
    ))
}
