//! Testing `1 ≤ e(φ)` over many evaluations, with counterexample witnesses.
//!
//! Points are atom assignments, enumerated in a fixed order (first atom
//! most significant). At each point the `&` values come either from a fixed
//! [`ConjunctionPolicy`] or, in search mode, from several lawful choices per
//! node. The first failing point in enumeration order is reported, however
//! the work is split across threads.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraHandle, Value};
use crate::eval::{
    forced_and, AndChooser, AssignmentDoc, Compiled, ConjunctionPolicy, EvalError, Evaluation,
    NodeTable, PairKey, PolicyChooser, Recording, ViolationKind,
};
use crate::formula::Formula;

/// `&` values per search point on continuous carriers.
pub const SEARCH_TRIALS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum Sampling {
    /// Every assignment over a finite carrier.
    Exhaustive,
    /// The algebra's unit grid at this step, anchors first.
    Grid { step: f64 },
    Random { count: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub enum AndMode {
    Fixed(ConjunctionPolicy),
    /// Quantify over lawful `&` values. On finite carriers under
    /// [`Sampling::Exhaustive`] every lawful table is visited; otherwise
    /// `trials` choices are drawn per point: the meet, zero, then uniform
    /// values below the meet. Values forced by the unit law are always used.
    Search { trials: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct Strategy {
    pub sampling: Sampling,
    pub and_mode: AndMode,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TautError {
    #[error("strategy `{strategy}` cannot run on `{algebra}`: {reason}")]
    Mismatch {
        strategy: String,
        algebra: String,
        reason: String,
    },
    #[error("malformed strategy `{0}` (expected exhaustive, grid:STEP or random:N:SEED)")]
    Malformed(String),
    #[error("evaluation failed at {point}: {err}")]
    Eval { point: String, err: EvalError },
}

impl Strategy {
    pub fn exhaustive() -> Strategy {
        Strategy {
            sampling: Sampling::Exhaustive,
            and_mode: AndMode::Fixed(ConjunctionPolicy::Min),
        }
    }

    pub fn grid(step: f64) -> Strategy {
        Strategy {
            sampling: Sampling::Grid { step },
            and_mode: AndMode::Fixed(ConjunctionPolicy::Min),
        }
    }

    pub fn random(count: u64, seed: u64) -> Strategy {
        Strategy {
            sampling: Sampling::Random { count, seed },
            and_mode: AndMode::Fixed(ConjunctionPolicy::Min),
        }
    }

    pub fn with_policy(mut self, policy: ConjunctionPolicy) -> Strategy {
        self.and_mode = AndMode::Fixed(policy);
        self
    }

    /// Switches to search mode, seeded from the random seed if there is one.
    pub fn searching(mut self) -> Strategy {
        let seed = match self.sampling {
            Sampling::Random { seed, .. } => seed,
            _ => 0,
        };
        self.and_mode = AndMode::Search {
            trials: SEARCH_TRIALS,
            seed,
        };
        self
    }

    /// Parses `exhaustive`, `grid:STEP` or `random:N:SEED`.
    pub fn parse(text: &str) -> Result<Strategy, TautError> {
        let bad = || TautError::Malformed(text.to_string());
        let parts: Vec<&str> = text.trim().split(':').collect();
        match parts.as_slice() {
            ["exhaustive"] => Ok(Strategy::exhaustive()),
            ["grid", step] => {
                let step: f64 = step.parse().map_err(|_| bad())?;
                if !(step > 0.0 && step <= 1.0) {
                    return Err(bad());
                }
                Ok(Strategy::grid(step))
            }
            ["random", n, seed] => Ok(Strategy::random(
                n.parse().map_err(|_| bad())?,
                seed.parse().map_err(|_| bad())?,
            )),
            _ => Err(bad()),
        }
    }

    pub fn is_search(&self) -> bool {
        matches!(self.and_mode, AndMode::Search { .. })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.sampling {
            Sampling::Exhaustive => f.write_str("exhaustive")?,
            Sampling::Grid { step } => write!(f, "grid:{step}")?,
            Sampling::Random { count, seed } => write!(f, "random:{count}:{seed}")?,
        }
        match &self.and_mode {
            AndMode::Fixed(p) => write!(f, " ({})", p.id()),
            AndMode::Search { trials, .. } => write!(f, " (search-and, {trials} trials)"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    HoldsOnSampled,
    ProvenExhaustive,
    Counterexample { witness: Evaluation, value: Value },
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub formula: Formula,
    pub algebra: String,
    pub strategy: String,
    pub outcome: Outcome,
    /// Assignments visited, up to and including a witness.
    pub points: u64,
    /// Formula evaluations performed on those points.
    pub evaluations: u64,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self.outcome {
            Outcome::HoldsOnSampled => "HOLDS_ON_SAMPLED",
            Outcome::ProvenExhaustive => "PROVEN_EXHAUSTIVE",
            Outcome::Counterexample { .. } => "COUNTEREXAMPLE",
        }
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self.outcome, Outcome::Counterexample { .. })
    }

    pub fn witness(&self) -> Option<(&Evaluation, &Value)> {
        match &self.outcome {
            Outcome::Counterexample { witness, value } => Some((witness, value)),
            _ => None,
        }
    }

    /// Report document. The `witness` member is a valid assignment document.
    pub fn to_json(&self) -> serde_json::Value {
        let mut doc = json!({
            "formula": self.formula.to_string(),
            "algebra": self.algebra,
            "strategy": self.strategy,
            "verdict": self.name(),
            "points": self.points,
            "evaluations": self.evaluations,
        });
        if let Some((w, v)) = self.witness() {
            let ops = w.algebra().ops();
            doc["value"] = ops.value_to_json(v);
            doc["witness"] = serde_json::to_value(
                AssignmentDoc::from_evaluation(w).expect("witnesses use table policies"),
            )
            .expect("document serializes");
        }
        doc
    }
}

struct Found {
    atoms: Vec<Value>,
    table: BTreeMap<usize, Value>,
    value: Value,
}

/// Per-point result: evaluations done and an optional witness.
type PointResult = Result<(u64, Option<Found>), EvalError>;

struct SearchChooser<'a> {
    trial: usize,
    one: Value,
    rng: &'a mut ChaCha8Rng,
    chosen: Vec<Option<Value>>,
}

impl AndChooser for SearchChooser<'_> {
    fn choose(
        &mut self,
        alg: &dyn Algebra,
        pairs: &[PairKey],
        pair: usize,
        x: &Value,
        y: &Value,
    ) -> Result<Value, EvalError> {
        if let Some(v) = &self.chosen[pair] {
            return Ok(v.clone());
        }
        let v = match forced_and(alg, &self.one, x, y) {
            Some(v) => v,
            None => {
                let m = meet_or_err(alg, pairs, pair, x, y)?;
                match self.trial {
                    0 => m,
                    1 => alg.zero(),
                    _ => alg.sample_below(&m, self.rng),
                }
            }
        };
        self.chosen[pair] = Some(v.clone());
        Ok(v)
    }
}

fn meet_or_err(
    alg: &dyn Algebra,
    pairs: &[PairKey],
    pair: usize,
    x: &Value,
    y: &Value,
) -> Result<Value, EvalError> {
    alg.meet(x, y).ok_or_else(|| EvalError::Policy {
        node: Formula::and(pairs[pair].0.clone(), pairs[pair].1.clone()).to_string(),
        kind: ViolationKind::NoMeet,
        detail: String::new(),
    })
}

/// Walks every lawful `&` table on a finite carrier, depth first.
struct Odometer {
    one: Value,
    carrier: Vec<Value>,
    choices: Vec<usize>,
    options: Vec<usize>,
    depth: usize,
    chosen: Vec<Option<Value>>,
}

impl Odometer {
    fn reset(&mut self) {
        self.depth = 0;
        self.chosen.iter_mut().for_each(|c| *c = None);
    }

    /// Moves to the next table; `false` once all are visited.
    fn advance(&mut self) -> bool {
        self.choices.truncate(self.depth);
        self.options.truncate(self.depth);
        while let Some(last) = self.choices.last_mut() {
            *last += 1;
            if *last < *self.options.last().expect("parallel stacks") {
                return true;
            }
            self.choices.pop();
            self.options.pop();
        }
        false
    }
}

impl AndChooser for Odometer {
    fn choose(
        &mut self,
        alg: &dyn Algebra,
        _pairs: &[PairKey],
        pair: usize,
        x: &Value,
        y: &Value,
    ) -> Result<Value, EvalError> {
        if let Some(v) = &self.chosen[pair] {
            return Ok(v.clone());
        }
        let opts: Vec<&Value> = match forced_and(alg, &self.one, x, y) {
            Some(_) => Vec::new(),
            None => self
                .carrier
                .iter()
                .filter(|c| alg.leq(c, x) && alg.leq(c, y))
                .collect(),
        };
        let v = if opts.is_empty() {
            forced_and(alg, &self.one, x, y).expect("0 is always below both operands")
        } else {
            if self.depth == self.choices.len() {
                self.choices.push(0);
                self.options.push(opts.len());
            }
            let v = opts[self.choices[self.depth]].clone();
            self.depth += 1;
            v
        };
        self.chosen[pair] = Some(v.clone());
        Ok(v)
    }
}

fn tables(chosen: &[Option<Value>]) -> BTreeMap<usize, Value> {
    chosen
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.clone().map(|v| (i, v)))
        .collect()
}

fn fails(alg: &dyn Algebra, v: &Value) -> bool {
    !alg.leq(&alg.one(), v)
}

fn test_point(
    c: &Compiled,
    alg: &dyn Algebra,
    mode: &AndMode,
    exhaustive_tables: bool,
    atoms: Vec<Value>,
    rng: Option<&mut ChaCha8Rng>,
) -> PointResult {
    let mut buf = Vec::with_capacity(c.nodes.len());
    match mode {
        AndMode::Fixed(policy) => {
            let mut inner = PolicyChooser(policy);
            c.run(alg, &atoms, &mut inner, &mut buf)?;
            let value = buf.pop().expect("nonempty formula");
            if !fails(alg, &value) {
                return Ok((1, None));
            }
            let mut rec = Recording {
                inner: &mut inner,
                seen: BTreeMap::new(),
            };
            c.run(alg, &atoms, &mut rec, &mut buf)?;
            let table = rec.seen;
            Ok((1, Some(Found { atoms, table, value })))
        }
        AndMode::Search { .. } if exhaustive_tables => {
            let carrier = alg.enumerate().expect("finite carrier");
            let mut od = Odometer {
                one: alg.one(),
                carrier,
                choices: Vec::new(),
                options: Vec::new(),
                depth: 0,
                chosen: vec![None; c.pairs.len()],
            };
            let mut n = 0;
            loop {
                od.reset();
                c.run(alg, &atoms, &mut od, &mut buf)?;
                n += 1;
                let value = buf.pop().expect("nonempty formula");
                if fails(alg, &value) {
                    let table = tables(&od.chosen);
                    return Ok((n, Some(Found { atoms, table, value })));
                }
                if !od.advance() {
                    return Ok((n, None));
                }
            }
        }
        AndMode::Search { trials, .. } => {
            let rng = rng.expect("search mode carries an rng");
            let one = alg.one();
            for trial in 0..(*trials).max(1) {
                let mut ch = SearchChooser {
                    trial,
                    one: one.clone(),
                    rng,
                    chosen: vec![None; c.pairs.len()],
                };
                c.run(alg, &atoms, &mut ch, &mut buf)?;
                let value = buf.pop().expect("nonempty formula");
                if fails(alg, &value) {
                    let table = tables(&ch.chosen);
                    return Ok((trial as u64 + 1, Some(Found { atoms, table, value })));
                }
                if c.pairs.is_empty() {
                    return Ok((trial as u64 + 1, None));
                }
            }
            Ok(((*trials).max(1) as u64, None))
        }
    }
}

fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

const CHUNK: u64 = 2048;

/// Checks `1 ≤ e(f)` over the points of a strategy.
pub fn check(f: &Formula, algebra: &AlgebraHandle, strategy: &Strategy) -> Result<Verdict, TautError> {
    let alg = algebra.ops();
    let c = Compiled::new(f);
    let k = c.atoms.len() as u32;
    let mismatch = |reason: &str| TautError::Mismatch {
        strategy: strategy.to_string(),
        algebra: algebra.id().to_string(),
        reason: reason.to_string(),
    };

    // Per-atom value lists for the enumerated strategies.
    let one = alg.one();
    let axis: Option<Vec<Value>> = match &strategy.sampling {
        Sampling::Exhaustive => {
            let all = alg
                .enumerate()
                .ok_or_else(|| mismatch("exhaustive needs a finite carrier"))?;
            Some(all.into_iter().filter(|v| alg.leq(v, &one)).collect())
        }
        Sampling::Grid { step } => {
            if !(*step > 0.0 && *step <= 1.0) {
                return Err(mismatch("grid step must lie in (0, 1]"));
            }
            Some(alg.unit_grid(*step))
        }
        Sampling::Random { .. } => None,
    };
    let total: u64 = match (&axis, &strategy.sampling) {
        (Some(ax), _) => (ax.len() as u64)
            .checked_pow(k)
            .ok_or_else(|| mismatch("too many grid points"))?,
        (None, Sampling::Random { count, .. }) => *count,
        _ => unreachable!(),
    };
    let exhaustive_tables = matches!(strategy.sampling, Sampling::Exhaustive);
    let search_seed = match strategy.and_mode {
        AndMode::Search { seed, .. } => seed,
        AndMode::Fixed(_) => 0,
    };

    let point = |i: u64| -> (Vec<Value>, Option<ChaCha8Rng>) {
        match (&axis, &strategy.sampling) {
            (Some(ax), _) => {
                let n = ax.len() as u64;
                let mut atoms = vec![Value::Idx(0); k as usize];
                let mut rest = i;
                for slot in atoms.iter_mut().rev() {
                    *slot = ax[(rest % n) as usize].clone();
                    rest /= n;
                }
                let rng = strategy.is_search().then(|| point_rng(search_seed, i));
                (atoms, rng)
            }
            (None, Sampling::Random { seed, .. }) => {
                let mut rng = point_rng(*seed, i);
                let atoms = (0..k).map(|_| alg.sample_unit(&mut rng)).collect();
                (atoms, Some(rng))
            }
            _ => unreachable!(),
        }
    };

    let mut evaluations = 0u64;
    let mut start = 0u64;
    while start < total {
        let end = (start + CHUNK).min(total);
        let results: Vec<PointResult> = (start..end)
            .into_par_iter()
            .map(|i| {
                let (atoms, mut rng) = point(i);
                test_point(&c, alg, &strategy.and_mode, exhaustive_tables, atoms, rng.as_mut())
            })
            .collect();
        for (offset, r) in results.into_iter().enumerate() {
            let i = start + offset as u64;
            let (n, found) = r.map_err(|err| TautError::Eval {
                point: describe_point(alg, &c, &point(i).0),
                err,
            })?;
            evaluations += n;
            if let Some(found) = found {
                let witness = build_witness(algebra, &c, found.atoms, found.table);
                return Ok(Verdict {
                    formula: f.clone(),
                    algebra: algebra.id().to_string(),
                    strategy: strategy.to_string(),
                    outcome: Outcome::Counterexample {
                        witness,
                        value: found.value,
                    },
                    points: i + 1,
                    evaluations,
                });
            }
        }
        start = end;
    }

    Ok(Verdict {
        formula: f.clone(),
        algebra: algebra.id().to_string(),
        strategy: strategy.to_string(),
        outcome: if exhaustive_tables {
            Outcome::ProvenExhaustive
        } else {
            Outcome::HoldsOnSampled
        },
        points: total,
        evaluations,
    })
}

fn describe_point(alg: &dyn Algebra, c: &Compiled, atoms: &[Value]) -> String {
    let parts: Vec<String> = c
        .atoms
        .iter()
        .zip(atoms)
        .map(|(a, v)| format!("{a} = {}", alg.display(v)))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn build_witness(
    algebra: &AlgebraHandle,
    c: &Compiled,
    atoms: Vec<Value>,
    table: BTreeMap<usize, Value>,
) -> Evaluation {
    let mut nt = NodeTable::new();
    for (p, v) in table {
        nt.insert_key(c.pairs[p].clone(), v);
    }
    let mut ev = Evaluation::new(algebra.clone(), ConjunctionPolicy::table(nt));
    for (a, v) in c.atoms.iter().zip(atoms) {
        ev.assign_unchecked(a, v);
    }
    ev
}

/// Runs [`check`] on each formula.
pub fn check_suite(
    formulas: &[Formula],
    algebra: &AlgebraHandle,
    strategy: &Strategy,
) -> Vec<Result<Verdict, TautError>> {
    formulas.iter().map(|f| check(f, algebra, strategy)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::zoo::algebra_by_id;

    fn run(f: &str, alg: &str, s: Strategy) -> Verdict {
        check(&parse(f).unwrap(), &algebra_by_id(alg).unwrap(), &s).unwrap()
    }

    #[test]
    fn excluded_middle_fails_at_one_half() {
        let v = run("p \\/ ~p", "godel-unit", Strategy::grid(0.25));
        let (w, val) = v.witness().expect("counterexample");
        assert_eq!(val, &Value::num(0.5));
        assert_eq!(w.atoms()["p"], Value::num(0.5));
        assert_eq!(w.value(&parse("p \\/ ~p").unwrap()).unwrap(), Value::num(0.5));
    }

    #[test]
    fn identity_holds_and_boolean_is_exhaustive() {
        let v = run("p -> p", "godel-unit", Strategy::grid(0.01));
        assert_eq!(v.name(), "HOLDS_ON_SAMPLED");
        let v = run("p \\/ ~p", "boolean2", Strategy::exhaustive());
        assert_eq!(v.name(), "PROVEN_EXHAUSTIVE");
        assert!(check(
            &parse("p").unwrap(),
            &algebra_by_id("godel-unit").unwrap(),
            &Strategy::exhaustive()
        )
        .is_err());
    }

    #[test]
    fn search_mode_breaks_contraction() {
        let v = run("p -> (p & p)", "godel-unit", Strategy::grid(0.1).searching());
        let (w, val) = v.witness().expect("counterexample");
        let g = algebra_by_id("godel-unit").unwrap();
        assert!(!g.ops().leq(&g.ops().one(), val));
        assert_eq!(&w.value(&parse("p -> (p & p)").unwrap()).unwrap(), val);
        let v = run("p -> (p & p)", "godel-unit", Strategy::grid(0.1));
        assert_eq!(v.name(), "HOLDS_ON_SAMPLED");
    }

    #[test]
    fn exhaustive_search_on_heyting_chain() {
        // Every lawful table keeps A4 valid; contraction fails at h.
        let v = run("p & q -> p", "heyting3", Strategy::exhaustive().searching());
        assert_eq!(v.name(), "PROVEN_EXHAUSTIVE");
        assert!(v.evaluations > 9);
        let v = run("p -> p & p", "heyting3", Strategy::exhaustive().searching());
        let (w, _) = v.witness().unwrap();
        assert_eq!(w.algebra().display(&w.atoms()["p"]), "h");
    }

    #[test]
    fn random_runs_are_deterministic() {
        let s = Strategy::random(500, 11).searching();
        let a = run("(p & (p -> q)) -> q", "prob-ray", s.clone());
        let b = run("(p & (p -> q)) -> q", "prob-ray", s);
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.is_counterexample());
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!(Strategy::parse("grid:0.25").unwrap().sampling, Sampling::Grid { step: 0.25 });
        assert_eq!(
            Strategy::parse("random:100:7").unwrap().sampling,
            Sampling::Random { count: 100, seed: 7 }
        );
        assert!(Strategy::parse("grid:0").is_err());
        assert!(Strategy::parse("grid").is_err());
        assert!(Strategy::parse("sometimes").is_err());
    }
}
