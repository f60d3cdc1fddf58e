//! Evaluations: atoms into the unit sub-interval, extended over connectives.
//!
//! `e(0) = 0`, `e(¬φ) = ¬e(φ)`, `e(φ → ψ) = e(φ) → e(ψ)` and
//! `e(φ ∨ ψ) = max{c | e(φ & ψ) ⊕ c = e(φ) ⊕ e(ψ)}`. The value of `φ & ψ`
//! is not a function of `e(φ)` and `e(ψ)`; it comes from a
//! [`ConjunctionPolicy`] and must satisfy
//!
//! * `e(φ & ψ) ≤ e(φ)` and `e(φ & ψ) ≤ e(ψ)`,
//! * `e(φ & ψ) = e(ψ & φ)`,
//! * `e(φ & ψ) = e(ψ)` when `1 ≤ e(φ)` and `e(ψ) ≤ e(φ)`, and symmetrically.
//!
//! The unit law is only enforced where it does not contradict the first
//! constraint.

mod compiled;
mod doc;
mod table;

pub(crate) use compiled::{AndChooser, Compiled, PolicyChooser, Recording};
use compiled::{describe, disjunction, node_text};

pub use doc::{AssignmentDoc, DocError, TableEntryDoc};
pub use table::{pair_key, NodeTable, PairKey};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, AlgebraHandle, Element, Ext, Value};
use crate::formula::Formula;

/// A user-supplied rule for `&`-node values.
///
/// Returning `None` defers to the meet.
pub trait ConjunctionRule: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn conjoin(
        &self,
        alg: &dyn Algebra,
        left: &Formula,
        right: &Formula,
        x: &Value,
        y: &Value,
    ) -> Option<Value>;
}

#[derive(Clone, Debug)]
pub enum ConjunctionPolicy {
    /// The meet `min(x, y)`.
    Min,
    /// The algebra's `∗`. Checked at every node, since `x ∗ y ≤ x` can fail
    /// above the unit.
    Star,
    /// `∗` when both operands are `≤ 1`, the meet otherwise.
    ProductThenMin,
    /// Explicit node values; pairs missing from the table use `fallback`.
    Table {
        table: NodeTable,
        fallback: Box<ConjunctionPolicy>,
    },
    Rule(Arc<dyn ConjunctionRule>),
}

impl ConjunctionPolicy {
    pub fn id(&self) -> &str {
        match self {
            ConjunctionPolicy::Min => "min",
            ConjunctionPolicy::Star => "star",
            ConjunctionPolicy::ProductThenMin => "product-then-min",
            ConjunctionPolicy::Table { .. } => "table",
            ConjunctionPolicy::Rule(r) => r.name(),
        }
    }

    /// Parses `min`, `star` or `product-then-min`.
    pub fn from_id(id: &str) -> Option<ConjunctionPolicy> {
        match id {
            "min" => Some(ConjunctionPolicy::Min),
            "star" => Some(ConjunctionPolicy::Star),
            "product-then-min" => Some(ConjunctionPolicy::ProductThenMin),
            _ => None,
        }
    }

    pub fn table(table: NodeTable) -> ConjunctionPolicy {
        ConjunctionPolicy::Table {
            table,
            fallback: Box::new(ConjunctionPolicy::Min),
        }
    }

    /// The proposed value before any constraint check.
    fn raw(
        &self,
        alg: &dyn Algebra,
        key: &PairKey,
        x: &Value,
        y: &Value,
    ) -> Result<Raw, ViolationKind> {
        let meet = || alg.meet(x, y).ok_or(ViolationKind::NoMeet);
        let value = match self {
            ConjunctionPolicy::Min => meet()?,
            ConjunctionPolicy::Star => alg.star(x, y),
            ConjunctionPolicy::ProductThenMin => {
                let one = alg.one();
                if alg.leq(x, &one) && alg.leq(y, &one) {
                    alg.star(x, y)
                } else {
                    meet()?
                }
            }
            ConjunctionPolicy::Table { table, fallback } => {
                let conflict = table.conflict_key(key).map(<[Value]>::to_vec);
                return match table.get_key(key) {
                    Some(v) => Ok(Raw {
                        value: v.clone(),
                        conflict,
                    }),
                    None => fallback.raw(alg, key, x, y),
                };
            }
            ConjunctionPolicy::Rule(rule) => match rule.conjoin(alg, &key.0, &key.1, x, y) {
                Some(v) => v,
                None => meet()?,
            },
        };
        Ok(Raw {
            value,
            conflict: None,
        })
    }
}

struct Raw {
    value: Value,
    conflict: Option<Vec<Value>>,
}

/// Which evaluation clause a node breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Unassigned,
    OutsideUnit,
    /// `c ≰ x` for the left operand.
    AboveLeft,
    /// `c ≰ y` for the right operand.
    AboveRight,
    UnitLaw,
    Symmetry,
    NoMeet,
    /// `e(φ & ψ) ≰ e(φ) ⊕ e(ψ)`, so the disjunction maximum is undefined.
    OrBound,
    OrNoSolution,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Unassigned => "atom not assigned",
            ViolationKind::OutsideUnit => "atom value not ≤ 1",
            ViolationKind::AboveLeft => "c ≰ x",
            ViolationKind::AboveRight => "c ≰ y",
            ViolationKind::UnitLaw => "unit law broken",
            ViolationKind::Symmetry => "symmetry broken",
            ViolationKind::NoMeet => "operands have no meet",
            ViolationKind::OrBound => "e(φ&ψ) ≰ e(φ) ⊕ e(ψ)",
            ViolationKind::OrNoSolution => "no greatest disjunction solution",
        })
    }
}

/// The first `&` constraint broken by `c` for operands `x`, `y`.
pub fn check_and(alg: &dyn Algebra, x: &Value, y: &Value, c: &Value) -> Option<ViolationKind> {
    if !alg.leq(c, x) {
        return Some(ViolationKind::AboveLeft);
    }
    if !alg.leq(c, y) {
        return Some(ViolationKind::AboveRight);
    }
    let one = alg.one();
    if let Some(forced) = forced_and(alg, &one, x, y) {
        if !alg.eq(c, &forced) {
            return Some(ViolationKind::UnitLaw);
        }
    }
    None
}

/// The value the unit law forces on `x & y`, when it applies consistently.
pub(crate) fn forced_and(alg: &dyn Algebra, one: &Value, x: &Value, y: &Value) -> Option<Value> {
    if alg.leq(one, x) && alg.leq(y, x) {
        Some(y.clone())
    } else if alg.leq(one, y) && alg.leq(x, y) {
        Some(x.clone())
    } else {
        None
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("atom `{0}` is not assigned")]
    Unassigned(String),
    #[error("atom `{atom}` = {value} is not in the unit sub-interval")]
    OutsideUnit { atom: String, value: String },
    #[error("value {value} for atom `{atom}` is not in the carrier of `{algebra}`")]
    NotInCarrier {
        atom: String,
        value: String,
        algebra: String,
    },
    #[error("conjunction at `{node}`: {kind} ({detail})")]
    Policy {
        node: String,
        kind: ViolationKind,
        detail: String,
    },
    #[error("disjunction at `{node}`: {kind} ({detail})")]
    Disjunction {
        node: String,
        kind: ViolationKind,
        detail: String,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Pair key for operands that are already desugared.
pub(crate) fn pair_key_of_core(a: &Formula, b: &Formula) -> PairKey {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Atom values plus a conjunction interpretation over one algebra.
#[derive(Clone, Debug)]
pub struct Evaluation {
    algebra: AlgebraHandle,
    atoms: BTreeMap<String, Value>,
    policy: ConjunctionPolicy,
}

impl Evaluation {
    pub fn new(algebra: AlgebraHandle, policy: ConjunctionPolicy) -> Self {
        Evaluation {
            algebra,
            atoms: BTreeMap::new(),
            policy,
        }
    }

    /// Assigns an atom. The value must lie in the unit sub-interval.
    pub fn assign(&mut self, atom: &str, value: Value) -> Result<(), EvalError> {
        let alg = self.algebra.ops();
        if !alg.contains(&value) {
            return Err(EvalError::NotInCarrier {
                atom: atom.into(),
                value: value.to_string(),
                algebra: self.algebra.id().into(),
            });
        }
        if !alg.leq(&value, &alg.one()) {
            return Err(EvalError::OutsideUnit {
                atom: atom.into(),
                value: alg.display(&value),
            });
        }
        self.atoms.insert(atom.into(), value);
        Ok(())
    }

    /// Assigns an atom from an element of this evaluation's algebra.
    pub fn assign_element(&mut self, atom: &str, value: &Element) -> Result<(), EvalError> {
        if value.algebra_id() != self.algebra.id() {
            return Err(AlgebraError::Mismatch {
                expected: self.algebra.id().into(),
                found: value.algebra_id().into(),
            }
            .into());
        }
        self.assign(atom, value.value().clone())
    }

    /// Builder form of [`Evaluation::assign`].
    pub fn with(mut self, atom: &str, value: Value) -> Result<Self, EvalError> {
        self.assign(atom, value)?;
        Ok(self)
    }

    /// Sets atoms without the unit check. Used by [`validate`] tests and
    /// by callers that want to probe malformed assignments.
    pub fn assign_unchecked(&mut self, atom: &str, value: Value) {
        self.atoms.insert(atom.into(), value);
    }

    pub fn algebra(&self) -> &AlgebraHandle {
        &self.algebra
    }

    pub fn atoms(&self) -> &BTreeMap<String, Value> {
        &self.atoms
    }

    pub fn policy(&self) -> &ConjunctionPolicy {
        &self.policy
    }

    pub fn set_policy(&mut self, policy: ConjunctionPolicy) {
        self.policy = policy;
    }

    fn atom_values(&self, c: &Compiled) -> Result<Vec<Value>, EvalError> {
        c.atoms
            .iter()
            .map(|a| {
                self.atoms
                    .get(&**a)
                    .cloned()
                    .ok_or_else(|| EvalError::Unassigned(a.to_string()))
            })
            .collect()
    }

    /// The raw value of `f`.
    pub fn value(&self, f: &Formula) -> Result<Value, EvalError> {
        let c = Compiled::new(f);
        let atoms = self.atom_values(&c)?;
        c.value(self.algebra.ops(), &atoms, &mut PolicyChooser(&self.policy))
    }

    pub fn evaluate(&self, f: &Formula) -> Result<Element, EvalError> {
        Ok(self.algebra.wrap(self.value(f)?))
    }

    /// Whether `1 ≤ e(f)`.
    pub fn satisfies(&self, f: &Formula) -> Result<bool, EvalError> {
        let v = self.value(f)?;
        let alg = self.algebra.ops();
        Ok(alg.leq(&alg.one(), &v))
    }

    /// Replaces the policy by an explicit table holding every `&` value
    /// used while evaluating `f`. Other pairs fall back to the meet.
    pub fn materialize(&self, f: &Formula) -> Result<Evaluation, EvalError> {
        let c = Compiled::new(f);
        let atoms = self.atom_values(&c)?;
        let mut inner = PolicyChooser(&self.policy);
        let mut rec = Recording {
            inner: &mut inner,
            seen: BTreeMap::new(),
        };
        c.value(self.algebra.ops(), &atoms, &mut rec)?;
        let mut table = NodeTable::new();
        for (k, v) in rec.seen {
            table.insert_key(c.pairs[k].clone(), v);
        }
        Ok(Evaluation {
            algebra: self.algebra.clone(),
            atoms: self.atoms.clone(),
            policy: ConjunctionPolicy::table(table),
        })
    }
}

/// `e(f)` under `ev`.
pub fn evaluate(f: &Formula, ev: &Evaluation) -> Result<Element, EvalError> {
    ev.evaluate(f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub node: String,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, node: String, kind: ViolationKind, detail: String) {
        if !self.violations.iter().any(|v| v.node == node && v.kind == kind) {
            self.violations.push(Violation { node, kind, detail });
        }
    }
}

/// Walks `f` and reports every clause an evaluation breaks on it.
pub fn validate(ev: &Evaluation, f: &Formula) -> ValidationReport {
    let mut rep = ValidationReport::default();
    walk(ev, &f.desugar(), &mut rep);
    rep
}

fn walk(ev: &Evaluation, f: &Formula, rep: &mut ValidationReport) -> Option<Value> {
    let alg = ev.algebra.ops();
    match f {
        Formula::Atom(n) => {
            let Some(v) = ev.atoms.get(&**n) else {
                rep.push(n.to_string(), ViolationKind::Unassigned, String::new());
                return None;
            };
            if !alg.leq(v, &alg.one()) {
                rep.push(n.to_string(), ViolationKind::OutsideUnit, alg.display(v));
            }
            Some(v.clone())
        }
        Formula::False => Some(alg.zero()),
        Formula::Not(a) => walk(ev, a, rep).map(|x| alg.neg(&x)),
        Formula::Implies(a, b) => {
            let (x, y) = (walk(ev, a, rep), walk(ev, b, rep));
            Some(alg.residuum(&x?, &y?))
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (x, y) = (walk(ev, a, rep)?, walk(ev, b, rep)?);
            let key = pair_key_of_core(a, b);
            let (x, y) = if key.0 == **a { (x, y) } else { (y, x) };
            let node = node_text(&key);
            let raw = match ev.policy.raw(alg, &key, &x, &y) {
                Ok(r) => r,
                Err(kind) => {
                    rep.push(node, kind, String::new());
                    return None;
                }
            };
            if let Some(vals) = &raw.conflict {
                let vs: Vec<String> = vals.iter().map(|v| alg.display(v)).collect();
                rep.push(node.clone(), ViolationKind::Symmetry, vs.join(" vs "));
            }
            if let Some(kind) = check_and(alg, &x, &y, &raw.value) {
                rep.push(node, kind, describe(alg, &x, &y, &raw.value));
            }
            if matches!(f, Formula::And(..)) {
                return Some(raw.value);
            }
            match disjunction(alg, &key, &x, &y, &raw.value) {
                Ok(v) => Some(v),
                Err(EvalError::Disjunction { node, kind, detail }) => {
                    rep.push(node, kind, detail);
                    None
                }
                Err(_) => None,
            }
        }
        Formula::True | Formula::Iff(..) | Formula::Cond(..) => walk(ev, &f.desugar(), rep),
    }
}

/// Compares the generic disjunction with the closed form of the algebra:
/// `max(x, y)` on max-based unit intervals, `x + y - e(φ & ψ)` on the
/// probability ray (or `INF` when an operand is `INF`).
pub fn or_identity_check(ev: &Evaluation, phi: &Formula, psi: &Formula) -> Result<bool, EvalError> {
    let alg = ev.algebra.ops();
    let id = ev.algebra.id();
    let generic = ev.value(&Formula::or(phi.clone(), psi.clone()))?;
    let (x, y) = (ev.value(phi)?, ev.value(psi)?);
    let closed = if id == "godel-unit" || id.starts_with("tnorm-") {
        alg.oplus(&x, &y)
    } else if id == "prob-ray" {
        let c = ev.value(&Formula::and(phi.clone(), psi.clone()))?;
        match (x.as_ext(), y.as_ext(), c.as_ext()) {
            (Some(Ext::Fin(a)), Some(Ext::Fin(b)), Some(Ext::Fin(c))) => Value::Num(Ext::clamp(a + b - c)),
            _ => Value::INF,
        }
    } else {
        return Err(EvalError::Unsupported(format!(
            "no closed-form disjunction for `{id}` (supported: godel-unit, tnorm-*, prob-ray)"
        )));
    };
    Ok(alg.eq(&generic, &closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::zoo::algebra_by_id;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn ev(alg: &str, policy: ConjunctionPolicy, atoms: &[(&str, f64)]) -> Evaluation {
        let mut e = Evaluation::new(algebra_by_id(alg).unwrap(), policy);
        for (n, v) in atoms {
            e.assign(n, Value::num(*v)).unwrap();
        }
        e
    }

    fn num(e: &Evaluation, s: &str) -> f64 {
        e.value(&f(s)).unwrap().as_f64().unwrap()
    }

    #[test]
    fn excluded_middle_on_godel_unit() {
        let e = ev("godel-unit", ConjunctionPolicy::Min, &[("p", 0.5)]);
        assert_eq!(num(&e, "p \\/ ~p"), 0.5);
    }

    #[test]
    fn causality_with_a_node_table() {
        let alg = algebra_by_id("prob-ray").unwrap();
        let mut t = NodeTable::new();
        t.insert(alg.ops(), &f("p"), &f("p -> q"), Value::num(0.5));
        let e = ev("prob-ray", ConjunctionPolicy::table(t), &[("p", 0.8), ("q", 0.4)]);
        assert!((num(&e, "(p & (p -> q)) -> q") - 0.8).abs() < 1e-12);
        assert!(!e.satisfies(&f("(p & (p -> q)) -> q")).unwrap());
    }

    #[test]
    fn product_then_min_disjunction() {
        let e = ev("prob-ray", ConjunctionPolicy::ProductThenMin, &[("p", 0.6)]);
        assert!((num(&e, "p \\/ ~p") - 0.76).abs() < 1e-12);
        assert!((num(&e, "~(p \\/ ~p)") - 0.24).abs() < 1e-12);
        assert!((num(&e, "p & ~p") - 0.24).abs() < 1e-12);
    }

    #[test]
    fn validation_reports_breaches() {
        let alg = algebra_by_id("godel-unit").unwrap();
        let mut t = NodeTable::new();
        t.insert(alg.ops(), &f("p"), &f("q"), Value::num(0.9));
        let e = ev("godel-unit", ConjunctionPolicy::table(t), &[("p", 0.5), ("q", 0.95)]);
        let rep = validate(&e, &f("p & q"));
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].kind, ViolationKind::AboveLeft);
        assert_eq!(rep.violations[0].node, "p & q");
        assert!(e.value(&f("p & q")).is_err());

        let mut t = NodeTable::new();
        t.insert(alg.ops(), &f("p"), &f("q"), Value::num(0.3));
        t.insert(alg.ops(), &f("q"), &f("p"), Value::num(0.2));
        let e = ev("godel-unit", ConjunctionPolicy::table(t), &[("p", 0.5), ("q", 0.5)]);
        let rep = validate(&e, &f("p & q"));
        assert!(rep.violations.iter().any(|v| v.kind == ViolationKind::Symmetry));

        let e = ev("prob-ray", ConjunctionPolicy::Min, &[("p", 0.5)]);
        assert!(validate(&e, &f("p & ~p -> (p \\/ q)")).violations[0].kind == ViolationKind::Unassigned);
    }

    #[test]
    fn unit_law_is_enforced_when_consistent() {
        let alg = algebra_by_id("godel-unit").unwrap();
        let mut t = NodeTable::new();
        t.insert(alg.ops(), &f("p"), &f("q"), Value::num(0.2));
        let e = ev("godel-unit", ConjunctionPolicy::table(t), &[("p", 1.0), ("q", 0.5)]);
        let rep = validate(&e, &f("p & q"));
        assert_eq!(rep.violations[0].kind, ViolationKind::UnitLaw);
    }

    #[test]
    fn star_above_unit_is_rejected() {
        let alg = algebra_by_id("prob-ray").unwrap();
        let mut e = Evaluation::new(alg, ConjunctionPolicy::Star);
        e.assign("p", Value::num(0.5)).unwrap();
        // ~0 = 1 and 0 -> 0 = INF; INF ∗ 0.5 = INF, above 0.5.
        assert!(e.value(&f("(0 -> 0) & p")).is_err());
    }

    #[test]
    fn atoms_must_lie_in_unit() {
        let mut e = Evaluation::new(algebra_by_id("prob-ray").unwrap(), ConjunctionPolicy::Min);
        assert!(matches!(
            e.assign("p", Value::num(1.5)),
            Err(EvalError::OutsideUnit { .. })
        ));
        assert!(matches!(
            e.value(&f("p")),
            Err(EvalError::Unassigned(_))
        ));
    }

    #[test]
    fn or_identity_routes() {
        let e = ev("godel-unit", ConjunctionPolicy::Min, &[("p", 0.3), ("q", 0.7)]);
        assert!(or_identity_check(&e, &f("p"), &f("q")).unwrap());
        let e = ev("prob-ray", ConjunctionPolicy::Min, &[("p", 0.5), ("q", 0.5)]);
        assert!(or_identity_check(&e, &f("p"), &f("q")).unwrap());
        assert!((num(&e, "p \\/ q") - 0.5).abs() < 1e-12);
        // 0 -> 0 evaluates to INF on the ray.
        assert!(or_identity_check(&e, &f("1"), &f("q")).unwrap());
        assert_eq!(e.value(&f("1 \\/ q")).unwrap(), Value::INF);
        let e = ev("boolean2", ConjunctionPolicy::Min, &[]);
        assert!(or_identity_check(&e, &f("0"), &f("0")).is_err());
    }

    #[test]
    fn materialized_table_reproduces_value() {
        let e = ev("prob-ray", ConjunctionPolicy::ProductThenMin, &[("p", 0.6), ("q", 0.3)]);
        let g = f("(p & q) \\/ ~p -> q");
        let m = e.materialize(&g).unwrap();
        assert_eq!(m.value(&g).unwrap(), e.value(&g).unwrap());
        assert_eq!(m.policy().id(), "table");
    }
}
