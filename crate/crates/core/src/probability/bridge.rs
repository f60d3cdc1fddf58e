//! From a probability space to a `prob-ray` evaluation and back.
//!
//! The extension assigns `P(A)` to each event atom and answers `&` between
//! two pure-event formulas with the probability of the intersection. `∨`
//! then yields `P(A) + P(B) - P(A ∩ B) = P(A ∪ B)` and `¬` yields
//! `1 - P(A) = P(Aᶜ)`. Other `&` nodes take the meet. Many extensions
//! exist; this is one.

use std::sync::Arc;

use super::{validate_space, Event, EventField, ProbError, ProbabilitySpace, SpaceReport};
use crate::algebra::{Algebra, Value};
use crate::eval::{ConjunctionPolicy, ConjunctionRule, Evaluation};
use crate::formula::Formula;
use crate::zoo::algebra_by_id;

/// The set a pure-event formula denotes: atoms name events, `0` is the
/// empty event, and `¬`, `&`, `∨` are complement, intersection and union.
/// `None` for formulas with `→` or unknown atoms.
pub fn event_set(f: &Formula, field: &EventField) -> Option<Event> {
    match f {
        Formula::Atom(a) => field.lookup(a),
        Formula::False => Some(0),
        Formula::Not(a) => event_set(a, field).map(|e| field.complement(e)),
        Formula::And(a, b) => Some(event_set(a, field)? & event_set(b, field)?),
        Formula::Or(a, b) => Some(event_set(a, field)? | event_set(b, field)?),
        Formula::True | Formula::Implies(..) | Formula::Iff(..) | Formula::Cond(..) => None,
    }
}

/// `e(φ & ψ) = P(⟦φ⟧ ∩ ⟦ψ⟧)` for pure-event operands.
#[derive(Debug)]
pub struct IntersectionRule {
    space: ProbabilitySpace,
}

impl IntersectionRule {
    pub fn new(space: ProbabilitySpace) -> Self {
        IntersectionRule { space }
    }
}

impl ConjunctionRule for IntersectionRule {
    fn name(&self) -> &str {
        "intersection"
    }

    fn conjoin(&self, _alg: &dyn Algebra, left: &Formula, right: &Formula, _x: &Value, _y: &Value) -> Option<Value> {
        let f = &self.space.field;
        let e = event_set(left, f)? & event_set(right, f)?;
        self.space.prob(e).map(|v| Value::num(v.clamp(0.0, 1.0)))
    }
}

/// Extends a valid space to an evaluation on `prob-ray`. Every event gets
/// its default atom name and, if it has one, its declared name.
pub fn extend_to_evaluation(s: &ProbabilitySpace) -> Result<Evaluation, ProbError> {
    let report = validate_space(s);
    if !report.is_valid() {
        return Err(ProbError::Invalid(Box::new(report)));
    }
    let alg = algebra_by_id("prob-ray").expect("built in");
    let rule = IntersectionRule::new(s.clone());
    let mut ev = Evaluation::new(alg, ConjunctionPolicy::Rule(Arc::new(rule)));
    let value = |e: Event| Value::num(s.prob(e).expect("validated").clamp(0.0, 1.0));
    for e in s.field.events() {
        ev.assign(&s.field.default_name(e), value(e))?;
    }
    for (name, e) in s.field.names() {
        ev.assign(name, value(*e))?;
    }
    Ok(ev)
}

#[derive(Clone, Debug)]
pub struct Restriction {
    pub space: ProbabilitySpace,
    pub report: SpaceReport,
}

/// Reads `e(A)` for every event of `field` and validates the result as a
/// probability function. Fails if some `e(A)` exceeds 1.
pub fn restrict_evaluation(ev: &Evaluation, field: &EventField) -> Result<Restriction, ProbError> {
    let ops = ev.algebra().ops();
    let one = ops.one();
    let mut p = std::collections::BTreeMap::new();
    for e in field.events() {
        let name = field.display_name(e);
        let v = ev.value(&Formula::atom(&name))?;
        if !ops.leq(&v, &one) {
            return Err(ProbError::AboveOne {
                event: name,
                value: ops.display(&v),
            });
        }
        let x = v
            .as_f64()
            .ok_or_else(|| ProbError::Malformed(format!("event {name} has a non-numeric value")))?;
        p.insert(e, x);
    }
    let space = ProbabilitySpace {
        field: field.clone(),
        p,
    };
    let report = validate_space(&space);
    Ok(Restriction { space, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::validate;
    use crate::formula::parse;

    fn uniform4() -> ProbabilitySpace {
        let doc = r#"{ "omega": ["a","b","c","d"], "field": "powerset",
                       "p": {}, "events": { "A": ["a","b"], "B": ["b","c"] } }"#;
        let mut s = ProbabilitySpace::from_json(doc).unwrap();
        let w = ProbabilitySpace::from_weights(s.field.omega().to_vec(), &[0.25; 4]).unwrap();
        s.p = w.p;
        s
    }

    fn num(v: Value) -> f64 {
        v.as_f64().unwrap()
    }

    #[test]
    fn union_complement_and_residuum() {
        let ev = extend_to_evaluation(&uniform4()).unwrap();
        assert!((num(ev.value(&parse("A \\/ B").unwrap()).unwrap()) - 0.75).abs() < 1e-12);
        assert!((num(ev.value(&parse("~A").unwrap()).unwrap()) - 0.5).abs() < 1e-12);
        assert!((num(ev.value(&parse("A & B").unwrap()).unwrap()) - 0.25).abs() < 1e-12);
        // P(A ∩ B) -> ... : residuum(0.5, 0.25) = 0.25 / 0.5.
        assert!((num(ev.value(&parse("A -> A & B").unwrap()).unwrap()) - 0.5).abs() < 1e-12);
        assert!(validate(&ev, &parse("(A & B) \\/ ~(A & ~B) -> A").unwrap()).is_valid());
    }

    #[test]
    fn round_trip_is_exact() {
        let s = uniform4();
        let ev = extend_to_evaluation(&s).unwrap();
        let r = restrict_evaluation(&ev, &s.field).unwrap();
        assert_eq!(r.space.p, s.p);
        assert!(r.report.is_valid());
    }

    #[test]
    fn restriction_hypothesis_and_additivity() {
        let s = uniform4();
        let mut ev = extend_to_evaluation(&s).unwrap();
        ev.assign_unchecked("A", Value::num(1.2));
        assert!(matches!(restrict_evaluation(&ev, &s.field), Err(ProbError::AboveOne { .. })));

        let mut ev = extend_to_evaluation(&s).unwrap();
        ev.assign("E_a", Value::num(0.4)).unwrap();
        let r = restrict_evaluation(&ev, &s.field).unwrap();
        assert!(!r.report.kolmogorov_ok);
        assert!(r.report.violations.iter().any(|v| v.to_string().contains("{a} and {b}")));
    }

    #[test]
    fn invalid_spaces_are_refused() {
        let mut s = uniform4();
        let full = s.field.full();
        s.p.insert(full, 0.9);
        assert!(matches!(extend_to_evaluation(&s), Err(ProbError::Invalid(_))));
    }
}
