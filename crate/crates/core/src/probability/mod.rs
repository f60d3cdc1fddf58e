//! Finite probability spaces, their link to `prob-ray` evaluations, and
//! interval bounds for fuzzy-random modus ponens.
//!
//! A space document looks like
//!
//! ```json
//! { "omega": ["a", "b", "c", "d"],
//!   "field": "powerset",
//!   "p": { "": 0, "a": 0.25, "a,b": 0.5, "a,b,c,d": 1 },
//!   "events": { "A": ["a", "b"] } }
//! ```
//!
//! Event keys are sorted, comma-joined labels; `""` is the empty event.
//! `field` is `"powerset"` or a list of label lists. Formula atoms name
//! events: either a name from `events`, or the default name `E_` followed
//! by the labels joined with `_` (`E_a_b`, and `E_` for the empty event).

mod bounds;
mod bridge;

pub use bounds::{mp_bounds, FuzzyRandomJudgment, MpBounds};
pub use bridge::{event_set, extend_to_evaluation, restrict_evaluation, IntersectionRule, Restriction};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{fmt_num, EPS};
use crate::eval::EvalError;

/// A set of outcomes, as a bit mask over the space's outcome list.
pub type Event = u64;

/// Most outcomes a space may have.
pub const MAX_OUTCOMES: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Named(String),
    Sets(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub omega: Vec<String>,
    pub field: FieldDoc,
    #[serde(default)]
    pub p: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub events: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Error)]
pub enum ProbError {
    #[error("malformed space: {0}")]
    Malformed(String),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("the space is not a valid probability space ({} violations, first: {})", .0.violations.len(), .0.violations.first().map(ToString::to_string).unwrap_or_default())]
    Invalid(Box<SpaceReport>),
    #[error("event {event} has value {value} > 1; restriction needs every event at most 1")]
    AboveOne { event: String, value: String },
    #[error("{name} = {value} lies outside [0, 1]")]
    OutOfRange { name: String, value: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Outcomes, events and optional event names, without probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct EventField {
    omega: Vec<String>,
    events: BTreeSet<Event>,
    names: BTreeMap<String, Event>,
}

impl EventField {
    /// `omega` must list distinct labels; `events` are given as masks.
    pub fn new(omega: Vec<String>, events: BTreeSet<Event>) -> Result<EventField, ProbError> {
        let distinct: BTreeSet<&String> = omega.iter().collect();
        if distinct.len() != omega.len() {
            return Err(ProbError::Malformed("outcome labels repeat".into()));
        }
        if omega.is_empty() || omega.len() > MAX_OUTCOMES {
            return Err(ProbError::Malformed(format!(
                "a space needs between 1 and {MAX_OUTCOMES} outcomes"
            )));
        }
        if omega.iter().any(|l| l.is_empty() || l.contains(',')) {
            return Err(ProbError::Malformed("labels must be nonempty and comma-free".into()));
        }
        Ok(EventField {
            omega,
            events,
            names: BTreeMap::new(),
        })
    }

    /// Every subset of `omega`.
    pub fn powerset(omega: Vec<String>) -> Result<EventField, ProbError> {
        let n = omega.len().min(MAX_OUTCOMES);
        EventField::new(omega, (0..1u64 << n).collect())
    }

    pub fn omega(&self) -> &[String] {
        &self.omega
    }

    pub fn full(&self) -> Event {
        (1u64 << self.omega.len()) - 1
    }

    pub fn complement(&self, e: Event) -> Event {
        self.full() & !e
    }

    pub fn events(&self) -> impl Iterator<Item = Event> + '_ {
        self.events.iter().copied()
    }

    pub fn contains(&self, e: Event) -> bool {
        self.events.contains(&e)
    }

    pub fn name(&mut self, name: &str, e: Event) {
        self.names.insert(name.into(), e);
    }

    pub fn names(&self) -> &BTreeMap<String, Event> {
        &self.names
    }

    /// Sorted, comma-joined labels.
    pub fn key(&self, e: Event) -> String {
        let mut labels: Vec<&str> = self.labels(e);
        labels.sort();
        labels.join(",")
    }

    fn labels(&self, e: Event) -> Vec<&str> {
        self.omega
            .iter()
            .enumerate()
            .filter(|(i, _)| e >> i & 1 == 1)
            .map(|(_, l)| l.as_str())
            .collect()
    }

    pub fn default_name(&self, e: Event) -> String {
        let mut labels = self.labels(e);
        labels.sort();
        format!("E_{}", labels.join("_"))
    }

    /// The event an atom names, if any.
    pub fn lookup(&self, atom: &str) -> Option<Event> {
        if let Some(e) = self.names.get(atom) {
            return Some(*e);
        }
        if !atom.starts_with("E_") {
            return None;
        }
        self.events().find(|e| self.default_name(*e) == atom)
    }

    /// The explicit name of an event if it has one, else its default name.
    pub fn display_name(&self, e: Event) -> String {
        self.names
            .iter()
            .find(|(_, v)| **v == e)
            .map(|(k, _)| k.clone())
            .unwrap_or_else(|| self.default_name(e))
    }

    pub fn parse_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Event, ProbError> {
        let mut e = 0;
        for l in labels {
            let l = l.as_ref().trim();
            let i = self
                .omega
                .iter()
                .position(|o| o == l)
                .ok_or_else(|| ProbError::UnknownOutcome(l.into()))?;
            e |= 1 << i;
        }
        Ok(e)
    }

    pub fn parse_key(&self, key: &str) -> Result<Event, ProbError> {
        if key.trim().is_empty() {
            return Ok(0);
        }
        let labels: Vec<&str> = key.split(',').collect();
        self.parse_labels(&labels)
    }
}

/// A finite space `(Ω, 𝔉, P)`. `P` may be partial or wrong; see
/// [`validate_space`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilitySpace {
    pub field: EventField,
    pub p: BTreeMap<Event, f64>,
}

impl ProbabilitySpace {
    pub fn from_doc(doc: &SpaceDoc) -> Result<ProbabilitySpace, ProbError> {
        let mut field = match &doc.field {
            FieldDoc::Named(n) if n == "powerset" => EventField::powerset(doc.omega.clone())?,
            FieldDoc::Named(n) => {
                return Err(ProbError::Malformed(format!(
                    "field must be \"powerset\" or a list of events, not \"{n}\""
                )))
            }
            FieldDoc::Sets(sets) => {
                let probe = EventField::new(doc.omega.clone(), BTreeSet::new())?;
                let events = sets
                    .iter()
                    .map(|s| probe.parse_labels(s))
                    .collect::<Result<_, _>>()?;
                EventField::new(doc.omega.clone(), events)?
            }
        };
        for (name, labels) in &doc.events {
            if crate::formula::parse(name) != Ok(crate::formula::Formula::atom(name)) {
                return Err(ProbError::Malformed(format!("event name `{name}` is not an atom name")));
            }
            let e = field.parse_labels(labels)?;
            field.name(name, e);
        }
        let mut p = BTreeMap::new();
        for (k, v) in &doc.p {
            p.insert(field.parse_key(k)?, *v);
        }
        Ok(ProbabilitySpace { field, p })
    }

    pub fn from_json(text: &str) -> Result<ProbabilitySpace, ProbError> {
        ProbabilitySpace::from_doc(&serde_json::from_str(text)?)
    }

    pub fn to_doc(&self) -> SpaceDoc {
        let all = self.field.events.len() == 1usize << self.field.omega.len();
        let field = if all {
            FieldDoc::Named("powerset".into())
        } else {
            FieldDoc::Sets(
                self.field
                    .events()
                    .map(|e| self.field.labels(e).into_iter().map(String::from).collect())
                    .collect(),
            )
        };
        SpaceDoc {
            omega: self.field.omega.clone(),
            field,
            p: self.p.iter().map(|(e, v)| (self.field.key(*e), *v)).collect(),
            events: self
                .field
                .names
                .iter()
                .map(|(n, e)| (n.clone(), self.field.labels(*e).into_iter().map(String::from).collect()))
                .collect(),
        }
    }

    /// Builds the powerset space with the given outcome masses. Sums that
    /// round above 1 are stored as 1.
    pub fn from_weights(omega: Vec<String>, weights: &[f64]) -> Result<ProbabilitySpace, ProbError> {
        if weights.len() != omega.len() {
            return Err(ProbError::Malformed("one weight per outcome".into()));
        }
        let field = EventField::powerset(omega)?;
        let p = field
            .events()
            .map(|e| {
                let mass: f64 = (0..weights.len()).filter(|i| e >> i & 1 == 1).map(|i| weights[i]).sum();
                (e, mass.min(1.0))
            })
            .collect();
        Ok(ProbabilitySpace { field, p })
    }

    pub fn prob(&self, e: Event) -> Option<f64> {
        self.p.get(&e).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpaceViolation {
    MissingOmega,
    NoComplement { event: String, complement: String },
    NoUnion { left: String, right: String, union: String },
    MissingProbability { event: String },
    NotAnEvent { event: String },
    OutOfRange { event: String, value: f64 },
    P1 { value: f64 },
    P2 { left: String, right: String, union: f64, sum: f64 },
    P1Prime { value: f64 },
    P2Prime { event: String, value: f64, complement: f64 },
    P3Prime { left: String, right: String, union: f64, expected: f64 },
}

impl fmt::Display for SpaceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SpaceViolation::*;
        let b = |s: &str| format!("{{{s}}}");
        let n = |x: &f64| fmt_num(*x);
        match self {
            MissingOmega => f.write_str("the field lacks Ω"),
            NoComplement { event, complement } => {
                write!(f, "complement of {} is missing: {}", b(event), b(complement))
            }
            NoUnion { left, right, union } => {
                write!(f, "union of {} and {} is missing: {}", b(left), b(right), b(union))
            }
            MissingProbability { event } => write!(f, "no probability for {}", b(event)),
            NotAnEvent { event } => write!(f, "probability given for {}, which is not in the field", b(event)),
            OutOfRange { event, value } => write!(f, "P({}) = {} is outside [0, 1]", b(event), n(value)),
            P1 { value } => write!(f, "P1 fails: P(Ω) = {}", n(value)),
            P2 { left, right, union, sum } => write!(
                f,
                "P2 fails for disjoint {} and {}: P(union) = {}, sum = {}",
                b(left),
                b(right),
                n(union),
                n(sum)
            ),
            P1Prime { value } => write!(f, "P1' fails: P(∅) = {}", n(value)),
            P2Prime { event, value, complement } => {
                write!(f, "P2' fails for {}: P = {}, P(complement) = {}", b(event), n(value), n(complement))
            }
            P3Prime { left, right, union, expected } => write!(
                f,
                "P3' fails for {} and {}: P(union) = {}, expected {}",
                b(left),
                b(right),
                n(union),
                n(expected)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpaceReport {
    /// Field closure and `P` defined, in range.
    pub structure_ok: bool,
    /// `P1` and `P2`.
    pub kolmogorov_ok: bool,
    /// `P1'`, `P2'` and `P3'`.
    pub alternative_ok: bool,
    pub violations: Vec<SpaceViolation>,
}

impl SpaceReport {
    pub fn is_valid(&self) -> bool {
        self.structure_ok && self.kolmogorov_ok && self.alternative_ok
    }

    /// Whether both axiom systems agree on this space.
    pub fn equivalence_holds(&self) -> bool {
        self.kolmogorov_ok == self.alternative_ok
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS
}

/// Checks closure, `P1`, `P2` on every disjoint pair, and `P1'`–`P3'`.
pub fn validate_space(s: &ProbabilitySpace) -> SpaceReport {
    let f = &s.field;
    let key = |e: Event| f.key(e);
    let mut structure = Vec::new();
    if !f.contains(f.full()) {
        structure.push(SpaceViolation::MissingOmega);
    }
    let events: Vec<Event> = f.events().collect();
    for &a in &events {
        let c = f.complement(a);
        if !f.contains(c) {
            structure.push(SpaceViolation::NoComplement {
                event: key(a),
                complement: key(c),
            });
        }
    }
    for (i, &a) in events.iter().enumerate() {
        for &b in &events[i + 1..] {
            if !f.contains(a | b) {
                structure.push(SpaceViolation::NoUnion {
                    left: key(a),
                    right: key(b),
                    union: key(a | b),
                });
            }
        }
    }
    for &a in &events {
        match s.prob(a) {
            None => structure.push(SpaceViolation::MissingProbability { event: key(a) }),
            Some(v) if !(-EPS..=1.0 + EPS).contains(&v) || v.is_nan() => {
                structure.push(SpaceViolation::OutOfRange { event: key(a), value: v })
            }
            _ => {}
        }
    }
    for &e in s.p.keys() {
        if !f.contains(e) {
            structure.push(SpaceViolation::NotAnEvent { event: key(e) });
        }
    }

    let p = |e: Event| s.prob(e);
    let mut kolmogorov = Vec::new();
    if let Some(v) = p(f.full()) {
        if !close(v, 1.0) {
            kolmogorov.push(SpaceViolation::P1 { value: v });
        }
    }
    for (i, &a) in events.iter().enumerate() {
        for &b in &events[i..] {
            if a & b != 0 {
                continue;
            }
            if let (Some(pa), Some(pb), Some(pu)) = (p(a), p(b), p(a | b)) {
                if !close(pu, pa + pb) {
                    kolmogorov.push(SpaceViolation::P2 {
                        left: key(a),
                        right: key(b),
                        union: pu,
                        sum: pa + pb,
                    });
                }
            }
        }
    }

    let mut alternative = Vec::new();
    if let Some(v) = p(0) {
        if !close(v, 0.0) {
            alternative.push(SpaceViolation::P1Prime { value: v });
        }
    }
    for &a in &events {
        if let (Some(pa), Some(pc)) = (p(a), p(f.complement(a))) {
            if !close(pc, 1.0 - pa) {
                alternative.push(SpaceViolation::P2Prime {
                    event: key(a),
                    value: pa,
                    complement: pc,
                });
            }
        }
    }
    for (i, &a) in events.iter().enumerate() {
        for &b in &events[i..] {
            if let (Some(pa), Some(pb), Some(pu), Some(pi)) = (p(a), p(b), p(a | b), p(a & b)) {
                if !close(pu, pa + pb - pi) {
                    alternative.push(SpaceViolation::P3Prime {
                        left: key(a),
                        right: key(b),
                        union: pu,
                        expected: pa + pb - pi,
                    });
                }
            }
        }
    }

    SpaceReport {
        structure_ok: structure.is_empty(),
        kolmogorov_ok: kolmogorov.is_empty(),
        alternative_ok: alternative.is_empty(),
        violations: structure.into_iter().chain(kolmogorov).chain(alternative).collect(),
    }
}
