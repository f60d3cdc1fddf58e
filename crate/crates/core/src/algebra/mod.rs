//! The UL-algebra contract.
//!
//! An algebra is a poset `(L, ≤)` with least element `0`, a commutative
//! monoid `(L, ∗, 1)` that restricts to the unit sub-interval
//! `{a | a ≤ 1}`, a monotone commutative monoid `(L, ⊕, 0)` in which
//! `max{c | a ⊕ c = b}` exists whenever `a ≤ b`, an antitone negation with
//! `¬0 = 1` and `¬1 = 0`, and a residuum `a → x` right adjoint to `a ∗ _`.
//!
//! Concrete instances live in [`crate::zoo`]. This module defines the
//! [`Algebra`] trait that they implement, the carrier values, and the
//! [`AlgebraHandle`] through which elements are checked for ownership.

mod laws;

pub use laws::{check_laws, recheck, Law, LawOutcome, LawReport};

use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use thiserror::Error;

/// Absolute tolerance used by every numeric comparison.
pub const EPS: f64 = 1e-9;

/// An extended nonnegative real: a finite value `>= 0` or `INF`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ext {
    Fin(f64),
    Inf,
}

impl Ext {
    pub const ZERO: Ext = Ext::Fin(0.0);
    pub const ONE: Ext = Ext::Fin(1.0);

    /// Builds a finite value, rejecting negatives, NaN and infinities.
    ///
    /// Values in `[-EPS, 0)` are snapped to zero; they arise from
    /// subtraction round-off and are not meaningful.
    pub fn finite(v: f64) -> Option<Ext> {
        if !v.is_finite() {
            None
        } else if v >= 0.0 {
            Some(Ext::Fin(v))
        } else if v >= -EPS {
            Some(Ext::Fin(0.0))
        } else {
            None
        }
    }

    /// Clamps round-off negatives to zero. Used after subtraction.
    pub(crate) fn clamp(v: f64) -> Ext {
        Ext::Fin(if v < 0.0 { 0.0 } else { v })
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Ext::Inf)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Ext::Fin(v) => v,
            Ext::Inf => f64::INFINITY,
        }
    }

    /// Order with tolerance; `INF` compares exactly.
    pub fn leq(self, other: Ext) -> bool {
        match (self, other) {
            (_, Ext::Inf) => true,
            (Ext::Inf, Ext::Fin(_)) => false,
            (Ext::Fin(a), Ext::Fin(b)) => a <= b + EPS,
        }
    }

    pub fn approx_eq(self, other: Ext) -> bool {
        match (self, other) {
            (Ext::Inf, Ext::Inf) => true,
            (Ext::Fin(a), Ext::Fin(b)) => (a - b).abs() <= EPS,
            _ => false,
        }
    }

    pub fn min(self, other: Ext) -> Ext {
        if self.as_f64() <= other.as_f64() {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Ext) -> Ext {
        if self.as_f64() >= other.as_f64() {
            self
        } else {
            other
        }
    }
}

/// Multiplication with `0 · INF = 0` and `a · INF = INF` for `a != 0`.
impl std::ops::Mul for Ext {
    type Output = Ext;

    fn mul(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a * b),
            (Ext::Fin(a), Ext::Inf) | (Ext::Inf, Ext::Fin(a)) => {
                if a == 0.0 {
                    Ext::ZERO
                } else {
                    Ext::Inf
                }
            }
            (Ext::Inf, Ext::Inf) => Ext::Inf,
        }
    }
}

/// Addition with `INF` absorbing.
impl std::ops::Add for Ext {
    type Output = Ext;

    fn add(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(v) => write!(f, "{}", v),
            Ext::Inf => f.write_str("INF"),
        }
    }
}

/// A raw carrier value. Which shape is valid depends on the owning algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(Ext),
    /// Index into a finite carrier.
    Idx(usize),
    /// Pointwise tuple for product algebras.
    Tuple(Box<[Value]>),
}

impl Value {
    pub fn num(v: f64) -> Value {
        Value::Num(Ext::finite(v).expect("nonnegative finite value"))
    }

    pub const INF: Value = Value::Num(Ext::Inf);

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Tuple(vec![a, b].into_boxed_slice())
    }

    pub fn as_ext(&self) -> Option<Ext> {
        match self {
            Value::Num(e) => Some(*e),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        self.as_ext().map(Ext::as_f64)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(e) => e.fmt(f),
            Value::Idx(i) => write!(f, "#{}", i),
            Value::Tuple(items) => {
                f.write_str("(")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    v.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Algebra-free encoding: finite numbers, `"INF"`, table indices as
/// integers, tuples as arrays. Use [`Algebra::value_to_json`] for labels.
impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Num(Ext::Fin(x)) => s.serialize_f64(*x),
            Value::Num(Ext::Inf) => s.serialize_str("INF"),
            Value::Idx(i) => s.serialize_u64(*i as u64),
            Value::Tuple(items) => s.collect_seq(items.iter()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("element belongs to algebra `{found}`, expected `{expected}`")]
    Mismatch { expected: String, found: String },
    #[error("value {0} is not in the carrier of `{1}`")]
    NotInCarrier(String, String),
    #[error("max_solution precondition violated: {a} is not below {b}")]
    NotBelow { a: String, b: String },
    #[error("no greatest c with {a} ⊕ c = {b}")]
    NoSolution { a: String, b: String },
    #[error("no meet exists for {0} and {1}")]
    NoMeet(String, String),
}

/// The operation table of a UL-algebra.
///
/// Implementations must be pure. Arguments are assumed to belong to the
/// carrier; [`AlgebraHandle`] performs that check for callers outside the
/// crate.
pub trait Algebra: Send + Sync {
    /// Stable identifier, also used as the ownership tag of elements.
    fn id(&self) -> &str;

    fn contains(&self, v: &Value) -> bool;
    fn leq(&self, a: &Value, b: &Value) -> bool;
    fn star(&self, a: &Value, b: &Value) -> Value;
    fn oplus(&self, a: &Value, b: &Value) -> Value;
    fn neg(&self, a: &Value) -> Value;
    /// Greatest `y` with `a ∗ y ≤ x`.
    fn residuum(&self, a: &Value, x: &Value) -> Value;
    /// Greatest `c` with `a ⊕ c = b`; requires `a ≤ b`.
    fn max_solution(&self, a: &Value, b: &Value) -> Result<Value, AlgebraError>;
    fn zero(&self) -> Value;
    fn one(&self) -> Value;

    /// Greatest lower bound, when it exists.
    fn meet(&self, a: &Value, b: &Value) -> Option<Value>;

    /// Draws an arbitrary carrier element.
    fn sample(&self, rng: &mut dyn RngCore) -> Value;
    /// Draws an element of the unit sub-interval `{a | a ≤ 1}`.
    fn sample_unit(&self, rng: &mut dyn RngCore) -> Value;
    /// Draws an element `c` with `c ≤ bound`.
    fn sample_below(&self, bound: &Value, rng: &mut dyn RngCore) -> Value;

    /// Every carrier element, when the carrier is finite.
    fn enumerate(&self) -> Option<Vec<Value>> {
        None
    }

    /// Grid points of the unit sub-interval at the given step, in
    /// deterministic order. Anchor points come first.
    fn unit_grid(&self, step: f64) -> Vec<Value>;

    /// A handful of boundary elements used to seed law checks.
    fn anchors(&self) -> Vec<Value>;

    fn eq(&self, a: &Value, b: &Value) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    /// Renders a value for humans, e.g. using table labels.
    fn display(&self, v: &Value) -> String {
        v.to_string()
    }

    /// Document encoding: numbers, the string `"INF"`, table labels, or
    /// arrays for products.
    fn value_to_json(&self, v: &Value) -> serde_json::Value {
        match v {
            Value::Num(Ext::Fin(x)) => serde_json::json!(x),
            Value::Num(Ext::Inf) => serde_json::Value::String("INF".into()),
            other => serde_json::Value::String(self.display(other)),
        }
    }

    fn value_from_json(&self, j: &serde_json::Value) -> Option<Value> {
        let v = match j {
            serde_json::Value::Number(n) => Value::Num(Ext::finite(n.as_f64()?)?),
            serde_json::Value::String(s) if s.eq_ignore_ascii_case("inf") => Value::INF,
            _ => return None,
        };
        self.contains(&v).then_some(v)
    }
}

/// A value tagged with the identity of its algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    algebra: Arc<str>,
    value: Value,
}

impl Element {
    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    pub fn algebra_id(&self) -> &str {
        &self.algebra
    }
}

/// Shared, immutable access to one algebra instance.
#[derive(Clone)]
pub struct AlgebraHandle {
    id: Arc<str>,
    ops: Arc<dyn Algebra>,
}

impl fmt::Debug for AlgebraHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraHandle").field("id", &self.id).finish()
    }
}

impl AlgebraHandle {
    pub fn new(ops: Arc<dyn Algebra>) -> Self {
        AlgebraHandle {
            id: Arc::from(ops.id()),
            ops,
        }
    }

    pub fn from_algebra<A: Algebra + 'static>(a: A) -> Self {
        Self::new(Arc::new(a))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// The raw operation table. Skips ownership checks.
    pub fn ops(&self) -> &dyn Algebra {
        &*self.ops
    }

    pub fn element(&self, value: Value) -> Result<Element, AlgebraError> {
        if !self.ops.contains(&value) {
            return Err(AlgebraError::NotInCarrier(
                self.ops.display(&value),
                self.id.to_string(),
            ));
        }
        Ok(self.wrap(value))
    }

    pub(crate) fn wrap(&self, value: Value) -> Element {
        Element {
            algebra: self.id.clone(),
            value,
        }
    }

    fn own<'a>(&self, e: &'a Element) -> Result<&'a Value, AlgebraError> {
        if *e.algebra != *self.id {
            return Err(AlgebraError::Mismatch {
                expected: self.id.to_string(),
                found: e.algebra.to_string(),
            });
        }
        Ok(&e.value)
    }

    pub fn zero(&self) -> Element {
        self.wrap(self.ops.zero())
    }

    pub fn one(&self) -> Element {
        self.wrap(self.ops.one())
    }

    pub fn leq(&self, a: &Element, b: &Element) -> Result<bool, AlgebraError> {
        Ok(self.ops.leq(self.own(a)?, self.own(b)?))
    }

    pub fn eq(&self, a: &Element, b: &Element) -> Result<bool, AlgebraError> {
        Ok(self.ops.eq(self.own(a)?, self.own(b)?))
    }

    pub fn star(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        Ok(self.wrap(self.ops.star(self.own(a)?, self.own(b)?)))
    }

    pub fn oplus(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        Ok(self.wrap(self.ops.oplus(self.own(a)?, self.own(b)?)))
    }

    pub fn neg(&self, a: &Element) -> Result<Element, AlgebraError> {
        Ok(self.wrap(self.ops.neg(self.own(a)?)))
    }

    pub fn residuum(&self, a: &Element, x: &Element) -> Result<Element, AlgebraError> {
        Ok(self.wrap(self.ops.residuum(self.own(a)?, self.own(x)?)))
    }

    pub fn max_solution(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        let v = self.ops.max_solution(self.own(a)?, self.own(b)?)?;
        Ok(self.wrap(v))
    }

    /// Whether `a` lies in the unit sub-interval `{a | a ≤ 1}`.
    pub fn in_unit(&self, a: &Element) -> Result<bool, AlgebraError> {
        Ok(self.ops.leq(self.own(a)?, &self.ops.one()))
    }

    pub fn display(&self, v: &Value) -> String {
        self.ops.display(v)
    }
}

/// Shortest-ish rendering of a float for text output: rounds away
/// accumulated round-off so `0.8 * 0.9` prints as `0.72`.
pub fn fmt_num(v: f64) -> String {
    if v.is_infinite() {
        return "INF".into();
    }
    let r = (v * 1e12).round() / 1e12;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{}", r)
}
