//! Finite algebras given by explicit operation tables.
//!
//! Table document (JSON):
//!
//! ```json
//! { "name": "heyting3", "size": 3, "labels": ["0", "h", "1"],
//!   "leq":   [[true, true, true], [false, true, true], [false, false, true]],
//!   "star":  [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
//!   "oplus": [[0, 1, 2], [1, 1, 2], [2, 2, 2]],
//!   "neg":   [2, 0, 0],
//!   "zero": 0, "one": 2 }
//! ```
//!
//! The residuum and `max{c | a ⊕ c = b}` are found by search over the
//! carrier; a missing residuum rejects the table.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableSpec {
    pub name: String,
    pub size: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub star: Vec<Vec<usize>>,
    pub oplus: Vec<Vec<usize>>,
    pub neg: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("table `{0}`: {1}")]
    Malformed(String, String),
    #[error("table `{name}`: no greatest y with {a} ∗ y ≤ {x}")]
    NoResiduum { name: String, a: String, x: String },
}

impl TableSpec {
    /// The two-element Boolean lattice.
    pub fn boolean2() -> TableSpec {
        TableSpec {
            name: "boolean2".into(),
            size: 2,
            labels: vec!["0".into(), "1".into()],
            leq: vec![vec![true, true], vec![false, true]],
            star: vec![vec![0, 0], vec![0, 1]],
            oplus: vec![vec![0, 1], vec![1, 1]],
            neg: vec![1, 0],
            zero: 0,
            one: 1,
        }
    }

    /// The three-element Heyting chain `0 < h < 1` with `¬a = a → 0`.
    pub fn heyting3() -> TableSpec {
        TableSpec {
            name: "heyting3".into(),
            size: 3,
            labels: vec!["0".into(), "h".into(), "1".into()],
            leq: vec![
                vec![true, true, true],
                vec![false, true, true],
                vec![false, false, true],
            ],
            star: vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]],
            oplus: vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 2]],
            neg: vec![2, 0, 0],
            zero: 0,
            one: 2,
        }
    }

    fn label(&self, i: usize) -> String {
        self.labels.get(i).cloned().unwrap_or_else(|| i.to_string())
    }

    fn check_shape(&self) -> Result<(), TableError> {
        let n = self.size;
        let bad = |msg: String| Err(TableError::Malformed(self.name.clone(), msg));
        if n == 0 {
            return bad("empty carrier".into());
        }
        if !self.labels.is_empty() && self.labels.len() != n {
            return bad(format!("expected {n} labels, got {}", self.labels.len()));
        }
        let square_bool = self.leq.len() == n && self.leq.iter().all(|r| r.len() == n);
        if !square_bool {
            return bad("leq must be an n×n boolean table".into());
        }
        for (name, t) in [("star", &self.star), ("oplus", &self.oplus)] {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return bad(format!("{name} must be an n×n table"));
            }
            if t.iter().flatten().any(|&v| v >= n) {
                return bad(format!("{name} has an entry outside 0..{n}"));
            }
        }
        if self.neg.len() != n || self.neg.iter().any(|&v| v >= n) {
            return bad("neg must be an n-vector of indices".into());
        }
        if self.zero >= n || self.one >= n {
            return bad("zero/one index out of range".into());
        }
        Ok(())
    }
}

/// A finite algebra with derived residuum, `max_solution` and meet tables.
#[derive(Clone, Debug)]
pub struct Table {
    id: String,
    spec: TableSpec,
    residuum: Vec<Vec<usize>>,
    max_solution: Vec<Vec<Option<usize>>>,
    meet: Vec<Vec<Option<usize>>>,
}

fn idx(v: &Value) -> usize {
    match v {
        Value::Idx(i) => *i,
        other => panic!("table algebra given foreign value {other}"),
    }
}

impl Table {
    pub fn new(id: impl Into<String>, spec: TableSpec) -> Result<Table, TableError> {
        spec.check_shape()?;
        let n = spec.size;
        let leq = |a: usize, b: usize| spec.leq[a][b];
        // Greatest element of a subset, if it has one.
        let greatest = |set: &[usize]| -> Option<usize> {
            set.iter().copied().find(|&g| set.iter().all(|&s| leq(s, g)))
        };

        let mut residuum = vec![vec![0; n]; n];
        for (a, row) in residuum.iter_mut().enumerate() {
            for (x, cell) in row.iter_mut().enumerate() {
                let below: Vec<usize> = (0..n).filter(|&y| leq(spec.star[a][y], x)).collect();
                *cell = greatest(&below).ok_or_else(|| TableError::NoResiduum {
                    name: spec.name.clone(),
                    a: spec.label(a),
                    x: spec.label(x),
                })?;
            }
        }

        let mut max_solution = vec![vec![None; n]; n];
        let mut meet = vec![vec![None; n]; n];
        for a in 0..n {
            for b in 0..n {
                let sols: Vec<usize> = (0..n).filter(|&c| spec.oplus[a][c] == b).collect();
                max_solution[a][b] = greatest(&sols);
                let lower: Vec<usize> = (0..n).filter(|&c| leq(c, a) && leq(c, b)).collect();
                meet[a][b] = greatest(&lower);
            }
        }

        Ok(Table {
            id: id.into(),
            spec,
            residuum,
            max_solution,
            meet,
        })
    }

    pub fn spec(&self) -> &TableSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.spec.size
    }
}

impl Algebra for Table {
    fn id(&self) -> &str {
        &self.id
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Idx(i) if *i < self.spec.size)
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        self.spec.leq[idx(a)][idx(b)]
    }

    fn eq(&self, a: &Value, b: &Value) -> bool {
        idx(a) == idx(b)
    }

    fn star(&self, a: &Value, b: &Value) -> Value {
        Value::Idx(self.spec.star[idx(a)][idx(b)])
    }

    fn oplus(&self, a: &Value, b: &Value) -> Value {
        Value::Idx(self.spec.oplus[idx(a)][idx(b)])
    }

    fn neg(&self, a: &Value) -> Value {
        Value::Idx(self.spec.neg[idx(a)])
    }

    fn residuum(&self, a: &Value, x: &Value) -> Value {
        Value::Idx(self.residuum[idx(a)][idx(x)])
    }

    fn max_solution(&self, a: &Value, b: &Value) -> Result<Value, AlgebraError> {
        if !self.leq(a, b) {
            return Err(AlgebraError::NotBelow {
                a: self.display(a),
                b: self.display(b),
            });
        }
        self.max_solution[idx(a)][idx(b)]
            .map(Value::Idx)
            .ok_or_else(|| AlgebraError::NoSolution {
                a: self.display(a),
                b: self.display(b),
            })
    }

    fn zero(&self) -> Value {
        Value::Idx(self.spec.zero)
    }

    fn one(&self) -> Value {
        Value::Idx(self.spec.one)
    }

    fn meet(&self, a: &Value, b: &Value) -> Option<Value> {
        self.meet[idx(a)][idx(b)].map(Value::Idx)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Idx(rng.gen_range(0..self.spec.size))
    }

    fn sample_unit(&self, rng: &mut dyn RngCore) -> Value {
        let unit = self.unit_grid(0.0);
        unit[rng.gen_range(0..unit.len())].clone()
    }

    fn sample_below(&self, bound: &Value, rng: &mut dyn RngCore) -> Value {
        let b = idx(bound);
        let below: Vec<usize> = (0..self.spec.size).filter(|&c| self.spec.leq[c][b]).collect();
        Value::Idx(below[rng.gen_range(0..below.len())])
    }

    fn enumerate(&self) -> Option<Vec<Value>> {
        Some((0..self.spec.size).map(Value::Idx).collect())
    }

    fn unit_grid(&self, _step: f64) -> Vec<Value> {
        let one = self.spec.one;
        (0..self.spec.size)
            .filter(|&i| self.spec.leq[i][one])
            .map(Value::Idx)
            .collect()
    }

    fn anchors(&self) -> Vec<Value> {
        self.enumerate().unwrap_or_default()
    }

    fn display(&self, v: &Value) -> String {
        self.spec.label(idx(v))
    }

    fn value_to_json(&self, v: &Value) -> serde_json::Value {
        serde_json::Value::String(self.display(v))
    }

    fn value_from_json(&self, j: &serde_json::Value) -> Option<Value> {
        let i = match j {
            serde_json::Value::String(s) => match self.spec.labels.iter().position(|l| l == s) {
                Some(i) => i,
                None => s.parse().ok()?,
            },
            serde_json::Value::Number(n) if self.spec.labels.is_empty() => n.as_u64()? as usize,
            serde_json::Value::Number(n) => {
                let s = n.to_string();
                self.spec.labels.iter().position(|l| *l == s)?
            }
            _ => return None,
        };
        (i < self.spec.size).then_some(Value::Idx(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heyting_residuum_is_relative_pseudocomplement() {
        let t = Table::new("heyting3", TableSpec::heyting3()).unwrap();
        let (z, h, o) = (Value::Idx(0), Value::Idx(1), Value::Idx(2));
        assert_eq!(t.residuum(&h, &z), z);
        assert_eq!(t.residuum(&h, &h), o);
        assert_eq!(t.residuum(&o, &h), h);
        assert_eq!(t.meet(&h, &o), Some(h.clone()));
        assert_eq!(t.max_solution(&h, &o).unwrap(), o);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let mut spec = TableSpec::boolean2();
        spec.star[0][1] = 7;
        assert!(matches!(
            Table::new("x", spec),
            Err(TableError::Malformed(..))
        ));
    }

    #[test]
    fn missing_residuum_is_rejected() {
        // Diamond 0 < a, b < 1 with a ∗ a = a ∗ b = 0: both a and b solve
        // a ∗ y ≤ 0, and they are incomparable.
        let spec = TableSpec {
            name: "broken".into(),
            size: 4,
            labels: vec!["0".into(), "a".into(), "b".into(), "1".into()],
            leq: vec![
                vec![true, true, true, true],
                vec![false, true, false, true],
                vec![false, false, true, true],
                vec![false, false, false, true],
            ],
            star: vec![
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, 2, 2],
                vec![0, 1, 2, 3],
            ],
            oplus: vec![
                vec![0, 1, 2, 3],
                vec![1, 1, 3, 3],
                vec![2, 3, 2, 3],
                vec![3, 3, 3, 3],
            ],
            neg: vec![3, 2, 1, 0],
            zero: 0,
            one: 3,
        };
        assert!(matches!(
            Table::new("broken", spec),
            Err(TableError::NoResiduum { .. })
        ));
    }
}
