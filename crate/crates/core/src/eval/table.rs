use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Algebra, Value};
use crate::formula::Formula;

/// Canonical unordered pair of core formulas.
pub type PairKey = (Formula, Formula);

/// Orders the operands of `l & r` so that `r & l` maps to the same key.
pub fn pair_key(l: &Formula, r: &Formula) -> PairKey {
    let (l, r) = (l.desugar(), r.desugar());
    if l <= r {
        (l, r)
    } else {
        (r, l)
    }
}

/// Values of `&`-nodes, keyed by unordered operand pairs.
///
/// Entries are stored once per unordered pair. Inserting `(ψ, φ)` with a
/// value different from an existing `(φ, ψ)` entry records a symmetry
/// conflict instead of overwriting.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NodeTable {
    entries: BTreeMap<PairKey, Value>,
    conflicts: BTreeMap<PairKey, Vec<Value>>,
}

impl NodeTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `e(l & r) = value`. Returns `false` on a symmetry conflict.
    pub fn insert(&mut self, alg: &dyn Algebra, l: &Formula, r: &Formula, value: Value) -> bool {
        let key = pair_key(l, r);
        match self.entries.get(&key) {
            Some(old) if !alg.eq(old, &value) => {
                let seen = self
                    .conflicts
                    .entry(key)
                    .or_insert_with(|| vec![old.clone()]);
                seen.push(value);
                false
            }
            Some(_) => true,
            None => {
                self.entries.insert(key, value);
                true
            }
        }
    }

    pub(crate) fn insert_key(&mut self, key: PairKey, value: Value) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, l: &Formula, r: &Formula) -> Option<&Value> {
        self.entries.get(&pair_key(l, r))
    }

    pub(crate) fn get_key(&self, key: &PairKey) -> Option<&Value> {
        self.entries.get(key)
    }

    /// The disagreeing values recorded for a pair, if any.
    pub fn conflict(&self, l: &Formula, r: &Formula) -> Option<&[Value]> {
        self.conflicts.get(&pair_key(l, r)).map(Vec::as_slice)
    }

    pub(crate) fn conflict_key(&self, key: &PairKey) -> Option<&[Value]> {
        self.conflicts.get(key).map(Vec::as_slice)
    }

    pub fn conflicts(&self) -> impl Iterator<Item = (&PairKey, &[Value])> {
        self.conflicts.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&PairKey, &Value)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> BTreeSet<PairKey> {
        self.entries.keys().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::zoo::algebra_by_id;

    #[test]
    fn keys_are_unordered_and_conflicts_recorded() {
        let g = algebra_by_id("godel-unit").unwrap();
        let (p, q) = (parse("p").unwrap(), parse("q").unwrap());
        let mut t = NodeTable::new();
        assert!(t.insert(g.ops(), &p, &q, Value::num(0.3)));
        assert_eq!(t.get(&q, &p), Some(&Value::num(0.3)));
        assert!(t.insert(g.ops(), &q, &p, Value::num(0.3)));
        assert!(!t.insert(g.ops(), &q, &p, Value::num(0.2)));
        assert_eq!(t.conflict(&p, &q).unwrap().len(), 2);
        assert_eq!(t.len(), 1);
    }
}
