//! Formulas flattened into a node array for repeated evaluation.
//!
//! Distinct subformulas become one node each, children first, so a pass
//! over the array evaluates every subformula once. `&` and `∨` nodes refer
//! to a shared pair index, which is what conjunction choices are keyed by.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{pair_key_of_core, ConjunctionPolicy, EvalError, PairKey, ViolationKind};
use crate::algebra::{Algebra, Value};
use crate::formula::Formula;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Node {
    Atom(usize),
    False,
    Not(usize),
    Implies(usize, usize),
    /// Operands in pair-key order.
    And(usize, usize, usize),
    Or(usize, usize, usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub nodes: Vec<Node>,
    pub pairs: Vec<PairKey>,
    pub atoms: Vec<Arc<str>>,
}

/// Supplies `&` values by pair index.
pub(crate) trait AndChooser {
    fn choose(
        &mut self,
        alg: &dyn Algebra,
        pairs: &[PairKey],
        pair: usize,
        x: &Value,
        y: &Value,
    ) -> Result<Value, EvalError>;
}

impl Compiled {
    /// Compiles a formula; sugar is expanded first.
    pub fn new(f: &Formula) -> Compiled {
        let f = f.desugar();
        let mut c = Compiled {
            nodes: Vec::new(),
            pairs: Vec::new(),
            atoms: Vec::new(),
        };
        let atom_ix: BTreeMap<Arc<str>, usize> = f
            .atoms()
            .into_iter()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        c.atoms = atom_ix.keys().cloned().collect();
        let mut seen: BTreeMap<Formula, usize> = BTreeMap::new();
        let mut pair_ix: BTreeMap<PairKey, usize> = BTreeMap::new();
        c.add(&f, &atom_ix, &mut seen, &mut pair_ix);
        c
    }

    fn add(
        &mut self,
        f: &Formula,
        atom_ix: &BTreeMap<Arc<str>, usize>,
        seen: &mut BTreeMap<Formula, usize>,
        pair_ix: &mut BTreeMap<PairKey, usize>,
    ) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let node = match f {
            Formula::Atom(n) => Node::Atom(atom_ix[n]),
            Formula::False => Node::False,
            Formula::Not(a) => Node::Not(self.add(a, atom_ix, seen, pair_ix)),
            Formula::Implies(a, b) => {
                let (a, b) = (
                    self.add(a, atom_ix, seen, pair_ix),
                    self.add(b, atom_ix, seen, pair_ix),
                );
                Node::Implies(a, b)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let key = pair_key_of_core(a, b);
                let l = self.add(&key.0, atom_ix, seen, pair_ix);
                let r = self.add(&key.1, atom_ix, seen, pair_ix);
                let next = self.pairs.len();
                let p = *pair_ix.entry(key.clone()).or_insert(next);
                if p == next {
                    self.pairs.push(key);
                }
                if matches!(f, Formula::And(..)) {
                    Node::And(l, r, p)
                } else {
                    Node::Or(l, r, p)
                }
            }
            Formula::True | Formula::Iff(..) | Formula::Cond(..) => {
                unreachable!("compiled formulas are desugared")
            }
        };
        self.nodes.push(node);
        let i = self.nodes.len() - 1;
        seen.insert(f.clone(), i);
        i
    }

    /// Evaluates every node; the last entry is the formula's value.
    pub fn run(
        &self,
        alg: &dyn Algebra,
        atoms: &[Value],
        ch: &mut dyn AndChooser,
        out: &mut Vec<Value>,
    ) -> Result<(), EvalError> {
        out.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Atom(i) => atoms[i].clone(),
                Node::False => alg.zero(),
                Node::Not(a) => alg.neg(&out[a]),
                Node::Implies(a, b) => alg.residuum(&out[a], &out[b]),
                Node::And(a, b, p) => ch.choose(alg, &self.pairs, p, &out[a], &out[b])?,
                Node::Or(a, b, p) => {
                    let c = ch.choose(alg, &self.pairs, p, &out[a], &out[b])?;
                    disjunction(alg, &self.pairs[p], &out[a], &out[b], &c)?
                }
            };
            out.push(v);
        }
        Ok(())
    }

    pub fn value(
        &self,
        alg: &dyn Algebra,
        atoms: &[Value],
        ch: &mut dyn AndChooser,
    ) -> Result<Value, EvalError> {
        let mut out = Vec::with_capacity(self.nodes.len());
        self.run(alg, atoms, ch, &mut out)?;
        Ok(out.pop().expect("nonempty formula"))
    }
}

pub(crate) fn node_text(key: &PairKey) -> String {
    Formula::and(key.0.clone(), key.1.clone()).to_string()
}

pub(crate) fn describe(alg: &dyn Algebra, x: &Value, y: &Value, c: &Value) -> String {
    format!(
        "x = {}, y = {}, c = {}",
        alg.display(x),
        alg.display(y),
        alg.display(c)
    )
}

pub(crate) fn disjunction(
    alg: &dyn Algebra,
    key: &PairKey,
    x: &Value,
    y: &Value,
    c: &Value,
) -> Result<Value, EvalError> {
    let node = || Formula::or(key.0.clone(), key.1.clone()).to_string();
    let s = alg.oplus(x, y);
    if !alg.leq(c, &s) {
        return Err(EvalError::Disjunction {
            node: node(),
            kind: ViolationKind::OrBound,
            detail: describe(alg, x, y, c),
        });
    }
    alg.max_solution(c, &s).map_err(|e| EvalError::Disjunction {
        node: node(),
        kind: ViolationKind::OrNoSolution,
        detail: e.to_string(),
    })
}

/// Applies a fixed policy and rejects values that break the `&` clauses.
pub(crate) struct PolicyChooser<'a>(pub &'a ConjunctionPolicy);

impl AndChooser for PolicyChooser<'_> {
    fn choose(
        &mut self,
        alg: &dyn Algebra,
        pairs: &[PairKey],
        pair: usize,
        x: &Value,
        y: &Value,
    ) -> Result<Value, EvalError> {
        let key = &pairs[pair];
        let err = |kind, detail| EvalError::Policy {
            node: node_text(key),
            kind,
            detail,
        };
        let raw = self.0.raw(alg, key, x, y).map_err(|k| err(k, String::new()))?;
        if let Some(vals) = raw.conflict {
            let vs: Vec<String> = vals.iter().map(|v| alg.display(v)).collect();
            return Err(err(ViolationKind::Symmetry, format!("values {}", vs.join(" vs "))));
        }
        if let Some(kind) = super::check_and(alg, x, y, &raw.value) {
            return Err(err(kind, describe(alg, x, y, &raw.value)));
        }
        Ok(raw.value)
    }
}

/// Wraps another chooser and keeps every value it hands out.
pub(crate) struct Recording<'a> {
    pub inner: &'a mut dyn AndChooser,
    pub seen: BTreeMap<usize, Value>,
}

impl AndChooser for Recording<'_> {
    fn choose(
        &mut self,
        alg: &dyn Algebra,
        pairs: &[PairKey],
        pair: usize,
        x: &Value,
        y: &Value,
    ) -> Result<Value, EvalError> {
        let v = self.inner.choose(alg, pairs, pair, x, y)?;
        self.seen.insert(pair, v.clone());
        Ok(v)
    }
}
