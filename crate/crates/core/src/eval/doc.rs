//! The assignment document: a JSON form of an [`Evaluation`].
//!
//! ```json
//! { "algebra": "prob-ray",
//!   "atoms": { "p": 0.8, "q": 0.4 },
//!   "policy": "table",
//!   "table": [ { "left": "p", "right": "p -> q", "value": 0.5 } ] }
//! ```
//!
//! Values are numbers, `"INF"`, table labels, or arrays for products.
//! With `"policy": "table"` pairs missing from the table use `"fallback"`
//! (default `min`); with any other policy, table entries override it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ConjunctionPolicy, EvalError, Evaluation, NodeTable};
use crate::formula::{parse, ParseError};
use crate::zoo::{algebra_by_id, ZooError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntryDoc {
    pub left: String,
    pub right: String,
    pub value: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssignmentDoc {
    pub algebra: String,
    #[serde(default)]
    pub atoms: BTreeMap<String, serde_json::Value>,
    #[serde(default = "default_policy")]
    pub policy: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableEntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
}

fn default_policy() -> String {
    "min".into()
}

#[derive(Debug, Error)]
pub enum DocError {
    #[error(transparent)]
    Algebra(#[from] ZooError),
    #[error("formula `{text}`: {err}")]
    Formula { text: String, err: ParseError },
    #[error("atom `{atom}`: value {value} is not an element of `{algebra}`")]
    BadValue {
        atom: String,
        value: String,
        algebra: String,
    },
    #[error("unknown conjunction policy `{0}` (expected min, star, product-then-min or table)")]
    UnknownPolicy(String),
    #[error("table entry `{left} & {right}` conflicts with an earlier entry for the same pair")]
    Conflict { left: String, right: String },
    #[error("policy `{0}` has no document form; materialize the evaluation first")]
    NotSerializable(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

fn simple_policy(id: &str) -> Result<ConjunctionPolicy, DocError> {
    ConjunctionPolicy::from_id(id).ok_or_else(|| DocError::UnknownPolicy(id.into()))
}

impl AssignmentDoc {
    pub fn from_json(text: &str) -> Result<AssignmentDoc, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Builds the evaluation. Symmetry conflicts in the table are rejected
    /// here; use [`AssignmentDoc::to_evaluation_lenient`] to keep them for
    /// validation.
    pub fn to_evaluation(&self) -> Result<Evaluation, DocError> {
        self.build(true)
    }

    /// Like [`AssignmentDoc::to_evaluation`], but keeps conflicting table
    /// entries and skips the unit check on atoms, so a validator can report
    /// them.
    pub fn to_evaluation_lenient(&self) -> Result<Evaluation, DocError> {
        self.build(false)
    }

    fn build(&self, strict: bool) -> Result<Evaluation, DocError> {
        let alg = algebra_by_id(&self.algebra)?;
        let ops = alg.ops();
        let value = |atom: &str, j: &serde_json::Value| {
            ops.value_from_json(j).ok_or_else(|| DocError::BadValue {
                atom: atom.into(),
                value: j.to_string(),
                algebra: alg.id().into(),
            })
        };
        let formula = |text: &str| {
            parse(text).map_err(|err| DocError::Formula {
                text: text.into(),
                err,
            })
        };

        let policy = if self.policy == "table" || !self.table.is_empty() {
            let fallback = if self.policy == "table" {
                simple_policy(self.fallback.as_deref().unwrap_or("min"))?
            } else {
                simple_policy(&self.policy)?
            };
            let mut table = NodeTable::new();
            for e in &self.table {
                let (l, r) = (formula(&e.left)?, formula(&e.right)?);
                let v = value(&format!("{} & {}", e.left, e.right), &e.value)?;
                if !table.insert(ops, &l, &r, v) && strict {
                    return Err(DocError::Conflict {
                        left: e.left.clone(),
                        right: e.right.clone(),
                    });
                }
            }
            ConjunctionPolicy::Table {
                table,
                fallback: Box::new(fallback),
            }
        } else {
            simple_policy(&self.policy)?
        };

        let mut ev = Evaluation::new(alg.clone(), policy);
        for (name, j) in &self.atoms {
            let v = value(name, j)?;
            if strict {
                ev.assign(name, v)?;
            } else {
                ev.assign_unchecked(name, v);
            }
        }
        Ok(ev)
    }

    pub fn from_evaluation(ev: &Evaluation) -> Result<AssignmentDoc, DocError> {
        let ops = ev.algebra().ops();
        let atoms = ev
            .atoms()
            .iter()
            .map(|(k, v)| (k.clone(), ops.value_to_json(v)))
            .collect();
        let (policy, table, fallback) = match ev.policy() {
            ConjunctionPolicy::Table { table, fallback } => {
                let fb = match &**fallback {
                    ConjunctionPolicy::Table { .. } | ConjunctionPolicy::Rule(_) => {
                        return Err(DocError::NotSerializable(fallback.id().into()))
                    }
                    p => p.id().to_string(),
                };
                let entries = table
                    .entries()
                    .map(|((l, r), v)| TableEntryDoc {
                        left: l.to_string(),
                        right: r.to_string(),
                        value: ops.value_to_json(v),
                    })
                    .collect();
                ("table".to_string(), entries, (fb != "min").then_some(fb))
            }
            ConjunctionPolicy::Rule(r) => return Err(DocError::NotSerializable(r.name().into())),
            p => (p.id().to_string(), Vec::new(), None),
        };
        Ok(AssignmentDoc {
            algebra: ev.algebra().id().to_string(),
            atoms,
            policy,
            table,
            fallback,
        })
    }
}
