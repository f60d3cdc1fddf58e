//! Hilbert-style proofs: axiom schemata, theories, a script checker and a
//! bounded forward search.
//!
//! The only rule is modus ponens. Formulas are compared after desugaring,
//! so `1`, `<->` and `|` may be written freely in scripts.

mod closure;
mod script;

pub use closure::{consistency_probe, derive_closure, Closure, Derivation, Origin, Probe, MAX_DEPTH, MAX_FORMULAS};
pub use script::{check_proof, Justification, LineCheck, ProofLine, ProofReport, ProofScript};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Formula, Schema, Subst};
use crate::zoo::{catalogue, AlgebraSpec};

/// Built-in schemata by id. `$A`, `$B`, `$C` are metavariables.
pub const SCHEMATA: &[(&str, &str)] = &[
    ("A1", "($A -> $B) -> (($B -> $C) -> ($A -> $C))"),
    ("A2", "$A -> $A"),
    ("A3", "($A -> ($B -> $C)) -> ($B -> ($A -> $C))"),
    ("A4", "$A & $B -> $A"),
    ("A5", "$A & $B -> $B & $A"),
    ("A6a", "$A \\/ $B -> $B \\/ $A"),
    ("A6b", "0 \\/ $A -> $A"),
    ("A7", "0 -> $A"),
    ("GFL1", "(($A -> $B) -> $C) -> ((($B -> $A) -> $C) -> $C)"),
    ("GFL2", "($A -> ($B -> $C)) -> ($A & $B -> $C)"),
    ("GFL3", "$A -> ($B -> $A)"),
    ("GFL4", "$A -> $A \\/ $B"),
    ("GFL5", "($A \\/ $B) \\/ $C <-> $A \\/ ($B \\/ $C)"),
    ("GFL6", "$A \\/ $B -> (($A -> $B) -> $B)"),
    ("GFL7", "~~$A <-> $A"),
    ("GPL1", "~~$A -> $A"),
    ("GPL2", "$A -> $A \\/ $B"),
    ("GPL3", "$A & ~$A <-> ~($A \\/ ~$A)"),
    ("FRL1", "$A -> $A \\/ $B"),
    ("FRL2", "~~$A -> $A"),
];

const UPL_AXIOMS: &[&str] = &["A1", "A2", "A3", "A4", "A5", "A6a", "A6b", "A7"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProofError {
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("schema `{schema}` needs a binding for `{var}`")]
    MissingBinding { schema: String, var: String },
    #[error("schema id `{0}` is already taken")]
    DuplicateSchema(String),
    #[error("unknown theory `{0}` (expected UPL, GFL, GPL, FRL or CUSTOM(name))")]
    UnknownTheory(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line} refers to line {target}, which does not precede it")]
    BadReference { line: usize, target: usize },
    #[error("{what} exceeds the cap of {limit}")]
    CapExceeded { what: String, limit: usize },
}

/// Looks up a built-in schema.
pub fn schema(id: &str) -> Option<Schema> {
    SCHEMATA
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, text)| Schema::parse(text).expect("built-in schemata parse"))
}

/// Instantiates a built-in schema; the result is in core form.
pub fn instantiate(schema_id: &str, bindings: &Subst) -> Result<Formula, ProofError> {
    let s = schema(schema_id).ok_or_else(|| ProofError::UnknownSchema(schema_id.into()))?;
    apply(schema_id, &s, bindings)
}

fn apply(id: &str, s: &Schema, bindings: &Subst) -> Result<Formula, ProofError> {
    s.instantiate(bindings)
        .map(|f| f.desugar())
        .map_err(|var| ProofError::MissingBinding {
            schema: id.into(),
            var,
        })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoryId {
    Upl,
    Gfl,
    Gpl,
    Frl,
    Custom(String),
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryId::Upl => f.write_str("UPL"),
            TheoryId::Gfl => f.write_str("GFL"),
            TheoryId::Gpl => f.write_str("GPL"),
            TheoryId::Frl => f.write_str("FRL"),
            TheoryId::Custom(n) => write!(f, "CUSTOM({n})"),
        }
    }
}

impl FromStr for TheoryId {
    type Err = ProofError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.to_ascii_uppercase().as_str() {
            "UPL" => Ok(TheoryId::Upl),
            "GFL" => Ok(TheoryId::Gfl),
            "GPL" => Ok(TheoryId::Gpl),
            "FRL" => Ok(TheoryId::Frl),
            _ => s
                .strip_prefix("CUSTOM(")
                .and_then(|r| r.strip_suffix(')'))
                .filter(|n| !n.trim().is_empty())
                .map(|n| TheoryId::Custom(n.trim().to_string()))
                .ok_or_else(|| ProofError::UnknownTheory(s.into())),
        }
    }
}

/// Axiom schemata plus the algebras used to sanity-check its theorems.
#[derive(Clone, Debug)]
pub struct Theory {
    id: TheoryId,
    axioms: Vec<(String, Schema)>,
    reference: Vec<AlgebraSpec>,
}

impl Theory {
    /// A named theory. `Custom` starts from UPL with no extra schemata.
    pub fn named(id: TheoryId) -> Theory {
        let (extra, reference): (&[&str], Vec<AlgebraSpec>) = match &id {
            TheoryId::Upl | TheoryId::Custom(_) => (&[], catalogue()),
            TheoryId::Gfl => (
                &["GFL1", "GFL2", "GFL3", "GFL4", "GFL5", "GFL6", "GFL7"],
                vec![AlgebraSpec::GodelUnit],
            ),
            TheoryId::Gpl => (&["GPL1", "GPL2", "GPL3"], vec![AlgebraSpec::ProbRay]),
            TheoryId::Frl => (&["FRL1", "FRL2"], vec![AlgebraSpec::godel_x_prob_ray()]),
        };
        let axioms = UPL_AXIOMS
            .iter()
            .chain(extra)
            .map(|k| (k.to_string(), schema(k).expect("registered")))
            .collect();
        Theory {
            id,
            axioms,
            reference,
        }
    }

    pub fn upl() -> Theory {
        Theory::named(TheoryId::Upl)
    }

    pub fn gfl() -> Theory {
        Theory::named(TheoryId::Gfl)
    }

    pub fn gpl() -> Theory {
        Theory::named(TheoryId::Gpl)
    }

    pub fn frl() -> Theory {
        Theory::named(TheoryId::Frl)
    }

    /// A custom theory extending `base`; schemata are added with
    /// [`Theory::add_axiom`].
    pub fn custom(name: &str, base: &Theory) -> Theory {
        Theory {
            id: TheoryId::Custom(name.into()),
            axioms: base.axioms.clone(),
            reference: base.reference.clone(),
        }
    }

    pub fn add_axiom(&mut self, id: &str, schema: Schema) -> Result<(), ProofError> {
        if self.schema(id).is_some() {
            return Err(ProofError::DuplicateSchema(id.into()));
        }
        self.axioms.push((id.into(), schema));
        Ok(())
    }

    pub fn id(&self) -> &TheoryId {
        &self.id
    }

    pub fn axioms(&self) -> &[(String, Schema)] {
        &self.axioms
    }

    pub fn schema(&self, id: &str) -> Option<&Schema> {
        self.axioms.iter().find(|(k, _)| k == id).map(|(_, s)| s)
    }

    /// Algebras on which every theorem should be a tautology.
    pub fn reference_algebras(&self) -> &[AlgebraSpec] {
        &self.reference
    }

    pub fn instantiate(&self, id: &str, bindings: &Subst) -> Result<Formula, ProofError> {
        let s = self
            .schema(id)
            .ok_or_else(|| ProofError::UnknownSchema(id.into()))?;
        apply(id, s, bindings)
    }
}
