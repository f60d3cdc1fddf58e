use std::collections::BTreeMap;
use std::fmt;

use super::parse::parse_meta;
use super::{Formula, ParseError};

/// Metavariable bindings, keyed by `$NAME`.
pub type Subst = BTreeMap<String, Formula>;

/// A formula whose `$NAME` atoms are metavariables. Other atoms are
/// literal and only match themselves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Schema {
    pattern: Formula,
}

pub fn is_meta(name: &str) -> bool {
    name.starts_with('$')
}

impl Schema {
    pub fn parse(text: &str) -> Result<Schema, ParseError> {
        Ok(Schema {
            pattern: parse_meta(text)?,
        })
    }

    /// Wraps a formula; `$NAME` atoms in it act as metavariables.
    pub fn from_formula(pattern: Formula) -> Schema {
        Schema { pattern }
    }

    pub fn pattern(&self) -> &Formula {
        &self.pattern
    }

    pub fn metavars(&self) -> Vec<String> {
        self.pattern
            .atoms()
            .into_iter()
            .filter(|a| is_meta(a))
            .map(|a| a.to_string())
            .collect()
    }

    /// Substitutes every metavariable. Fails naming the first unbound one.
    pub fn instantiate(&self, subst: &Subst) -> Result<Formula, String> {
        if let Some(missing) = self.metavars().into_iter().find(|m| !subst.contains_key(m)) {
            return Err(missing);
        }
        Ok(self
            .pattern
            .map_atoms(&|a| if is_meta(a) { subst.get(a).cloned() } else { None }))
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.pattern.fmt(f)
    }
}

fn bind(pat: &Formula, f: &Formula, s: &mut Subst) -> bool {
    use Formula::*;
    match (pat, f) {
        (Atom(m), _) if is_meta(m) => match s.get(&**m) {
            Some(bound) => bound == f,
            None => {
                s.insert(m.to_string(), f.clone());
                true
            }
        },
        (Atom(a), Atom(b)) => a == b,
        (False, False) | (True, True) => true,
        (Not(a), Not(b)) => bind(a, b, s),
        (And(a1, b1), And(a2, b2))
        | (Or(a1, b1), Or(a2, b2))
        | (Implies(a1, b1), Implies(a2, b2))
        | (Iff(a1, b1), Iff(a2, b2))
        | (Cond(a1, b1), Cond(a2, b2)) => bind(a1, a2, s) && bind(b1, b2, s),
        _ => false,
    }
}

/// The substitution `σ` with `σ(schema) = f`, comparing desugared forms.
///
/// When a metavariable occurs, σ is unique: every metavariable occurs in
/// the pattern, so each is pinned by the part of `f` it aligns with.
pub fn match_schema(schema: &Schema, f: &Formula) -> Option<Subst> {
    let pat = schema.pattern.desugar();
    let f = f.desugar();
    let mut s = Subst::new();
    bind(&pat, &f, &mut s).then_some(s)
}

/// Like [`match_schema`], for a pattern and formula already in core form.
/// Bindings already in `s` must agree.
pub(crate) fn match_core(pattern: &Formula, f: &Formula, s: &mut Subst) -> bool {
    bind(pattern, f, s)
}
