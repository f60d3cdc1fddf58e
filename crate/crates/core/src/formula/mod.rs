//! Formulas: the AST, concrete syntax and schema matching.
//!
//! Concrete syntax, loosest binding first:
//!
//! ```text
//! iff  := imp ("<->" imp)*
//! imp  := cond ("->" imp)?          right associative
//! cond := or ("|" or)*
//! or   := and ("\/" and)*
//! and  := unary ("&" unary)*
//! unary:= "~" unary | "0" | "1" | atom | "(" iff ")"
//! ```
//!
//! `a <-> b`, `a | b` and `1` are sugar: [`Formula::desugar`] rewrites them
//! to `(a -> b) & (b -> a)`, `b -> (b & a)` and `0 -> 0`.

mod parse;
mod schema;

pub use parse::{parse, ParseError};
pub use schema::{is_meta, match_schema, Schema, Subst};
pub(crate) use schema::match_core;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Arc<str>),
    False,
    /// The constant `1`, sugar for `0 -> 0`.
    True,
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    /// `Cond(a, b)` is `a | b`, read "a given b".
    Cond(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Arc::new(a), Arc::new(b))
    }

    pub fn cond(a: Formula, b: Formula) -> Formula {
        Formula::Cond(Arc::new(a), Arc::new(b))
    }

    /// The core form of `1`.
    pub fn one() -> Formula {
        Formula::implies(Formula::False, Formula::False)
    }

    /// Both operands of a binary node.
    pub fn operands(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Cond(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Whether only `Atom`, `False`, `Not`, `And`, `Or` and `Implies` occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::False => true,
            Formula::True | Formula::Iff(..) | Formula::Cond(..) => false,
            Formula::Not(a) => a.is_core(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_core() && b.is_core()
            }
        }
    }

    /// Rewrites `<->`, `|` and `1` into core connectives.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::False => self.clone(),
            Formula::True => Formula::one(),
            Formula::Not(a) => Formula::negate(a.desugar()),
            Formula::And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Formula::Implies(a, b) => Formula::implies(a.desugar(), b.desugar()),
            Formula::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::and(
                    Formula::implies(a.clone(), b.clone()),
                    Formula::implies(b, a),
                )
            }
            Formula::Cond(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::implies(b.clone(), Formula::and(b, a))
            }
        }
    }

    /// Atom names in sorted order.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Atom(n) => {
                out.insert(n.clone());
            }
            Formula::False | Formula::True => {}
            Formula::Not(a) => a.collect_atoms(out),
            _ => {
                let (a, b) = self.operands().expect("binary node");
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Every distinct subformula, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_subformulas(&mut seen, &mut out);
        out
    }

    fn collect_subformulas(&self, seen: &mut BTreeSet<Formula>, out: &mut Vec<Formula>) {
        if seen.contains(self) {
            return;
        }
        match self {
            Formula::Not(a) => a.collect_subformulas(seen, out),
            _ => {
                if let Some((a, b)) = self.operands() {
                    a.collect_subformulas(seen, out);
                    b.collect_subformulas(seen, out);
                }
            }
        }
        seen.insert(self.clone());
        out.push(self.clone());
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::False | Formula::True => 1,
            Formula::Not(a) => 1 + a.size(),
            _ => {
                let (a, b) = self.operands().expect("binary node");
                1 + a.size() + b.size()
            }
        }
    }

    /// Replaces atoms according to `f`; atoms mapped to `None` stay.
    pub fn map_atoms(&self, f: &impl Fn(&str) -> Option<Formula>) -> Formula {
        let bin = |a: &Formula, b: &Formula| (a.map_atoms(f), b.map_atoms(f));
        match self {
            Formula::Atom(n) => f(n).unwrap_or_else(|| self.clone()),
            Formula::False | Formula::True => self.clone(),
            Formula::Not(a) => Formula::negate(a.map_atoms(f)),
            Formula::And(a, b) => {
                let (a, b) = bin(a, b);
                Formula::and(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b);
                Formula::or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(a, b);
                Formula::implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(a, b);
                Formula::iff(a, b)
            }
            Formula::Cond(a, b) => {
                let (a, b) = bin(a, b);
                Formula::cond(a, b)
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Cond(..) => 3,
            Formula::Or(..) => 4,
            Formula::And(..) => 5,
            Formula::Not(_) => 6,
            Formula::Atom(_) | Formula::False | Formula::True => 7,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(n) => f.write_str(n),
            Formula::False => f.write_str("0"),
            Formula::True => f.write_str("1"),
            Formula::Not(a) => {
                f.write_str("~")?;
                write_child(f, a, a.prec() < 6)
            }
            _ => {
                let (a, b) = self.operands().expect("binary node");
                let p = self.prec();
                let (op, left_paren, right_paren) = match self {
                    Formula::Implies(..) => (" -> ", a.prec() <= p, b.prec() < p),
                    Formula::Iff(..) => (" <-> ", a.prec() < p, b.prec() <= p),
                    Formula::Cond(..) => (" | ", a.prec() < p, b.prec() <= p),
                    Formula::Or(..) => (" \\/ ", a.prec() < p, b.prec() <= p),
                    _ => (" & ", a.prec() < p, b.prec() <= p),
                };
                write_child(f, a, left_paren)?;
                f.write_str(op)?;
                write_child(f, b, right_paren)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let (pp, q, r) = (Formula::atom("p"), Formula::atom("q"), Formula::atom("r"));
        assert_eq!(
            p("p & ~p -> 0"),
            Formula::implies(Formula::and(pp.clone(), Formula::negate(pp.clone())), Formula::False)
        );
        assert_eq!(p("q | p"), Formula::cond(q.clone(), pp.clone()));
        assert_eq!(
            p("p -> q -> r"),
            Formula::implies(pp.clone(), Formula::implies(q.clone(), r.clone()))
        );
        assert_eq!(
            p("q | p -> r"),
            Formula::implies(Formula::cond(q.clone(), pp.clone()), r.clone())
        );
        assert_eq!(
            p("p \\/ q & r"),
            Formula::or(pp.clone(), Formula::and(q.clone(), r.clone()))
        );
        assert_eq!(
            p("p <-> q <-> r"),
            Formula::iff(Formula::iff(pp, q), r)
        );
    }

    #[test]
    fn printing_is_minimal() {
        assert_eq!(p("((p))").to_string(), "p");
        assert_eq!(p("(p & ~p) -> 0").to_string(), "p & ~p -> 0");
        assert_eq!(p("(p -> q) -> r").to_string(), "(p -> q) -> r");
        assert_eq!(p("p -> (q -> r)").to_string(), "p -> q -> r");
        assert_eq!(p("~(p \\/ ~p)").to_string(), "~(p \\/ ~p)");
        assert_eq!(p("p & (q & r)").to_string(), "p & (q & r)");
        assert_eq!(p("(p & q) & r").to_string(), "p & q & r");
    }

    #[test]
    fn desugaring() {
        assert_eq!(p("p <-> q").desugar(), p("(p -> q) & (q -> p)"));
        assert_eq!(p("q | p").desugar(), p("p -> p & q"));
        assert_eq!(p("1").desugar(), p("0 -> 0"));
        assert_eq!(p("p").desugar(), p("p"));
        assert!(p("(q | p) <-> 1").desugar().is_core());
    }

    #[test]
    fn subformulas_come_children_first() {
        let subs = p("p & q -> p").subformulas();
        assert_eq!(subs, vec![p("p"), p("q"), p("p & q"), p("p & q -> p")]);
    }
}
