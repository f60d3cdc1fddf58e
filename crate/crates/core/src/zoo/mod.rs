//! Ready-made algebras and the registry that names them.
//!
//! Identifiers accepted by [`parse_spec_id`]:
//!
//! | id | algebra |
//! |----|---------|
//! | `godel-unit` | `[0,1]`, `∗ = min`, `⊕ = max` |
//! | `prob-ray` | `[0,INF]`, `∗ = ×`, `⊕ = +` |
//! | `ray-min-max`, `ray-min-plus`, `ray-prod-max` | the other ray combinations |
//! | `boolean2` | the two-element lattice |
//! | `tnorm-min`, `tnorm-product`, `tnorm-lukasiewicz` | `[0,1]` with a t-norm |
//! | `heyting3` | three-element Heyting chain |
//! | `product(a,b,...)`, `godel-x-prob-ray` | pointwise products |
//! | `table:PATH` | a table document read from disk |

mod product;
mod ray;
mod table;
mod unit;

pub use product::Product;
pub use ray::{Ray, RayOplus, RayStar};
pub use table::{Table, TableError, TableSpec};
pub use unit::{TNorm, UnitInterval};

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{check_laws, Algebra, AlgebraHandle};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlgebraSpec {
    GodelUnit,
    ProbRay,
    RayVariant { star: RayStar, oplus: RayOplus },
    Product { parts: Vec<AlgebraSpec> },
    Boolean2,
    TnormUnit { tnorm: TNorm },
    FiniteTable { table: TableSpec },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZooError {
    #[error("unknown algebra `{0}` (try `catalogue`)")]
    Unknown(String),
    #[error("malformed algebra id `{0}`")]
    Malformed(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("table `{name}` breaks law {law} at ({witness})")]
    Unlawful {
        name: String,
        law: String,
        witness: String,
    },
    #[error("cannot read table file `{0}`: {1}")]
    Io(String, String),
}

impl AlgebraSpec {
    /// Stable identifier, also the ownership tag of the built algebra.
    pub fn id(&self) -> String {
        match self {
            AlgebraSpec::GodelUnit => "godel-unit".into(),
            AlgebraSpec::ProbRay => "prob-ray".into(),
            AlgebraSpec::RayVariant { star, oplus } => {
                let s = match star {
                    RayStar::Min => "min",
                    RayStar::Product => "prod",
                };
                let o = match oplus {
                    RayOplus::Max => "max",
                    RayOplus::Sum => "plus",
                };
                format!("ray-{s}-{o}")
            }
            AlgebraSpec::Product { parts } => {
                let ids: Vec<String> = parts.iter().map(AlgebraSpec::id).collect();
                format!("product({})", ids.join(","))
            }
            AlgebraSpec::Boolean2 => "boolean2".into(),
            AlgebraSpec::TnormUnit { tnorm } => format!("tnorm-{}", tnorm.name()),
            AlgebraSpec::FiniteTable { table } => table.name.clone(),
        }
    }

    /// `godel-unit × prob-ray`, the algebra of truth/belief judgments.
    pub fn godel_x_prob_ray() -> AlgebraSpec {
        AlgebraSpec::Product {
            parts: vec![AlgebraSpec::GodelUnit, AlgebraSpec::ProbRay],
        }
    }
}

fn build(spec: &AlgebraSpec) -> Result<Arc<dyn Algebra>, ZooError> {
    let id = spec.id();
    Ok(match spec {
        AlgebraSpec::GodelUnit => Arc::new(UnitInterval::new(id, TNorm::Minimum)),
        AlgebraSpec::TnormUnit { tnorm } => Arc::new(UnitInterval::new(id, *tnorm)),
        AlgebraSpec::ProbRay => Arc::new(Ray::new(id, RayStar::Product, RayOplus::Sum)),
        AlgebraSpec::RayVariant { star, oplus } => Arc::new(Ray::new(id, *star, *oplus)),
        AlgebraSpec::Product { parts } => {
            if parts.is_empty() {
                return Err(ZooError::Malformed(id));
            }
            let parts = parts.iter().map(build).collect::<Result<Vec<_>, _>>()?;
            Arc::new(Product::new(parts))
        }
        AlgebraSpec::Boolean2 => Arc::new(Table::new(id, TableSpec::boolean2())?),
        AlgebraSpec::FiniteTable { table } => {
            let t = Table::new(id, table.clone())?;
            let handle = AlgebraHandle::from_algebra(t.clone());
            let report = check_laws(&handle, 1, 0);
            if let Some(bad) = report.failures().next() {
                let witness = bad
                    .witness
                    .as_ref()
                    .map(|w| {
                        w.iter()
                            .map(|v| t.display(v))
                            .collect::<Vec<_>>()
                            .join(", ")
                    })
                    .unwrap_or_default();
                return Err(ZooError::Unlawful {
                    name: table.name.clone(),
                    law: bad.law.name().into(),
                    witness,
                });
            }
            Arc::new(t)
        }
    })
}

/// Builds an algebra. Finite tables are law-checked exhaustively first.
pub fn make_algebra(spec: &AlgebraSpec) -> Result<AlgebraHandle, ZooError> {
    build(spec).map(AlgebraHandle::new)
}

/// Every built-in algebra, in a stable order.
pub fn catalogue() -> Vec<AlgebraSpec> {
    vec![
        AlgebraSpec::GodelUnit,
        AlgebraSpec::ProbRay,
        AlgebraSpec::RayVariant {
            star: RayStar::Min,
            oplus: RayOplus::Max,
        },
        AlgebraSpec::RayVariant {
            star: RayStar::Min,
            oplus: RayOplus::Sum,
        },
        AlgebraSpec::RayVariant {
            star: RayStar::Product,
            oplus: RayOplus::Max,
        },
        AlgebraSpec::Boolean2,
        AlgebraSpec::TnormUnit {
            tnorm: TNorm::Minimum,
        },
        AlgebraSpec::TnormUnit {
            tnorm: TNorm::Product,
        },
        AlgebraSpec::TnormUnit {
            tnorm: TNorm::Lukasiewicz,
        },
        AlgebraSpec::godel_x_prob_ray(),
        AlgebraSpec::FiniteTable {
            table: TableSpec::heyting3(),
        },
    ]
}

/// Resolves a textual identifier to a spec. `table:PATH` reads the file.
pub fn parse_spec_id(text: &str) -> Result<AlgebraSpec, ZooError> {
    let text = text.trim();
    if let Some(path) = text.strip_prefix("table:") {
        if path == "heyting3" {
            return Ok(AlgebraSpec::FiniteTable {
                table: TableSpec::heyting3(),
            });
        }
        let raw = std::fs::read_to_string(path)
            .map_err(|e| ZooError::Io(path.to_string(), e.to_string()))?;
        let table: TableSpec = serde_json::from_str(&raw)
            .map_err(|e| ZooError::Io(path.to_string(), e.to_string()))?;
        return Ok(AlgebraSpec::FiniteTable { table });
    }
    if let Some(inner) = text
        .strip_prefix("product(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let parts = split_top_level(inner)
            .ok_or_else(|| ZooError::Malformed(text.to_string()))?
            .into_iter()
            .map(parse_spec_id)
            .collect::<Result<Vec<_>, _>>()?;
        if parts.is_empty() {
            return Err(ZooError::Malformed(text.to_string()));
        }
        return Ok(AlgebraSpec::Product { parts });
    }
    if text == "godel-x-prob-ray" {
        return Ok(AlgebraSpec::godel_x_prob_ray());
    }
    catalogue()
        .into_iter()
        .find(|s| s.id() == text)
        .ok_or_else(|| ZooError::Unknown(text.to_string()))
}

fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    if !s[start..].trim().is_empty() {
        out.push(&s[start..]);
    }
    Some(out)
}

/// Parses an identifier and builds the algebra in one step.
pub fn algebra_by_id(text: &str) -> Result<AlgebraHandle, ZooError> {
    make_algebra(&parse_spec_id(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Value;

    #[test]
    fn catalogue_ids_round_trip() {
        for spec in catalogue() {
            assert_eq!(parse_spec_id(&spec.id()).unwrap(), spec);
            assert_eq!(make_algebra(&spec).unwrap().id(), spec.id());
        }
    }

    #[test]
    fn catalogue_passes_laws() {
        for spec in catalogue() {
            let h = make_algebra(&spec).unwrap();
            let rep = check_laws(&h, 2000, 7);
            let bad: Vec<String> = rep
                .failures()
                .map(|o| format!("{} {:?}", o.law.name(), o.witness))
                .collect();
            assert!(bad.is_empty(), "{}: {:?}", spec.id(), bad);
        }
    }

    #[test]
    fn product_ids_parse() {
        let s = parse_spec_id("product(godel-unit,prob-ray)").unwrap();
        assert_eq!(s, AlgebraSpec::godel_x_prob_ray());
        assert_eq!(parse_spec_id("godel-x-prob-ray").unwrap(), s);
        let nested = parse_spec_id("product(boolean2,product(godel-unit,prob-ray))").unwrap();
        assert_eq!(nested.id(), "product(boolean2,product(godel-unit,prob-ray))");
        assert!(parse_spec_id("product(godel-unit").is_err());
        assert!(parse_spec_id("nope").is_err());
    }

    #[test]
    fn product_negation_is_pointwise() {
        let h = algebra_by_id("godel-x-prob-ray").unwrap();
        let a = h.element(Value::pair(Value::num(0.4), Value::num(2.5))).unwrap();
        let n = h.neg(&a).unwrap();
        let expect = h.element(Value::pair(Value::num(0.6), Value::num(0.0))).unwrap();
        assert!(h.eq(&n, &expect).unwrap());
    }

    #[test]
    fn unlawful_table_is_refused() {
        let mut t = TableSpec::boolean2();
        t.name = "bad".into();
        // Non-monotone oplus: 1 ⊕ 1 = 0.
        t.oplus[1][1] = 0;
        let err = make_algebra(&AlgebraSpec::FiniteTable { table: t }).unwrap_err();
        assert!(matches!(err, ZooError::Unlawful { .. }), "{err}");
    }

    #[test]
    fn cross_algebra_operations_are_rejected() {
        let g = algebra_by_id("godel-unit").unwrap();
        let p = algebra_by_id("prob-ray").unwrap();
        let a = g.element(Value::num(0.3)).unwrap();
        let b = p.element(Value::num(0.3)).unwrap();
        assert!(g.star(&a, &b).is_err());
    }
}
