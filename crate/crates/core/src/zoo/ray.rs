use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::unit::grid_points;
use crate::algebra::{Algebra, AlgebraError, Ext, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RayStar {
    /// `x ∗ y = min(x, y)`, unit `INF`.
    Min,
    /// `x ∗ y = x · y` with `0 · INF = 0`, unit `1`.
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RayOplus {
    Max,
    /// `x ⊕ y = x + y` with `INF` absorbing.
    Sum,
}

/// The extended ray `[0, INF]` with one of four operation pairs.
///
/// Negation is `1 - x` below the unit and `0` above it. When the unit is
/// `INF` (the `min` variants) this reads as `¬x = INF` for finite `x` and
/// `¬INF = 0`.
#[derive(Clone, Debug)]
pub struct Ray {
    id: String,
    star: RayStar,
    oplus: RayOplus,
}

pub(crate) fn ext(v: &Value) -> Ext {
    match v {
        Value::Num(e) => *e,
        other => panic!("ray algebra given foreign value {other}"),
    }
}

impl Ray {
    pub fn new(id: impl Into<String>, star: RayStar, oplus: RayOplus) -> Self {
        Ray {
            id: id.into(),
            star,
            oplus,
        }
    }

    pub fn star_kind(&self) -> RayStar {
        self.star
    }

    pub fn oplus_kind(&self) -> RayOplus {
        self.oplus
    }

    fn unit(&self) -> Ext {
        match self.star {
            RayStar::Min => Ext::Inf,
            RayStar::Product => Ext::ONE,
        }
    }
}

impl Algebra for Ray {
    fn id(&self) -> &str {
        &self.id
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Num(Ext::Inf))
            || matches!(v, Value::Num(Ext::Fin(x)) if *x >= 0.0 && x.is_finite())
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        ext(a).leq(ext(b))
    }

    fn eq(&self, a: &Value, b: &Value) -> bool {
        ext(a).approx_eq(ext(b))
    }

    fn star(&self, a: &Value, b: &Value) -> Value {
        let (a, b) = (ext(a), ext(b));
        Value::Num(match self.star {
            RayStar::Min => a.min(b),
            RayStar::Product => a * b,
        })
    }

    fn oplus(&self, a: &Value, b: &Value) -> Value {
        let (a, b) = (ext(a), ext(b));
        Value::Num(match self.oplus {
            RayOplus::Max => a.max(b),
            RayOplus::Sum => a + b,
        })
    }

    fn neg(&self, a: &Value) -> Value {
        let a = ext(a);
        Value::Num(match (self.star, a) {
            (RayStar::Min, Ext::Fin(_)) => Ext::Inf,
            (RayStar::Min, Ext::Inf) => Ext::ZERO,
            (RayStar::Product, Ext::Fin(x)) if a.leq(Ext::ONE) => Ext::clamp(1.0 - x),
            (RayStar::Product, _) => Ext::ZERO,
        })
    }

    fn residuum(&self, a: &Value, x: &Value) -> Value {
        let (a, x) = (ext(a), ext(x));
        Value::Num(match self.star {
            RayStar::Min => {
                if a.leq(x) {
                    Ext::Inf
                } else {
                    x
                }
            }
            RayStar::Product => match (a, x) {
                (_, Ext::Inf) => Ext::Inf,
                (Ext::Fin(0.0), _) => Ext::Inf,
                // INF ∗ y = INF for every y != 0, so only y = 0 fits below a finite x.
                (Ext::Inf, Ext::Fin(_)) => Ext::ZERO,
                (Ext::Fin(av), Ext::Fin(xv)) => {
                    let q = Ext::Fin(xv / av);
                    if a.leq(x) {
                        q.max(Ext::ONE)
                    } else {
                        q
                    }
                }
            },
        })
    }

    fn max_solution(&self, a: &Value, b: &Value) -> Result<Value, AlgebraError> {
        if !self.leq(a, b) {
            return Err(AlgebraError::NotBelow {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        let (av, bv) = (ext(a), ext(b));
        Ok(Value::Num(match self.oplus {
            RayOplus::Max => bv,
            RayOplus::Sum => match (av, bv) {
                (_, Ext::Inf) => Ext::Inf,
                (Ext::Fin(x), Ext::Fin(y)) => Ext::clamp(y - x),
                (Ext::Inf, Ext::Fin(_)) => unreachable!("INF <= finite was ruled out"),
            },
        }))
    }

    fn zero(&self) -> Value {
        Value::Num(Ext::ZERO)
    }

    fn one(&self) -> Value {
        Value::Num(self.unit())
    }

    fn meet(&self, a: &Value, b: &Value) -> Option<Value> {
        Some(Value::Num(ext(a).min(ext(b))))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        let u: f64 = rng.gen();
        Value::Num(if u < 0.6 {
            Ext::Fin(rng.gen::<f64>())
        } else if u < 0.9 {
            Ext::Fin(10.0 - 9.0 * rng.gen::<f64>())
        } else {
            Ext::Inf
        })
    }

    fn sample_unit(&self, rng: &mut dyn RngCore) -> Value {
        match self.star {
            RayStar::Min => self.sample(rng),
            RayStar::Product => Value::Num(Ext::Fin(rng.gen::<f64>())),
        }
    }

    fn sample_below(&self, bound: &Value, rng: &mut dyn RngCore) -> Value {
        match ext(bound) {
            Ext::Inf => self.sample(rng),
            Ext::Fin(m) => Value::Num(Ext::Fin(rng.gen::<f64>() * m)),
        }
    }

    fn unit_grid(&self, step: f64) -> Vec<Value> {
        let mut pts: Vec<Value> = grid_points(&[0.0, 0.5, 1.0], 0.0, 1.0)
            .into_iter()
            .map(|v| Value::Num(Ext::Fin(v)))
            .collect();
        if self.star == RayStar::Min {
            pts.push(Value::Num(Ext::Fin(2.0)));
            pts.push(Value::INF);
        }
        for v in grid_points(&[], step, 1.0) {
            let v = Value::Num(Ext::Fin(v));
            if !pts.iter().any(|p| self.eq(p, &v)) {
                pts.push(v);
            }
        }
        pts
    }

    fn anchors(&self) -> Vec<Value> {
        [0.0, 0.5, 1.0, 2.0]
            .into_iter()
            .map(|v| Value::Num(Ext::Fin(v)))
            .chain(std::iter::once(Value::INF))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64) -> Value {
        Value::num(x)
    }

    fn prob_ray() -> Ray {
        Ray::new("prob-ray", RayStar::Product, RayOplus::Sum)
    }

    #[test]
    fn residuum_corner_cases() {
        let r = prob_ray();
        assert_eq!(r.residuum(&v(0.0), &v(0.2)), Value::INF);
        assert_eq!(r.residuum(&v(0.3), &Value::INF), Value::INF);
        assert_eq!(r.residuum(&Value::INF, &v(0.7)), v(0.0));
        assert_eq!(r.residuum(&Value::INF, &Value::INF), Value::INF);
        assert!(r.eq(&r.residuum(&v(0.8), &v(0.4)), &v(0.5)));
    }

    #[test]
    fn negation_above_unit_is_zero() {
        let r = prob_ray();
        assert_eq!(r.neg(&v(2.5)), v(0.0));
        assert_eq!(r.neg(&Value::INF), v(0.0));
        assert!(r.eq(&r.neg(&v(0.4)), &v(0.6)));
    }

    #[test]
    fn min_variant_unit_is_inf() {
        let r = Ray::new("ray-min-max", RayStar::Min, RayOplus::Max);
        assert_eq!(r.one(), Value::INF);
        assert_eq!(r.neg(&v(0.0)), Value::INF);
        assert_eq!(r.neg(&Value::INF), v(0.0));
        assert_eq!(r.star(&v(3.0), &Value::INF), v(3.0));
    }

    #[test]
    fn max_solution_is_difference_or_inf() {
        let r = prob_ray();
        assert!(r.eq(&r.max_solution(&v(0.3), &v(1.0)).unwrap(), &v(0.7)));
        assert_eq!(r.max_solution(&v(0.3), &Value::INF).unwrap(), Value::INF);
        assert_eq!(r.max_solution(&Value::INF, &Value::INF).unwrap(), Value::INF);
    }
}
