use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraError, Ext, Value, EPS};

/// Continuous t-norms shipped for the unit interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TNorm {
    Minimum,
    Product,
    Lukasiewicz,
}

impl TNorm {
    pub fn name(self) -> &'static str {
        match self {
            TNorm::Minimum => "min",
            TNorm::Product => "product",
            TNorm::Lukasiewicz => "lukasiewicz",
        }
    }
}

/// `[0, 1]` with a t-norm, `⊕ = max` and `¬x = 1 - x`.
#[derive(Clone, Debug)]
pub struct UnitInterval {
    id: String,
    tnorm: TNorm,
}

impl UnitInterval {
    pub fn new(id: impl Into<String>, tnorm: TNorm) -> Self {
        UnitInterval {
            id: id.into(),
            tnorm,
        }
    }

    pub fn tnorm(&self) -> TNorm {
        self.tnorm
    }
}

pub(crate) fn unit(v: &Value) -> f64 {
    match v {
        Value::Num(Ext::Fin(x)) => *x,
        other => panic!("unit-interval algebra given foreign value {other}"),
    }
}

fn num(v: f64) -> Value {
    Value::Num(Ext::clamp(v.min(1.0)))
}

/// Anchors first, then multiples of `step`, skipping near-duplicates.
pub(crate) fn grid_points(anchors: &[f64], step: f64, hi: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut push = |v: f64| {
        if !out.iter().any(|w| (w - v).abs() <= EPS) {
            out.push(v);
        }
    };
    for &a in anchors {
        push(a);
    }
    if step > 0.0 {
        let n = (hi / step).round() as u64;
        for k in 0..=n {
            push((k as f64 * step).min(hi));
        }
    }
    out
}

impl Algebra for UnitInterval {
    fn id(&self) -> &str {
        &self.id
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Num(Ext::Fin(x)) if *x >= 0.0 && *x <= 1.0 + EPS)
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        unit(a) <= unit(b) + EPS
    }

    fn eq(&self, a: &Value, b: &Value) -> bool {
        (unit(a) - unit(b)).abs() <= EPS
    }

    fn star(&self, a: &Value, b: &Value) -> Value {
        let (x, y) = (unit(a), unit(b));
        match self.tnorm {
            TNorm::Minimum => num(x.min(y)),
            TNorm::Product => num(x * y),
            TNorm::Lukasiewicz => num((x + y - 1.0).max(0.0)),
        }
    }

    fn oplus(&self, a: &Value, b: &Value) -> Value {
        num(unit(a).max(unit(b)))
    }

    fn neg(&self, a: &Value) -> Value {
        num(1.0 - unit(a))
    }

    fn residuum(&self, a: &Value, x: &Value) -> Value {
        if self.leq(a, x) {
            return num(1.0);
        }
        let (a, x) = (unit(a), unit(x));
        match self.tnorm {
            TNorm::Minimum => num(x),
            TNorm::Product => num(x / a),
            TNorm::Lukasiewicz => num(1.0 - a + x),
        }
    }

    fn max_solution(&self, a: &Value, b: &Value) -> Result<Value, AlgebraError> {
        if !self.leq(a, b) {
            return Err(AlgebraError::NotBelow {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        // max(a, c) = b has b as its greatest solution whenever a <= b.
        Ok(b.clone())
    }

    fn zero(&self) -> Value {
        num(0.0)
    }

    fn one(&self) -> Value {
        num(1.0)
    }

    fn meet(&self, a: &Value, b: &Value) -> Option<Value> {
        Some(num(unit(a).min(unit(b))))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        num(rng.gen::<f64>())
    }

    fn sample_unit(&self, rng: &mut dyn RngCore) -> Value {
        self.sample(rng)
    }

    fn sample_below(&self, bound: &Value, rng: &mut dyn RngCore) -> Value {
        num(rng.gen::<f64>() * unit(bound))
    }

    fn unit_grid(&self, step: f64) -> Vec<Value> {
        grid_points(&[0.0, 0.5, 1.0], step, 1.0)
            .into_iter()
            .map(num)
            .collect()
    }

    fn anchors(&self) -> Vec<Value> {
        [0.0, 0.25, 0.5, 1.0].into_iter().map(num).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64) -> Value {
        Value::num(x)
    }

    #[test]
    fn godel_residuum_and_max_solution() {
        let g = UnitInterval::new("godel-unit", TNorm::Minimum);
        assert_eq!(g.residuum(&v(0.5), &v(0.3)), v(0.3));
        assert_eq!(g.residuum(&v(0.3), &v(0.5)), v(1.0));
        assert_eq!(g.max_solution(&v(0.2), &v(0.7)).unwrap(), v(0.7));
        assert!(g.max_solution(&v(0.7), &v(0.2)).is_err());
    }

    #[test]
    fn lukasiewicz_star() {
        let l = UnitInterval::new("tnorm-lukasiewicz", TNorm::Lukasiewicz);
        assert!(l.eq(&l.star(&v(0.7), &v(0.6)), &v(0.3)));
        assert!(l.eq(&l.star(&v(0.2), &v(0.6)), &v(0.0)));
        assert!(l.eq(&l.residuum(&v(0.7), &v(0.3)), &v(0.6)));
    }

    #[test]
    fn grid_puts_anchors_first() {
        let pts = grid_points(&[0.0, 0.5, 1.0], 0.25, 1.0);
        assert_eq!(pts, vec![0.0, 0.5, 1.0, 0.25, 0.75]);
    }
}
