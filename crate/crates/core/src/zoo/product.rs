use std::sync::Arc;

use rand::RngCore;

use crate::algebra::{Algebra, AlgebraError, Value};

/// Direct product with pointwise order and pointwise operations.
#[derive(Clone)]
pub struct Product {
    id: String,
    parts: Vec<Arc<dyn Algebra>>,
}

impl Product {
    pub fn new(parts: Vec<Arc<dyn Algebra>>) -> Self {
        let ids: Vec<&str> = parts.iter().map(|p| p.id()).collect();
        Product {
            id: format!("product({})", ids.join(",")),
            parts,
        }
    }

    pub fn parts(&self) -> &[Arc<dyn Algebra>] {
        &self.parts
    }

    fn items<'a>(&self, v: &'a Value) -> &'a [Value] {
        match v {
            Value::Tuple(items) if items.len() == self.parts.len() => items,
            other => panic!("product algebra `{}` given foreign value {other}", self.id),
        }
    }

    fn map1(&self, a: &Value, f: impl Fn(&dyn Algebra, &Value) -> Value) -> Value {
        let a = self.items(a);
        Value::Tuple(
            self.parts
                .iter()
                .zip(a)
                .map(|(p, x)| f(&**p, x))
                .collect(),
        )
    }

    fn map2(&self, a: &Value, b: &Value, f: impl Fn(&dyn Algebra, &Value, &Value) -> Value) -> Value {
        let (a, b) = (self.items(a), self.items(b));
        Value::Tuple(
            self.parts
                .iter()
                .zip(a.iter().zip(b))
                .map(|(p, (x, y))| f(&**p, x, y))
                .collect(),
        )
    }

    fn all2(&self, a: &Value, b: &Value, f: impl Fn(&dyn Algebra, &Value, &Value) -> bool) -> bool {
        let (a, b) = (self.items(a), self.items(b));
        self.parts
            .iter()
            .zip(a.iter().zip(b))
            .all(|(p, (x, y))| f(&**p, x, y))
    }

    fn cartesian(lists: Vec<Vec<Value>>) -> Vec<Value> {
        let mut acc: Vec<Vec<Value>> = vec![Vec::new()];
        for list in lists {
            let mut next = Vec::with_capacity(acc.len() * list.len());
            for prefix in &acc {
                for v in &list {
                    let mut t = prefix.clone();
                    t.push(v.clone());
                    next.push(t);
                }
            }
            acc = next;
        }
        acc.into_iter()
            .map(|t| Value::Tuple(t.into_boxed_slice()))
            .collect()
    }
}

impl Algebra for Product {
    fn id(&self) -> &str {
        &self.id
    }

    fn contains(&self, v: &Value) -> bool {
        match v {
            Value::Tuple(items) if items.len() == self.parts.len() => {
                self.parts.iter().zip(items.iter()).all(|(p, x)| p.contains(x))
            }
            _ => false,
        }
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        self.all2(a, b, |p, x, y| p.leq(x, y))
    }

    fn eq(&self, a: &Value, b: &Value) -> bool {
        self.all2(a, b, |p, x, y| p.eq(x, y))
    }

    fn star(&self, a: &Value, b: &Value) -> Value {
        self.map2(a, b, |p, x, y| p.star(x, y))
    }

    fn oplus(&self, a: &Value, b: &Value) -> Value {
        self.map2(a, b, |p, x, y| p.oplus(x, y))
    }

    fn neg(&self, a: &Value) -> Value {
        self.map1(a, |p, x| p.neg(x))
    }

    fn residuum(&self, a: &Value, x: &Value) -> Value {
        self.map2(a, x, |p, y, z| p.residuum(y, z))
    }

    fn max_solution(&self, a: &Value, b: &Value) -> Result<Value, AlgebraError> {
        let (xs, ys) = (self.items(a), self.items(b));
        let mut out = Vec::with_capacity(xs.len());
        for ((p, x), y) in self.parts.iter().zip(xs).zip(ys) {
            out.push(p.max_solution(x, y)?);
        }
        Ok(Value::Tuple(out.into_boxed_slice()))
    }

    fn zero(&self) -> Value {
        Value::Tuple(self.parts.iter().map(|p| p.zero()).collect())
    }

    fn one(&self) -> Value {
        Value::Tuple(self.parts.iter().map(|p| p.one()).collect())
    }

    fn meet(&self, a: &Value, b: &Value) -> Option<Value> {
        let (xs, ys) = (self.items(a), self.items(b));
        let mut out = Vec::with_capacity(xs.len());
        for ((p, x), y) in self.parts.iter().zip(xs).zip(ys) {
            out.push(p.meet(x, y)?);
        }
        Some(Value::Tuple(out.into_boxed_slice()))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Tuple(self.parts.iter().map(|p| p.sample(rng)).collect())
    }

    fn sample_unit(&self, rng: &mut dyn RngCore) -> Value {
        Value::Tuple(self.parts.iter().map(|p| p.sample_unit(rng)).collect())
    }

    fn sample_below(&self, bound: &Value, rng: &mut dyn RngCore) -> Value {
        let bs = self.items(bound);
        Value::Tuple(
            self.parts
                .iter()
                .zip(bs)
                .map(|(p, b)| p.sample_below(b, rng))
                .collect(),
        )
    }

    fn enumerate(&self) -> Option<Vec<Value>> {
        let lists = self
            .parts
            .iter()
            .map(|p| p.enumerate())
            .collect::<Option<Vec<_>>>()?;
        Some(Self::cartesian(lists))
    }

    fn unit_grid(&self, step: f64) -> Vec<Value> {
        Self::cartesian(self.parts.iter().map(|p| p.unit_grid(step)).collect())
    }

    fn anchors(&self) -> Vec<Value> {
        Self::cartesian(self.parts.iter().map(|p| p.anchors()).collect())
    }

    fn display(&self, v: &Value) -> String {
        let items = self.items(v);
        let parts: Vec<String> = self
            .parts
            .iter()
            .zip(items)
            .map(|(p, x)| p.display(x))
            .collect();
        format!("({})", parts.join(", "))
    }

    fn value_to_json(&self, v: &Value) -> serde_json::Value {
        let items = self.items(v);
        serde_json::Value::Array(
            self.parts
                .iter()
                .zip(items)
                .map(|(p, x)| p.value_to_json(x))
                .collect(),
        )
    }

    fn value_from_json(&self, j: &serde_json::Value) -> Option<Value> {
        let arr = j.as_array()?;
        if arr.len() != self.parts.len() {
            return None;
        }
        let items = self
            .parts
            .iter()
            .zip(arr)
            .map(|(p, x)| p.value_from_json(x))
            .collect::<Option<Vec<_>>>()?;
        Some(Value::Tuple(items.into_boxed_slice()))
    }
}
