//! Interval bounds for modus ponens on truth/belief judgments.

use serde::{Deserialize, Serialize};

use super::ProbError;
use crate::algebra::Value;

/// A probability `p` and a truth degree `t`, both in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzyRandomJudgment {
    pub p: f64,
    pub t: f64,
}

impl FuzzyRandomJudgment {
    pub fn new(p: f64, t: f64) -> Result<Self, ProbError> {
        for (name, v) in [("p", p), ("t", t)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ProbError::OutOfRange { name: name.into(), value: v });
            }
        }
        Ok(FuzzyRandomJudgment { p, t })
    }

    /// The element `(t, p)` of `godel-x-prob-ray`, truth degree first.
    pub fn to_value(self) -> Value {
        Value::pair(Value::num(self.t), Value::num(self.p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MpBounds {
    pub p: [f64; 2],
    pub t: [f64; 2],
}

/// Bounds on `ψ` from judgments on `φ` and `φ → ψ`:
/// `p(ψ) ∈ [p(φ)·p(φ→ψ), p(φ→ψ)]` and `t(ψ) ∈ [t(φ) ∧ t(φ→ψ), t(φ→ψ)]`.
pub fn mp_bounds(phi: FuzzyRandomJudgment, imp: FuzzyRandomJudgment) -> Result<MpBounds, ProbError> {
    let phi = FuzzyRandomJudgment::new(phi.p, phi.t)?;
    let imp = FuzzyRandomJudgment::new(imp.p, imp.t)?;
    Ok(MpBounds {
        p: [phi.p * imp.p, imp.p],
        t: [phi.t.min(imp.t), imp.t],
    })
}
