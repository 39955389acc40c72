//! Problem instances: the 12 parameters defining one co-creation scenario.

use crate::error::{CrpError, Result};
use crate::influence::InfluenceFunction;
use serde::Serialize;

/// One problem instance.
///
/// The community state is a pair (active count `A`, inactive count `I`);
/// outsiders join the inactive pool at rate `mu`, members leave at per-capita
/// rates `delta1` (active) / `delta2` (inactive), active members go inactive
/// at per-capita rate `alpha`, and inactive members activate at probability
/// rate `beta1(x) + beta2(A)` driven by the company's response rate `x ≤ x_max`
/// and by peer activity. Benefit accrues at `omega2` per active person-time;
/// response effort costs `omega1` per unit rate-time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrpInstance {
    #[serde(rename = "A0")]
    pub a0: f64,
    #[serde(rename = "I0")]
    pub i0: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub x_max: f64,
    pub mu: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub alpha: f64,
    pub beta1: InfluenceFunction,
    pub beta2: InfluenceFunction,
    pub omega1: f64,
    pub omega2: f64,
}

impl CrpInstance {
    /// Builds and validates an instance. Field order matches the tuple layout
    /// used throughout: `(A0, I0, T, x_max, mu, delta1, delta2, alpha, beta1,
    /// beta2, omega1, omega2)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a0: f64,
        i0: f64,
        t_end: f64,
        x_max: f64,
        mu: f64,
        delta1: f64,
        delta2: f64,
        alpha: f64,
        beta1: InfluenceFunction,
        beta2: InfluenceFunction,
        omega1: f64,
        omega2: f64,
    ) -> Result<Self> {
        let inst = Self {
            a0,
            i0,
            t_end,
            x_max,
            mu,
            delta1,
            delta2,
            alpha,
            beta1,
            beta2,
            omega1,
            omega2,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Re-checks all field constraints (useful after mutating a copy, e.g.
    /// in a parameter sweep).
    pub fn validate(&self) -> Result<()> {
        let nonneg: [(&'static str, f64); 2] = [("A0", self.a0), ("I0", self.i0)];
        for (field, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(CrpError::InvalidField {
                    field,
                    reason: format!("must be ≥ 0 and finite, got {v}"),
                });
            }
        }
        let positive: [(&'static str, f64); 8] = [
            ("T", self.t_end),
            ("x_max", self.x_max),
            ("mu", self.mu),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("alpha", self.alpha),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
        ];
        for (field, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(CrpError::InvalidField {
                    field,
                    reason: format!("must be > 0 and finite, got {v}"),
                });
            }
        }
        Ok(())
    }

    /// Advisory findings that do not invalidate the instance. Currently one:
    /// inactive members are expected to churn faster than active ones, so
    /// `delta2 ≤ delta1` is flagged.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.delta2 <= self.delta1 {
            out.push(format!(
                "delta2 = {} is not greater than delta1 = {}; \
                 inactive members usually churn faster than active ones",
                self.delta2, self.delta1
            ));
        }
        out
    }

    /// Combined activation probability rate `beta1(x) + beta2(a)` with
    /// roundoff-tolerant clamping of the arguments.
    pub(crate) fn activation_rate(&self, x: f64, a: f64) -> f64 {
        self.beta1.eval_clamped(x) + self.beta2.eval_clamped(a)
    }
}
