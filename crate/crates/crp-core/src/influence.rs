//! Parametric influence-rate functions.
//!
//! An influence function maps a driving quantity (response rate or active
//! count) to a per-unit-time activation probability. All three families are
//! zero at zero, strictly increasing, and concave, and each carries a
//! closed-form derivative and inverse-derivative — the solver's pointwise
//! maximizer relies on both.

use crate::error::{CrpError, Result};
use serde::de::Error as _;
use std::fmt;
use std::str::FromStr;

/// A monotone, concave rate function with analytic derivative and
/// inverse-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InfluenceFunction {
    /// `z ↦ a·arctan(b·z)` — saturates at `a·π/2`.
    ScaledArctan { a: f64, b: f64 },
    /// `z ↦ a·ln(b·z + 1)` — unbounded, slowing logarithmically.
    ScaledLog { a: f64, b: f64 },
    /// `z ↦ a·z^p` with `0 < p < 1` — unbounded, infinite slope at 0.
    PowerLaw { a: f64, p: f64 },
}

fn positive(field: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CrpError::invalid(field, format!("must be a positive finite number, got {v}")))
    }
}

impl InfluenceFunction {
    pub fn scaled_arctan(a: f64, b: f64) -> Result<Self> {
        Ok(Self::ScaledArctan { a: positive("a", a)?, b: positive("b", b)? })
    }

    pub fn scaled_log(a: f64, b: f64) -> Result<Self> {
        Ok(Self::ScaledLog { a: positive("a", a)?, b: positive("b", b)? })
    }

    pub fn power_law(a: f64, p: f64) -> Result<Self> {
        let p = positive("p", p)?;
        if p >= 1.0 {
            return Err(CrpError::invalid("p", format!("must lie in (0, 1), got {p}")));
        }
        Ok(Self::PowerLaw { a: positive("a", a)?, p })
    }

    /// Evaluates the function at `z ≥ 0`.
    pub fn eval(&self, z: f64) -> Result<f64> {
        if !z.is_finite() || z < 0.0 {
            return Err(CrpError::Domain(format!("influence argument must be ≥ 0, got {z}")));
        }
        Ok(self.eval_clamped(z))
    }

    /// Evaluates the derivative at `z ≥ 0`.
    ///
    /// For [`PowerLaw`](Self::PowerLaw) the slope diverges as `z → 0`; the
    /// call returns `f64::INFINITY` at `z = 0` so that comparisons against
    /// finite thresholds behave like the limit.
    pub fn derivative(&self, z: f64) -> Result<f64> {
        if !z.is_finite() || z < 0.0 {
            return Err(CrpError::Domain(format!("influence argument must be ≥ 0, got {z}")));
        }
        Ok(self.derivative_clamped(z))
    }

    /// Solves `f′(z) = y` for `z ≥ 0`.
    ///
    /// `y` must lie in the derivative's range over `[0, ∞)`: `(0, a·b]` for
    /// the arctan and log families, `(0, ∞)` for the power law.
    pub fn invert_derivative(&self, y: f64) -> Result<f64> {
        if !y.is_finite() || y <= 0.0 {
            return Err(CrpError::Domain(format!("derivative value must be positive, got {y}")));
        }
        match *self {
            Self::ScaledArctan { a, b } | Self::ScaledLog { a, b } if y > a * b => {
                Err(CrpError::Domain(format!(
                    "derivative value {y} exceeds the maximum slope {}",
                    a * b
                )))
            }
            _ => Ok(self.interior_maximizer_arg(y)),
        }
    }

    /// Like [`eval`](Self::eval) but clamps small negative arguments to 0.
    ///
    /// The integrators evaluate influence terms on trajectories whose
    /// nonnegativity is exact analytically but only approximate in floating
    /// point; the clamp absorbs that roundoff.
    pub(crate) fn eval_clamped(&self, z: f64) -> f64 {
        let z = z.max(0.0);
        match *self {
            Self::ScaledArctan { a, b } => a * (b * z).atan(),
            Self::ScaledLog { a, b } => a * (b * z + 1.0).ln(),
            Self::PowerLaw { a, p } => a * z.powf(p),
        }
    }

    /// Like [`derivative`](Self::derivative) with the same clamp as
    /// [`eval_clamped`](Self::eval_clamped).
    pub(crate) fn derivative_clamped(&self, z: f64) -> f64 {
        let z = z.max(0.0);
        match *self {
            Self::ScaledArctan { a, b } => a * b / (1.0 + (b * z) * (b * z)),
            Self::ScaledLog { a, b } => a * b / (b * z + 1.0),
            Self::PowerLaw { a, p } => {
                if z == 0.0 {
                    f64::INFINITY
                } else {
                    a * p * z.powf(p - 1.0)
                }
            }
        }
    }

    /// Inverse-derivative without range checks, clamped to `z ≥ 0`.
    ///
    /// Used where the caller has already established `y` lies in (or within
    /// rounding of) the valid range and a hard error would be wrong — e.g.
    /// resolving boundary ties in the pointwise maximizer.
    pub(crate) fn interior_maximizer_arg(&self, y: f64) -> f64 {
        match *self {
            Self::ScaledArctan { a, b } => (a * b / y - 1.0).max(0.0).sqrt() / b,
            Self::ScaledLog { a, b } => ((a * b / y - 1.0) / b).max(0.0),
            Self::PowerLaw { a, p } => (y / (a * p)).powf(1.0 / (p - 1.0)),
        }
    }
}

impl fmt::Display for InfluenceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::ScaledArctan { a, b } => write!(f, "arctan({a}, {b})"),
            Self::ScaledLog { a, b } => write!(f, "log({a}, {b})"),
            Self::PowerLaw { a, p } => write!(f, "power({a}, {p})"),
        }
    }
}

impl FromStr for InfluenceFunction {
    type Err = CrpError;

    fn from_str(s: &str) -> Result<Self> {
        crate::format::parse_influence(s)
    }
}

impl serde::Serialize for InfluenceFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for InfluenceFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}
