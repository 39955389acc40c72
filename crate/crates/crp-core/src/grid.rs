//! Uniform time grids and linear interpolation of grid samples.

use crate::error::{CrpError, Result};
use serde::Serialize;

/// Grid resolution alone: the number of subintervals. Combined with an
/// instance's horizon it realizes a [`TimeGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridConfig {
    pub n: usize,
}

impl GridConfig {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(CrpError::invalid("n", format!("grid needs at least 2 subintervals, got {n}")));
        }
        Ok(Self { n })
    }

    /// Realizes the grid over `[0, t_end]`.
    pub fn realize(&self, t_end: f64) -> Result<TimeGrid> {
        TimeGrid::new(self.n, t_end)
    }
}

impl Default for GridConfig {
    /// 5000 subintervals: keeps the integrator's truncation error far below
    /// the solver's convergence threshold for horizons up to a few hundred
    /// time units.
    fn default() -> Self {
        Self { n: 5000 }
    }
}

/// `n + 1` equally spaced nodes on `[0, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    n: usize,
    t_end: f64,
}

impl TimeGrid {
    pub fn new(n: usize, t_end: f64) -> Result<Self> {
        if n < 2 {
            return Err(CrpError::invalid("n", format!("grid needs at least 2 subintervals, got {n}")));
        }
        if !t_end.is_finite() || t_end <= 0.0 {
            return Err(CrpError::invalid("t_end", format!("horizon must be positive and finite, got {t_end}")));
        }
        Ok(Self { n, t_end })
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes (`n + 1`).
    pub fn node_count(&self) -> usize {
        self.n + 1
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Step size `t_end / n`.
    pub fn step(&self) -> f64 {
        self.t_end / self.n as f64
    }

    /// The `i`-th node; `node(0) = 0` and `node(n) = t_end` exactly.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i <= self.n);
        self.t_end * i as f64 / self.n as f64
    }

    /// Iterates over all nodes in order.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |i| self.node(i))
    }

    /// Linearly interpolates node samples at time `t`. The cell index is
    /// clamped to the grid, so queries a rounding error outside `[0, t_end]`
    /// extrapolate within the nearest cell. `samples` must hold one value per
    /// node.
    pub(crate) fn lerp(&self, samples: &[f64], t: f64) -> f64 {
        debug_assert_eq!(samples.len(), self.node_count());
        let u = t / self.step();
        let cell = (u.floor().max(0.0) as usize).min(self.n - 1);
        let frac = u - cell as f64;
        samples[cell] * (1.0 - frac) + samples[cell + 1] * frac
    }
}
