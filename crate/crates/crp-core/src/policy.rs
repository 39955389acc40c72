//! Grid-sampled response-rate policies.

use crate::error::{CrpError, Result};
use crate::grid::TimeGrid;

/// A feasible response-rate policy: one sample per grid node, every sample in
/// `[0, x_max]`. Values between nodes are defined by linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPolicy {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl ControlPolicy {
    /// Builds a policy from node samples, validating bounds against `x_max`.
    pub fn new(grid: TimeGrid, values: Vec<f64>, x_max: f64) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(CrpError::GridMismatch(format!(
                "policy has {} samples but the grid has {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 || v > x_max {
                return Err(CrpError::invalid(
                    "policy value",
                    format!("sample {i} is {v}, outside [0, {x_max}]"),
                ));
            }
        }
        Ok(Self { grid, values })
    }

    /// The all-zero policy (feasible for every bound).
    pub fn zero(grid: TimeGrid) -> Self {
        let values = vec![0.0; grid.node_count()];
        Self { grid, values }
    }

    /// A constant policy at level `value`.
    pub fn constant(grid: TimeGrid, value: f64, x_max: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.node_count()], x_max)
    }

    /// Internal constructor for values already known to be feasible.
    pub(crate) fn from_feasible(grid: TimeGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.node_count());
        Self { grid, values }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The response rate at an arbitrary time, by linear interpolation.
    pub fn value_at(&self, t: f64) -> f64 {
        self.grid.lerp(&self.values, t)
    }

    /// Largest absolute node-wise difference to another policy on the same
    /// grid.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(CrpError::GridMismatch("policies sampled on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Sum of absolute successive differences.
    pub fn total_variation(&self) -> f64 {
        self.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    /// Largest upward successive step (0 for a non-increasing policy).
    pub fn max_upward_step(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Resamples the policy onto another grid spanning the same horizon by
    /// linear interpolation. Interpolated values are convex combinations of
    /// node values, so feasibility is preserved.
    pub fn resampled(&self, grid: TimeGrid) -> Result<Self> {
        if (grid.t_end() - self.grid.t_end()).abs() > 1e-9 * self.grid.t_end() {
            return Err(CrpError::GridMismatch(format!(
                "cannot resample a policy on [0, {}] onto [0, {}]",
                self.grid.t_end(),
                grid.t_end()
            )));
        }
        let values = grid.nodes().map(|t| self.grid.lerp(&self.values, t)).collect();
        Ok(Self::from_feasible(grid, values))
    }
}
