//! Grid-sampled state and adjoint trajectories.

use crate::grid::TimeGrid;

/// Sampled community state: active count `A` and inactive count `I` per node.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrajectory {
    grid: TimeGrid,
    active: Vec<f64>,
    inactive: Vec<f64>,
}

impl StateTrajectory {
    pub(crate) fn new(grid: TimeGrid, active: Vec<f64>, inactive: Vec<f64>) -> Self {
        debug_assert_eq!(active.len(), grid.node_count());
        debug_assert_eq!(inactive.len(), grid.node_count());
        Self { grid, active, inactive }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    /// Active-count samples `A(t_i)`.
    pub fn active(&self) -> &[f64] {
        &self.active
    }

    /// Inactive-count samples `I(t_i)`.
    pub fn inactive(&self) -> &[f64] {
        &self.inactive
    }

    pub fn active_at(&self, t: f64) -> f64 {
        self.grid.lerp(&self.active, t)
    }

    pub fn inactive_at(&self, t: f64) -> f64 {
        self.grid.lerp(&self.inactive, t)
    }
}

/// Sampled adjoint pair `(λ1, λ2)`; both are 0 at the terminal node by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointTrajectory {
    grid: TimeGrid,
    lambda1: Vec<f64>,
    lambda2: Vec<f64>,
}

impl AdjointTrajectory {
    pub(crate) fn new(grid: TimeGrid, lambda1: Vec<f64>, lambda2: Vec<f64>) -> Self {
        debug_assert_eq!(lambda1.len(), grid.node_count());
        debug_assert_eq!(lambda2.len(), grid.node_count());
        Self { grid, lambda1, lambda2 }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn lambda1(&self) -> &[f64] {
        &self.lambda1
    }

    pub fn lambda2(&self) -> &[f64] {
        &self.lambda2
    }

    pub fn lambda1_at(&self, t: f64) -> f64 {
        self.grid.lerp(&self.lambda1, t)
    }

    pub fn lambda2_at(&self, t: f64) -> f64 {
        self.grid.lerp(&self.lambda2, t)
    }
}
