//! Scalar functionals on sampled policies and trajectories: response cost,
//! engagement benefit, the combined cost-benefit objective, and the
//! Hamiltonian used by the optimality system.

use crate::error::{CrpError, Result};
use crate::grid::TimeGrid;
use crate::instance::CrpInstance;
use crate::policy::ControlPolicy;
use crate::trajectory::StateTrajectory;

/// Composite trapezoid quadrature of node samples over the grid's horizon.
///
/// Second-order accurate, matching both the piecewise-linear representation
/// of policies and the order at which trajectories are sampled.
pub fn trapezoid(grid: &TimeGrid, values: &[f64]) -> Result<f64> {
    if values.len() != grid.node_count() {
        return Err(CrpError::GridMismatch(format!(
            "{} samples for a grid with {} nodes",
            values.len(),
            grid.node_count()
        )));
    }
    Ok(trapezoid_samples(grid.step(), values))
}

/// Trapezoid rule on raw samples with step `h`; callers guarantee `len ≥ 2`.
pub(crate) fn trapezoid_samples(h: f64, values: &[f64]) -> f64 {
    debug_assert!(values.len() >= 2);
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * values[0] + interior + 0.5 * values[values.len() - 1])
}

/// Total spending of a policy: `omega1 · ∫ x(t) dt`.
pub fn policy_cost(instance: &CrpInstance, policy: &ControlPolicy) -> f64 {
    instance.omega1 * trapezoid_samples(policy.grid().step(), policy.values())
}

/// Accumulated engagement value of a state path: `omega2 · ∫ A(t) dt`.
pub fn benefit(instance: &CrpInstance, state: &StateTrajectory) -> f64 {
    instance.omega2 * trapezoid_samples(state.grid().step(), state.active())
}

/// The objective `J = benefit − policy_cost`, requiring both inputs on the
/// same grid.
pub fn cost_benefit(
    instance: &CrpInstance,
    policy: &ControlPolicy,
    state: &StateTrajectory,
) -> Result<f64> {
    if policy.grid() != state.grid() {
        return Err(CrpError::GridMismatch(
            "policy and state trajectory sampled on different grids".into(),
        ));
    }
    Ok(benefit(instance, state) - policy_cost(instance, policy))
}

/// Pointwise Hamiltonian of the control problem:
/// running reward `omega2·A − omega1·x` plus the adjoints paired with the
/// state velocities.
pub fn hamiltonian(
    instance: &CrpInstance,
    a: f64,
    i: f64,
    x: f64,
    lambda1: f64,
    lambda2: f64,
) -> f64 {
    let activation = instance.activation_rate(x, a) * i;
    let da = activation - instance.alpha * a - instance.delta1 * a;
    let di = instance.mu - activation + instance.alpha * a - instance.delta2 * i;
    instance.omega2 * a - instance.omega1 * x + lambda1 * da + lambda2 * di
}
