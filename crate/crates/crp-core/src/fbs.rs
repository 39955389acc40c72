//! Forward–backward sweep solver.
//!
//! Starting from the all-zero policy, each sweep integrates the state
//! forward, the adjoint backward, replaces the policy by the pointwise
//! maximizer of the Hamiltonian (optionally blended with the previous
//! iterate), and stops once the sup-norm change falls below a threshold.
//! Non-convergence within the iteration budget is reported, not raised.

use crate::error::{CrpError, Result};
use crate::functionals::cost_benefit;
use crate::grid::GridConfig;
use crate::instance::CrpInstance;
use crate::integrator::{integrate_adjoint_backward, integrate_state_forward};
use crate::policy::ControlPolicy;
use crate::trajectory::{AdjointTrajectory, StateTrajectory};

/// Solver knobs: stopping threshold, iteration budget, and the blend factor
/// carried over from the previous iterate (0 = pure pointwise update).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbsConfig {
    /// Stop when the largest node-wise policy change drops below this.
    pub epsilon: f64,
    /// Sweep budget; exceeding it yields `converged = false`, not an error.
    pub max_iterations: usize,
    /// Fraction of the previous iterate kept in each update, in `[0, 1)`.
    pub relaxation: f64,
}

impl Default for FbsConfig {
    fn default() -> Self {
        Self { epsilon: 1e-6, max_iterations: 100, relaxation: 0.0 }
    }
}

impl FbsConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(CrpError::invalid(
                "epsilon",
                format!("must be positive and finite, got {}", self.epsilon),
            ));
        }
        if self.max_iterations == 0 {
            return Err(CrpError::invalid("max_iterations", "must be at least 1".to_string()));
        }
        if !self.relaxation.is_finite() || !(0.0..1.0).contains(&self.relaxation) {
            return Err(CrpError::invalid(
                "relaxation",
                format!("must lie in [0, 1), got {}", self.relaxation),
            ));
        }
        Ok(())
    }
}

/// Everything a solve run produces: the iterate sequence (starting with the
/// all-zero initial policy), the final policy with its trajectories and
/// objective value, and the convergence record.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Policy iterates `x⁰, x¹, …`; the first entry is the all-zero start.
    pub iterates: Vec<ControlPolicy>,
    pub final_policy: ControlPolicy,
    pub state: StateTrajectory,
    pub adjoint: AdjointTrajectory,
    /// Cost-benefit objective of `final_policy`.
    pub objective: f64,
    /// Number of sweeps performed.
    pub iterations: usize,
    pub converged: bool,
    /// Sup-norm policy change after each sweep; `sup_norm_history[k]` is the
    /// distance between iterates `k` and `k + 1`.
    pub sup_norm_history: Vec<f64>,
}

/// The response rate maximizing the Hamiltonian at one node, given
/// `coeff = (λ1 − λ2)·I` there.
///
/// Three cases: a non-positive (or non-finite) coefficient means spending
/// cannot pay off, giving 0; if the marginal value still beats the marginal
/// cost at the budget cap, the cap is optimal; if it is already beaten at
/// zero spending, zero is optimal; otherwise the unique stationary point
/// `β1′(x) = omega1/coeff` is taken, clamped to the feasible interval.
pub fn pointwise_optimal_control(inst: &CrpInstance, coeff: f64) -> f64 {
    if !coeff.is_finite() || coeff <= 0.0 {
        return 0.0;
    }
    let slope_at_cap = inst.beta1.derivative_clamped(inst.x_max);
    if coeff * slope_at_cap > inst.omega1 {
        return inst.x_max;
    }
    let slope_at_zero = inst.beta1.derivative_clamped(0.0);
    if coeff * slope_at_zero < inst.omega1 {
        return 0.0;
    }
    let z = inst.beta1.interior_maximizer_arg(inst.omega1 / coeff);
    z.clamp(0.0, inst.x_max)
}

/// Runs the forward–backward sweep for `instance` on the realized grid.
///
/// The returned report's `state` and `adjoint` are re-integrated under the
/// final policy so all fields describe the same control.
pub fn sweep(instance: &CrpInstance, grid: GridConfig, config: &FbsConfig) -> Result<SolveReport> {
    instance.validate()?;
    config.validate()?;
    let grid = grid.realize(instance.t_end)?;
    let node_count = grid.node_count();

    let mut policy = ControlPolicy::zero(grid);
    let mut iterates = vec![policy.clone()];
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for _ in 1..=config.max_iterations {
        iterations += 1;
        let state = integrate_state_forward(instance, &policy)?;
        let adjoint = integrate_adjoint_backward(instance, &policy, &state)?;

        let mut next = Vec::with_capacity(node_count);
        let mut delta: f64 = 0.0;
        for j in 0..node_count {
            let coeff = (adjoint.lambda1()[j] - adjoint.lambda2()[j]) * state.inactive()[j];
            let candidate = pointwise_optimal_control(instance, coeff);
            let blended =
                (1.0 - config.relaxation) * candidate + config.relaxation * policy.values()[j];
            delta = delta.max((blended - policy.values()[j]).abs());
            next.push(blended);
        }
        history.push(delta);
        policy = ControlPolicy::from_feasible(grid, next);
        iterates.push(policy.clone());
        if delta < config.epsilon {
            converged = true;
            break;
        }
    }

    let state = integrate_state_forward(instance, &policy)?;
    let adjoint = integrate_adjoint_backward(instance, &policy, &state)?;
    let objective = cost_benefit(instance, &policy, &state)?;
    Ok(SolveReport {
        iterates,
        final_policy: policy,
        state,
        adjoint,
        objective,
        iterations,
        converged,
        sup_norm_history: history,
    })
}
