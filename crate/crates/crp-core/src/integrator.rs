//! Fixed-step RK4 integration of the community-state system (forward in
//! time) and of its adjoint system (backward, by integrating the
//! time-reversed system forward).

use crate::error::{CrpError, Result};
use crate::instance::CrpInstance;
use crate::policy::ControlPolicy;
use crate::trajectory::{AdjointTrajectory, StateTrajectory};

/// State velocities `(dA/dt, dI/dt)` at `(a, i)` under response rate `x`.
///
/// The activation term clamps its inputs to `≥ 0` (roundoff guard — the
/// influence functions are only defined there), while the linear inflow,
/// transfer, and churn terms use the raw values so the field stays smooth
/// across a node that dips a rounding error below zero.
fn state_rhs(inst: &CrpInstance, a: f64, i: f64, x: f64) -> (f64, f64) {
    let activation = inst.activation_rate(x, a) * i.max(0.0);
    let da = activation - inst.alpha * a - inst.delta1 * a;
    let di = inst.mu - activation + inst.alpha * a - inst.delta2 * i;
    (da, di)
}

/// Adjoint velocities `(dλ1/dt, dλ2/dt)` given the state and control at the
/// same instant.
fn adjoint_rhs(inst: &CrpInstance, l1: f64, l2: f64, a: f64, i: f64, x: f64) -> (f64, f64) {
    let b = inst.activation_rate(x, a);
    let d2a = inst.beta2.derivative_clamped(a) * i.max(0.0);
    let dl1 = -inst.omega2 + (inst.alpha + inst.delta1 - d2a) * l1 - (inst.alpha - d2a) * l2;
    let dl2 = -b * l1 + (inst.delta2 + b) * l2;
    (dl1, dl2)
}

/// Integrates the state system from `(A0, I0)` over the policy's grid with
/// classical RK4. Stage controls are the node value, the interval midpoint
/// (twice), and the next node value, consistent with the piecewise-linear
/// policy representation.
pub fn integrate_state_forward(
    inst: &CrpInstance,
    policy: &ControlPolicy,
) -> Result<StateTrajectory> {
    let grid = policy.grid();
    let n = grid.n();
    let h = grid.step();
    let x = policy.values();
    let mut active = Vec::with_capacity(n + 1);
    let mut inactive = Vec::with_capacity(n + 1);
    let (mut a, mut i) = (inst.a0, inst.i0);
    active.push(a);
    inactive.push(i);
    for k in 0..n {
        let xm = 0.5 * (x[k] + x[k + 1]);
        let k1 = state_rhs(inst, a, i, x[k]);
        let k2 = state_rhs(inst, a + 0.5 * h * k1.0, i + 0.5 * h * k1.1, xm);
        let k3 = state_rhs(inst, a + 0.5 * h * k2.0, i + 0.5 * h * k2.1, xm);
        let k4 = state_rhs(inst, a + h * k3.0, i + h * k3.1, x[k + 1]);
        a += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        i += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !a.is_finite() || !i.is_finite() {
            return Err(CrpError::NonFinite {
                t: grid.node(k + 1),
                detail: format!("state reached (A, I) = ({a}, {i})"),
            });
        }
        active.push(a);
        inactive.push(i);
    }
    Ok(StateTrajectory::new(grid, active, inactive))
}

/// Integrates the adjoint system from the terminal condition
/// `λ1(T) = λ2(T) = 0` back to `t = 0`.
///
/// Implemented by substituting `y(τ) = λ(T − τ)` and advancing `y' = −f`
/// forward with the same RK4 scheme; state and control values at off-node
/// stage times come from linear interpolation.
pub fn integrate_adjoint_backward(
    inst: &CrpInstance,
    policy: &ControlPolicy,
    state: &StateTrajectory,
) -> Result<AdjointTrajectory> {
    let grid = policy.grid();
    if grid != state.grid() {
        return Err(CrpError::GridMismatch(
            "policy and state trajectory sampled on different grids".into(),
        ));
    }
    let n = grid.n();
    let h = grid.step();
    let t_end = grid.t_end();
    let mut lambda1 = vec![0.0; n + 1];
    let mut lambda2 = vec![0.0; n + 1];
    let (mut l1, mut l2) = (0.0, 0.0);
    let reversed = |l1: f64, l2: f64, tau: f64| -> (f64, f64) {
        let t = t_end - tau;
        let a = grid.lerp(state.active(), t);
        let i = grid.lerp(state.inactive(), t);
        let x = grid.lerp(policy.values(), t);
        let (d1, d2) = adjoint_rhs(inst, l1, l2, a, i, x);
        (-d1, -d2)
    };
    for m in 0..n {
        let tau = m as f64 * h;
        let k1 = reversed(l1, l2, tau);
        let k2 = reversed(l1 + 0.5 * h * k1.0, l2 + 0.5 * h * k1.1, tau + 0.5 * h);
        let k3 = reversed(l1 + 0.5 * h * k2.0, l2 + 0.5 * h * k2.1, tau + 0.5 * h);
        let k4 = reversed(l1 + h * k3.0, l2 + h * k3.1, tau + h);
        l1 += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        l2 += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !l1.is_finite() || !l2.is_finite() {
            return Err(CrpError::NonFinite {
                t: t_end - (tau + h),
                detail: format!("adjoint reached (λ1, λ2) = ({l1}, {l2})"),
            });
        }
        lambda1[n - (m + 1)] = l1;
        lambda2[n - (m + 1)] = l2;
    }
    Ok(AdjointTrajectory::new(grid, lambda1, lambda2))
}
