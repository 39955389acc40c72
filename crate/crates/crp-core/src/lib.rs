//! Cost-effective response policies for product co-creation communities.
//!
//! A company invites customers to improve its product; participation is a
//! two-compartment population (active contributors `A`, inactive members `I`)
//! evolving under an ODE, and the company steers it by choosing a bounded
//! response rate `x(t)` (how fast it replies to contributions). The library
//! scores a policy by its net payoff — active person-time earned minus
//! response effort spent — and computes policies that maximize it.
//!
//! - [`CrpInstance`]: the 12 parameters of one scenario (initial counts,
//!   horizon, response bound, inflow/churn/idling rates, two influence
//!   functions, benefit and cost weights).
//! - [`integrate_state_forward`] / [`integrate_adjoint_backward`]: fixed-step
//!   fourth-order Runge–Kutta passes for the population and its sensitivity
//!   (adjoint) system.
//! - [`sweep`]: the main solver — alternating forward/backward passes with a
//!   closed-form pointwise control update ([`pointwise_optimal_control`])
//!   until the policy stops moving.
//! - [`dp_solve`] / [`dp_rollout`]: a discretized dynamic-programming
//!   baseline over a state grid, for cross-checking the sweep solver.
//! - [`compare_against_random`] and [`run_sweep`]: seeded random-policy
//!   baselines and one-parameter sensitivity sweeps with trend verdicts.
//! - [`format`]: the instance/policy text formats used by the CLI.
//!
//! Everything is deterministic given inputs and seeds; randomness comes only
//! from explicitly seeded generators.

pub mod benchmarks;
mod dp;
mod error;
mod experiments;
mod fbs;
pub mod format;
mod functionals;
mod grid;
mod influence;
mod instance;
mod integrator;
mod policy;
mod trajectory;

pub use dp::{dp_rollout, dp_solve, DpConfig, DpRollout, DpTables, StageRewardMode};
pub use error::{CrpError, Result};
pub use experiments::{
    check_trend, compare_against_random, random_feasible_policy, run_sweep, RandomComparison,
    SweepParameter, SweepRecord, SweepResult, SweepSpec, TrendMode, TrendVerdict,
    TREND_RELATIVE_TOLERANCE,
};
pub use fbs::{pointwise_optimal_control, sweep, FbsConfig, SolveReport};
pub use functionals::{benefit, cost_benefit, hamiltonian, policy_cost, trapezoid};
pub use grid::{GridConfig, TimeGrid};
pub use influence::InfluenceFunction;
pub use instance::CrpInstance;
pub use integrator::{integrate_adjoint_backward, integrate_state_forward};
pub use policy::ControlPolicy;
pub use trajectory::{AdjointTrajectory, StateTrajectory};
