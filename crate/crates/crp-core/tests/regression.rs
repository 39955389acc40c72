//! Frozen end-to-end solver results on the benchmark instances.
//!
//! The pinned numbers were produced once by this code path at the default
//! grid and solver settings and act as change detectors. Objective pins use
//! a 1e-8 relative band (well above summation-order noise, far below any
//! behavioral change); iteration counts are exact; per-sweep sup-norm pins
//! use 1e-4 since each entry sits orders of magnitude apart from its
//! neighbors.

use approx::assert_relative_eq;
use crp_core::{
    benchmarks, cost_benefit, integrate_state_forward, sweep, ControlPolicy, CrpInstance,
    FbsConfig, GridConfig, SolveReport,
};

fn solve(inst: &CrpInstance) -> SolveReport {
    sweep(inst, GridConfig::default(), &FbsConfig::default()).unwrap()
}

fn objective_of_constant(inst: &CrpInstance, level: f64) -> f64 {
    let grid = GridConfig::default().realize(inst.t_end).unwrap();
    let policy = ControlPolicy::constant(grid, level, inst.x_max).unwrap();
    let state = integrate_state_forward(inst, &policy).unwrap();
    cost_benefit(inst, &policy, &state).unwrap()
}

#[test]
fn benchmark_one_solution_is_stable() {
    let inst = benchmarks::m1();
    let r = solve(&inst);
    assert!(r.converged);
    assert_eq!(r.iterations, 9);
    assert_relative_eq!(r.objective, 4083464.307778882, max_relative = 1e-8);

    // The iterate record: the zero start plus one policy per sweep.
    assert_eq!(r.iterates.len(), r.iterations + 1);
    assert!(r.iterates[0].values().iter().all(|&v| v == 0.0));
    assert_eq!(r.sup_norm_history.len(), r.iterations);
    // The first sweep lifts the initial response from 0 to the cap.
    assert_eq!(r.sup_norm_history[0], 10.0);
    let expected_history = [
        10.0, 3.048836, 0.6546258, 0.07191915, 0.007256767, 0.000652637, 5.993056e-5,
        5.553242e-6, 5.190572e-7,
    ];
    for (got, want) in r.sup_norm_history.iter().zip(expected_history) {
        assert_relative_eq!(got, &want, max_relative = 1e-4);
    }

    // Boundary structure of the converged policy: full response at the
    // start, none at the horizon (the adjoint vanishes there).
    assert_eq!(r.final_policy.values()[0], inst.x_max);
    assert_eq!(*r.final_policy.values().last().unwrap(), 0.0);

    // Terminal community state under the converged policy.
    assert_relative_eq!(
        *r.state.active().last().unwrap(),
        4713.640952187551,
        max_relative = 1e-8
    );
    assert_relative_eq!(
        *r.state.inactive().last().unwrap(),
        5629.909344192057,
        max_relative = 1e-8
    );

    // The reported objective is exactly the functional of the reported
    // policy and trajectory.
    let recomputed = cost_benefit(&inst, &r.final_policy, &r.state).unwrap();
    assert_eq!(r.objective, recomputed);
}

#[test]
fn benchmark_two_solution_is_stable() {
    let inst = benchmarks::m2();
    let r = solve(&inst);
    assert!(r.converged);
    assert_eq!(r.iterations, 14);
    assert_relative_eq!(r.objective, 7307317.709672959, max_relative = 1e-8);
    assert_eq!(r.final_policy.values()[0], inst.x_max);
    assert_eq!(*r.final_policy.values().last().unwrap(), 0.0);
}

#[test]
fn benchmark_three_solution_is_stable() {
    let inst = benchmarks::m3();
    let r = solve(&inst);
    assert!(r.converged);
    assert_eq!(r.iterations, 13);
    assert_relative_eq!(r.objective, 9805719.129301192, max_relative = 1e-8);
    assert_eq!(r.final_policy.values()[0], inst.x_max);
    assert_eq!(*r.final_policy.values().last().unwrap(), 0.0);
}

#[test]
fn fixed_policy_objectives_are_stable() {
    let inst = benchmarks::m1();
    assert_relative_eq!(objective_of_constant(&inst, 0.0), 1795860.4862461663, max_relative = 1e-10);
    assert_relative_eq!(objective_of_constant(&inst, 10.0), 4061676.4935472533, max_relative = 1e-10);
    assert_relative_eq!(objective_of_constant(&inst, 5.0), 3918897.932689898, max_relative = 1e-10);
}

#[test]
fn solved_policy_dominates_constant_references() {
    let inst = benchmarks::m1();
    let j_star = solve(&inst).objective;
    for level in [0.0, 5.0, 10.0] {
        assert!(
            j_star > objective_of_constant(&inst, level),
            "constant policy at {level} should not beat the solver"
        );
    }
}

#[test]
fn relaxation_reaches_the_same_fixed_point() {
    let inst = benchmarks::m1();
    let damped = FbsConfig { relaxation: 0.5, ..FbsConfig::default() };
    let r = sweep(&inst, GridConfig::default(), &damped).unwrap();
    assert!(r.converged);
    assert!(r.iterations > 9, "damping should slow convergence, took {}", r.iterations);
    assert_relative_eq!(r.objective, 4083464.307778882, max_relative = 1e-6);
}
