//! File payload assembly: the shared CSV schema and pretty JSON.
//!
//! Every tabular output uses the same six-column layout
//! `t,x,A,I,lambda1,lambda2`; producers without adjoint data leave the last
//! two columns empty. All numbers are written with 12 significant digits,
//! and everything here is a pure function of its inputs, so identical runs
//! produce byte-identical files.

use crp_core::format::format_number;
use crp_core::{AdjointTrajectory, ControlPolicy, StateTrajectory, SweepRecord};

const HEADER: &str = "t,x,A,I,lambda1,lambda2\n";

/// Policy + trajectory rows on the policy's own grid; adjoint columns are
/// filled when available.
pub fn policy_csv(
    policy: &ControlPolicy,
    state: &StateTrajectory,
    adjoint: Option<&AdjointTrajectory>,
) -> String {
    let grid = policy.grid();
    let mut out = String::from(HEADER);
    for (i, t) in grid.nodes().enumerate() {
        let (l1, l2) = match adjoint {
            Some(adj) => (format_number(adj.lambda1()[i]), format_number(adj.lambda2()[i])),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_number(t),
            format_number(policy.values()[i]),
            format_number(state.active()[i]),
            format_number(state.inactive()[i]),
            l1,
            l2,
        ));
    }
    out
}

/// Rows at the nodes of a coarse policy, sampling the community state from a
/// finer evaluation trajectory; adjoint columns stay empty.
pub fn coarse_policy_csv(policy: &ControlPolicy, fine_state: &StateTrajectory) -> String {
    let grid = policy.grid();
    let mut out = String::from(HEADER);
    for (i, t) in grid.nodes().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},,\n",
            format_number(t),
            format_number(policy.values()[i]),
            format_number(fine_state.active_at(t)),
            format_number(fine_state.inactive_at(t)),
        ));
    }
    out
}

/// One row per random baseline, in draw order.
pub fn compare_csv(objectives: &[f64]) -> String {
    let mut out = String::from("index,objective\n");
    for (i, j) in objectives.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", format_number(*j)));
    }
    out
}

/// One row per sweep value.
pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("value,objective,iterations,converged\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_number(r.value),
            format_number(r.objective),
            r.iterations,
            r.converged,
        ));
    }
    out
}

/// Pretty-printed JSON with a trailing newline. Object keys are sorted, so
/// the bytes are deterministic.
pub fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    text.push('\n');
    text
}
