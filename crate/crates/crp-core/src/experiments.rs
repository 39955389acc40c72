//! Experiment harness: seeded random-policy baselines, one-parameter
//! sensitivity sweeps, and trend verdicts over their objective curves.

use crate::error::{CrpError, Result};
use crate::fbs::{sweep, FbsConfig, SolveReport};
use crate::functionals::cost_benefit;
use crate::grid::{GridConfig, TimeGrid};
use crate::instance::CrpInstance;
use crate::integrator::integrate_state_forward;
use crate::policy::ControlPolicy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// Relative tolerance for monotonicity checks on objective curves.
pub const TREND_RELATIVE_TOLERANCE: f64 = 1e-6;

/// Draws one node value per grid point, uniformly on `[0, x_max]`, from the
/// given RNG stream of the seed.
fn policy_from_stream(grid: TimeGrid, x_max: f64, seed: u64, stream: u64) -> ControlPolicy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let values = (0..grid.node_count()).map(|_| rng.gen_range(0.0..=x_max)).collect();
    ControlPolicy::from_feasible(grid, values)
}

/// A uniformly random feasible policy; deterministic given the seed.
///
/// Stream 0 of the seed — the first baseline policy of
/// [`compare_against_random`] with the same seed is identical to it.
pub fn random_feasible_policy(grid: TimeGrid, x_max: f64, seed: u64) -> Result<ControlPolicy> {
    if !x_max.is_finite() || x_max <= 0.0 {
        return Err(CrpError::invalid(
            "x_max",
            format!("must be positive and finite, got {x_max}"),
        ));
    }
    Ok(policy_from_stream(grid, x_max, seed, 0))
}

/// Outcome of racing the solver against seeded random baselines.
#[derive(Debug, Clone)]
pub struct RandomComparison {
    /// The solver's full report on the instance.
    pub solve: SolveReport,
    /// Objective of each random policy, in stream order.
    pub random_objectives: Vec<f64>,
    /// Fraction of baselines with a strictly smaller objective.
    pub fraction_beaten: f64,
}

/// Solves the instance, evaluates `count` seeded uniform-random policies on
/// the same grid, and reports how many the solved policy strictly beats.
/// Baseline `i` uses RNG stream `i` of the seed.
pub fn compare_against_random(
    inst: &CrpInstance,
    grid: GridConfig,
    cfg: &FbsConfig,
    count: usize,
    seed: u64,
) -> Result<RandomComparison> {
    if count == 0 {
        return Err(CrpError::invalid("count", "need at least 1 random baseline".to_string()));
    }
    let solve = sweep(inst, grid, cfg)?;
    let tgrid = solve.final_policy.grid();
    let random_objectives = (0..count)
        .into_par_iter()
        .map(|i| {
            let policy = policy_from_stream(tgrid, inst.x_max, seed, i as u64);
            let state = integrate_state_forward(inst, &policy)?;
            cost_benefit(inst, &policy, &state)
        })
        .collect::<Result<Vec<f64>>>()?;
    let beaten = random_objectives.iter().filter(|&&j| solve.objective > j).count();
    let fraction_beaten = beaten as f64 / count as f64;
    Ok(RandomComparison { solve, random_objectives, fraction_beaten })
}

/// The instance parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    T,
    XMax,
    Mu,
    Delta1,
    Delta2,
    Alpha,
    Omega1,
    Omega2,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 8] = [
        Self::T,
        Self::XMax,
        Self::Mu,
        Self::Delta1,
        Self::Delta2,
        Self::Alpha,
        Self::Omega1,
        Self::Omega2,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            Self::T => "T",
            Self::XMax => "x_max",
            Self::Mu => "mu",
            Self::Delta1 => "delta1",
            Self::Delta2 => "delta2",
            Self::Alpha => "alpha",
            Self::Omega1 => "omega1",
            Self::Omega2 => "omega2",
        }
    }

    /// Overwrites the swept field on a copy of the base instance.
    pub fn apply(&self, inst: &mut CrpInstance, value: f64) {
        match self {
            Self::T => inst.t_end = value,
            Self::XMax => inst.x_max = value,
            Self::Mu => inst.mu = value,
            Self::Delta1 => inst.delta1 = value,
            Self::Delta2 => inst.delta2 = value,
            Self::Alpha => inst.alpha = value,
            Self::Omega1 => inst.omega1 = value,
            Self::Omega2 => inst.omega2 = value,
        }
    }

    /// The direction the objective is expected to move as this parameter
    /// grows: longer horizons, bigger budgets, faster inflow, and higher
    /// per-person benefit help; faster churn, faster inactivation, and
    /// costlier responses hurt. The budget effect saturates once the bound
    /// stops binding.
    pub fn expected_trend(&self) -> TrendMode {
        match self {
            Self::T | Self::Mu | Self::Omega2 => TrendMode::Increasing,
            Self::XMax => TrendMode::IncreasingSaturating,
            Self::Delta1 | Self::Delta2 | Self::Alpha | Self::Omega1 => TrendMode::Decreasing,
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SweepParameter {
    type Err = CrpError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.token() == s)
            .ok_or_else(|| {
                CrpError::Domain(format!(
                    "unknown sweep parameter '{s}' (expected one of T, x_max, mu, delta1, \
                     delta2, alpha, omega1, omega2)"
                ))
            })
    }
}

/// Shape a trend check asserts over an objective curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendMode {
    Increasing,
    Decreasing,
    /// Increasing, with late growth under 25% of early growth
    /// (quartile-mean comparison).
    IncreasingSaturating,
}

impl fmt::Display for TrendMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Increasing => "increasing",
            Self::Decreasing => "decreasing",
            Self::IncreasingSaturating => "increasing_saturating",
        })
    }
}

impl FromStr for TrendMode {
    type Err = CrpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "increasing" => Ok(Self::Increasing),
            "decreasing" => Ok(Self::Decreasing),
            "increasing_saturating" => Ok(Self::IncreasingSaturating),
            other => Err(CrpError::Domain(format!("unknown trend mode '{other}'"))),
        }
    }
}

/// Verdict of a trend check.
#[derive(Debug, Clone, PartialEq)]
pub enum TrendVerdict {
    Pass,
    /// Fewer than two points — nothing to check.
    Trivial,
    /// `index` is the position in the objective sequence where the expected
    /// shape first breaks.
    Fail { index: usize, detail: String },
}

impl TrendVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self, Self::Fail { .. })
    }
}

impl fmt::Display for TrendVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pass => f.write_str("pass"),
            Self::Trivial => f.write_str("trivial"),
            Self::Fail { index, detail } => write!(f, "fail at index {index}: {detail}"),
        }
    }
}

/// Checks an objective curve against an expected shape.
///
/// Monotonicity allows per-pair violations up to
/// [`TREND_RELATIVE_TOLERANCE`] of the larger neighbor's magnitude; the
/// saturating mode additionally requires the mean last-quartile step to be
/// below 25% of the mean first-quartile step.
pub fn check_trend(values: &[f64], objectives: &[f64], mode: TrendMode) -> Result<TrendVerdict> {
    if values.len() != objectives.len() {
        return Err(CrpError::Domain(format!(
            "{} sweep values but {} objectives",
            values.len(),
            objectives.len()
        )));
    }
    if objectives.len() < 2 {
        return Ok(TrendVerdict::Trivial);
    }
    let diffs: Vec<f64> = objectives.windows(2).map(|w| w[1] - w[0]).collect();
    for (i, w) in objectives.windows(2).enumerate() {
        let tolerance = TREND_RELATIVE_TOLERANCE * w[0].abs().max(w[1].abs());
        let violated = match mode {
            TrendMode::Increasing | TrendMode::IncreasingSaturating => diffs[i] < -tolerance,
            TrendMode::Decreasing => diffs[i] > tolerance,
        };
        if violated {
            return Ok(TrendVerdict::Fail {
                index: i + 1,
                detail: format!(
                    "objective moved from {} to {} against the expected {mode} trend",
                    w[0], w[1]
                ),
            });
        }
    }
    if mode == TrendMode::IncreasingSaturating {
        let nq = diffs.len().div_ceil(4);
        let first: f64 = diffs[..nq].iter().sum::<f64>() / nq as f64;
        let last: f64 = diffs[diffs.len() - nq..].iter().sum::<f64>() / nq as f64;
        if !(last < 0.25 * first) {
            return Ok(TrendVerdict::Fail {
                index: objectives.len() - 1,
                detail: format!(
                    "late growth {last} is not below 25% of early growth {first}; \
                     the curve does not flatten"
                ),
            });
        }
    }
    Ok(TrendVerdict::Pass)
}

/// One sensitivity sweep: a base instance, the parameter to vary, and the
/// ordered values to substitute.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: CrpInstance,
    pub parameter: SweepParameter,
    /// Strictly increasing, nonempty substitution values.
    pub values: Vec<f64>,
    /// Reserved for randomized baselines; the standard sweeps are
    /// deterministic and do not consume it.
    pub seed: u64,
}

impl SweepSpec {
    /// Checks the value list and that every substituted instance validates.
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(CrpError::Domain("sweep needs at least one value".into()));
        }
        if self.values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CrpError::Domain("sweep values must be strictly increasing".into()));
        }
        for &v in &self.values {
            let mut inst = self.base.clone();
            self.parameter.apply(&mut inst, v);
            inst.validate().map_err(|e| {
                CrpError::Domain(format!("sweep value {v} for {}: {e}", self.parameter))
            })?;
        }
        Ok(())
    }

    /// The base instance with the parameter set to `value`.
    pub fn instance_at(&self, value: f64) -> CrpInstance {
        let mut inst = self.base.clone();
        self.parameter.apply(&mut inst, value);
        inst
    }
}

/// Solver outcome at one sweep value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub value: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// All records of one sweep, in value order, plus the trend verdict against
/// the parameter's expected direction.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub records: Vec<SweepRecord>,
    pub verdict: TrendVerdict,
}

/// Runs the solver at every sweep value (in parallel, gathered in order)
/// and checks the objective curve against the parameter's expected trend.
pub fn run_sweep(spec: &SweepSpec, grid: GridConfig, cfg: &FbsConfig) -> Result<SweepResult> {
    spec.validate()?;
    let records = spec
        .values
        .par_iter()
        .map(|&v| {
            let inst = spec.instance_at(v);
            let report = sweep(&inst, grid, cfg)?;
            Ok(SweepRecord {
                value: v,
                objective: report.objective,
                iterations: report.iterations,
                converged: report.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let objectives: Vec<f64> = records.iter().map(|r| r.objective).collect();
    let verdict = check_trend(&spec.values, &objectives, spec.parameter.expected_trend())?;
    Ok(SweepResult { parameter: spec.parameter, records, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks;

    fn grid() -> TimeGrid {
        TimeGrid::new(4, 2.0).unwrap()
    }

    #[test]
    fn random_policies_are_deterministic_and_feasible() {
        let a = random_feasible_policy(grid(), 10.0, 7).unwrap();
        let b = random_feasible_policy(grid(), 10.0, 7).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(a.values().iter().all(|&v| (0.0..=10.0).contains(&v)));
        let c = random_feasible_policy(grid(), 10.0, 8).unwrap();
        assert_ne!(a.values(), c.values());
        assert!(random_feasible_policy(grid(), 0.0, 7).is_err());
    }

    #[test]
    fn sample_mean_concentrates_at_half_the_bound() {
        // 10⁴ draws observed at one grid point.
        let g = grid();
        let mean = (0..10_000)
            .map(|stream| policy_from_stream(g, 10.0, 42, stream).values()[0])
            .sum::<f64>()
            / 10_000.0;
        assert!((4.8..=5.2).contains(&mean), "sample mean {mean}");
    }

    #[test]
    fn comparison_first_baseline_reproduces_the_named_draw() {
        let inst = benchmarks::m1();
        let gc = GridConfig::new(50).unwrap();
        let cmp = compare_against_random(&inst, gc, &FbsConfig::default(), 3, 11).unwrap();
        assert_eq!(cmp.random_objectives.len(), 3);

        let tgrid = gc.realize(inst.t_end).unwrap();
        let named = random_feasible_policy(tgrid, inst.x_max, 11).unwrap();
        let state = integrate_state_forward(&inst, &named).unwrap();
        let j0 = cost_benefit(&inst, &named, &state).unwrap();
        assert_eq!(cmp.random_objectives[0], j0);
        assert!(cmp.fraction_beaten >= 0.0 && cmp.fraction_beaten <= 1.0);
    }

    #[test]
    fn sweep_parameter_tokens_round_trip() {
        for p in SweepParameter::ALL {
            assert_eq!(p.token().parse::<SweepParameter>().unwrap(), p);
        }
        assert!("xmax".parse::<SweepParameter>().is_err());
    }

    #[test]
    fn apply_sets_the_right_field() {
        let base = benchmarks::sensitivity_base();
        for p in SweepParameter::ALL {
            let mut inst = base.clone();
            p.apply(&mut inst, 0.0421);
            let read = match p {
                SweepParameter::T => inst.t_end,
                SweepParameter::XMax => inst.x_max,
                SweepParameter::Mu => inst.mu,
                SweepParameter::Delta1 => inst.delta1,
                SweepParameter::Delta2 => inst.delta2,
                SweepParameter::Alpha => inst.alpha,
                SweepParameter::Omega1 => inst.omega1,
                SweepParameter::Omega2 => inst.omega2,
            };
            assert_eq!(read, 0.0421);
        }
    }

    #[test]
    fn trend_examples() {
        let v = [1.0, 2.0, 3.0];
        assert_eq!(
            check_trend(&v, &[1.0, 2.0, 3.0], TrendMode::Increasing).unwrap(),
            TrendVerdict::Pass
        );
        match check_trend(&v, &[3.0, 2.0, 2.5], TrendMode::Decreasing).unwrap() {
            TrendVerdict::Fail { index, .. } => assert_eq!(index, 2),
            other => panic!("expected a failure, got {other}"),
        }
        assert_eq!(
            check_trend(&[1.0], &[5.0], TrendMode::Increasing).unwrap(),
            TrendVerdict::Trivial
        );
        assert!(check_trend(&[1.0, 2.0], &[1.0], TrendMode::Increasing).is_err());
    }

    #[test]
    fn tiny_dips_within_tolerance_pass() {
        let v = [1.0, 2.0, 3.0];
        let j = [1e6, 2e6, 2e6 * (1.0 - 1e-8)];
        assert_eq!(check_trend(&v, &j, TrendMode::Increasing).unwrap(), TrendVerdict::Pass);
        let j = [1e6, 2e6, 2e6 * (1.0 - 1e-5)];
        assert!(matches!(
            check_trend(&v, &j, TrendMode::Increasing).unwrap(),
            TrendVerdict::Fail { .. }
        ));
    }

    #[test]
    fn saturating_requires_flattening() {
        let v: Vec<f64> = (0..8).map(f64::from).collect();
        let flattening = [0.0, 10.0, 18.0, 24.0, 25.0, 25.5, 25.6, 25.65];
        assert_eq!(
            check_trend(&v, &flattening, TrendMode::IncreasingSaturating).unwrap(),
            TrendVerdict::Pass
        );
        let linear: Vec<f64> = (0..8).map(|i| 3.0 * f64::from(i)).collect();
        assert!(matches!(
            check_trend(&v, &linear, TrendMode::IncreasingSaturating).unwrap(),
            TrendVerdict::Fail { .. }
        ));
    }

    #[test]
    fn sweep_spec_validation() {
        let base = benchmarks::sensitivity_base();
        let ok = SweepSpec {
            base: base.clone(),
            parameter: SweepParameter::Mu,
            values: vec![10.0, 11.0, 12.0],
            seed: 0,
        };
        assert!(ok.validate().is_ok());
        assert!(SweepSpec { values: vec![], ..ok.clone() }.validate().is_err());
        assert!(SweepSpec { values: vec![10.0, 10.0], ..ok.clone() }.validate().is_err());
        // A value that produces an invalid instance is named in the error.
        let bad = SweepSpec {
            parameter: SweepParameter::Delta1,
            values: vec![-0.5, 0.1],
            ..ok
        };
        let err = bad.validate().unwrap_err().to_string();
        assert!(err.contains("-0.5"), "error should name the value: {err}");
    }

    #[test]
    fn expected_trends_match_the_documented_directions() {
        use SweepParameter::*;
        for (p, mode) in [
            (T, TrendMode::Increasing),
            (XMax, TrendMode::IncreasingSaturating),
            (Mu, TrendMode::Increasing),
            (Delta1, TrendMode::Decreasing),
            (Delta2, TrendMode::Decreasing),
            (Alpha, TrendMode::Decreasing),
            (Omega1, TrendMode::Decreasing),
            (Omega2, TrendMode::Increasing),
        ] {
            assert_eq!(p.expected_trend(), mode);
        }
    }
}
