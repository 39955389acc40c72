//! Dynamic-programming baseline on a discretized (time × A × I) grid.
//!
//! Backward value recursion with nearest-neighbor state snapping and a
//! quadratic smoothness regularizer, plus a forward rollout that extracts a
//! single policy for comparison against the sweep solver. The state advance
//! per stage is one RK4 step under a constant control.

use crate::error::{CrpError, Result};
use crate::grid::TimeGrid;
use crate::instance::CrpInstance;
use crate::policy::ControlPolicy;
use std::fmt;
use std::str::FromStr;

/// Which per-stage reward the recursion maximizes.
///
/// `Corrected` (default) credits active participants and penalizes the
/// regularizer: `(omega2·A' − omega1·x − λ·x²)·(T/N)`. `Literal` keeps the
/// alternative formula `omega2·I' − omega1·x + λ·x²` — crediting the
/// *inactive* pool, unscaled, with the regularizer added — so the two
/// variants can be compared side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageRewardMode {
    Corrected,
    Literal,
}

impl fmt::Display for StageRewardMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Corrected => "corrected",
            Self::Literal => "literal",
        })
    }
}

impl FromStr for StageRewardMode {
    type Err = CrpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(Self::Corrected),
            "literal" => Ok(Self::Literal),
            other => Err(CrpError::Domain(format!(
                "unknown stage-reward mode '{other}' (expected 'corrected' or 'literal')"
            ))),
        }
    }
}

/// Resolution and shaping knobs of the dynamic program.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpConfig {
    /// Time steps over `[0, T]`.
    pub n: usize,
    /// State-grid points per axis on `[0, S]`.
    pub m: usize,
    /// Control-grid resolution: candidates are `q·x_max/P` for `q = 0…P`.
    pub p: usize,
    /// State box bound `S`; `None` derives `1.2·max(A0+I0, mu/min(δ1, δ2))`.
    pub s: Option<f64>,
    /// Smoothness regularizer coefficient `λ ≥ 0`.
    pub lambda_reg: f64,
    pub mode: StageRewardMode,
}

impl Default for DpConfig {
    /// Desk-scale defaults: minutes of runtime at benchmark sizes.
    fn default() -> Self {
        Self { n: 50, m: 400, p: 50, s: None, lambda_reg: 0.1, mode: StageRewardMode::Corrected }
    }
}

/// Rough memory guard: reject table allocations beyond this many bytes.
const MAX_TABLE_BYTES: u128 = 1 << 30;

impl DpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(CrpError::DpConfig("need at least 1 time step".into()));
        }
        if self.m < 2 {
            return Err(CrpError::DpConfig(format!(
                "need at least 2 state-grid points per axis, got {}",
                self.m
            )));
        }
        if self.p == 0 || self.p + 1 > u16::MAX as usize {
            return Err(CrpError::DpConfig(format!(
                "control resolution must lie in [1, {}], got {}",
                u16::MAX as usize - 1,
                self.p
            )));
        }
        if !self.lambda_reg.is_finite() || self.lambda_reg < 0.0 {
            return Err(CrpError::DpConfig(format!(
                "regularizer must be ≥ 0 and finite, got {}",
                self.lambda_reg
            )));
        }
        if let Some(s) = self.s {
            if !s.is_finite() || s <= 0.0 {
                return Err(CrpError::DpConfig(format!(
                    "state bound must be positive and finite, got {s}"
                )));
            }
        }
        let mm = self.m as u128 * self.m as u128;
        let bytes = mm * (self.p as u128 + 1) * 12   // successor + reward precompute
            + mm * (self.n as u128 + 1) * 8          // value table
            + mm * self.n as u128 * 2; // control table
        if bytes > MAX_TABLE_BYTES {
            return Err(CrpError::DpConfig(format!(
                "tables would need {bytes} bytes (limit {MAX_TABLE_BYTES}); reduce M, N, or P"
            )));
        }
        Ok(())
    }

    /// The state box bound actually used for `inst`.
    pub fn resolved_bound(&self, inst: &CrpInstance) -> f64 {
        self.s.unwrap_or_else(|| {
            1.2 * (inst.a0 + inst.i0).max(inst.mu / inst.delta1.min(inst.delta2))
        })
    }
}

/// Filled value/control tables of one dynamic-programming run.
///
/// Layer `i` of the value table is the cost-benefit-to-go from time step `i`;
/// layer `N` is identically zero. The control table stores the maximizing
/// candidate per `(time step, A-cell, I-cell)`.
#[derive(Debug, Clone)]
pub struct DpTables {
    n: usize,
    m: usize,
    bound: f64,
    hs: f64,
    dt: f64,
    control_levels: Vec<f64>,
    /// `n · m²` control indices, layer-major.
    controls: Vec<u16>,
    /// `(n + 1) · m²` values-to-go, layer-major.
    values: Vec<f64>,
    grid_bound_clamped: bool,
}

impl DpTables {
    /// Number of time steps.
    pub fn n(&self) -> usize {
        self.n
    }

    /// State-grid points per axis.
    pub fn m(&self) -> usize {
        self.m
    }

    /// The state box bound `S` in effect.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// The `P + 1` candidate control values.
    pub fn control_levels(&self) -> &[f64] {
        &self.control_levels
    }

    /// Optimal control value at `(time step i, A-cell j, I-cell k)`.
    pub fn control_value(&self, i: usize, j: usize, k: usize) -> f64 {
        self.control_levels[self.controls[i * self.m * self.m + j * self.m + k] as usize]
    }

    /// Cost-benefit-to-go at `(layer i, A-cell j, I-cell k)`; layer `n` is 0.
    pub fn value(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[i * self.m * self.m + j * self.m + k]
    }

    /// True when some scored transition left the state box and was clamped
    /// to `S` for the lookup — a sign the bound may be too tight.
    pub fn grid_bound_clamped(&self) -> bool {
        self.grid_bound_clamped
    }

    fn consistent_with(&self, cfg: &DpConfig, inst: &CrpInstance) -> Result<()> {
        if cfg.n != self.n
            || cfg.m != self.m
            || cfg.p + 1 != self.control_levels.len()
            || cfg.resolved_bound(inst) != self.bound
        {
            return Err(CrpError::DpConfig(
                "tables were produced under a different configuration".into(),
            ));
        }
        Ok(())
    }
}

/// A rolled-out policy plus the post-hoc bound check along its path.
#[derive(Debug, Clone)]
pub struct DpRollout {
    pub policy: ControlPolicy,
    /// True when a pre-snap successor along the realized path exceeded `S`.
    pub bound_exceeded: bool,
}

/// Nearest grid index for `v ≥ 0` with spacing `hs`; exact midpoints snap to
/// the lower index.
fn snap(v: f64, hs: f64, m: usize) -> usize {
    let j = (v / hs - 0.5).ceil();
    (j.max(0.0) as usize).min(m - 1)
}

/// One stage transition from `(a, i)` under constant control `x`: a single
/// RK4 step of length `dt`, then clamp into `[0, S]` and snap to the nearest
/// cell. Returns the pre-clamp successor, the flat cell index, and whether
/// the pre-clamp successor exceeded `S`.
fn transition(
    inst: &CrpInstance,
    x: f64,
    a: f64,
    i: f64,
    dt: f64,
    bound: f64,
    hs: f64,
    m: usize,
) -> Result<(f64, f64, usize, bool)> {
    let b1x = inst.beta1.eval_clamped(x);
    let rhs = |a: f64, i: f64| -> (f64, f64) {
        let b = b1x + inst.beta2.eval_clamped(a);
        let act = b * i.max(0.0);
        (
            act - (inst.alpha + inst.delta1) * a,
            inst.mu - act + inst.alpha * a - inst.delta2 * i,
        )
    };
    let k1 = rhs(a, i);
    let k2 = rhs(a + 0.5 * dt * k1.0, i + 0.5 * dt * k1.1);
    let k3 = rhs(a + 0.5 * dt * k2.0, i + 0.5 * dt * k2.1);
    let k4 = rhs(a + dt * k3.0, i + dt * k3.1);
    let a1 = a + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
    let i1 = i + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    if !a1.is_finite() || !i1.is_finite() {
        return Err(CrpError::NonFinite {
            t: dt,
            detail: format!("stage transition from ({a}, {i}) reached ({a1}, {i1})"),
        });
    }
    let exceeded = a1 > bound || i1 > bound;
    let jj = snap(a1.clamp(0.0, bound), hs, m);
    let kk = snap(i1.clamp(0.0, bound), hs, m);
    Ok((a1, i1, jj * m + kk, exceeded))
}

/// Stage reward at the pre-snap successor `(a1, i1)` under control `x`.
fn stage_reward(
    inst: &CrpInstance,
    mode: StageRewardMode,
    lambda_reg: f64,
    dt: f64,
    x: f64,
    a1: f64,
    i1: f64,
) -> f64 {
    match mode {
        StageRewardMode::Corrected => {
            (inst.omega2 * a1 - inst.omega1 * x - lambda_reg * x * x) * dt
        }
        StageRewardMode::Literal => inst.omega2 * i1 - inst.omega1 * x + lambda_reg * x * x,
    }
}

/// Fills the value and control tables by backward recursion.
///
/// The caller guarantees a validated instance (the state bound derivation
/// divides by `min(δ1, δ2)`); the configuration is validated here. The
/// dynamics are autonomous, so each (cell, candidate) successor and stage
/// reward is precomputed once and reused across all time layers.
pub fn dp_solve(inst: &CrpInstance, cfg: &DpConfig) -> Result<DpTables> {
    cfg.validate()?;
    let bound = cfg.resolved_bound(inst);
    if !bound.is_finite() || bound <= 0.0 {
        return Err(CrpError::DpConfig(format!(
            "derived state bound {bound} is unusable; pass an explicit S"
        )));
    }
    let (n, m, p) = (cfg.n, cfg.m, cfg.p);
    let mm = m * m;
    let hs = bound / (m - 1) as f64;
    let dt = inst.t_end / n as f64;
    let control_levels: Vec<f64> =
        (0..=p).map(|q| inst.x_max * q as f64 / p as f64).collect();

    // (cell, candidate) → successor cell + stage reward, time-independent.
    let mut succ = vec![0u32; mm * (p + 1)];
    let mut rew = vec![0.0f64; mm * (p + 1)];
    let mut grid_bound_clamped = false;
    for (q, &xq) in control_levels.iter().enumerate() {
        for j in 0..m {
            let a = j as f64 * hs;
            for k in 0..m {
                let i = k as f64 * hs;
                let (a1, i1, cell, exceeded) =
                    transition(inst, xq, a, i, dt, bound, hs, m)?;
                grid_bound_clamped |= exceeded;
                let idx = q * mm + j * m + k;
                succ[idx] = cell as u32;
                rew[idx] = stage_reward(inst, cfg.mode, cfg.lambda_reg, dt, xq, a1, i1);
            }
        }
    }

    let mut values = vec![0.0f64; (n + 1) * mm];
    let mut controls = vec![0u16; n * mm];
    for i in (0..n).rev() {
        let (head, tail) = values.split_at_mut((i + 1) * mm);
        let current = &mut head[i * mm..];
        let next = &tail[..mm];
        let layer_controls = &mut controls[i * mm..(i + 1) * mm];
        for cell in 0..mm {
            let mut best = rew[cell] + next[succ[cell] as usize];
            let mut best_q = 0u16;
            for q in 1..=p {
                let idx = q * mm + cell;
                let val = rew[idx] + next[succ[idx] as usize];
                if val > best {
                    best = val;
                    best_q = q as u16;
                }
            }
            current[cell] = best;
            layer_controls[cell] = best_q;
        }
    }

    Ok(DpTables {
        n,
        m,
        bound,
        hs,
        dt,
        control_levels,
        controls,
        values,
        grid_bound_clamped,
    })
}

/// Extracts the realized policy: starting from the cell nearest `(A0, I0)`,
/// reads the stored control, advances one stage, snaps, and repeats. The
/// `N` stage controls are extended to `N + 1` nodes by repeating the last
/// value (and, for `N = 1`, represented exactly as a constant on the minimal
/// 2-subinterval grid).
pub fn dp_rollout(inst: &CrpInstance, cfg: &DpConfig, tables: &DpTables) -> Result<DpRollout> {
    tables.consistent_with(cfg, inst)?;
    let (n, m) = (tables.n, tables.m);
    let mm = m * m;
    let mut jj = snap(inst.a0.clamp(0.0, tables.bound), tables.hs, m);
    let mut kk = snap(inst.i0.clamp(0.0, tables.bound), tables.hs, m);
    let mut stage_controls = Vec::with_capacity(n + 1);
    let mut bound_exceeded = false;
    for i in 0..n {
        let q = tables.controls[i * mm + jj * m + kk] as usize;
        let x = tables.control_levels[q];
        stage_controls.push(x);
        let (_, _, cell, exceeded) = transition(
            inst,
            x,
            jj as f64 * tables.hs,
            kk as f64 * tables.hs,
            tables.dt,
            tables.bound,
            tables.hs,
            m,
        )?;
        bound_exceeded |= exceeded;
        jj = cell / m;
        kk = cell % m;
    }
    stage_controls.push(*stage_controls.last().expect("n ≥ 1 stages"));

    let policy = if n >= 2 {
        let grid = TimeGrid::new(n, inst.t_end)?;
        ControlPolicy::new(grid, stage_controls, inst.x_max)?
    } else {
        let grid = TimeGrid::new(2, inst.t_end)?;
        ControlPolicy::new(grid, vec![stage_controls[0]; 3], inst.x_max)?
    };
    Ok(DpRollout { policy, bound_exceeded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks;

    #[test]
    fn snapping_rounds_to_nearest_with_midpoints_down() {
        assert_eq!(snap(0.0, 1.0, 10), 0);
        assert_eq!(snap(2.49, 1.0, 10), 2);
        assert_eq!(snap(2.5, 1.0, 10), 2); // exact midpoint → lower index
        assert_eq!(snap(2.500001, 1.0, 10), 3);
        assert_eq!(snap(99.0, 1.0, 10), 9); // clamped to the top cell
    }

    #[test]
    fn mode_tokens_round_trip() {
        for mode in [StageRewardMode::Corrected, StageRewardMode::Literal] {
            assert_eq!(mode.to_string().parse::<StageRewardMode>().unwrap(), mode);
        }
        assert_eq!("literal".parse::<StageRewardMode>().unwrap(), StageRewardMode::Literal);
        assert!("bogus".parse::<StageRewardMode>().is_err());
    }

    #[test]
    fn config_validation_rejects_degenerate_and_oversized() {
        let ok = DpConfig { n: 5, m: 60, p: 8, ..Default::default() };
        assert!(ok.validate().is_ok());
        assert!(DpConfig { n: 0, ..ok }.validate().is_err());
        assert!(DpConfig { m: 1, ..ok }.validate().is_err());
        assert!(DpConfig { p: 0, ..ok }.validate().is_err());
        assert!(DpConfig { lambda_reg: -1.0, ..ok }.validate().is_err());
        assert!(DpConfig { s: Some(0.0), ..ok }.validate().is_err());
        assert!(DpConfig { m: 40_000, ..ok }.validate().is_err());
    }

    #[test]
    fn bellman_consistency_by_replay() {
        // Every stored value must equal the stored control's stage reward
        // plus the next layer's value at the snapped successor — replayed
        // here through the same transition arithmetic, so equality is exact.
        let inst = benchmarks::m1();
        let cfg = DpConfig { n: 5, m: 60, p: 8, ..Default::default() };
        let tables = dp_solve(&inst, &cfg).unwrap();
        let mm = cfg.m * cfg.m;
        for i in 0..cfg.n {
            for j in 0..cfg.m {
                for k in 0..cfg.m {
                    let x = tables.control_value(i, j, k);
                    let (a1, i1, cell, _) = transition(
                        &inst,
                        x,
                        j as f64 * tables.hs,
                        k as f64 * tables.hs,
                        tables.dt,
                        tables.bound,
                        tables.hs,
                        cfg.m,
                    )
                    .unwrap();
                    let replay = stage_reward(&inst, cfg.mode, cfg.lambda_reg, tables.dt, x, a1, i1)
                        + tables.values[(i + 1) * mm + cell];
                    assert_eq!(tables.value(i, j, k), replay, "cell ({i}, {j}, {k})");
                }
            }
        }
    }

    #[test]
    fn exact_reward_ties_keep_the_lowest_candidate() {
        // omega1 = omega2 = λ = 0 makes every stage reward exactly 0, so all
        // candidates tie everywhere and the first must win.
        let mut inst = benchmarks::m1();
        inst.omega1 = 0.0;
        inst.omega2 = 0.0;
        let cfg = DpConfig { n: 3, m: 30, p: 6, lambda_reg: 0.0, ..Default::default() };
        let tables = dp_solve(&inst, &cfg).unwrap();
        for i in 0..cfg.n {
            for j in 0..cfg.m {
                for k in 0..cfg.m {
                    assert_eq!(tables.control_value(i, j, k), 0.0);
                }
            }
        }
    }

    #[test]
    fn rollout_rejects_mismatched_config() {
        let inst = benchmarks::m1();
        let cfg = DpConfig { n: 4, m: 40, p: 5, ..Default::default() };
        let tables = dp_solve(&inst, &cfg).unwrap();
        let other = DpConfig { n: 5, ..cfg };
        assert!(dp_rollout(&inst, &other, &tables).is_err());
        assert!(dp_rollout(&inst, &cfg, &tables).is_ok());
    }

    #[test]
    fn single_stage_rollout_is_a_constant_policy() {
        let inst = benchmarks::m1();
        let cfg = DpConfig { n: 1, m: 80, p: 10, ..Default::default() };
        let tables = dp_solve(&inst, &cfg).unwrap();
        let roll = dp_rollout(&inst, &cfg, &tables).unwrap();
        let v = roll.policy.values();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|&x| x == v[0]));
    }
}
