//! `crp` — solve, simulate, compare, and sweep response-policy instances.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when `--strict`
//! is set and the iterative solver fails to converge. Progress and timing go
//! to stderr; all results go to files under `--out`.

mod output;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use crp_core::format::{parse_instance, parse_policy_csv, parse_values_spec, resample_policy, PolicySpec};
use crp_core::{
    compare_against_random, cost_benefit, dp_rollout, dp_solve, integrate_state_forward,
    run_sweep, sweep, ControlPolicy, CrpInstance, DpConfig, FbsConfig, GridConfig,
    StageRewardMode, StateTrajectory, SweepParameter, SweepSpec, TrendVerdict,
};
use serde_json::json;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "crp",
    version,
    about = "Cost-effective response policies for product co-creation communities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance with the forward-backward sweep and write the
    /// optimal policy with its trajectories.
    Solve {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        solver: SolverOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Solve an instance with the dynamic-programming baseline and write
    /// the rolled-out policy.
    SolveDp {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        dp: DpOpts,
        /// Subintervals of the evaluation grid the rollout is scored on.
        #[arg(long, default_value_t = 5000)]
        grid: usize,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Integrate the community state under a given policy.
    Simulate {
        #[command(flatten)]
        input: InputOpts,
        /// zero | max | const:LEVEL | file:PATH (a policy CSV).
        #[arg(long)]
        policy: PolicySpec,
        /// Subintervals of the simulation grid.
        #[arg(long, default_value_t = 5000)]
        grid: usize,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Solve, then race the result against seeded uniform-random policies.
    Compare {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        solver: SolverOpts,
        /// Number of random baseline policies.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Solve with both methods and report the dynamic-programming rollout
    /// against the sweep solver.
    CompareDp {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        solver: SolverOpts,
        #[command(flatten)]
        dp: DpOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Re-solve along one parameter axis and check the objective trend.
    Sweep {
        #[command(flatten)]
        input: InputOpts,
        /// One of: T, x_max, mu, delta1, delta2, alpha, omega1, omega2.
        #[arg(long)]
        param: SweepParameter,
        /// start:step:stop, a comma list, or a single value.
        #[arg(long)]
        values: String,
        #[command(flatten)]
        solver: SolverOpts,
        /// Recorded in the sweep specification for reproducibility.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutOpts,
    },
}

#[derive(Args)]
struct InputOpts {
    /// Instance document (key = value lines).
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args)]
struct SolverOpts {
    /// Stop when the largest node-wise policy change drops below this.
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    /// Subintervals of the time grid.
    #[arg(long, default_value_t = 5000)]
    grid: usize,
    /// Sweep budget before giving up.
    #[arg(long = "max-iter", default_value_t = 100)]
    max_iter: usize,
    /// Fraction of the previous iterate kept in each update, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    relaxation: f64,
    /// Exit with status 2 if the solver does not converge.
    #[arg(long)]
    strict: bool,
}

impl SolverOpts {
    fn build(&self) -> Result<(GridConfig, FbsConfig)> {
        let grid = GridConfig::new(self.grid)?;
        let cfg = FbsConfig {
            epsilon: self.epsilon,
            max_iterations: self.max_iter,
            relaxation: self.relaxation,
        };
        cfg.validate()?;
        Ok((grid, cfg))
    }
}

#[derive(Args)]
struct OutOpts {
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

impl OutOpts {
    /// Creates the directory and reserves the given file names, refusing to
    /// clobber existing files unless `--force` was passed.
    fn targets(&self, names: &[&str]) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(&self.out)
            .with_context(|| format!("creating output directory {}", self.out.display()))?;
        let paths: Vec<PathBuf> = names.iter().map(|n| self.out.join(n)).collect();
        for p in &paths {
            if p.exists() && !self.force {
                bail!("output file {} already exists; pass --force to overwrite", p.display());
            }
        }
        Ok(paths)
    }
}

/// Discretization of the dynamic program: `N,M,P,LAMBDA`.
#[derive(Debug, Clone, Copy)]
struct DpSpec {
    n: usize,
    m: usize,
    p: usize,
    lambda: f64,
}

impl FromStr for DpSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            bail!("--dp takes N,M,P,LAMBDA (e.g. 50,400,50,0.1)");
        }
        Ok(Self {
            n: parts[0].parse().with_context(|| format!("N in --dp: '{}'", parts[0]))?,
            m: parts[1].parse().with_context(|| format!("M in --dp: '{}'", parts[1]))?,
            p: parts[2].parse().with_context(|| format!("P in --dp: '{}'", parts[2]))?,
            lambda: parts[3].parse().with_context(|| format!("LAMBDA in --dp: '{}'", parts[3]))?,
        })
    }
}

#[derive(Args)]
struct DpOpts {
    /// Time steps, state-grid resolution, control levels, and regularizer.
    #[arg(long = "dp", default_value = "50,400,50,0.1")]
    dp: DpSpec,
    /// Stage-reward variant: "corrected" or "literal".
    #[arg(long = "dp-mode", default_value = "corrected")]
    dp_mode: StageRewardMode,
}

impl DpOpts {
    fn config(&self) -> DpConfig {
        DpConfig {
            n: self.dp.n,
            m: self.dp.m,
            p: self.dp.p,
            s: None,
            lambda_reg: self.dp.lambda,
            mode: self.dp_mode,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; everything else is
            // a usage error.
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let code = match e.kind() {
                DisplayHelp | DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    init_thread_pool();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

/// Applies `CRP_THREADS` as a cap on worker parallelism.
fn init_thread_pool() {
    let Ok(raw) = std::env::var("CRP_THREADS") else { return };
    match raw.parse::<usize>() {
        Ok(n) if n >= 1 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: could not apply CRP_THREADS={raw}: {e}");
            }
        }
        _ => eprintln!("warning: ignoring CRP_THREADS={raw}; expected a positive integer"),
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Solve { input, solver, out } => cmd_solve(&input, &solver, &out),
        Command::SolveDp { input, dp, grid, out } => cmd_solve_dp(&input, &dp, grid, &out),
        Command::Simulate { input, policy, grid, out } => {
            cmd_simulate(&input, &policy, grid, &out)
        }
        Command::Compare { input, solver, count, seed, out } => {
            cmd_compare(&input, &solver, count, seed, &out)
        }
        Command::CompareDp { input, solver, dp, out } => {
            cmd_compare_dp(&input, &solver, &dp, &out)
        }
        Command::Sweep { input, param, values, solver, seed, out } => {
            cmd_sweep(&input, param, &values, &solver, seed, &out)
        }
    }
}

fn read_instance(input: &InputOpts) -> Result<CrpInstance> {
    let path = &input.instance;
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading instance file {}", path.display()))?;
    let inst =
        parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    for w in inst.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(inst)
}

/// Scores a (possibly coarse) policy on an evaluation grid: resample,
/// integrate, and take the objective.
fn evaluate_on_grid(
    inst: &CrpInstance,
    policy: &ControlPolicy,
    grid: GridConfig,
) -> Result<(StateTrajectory, f64)> {
    let fine = grid.realize(inst.t_end)?;
    let resampled = policy.resampled(fine)?;
    let state = integrate_state_forward(inst, &resampled)?;
    let objective = cost_benefit(inst, &resampled, &state)?;
    Ok((state, objective))
}

fn verdict_json(verdict: &TrendVerdict) -> serde_json::Value {
    match verdict {
        TrendVerdict::Pass => json!({ "status": "pass" }),
        TrendVerdict::Trivial => json!({ "status": "trivial" }),
        TrendVerdict::Fail { index, detail } => {
            json!({ "status": "fail", "index": index, "detail": detail })
        }
    }
}

fn cmd_solve(input: &InputOpts, solver: &SolverOpts, out: &OutOpts) -> Result<i32> {
    let inst = read_instance(input)?;
    let (grid, cfg) = solver.build()?;
    let paths = out.targets(&["policy.csv", "report.json"])?;

    let started = Instant::now();
    let report = sweep(&inst, grid, &cfg)?;
    eprintln!(
        "solve: J = {:.6e}, iterations = {}, converged = {}, {:.3} s",
        report.objective,
        report.iterations,
        report.converged,
        started.elapsed().as_secs_f64()
    );

    fs::write(&paths[0], output::policy_csv(&report.final_policy, &report.state, Some(&report.adjoint)))?;
    let json = json!({
        "instance": inst,
        "config": {
            "grid": grid.n,
            "epsilon": cfg.epsilon,
            "max_iterations": cfg.max_iterations,
            "relaxation": cfg.relaxation,
        },
        "objective": report.objective,
        "iterations": report.iterations,
        "converged": report.converged,
        "sup_norm_history": report.sup_norm_history,
    });
    fs::write(&paths[1], output::pretty(&json))?;

    if solver.strict && !report.converged {
        eprintln!("solver did not converge within {} sweeps", cfg.max_iterations);
        return Ok(2);
    }
    Ok(0)
}

fn cmd_solve_dp(input: &InputOpts, dp: &DpOpts, grid: usize, out: &OutOpts) -> Result<i32> {
    let inst = read_instance(input)?;
    let cfg = dp.config();
    let eval_grid = GridConfig::new(grid)?;
    let paths = out.targets(&["policy.csv", "report.json"])?;

    let started = Instant::now();
    let tables = dp_solve(&inst, &cfg)?;
    let roll = dp_rollout(&inst, &cfg, &tables)?;
    let (state, objective) = evaluate_on_grid(&inst, &roll.policy, eval_grid)?;
    eprintln!(
        "solve-dp: J = {objective:.6e}, N = {}, M = {}, P = {}, {:.3} s",
        cfg.n,
        cfg.m,
        cfg.p,
        started.elapsed().as_secs_f64()
    );
    if tables.grid_bound_clamped() {
        eprintln!("note: some grid transitions were clamped at the state bound S = {}", tables.bound());
    }
    if roll.bound_exceeded {
        eprintln!("warning: the rolled-out path itself exceeded S = {}; results are suspect", tables.bound());
    }

    fs::write(&paths[0], output::coarse_policy_csv(&roll.policy, &state))?;
    let json = json!({
        "instance": inst,
        "config": {
            "n": cfg.n,
            "m": cfg.m,
            "p": cfg.p,
            "lambda_reg": cfg.lambda_reg,
            "mode": cfg.mode.to_string(),
            "state_bound": tables.bound(),
            "evaluation_grid": grid,
        },
        "objective": objective,
        "bound_exceeded": roll.bound_exceeded,
        "grid_bound_clamped": tables.grid_bound_clamped(),
    });
    fs::write(&paths[1], output::pretty(&json))?;
    Ok(0)
}

fn cmd_simulate(input: &InputOpts, spec: &PolicySpec, grid: usize, out: &OutOpts) -> Result<i32> {
    let inst = read_instance(input)?;
    let tgrid = GridConfig::new(grid)?.realize(inst.t_end)?;
    let paths = out.targets(&["trajectory.csv", "report.json"])?;

    let policy = match spec {
        PolicySpec::Zero => ControlPolicy::zero(tgrid),
        PolicySpec::Max => ControlPolicy::constant(tgrid, inst.x_max, inst.x_max)?,
        PolicySpec::Const(level) => ControlPolicy::constant(tgrid, *level, inst.x_max)?,
        PolicySpec::File(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading policy file {path}"))?;
            let samples =
                parse_policy_csv(&text).with_context(|| format!("parsing {path}"))?;
            resample_policy(&samples, tgrid, inst.x_max)?
        }
    };
    let state = integrate_state_forward(&inst, &policy)?;
    let objective = cost_benefit(&inst, &policy, &state)?;
    eprintln!(
        "simulate: policy = {spec}, J = {objective:.6e}, A(T) = {:.6e}, I(T) = {:.6e}",
        state.active().last().unwrap(),
        state.inactive().last().unwrap()
    );

    fs::write(&paths[0], output::policy_csv(&policy, &state, None))?;
    let json = json!({
        "instance": inst,
        "config": { "grid": grid, "policy": spec.to_string() },
        "objective": objective,
    });
    fs::write(&paths[1], output::pretty(&json))?;
    Ok(0)
}

fn cmd_compare(
    input: &InputOpts,
    solver: &SolverOpts,
    count: usize,
    seed: u64,
    out: &OutOpts,
) -> Result<i32> {
    let inst = read_instance(input)?;
    let (grid, cfg) = solver.build()?;
    let paths = out.targets(&["compare.csv", "summary.json"])?;

    let started = Instant::now();
    let cmp = compare_against_random(&inst, grid, &cfg, count, seed)?;
    eprintln!(
        "compare: J = {:.6e} beats {:.0}/{count} random policies, {:.3} s",
        cmp.solve.objective,
        cmp.fraction_beaten * count as f64,
        started.elapsed().as_secs_f64()
    );

    fs::write(&paths[0], output::compare_csv(&cmp.random_objectives))?;
    let json = json!({
        "instance": inst,
        "config": {
            "grid": grid.n,
            "epsilon": cfg.epsilon,
            "max_iterations": cfg.max_iterations,
            "relaxation": cfg.relaxation,
            "count": count,
            "seed": seed,
        },
        "objective": cmp.solve.objective,
        "iterations": cmp.solve.iterations,
        "converged": cmp.solve.converged,
        "fraction_beaten": cmp.fraction_beaten,
    });
    fs::write(&paths[1], output::pretty(&json))?;

    if solver.strict && !cmp.solve.converged {
        eprintln!("solver did not converge within {} sweeps", cfg.max_iterations);
        return Ok(2);
    }
    Ok(0)
}

fn cmd_compare_dp(
    input: &InputOpts,
    solver: &SolverOpts,
    dp: &DpOpts,
    out: &OutOpts,
) -> Result<i32> {
    let inst = read_instance(input)?;
    let (grid, cfg) = solver.build()?;
    let dp_cfg = dp.config();
    let paths = out.targets(&["fbs_policy.csv", "dp_policy.csv", "summary.json"])?;

    let started = Instant::now();
    let report = sweep(&inst, grid, &cfg)?;
    let tables = dp_solve(&inst, &dp_cfg)?;
    let roll = dp_rollout(&inst, &dp_cfg, &tables)?;
    let (dp_state, dp_objective) = evaluate_on_grid(&inst, &roll.policy, grid)?;
    let ratio = dp_objective / report.objective;
    eprintln!(
        "compare-dp: sweep J = {:.6e}, dp J = {dp_objective:.6e} (ratio {ratio:.4}), {:.3} s",
        report.objective,
        started.elapsed().as_secs_f64()
    );

    fs::write(&paths[0], output::policy_csv(&report.final_policy, &report.state, Some(&report.adjoint)))?;
    fs::write(&paths[1], output::coarse_policy_csv(&roll.policy, &dp_state))?;
    let json = json!({
        "instance": inst,
        "fbs": {
            "config": {
                "grid": grid.n,
                "epsilon": cfg.epsilon,
                "max_iterations": cfg.max_iterations,
                "relaxation": cfg.relaxation,
            },
            "objective": report.objective,
            "iterations": report.iterations,
            "converged": report.converged,
            "total_variation": report.final_policy.total_variation(),
        },
        "dp": {
            "config": {
                "n": dp_cfg.n,
                "m": dp_cfg.m,
                "p": dp_cfg.p,
                "lambda_reg": dp_cfg.lambda_reg,
                "mode": dp_cfg.mode.to_string(),
                "state_bound": tables.bound(),
            },
            "objective": dp_objective,
            "total_variation": roll.policy.total_variation(),
            "bound_exceeded": roll.bound_exceeded,
            "grid_bound_clamped": tables.grid_bound_clamped(),
        },
        "ratio": ratio,
    });
    fs::write(&paths[2], output::pretty(&json))?;

    if solver.strict && !report.converged {
        eprintln!("solver did not converge within {} sweeps", cfg.max_iterations);
        return Ok(2);
    }
    Ok(0)
}

fn cmd_sweep(
    input: &InputOpts,
    param: SweepParameter,
    values_raw: &str,
    solver: &SolverOpts,
    seed: u64,
    out: &OutOpts,
) -> Result<i32> {
    let inst = read_instance(input)?;
    let (grid, cfg) = solver.build()?;
    let values = parse_values_spec(values_raw)?;
    let spec = SweepSpec { base: inst.clone(), parameter: param, values, seed };
    let paths = out.targets(&["sweep.csv", "summary.json"])?;

    let started = Instant::now();
    let result = run_sweep(&spec, grid, &cfg)?;
    eprintln!(
        "sweep: {param} over {} values, expected trend {}, verdict: {}, {:.3} s",
        spec.values.len(),
        param.expected_trend(),
        result.verdict,
        started.elapsed().as_secs_f64()
    );

    fs::write(&paths[0], output::sweep_csv(&result.records))?;
    let json = json!({
        "instance": inst,
        "config": {
            "grid": grid.n,
            "epsilon": cfg.epsilon,
            "max_iterations": cfg.max_iterations,
            "relaxation": cfg.relaxation,
            "seed": seed,
        },
        "parameter": param.to_string(),
        "expected_trend": param.expected_trend().to_string(),
        "values": spec.values,
        "verdict": verdict_json(&result.verdict),
    });
    fs::write(&paths[1], output::pretty(&json))?;

    if solver.strict && result.records.iter().any(|r| !r.converged) {
        eprintln!("at least one sweep value did not converge within {} sweeps", cfg.max_iterations);
        return Ok(2);
    }
    Ok(0)
}
