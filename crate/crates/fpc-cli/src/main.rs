//! `fpc` — continuation proximal-gradient experiments on an image
//! deblurring problem.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 monitor/inequality violation.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fpc_cli::check::check_trace;
use fpc_cli::experiment::{build_deblur, run_demo_deblur, ExperimentConfig};
use fpc_cli::export::{
    read_trace_json, write_curve_csv, write_demo_artifacts, write_trace_csv, write_trace_json,
    TraceExport,
};
use fpc_cli::pgm::save_pgm;
use fpc_cli::spec::{parse_grid, parse_schedule};
use fpc_cli::AppError;
use fpc_core::solver::EPS_CERT_SLACK;
use fpc_core::{reference_curve, slope_check, solve_continuation};

#[derive(Parser)]
#[command(
    name = "fpc",
    version,
    about = "Fixed-point continuation proximal-gradient solver and trade-off-curve experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Image side length; must be divisible by 2^wavelet_levels.
    #[arg(long)]
    size: Option<usize>,
    /// Seed for phantom, noise and norm estimation.
    #[arg(long)]
    seed: Option<u64>,
    /// Step size as a fraction of 1/(1.01·L).
    #[arg(long)]
    alpha_frac: Option<f64>,
    /// Iterations per continuation run.
    #[arg(long)]
    iters: Option<usize>,
    /// Iterations per fixed-lambda grid solve.
    #[arg(long)]
    grid_iters: Option<usize>,
    /// Stopping tolerance on the step norm.
    #[arg(long)]
    tol: Option<f64>,
    /// Lambda grid as min,max,count (log-spaced).
    #[arg(long)]
    grid: Option<String>,
    /// Additive Gaussian noise scale.
    #[arg(long)]
    noise_sigma: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON configuration file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonOpts {
    fn build_config(&self) -> Result<ExperimentConfig, AppError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                serde_json::from_str::<ExperimentConfig>(&text)?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(size) = self.size {
            cfg.image_size = size;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(frac) = self.alpha_frac {
            cfg.alpha_frac = frac;
        }
        if let Some(iters) = self.iters {
            cfg.iters = iters;
        }
        if let Some(grid_iters) = self.grid_iters {
            cfg.grid_iters = grid_iters;
        }
        if let Some(tol) = self.tol {
            cfg.step_tol = tol;
        }
        if let Some(grid) = &self.grid {
            cfg.lambda_grid = parse_grid(grid)?;
        }
        if let Some(sigma) = self.noise_sigma {
            cfg.noise_sigma = sigma;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the deblurring problem once under one penalty schedule.
    Solve {
        #[command(flatten)]
        common: CommonOpts,
        /// Schedule spec, e.g. "offset:target=1e-2" or "constant:target=0.05".
        #[arg(long)]
        schedule: String,
        /// Record the per-iteration ε-certificate (extra prox per step).
        #[arg(long)]
        certificates: bool,
        /// Record ergodic objective values for the rate bound.
        #[arg(long)]
        rate_monitor: bool,
        /// Basename for the emitted artifacts.
        #[arg(long, default_value = "run")]
        label: String,
    },
    /// Trace the reference trade-off curve by fixed-λ solves on a grid.
    Pareto {
        #[command(flatten)]
        common: CommonOpts,
        /// Start every grid solve from the initial point instead of the
        /// previous minimizer.
        #[arg(long)]
        no_warm_start: bool,
    },
    /// Run the full study: reference curve, corner pick, four schedules,
    /// restored images and a JSON summary.
    DemoDeblur {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Re-validate saved trace JSON files against their own metadata.
    Check {
        /// Trace JSON files produced by `solve` or `demo-deblur`.
        #[arg(required = true)]
        traces: Vec<PathBuf>,
    },
}

fn cmd_solve(
    common: &CommonOpts,
    schedule_spec: &str,
    certificates: bool,
    rate_monitor: bool,
    label: &str,
) -> Result<i32, AppError> {
    let config = common.build_config()?;
    let schedule = parse_schedule(schedule_spec)?;
    let report = schedule.validate();
    for issue in &report.issues {
        eprintln!("warning: schedule: {issue}");
    }
    let setup = build_deblur(&config)?;
    let problem = setup.problem(schedule.target())?;
    let mut solver_cfg = setup.solver_config(config.iters);
    solver_cfg.epsilon_certificate = certificates;
    solver_cfg.rate_monitor = rate_monitor;
    let result = solve_continuation(&problem, &schedule, &setup.start, &solver_cfg)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }

    fs::create_dir_all(&config.out_dir)?;
    let csv_path = config.out_dir.join(format!("trace_{label}.csv"));
    write_trace_csv(&csv_path, &result.trace)?;
    let export = TraceExport::from_result(
        label,
        schedule.target(),
        setup.lipschitz,
        &solver_cfg,
        &schedule,
        &result,
    );
    let json_path = config.out_dir.join(format!("trace_{label}.json"));
    write_trace_json(&json_path, &export)?;
    let restored = setup.restore(&result.u_hat)?;
    let pgm_path = config.out_dir.join(format!("restored_{label}.pgm"));
    save_pgm(&pgm_path, &restored)?;

    let final_point = result.final_trace();
    println!(
        "solved: {} iterations, converged: {}, final F_lambda: {}",
        result.iterations,
        result.converged,
        final_point.map(|t| t.f_lambda).unwrap_or(f64::NAN)
    );
    println!(
        "wrote {}, {}, {}",
        csv_path.display(),
        json_path.display(),
        pgm_path.display()
    );

    if certificates {
        for t in &result.trace {
            if let (Some(eps), Some(gap)) = (t.eps_n, t.gap_n) {
                if gap > eps + EPS_CERT_SLACK {
                    eprintln!(
                        "certificate violated at n={}: gap {gap} > eps {eps}",
                        t.n
                    );
                    return Ok(4);
                }
            }
        }
    }
    Ok(0)
}

fn cmd_pareto(common: &CommonOpts, no_warm_start: bool) -> Result<i32, AppError> {
    let config = common.build_config()?;
    let setup = build_deblur(&config)?;
    let grid = config.lambda_grid.descending();
    let solver_cfg = setup.solver_config(config.grid_iters);
    let curve = reference_curve(
        &setup.smooth,
        &setup.penalty,
        &grid,
        &setup.start,
        &solver_cfg,
        !no_warm_start,
    )?;

    fs::create_dir_all(&config.out_dir)?;
    let curve_path = config.out_dir.join("curve.csv");
    write_curve_csv(&curve_path, &curve)?;
    let slopes = slope_check(&curve)?;
    let slope_path = config.out_dir.join("slope_report.json");
    fs::write(&slope_path, serde_json::to_string_pretty(&slopes)?)?;
    println!(
        "curve: {} points, max slope deviation {:.3e}; wrote {} and {}",
        curve.points.len(),
        slopes.max_rel_deviation,
        curve_path.display(),
        slope_path.display()
    );

    // monotonicity and discrete convexity of the computed curve
    let mut violation = None;
    for pair in curve.points.windows(2) {
        if pair[1].f_val > pair[0].f_val + 1e-10 {
            violation = Some(format!(
                "f increases along tau: {} -> {}",
                pair[0].f_val, pair[1].f_val
            ));
        }
    }
    let slopes_seq: Vec<f64> = curve
        .points
        .windows(2)
        .filter(|p| (p[1].tau - p[0].tau).abs() > 0.0)
        .map(|p| (p[1].f_val - p[0].f_val) / (p[1].tau - p[0].tau))
        .collect();
    for pair in slopes_seq.windows(2) {
        if pair[1] < pair[0] - 1e-8 {
            violation = Some(format!(
                "curve not discretely convex: slope {} after {}",
                pair[1], pair[0]
            ));
        }
    }
    if let Some(v) = violation {
        eprintln!("curve property violated: {v}");
        return Ok(4);
    }
    Ok(0)
}

fn cmd_demo(common: &CommonOpts) -> Result<i32, AppError> {
    let config = common.build_config()?;
    let output = run_demo_deblur(&config)?;
    let written = write_demo_artifacts(&output, &config.out_dir)?;
    println!(
        "chosen lambda: {} (corner of {}-point curve)",
        output.chosen_lambda,
        output.curve.points.len()
    );
    for s in &output.summary.schedules {
        println!(
            "schedule {:>6}: target {:.6e}, lambda_bar {:.3e}, final F_lambda {:.6e}, \
             path excess max {}",
            s.label,
            s.target,
            s.lambda_bar,
            s.final_f_lambda,
            s.path
                .max_rel_excess
                .map(|v| format!("{v:.3e}"))
                .unwrap_or_else(|| "n/a".to_string()),
        );
    }
    println!(
        "restored misfit {:.6e} vs identity {:.6e} ({})",
        output.summary.restored_misfit,
        output.summary.identity_misfit,
        if output.summary.restored_beats_identity {
            "improved"
        } else {
            "no improvement"
        }
    );
    println!("{} artifacts in {}", written.len(), config.out_dir.display());
    Ok(0)
}

fn cmd_check(traces: &[PathBuf]) -> Result<i32, AppError> {
    let mut any_violation = false;
    for path in traces {
        let export = read_trace_json(path)?;
        let report = check_trace(&export);
        if report.ok() {
            println!("{}: ok ({} rows)", path.display(), report.rows);
        } else {
            any_violation = true;
            println!(
                "{}: {} violation(s) in {} rows",
                path.display(),
                report.violations.len(),
                report.rows
            );
            for v in &report.violations {
                println!("  {v}");
            }
        }
    }
    Ok(if any_violation { 4 } else { 0 })
}

fn run(cli: &Cli) -> Result<i32, AppError> {
    match &cli.command {
        Command::Solve {
            common,
            schedule,
            certificates,
            rate_monitor,
            label,
        } => cmd_solve(common, schedule, *certificates, *rate_monitor, label),
        Command::Pareto {
            common,
            no_warm_start,
        } => cmd_pareto(common, *no_warm_start),
        Command::DemoDeblur { common } => cmd_demo(common),
        Command::Check { traces } => cmd_check(traces),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
