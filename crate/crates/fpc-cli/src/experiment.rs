//! The wavelet-deblurring study: build the degraded instance, trace the
//! reference trade-off curve, run the standard penalty schedules, and
//! collect everything into an artifact bundle.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use fpc_core::{
    compose, path_vs_curve, reference_curve, solve_continuation, CompositeProblem, Composed,
    Conv2dPeriodic, ConvKernel, Dwt2d, DwtSynthesis, Error, Image, L1Norm, LambdaSchedule,
    LeastSquares, ParetoCurve, ParetoPoint, SmoothTerm, SolveResult, SolverConfig, Vector,
};

use crate::phantom::{degrade, make_phantom};
use crate::spec::GridSpec;
use crate::AppError;

/// Multiplier applied to the estimated Lipschitz constant when converting
/// `alpha_frac` into a step size, so the step stays strictly inside the
/// admissible interval despite operator-norm estimation error.
pub const LIPSCHITZ_SAFETY: f64 = 1.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelSpec {
    /// Truncated Gaussian, normalized to tap sum 1.
    Gaussian { side: usize, sigma: f64 },
    /// Identity kernel (no blur), useful for noise-only experiments.
    Delta { side: usize },
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec::Gaussian {
            side: 5,
            sigma: 1.0,
        }
    }
}

impl KernelSpec {
    pub fn build(&self) -> Result<ConvKernel, Error> {
        match *self {
            KernelSpec::Gaussian { side, sigma } => ConvKernel::gaussian(side, sigma),
            KernelSpec::Delta { side } => ConvKernel::delta(side),
        }
    }
}

fn default_image_size() -> usize {
    128
}
fn default_noise_sigma() -> f64 {
    0.03
}
fn default_wavelet_levels() -> usize {
    3
}
fn default_alpha_frac() -> f64 {
    1.0
}
fn default_iters() -> usize {
    5000
}
fn default_grid_iters() -> usize {
    2000
}
fn default_step_tol() -> f64 {
    1e-9
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("fpc-out")
}

/// Full experiment configuration; serializable so a run's summary embeds the
/// effective configuration and can reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub image_size: usize,
    pub kernel: KernelSpec,
    pub noise_sigma: f64,
    pub seed: u64,
    pub wavelet_levels: usize,
    /// Step size as a fraction of 1/(safety · L).
    pub alpha_frac: f64,
    /// Iterations per continuation run.
    pub iters: usize,
    /// Iterations per fixed-λ grid solve.
    pub grid_iters: usize,
    pub step_tol: f64,
    pub lambda_grid: GridSpec,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            image_size: default_image_size(),
            kernel: KernelSpec::default(),
            noise_sigma: default_noise_sigma(),
            seed: 0,
            wavelet_levels: default_wavelet_levels(),
            alpha_frac: default_alpha_frac(),
            iters: default_iters(),
            grid_iters: default_grid_iters(),
            step_tol: default_step_tol(),
            lambda_grid: GridSpec::default(),
            out_dir: default_out_dir(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), AppError> {
        if self.image_size < 16 {
            return Err(AppError::Parse(format!(
                "image size must be at least 16, got {}",
                self.image_size
            )));
        }
        let div = 1usize << self.wavelet_levels;
        if self.wavelet_levels == 0 || self.image_size % div != 0 {
            return Err(AppError::Parse(format!(
                "image size {} is not divisible by 2^wavelet_levels = {div}",
                self.image_size
            )));
        }
        if self.noise_sigma < 0.0 {
            return Err(AppError::Parse(format!(
                "noise sigma must be non-negative, got {}",
                self.noise_sigma
            )));
        }
        if !(self.alpha_frac > 0.0 && self.alpha_frac <= 2.0) {
            return Err(AppError::Parse(format!(
                "alpha fraction must lie in (0, 2], got {}",
                self.alpha_frac
            )));
        }
        if self.iters == 0 || self.grid_iters == 0 {
            return Err(AppError::Parse(
                "iteration counts must be positive".to_string(),
            ));
        }
        self.lambda_grid.validate()?;
        Ok(())
    }
}

/// The assembled deblurring instance: truth, degraded data, the operator
/// blur ∘ wavelet-synthesis, the misfit term and the standard start point
/// (the degraded image in the wavelet domain).
pub struct DeblurSetup {
    pub config: ExperimentConfig,
    pub truth: Image,
    pub degraded: Image,
    pub wavelet: Dwt2d,
    pub smooth: LeastSquares<Composed<Conv2dPeriodic, DwtSynthesis>>,
    pub penalty: L1Norm,
    pub start: Vector,
    /// Estimated Lipschitz constant 2‖A‖² of the misfit gradient.
    pub lipschitz: f64,
    /// Step size alpha_frac / (safety · L).
    pub alpha: f64,
}

impl DeblurSetup {
    pub fn solver_config(&self, max_iter: usize) -> SolverConfig {
        let mut cfg = SolverConfig::new(self.alpha);
        cfg.max_iter = max_iter;
        cfg.step_tol = self.config.step_tol;
        cfg
    }

    pub fn problem(
        &self,
        lambda: f64,
    ) -> Result<CompositeProblem<&LeastSquares<Composed<Conv2dPeriodic, DwtSynthesis>>, &L1Norm>, Error>
    {
        CompositeProblem::new(&self.smooth, &self.penalty, lambda)
    }

    /// Synthesize an image from wavelet-domain coefficients.
    pub fn restore(&self, coeffs: &Vector) -> Result<Image, Error> {
        Image::from_vector(
            &self.wavelet.inverse(coeffs),
            self.config.image_size,
            self.config.image_size,
        )
    }
}

/// Build the experiment instance from a configuration. The phantom uses
/// `seed`, the noise stream `seed + 1`.
pub fn build_deblur(config: &ExperimentConfig) -> Result<DeblurSetup, AppError> {
    config.validate()?;
    let size = config.image_size;
    let truth = make_phantom(size, config.seed)?;
    let kernel = config.kernel.build()?;
    let degraded = degrade(
        &truth,
        &kernel,
        config.noise_sigma,
        config.seed.wrapping_add(1),
    )?;
    let wavelet = Dwt2d::new(size, size, config.wavelet_levels)?;
    let conv = Conv2dPeriodic::new(kernel, size, size)?;
    let op = compose(conv, wavelet.synthesis())?;
    let smooth = LeastSquares::new(op, degraded.to_vector())?;
    let lipschitz = smooth.lipschitz();
    let alpha = config.alpha_frac / (LIPSCHITZ_SAFETY * lipschitz);
    let start = wavelet.forward(&degraded.to_vector());
    Ok(DeblurSetup {
        config: config.clone(),
        truth,
        degraded,
        wavelet,
        smooth,
        penalty: L1Norm,
        start,
        lipschitz,
        alpha,
    })
}

/// The three standard continuation schedules sharing the starting weight
/// 10·λ: polynomial decay, geometric decay clipped at the target, and a
/// geometrically decaying offset.
pub fn standard_schedules(target: f64) -> [(&'static str, LambdaSchedule); 3] {
    [
        (
            "power",
            LambdaSchedule::Power {
                target,
                beta: 9.0,
                theta: 1.01,
            },
        ),
        (
            "floor",
            LambdaSchedule::GeometricFloor {
                target,
                beta: 0.99,
                mu: 10.0 * target,
            },
        ),
        (
            "offset",
            LambdaSchedule::GeometricOffset {
                target,
                beta: 0.9,
                mu: 9.0,
            },
        ),
    ]
}

/// Wide-range schedule sweeping from `lambda_max` down to `lambda_min`
/// without knowing a preferred λ in advance: λ_n = λ_min(1 + μ·0.9ⁿ) with
/// μ = λ_max/λ_min − 1.
pub fn wide_range_schedule(lambda_min: f64, lambda_max: f64) -> LambdaSchedule {
    LambdaSchedule::GeometricOffset {
        target: lambda_min,
        beta: 0.9,
        mu: lambda_max / lambda_min - 1.0,
    }
}

/// Pick the trade-off curve's corner: the point farthest from the chord
/// joining the curve endpoints, measured in log-log coordinates when all
/// values are positive (plain coordinates otherwise).
pub fn lcurve_corner(curve: &ParetoCurve) -> Option<&ParetoPoint> {
    let pts = &curve.points;
    if pts.len() < 3 {
        return pts.first();
    }
    let positive = pts.iter().all(|p| p.tau > 0.0 && p.f_val > 0.0);
    let coord = |p: &ParetoPoint| -> (f64, f64) {
        if positive {
            (p.tau.ln(), p.f_val.ln())
        } else {
            (p.tau, p.f_val)
        }
    };
    let (x0, y0) = coord(&pts[0]);
    let (x1, y1) = coord(&pts[pts.len() - 1]);
    let chord = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
    if chord == 0.0 {
        return pts.first();
    }
    let mut best = None;
    let mut best_dist = f64::NEG_INFINITY;
    for p in &pts[1..pts.len() - 1] {
        let (x, y) = coord(p);
        let dist = ((x1 - x0) * (y0 - y) - (x0 - x) * (y1 - y0)).abs() / chord;
        if dist > best_dist {
            best_dist = dist;
            best = Some(p);
        }
    }
    best
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathStats {
    pub max_rel_excess: Option<f64>,
    pub mean_rel_excess: Option<f64>,
    pub min_rel_excess: Option<f64>,
    pub clipped: usize,
    pub compared: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleSummary {
    pub label: String,
    pub kind: String,
    pub target: f64,
    pub lambda_bar: f64,
    pub iterations: usize,
    pub converged: bool,
    pub final_f: f64,
    pub final_g: f64,
    pub final_f_lambda: f64,
    pub path: PathStats,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoSummary {
    pub config: ExperimentConfig,
    pub lipschitz: f64,
    pub alpha: f64,
    pub chosen_lambda: f64,
    pub curve_points: usize,
    pub schedules: Vec<ScheduleSummary>,
    /// Misfit of the identity reconstruction (coefficients of the degraded
    /// image itself).
    pub identity_misfit: f64,
    /// Misfit of the restored image from the schedule targeting chosen λ.
    pub restored_misfit: f64,
    pub restored_beats_identity: bool,
}

pub struct DemoRun {
    pub label: &'static str,
    pub schedule: LambdaSchedule,
    pub result: SolveResult,
    pub restored: Image,
    /// Per-point comparison of this run's path against the reference curve.
    pub path_report: fpc_core::PathReport,
}

/// Everything the demo computes, in memory; file emission is separate.
pub struct DemoOutput {
    pub setup: DeblurSetup,
    pub curve: ParetoCurve,
    pub chosen_lambda: f64,
    pub runs: Vec<DemoRun>,
    pub summary: DemoSummary,
}

/// The full study: reference curve on the λ grid, corner selection, three
/// standard continuation runs at the chosen λ plus the wide-range run, and
/// path-versus-curve statistics for each.
pub fn run_demo_deblur(config: &ExperimentConfig) -> Result<DemoOutput, AppError> {
    let setup = build_deblur(config)?;
    let grid = config.lambda_grid.descending();
    let grid_cfg = setup.solver_config(config.grid_iters);
    let curve = reference_curve(
        &setup.smooth,
        &setup.penalty,
        &grid,
        &setup.start,
        &grid_cfg,
        true,
    )?;
    let chosen_lambda = lcurve_corner(&curve)
        .map(|p| p.lambda)
        .unwrap_or_else(|| (config.lambda_grid.min * config.lambda_grid.max).sqrt());

    let mut schedules: Vec<(&'static str, LambdaSchedule)> =
        standard_schedules(chosen_lambda).into_iter().collect();
    schedules.push((
        "wide",
        wide_range_schedule(config.lambda_grid.min, config.lambda_grid.max),
    ));

    let mut runs = Vec::new();
    let mut summaries = Vec::new();
    for (label, schedule) in schedules {
        let problem = setup.problem(schedule.target())?;
        let cfg = setup.solver_config(config.iters);
        let result = solve_continuation(&problem, &schedule, &setup.start, &cfg).map_err(|e| {
            AppError::Core(match e {
                Error::Divergence {
                    iteration,
                    objective,
                } => Error::Config(format!(
                    "schedule {label} diverged at iteration {iteration} (objective {objective})"
                )),
                other => other,
            })
        })?;
        let report = path_vs_curve(&result.trace, &curve)?;
        let final_point = result
            .final_trace()
            .ok_or_else(|| AppError::Parse(format!("schedule {label} produced no trace")))?;
        summaries.push(ScheduleSummary {
            label: label.to_string(),
            kind: schedule.kind_name().to_string(),
            target: schedule.target(),
            lambda_bar: schedule.summability(),
            iterations: result.iterations,
            converged: result.converged,
            final_f: final_point.f,
            final_g: final_point.g,
            final_f_lambda: final_point.f_lambda,
            path: PathStats {
                max_rel_excess: report.max_rel_excess,
                mean_rel_excess: report.mean_rel_excess,
                min_rel_excess: report.min_rel_excess,
                clipped: report.clipped,
                compared: report.entries.len(),
            },
        });
        let restored = setup.restore(&result.u_hat)?;
        runs.push(DemoRun {
            label,
            schedule,
            result,
            restored,
            path_report: report,
        });
    }

    let identity_misfit = setup.smooth.value(&setup.start);
    // the "offset" run targets the chosen λ and is the restoration shown
    let restored_misfit = setup.smooth.value(&runs[2].result.u_hat);
    let summary = DemoSummary {
        config: config.clone(),
        lipschitz: setup.lipschitz,
        alpha: setup.alpha,
        chosen_lambda,
        curve_points: curve.points.len(),
        schedules: summaries,
        identity_misfit,
        restored_misfit,
        restored_beats_identity: restored_misfit < identity_misfit,
    };
    Ok(DemoOutput {
        setup,
        curve,
        chosen_lambda,
        runs,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            image_size: 32,
            iters: 400,
            grid_iters: 150,
            lambda_grid: GridSpec {
                min: 1e-3,
                max: 1e-1,
                count: 8,
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn config_validation_catches_bad_sizes() {
        let mut cfg = small_config();
        cfg.image_size = 36; // not divisible by 8
        assert!(cfg.validate().is_err());
        cfg.image_size = 8;
        assert!(cfg.validate().is_err());
        cfg = small_config();
        cfg.alpha_frac = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = small_config();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        // partial configs fill in defaults
        let partial: ExperimentConfig = serde_json::from_str("{\"image_size\": 64}").unwrap();
        assert_eq!(partial.image_size, 64);
        assert_eq!(partial.noise_sigma, 0.03);
    }

    #[test]
    fn setup_start_point_is_degraded_in_wavelet_domain() {
        let setup = build_deblur(&small_config()).unwrap();
        let expected = setup.wavelet.forward(&setup.degraded.to_vector());
        assert_eq!(setup.start, expected);
        // orthogonality: synthesizing the start gives the degraded image back
        let back = setup.restore(&setup.start).unwrap();
        for (a, b) in back.pixels().iter().zip(setup.degraded.pixels()) {
            assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn alpha_sits_inside_admissible_interval() {
        let setup = build_deblur(&small_config()).unwrap();
        assert!(setup.alpha > 0.0);
        assert!(setup.alpha < 1.0 / setup.lipschitz); // safety factor keeps it under 1/L
    }

    #[test]
    fn standard_schedules_share_starting_point() {
        for (_, s) in standard_schedules(0.02) {
            assert!((s.eval(0) - 0.2).abs() <= 1e-15);
            assert_eq!(s.target(), 0.02);
        }
        let wide = wide_range_schedule(1e-3, 1e-1);
        assert!((wide.eval(0) - 1e-1).abs() <= 1e-15);
        assert_eq!(wide.target(), 1e-3);
    }

    #[test]
    fn corner_of_a_sharp_l_curve() {
        // synthetic L-shape in log-log space with an unmistakable corner
        let mk = |lambda: f64, tau: f64, f_val: f64| ParetoPoint {
            lambda,
            tau,
            f_val,
            solve_iterations: 1,
            converged: true,
            residual_tol: 0.0,
        };
        let curve = ParetoCurve {
            points: vec![
                mk(1.0, 1.0, 100.0),
                mk(0.5, 1.5, 10.0),
                mk(0.2, 2.0, 1.0),
                mk(0.1, 50.0, 0.9),
                mk(0.05, 1000.0, 0.8),
            ],
            lambda_grid: vec![1.0, 0.5, 0.2, 0.1, 0.05],
        };
        let corner = lcurve_corner(&curve).unwrap();
        assert_eq!(corner.lambda, 0.2);
    }
}
