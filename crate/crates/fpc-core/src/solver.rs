//! The continuation proximal-gradient iteration
//! u_{n+1} = prox_{α·λ_n·g}(u_n − α∇f(u_n)) with per-iteration tracing,
//! an ε-certificate relating the inexact step to the exact target-λ
//! proximal point, and a post-hoc ergodic rate-bound checker.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::objective::{CompositeProblem, ProxTerm, SmoothTerm};
use crate::schedules::LambdaSchedule;
use crate::vector::Vector;

/// Absolute slack allowed when asserting the ergodic rate bound; a violation
/// beyond this signals an implementation bug, not a tunable.
pub const RATE_BOUND_SLACK: f64 = 1e-9;

/// Absolute slack for the per-iteration certificate inequality gap ≤ ε.
pub const EPS_CERT_SLACK: f64 = 1e-12;

/// Relative λ-distance that must be reached before the stopping rule may
/// fire, so a solve cannot stop while the schedule is far from its target.
const LAMBDA_STOP_REL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// Step size α; must lie in (0, 2/L) for the problem's L.
    pub alpha: f64,
    pub max_iter: usize,
    /// Stop once ‖u_{n+1} − u_n‖ ≤ step_tol and λ_n is within 0.1% of λ.
    /// A negative value disables the step-based stop entirely (the solve
    /// then always runs to max_iter).
    pub step_tol: f64,
    /// Trace decimation; `None` records every iteration up to 10 000
    /// max_iter and every 10th beyond that.
    pub record_every: Option<usize>,
    /// Per-iteration ε-certificate (one extra prox + objective evaluations).
    pub epsilon_certificate: bool,
    /// Record objective values at the running iterate average for the
    /// ergodic rate check. Requires α ∈ (0, 1/L); auto-disabled otherwise.
    pub rate_monitor: bool,
    /// Keep every iterate in the result (small problems only).
    pub store_iterates: bool,
}

impl SolverConfig {
    pub fn new(alpha: f64) -> Self {
        SolverConfig {
            alpha,
            max_iter: 5000,
            step_tol: 1e-9,
            record_every: None,
            epsilon_certificate: false,
            rate_monitor: false,
            store_iterates: false,
        }
    }

    fn effective_record_every(&self) -> usize {
        match self.record_every {
            Some(k) => k.max(1),
            None => {
                if self.max_iter <= 10_000 {
                    1
                } else {
                    10
                }
            }
        }
    }
}

/// One recorded iteration. `f`, `g` and `f_lambda` are evaluated at the
/// post-step iterate u_{n+1}; `f_lambda` uses the target λ, not λ_n.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TracePoint {
    pub n: usize,
    pub lambda_n: f64,
    pub f: f64,
    pub g: f64,
    pub f_lambda: f64,
    pub step_norm: f64,
    pub eps_n: Option<f64>,
    pub gap_n: Option<f64>,
}

/// Objective value at the running average ū_n = (1/(n+1)) Σ_{i=0}^n u_{i+1}.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ErgodicPoint {
    pub n: usize,
    pub f_lambda_avg: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub u_hat: Vector,
    pub trace: Vec<TracePoint>,
    pub ergodic: Vec<ErgodicPoint>,
    pub converged: bool,
    pub iterations: usize,
    /// Range of g over every iterate seen (including u_0), from which the
    /// sup-style constant M can be formed against any reference.
    pub g_min: f64,
    pub g_max: f64,
    /// sup_i |g(u_i) − g(u_final)|; see [`SolveResult::m_for_reference`] for
    /// the sup against an external reference instead.
    pub m_running: f64,
    pub warnings: Vec<String>,
    /// Post-step iterates u_1, u_2, …; empty unless `store_iterates` is set.
    pub iterates: Vec<Vector>,
}

impl SolveResult {
    /// sup_i |g(u_i) − g_ref| over all iterates of the run.
    pub fn m_for_reference(&self, g_ref: f64) -> f64 {
        (self.g_max - g_ref).max(g_ref - self.g_min).max(0.0)
    }

    pub fn final_trace(&self) -> Option<&TracePoint> {
        self.trace.last()
    }
}

/// One step u ↦ prox_{α·λ_n·g}(u − α∇f(u)).
pub fn prox_grad_step<F: SmoothTerm, G: ProxTerm>(
    p: &CompositeProblem<F, G>,
    u: &Vector,
    alpha: f64,
    lambda_n: f64,
) -> Result<Vector, Error> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter {
            context: "prox_grad_step",
            message: alloc::format!("alpha must be positive, got {alpha}"),
        });
    }
    if !(lambda_n > 0.0) {
        return Err(Error::InvalidParameter {
            context: "prox_grad_step",
            message: alloc::format!("lambda_n must be positive, got {lambda_n}"),
        });
    }
    let grad = p.f.gradient(u);
    if let Some(index) = grad.first_non_finite() {
        return Err(Error::NonFinite {
            context: "gradient",
            index,
        });
    }
    let mut forward = u.clone();
    forward.add_scaled(-alpha, &grad);
    Ok(p.g.prox(&forward, alpha * lambda_n))
}

/// ε-certificate for one inexact step: the exact target-λ proximal point
/// u_exact = prox_{αλg}(u_n − α∇f(u_n)) minimizes
/// φ(z) = ½‖z − (u_n − α∇f(u_n))‖² + αλ·g(z), and the step actually taken
/// satisfies φ(u_{n+1}) − φ(u_exact) ≤ α·M·|λ − λ_n| whenever
/// M ≥ |g(u_exact) − g(u_{n+1})|.
///
/// Returns (gap_n, ε_n) = (φ(u_next) − φ(u_exact), α·M·|λ − λ_n|).
pub fn epsilon_certificate<F: SmoothTerm, G: ProxTerm>(
    p: &CompositeProblem<F, G>,
    u_n: &Vector,
    u_next: &Vector,
    alpha: f64,
    lambda_n: f64,
    m: f64,
) -> (f64, f64) {
    let grad = p.f.gradient(u_n);
    let mut forward = u_n.clone();
    forward.add_scaled(-alpha, &grad);
    let (gap, _dg) = certificate_at_forward(p, &forward, u_next, alpha, lambda_n);
    let eps = alpha * m * math::abs(p.lambda - lambda_n);
    (gap, eps)
}

/// Shared certificate core working from a precomputed forward point.
/// Returns (gap, |g(u_exact) − g(u_next)|).
fn certificate_at_forward<F: SmoothTerm, G: ProxTerm>(
    p: &CompositeProblem<F, G>,
    forward: &Vector,
    u_next: &Vector,
    alpha: f64,
    lambda_n: f64,
) -> (f64, f64) {
    if lambda_n == p.lambda {
        return (0.0, 0.0);
    }
    let u_exact = p.g.prox(forward, alpha * p.lambda);
    let phi = |z: &Vector| {
        let d = z.dist(forward);
        0.5 * d * d + alpha * p.lambda * p.g.value(z)
    };
    let gap = phi(u_next) - phi(&u_exact);
    let dg = math::abs(p.g.value(&u_exact) - p.g.value(u_next));
    (gap, dg)
}

/// Run the continuation iteration from `u0` under schedule `s`.
///
/// With a constant schedule this is exactly the classical proximal-gradient
/// algorithm. The stopping rule requires both a small step and λ_n within
/// 0.1% of the target, so a run cannot stop while the schedule is still far
/// from λ.
pub fn solve_continuation<F: SmoothTerm, G: ProxTerm>(
    p: &CompositeProblem<F, G>,
    s: &LambdaSchedule,
    u0: &Vector,
    cfg: &SolverConfig,
) -> Result<SolveResult, Error> {
    let lambda = p.lambda;
    if s.target() != lambda {
        return Err(Error::Config(alloc::format!(
            "schedule target {} does not match problem lambda {}",
            s.target(),
            lambda
        )));
    }
    let lipschitz = p.f.lipschitz();
    if !(cfg.alpha > 0.0 && cfg.alpha < 2.0 / lipschitz) {
        return Err(Error::Config(alloc::format!(
            "alpha {} outside (0, 2/L) for L = {lipschitz}",
            cfg.alpha
        )));
    }
    if cfg.max_iter == 0 {
        return Err(Error::Config(String::from("max_iter must be at least 1")));
    }
    if let Some(index) = u0.first_non_finite() {
        return Err(Error::NonFinite {
            context: "initial iterate",
            index,
        });
    }

    let mut warnings = Vec::new();
    let mut rate_on = cfg.rate_monitor;
    if rate_on && !(cfg.alpha < 1.0 / lipschitz) {
        rate_on = false;
        warnings.push(alloc::format!(
            "rate monitor disabled: alpha {} is not inside (0, 1/L) for L = {lipschitz}",
            cfg.alpha
        ));
    }
    if s.summability().is_infinite() {
        warnings.push(String::from(
            "schedule is not summable; the convergence guarantee does not apply",
        ));
    }

    let record_every = cfg.effective_record_every();
    let alpha = cfg.alpha;

    let mut u = u0.clone();
    let g0 = p.g.value(&u);
    let f0 = p.f.value(&u);
    let f_lambda0 = f0 + lambda * g0;
    let divergence_threshold = 1e6 * (math::abs(f_lambda0) + 1.0);

    let (mut g_min, mut g_max) = (g0, g0);
    let mut iterate_sum = if rate_on {
        Some(Vector::zeros(u.len()))
    } else {
        None
    };
    let mut m_cert = 0.0_f64;

    let mut trace = Vec::new();
    let mut ergodic = Vec::new();
    let mut iterates = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut g_final = g0;

    for n in 0..cfg.max_iter {
        let lambda_n = s.eval(n);
        if !(lambda_n > 0.0) || !lambda_n.is_finite() {
            return Err(Error::Config(alloc::format!(
                "schedule produced non-positive lambda_{n} = {lambda_n}"
            )));
        }
        let grad = p.f.gradient(&u);
        if let Some(index) = grad.first_non_finite() {
            return Err(Error::NonFinite {
                context: "gradient",
                index,
            });
        }
        let mut forward = u.clone();
        forward.add_scaled(-alpha, &grad);
        let u_next = p.g.prox(&forward, alpha * lambda_n);
        let step_norm = u_next.dist(&u);

        let mut eps_n = None;
        let mut gap_n = None;
        if cfg.epsilon_certificate {
            let (gap, dg) = certificate_at_forward(p, &forward, &u_next, alpha, lambda_n);
            // fold the current deviation in first, so gap ≤ ε holds pointwise
            m_cert = m_cert.max(dg);
            eps_n = Some(alpha * m_cert * math::abs(lambda - lambda_n));
            gap_n = Some(gap);
        }

        let g_next = p.g.value(&u_next);
        g_min = g_min.min(g_next);
        g_max = g_max.max(g_next);
        g_final = g_next;
        if let Some(sum) = iterate_sum.as_mut() {
            sum.add_scaled(1.0, &u_next);
        }

        let stop = step_norm <= cfg.step_tol
            && math::abs(lambda_n - lambda) <= LAMBDA_STOP_REL * lambda;
        let last = n + 1 == cfg.max_iter;
        if n % record_every == 0 || stop || last {
            let f_next = p.f.value(&u_next);
            let f_lambda = f_next + lambda * g_next;
            if !f_lambda.is_finite() || f_lambda > divergence_threshold {
                return Err(Error::Divergence {
                    iteration: n,
                    objective: f_lambda,
                });
            }
            trace.push(TracePoint {
                n,
                lambda_n,
                f: f_next,
                g: g_next,
                f_lambda,
                step_norm,
                eps_n,
                gap_n,
            });
            if let Some(sum) = iterate_sum.as_ref() {
                let avg = sum.scaled(1.0 / (n + 1) as f64);
                ergodic.push(ErgodicPoint {
                    n,
                    f_lambda_avg: p.objective(&avg),
                });
            }
        }
        if cfg.store_iterates {
            iterates.push(u_next.clone());
        }

        u = u_next;
        iterations = n + 1;
        if stop {
            converged = true;
            break;
        }
    }

    let m_running = (g_max - g_final).max(g_final - g_min).max(0.0);
    Ok(SolveResult {
        u_hat: u,
        trace,
        ergodic,
        converged,
        iterations,
        g_min,
        g_max,
        m_running,
        warnings,
        iterates,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateBoundEntry {
    pub n: usize,
    /// F_λ(ū_n) − F_λ(û_ref)
    pub gap: f64,
    /// (‖u0 − û‖² + M·λ̄) / (2α(n+1))
    pub bound: f64,
    /// bound − gap; the check fails when this drops below −1e-9.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateBoundReport {
    pub alpha: f64,
    pub lambda_bar: f64,
    pub m: f64,
    pub dist0_sq: f64,
    pub f_lambda_ref: f64,
    pub entries: Vec<RateBoundEntry>,
    pub min_margin: f64,
    pub ok: bool,
}

/// Check the ergodic rate bound
/// F_λ(ū_n) − F_λ(û) ≤ (‖u0 − û‖² + M·λ̄) / (2α(n+1)) at every recorded n.
///
/// `ergodic` comes from a solve with the rate monitor on, `u_hat_ref` is a
/// high-accuracy reference minimizer, `lambda_bar` the schedule's
/// summability constant and `m` the retroactive sup of |g(u_i) − g(û_ref)|
/// (see [`SolveResult::m_for_reference`]).
pub fn rate_bound_check<F: SmoothTerm, G: ProxTerm>(
    p: &CompositeProblem<F, G>,
    ergodic: &[ErgodicPoint],
    u0: &Vector,
    u_hat_ref: &Vector,
    alpha: f64,
    lambda_bar: f64,
    m: f64,
) -> Result<RateBoundReport, Error> {
    let lipschitz = p.f.lipschitz();
    if !(alpha > 0.0 && alpha < 1.0 / lipschitz) {
        return Err(Error::Config(alloc::format!(
            "rate bound requires alpha in (0, 1/L); got alpha {alpha} with L = {lipschitz}"
        )));
    }
    if !lambda_bar.is_finite() || lambda_bar < 0.0 {
        return Err(Error::Config(alloc::format!(
            "rate bound requires a finite non-negative lambda_bar, got {lambda_bar}"
        )));
    }
    if !(m >= 0.0) {
        return Err(Error::Config(alloc::format!(
            "rate bound requires M >= 0, got {m}"
        )));
    }
    let f_lambda_ref = p.objective(u_hat_ref);
    let dist0_sq = u0.dist(u_hat_ref);
    let dist0_sq = dist0_sq * dist0_sq;
    let numerator = dist0_sq + m * lambda_bar;
    let mut entries = Vec::with_capacity(ergodic.len());
    let mut min_margin = f64::INFINITY;
    for point in ergodic {
        let gap = point.f_lambda_avg - f_lambda_ref;
        let bound = numerator / (2.0 * alpha * (point.n + 1) as f64);
        let margin = bound - gap;
        min_margin = min_margin.min(margin);
        entries.push(RateBoundEntry {
            n: point.n,
            gap,
            bound,
            margin,
        });
    }
    if entries.is_empty() {
        min_margin = 0.0;
    }
    let ok = min_margin >= -RATE_BOUND_SLACK;
    Ok(RateBoundReport {
        alpha,
        lambda_bar,
        m,
        dist0_sq,
        f_lambda_ref,
        entries,
        min_margin,
        ok,
    })
}
