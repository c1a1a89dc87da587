//! Trade-off curve machinery: the curve of (τ, f) = (g(û(λ)), f(û(λ)))
//! sampled through penalized solves on a λ grid, slope checks against the
//! identity slope = −λ, and comparison of a solve path against the curve.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::objective::{CompositeProblem, ProxTerm, SmoothTerm};
use crate::schedules::LambdaSchedule;
use crate::solver::{solve_continuation, SolverConfig, TracePoint};
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParetoPoint {
    pub lambda: f64,
    /// τ = g(û(λ))
    pub tau: f64,
    /// f(û(λ))
    pub f_val: f64,
    pub solve_iterations: usize,
    pub converged: bool,
    /// The step tolerance the member solve ran with.
    pub residual_tol: f64,
}

/// Points sorted by τ ascending, one per grid λ.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParetoCurve {
    pub points: Vec<ParetoPoint>,
    pub lambda_grid: Vec<f64>,
}

impl ParetoCurve {
    pub fn tau_range(&self) -> Option<(f64, f64)> {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => Some((a.tau, b.tau)),
            _ => None,
        }
    }

    /// Piecewise-linear interpolant of f at a given τ; `None` outside the
    /// sampled range. Linear interpolation overestimates a convex value
    /// function between samples, so "on or above the interpolant" is a
    /// conservative reachability test.
    pub fn interpolate_f(&self, tau: f64) -> Option<f64> {
        let pts = &self.points;
        if pts.is_empty() {
            return None;
        }
        let (lo, hi) = (pts.first().unwrap().tau, pts.last().unwrap().tau);
        if tau < lo || tau > hi {
            return None;
        }
        // binary search for the segment
        let mut a = 0;
        let mut b = pts.len() - 1;
        while b - a > 1 {
            let mid = (a + b) / 2;
            if pts[mid].tau <= tau {
                a = mid;
            } else {
                b = mid;
            }
        }
        let (p, q) = (&pts[a], &pts[b]);
        if q.tau == p.tau {
            return Some(p.f_val.min(q.f_val));
        }
        let w = (tau - p.tau) / (q.tau - p.tau);
        Some(p.f_val + w * (q.f_val - p.f_val))
    }
}

/// Build the reference trade-off curve by one fixed-λ solve per grid value.
///
/// The grid must be positive and sorted descending: solving the most
/// regularized problem first makes warm starting natural (each solve starts
/// at the previous minimizer when `warm_start` is set).
pub fn reference_curve<F: SmoothTerm, G: ProxTerm>(
    f: &F,
    g: &G,
    lambda_grid: &[f64],
    u0: &Vector,
    cfg: &SolverConfig,
    warm_start: bool,
) -> Result<ParetoCurve, Error> {
    if lambda_grid.is_empty() {
        return Err(Error::Config(alloc::string::String::from(
            "lambda grid must not be empty",
        )));
    }
    for pair in lambda_grid.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::Config(alloc::format!(
                "lambda grid must be strictly descending, got {} then {}",
                pair[0],
                pair[1]
            )));
        }
    }
    if !(lambda_grid[lambda_grid.len() - 1] > 0.0) {
        return Err(Error::Config(alloc::string::String::from(
            "lambda grid values must be positive",
        )));
    }

    let mut points = Vec::with_capacity(lambda_grid.len());
    let mut start = u0.clone();
    for &lambda in lambda_grid {
        let problem = CompositeProblem::new(f, g, lambda)?;
        let schedule = LambdaSchedule::Constant { target: lambda };
        let result =
            solve_continuation(&problem, &schedule, &start, cfg).map_err(|e| Error::CurveSolve {
                lambda,
                message: alloc::format!("{e}"),
            })?;
        points.push(ParetoPoint {
            lambda,
            tau: problem.g.value(&result.u_hat),
            f_val: problem.f.value(&result.u_hat),
            solve_iterations: result.iterations,
            converged: result.converged,
            residual_tol: cfg.step_tol,
        });
        if warm_start {
            start = result.u_hat;
        }
    }
    points.sort_by(|a, b| a.tau.partial_cmp(&b.tau).expect("tau comparable"));
    Ok(ParetoCurve {
        points,
        lambda_grid: lambda_grid.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlopeEntry {
    pub lambda: f64,
    pub tau: f64,
    /// Centered divided difference Δf/Δτ across the two neighbors.
    pub slope: f64,
    /// |slope − (−λ)| / λ
    pub rel_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlopeReport {
    pub entries: Vec<SlopeEntry>,
    pub max_rel_deviation: f64,
    pub skipped_degenerate: usize,
}

/// Compare the curve's interior slopes with the identity slope = −λ.
pub fn slope_check(curve: &ParetoCurve) -> Result<SlopeReport, Error> {
    let pts = &curve.points;
    if pts.len() < 3 {
        return Err(Error::Config(alloc::format!(
            "slope check needs at least 3 points, got {}",
            pts.len()
        )));
    }
    let mut entries = Vec::new();
    let mut skipped = 0;
    let mut max_rel = 0.0_f64;
    for i in 1..pts.len() - 1 {
        let (prev, here, next) = (&pts[i - 1], &pts[i], &pts[i + 1]);
        let dtau = next.tau - prev.tau;
        if dtau.abs() <= 1e-14 * (prev.tau.abs() + next.tau.abs()).max(1e-300) {
            skipped += 1;
            continue;
        }
        let slope = (next.f_val - prev.f_val) / dtau;
        let rel_deviation = math::abs(slope + here.lambda) / here.lambda;
        max_rel = max_rel.max(rel_deviation);
        entries.push(SlopeEntry {
            lambda: here.lambda,
            tau: here.tau,
            slope,
            rel_deviation,
        });
    }
    Ok(SlopeReport {
        entries,
        max_rel_deviation: max_rel,
        skipped_degenerate: skipped,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathEntry {
    pub n: usize,
    pub g: f64,
    pub f: f64,
    /// Curve interpolant at the same g.
    pub curve_f: f64,
    /// (f − curve_f) / |curve_f|
    pub rel_excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathReport {
    pub entries: Vec<PathEntry>,
    /// Trace points whose g lies outside the curve's τ range are clipped
    /// from the comparison and counted here.
    pub clipped: usize,
    pub max_rel_excess: Option<f64>,
    pub mean_rel_excess: Option<f64>,
    pub min_rel_excess: Option<f64>,
}

/// f-distance of each trace point to the curve interpolant at equal g.
/// Positive excess means the path sits above the curve, as it must up to
/// solve tolerance.
pub fn path_vs_curve(trace: &[TracePoint], curve: &ParetoCurve) -> Result<PathReport, Error> {
    if curve.points.len() < 2 {
        return Err(Error::Config(alloc::format!(
            "path comparison needs a curve with at least 2 points, got {}",
            curve.points.len()
        )));
    }
    let mut entries = Vec::new();
    let mut clipped = 0;
    for t in trace {
        match curve.interpolate_f(t.g) {
            Some(curve_f) => {
                let rel_excess = (t.f - curve_f) / math::abs(curve_f).max(1e-300);
                entries.push(PathEntry {
                    n: t.n,
                    g: t.g,
                    f: t.f,
                    curve_f,
                    rel_excess,
                });
            }
            None => clipped += 1,
        }
    }
    let (mut max_rel, mut min_rel, mut sum) = (f64::NEG_INFINITY, f64::INFINITY, 0.0);
    for e in &entries {
        max_rel = max_rel.max(e.rel_excess);
        min_rel = min_rel.min(e.rel_excess);
        sum += e.rel_excess;
    }
    let stats = if entries.is_empty() {
        (None, None, None)
    } else {
        (
            Some(max_rel),
            Some(sum / entries.len() as f64),
            Some(min_rel),
        )
    };
    Ok(PathReport {
        entries,
        clipped,
        max_rel_excess: stats.0,
        mean_rel_excess: stats.1,
        min_rel_excess: stats.2,
    })
}
