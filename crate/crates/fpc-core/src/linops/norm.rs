//! Squared operator norm ‖A‖²₂ by power iteration on A*A.

use alloc::vec::Vec;

use super::LinearOperator;
use crate::error::Error;
use crate::rng::DetRng;
use crate::vector::Vector;

/// Outcome of a power iteration run. `estimates` holds the Rayleigh
/// quotients in iteration order; on A*A they are non-decreasing.
#[derive(Debug, Clone)]
pub struct PowerIteration {
    pub norm_sq: f64,
    pub estimates: Vec<f64>,
    pub iterations: usize,
}

/// Power iteration for the top eigenvalue of A*A, i.e. ‖A‖²₂.
///
/// Stops when the relative change between successive Rayleigh quotients
/// drops to `tol`; failing that within `max_iter` is an error that carries
/// the last estimate.
pub fn power_iteration<A: LinearOperator>(
    op: &A,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<PowerIteration, Error> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter {
            context: "power_iteration",
            message: alloc::format!("tol must be positive, got {tol}"),
        });
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter {
            context: "power_iteration",
            message: alloc::string::String::from("max_iter must be at least 1"),
        });
    }
    let mut rng = DetRng::new(seed);
    let mut v = Vector::random_symmetric(op.in_dim(), &mut rng);
    let n = v.norm();
    if n == 0.0 {
        // zero-dimensional or pathological start; retry deterministic ramp
        v = Vector::new((0..op.in_dim()).map(|i| 1.0 + i as f64).collect());
    }
    let n = v.norm();
    if n == 0.0 {
        return Ok(PowerIteration {
            norm_sq: 0.0,
            estimates: Vec::new(),
            iterations: 0,
        });
    }
    let mut v = v.scaled(1.0 / n);

    let mut estimates = Vec::new();
    let mut previous = f64::NAN;
    for k in 0..max_iter {
        let w = op.adjoint(&op.apply(&v));
        let rayleigh = v.dot(&w); // v is unit, so this is the Rayleigh quotient
        estimates.push(rayleigh);
        let w_norm = w.norm();
        if w_norm == 0.0 {
            // v is in the null space of A*A; for a random start this means
            // the operator is (numerically) zero
            return Ok(PowerIteration {
                norm_sq: 0.0,
                estimates,
                iterations: k + 1,
            });
        }
        if k > 0 && (rayleigh - previous).abs() <= tol * rayleigh.abs().max(f64::MIN_POSITIVE) {
            return Ok(PowerIteration {
                norm_sq: rayleigh,
                estimates,
                iterations: k + 1,
            });
        }
        previous = rayleigh;
        v = w.scaled(1.0 / w_norm);
    }
    Err(Error::NoConvergence {
        context: "power_iteration",
        iterations: max_iter,
        last_estimate: previous,
    })
}

/// Convenience wrapper returning only the ‖A‖²₂ estimate.
pub fn operator_norm_sq<A: LinearOperator>(
    op: &A,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<f64, Error> {
    power_iteration(op, tol, max_iter, seed).map(|r| r.norm_sq)
}
