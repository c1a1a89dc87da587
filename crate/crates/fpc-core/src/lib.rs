//! Core algorithms for composite convex optimization `min f(u) + λ g(u)` by
//! proximal-gradient continuation: the penalty weight follows a schedule
//! λ_n → λ while the iteration runs, so a single solve traces a useful path
//! in the penalty–misfit plane instead of repeated fixed-λ solves.
//!
//! The crate ships:
//!
//! * [`linops`] — a linear operator abstraction with periodic 2D convolution,
//!   an orthogonal Daubechies-3 wavelet transform, operator composition, and
//!   power-iteration norm estimation;
//! * [`objective`] — smooth and prox-simple term traits, a least-squares
//!   misfit through an arbitrary operator, and the ℓ1 penalty;
//! * [`schedules`] — penalty sequences with their summability constants;
//! * [`solver`] — the continuation iteration, per-iteration trace recording,
//!   an ε-certificate for the inexact proximal step, and an ergodic
//!   rate-bound checker;
//! * [`pareto`] — trade-off-curve construction from fixed-λ grid solves and
//!   path-versus-curve comparison.
//!
//! Everything is deterministic: the only randomness is the seeded generator
//! in [`rng`].

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod linops;
mod math;
pub mod objective;
pub mod pareto;
pub mod rng;
pub mod schedules;
pub mod solver;
pub mod vector;

pub use error::Error;
pub use linops::{
    adjoint_residual, compose, conv2d_periodic, operator_norm_sq, power_iteration, Composed,
    Conv2dPeriodic, ConvKernel, DenseMatrix, Diagonal, Dwt2d, DwtSynthesis, Identity,
    LinearOperator, PowerIteration,
};
pub use objective::{
    soft_threshold, CompositeProblem, HalfSquaredDistance, L1Norm, LeastSquares, ProxTerm,
    SmoothTerm,
};
pub use pareto::{
    path_vs_curve, reference_curve, slope_check, ParetoCurve, ParetoPoint, PathEntry, PathReport,
    SlopeEntry, SlopeReport,
};
pub use rng::DetRng;
pub use schedules::{LambdaSchedule, ScheduleIssue, ScheduleReport};
pub use solver::{
    epsilon_certificate, prox_grad_step, rate_bound_check, solve_continuation, ErgodicPoint,
    RateBoundEntry, RateBoundReport, SolveResult, SolverConfig, TracePoint,
};
pub use vector::{Image, Vector};
