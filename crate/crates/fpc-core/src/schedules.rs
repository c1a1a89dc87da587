//! Penalty-weight sequences λ_n → λ and their summability constants
//! λ̄ = Σ_n |λ_n − λ|, which control how much a continuation run can drift
//! before it must settle at the target.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LambdaSchedule {
    /// λ_n = λ for all n: the classical fixed-penalty iteration.
    Constant { target: f64 },
    /// λ_n = λ · (1 + β/(n+1)^θ). The shift to n+1 keeps n = 0 defined and
    /// gives λ_0 = λ(1+β). Summable exactly when θ > 1.
    Power { target: f64, beta: f64, theta: f64 },
    /// λ_n = max(λ, μ·βⁿ): geometric decay clipped at the target. μ is the
    /// absolute starting weight.
    GeometricFloor { target: f64, beta: f64, mu: f64 },
    /// λ_n = λ · (1 + μ·βⁿ): geometric decay of the relative offset.
    GeometricOffset { target: f64, beta: f64, mu: f64 },
    /// Explicit per-iteration values; evaluation holds the target once the
    /// list is exhausted.
    Custom { target: f64, values: Vec<f64> },
}

impl LambdaSchedule {
    /// Custom schedule from an explicit list; the last value is the target.
    pub fn custom(values: Vec<f64>) -> Result<Self, Error> {
        match values.last() {
            Some(&target) => Ok(LambdaSchedule::Custom { target, values }),
            None => Err(Error::InvalidParameter {
                context: "LambdaSchedule::custom",
                message: alloc::string::String::from("value list must not be empty"),
            }),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            LambdaSchedule::Constant { .. } => "constant",
            LambdaSchedule::Power { .. } => "power",
            LambdaSchedule::GeometricFloor { .. } => "geometric-floor",
            LambdaSchedule::GeometricOffset { .. } => "geometric-offset",
            LambdaSchedule::Custom { .. } => "custom",
        }
    }

    pub fn target(&self) -> f64 {
        match *self {
            LambdaSchedule::Constant { target }
            | LambdaSchedule::Power { target, .. }
            | LambdaSchedule::GeometricFloor { target, .. }
            | LambdaSchedule::GeometricOffset { target, .. }
            | LambdaSchedule::Custom { target, .. } => target,
        }
    }

    pub fn eval(&self, n: usize) -> f64 {
        match self {
            LambdaSchedule::Constant { target } => *target,
            LambdaSchedule::Power {
                target,
                beta,
                theta,
            } => target * (1.0 + beta / math::powf((n + 1) as f64, *theta)),
            LambdaSchedule::GeometricFloor { target, beta, mu } => {
                target.max(mu * math::powf(*beta, n as f64))
            }
            LambdaSchedule::GeometricOffset { target, beta, mu } => {
                target * (1.0 + mu * math::powf(*beta, n as f64))
            }
            LambdaSchedule::Custom { target, values } => {
                values.get(n).copied().unwrap_or(*target)
            }
        }
    }

    /// λ̄ = Σ_{n=0}^∞ |λ_n − λ|: exact for the geometric-offset and custom
    /// kinds, a certified upper bound for power (λβ(1 + 1/(θ−1))) and
    /// geometric-floor (μ/(1−β)), and +∞ when the sum diverges.
    pub fn summability(&self) -> f64 {
        match *self {
            LambdaSchedule::Constant { .. } => 0.0,
            LambdaSchedule::Power {
                target,
                beta,
                theta,
            } => {
                if theta > 1.0 && beta >= 0.0 && target >= 0.0 {
                    target * beta * (1.0 + 1.0 / (theta - 1.0))
                } else if beta == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            LambdaSchedule::GeometricFloor { beta, mu, .. } => {
                if (0.0..1.0).contains(&beta) && mu > 0.0 {
                    mu / (1.0 - beta)
                } else if mu <= 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            LambdaSchedule::GeometricOffset { target, beta, mu } => {
                if (0.0..1.0).contains(&beta) {
                    math::abs(target * mu) / (1.0 - beta)
                } else if mu == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            LambdaSchedule::Custom { target, ref values } => values
                .iter()
                .map(|v| math::abs(v - target))
                .sum(),
        }
    }

    /// For the geometric-floor kind: the first index at which the decaying
    /// branch reaches the floor, i.e. eval(n) = target from here on.
    pub fn floor_crossover(&self) -> Option<usize> {
        if let LambdaSchedule::GeometricFloor { target, beta, mu } = *self {
            if mu <= target {
                return Some(0);
            }
            if !(0.0 < beta && beta < 1.0) || target <= 0.0 {
                return None;
            }
            // smallest n with μ·βⁿ ≤ λ
            let n = math::ln(target / mu) / math::ln(beta);
            let mut k = if n <= 0.0 { 0 } else { n as usize };
            while mu * math::powf(beta, k as f64) > target {
                k += 1;
            }
            Some(k)
        } else {
            None
        }
    }

    /// Report-only validation: a flagged schedule can still be run, but the
    /// report travels with the trace so the flags are visible downstream.
    pub fn validate(&self) -> ScheduleReport {
        let mut issues = Vec::new();
        if !(self.target() > 0.0) {
            issues.push(ScheduleIssue::TargetNotPositive {
                target: self.target(),
            });
        }
        match *self {
            LambdaSchedule::Constant { .. } => {}
            LambdaSchedule::Power { beta, theta, .. } => {
                if beta < 0.0 {
                    issues.push(ScheduleIssue::BetaOutOfRange { beta });
                }
                if theta <= 0.0 {
                    issues.push(ScheduleIssue::ThetaNotPositive { theta });
                }
            }
            LambdaSchedule::GeometricFloor { beta, mu, .. }
            | LambdaSchedule::GeometricOffset { beta, mu, .. } => {
                if !(0.0 < beta && beta < 1.0) {
                    issues.push(ScheduleIssue::BetaOutOfRange { beta });
                }
                if mu <= 0.0 {
                    issues.push(ScheduleIssue::MuNotPositive { mu });
                }
            }
            LambdaSchedule::Custom { ref values, .. } => {
                for (index, v) in values.iter().enumerate() {
                    if !(*v > 0.0) {
                        issues.push(ScheduleIssue::CustomValueNotPositive { index, value: *v });
                        break;
                    }
                }
            }
        }
        let lambda_bar = self.summability();
        if lambda_bar.is_infinite() {
            issues.push(ScheduleIssue::NotSummable);
        }
        ScheduleReport {
            kind: alloc::string::String::from(self.kind_name()),
            target: self.target(),
            lambda_bar,
            issues,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ScheduleIssue {
    /// λ̄ = Σ|λ_n − λ| diverges, so the convergence guarantee does not apply.
    NotSummable,
    TargetNotPositive { target: f64 },
    BetaOutOfRange { beta: f64 },
    MuNotPositive { mu: f64 },
    ThetaNotPositive { theta: f64 },
    CustomValueNotPositive { index: usize, value: f64 },
}

impl core::fmt::Display for ScheduleIssue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ScheduleIssue::NotSummable => write!(f, "not summable"),
            ScheduleIssue::TargetNotPositive { target } => {
                write!(f, "target not positive: {target}")
            }
            ScheduleIssue::BetaOutOfRange { beta } => write!(f, "beta out of range: {beta}"),
            ScheduleIssue::MuNotPositive { mu } => write!(f, "mu not positive: {mu}"),
            ScheduleIssue::ThetaNotPositive { theta } => {
                write!(f, "theta not positive: {theta}")
            }
            ScheduleIssue::CustomValueNotPositive { index, value } => {
                write!(f, "custom value not positive at index {index}: {value}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScheduleReport {
    pub kind: alloc::string::String,
    pub target: f64,
    pub lambda_bar: f64,
    pub issues: Vec<ScheduleIssue>,
}

impl ScheduleReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}
