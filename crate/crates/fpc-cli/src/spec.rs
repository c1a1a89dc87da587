//! Parsing of command-line spec strings: schedules (`kind:key=value,...`)
//! and λ grids (`min,max,count`).

use std::path::Path;

use fpc_core::LambdaSchedule;
use serde::{Deserialize, Serialize};

use crate::AppError;

/// Log-spaced λ grid description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            min: 1e-3,
            max: 1e-1,
            count: 30,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), AppError> {
        if !(self.min > 0.0 && self.max > self.min) {
            return Err(AppError::Parse(format!(
                "grid requires 0 < min < max, got min {} max {}",
                self.min, self.max
            )));
        }
        if self.count < 2 {
            return Err(AppError::Parse(format!(
                "grid needs at least 2 points, got {}",
                self.count
            )));
        }
        Ok(())
    }

    /// Log-spaced values from max down to min (descending, ready for
    /// warm-started curve construction).
    pub fn descending(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| self.max * (self.min / self.max).powf(i as f64 / (n - 1) as f64))
            .collect()
    }
}

pub fn parse_grid(text: &str) -> Result<GridSpec, AppError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(AppError::Parse(format!(
            "grid spec must be min,max,count — got {text:?}"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|e| AppError::Parse(format!("grid min {:?}: {e}", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|e| AppError::Parse(format!("grid max {:?}: {e}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| AppError::Parse(format!("grid count {:?}: {e}", parts[2])))?;
    let spec = GridSpec { min, max, count };
    spec.validate()?;
    Ok(spec)
}

fn parse_params(text: &str) -> Result<Vec<(String, String)>, AppError> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (k, v) = piece.split_once('=').ok_or_else(|| {
            AppError::Parse(format!("schedule parameter {piece:?} is not key=value"))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn get_f64(params: &[(String, String)], key: &str) -> Result<Option<f64>, AppError> {
    for (k, v) in params {
        if k == key {
            let parsed: f64 = v
                .parse()
                .map_err(|e| AppError::Parse(format!("schedule parameter {key}={v}: {e}")))?;
            return Ok(Some(parsed));
        }
    }
    Ok(None)
}

/// Parse a schedule spec string. Kinds and their parameters (defaults match
/// the standard experiment sequences):
///
/// * `constant:target=λ`
/// * `power:target=λ[,beta=9,theta=1.01]`
/// * `floor:target=λ[,beta=0.99,mu=10λ]` (also `geometric-floor`)
/// * `offset:target=λ[,beta=0.9,mu=9]` (also `geometric-offset`)
/// * `custom:file=PATH` — one λ per line, the last value is the target
pub fn parse_schedule(text: &str) -> Result<LambdaSchedule, AppError> {
    let (kind, rest) = match text.split_once(':') {
        Some((k, r)) => (k.trim(), r),
        None => (text.trim(), ""),
    };
    let params = parse_params(rest)?;
    let need_target = || -> Result<f64, AppError> {
        get_f64(&params, "target")?.ok_or_else(|| {
            AppError::Parse(format!("schedule kind {kind:?} requires target=λ"))
        })
    };
    match kind {
        "constant" => Ok(LambdaSchedule::Constant {
            target: need_target()?,
        }),
        "power" => {
            let target = need_target()?;
            Ok(LambdaSchedule::Power {
                target,
                beta: get_f64(&params, "beta")?.unwrap_or(9.0),
                theta: get_f64(&params, "theta")?.unwrap_or(1.01),
            })
        }
        "floor" | "geometric-floor" => {
            let target = need_target()?;
            Ok(LambdaSchedule::GeometricFloor {
                target,
                beta: get_f64(&params, "beta")?.unwrap_or(0.99),
                mu: get_f64(&params, "mu")?.unwrap_or(10.0 * target),
            })
        }
        "offset" | "geometric-offset" => {
            let target = need_target()?;
            Ok(LambdaSchedule::GeometricOffset {
                target,
                beta: get_f64(&params, "beta")?.unwrap_or(0.9),
                mu: get_f64(&params, "mu")?.unwrap_or(9.0),
            })
        }
        "custom" => {
            let file = params
                .iter()
                .find(|(k, _)| k == "file")
                .map(|(_, v)| v.clone())
                .ok_or_else(|| {
                    AppError::Parse("custom schedule requires file=PATH".to_string())
                })?;
            schedule_from_file(Path::new(&file))
        }
        other => Err(AppError::Parse(format!(
            "unknown schedule kind {other:?} (expected constant, power, floor, offset or custom)"
        ))),
    }
}

/// Read one λ value per line (blank lines and `#` comments ignored); the
/// last value is the target the schedule holds afterwards.
pub fn schedule_from_file(path: &Path) -> Result<LambdaSchedule, AppError> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|e| {
            AppError::Parse(format!(
                "{}:{}: bad lambda value {line:?}: {e}",
                path.display(),
                lineno + 1
            ))
        })?;
        values.push(v);
    }
    LambdaSchedule::custom(values).map_err(AppError::Core)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_round_trip() {
        let g = parse_grid("1e-3,1e-1,30").unwrap();
        assert_eq!(g, GridSpec::default());
        let values = g.descending();
        assert_eq!(values.len(), 30);
        assert!((values[0] - 0.1).abs() <= 1e-15);
        assert!((values[29] - 1e-3).abs() <= 1e-15);
        for pair in values.windows(2) {
            assert!(pair[1] < pair[0]);
        }
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(parse_grid("1,2").is_err());
        assert!(parse_grid("0,1,5").is_err());
        assert!(parse_grid("2,1,5").is_err());
        assert!(parse_grid("1e-3,1e-1,1").is_err());
    }

    #[test]
    fn schedule_kinds_parse_with_defaults() {
        assert_eq!(
            parse_schedule("constant:target=0.5").unwrap(),
            LambdaSchedule::Constant { target: 0.5 }
        );
        assert_eq!(
            parse_schedule("power:target=1e-3").unwrap(),
            LambdaSchedule::Power {
                target: 1e-3,
                beta: 9.0,
                theta: 1.01
            }
        );
        assert_eq!(
            parse_schedule("floor:target=1e-2").unwrap(),
            LambdaSchedule::GeometricFloor {
                target: 1e-2,
                beta: 0.99,
                mu: 0.1
            }
        );
        assert_eq!(
            parse_schedule("offset:target=1e-3,mu=99,beta=0.9").unwrap(),
            LambdaSchedule::GeometricOffset {
                target: 1e-3,
                beta: 0.9,
                mu: 99.0
            }
        );
    }

    #[test]
    fn unknown_kind_and_missing_target_rejected() {
        assert!(parse_schedule("zigzag:target=1").is_err());
        assert!(parse_schedule("power:beta=9").is_err());
        assert!(parse_schedule("constant:target=oops").is_err());
    }

    #[test]
    fn custom_schedule_from_file() {
        let mut path = std::env::temp_dir();
        path.push(format!("fpc-spec-test-{}.txt", std::process::id()));
        std::fs::write(&path, "# comment\n0.5\n0.25\n\n0.125\n").unwrap();
        let s = schedule_from_file(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(s.target(), 0.125);
        assert_eq!(s.eval(0), 0.5);
        assert_eq!(s.eval(10), 0.125);
    }
}
