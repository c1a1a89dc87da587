//! Offline validation of a saved trace export: re-derives the quantities a
//! run promised and reports every violated inequality.

use fpc_core::solver::EPS_CERT_SLACK;

use crate::export::TraceExport;

const F_LAMBDA_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub rows: usize,
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_trace(export: &TraceExport) -> CheckReport {
    let mut violations = Vec::new();
    let lambda = export.lambda;

    if export.schedule.target() != lambda {
        violations.push(format!(
            "schedule target {} does not match recorded lambda {}",
            export.schedule.target(),
            lambda
        ));
    }

    for t in &export.trace {
        let recomputed = t.f + lambda * t.g;
        if (recomputed - t.f_lambda).abs() > F_LAMBDA_TOL {
            violations.push(format!(
                "n={}: F_lambda {} != f + lambda*g = {}",
                t.n, t.f_lambda, recomputed
            ));
        }
        let expected_lambda_n = export.schedule.eval(t.n);
        let rel = (t.lambda_n - expected_lambda_n).abs() / expected_lambda_n.abs().max(1e-300);
        if rel > 1e-12 {
            violations.push(format!(
                "n={}: recorded lambda_n {} differs from schedule value {}",
                t.n, t.lambda_n, expected_lambda_n
            ));
        }
        if let (Some(eps), Some(gap)) = (t.eps_n, t.gap_n) {
            if gap > eps + EPS_CERT_SLACK {
                violations.push(format!(
                    "n={}: certificate violated: gap {} > eps {} + {}",
                    t.n, gap, eps, EPS_CERT_SLACK
                ));
            }
        }
    }

    if export.converged {
        if let Some(last) = export.trace.last() {
            if last.step_norm > export.config.step_tol {
                violations.push(format!(
                    "converged run ends with step norm {} above tolerance {}",
                    last.step_norm, export.config.step_tol
                ));
            }
        }
    }

    CheckReport {
        rows: export.trace.len(),
        violations,
    }
}
