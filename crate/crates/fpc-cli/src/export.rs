//! File emission: trace CSV/JSON, curve CSV, demo artifact bundles.
//!
//! Float formatting uses Rust's shortest-roundtrip `Display`, so emitted
//! files are byte-identical across runs with the same seed and parse back
//! to the exact same doubles.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fpc_core::{
    ErgodicPoint, LambdaSchedule, ParetoCurve, ScheduleReport, SolveResult, SolverConfig,
    TracePoint,
};

use crate::experiment::{DemoOutput, DemoSummary};
use crate::pgm::save_pgm;
use crate::AppError;

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

/// Trace CSV: `n,lambda_n,f,g,F_lambda,step_norm,eps_n,gap_n`, with empty
/// certificate fields when the monitors were off.
pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("n,lambda_n,f,g,F_lambda,step_norm,eps_n,gap_n\n");
    for t in trace {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            t.n,
            t.lambda_n,
            t.f,
            t.g,
            t.f_lambda,
            t.step_norm,
            fmt_opt(t.eps_n),
            fmt_opt(t.gap_n),
        ));
    }
    out
}

pub fn write_trace_csv(path: &Path, trace: &[TracePoint]) -> Result<(), AppError> {
    fs::write(path, trace_csv(trace))?;
    Ok(())
}

/// Curve CSV: `lambda,tau,f,iterations`.
pub fn curve_csv(curve: &ParetoCurve) -> String {
    let mut out = String::from("lambda,tau,f,iterations\n");
    for p in &curve.points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.lambda, p.tau, p.f_val, p.solve_iterations
        ));
    }
    out
}

pub fn write_curve_csv(path: &Path, curve: &ParetoCurve) -> Result<(), AppError> {
    fs::write(path, curve_csv(curve))?;
    Ok(())
}

/// Full JSON export of one solve: the trace rows plus the solver config and
/// schedule metadata needed to re-validate the run offline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceExport {
    pub label: String,
    pub lambda: f64,
    pub alpha: f64,
    pub lipschitz: f64,
    pub config: SolverConfig,
    pub schedule: LambdaSchedule,
    pub schedule_report: ScheduleReport,
    pub converged: bool,
    pub iterations: usize,
    pub m_running: f64,
    pub warnings: Vec<String>,
    pub trace: Vec<TracePoint>,
    pub ergodic: Vec<ErgodicPoint>,
}

impl TraceExport {
    pub fn from_result(
        label: &str,
        lambda: f64,
        lipschitz: f64,
        config: &SolverConfig,
        schedule: &LambdaSchedule,
        result: &SolveResult,
    ) -> Self {
        TraceExport {
            label: label.to_string(),
            lambda,
            alpha: config.alpha,
            lipschitz,
            config: config.clone(),
            schedule: schedule.clone(),
            schedule_report: schedule.validate(),
            converged: result.converged,
            iterations: result.iterations,
            m_running: result.m_running,
            warnings: result.warnings.clone(),
            trace: result.trace.clone(),
            ergodic: result.ergodic.clone(),
        }
    }
}

pub fn write_trace_json(path: &Path, export: &TraceExport) -> Result<(), AppError> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, export)?;
    file.write_all(b"\n")?;
    Ok(())
}

pub fn read_trace_json(path: &Path) -> Result<TraceExport, AppError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_summary_json(path: &Path, summary: &DemoSummary) -> Result<(), AppError> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, summary)?;
    file.write_all(b"\n")?;
    Ok(())
}

pub fn read_summary_json(path: &Path) -> Result<DemoSummary, AppError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Write the full demo bundle into `out_dir`. On any failure the files
/// already written by this call are removed before the error is returned.
pub fn write_demo_artifacts(output: &DemoOutput, out_dir: &Path) -> Result<Vec<PathBuf>, AppError> {
    fs::create_dir_all(out_dir)?;
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<(), AppError> {
        let mut emit = |name: &str, action: &dyn Fn(&Path) -> Result<(), AppError>|
         -> Result<(), AppError> {
            let path = out_dir.join(name);
            action(&path)?;
            written.push(path);
            Ok(())
        };

        emit("phantom.pgm", &|p| save_pgm(p, &output.setup.truth))?;
        emit("degraded.pgm", &|p| save_pgm(p, &output.setup.degraded))?;
        emit("curve.csv", &|p| write_curve_csv(p, &output.curve))?;
        for run in &output.runs {
            let cfg = output.setup.solver_config(output.setup.config.iters);
            emit(&format!("trace_{}.csv", run.label), &|p| {
                write_trace_csv(p, &run.result.trace)
            })?;
            let export = TraceExport::from_result(
                run.label,
                run.schedule.target(),
                output.setup.lipschitz,
                &cfg,
                &run.schedule,
                &run.result,
            );
            emit(&format!("trace_{}.json", run.label), &|p| {
                write_trace_json(p, &export)
            })?;
            emit(&format!("restored_{}.pgm", run.label), &|p| {
                save_pgm(p, &run.restored)
            })?;
            emit(&format!("path_{}.json", run.label), &|p| {
                fs::write(p, serde_json::to_string_pretty(&run.path_report)?)?;
                Ok(())
            })?;
        }
        emit("summary.json", &|p| write_summary_json(p, &output.summary))?;
        Ok(())
    })();
    match result {
        Ok(()) => Ok(written),
        Err(e) => {
            for path in &written {
                fs::remove_file(path).ok();
            }
            Err(e)
        }
    }
}
