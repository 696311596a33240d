use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;

use fracmal::analysis::full_report;
use fracmal::fracsolver::{solve, FractionalOrder, Trajectory};
use fracmal::model::{Compartment, MalariaSystem};

use crate::output::{output_name, write_atomically, write_phase_csv, write_trajectory_csv};
use crate::report::ReportRecord;
use crate::{CliError, Scenario};

/// Solves the scenario once per order, in parallel, results in `orders` order.
pub fn run_sweep(s: &Scenario) -> Result<Vec<Trajectory>, CliError> {
    let y0 = s.config.initial_state.to_array();
    let solve_one = |order: FractionalOrder| {
        let system = MalariaSystem::new(&s.config.params, order);
        solve(&system, &y0, order, s.grid)
            .map_err(|e| CliError::Numerical(format!("alpha = {}: {e}", order.value())))
    };
    thread::scope(|scope| {
        let handles: Vec<_> = s
            .orders
            .iter()
            .map(|&o| scope.spawn(move || solve_one(o)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    })
}

fn ensure_dir(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })
}

fn stride(s: &Scenario, over: Option<usize>) -> Result<usize, CliError> {
    match over.unwrap_or(s.config.stride) {
        0 => Err(CliError::Invalid("stride: must be at least 1".into())),
        n => Ok(n),
    }
}

fn phase_stem(x: Compartment, y: Compartment) -> String {
    format!("phase_{x}_{y}")
}

fn write_phases(
    s: &Scenario,
    trajs: &[Trajectory],
    out: &Path,
    pairs: &[[Compartment; 2]],
    stride: usize,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for &[x, y] in pairs {
        for (order, traj) in s.orders.iter().zip(trajs) {
            let path = out.join(output_name(&phase_stem(x, y), order.value(), "csv"));
            written.push(write_atomically(&path, |w| {
                write_phase_csv(w, traj, x, y, stride)
            })?);
        }
    }
    Ok(written)
}

/// Writes `trajectory_alpha<a>.csv` per order, plus phase and report files
/// when the scenario's `outputs` ask for them. Returns the paths written.
pub fn cmd_simulate(
    s: &Scenario,
    out: &Path,
    stride_override: Option<usize>,
) -> Result<Vec<PathBuf>, CliError> {
    let stride = stride(s, stride_override)?;
    let trajs = run_sweep(s)?;
    let reports = if s.config.outputs.report {
        Some(reports(s)?)
    } else {
        None
    };
    ensure_dir(out)?;
    let mut written = Vec::new();
    if s.config.outputs.trajectory {
        for (order, traj) in s.orders.iter().zip(&trajs) {
            let path = out.join(output_name("trajectory", order.value(), "csv"));
            written.push(write_atomically(&path, |w| {
                write_trajectory_csv(w, traj, stride)
            })?);
        }
    }
    written.extend(write_phases(
        s,
        &trajs,
        out,
        &s.config.outputs.phase,
        stride,
    )?);
    if let Some(reports) = reports {
        written.extend(write_reports(s, &reports, out)?);
    }
    Ok(written)
}

pub fn cmd_phase(
    s: &Scenario,
    out: &Path,
    x: Compartment,
    y: Compartment,
    stride_override: Option<usize>,
) -> Result<Vec<PathBuf>, CliError> {
    if x == y {
        return Err(CliError::Invalid(format!(
            "phase axes must differ, both are {x}"
        )));
    }
    let stride = stride(s, stride_override)?;
    let trajs = run_sweep(s)?;
    ensure_dir(out)?;
    write_phases(s, &trajs, out, &[[x, y]], stride)
}

fn reports(s: &Scenario) -> Result<Vec<ReportRecord>, CliError> {
    s.orders
        .iter()
        .map(|&o| {
            full_report(&s.config.params, o)
                .map(|r| ReportRecord::from(&r))
                .map_err(|e| CliError::Numerical(format!("alpha = {}: {e}", o.value())))
        })
        .collect()
}

fn write_reports(
    s: &Scenario,
    reports: &[ReportRecord],
    out: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    s.orders
        .iter()
        .zip(reports)
        .map(|(o, r)| {
            let path = out.join(output_name("report", o.value(), "json"));
            write_atomically(&path, |w| {
                serde_json::to_writer_pretty(&mut *w, r)?;
                w.write_all(b"\n")
            })
        })
        .collect()
}

/// Writes `report_alpha<a>.json` per order.
pub fn cmd_analyze(s: &Scenario, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let reports = reports(s)?;
    ensure_dir(out)?;
    write_reports(s, &reports, out)
}
