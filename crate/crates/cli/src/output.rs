//! File naming and CSV rendering.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use fracmal::fracsolver::Trajectory;
use fracmal::model::Compartment;

use crate::CliError;

pub const TRAJECTORY_HEADER: &str = "t,s_h,i_h,r_h,s_v,i_v";

/// `alpha` with two decimals, or four when two would not read back exactly
/// (`0.999`), or the shortest exact form beyond that.
pub fn alpha_label(alpha: f64) -> String {
    for digits in [2, 4] {
        let s = format!("{alpha:.digits$}");
        if s.parse::<f64>() == Ok(alpha) {
            return s;
        }
    }
    format!("{alpha}")
}

pub fn output_name(stem: &str, alpha: f64, ext: &str) -> String {
    format!("{stem}_alpha{}.{ext}", alpha_label(alpha))
}

/// Row indices kept by `stride`; the last grid point is always kept.
pub fn kept_rows(len: usize, stride: usize) -> impl Iterator<Item = usize> {
    let last = len.saturating_sub(1);
    (0..len).filter(move |k| k % stride == 0 || *k == last)
}

fn field(out: &mut impl Write, v: f64) -> std::io::Result<()> {
    write!(out, "{v:.16e}")
}

pub fn write_trajectory_csv(
    out: &mut impl Write,
    traj: &Trajectory,
    stride: usize,
) -> std::io::Result<()> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for k in kept_rows(traj.len(), stride) {
        field(out, traj.time(k))?;
        for &v in traj.state(k) {
            out.write_all(b",")?;
            field(out, v)?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_phase_csv(
    out: &mut impl Write,
    traj: &Trajectory,
    x: Compartment,
    y: Compartment,
    stride: usize,
) -> std::io::Result<()> {
    writeln!(out, "{x},{y}")?;
    for k in kept_rows(traj.len(), stride) {
        let s = traj.state(k);
        field(out, s[x.index()])?;
        out.write_all(b",")?;
        field(out, s[y.index()])?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes through a `.partial` sibling and renames on success, so a failed
/// write never leaves a truncated file under the final name.
pub fn write_atomically<F>(path: &Path, body: F) -> Result<PathBuf, CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let mut partial = path.as_os_str().to_owned();
    partial.push(".partial");
    let partial = PathBuf::from(partial);
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let result = File::create(&partial).and_then(|f| {
        let mut w = BufWriter::new(f);
        body(&mut w)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()
    });
    if let Err(e) = result.and_then(|_| fs::rename(&partial, path)) {
        let _ = fs::remove_file(&partial);
        return Err(io_err(e));
    }
    Ok(path.to_path_buf())
}
