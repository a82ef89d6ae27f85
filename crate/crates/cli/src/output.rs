//! Run directories and CSV files.

use std::fs;
use std::path::Path;

use vortexlab_core::{RunRecord, SnapshotData};

use crate::error::{CliError, Result};

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

/// Writes `header` and `rows` to `path`.
pub fn write_csv<R, I>(path: &Path, header: &[&str], rows: R) -> Result<()>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator,
    I::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_path(path).map_err(CliError::csv(path))?;
    w.write_record(header).map_err(CliError::csv(path))?;
    for row in rows {
        w.write_record(row).map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

/// Shortest decimal that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn write_text(path: &Path, text: String) -> Result<()> {
    fs::write(path, text).map_err(CliError::io(path))
}

/// `config.echo`, `diagnostics.csv`, `provenance.txt` and, if asked, `snapshots/*.csv` under `dir`.
pub fn write_run(dir: &Path, record: &RunRecord, snapshots: bool) -> Result<()> {
    create_dir(dir)?;
    let echo: String = record.config_echo.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    write_text(&dir.join("config.echo"), echo)?;

    let d = &record.diagnostics;
    write_csv(&dir.join("diagnostics.csv"), &d.columns, d.rows.iter().map(|r| r.iter().map(|&x| num(x))))?;

    let snap_dir = dir.join("snapshots");
    if snapshots {
        create_dir(&snap_dir)?;
    }
    for s in record.snapshots.iter().filter(|_| snapshots) {
        let path = snap_dir.join(format!("snapshot_{:06}.csv", s.step));
        match &s.data {
            SnapshotData::Particles { positions, weights, q_values } => write_csv(
                &path,
                &["x1", "x2", "weight", "q"],
                positions.iter().zip(weights).zip(q_values).map(|((p, w), q)| [num(p.x1), num(p.x2), num(*w), num(*q)]),
            )?,
            SnapshotData::Polar(field) => {
                let grid = field.grid();
                let rows = grid.radial().nodes().iter().enumerate().flat_map(|(i, &r)| {
                    (0..grid.n_theta()).map(move |j| [num(r), num(grid.theta(j)), num(field.get(i, j))])
                });
                write_csv(&path, &["r", "theta", "q"], rows)?;
            }
        }
    }

    let p = &record.provenance;
    let mut prov = format!("tool_version = {}\nwall_clock_s = {:.3}\n", p.tool_version, p.wall_clock_s);
    prov.push_str(&match p.seed {
        Some(seed) => format!("seed = {seed}\n"),
        None => "seed = none\n".to_string(),
    });
    if let Some(reason) = &record.aborted {
        prov.push_str(&format!("aborted = {reason}\n"));
    }
    write_text(&dir.join("provenance.txt"), prov)
}
