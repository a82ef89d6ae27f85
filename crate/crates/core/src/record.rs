//! In-memory result of a simulation run. Serialization lives in the CLI crate.

use crate::geometry::Point2;
use crate::mode_solver::PolarField;

/// Time series with named columns; the first column is always `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Diagnostics {
    pub fn new(columns: Vec<&'static str>) -> Self {
        debug_assert_eq!(columns.first(), Some(&"t"));
        Diagnostics { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "diagnostics row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }
}

/// State saved at one output time.
#[derive(Debug, Clone, PartialEq)]
pub enum SnapshotData {
    Particles { positions: Vec<Point2>, weights: Vec<f64>, q_values: Vec<f64> },
    Polar(PolarField),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub data: SnapshotData,
}

/// Tool version, wall-clock time and seed of a run; kept apart from the
/// diagnostics so those stay byte-reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub tool_version: &'static str,
    pub wall_clock_s: f64,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(wall_clock_s: f64) -> Self {
        Provenance { tool_version: env!("CARGO_PKG_VERSION"), wall_clock_s, seed: None }
    }
}

/// Config echo, diagnostics, snapshots and provenance of one run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config_echo: Vec<(String, String)>,
    pub diagnostics: Diagnostics,
    pub snapshots: Vec<Snapshot>,
    pub provenance: Provenance,
    /// Set when the run stopped early; the record holds everything up to that point.
    pub aborted: Option<String>,
}

impl RunRecord {
    pub fn snapshot_times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }

    pub fn last_snapshot(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }
}
