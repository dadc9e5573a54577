//! Ingestion of FT trajectories and task/grasp configuration files.
//!
//! Trajectory CSV: header `t,Fx,Fy,Fz,Tx,Ty,Tz`, one row per sample, `t` in
//! seconds strictly increasing and uniform within 1e-9 s, forces in N and
//! torques in N·m. `#`-prefixed comment lines are ignored. A single-column
//! variant `t,torque` carries one joint-torque trajectory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::IoError;

/// Six-axis force/torque sample at the tool base.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Wrench {
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
}

impl Wrench {
    pub fn new(fx: f64, fy: f64, fz: f64, tx: f64, ty: f64, tz: f64) -> Self {
        Self {
            fx,
            fy,
            fz,
            tx,
            ty,
            tz,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(
            self.fx * s,
            self.fy * s,
            self.fz * s,
            self.tx * s,
            self.ty * s,
            self.tz * s,
        )
    }
}

/// Uniformly sampled wrench time series.
#[derive(Debug, Clone, PartialEq)]
pub struct WrenchTrajectory {
    pub sample_rate: f64,
    pub samples: Vec<Wrench>,
}

/// Handle size classes from the task table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HandleSize {
    Small,
    Medium,
    Large,
}

impl HandleSize {
    pub fn radius(&self) -> f64 {
        match self {
            HandleSize::Small => 0.008,
            HandleSize::Medium => 0.015,
            HandleSize::Large => 0.022,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            HandleSize::Small => "small",
            HandleSize::Medium => "medium",
            HandleSize::Large => "large",
        }
    }
}

/// One task of the suite: handle, grasp, palm usage and its FT recording.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskConfig {
    pub name: String,
    pub handle_size: Option<HandleSize>,
    pub radius: f64,
    pub grasp_name: String,
    pub palm: bool,
    pub friction_mu: f64,
    pub trajectory_path: PathBuf,
}

const KNOWN_GRASPS: &[&str] = &["M-Pinch", "L-Pinch", "Tripod1", "Tripod2", "Tripod3"];

#[derive(Debug, Deserialize)]
struct TaskRecord {
    name: String,
    handle_size: Option<HandleSize>,
    radius_m: Option<f64>,
    grasp: String,
    palm: bool,
    mu: Option<f64>,
    trajectory: PathBuf,
}

#[derive(Debug, Deserialize)]
struct SuiteFile {
    #[serde(default, rename = "task")]
    tasks: Vec<TaskRecord>,
}

/// Grasp library: per grasp name, nominal contact locations on the cylinder.
#[derive(Debug, Clone, Deserialize)]
pub struct GraspLibrary {
    #[serde(rename = "grasp")]
    grasps: Vec<GraspEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GraspEntry {
    pub name: String,
    pub contacts: Vec<GraspContact>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct GraspContact {
    /// Axial pressure-center coordinate (m).
    pub z: f64,
    /// Angular pressure-center coordinate (rad).
    pub theta: f64,
    pub pressure_radius: f64,
    #[serde(default)]
    pub palm: bool,
}

impl GraspLibrary {
    pub fn get(&self, name: &str) -> Option<&GraspEntry> {
        self.grasps.iter().find(|g| g.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.grasps.iter().map(|g| g.name.as_str())
    }
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn parse_cell(path: &Path, row: usize, column: &str, raw: &str) -> Result<f64, IoError> {
    raw.trim().parse::<f64>().map_err(|_| IoError::Parse {
        path: path.display().to_string(),
        row,
        column: column.to_string(),
        message: format!("non-numeric cell '{}'", raw.trim()),
    })
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>, IoError> {
    let file = std::fs::File::open(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn column_indices(
    path: &Path,
    headers: &csv::StringRecord,
    expected: &[&str],
) -> Result<Vec<usize>, IoError> {
    expected
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == *name)
                .ok_or_else(|| IoError::MissingColumn {
                    path: path.display().to_string(),
                    column: name.to_string(),
                })
        })
        .collect()
}

fn check_time_axis(path: &Path, times: &[f64]) -> Result<f64, IoError> {
    if times.len() < 2 {
        return Err(IoError::Parse {
            path: path.display().to_string(),
            row: times.len(),
            column: "t".to_string(),
            message: "trajectory needs at least 2 samples".to_string(),
        });
    }
    let dt = times[1] - times[0];
    for (i, pair) in times.windows(2).enumerate() {
        let step = pair[1] - pair[0];
        if step <= 0.0 {
            return Err(IoError::Parse {
                path: path.display().to_string(),
                row: i + 2,
                column: "t".to_string(),
                message: format!("non-monotone time: {} after {}", pair[1], pair[0]),
            });
        }
        if (step - dt).abs() > 1e-9 {
            return Err(IoError::Parse {
                path: path.display().to_string(),
                row: i + 2,
                column: "t".to_string(),
                message: format!("non-uniform sampling: step {} vs {}", step, dt),
            });
        }
    }
    Ok(1.0 / dt)
}

/// Load a six-axis wrench trajectory CSV.
pub fn load_trajectory(path: &Path) -> Result<WrenchTrajectory, IoError> {
    let mut reader = csv_reader(path)?;
    let headers = reader
        .headers()
        .map_err(|e| IoError::Parse {
            path: path.display().to_string(),
            row: 1,
            column: "header".to_string(),
            message: e.to_string(),
        })?
        .clone();
    let cols = column_indices(path, &headers, &["t", "Fx", "Fy", "Fz", "Tx", "Ty", "Tz"])?;
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after header
        let record = record.map_err(|e| IoError::Parse {
            path: path.display().to_string(),
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        let names = ["t", "Fx", "Fy", "Fz", "Tx", "Ty", "Tz"];
        let mut values = [0.0; 7];
        for (k, (&col, name)) in cols.iter().zip(names).enumerate() {
            let raw = record.get(col).ok_or_else(|| IoError::Parse {
                path: path.display().to_string(),
                row,
                column: name.to_string(),
                message: "missing cell".to_string(),
            })?;
            values[k] = parse_cell(path, row, name, raw)?;
            if !values[k].is_finite() {
                return Err(IoError::Parse {
                    path: path.display().to_string(),
                    row,
                    column: name.to_string(),
                    message: "non-finite value".to_string(),
                });
            }
        }
        times.push(values[0]);
        samples.push(Wrench::new(
            values[1], values[2], values[3], values[4], values[5], values[6],
        ));
    }
    let sample_rate = check_time_axis(path, &times)?;
    Ok(WrenchTrajectory {
        sample_rate,
        samples,
    })
}

/// Save a wrench trajectory in the same CSV schema (full f64 round-trip
/// precision).
pub fn save_trajectory(path: &Path, traj: &WrenchTrajectory) -> Result<(), IoError> {
    let dt = 1.0 / traj.sample_rate;
    let mut out = String::from("t,Fx,Fy,Fz,Tx,Ty,Tz\n");
    for (i, w) in traj.samples.iter().enumerate() {
        let t = i as f64 * dt;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            t, w.fx, w.fy, w.fz, w.tx, w.ty, w.tz
        ));
    }
    std::fs::write(path, out).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

/// Load a single-column torque trajectory CSV (`t,torque`).
pub fn load_torque_csv(path: &Path) -> Result<(f64, Vec<f64>), IoError> {
    let mut reader = csv_reader(path)?;
    let headers = reader
        .headers()
        .map_err(|e| IoError::Parse {
            path: path.display().to_string(),
            row: 1,
            column: "header".to_string(),
            message: e.to_string(),
        })?
        .clone();
    let cols = column_indices(path, &headers, &["t", "torque"])?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| IoError::Parse {
            path: path.display().to_string(),
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        let t = parse_cell(path, row, "t", record.get(cols[0]).unwrap_or(""))?;
        let v = parse_cell(path, row, "torque", record.get(cols[1]).unwrap_or(""))?;
        times.push(t);
        values.push(v);
    }
    let sample_rate = check_time_axis(path, &times)?;
    Ok((sample_rate, values))
}

/// Load the task suite file. Trajectory paths are resolved relative to the
/// suite file's directory.
pub fn load_task_suite(path: &Path) -> Result<Vec<TaskConfig>, IoError> {
    let text = read_to_string(path)?;
    let suite: SuiteFile =
        toml::from_str(&text).map_err(|e| IoError::Config(format!("{}: {e}", path.display())))?;
    if suite.tasks.is_empty() {
        log::warn!("task suite {} is empty", path.display());
    }
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    suite
        .tasks
        .into_iter()
        .map(|rec| {
            if !KNOWN_GRASPS.contains(&rec.grasp.as_str()) {
                return Err(IoError::UnknownGrasp(rec.grasp.clone()));
            }
            let radius = match (rec.handle_size, rec.radius_m) {
                (Some(size), None) => size.radius(),
                (None, Some(r)) if r > 0.0 => r,
                (None, Some(r)) => {
                    return Err(IoError::Config(format!(
                        "task '{}': radius_m must be positive, got {r}",
                        rec.name
                    )))
                }
                _ => {
                    return Err(IoError::Config(format!(
                        "task '{}': exactly one of handle_size or radius_m required",
                        rec.name
                    )))
                }
            };
            let mu = rec.mu.unwrap_or(0.6);
            if !(mu > 0.0 && mu <= 2.5) {
                return Err(IoError::Config(format!(
                    "task '{}': mu must be in (0, 2.5], got {mu}",
                    rec.name
                )));
            }
            Ok(TaskConfig {
                name: rec.name,
                handle_size: rec.handle_size,
                radius,
                grasp_name: rec.grasp,
                palm: rec.palm,
                friction_mu: mu,
                trajectory_path: dir.join(rec.trajectory),
            })
        })
        .collect()
}

/// Load the grasp library file.
pub fn load_grasp_library(path: &Path) -> Result<GraspLibrary, IoError> {
    let text = read_to_string(path)?;
    let lib: GraspLibrary =
        toml::from_str(&text).map_err(|e| IoError::Config(format!("{}: {e}", path.display())))?;
    for entry in &lib.grasps {
        let fingers = entry.contacts.iter().filter(|c| !c.palm).count();
        let palms = entry.contacts.iter().filter(|c| c.palm).count();
        if fingers != 3 || palms > 1 {
            return Err(IoError::Config(format!(
                "grasp '{}': need exactly 3 finger contacts and at most 1 palm (got {fingers} + {palms})",
                entry.name
            )));
        }
    }
    Ok(lib)
}

/// Generic achieved-measurement map for report comparison: metric -> (value,
/// optional uncertainty).
pub type Measurements = BTreeMap<String, (f64, Option<f64>)>;

#[derive(Debug, Deserialize)]
struct MeasurementFile {
    #[serde(default, rename = "measurement")]
    measurements: Vec<MeasurementRecord>,
}

#[derive(Debug, Deserialize)]
struct MeasurementRecord {
    metric: String,
    value: f64,
    uncertainty: Option<f64>,
}

/// Load achieved measurements for a Table-style comparison.
pub fn load_measurements(path: &Path) -> Result<Measurements, IoError> {
    let text = read_to_string(path)?;
    let file: MeasurementFile =
        toml::from_str(&text).map_err(|e| IoError::Config(format!("{}: {e}", path.display())))?;
    Ok(file
        .measurements
        .into_iter()
        .map(|m| (m.metric, (m.value, m.uncertainty)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn zero_rows_at_100hz() {
        let f = write_tmp("t,Fx,Fy,Fz,Tx,Ty,Tz\n0.0,0,0,0,0,0,0\n0.01,0,0,0,0,0,0\n");
        let traj = load_trajectory(f.path()).unwrap();
        assert_eq!(traj.samples.len(), 2);
        assert!((traj.sample_rate - 100.0).abs() < 1e-6);
        assert_eq!(traj.samples[0], Wrench::default());
    }

    #[test]
    fn direct_field_mapping() {
        let f = write_tmp("t,Fx,Fy,Fz,Tx,Ty,Tz\n0.0,0,0,0,0,0,0\n0.01,1.0,0,0,0,0,0.06\n");
        let traj = load_trajectory(f.path()).unwrap();
        let w = traj.samples[1];
        assert_eq!(w.fx, 1.0);
        assert_eq!(w.tz, 0.06);
        assert_eq!(w.fy, 0.0);
    }

    #[test]
    fn missing_fz_column_cited() {
        let f = write_tmp("t,Fx,Fy,Tx,Ty,Tz\n0.0,0,0,0,0,0\n");
        match load_trajectory(f.path()) {
            Err(IoError::MissingColumn { column, .. }) => assert_eq!(column, "Fz"),
            other => panic!("expected missing column, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let f = write_tmp("t,Fx,Fy,Fz,Tx,Ty,Tz\n0.0,0,0,0,0,0,0\n0.01,abc,0,0,0,0,0\n");
        match load_trajectory(f.path()) {
            Err(IoError::Parse { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "Fx");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_monotone_time_rejected() {
        let f = write_tmp("t,Fx,Fy,Fz,Tx,Ty,Tz\n0.0,0,0,0,0,0,0\n0.02,0,0,0,0,0,0\n0.01,0,0,0,0,0,0\n");
        assert!(matches!(load_trajectory(f.path()), Err(IoError::Parse { .. })));
    }

    #[test]
    fn comment_lines_ignored() {
        let f = write_tmp("t,Fx,Fy,Fz,Tx,Ty,Tz\n# comment\n0.0,1,2,3,4,5,6\n0.01,1,2,3,4,5,6\n");
        let traj = load_trajectory(f.path()).unwrap();
        assert_eq!(traj.samples.len(), 2);
    }

    #[test]
    fn save_load_roundtrip_bit_exact() {
        let traj = WrenchTrajectory {
            sample_rate: 100.0,
            samples: vec![
                Wrench::new(1.234567891234, -0.5, 3.0e-7, 0.1, -0.25, 1.0 / 3.0),
                Wrench::new(0.0, 2.5, -9.81, 1e-12, 7.7, -0.0625),
                Wrench::new(5.0, 5.0, 5.0, 5.0, 5.0, 5.0),
            ],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        save_trajectory(&path, &traj).unwrap();
        let loaded = load_trajectory(&path).unwrap();
        assert_eq!(loaded.samples, traj.samples);
    }

    #[test]
    fn empty_suite_is_empty_list() {
        let f = write_tmp("");
        let tasks = load_task_suite(f.path()).unwrap();
        assert!(tasks.is_empty());
    }

    #[test]
    fn unknown_grasp_rejected() {
        let f = write_tmp(
            "[[task]]\nname = \"x\"\nhandle_size = \"small\"\ngrasp = \"X-Pinch\"\npalm = false\ntrajectory = \"x.csv\"\n",
        );
        assert!(matches!(
            load_task_suite(f.path()),
            Err(IoError::UnknownGrasp(name)) if name == "X-Pinch"
        ));
    }

    #[test]
    fn handle_size_maps_to_radius() {
        let f = write_tmp(
            "[[task]]\nname = \"x\"\nhandle_size = \"large\"\ngrasp = \"L-Pinch\"\npalm = true\ntrajectory = \"x.csv\"\n",
        );
        let tasks = load_task_suite(f.path()).unwrap();
        assert_eq!(tasks[0].radius, 0.022);
        assert_eq!(tasks[0].friction_mu, 0.6);
    }
}
