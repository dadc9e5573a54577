//! Requirement profiles and design comparison, plus suite-level aggregation
//! of per-task torque/bandwidth results.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bandwidth::JointType;
use crate::error::IoError;
use crate::wrench_io::Measurements;

/// Comparison direction for a requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Achieved must be >= desired.
    AtLeast,
    /// Achieved must be <= desired.
    AtMost,
}

impl Direction {
    pub fn symbol(&self) -> &'static str {
        match self {
            Direction::AtLeast => ">=",
            Direction::AtMost => "<=",
        }
    }
}

/// One requirement: metric name, desired value, unit and direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Requirement {
    pub metric: String,
    pub desired: f64,
    pub unit: String,
    pub direction: Direction,
    /// Free-text operating point or note (e.g. the torque at which a
    /// bandwidth was measured).
    #[serde(default)]
    pub note: Option<String>,
}

/// Named list of requirements.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct RequirementsProfile {
    pub name: String,
    #[serde(rename = "requirement")]
    pub requirements: Vec<Requirement>,
}

impl RequirementsProfile {
    pub fn validate(&self) -> Result<(), IoError> {
        let mut seen = std::collections::BTreeSet::new();
        for r in &self.requirements {
            if !seen.insert(r.metric.as_str()) {
                return Err(IoError::Config(format!(
                    "duplicate metric '{}' in profile '{}'",
                    r.metric, self.name
                )));
            }
        }
        Ok(())
    }
}

fn req(metric: &str, desired: f64, unit: &str, direction: Direction, note: Option<&str>) -> Requirement {
    Requirement {
        metric: metric.to_string(),
        desired,
        unit: unit.to_string(),
        direction,
        note: note.map(str::to_string),
    }
}

/// The shipped "everyday" requirements profile for a compact robotic finger.
pub fn everyday_profile() -> RequirementsProfile {
    use Direction::{AtLeast, AtMost};
    RequirementsProfile {
        name: "everyday".to_string(),
        requirements: vec![
            req("pip_torque", 0.65, "Nm", AtLeast, None),
            req("pip_bandwidth", 8.69, "Hz", AtLeast, Some("at 0.55 Nm")),
            req("pip_backdrive_torque", 0.1, "Nm", AtMost, None),
            req("pip_max_speed", 4.5, "rad/s", AtLeast, None),
            req("mcp_x_torque", 0.86, "Nm", AtLeast, None),
            req("mcp_x_bandwidth", 10.1, "Hz", AtLeast, Some("at 0.86 Nm")),
            req("mcp_backdrive_torque", 0.1, "Nm", AtMost, None),
            req("mcp_max_speed", 4.5, "rad/s", AtLeast, None),
            req("finger_width", 22.4, "mm", AtMost, None),
            req("knuckle_width", 22.4, "mm", AtMost, None),
            req("finger_height", 22.4, "mm", AtMost, None),
            req("knuckle_height", 22.4, "mm", AtMost, None),
            req("finger_length", 104.2, "mm", AtMost, None),
        ],
    }
}

/// One comparison row of a design report.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub metric: String,
    pub desired: f64,
    pub achieved: f64,
    /// Display-only uncertainty, never used in the comparison.
    pub uncertainty: Option<f64>,
    pub unit: String,
    pub direction: Direction,
    pub pass: bool,
}

/// Pass/fail comparison of achieved measurements against a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub profile_name: String,
    pub rows: Vec<MetricRow>,
}

impl DesignReport {
    pub fn passes(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn failures(&self) -> usize {
        self.rows.len() - self.passes()
    }

    /// Machine-readable CSV: metric,desired,achieved,unit,direction,pass.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,desired,achieved,unit,direction,pass\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.metric,
                row.desired,
                row.achieved,
                row.unit,
                row.direction.symbol(),
                row.pass
            ));
        }
        out
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<24} {:>10} {:>14} {:>8} {:>5} {:>5}\n",
            "metric", "desired", "achieved", "unit", "dir", "pass"
        );
        for row in &self.rows {
            let achieved = match row.uncertainty {
                Some(u) => format!("{}±{}", row.achieved, u),
                None => format!("{}", row.achieved),
            };
            out.push_str(&format!(
                "{:<24} {:>10} {:>14} {:>8} {:>5} {:>5}\n",
                row.metric,
                row.desired,
                achieved,
                row.unit,
                row.direction.symbol(),
                if row.pass { "yes" } else { "NO" }
            ));
        }
        out
    }
}

/// Compare achieved measurements against a profile. Uncertainty values are
/// carried for display; comparison uses central values, non-strict.
pub fn compare(profile: &RequirementsProfile, achieved: &Measurements) -> Result<DesignReport, IoError> {
    profile.validate()?;
    let rows = profile
        .requirements
        .iter()
        .map(|r| {
            let &(value, uncertainty) =
                achieved
                    .get(&r.metric)
                    .ok_or_else(|| IoError::Config(format!(
                        "missing achieved value for metric '{}'",
                        r.metric
                    )))?;
            let pass = match r.direction {
                Direction::AtLeast => value >= r.desired,
                Direction::AtMost => value <= r.desired,
            };
            Ok(MetricRow {
                metric: r.metric.clone(),
                desired: r.desired,
                achieved: value,
                uncertainty,
                unit: r.unit.clone(),
                direction: r.direction,
                pass,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(DesignReport {
        profile_name: profile.name.clone(),
        rows,
    })
}

/// Load a requirements profile from TOML.
pub fn load_profile(path: &std::path::Path) -> Result<RequirementsProfile, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    let profile: RequirementsProfile =
        toml::from_str(&text).map_err(|e| IoError::Config(format!("{}: {e}", path.display())))?;
    profile.validate()?;
    Ok(profile)
}

/// Per-task result fed into the suite summary.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskResult {
    pub task: String,
    pub handle_size: String,
    pub palm: bool,
    pub infeasible_steps: usize,
    /// Per joint type: (peak torque N·m, minimum bandwidth Hz).
    pub per_joint: BTreeMap<JointType, (f64, f64)>,
}

/// Suite-wide aggregation.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    /// Per joint type: suite-wide max torque and max required bandwidth.
    pub per_joint: BTreeMap<JointType, (f64, f64)>,
    /// Tasks grouped by (handle size, palm usage).
    pub groups: BTreeMap<(String, bool), Vec<String>>,
    pub tasks: Vec<TaskResult>,
}

impl JointType {
    fn order(&self) -> u8 {
        match self {
            JointType::Pip => 0,
            JointType::McpX => 1,
            JointType::McpZ => 2,
        }
    }
}

impl Ord for JointType {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order().cmp(&other.order())
    }
}

impl PartialOrd for JointType {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Aggregate per-task results: suite-wide maxima per joint type and grouping
/// by handle size and palm usage. Permutation-invariant over the input order
/// except for the task listing itself.
pub fn summarize_tasks(results: &[TaskResult]) -> Result<SuiteSummary, IoError> {
    if results.is_empty() {
        return Err(IoError::Config("empty suite: no task results".to_string()));
    }
    let mut per_joint: BTreeMap<JointType, (f64, f64)> = BTreeMap::new();
    let mut groups: BTreeMap<(String, bool), Vec<String>> = BTreeMap::new();
    for task in results {
        for (&joint, &(torque, bw)) in &task.per_joint {
            let entry = per_joint.entry(joint).or_insert((0.0, 0.0));
            entry.0 = entry.0.max(torque);
            entry.1 = entry.1.max(bw);
        }
        groups
            .entry((task.handle_size.clone(), task.palm))
            .or_default()
            .push(task.task.clone());
    }
    for names in groups.values_mut() {
        names.sort();
    }
    Ok(SuiteSummary {
        per_joint,
        groups,
        tasks: results.to_vec(),
    })
}

/// Suite CSV: task,joint,peak_torque_Nm,bandwidth_Hz,handle_size,palm,infeasible_steps.
pub fn suite_csv(summary: &SuiteSummary) -> String {
    let mut out =
        String::from("task,joint,peak_torque_Nm,bandwidth_Hz,handle_size,palm,infeasible_steps\n");
    for task in &summary.tasks {
        for (joint, &(torque, bw)) in &task.per_joint {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                task.task,
                joint.label(),
                torque,
                bw,
                task.handle_size,
                task.palm,
                task.infeasible_steps
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_ours() -> Measurements {
        let rows: &[(&str, f64, Option<f64>)] = &[
            ("pip_torque", 0.68, Some(0.01)),
            ("pip_bandwidth", 14.6, Some(2.53)),
            ("pip_backdrive_torque", 0.022, Some(0.005)),
            ("pip_max_speed", 21.6, Some(0.2)),
            ("mcp_x_torque", 1.87, Some(0.07)),
            ("mcp_x_bandwidth", 25.2, Some(0.1)),
            ("mcp_backdrive_torque", 0.094, Some(0.006)),
            ("mcp_max_speed", 9.8, Some(0.3)),
            ("finger_width", 15.0, None),
            ("knuckle_width", 36.0, None),
            ("finger_height", 9.0, None),
            ("knuckle_height", 28.0, None),
            ("finger_length", 90.5, None),
        ];
        rows.iter()
            .map(|(m, v, u)| (m.to_string(), (*v, *u)))
            .collect()
    }

    #[test]
    fn everyday_profile_pass_fail_pattern() {
        let report = compare(&everyday_profile(), &table_ours()).unwrap();
        assert_eq!(report.rows.len(), 13);
        assert_eq!(report.passes(), 11);
        assert_eq!(report.failures(), 2);
        let failing: Vec<&str> = report
            .rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.metric.as_str())
            .collect();
        assert_eq!(failing, vec!["knuckle_width", "knuckle_height"]);
    }

    #[test]
    fn pip_torque_row_passes() {
        let report = compare(&everyday_profile(), &table_ours()).unwrap();
        let row = report.rows.iter().find(|r| r.metric == "pip_torque").unwrap();
        assert!(row.pass);
        assert_eq!(row.desired, 0.65);
        assert_eq!(row.achieved, 0.68);
    }

    #[test]
    fn boundary_equality_passes_both_directions() {
        let mut profile = everyday_profile();
        profile.requirements.truncate(0);
        profile.requirements.push(req("a", 1.0, "Nm", Direction::AtLeast, None));
        profile.requirements.push(req("b", 1.0, "Nm", Direction::AtMost, None));
        let achieved: Measurements = [
            ("a".to_string(), (1.0, None)),
            ("b".to_string(), (1.0, None)),
        ]
        .into_iter()
        .collect();
        let report = compare(&profile, &achieved).unwrap();
        assert!(report.rows.iter().all(|r| r.pass));
    }

    #[test]
    fn missing_metric_named() {
        let mut achieved = table_ours();
        achieved.remove("mcp_max_speed");
        match compare(&everyday_profile(), &achieved) {
            Err(IoError::Config(msg)) => assert!(msg.contains("mcp_max_speed")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    fn task(name: &str, size: &str, palm: bool, pip: (f64, f64)) -> TaskResult {
        TaskResult {
            task: name.to_string(),
            handle_size: size.to_string(),
            palm,
            infeasible_steps: 0,
            per_joint: [
                (JointType::Pip, pip),
                (JointType::McpX, (pip.0 * 1.5, pip.1)),
                (JointType::McpZ, (pip.0 * 0.5, pip.1)),
            ]
            .into_iter()
            .collect(),
        }
    }

    #[test]
    fn summary_is_elementwise_max_and_permutation_invariant() {
        let a = task("a", "small", false, (0.4, 3.0));
        let b = task("b", "large", true, (0.7, 2.0));
        let fwd = summarize_tasks(&[a.clone(), b.clone()]).unwrap();
        let rev = summarize_tasks(&[b, a]).unwrap();
        assert_eq!(fwd.per_joint, rev.per_joint);
        assert_eq!(fwd.groups, rev.groups);
        assert_eq!(fwd.per_joint[&JointType::Pip], (0.7, 3.0));
        assert_eq!(fwd.groups[&("small".to_string(), false)], vec!["a"]);
        assert_eq!(fwd.groups[&("large".to_string(), true)], vec!["b"]);
    }

    #[test]
    fn single_task_summary_is_identity() {
        let a = task("solo", "medium", true, (0.5, 4.0));
        let summary = summarize_tasks(&[a.clone()]).unwrap();
        assert_eq!(summary.per_joint, a.per_joint);
    }

    #[test]
    fn empty_suite_is_error() {
        assert!(summarize_tasks(&[]).is_err());
    }
}
