//! Minimum-bandwidth determination for torque trajectories.
//!
//! A torque reference is fed through open-loop first-order systems
//! T(s) = sqrt(B^2 + 1) / (s + B), with B in rad/s, swept over a grid of
//! bandwidths. The returned bandwidth is the smallest grid point whose output
//! keeps at least `pass_fraction` of the samples inside an absolute band of
//! `band_fraction * max|reference|`.
//!
//! Bandwidths are handled in Hz at this interface and converted to rad/s
//! (factor 2π) inside the transfer function.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;

/// Joint identity of a torque trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JointType {
    Pip,
    McpX,
    McpZ,
}

impl JointType {
    pub fn label(&self) -> &'static str {
        match self {
            JointType::Pip => "PIP",
            JointType::McpX => "MCP-X",
            JointType::McpZ => "MCP-Z",
        }
    }

    pub const ALL: [JointType; 3] = [JointType::Pip, JointType::McpX, JointType::McpZ];
}

/// Time series of torques for one joint of one finger.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTorqueTrajectory {
    pub sample_rate: f64,
    pub joint: JointType,
    pub finger_index: usize,
    pub values: Vec<f64>,
}

/// Result of a minimum-bandwidth sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthResult {
    /// Bandwidth in Hz (first passing grid point, or the best-performing one
    /// when nothing passes).
    pub bandwidth: f64,
    pub pass_fraction: f64,
    /// Absolute tolerance band used (N·m).
    pub tolerance_band: f64,
    pub passed: bool,
}

/// Sweep grid in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for Sweep {
    fn default() -> Self {
        // 0.2 Hz increments between 0 and 100 Hz; the grid starts at one step
        // because B = 0 is degenerate
        Self {
            start: 0.2,
            stop: 100.0,
            step: 0.2,
        }
    }
}

impl Sweep {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let n = ((self.stop - self.start) / self.step + 1.5).floor() as usize;
        (0..n)
            .map(move |k| self.start + k as f64 * self.step)
            .filter(move |&b| b <= self.stop + 1e-9)
    }
}

/// Zero-order-hold simulation of T(s) = sqrt(B^2+1)/(s+B) from zero initial
/// state. `bandwidth_rad` is in rad/s; the discrete update is exact for
/// piecewise-constant inputs:
/// x[k+1] = e^(-B·dt) x[k] + (1 - e^(-B·dt)) · sqrt(B^2+1)/B · u[k].
pub fn simulate_first_order(reference: &[f64], sample_rate: f64, bandwidth_rad: f64) -> Vec<f64> {
    assert!(bandwidth_rad > 0.0, "bandwidth must be positive");
    assert!(sample_rate > 0.0, "sample rate must be positive");
    let dt = 1.0 / sample_rate;
    let decay = (-bandwidth_rad * dt).exp();
    let dc_gain = (bandwidth_rad * bandwidth_rad + 1.0).sqrt() / bandwidth_rad;
    let drive = (1.0 - decay) * dc_gain;
    let mut state = 0.0;
    let mut out = Vec::with_capacity(reference.len());
    for &u in reference {
        out.push(state);
        state = decay * state + drive * u;
    }
    out
}

/// Fraction of samples with |y - r| within the absolute band.
fn pass_fraction(reference: &[f64], output: &[f64], band: f64) -> f64 {
    let ok = reference
        .iter()
        .zip(output)
        .filter(|(r, y)| (**y - **r).abs() <= band)
        .count();
    ok as f64 / reference.len() as f64
}

/// Smallest sweep bandwidth (Hz) whose first-order response tracks the
/// reference: at least `pass_fraction_req` of samples within
/// `band_fraction * max|reference|`.
pub fn min_bandwidth(
    reference: &JointTorqueTrajectory,
    sweep: &Sweep,
    pass_fraction_req: f64,
    band_fraction: f64,
) -> Result<BandwidthResult, SolveError> {
    if reference.values.is_empty() {
        return Err(SolveError::Domain("empty reference trajectory".to_string()));
    }
    if sweep.step <= 0.0 || sweep.start <= 0.0 || sweep.stop < sweep.start {
        return Err(SolveError::Domain(format!(
            "invalid sweep {:?}",
            sweep
        )));
    }
    let max_abs = reference
        .values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let band = band_fraction * max_abs;
    let mut best: Option<BandwidthResult> = None;
    for hz in sweep.points() {
        let rad = hz * 2.0 * std::f64::consts::PI;
        let out = simulate_first_order(&reference.values, reference.sample_rate, rad);
        let frac = pass_fraction(&reference.values, &out, band);
        let result = BandwidthResult {
            bandwidth: hz,
            pass_fraction: frac,
            tolerance_band: band,
            passed: frac >= pass_fraction_req,
        };
        if result.passed {
            return Ok(result);
        }
        if best.map_or(true, |b| frac > b.pass_fraction) {
            best = Some(result);
        }
    }
    Ok(best.expect("non-empty sweep"))
}

/// Per-grid-point pass fractions, for plotting.
pub fn sweep_profile(
    reference: &JointTorqueTrajectory,
    sweep: &Sweep,
    band_fraction: f64,
) -> Vec<(f64, f64)> {
    let max_abs = reference
        .values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let band = band_fraction * max_abs;
    sweep
        .points()
        .map(|hz| {
            let rad = hz * 2.0 * std::f64::consts::PI;
            let out = simulate_first_order(&reference.values, reference.sample_rate, rad);
            (hz, pass_fraction(&reference.values, &out, band))
        })
        .collect()
}

/// Rise-time bandwidth approximation B (Hz) = 0.35 / t_r (s).
pub fn bandwidth_from_rise_time(t_r: f64) -> Result<f64, SolveError> {
    if !(t_r > 0.0) {
        return Err(SolveError::Domain(format!(
            "rise time must be positive, got {t_r}"
        )));
    }
    Ok(0.35 / t_r)
}
