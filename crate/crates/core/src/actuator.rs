//! Closed-form actuator and transmission sizing: motor torque from
//! electromagnetic shear stress, gear bending strength via the Lewis factor
//! equation, the series-elastic stiffness window, and collision torque from
//! the full-speed impact energy balance.

use serde::{Deserialize, Serialize};

use crate::error::IoError;

/// Motor geometry, inertia and speed, plus the transmission ratio it drives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorSpec {
    /// Rotor-stator interface diameter D (m).
    pub diameter: f64,
    /// Rotor-stator interface length L (m).
    pub length: f64,
    /// Electromagnetic shear stress (Pa).
    pub shear_stress: f64,
    /// Gear ratio N to the output.
    pub gear_ratio: f64,
    /// Rotor inertia J_m (kg·m^2).
    pub rotor_inertia: f64,
    /// Maximum motor-side speed (rad/s).
    pub max_speed: f64,
}

/// Convenience: shear stress quoted in bar (1 bar = 1e5 Pa).
pub fn shear_stress_from_bar(bar: f64) -> f64 {
    bar * 1e5
}

impl MotorSpec {
    pub fn validate(&self) -> Result<(), IoError> {
        for (name, v) in [
            ("diameter", self.diameter),
            ("length", self.length),
            ("shear_stress", self.shear_stress),
            ("gear_ratio", self.gear_ratio),
            ("rotor_inertia", self.rotor_inertia),
            ("max_speed", self.max_speed),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(IoError::Config(format!(
                    "motor spec: {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Gear geometry and material for the Lewis bending-strength estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GearSpec {
    /// Pitch diameter (m).
    pub pitch_diameter: f64,
    /// Module (m).
    pub module: f64,
    /// Face width (m).
    pub width: f64,
    /// Lewis form factor (dimensionless, from charts).
    pub lewis_factor: f64,
    /// Material yield strength (Pa).
    pub yield_strength: f64,
    /// Safety factor (>= 1).
    pub safety_factor: f64,
    /// Gear ratio from this gear to the output.
    pub ratio_to_output: f64,
}

impl GearSpec {
    pub fn validate(&self) -> Result<(), IoError> {
        for (name, v) in [
            ("pitch_diameter", self.pitch_diameter),
            ("module", self.module),
            ("width", self.width),
            ("lewis_factor", self.lewis_factor),
            ("yield_strength", self.yield_strength),
            ("safety_factor", self.safety_factor),
            ("ratio_to_output", self.ratio_to_output),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(IoError::Config(format!(
                    "gear spec: {name} must be positive, got {v}"
                )));
            }
        }
        if self.safety_factor < 1.0 {
            return Err(IoError::Config(format!(
                "gear spec: safety_factor must be >= 1, got {}",
                self.safety_factor
            )));
        }
        Ok(())
    }
}

/// Series-elastic element parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeaSpec {
    /// Transmission stiffness (N·m/rad).
    pub stiffness: f64,
    /// Transmission strength, torque at which the gears break (N·m).
    pub strength: f64,
    /// Bandwidth target (rad/s).
    pub bandwidth_target: f64,
}

/// Maximum motor torque: tau = N · tau_em · (D/2) · (π D L).
pub fn motor_torque(spec: &MotorSpec) -> f64 {
    spec.gear_ratio
        * spec.shear_stress
        * (spec.diameter / 2.0)
        * (std::f64::consts::PI * spec.diameter * spec.length)
}

/// Lewis bending strength: T = (D_gear / (2 SF)) · m · γ · σ_y · w · N_gear.
pub fn gear_strength(spec: &GearSpec) -> f64 {
    (spec.pitch_diameter / (2.0 * spec.safety_factor))
        * spec.module
        * spec.lewis_factor
        * spec.yield_strength
        * spec.width
        * spec.ratio_to_output
}

/// Feasible stiffness window for the elastic element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessWindow {
    /// Lowest stiffness meeting the bandwidth target: k = B^2 J_m N^2.
    pub k_min: f64,
    /// Highest stiffness surviving a full-speed collision:
    /// k = tau_strength^2 / ((N θ̇_max)^2 J_m).
    pub k_max: f64,
    /// False when k_min > k_max: no spring satisfies both requirements.
    pub feasible: bool,
}

/// Stiffness window from the bandwidth requirement (rad/s) and the
/// transmission strength (N·m). k_min > k_max signals an infeasible design
/// and is flagged, not an error.
pub fn sea_window(motor: &MotorSpec, strength: f64, bandwidth: f64) -> StiffnessWindow {
    let k_min = bandwidth * bandwidth * motor.rotor_inertia * motor.gear_ratio * motor.gear_ratio;
    let reflected_speed = motor.gear_ratio * motor.max_speed;
    let k_max = strength * strength / (reflected_speed * reflected_speed * motor.rotor_inertia);
    StiffnessWindow {
        k_min,
        k_max,
        feasible: k_min <= k_max,
    }
}

/// Full-speed collision against an immovable object: all motor inertial
/// energy is absorbed by the elastic element. Returns
/// (tau_collision = N θ̇_max sqrt(k J_m), Δθ_max = N θ̇_max sqrt(J_m / k)).
pub fn collision_torque(motor: &MotorSpec, stiffness: f64) -> (f64, f64) {
    assert!(stiffness > 0.0, "stiffness must be positive");
    let reflected_speed = motor.gear_ratio * motor.max_speed;
    let tau = reflected_speed * (stiffness * motor.rotor_inertia).sqrt();
    let deflection = reflected_speed * (motor.rotor_inertia / stiffness).sqrt();
    (tau, deflection)
}

/// SEA bandwidth approximation: ω_n = sqrt(k / (J_m N^2)).
pub fn natural_frequency(motor: &MotorSpec, stiffness: f64) -> f64 {
    assert!(stiffness > 0.0, "stiffness must be positive");
    (stiffness / (motor.rotor_inertia * motor.gear_ratio * motor.gear_ratio)).sqrt()
}

fn load_toml<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| IoError::Config(format!("{}: {e}", path.display())))
}

pub fn load_motor_spec(path: &std::path::Path) -> Result<MotorSpec, IoError> {
    let spec: MotorSpec = load_toml(path)?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_gear_spec(path: &std::path::Path) -> Result<GearSpec, IoError> {
    let spec: GearSpec = load_toml(path)?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_sea_spec(path: &std::path::Path) -> Result<SeaSpec, IoError> {
    let spec: SeaSpec = load_toml(path)?;
    if !(spec.stiffness > 0.0) {
        return Err(IoError::Config(format!(
            "sea spec: stiffness must be positive, got {}",
            spec.stiffness
        )));
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn test_motor() -> MotorSpec {
        MotorSpec {
            diameter: 0.020,
            length: 0.010,
            shear_stress: shear_stress_from_bar(0.2),
            gear_ratio: 1.0,
            rotor_inertia: 1e-6,
            max_speed: 10.0,
        }
    }

    #[test]
    fn motor_torque_direct_evaluation() {
        // N=1, tau_em = 0.2 bar, D = 20 mm, L = 10 mm
        let spec = test_motor();
        assert_relative_eq!(motor_torque(&spec), 0.1257, epsilon = 1e-4);
        assert_relative_eq!(
            motor_torque(&spec),
            1.0 * 20e3 * 0.01 * std::f64::consts::PI * 0.02 * 0.01,
            epsilon = 1e-15
        );
        // linear in N
        let geared = MotorSpec {
            gear_ratio: 8.0,
            ..spec
        };
        assert_relative_eq!(motor_torque(&geared), 8.0 * motor_torque(&spec), epsilon = 1e-12);
        assert_relative_eq!(motor_torque(&geared), 1.005, epsilon = 1e-3);
        // degree 2 in D
        let wide = MotorSpec {
            diameter: 0.040,
            ..spec
        };
        assert_relative_eq!(motor_torque(&wide), 4.0 * motor_torque(&spec), epsilon = 1e-12);
    }

    fn test_gear() -> GearSpec {
        GearSpec {
            pitch_diameter: 0.015,
            module: 0.0005,
            width: 0.001,
            lewis_factor: 0.35,
            yield_strength: 415e6,
            safety_factor: 2.0,
            ratio_to_output: 1.0,
        }
    }

    #[test]
    fn lewis_strength_direct_evaluation() {
        let spec = test_gear();
        assert_relative_eq!(gear_strength(&spec), 0.2723, epsilon = 1e-4);
        let unsafe_spec = GearSpec {
            safety_factor: 1.0,
            ..spec
        };
        assert_relative_eq!(gear_strength(&unsafe_spec), 0.5447, epsilon = 1e-4);
        // linear in width
        let double = GearSpec {
            width: 0.002,
            ..spec
        };
        assert_relative_eq!(gear_strength(&double), 2.0 * gear_strength(&spec), epsilon = 1e-12);
    }

    #[test]
    fn sea_window_direct_evaluation() {
        let motor = MotorSpec {
            gear_ratio: 8.0,
            ..test_motor()
        };
        let window = sea_window(&motor, 1.0, 10.0);
        assert_relative_eq!(window.k_min, 6.4e-3, epsilon = 1e-12);
        assert_relative_eq!(window.k_max, 156.25, epsilon = 1e-9);
        assert!(window.feasible);
    }

    #[test]
    fn collision_direct_evaluation() {
        let motor = MotorSpec {
            gear_ratio: 8.0,
            ..test_motor()
        };
        let (tau, deflection) = collision_torque(&motor, 6.4e-3);
        assert_relative_eq!(tau, 6.4e-3, epsilon = 1e-12);
        assert_relative_eq!(deflection, 1.0, epsilon = 1e-12);
        assert_relative_eq!(natural_frequency(&motor, 6.4e-3), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn sea_roundtrips_and_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let motor = MotorSpec {
                diameter: rng.gen_range(0.005..0.05),
                length: rng.gen_range(0.005..0.03),
                shear_stress: rng.gen_range(1e4..5e4),
                gear_ratio: rng.gen_range(1.0..20.0),
                rotor_inertia: rng.gen_range(1e-8..1e-4),
                max_speed: rng.gen_range(1.0..500.0),
            };
            let b = rng.gen_range(0.5..200.0);
            let strength = rng.gen_range(0.01..5.0);
            let window = sea_window(&motor, strength, b);
            // natural_frequency(k_min(B)) = B
            let wn = natural_frequency(&motor, window.k_min);
            assert!((wn - b).abs() <= 1e-9 * b);
            // collision_torque(k_max(tau_s)) = tau_s
            let (tau, _) = collision_torque(&motor, window.k_max);
            assert!((tau - strength).abs() <= 1e-9 * strength);
            // energy conservation: tau_collision^2 / k = J_m N^2 θ̇_max^2
            let k = rng.gen_range(0.1..50.0);
            let (tau_c, deflection) = collision_torque(&motor, k);
            let energy_lhs = tau_c * tau_c / k;
            let energy_rhs = motor.rotor_inertia
                * motor.gear_ratio.powi(2)
                * motor.max_speed.powi(2);
            assert!((energy_lhs - energy_rhs).abs() <= 1e-9 * energy_rhs);
            assert_relative_eq!(tau_c, k * deflection, max_relative = 1e-12);
            // feasibility flag equals the combined inequality
            let combined = b * b
                <= strength * strength
                    / (motor.rotor_inertia.powi(2)
                        * motor.gear_ratio.powi(4)
                        * motor.max_speed.powi(2));
            assert_eq!(window.feasible, combined);
            // homogeneity: quadrupling k doubles ω_n
            assert_relative_eq!(
                natural_frequency(&motor, 4.0 * k),
                2.0 * natural_frequency(&motor, k),
                max_relative = 1e-12
            );
        }
    }
}
