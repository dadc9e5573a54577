//! Finger and grasp geometry: the 3-DOF serial finger, contact frames on a
//! cylindrical handle, and the Jacobian mapping contact forces to joint torques.
//!
//! The kinematic chain is
//! base → MCP-Z (rotation about base z) → offset `mcp_separation` along local y
//! → MCP-X (rotation about local x) → `proximal_len` → PIP (rotation about
//! local x) → `distal_len`. All link translations are along the local +y axis,
//! so flexion curls the fingertip in the local y-z plane.

use nalgebra::{Isometry3, Matrix3, Point3, Rotation3, Translation3, UnitQuaternion, Vector3};

use crate::error::ModelError;

/// Link lengths and fingertip size of one finger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FingerGeometry {
    /// Distance between the MCP-Z and MCP-X axes (m).
    pub mcp_separation: f64,
    /// MCP-X → PIP link length (m).
    pub proximal_len: f64,
    /// PIP → fingertip link length (m).
    pub distal_len: f64,
    /// Radius of the fingertip pressure area (m).
    pub fingertip_radius: f64,
}

impl Default for FingerGeometry {
    fn default() -> Self {
        Self {
            mcp_separation: 0.022,
            proximal_len: 0.045,
            distal_len: 0.0335,
            fingertip_radius: 0.008,
        }
    }
}

impl FingerGeometry {
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, v) in [
            ("mcp_separation", self.mcp_separation),
            ("proximal_len", self.proximal_len),
            ("distal_len", self.distal_len),
            ("fingertip_radius", self.fingertip_radius),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ModelError::InvalidGeometry(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Total reach along a straight chain (m).
    pub fn total_reach(&self) -> f64 {
        self.mcp_separation + self.proximal_len + self.distal_len
    }
}

/// Joint limits, shared by all fingers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimits {
    pub mcp_z: (f64, f64),
    pub flexion: (f64, f64),
}

impl Default for JointLimits {
    fn default() -> Self {
        Self {
            mcp_z: (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            flexion: (0.0, 2.0 * std::f64::consts::FRAC_PI_3),
        }
    }
}

/// Joint angles of one finger (rad).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointAngles {
    pub mcp_z: f64,
    pub mcp_x: f64,
    pub pip: f64,
}

impl JointAngles {
    pub fn new(mcp_z: f64, mcp_x: f64, pip: f64) -> Self {
        Self { mcp_z, mcp_x, pip }
    }

    pub fn check_limits(&self, limits: &JointLimits) -> Result<(), ModelError> {
        let checks = [
            ("mcp_z", self.mcp_z, limits.mcp_z),
            ("mcp_x", self.mcp_x, limits.flexion),
            ("pip", self.pip, limits.flexion),
        ];
        for (joint, value, (min, max)) in checks {
            // small slack so limit-boundary IK solutions are accepted
            if value < min - 1e-9 || value > max + 1e-9 {
                return Err(ModelError::JointLimit {
                    joint,
                    value,
                    min,
                    max,
                });
            }
        }
        Ok(())
    }
}

/// Cylindrical tool handle.
#[derive(Debug, Clone)]
pub struct CylinderFrame {
    pub radius: f64,
    pub axis: Vector3<f64>,
    pub origin: Point3<f64>,
    basis_u: Vector3<f64>,
    basis_v: Vector3<f64>,
}

impl CylinderFrame {
    pub fn new(radius: f64, axis: Vector3<f64>, origin: Point3<f64>) -> Result<Self, ModelError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(ModelError::InvalidGeometry(format!(
                "cylinder radius must be positive, got {radius}"
            )));
        }
        if (axis.norm() - 1.0).abs() > 1e-12 {
            return Err(ModelError::InvalidGeometry(format!(
                "cylinder axis must have unit norm, got |axis| = {}",
                axis.norm()
            )));
        }
        // deterministic in-plane basis: project world x (or y if degenerate)
        let trial = if axis.x.abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        let basis_u = (trial - axis * trial.dot(&axis)).normalize();
        let basis_v = axis.cross(&basis_u);
        Ok(Self {
            radius,
            axis,
            origin,
            basis_u,
            basis_v,
        })
    }

    /// Canonical cylinder: axis along world z, origin at world origin.
    pub fn canonical(radius: f64) -> Result<Self, ModelError> {
        Self::new(radius, Vector3::z(), Point3::origin())
    }

    /// Point on the surface at angle `theta` and axial coordinate `z`.
    pub fn surface_point(&self, theta: f64, z: f64) -> Point3<f64> {
        self.origin
            + self.radius * (theta.cos() * self.basis_u + theta.sin() * self.basis_v)
            + z * self.axis
    }

    /// Contact frame at angle `theta`: outward normal, axial, tangential.
    pub fn contact_frame(&self, theta: f64) -> ContactFrame {
        let normal = theta.cos() * self.basis_u + theta.sin() * self.basis_v;
        let tangential = -theta.sin() * self.basis_u + theta.cos() * self.basis_v;
        ContactFrame {
            normal,
            axial: self.axis,
            tangential,
        }
    }
}

/// Orthonormal contact frame on the cylinder surface.
#[derive(Debug, Clone, Copy)]
pub struct ContactFrame {
    pub normal: Vector3<f64>,
    pub axial: Vector3<f64>,
    pub tangential: Vector3<f64>,
}

impl ContactFrame {
    /// Rotation with columns (normal, axial, tangential), mapping contact-frame
    /// force components (N, f_z, f_theta) to a world-frame vector.
    pub fn rotation(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.normal, self.axial, self.tangential])
    }
}

/// Nominal contact location on the cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPoint {
    /// Axial coordinate of the pressure-area center (m).
    pub nominal_z: f64,
    /// Angular coordinate of the pressure-area center (rad).
    pub nominal_theta: f64,
    /// Radius of the pressure area on the surface (m).
    pub pressure_radius: f64,
    pub is_palm: bool,
}

fn chain_pose(geom: &FingerGeometry, q: &JointAngles, base: &Isometry3<f64>) -> Isometry3<f64> {
    let rz = Isometry3::from_parts(
        Translation3::identity(),
        UnitQuaternion::from_axis_angle(&Vector3::z_axis(), q.mcp_z),
    );
    let t_sep = Isometry3::translation(0.0, geom.mcp_separation, 0.0);
    let rx1 = Isometry3::from_parts(
        Translation3::identity(),
        UnitQuaternion::from_axis_angle(&Vector3::x_axis(), q.mcp_x),
    );
    let t_prox = Isometry3::translation(0.0, geom.proximal_len, 0.0);
    let rx2 = Isometry3::from_parts(
        Translation3::identity(),
        UnitQuaternion::from_axis_angle(&Vector3::x_axis(), q.pip),
    );
    let t_dist = Isometry3::translation(0.0, geom.distal_len, 0.0);
    base * rz * t_sep * rx1 * t_prox * rx2 * t_dist
}

/// Fingertip pose (center of pressure + contact-frame orientation) in world
/// coordinates.
pub fn forward_kinematics(
    geom: &FingerGeometry,
    q: &JointAngles,
    base: &Isometry3<f64>,
) -> Result<Isometry3<f64>, ModelError> {
    geom.validate()?;
    q.check_limits(&JointLimits::default())?;
    Ok(chain_pose(geom, q, base))
}

/// Joint angles placing the fingertip at `target`, elbow-up (PIP flexed) branch.
pub fn inverse_kinematics(
    geom: &FingerGeometry,
    target: &Point3<f64>,
    base: &Isometry3<f64>,
) -> Result<JointAngles, ModelError> {
    geom.validate()?;
    let t = base.inverse_transform_point(target);
    // MCP-Z aligns the local y-z plane with the target; with enough flexion
    // the fingertip can also curl past the MCP-Z axis, which shows up as a
    // flipped planar direction, so both branches are tried
    let planar = (t.x * t.x + t.y * t.y).sqrt();
    let mcp_z = if planar < 1e-15 {
        0.0
    } else {
        (-t.x).atan2(t.y)
    };
    let flipped = if mcp_z > 0.0 {
        mcp_z - std::f64::consts::PI
    } else {
        mcp_z + std::f64::consts::PI
    };
    let v = t.z;
    let (l1, l2) = (geom.proximal_len, geom.distal_len);
    let r_max = l1 + l2;
    let r_min = (l1 - l2).abs();
    let limits = JointLimits::default();
    let mut distance = f64::INFINITY;
    for (mcp_z, u) in [
        (mcp_z, planar - geom.mcp_separation),
        (flipped, -planar - geom.mcp_separation),
    ] {
        let r = (u * u + v * v).sqrt();
        if r > r_max + 1e-12 {
            distance = distance.min(r - r_max);
            continue;
        }
        if r < r_min - 1e-12 {
            distance = distance.min(r_min - r);
            continue;
        }
        distance = 0.0;
        let c3 = ((r * r - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)).clamp(-1.0, 1.0);
        // elbow-up branch first (pip >= 0), elbow-down as fallback
        for pip in [c3.acos(), -c3.acos()] {
            let mcp_x = v.atan2(u) - (l2 * pip.sin()).atan2(l1 + l2 * pip.cos());
            let q = JointAngles::new(mcp_z, mcp_x, pip);
            if q.check_limits(&limits).is_ok() {
                return Ok(q);
            }
        }
    }
    Err(ModelError::Unreachable {
        distance_to_workspace: distance,
    })
}

/// Geometric (position) Jacobian of the fingertip w.r.t. (mcp_z, mcp_x, pip),
/// expressed in world coordinates.
pub fn geometric_jacobian(
    geom: &FingerGeometry,
    q: &JointAngles,
    base: &Isometry3<f64>,
) -> Matrix3<f64> {
    let frame1 = base
        * Isometry3::from_parts(
            Translation3::identity(),
            UnitQuaternion::from_axis_angle(&Vector3::z_axis(), q.mcp_z),
        );
    let frame2 = frame1
        * Isometry3::translation(0.0, geom.mcp_separation, 0.0)
        * Isometry3::from_parts(
            Translation3::identity(),
            UnitQuaternion::from_axis_angle(&Vector3::x_axis(), q.mcp_x),
        );
    let frame3 = frame2
        * Isometry3::translation(0.0, geom.proximal_len, 0.0)
        * Isometry3::from_parts(
            Translation3::identity(),
            UnitQuaternion::from_axis_angle(&Vector3::x_axis(), q.pip),
        );
    let tip = frame3 * Point3::new(0.0, geom.distal_len, 0.0);

    let o1 = Point3::from(base.translation.vector);
    let axis1 = base.rotation * Vector3::z();
    let o2 = frame1 * Point3::new(0.0, geom.mcp_separation, 0.0);
    let axis2 = frame1.rotation * Vector3::x();
    let o3 = frame2 * Point3::new(0.0, geom.proximal_len, 0.0);
    let axis3 = frame2.rotation * Vector3::x();

    Matrix3::from_columns(&[
        axis1.cross(&(tip - o1)),
        axis2.cross(&(tip - o2)),
        axis3.cross(&(tip - o3)),
    ])
}

/// 3×3 map M with M · [N; f_z; f_theta] = [tau_MCP-Z; tau_MCP-X; tau_PIP].
///
/// Composed as (geometric Jacobian)^T times the rotation from the contact
/// frame (normal, axial, tangential) to world. Contact moments are ignored.
pub fn contact_jacobian(
    geom: &FingerGeometry,
    q: &JointAngles,
    base: &Isometry3<f64>,
    frame: &ContactFrame,
) -> Matrix3<f64> {
    geometric_jacobian(geom, q, base).transpose() * frame.rotation()
}

/// Place a finger base so that the nominal joint configuration puts the
/// fingertip on the cylinder surface at `contact`.
///
/// The base is oriented so the flexion axis (local x) is parallel to the
/// cylinder axis and the MCP-Z axis (local z) points along the outward radial;
/// the finger then curls around the circumference.
pub fn base_pose_for_contact(
    geom: &FingerGeometry,
    cylinder: &CylinderFrame,
    contact: &ContactPoint,
    nominal_q: &JointAngles,
) -> Result<Isometry3<f64>, ModelError> {
    let frame = cylinder.contact_frame(contact.nominal_theta);
    let x_l = frame.axial;
    let z_l = frame.normal;
    let y_l = z_l.cross(&x_l);
    let rot = Rotation3::from_matrix_unchecked(Matrix3::from_columns(&[x_l, y_l, z_l]));
    let rot = UnitQuaternion::from_rotation_matrix(&rot);
    let tip_local = chain_pose(geom, nominal_q, &Isometry3::identity()).translation.vector;
    let target = cylinder.surface_point(contact.nominal_theta, contact.nominal_z);
    let base_pos = target.coords - rot * tip_local;
    Ok(Isometry3::from_parts(Translation3::from(base_pos), rot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn default_base() -> Isometry3<f64> {
        Isometry3::identity()
    }

    fn random_q(rng: &mut impl Rng) -> JointAngles {
        JointAngles::new(
            rng.gen_range(-1.3..1.3),
            rng.gen_range(0.05..1.9),
            rng.gen_range(0.05..1.9),
        )
    }

    #[test]
    fn straight_chain_sums_lengths() {
        let geom = FingerGeometry::default();
        let pose = forward_kinematics(&geom, &JointAngles::default(), &default_base()).unwrap();
        assert_relative_eq!(pose.translation.vector.norm(), 0.1005, epsilon = 1e-12);
        assert_relative_eq!(pose.translation.y, 0.1005, epsilon = 1e-12);
    }

    #[test]
    fn right_angle_mcp_x_displaces_perpendicular() {
        let geom = FingerGeometry::default();
        let q = JointAngles::new(0.0, std::f64::consts::FRAC_PI_2, 0.0);
        let pose = forward_kinematics(&geom, &q, &default_base()).unwrap();
        assert_relative_eq!(pose.translation.y, geom.mcp_separation, epsilon = 1e-12);
        assert_relative_eq!(
            pose.translation.z,
            geom.proximal_len + geom.distal_len,
            epsilon = 1e-12
        );
    }

    #[test]
    fn fk_rejects_joint_limit_violation() {
        let geom = FingerGeometry::default();
        let q = JointAngles::new(0.0, -0.5, 0.0);
        assert!(matches!(
            forward_kinematics(&geom, &q, &default_base()),
            Err(ModelError::JointLimit { joint: "mcp_x", .. })
        ));
    }

    #[test]
    fn ik_identity_case() {
        let geom = FingerGeometry::default();
        let target = Point3::new(0.0, geom.total_reach(), 0.0);
        let q = inverse_kinematics(&geom, &target, &default_base()).unwrap();
        assert_relative_eq!(q.mcp_z, 0.0, epsilon = 1e-12);
        assert_relative_eq!(q.mcp_x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(q.pip, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ik_unreachable_reports_distance() {
        let geom = FingerGeometry::default();
        let target = Point3::new(0.0, geom.total_reach() + 0.05, 0.0);
        match inverse_kinematics(&geom, &target, &default_base()) {
            Err(ModelError::Unreachable {
                distance_to_workspace,
            }) => assert_relative_eq!(distance_to_workspace, 0.05, epsilon = 1e-9),
            other => panic!("expected unreachable, got {other:?}"),
        }
    }

    #[test]
    fn fk_ik_roundtrip_100_random_targets() {
        let geom = FingerGeometry::default();
        let base = Isometry3::new(
            Vector3::new(0.03, -0.02, 0.05),
            Vector3::new(0.2, -0.4, 0.9),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let q = random_q(&mut rng);
            let target = forward_kinematics(&geom, &q, &base).unwrap() * Point3::origin();
            let sol = inverse_kinematics(&geom, &target, &base).unwrap();
            let reached = forward_kinematics(&geom, &sol, &base).unwrap() * Point3::origin();
            assert!(
                (reached - target).norm() < 1e-9,
                "roundtrip error {} for q {q:?}",
                (reached - target).norm()
            );
        }
    }

    #[test]
    fn jacobian_lever_arm_identity() {
        // straight planar finger, unit normal force perpendicular to the links
        let geom = FingerGeometry::default();
        let q = JointAngles::default();
        let frame = ContactFrame {
            normal: Vector3::z(),
            axial: Vector3::x(),
            tangential: Vector3::y(),
        };
        let m = contact_jacobian(&geom, &q, &default_base(), &frame);
        let tau = m * Vector3::new(1.0, 0.0, 0.0);
        assert_relative_eq!(tau.x, 0.0, epsilon = 1e-12); // MCP-Z
        assert_relative_eq!(
            tau.y,
            geom.proximal_len + geom.distal_len,
            epsilon = 1e-12
        ); // MCP-X
        assert_relative_eq!(tau.z, geom.distal_len, epsilon = 1e-12); // PIP
    }

    #[test]
    fn backdrive_target_one_newton_at_100mm() {
        // 1 N fingertip-normal force at 0.1 m from MCP-X -> 0.1 Nm at MCP-X
        let geom = FingerGeometry {
            proximal_len: 0.06,
            distal_len: 0.04,
            ..FingerGeometry::default()
        };
        let frame = ContactFrame {
            normal: Vector3::z(),
            axial: Vector3::x(),
            tangential: Vector3::y(),
        };
        let m = contact_jacobian(&geom, &JointAngles::default(), &default_base(), &frame);
        let tau = m * Vector3::new(1.0, 0.0, 0.0);
        assert_relative_eq!(tau.y, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let geom = FingerGeometry::default();
        let base = Isometry3::new(
            Vector3::new(0.01, 0.02, -0.03),
            Vector3::new(0.5, 0.1, -0.3),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-6;
        for _ in 0..25 {
            let q = random_q(&mut rng);
            let jac = geometric_jacobian(&geom, &q, &base);
            let tip = |q: &JointAngles| (chain_pose(&geom, q, &base) * Point3::origin()).coords;
            for j in 0..3 {
                let mut qp = q;
                let mut qm = q;
                match j {
                    0 => {
                        qp.mcp_z += h;
                        qm.mcp_z -= h;
                    }
                    1 => {
                        qp.mcp_x += h;
                        qm.mcp_x -= h;
                    }
                    _ => {
                        qp.pip += h;
                        qm.pip -= h;
                    }
                }
                let fd = (tip(&qp) - tip(&qm)) / (2.0 * h);
                let col = jac.column(j);
                let scale = fd.norm().max(1e-9);
                assert!(
                    (col - fd).norm() / scale < 1e-6,
                    "column {j} mismatch: {col:?} vs {fd:?}"
                );
            }
        }
    }

    #[test]
    fn energy_consistency_and_zero_force() {
        let geom = FingerGeometry::default();
        let base = default_base();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let q = random_q(&mut rng);
            let jac = geometric_jacobian(&geom, &q, &base);
            let f = Vector3::new(rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>());
            let qd = Vector3::new(rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>());
            let power_task = f.dot(&(jac * qd));
            let power_joint = (jac.transpose() * f).dot(&qd);
            assert_relative_eq!(power_task, power_joint, epsilon = 1e-14);
            let zero = jac.transpose() * Vector3::zeros();
            assert_eq!(zero, Vector3::zeros());
        }
    }

    #[test]
    fn base_pose_puts_nominal_fingertip_on_contact() {
        let geom = FingerGeometry::default();
        let cyl = CylinderFrame::canonical(0.015).unwrap();
        let contact = ContactPoint {
            nominal_z: 0.01,
            nominal_theta: 1.2,
            pressure_radius: 0.008,
            is_palm: false,
        };
        let q = JointAngles::new(0.0, 0.5, 0.8);
        let base = base_pose_for_contact(&geom, &cyl, &contact, &q).unwrap();
        let tip = forward_kinematics(&geom, &q, &base).unwrap() * Point3::origin();
        let expected = cyl.surface_point(1.2, 0.01);
        assert!((tip - expected).norm() < 1e-12);
    }

    #[test]
    fn contact_frame_is_orthonormal() {
        let cyl = CylinderFrame::canonical(0.008).unwrap();
        for theta in [0.0, 0.7, 2.5, -1.2] {
            let f = cyl.contact_frame(theta);
            assert_relative_eq!(f.normal.norm(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(f.normal.dot(&f.axial), 0.0, epsilon = 1e-12);
            assert_relative_eq!(f.normal.dot(&f.tangential), 0.0, epsilon = 1e-12);
            let det = f.rotation().determinant();
            assert_relative_eq!(det.abs(), 1.0, epsilon = 1e-12);
        }
    }
}
