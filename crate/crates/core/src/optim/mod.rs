//! Per-timestep constrained force distribution over grasp contacts.
//!
//! Each timestep solves: minimize the sum of fourth powers of the joint
//! torques over per-contact variables (normal force N, tangential friction
//! f_theta, axial friction f_z, and contact location z, theta), subject to the
//! six static-equilibrium equations, a friction cone per contact, and a
//! pressure-area disc around each nominal contact. The palm contact, when
//! present, contributes to equilibrium only.
//!
//! With contact locations fixed, the equilibrium equations are linear in the
//! forces, so each restart eliminates them exactly through a null-space
//! parameterization and hands the remaining smooth inequality-constrained
//! problem to an augmented-Lagrangian solver. Location variables are explored
//! by multi-start: restart 0 keeps the nominal locations, later restarts
//! sample seeded perturbations inside the pressure discs.

mod nlp;

pub use nlp::{lbfgs, minimize_al, AlOptions, AlResult, Smooth, SmoothHess};

use nalgebra::{DMatrix, DVector, Matrix3, Point3, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bandwidth::{JointTorqueTrajectory, JointType};
use crate::error::SolveError;
use crate::model::{
    base_pose_for_contact, forward_kinematics, contact_jacobian, inverse_kinematics,
    ContactPoint, CylinderFrame, FingerGeometry, JointAngles,
};
use crate::wrench_io::{Wrench, WrenchTrajectory};

/// Secondary regularization weight on the force 2-norm (tie-breaking). Public
/// so that independent re-implementations of the objective can match
/// [`ContactSolution::objective`] exactly.
pub const FORCE_REG: f64 = 1e-9;

/// Smoothing of the friction-cone constraint, in newtons. Keeps the cone
/// gradient bounded away from zero at unloaded contacts while shifting the
/// cone boundary by at most eps^2 / (2 |f|) tangential newtons.
const CONE_EPS: f64 = 1e-4;
/// Torque normalization inside the quartic objective (N·m).
const TORQUE_SCALE: f64 = 1.0;

/// Nominal joint configuration used to place finger bases around the handle.
const NOMINAL_Q: JointAngles = JointAngles {
    mcp_z: 0.0,
    mcp_x: 0.5,
    pip: 0.8,
};

/// One finger gripping the handle: geometry, base placement, IK solution at
/// the nominal contact, and the fixed contact-force-to-torque map.
#[derive(Debug, Clone)]
pub struct FingerContact {
    pub geometry: FingerGeometry,
    pub base_pose: nalgebra::Isometry3<f64>,
    pub joint_angles: JointAngles,
    /// M with M · [N; f_z; f_theta] = [tau_MCP-Z; tau_MCP-X; tau_PIP].
    pub torque_map: Matrix3<f64>,
}

/// Full grasp description for one task.
#[derive(Debug, Clone)]
pub struct GraspConfig {
    pub cylinder: CylinderFrame,
    /// Finger contacts first (3), optional palm contact last.
    pub contacts: Vec<ContactPoint>,
    pub friction_mu: f64,
    pub fingers: Vec<FingerContact>,
}

/// Surface distance between two contact centers (Euclidean on the unrolled
/// cylinder, with angle wrapped to [-pi, pi]).
pub fn surface_distance(radius: f64, a: &ContactPoint, b: &ContactPoint) -> f64 {
    let mut dtheta = (a.nominal_theta - b.nominal_theta) % (2.0 * std::f64::consts::PI);
    if dtheta > std::f64::consts::PI {
        dtheta -= 2.0 * std::f64::consts::PI;
    }
    if dtheta < -std::f64::consts::PI {
        dtheta += 2.0 * std::f64::consts::PI;
    }
    let dz = a.nominal_z - b.nominal_z;
    (dz * dz + radius * radius * dtheta * dtheta).sqrt()
}

/// Check that no two pressure circles intersect; returns the offending pair.
pub fn check_contact_overlap(
    radius: f64,
    contacts: &[ContactPoint],
) -> Result<(), (usize, usize, f64, f64)> {
    for i in 0..contacts.len() {
        for j in (i + 1)..contacts.len() {
            let sep = surface_distance(radius, &contacts[i], &contacts[j]);
            let required = contacts[i].pressure_radius + contacts[j].pressure_radius;
            if sep <= required {
                return Err((i, j, sep, required));
            }
        }
    }
    Ok(())
}

impl GraspConfig {
    /// Build a grasp on a canonical cylinder (axis along z) of the given
    /// radius. `contacts` holds 3 finger contacts and at most one palm.
    pub fn new(
        radius: f64,
        contacts: Vec<ContactPoint>,
        friction_mu: f64,
        geometry: FingerGeometry,
    ) -> Result<Self, SolveError> {
        if friction_mu <= 0.0 {
            return Err(SolveError::InvalidConfig(format!(
                "friction coefficient must be positive, got {friction_mu}"
            )));
        }
        let fingers_n = contacts.iter().filter(|c| !c.is_palm).count();
        let palms_n = contacts.iter().filter(|c| c.is_palm).count();
        if fingers_n != 3 || palms_n > 1 {
            return Err(SolveError::InvalidConfig(format!(
                "need exactly 3 finger contacts and at most one palm, got {fingers_n} + {palms_n}"
            )));
        }
        // fingers first, palm last
        let mut ordered: Vec<ContactPoint> =
            contacts.iter().copied().filter(|c| !c.is_palm).collect();
        ordered.extend(contacts.iter().copied().filter(|c| c.is_palm));
        if let Err((a, b, sep, req)) = check_contact_overlap(radius, &ordered) {
            return Err(SolveError::InvalidConfig(format!(
                "contacts {a} and {b} overlap: separation {sep:.4} m < {req:.4} m"
            )));
        }
        let cylinder = CylinderFrame::canonical(radius)?;
        let mut fingers = Vec::with_capacity(3);
        for contact in ordered.iter().take(3) {
            let base_pose = base_pose_for_contact(&geometry, &cylinder, contact, &NOMINAL_Q)?;
            let target = cylinder.surface_point(contact.nominal_theta, contact.nominal_z);
            let joint_angles = inverse_kinematics(&geometry, &target, &base_pose)?;
            let reached = forward_kinematics(&geometry, &joint_angles, &base_pose)? * Point3::origin();
            let err = (reached - target).norm();
            if err > 1e-9 {
                return Err(SolveError::InvalidConfig(format!(
                    "IK places fingertip {err:.2e} m away from its nominal contact"
                )));
            }
            let frame = cylinder.contact_frame(contact.nominal_theta);
            let torque_map = contact_jacobian(&geometry, &joint_angles, &base_pose, &frame);
            fingers.push(FingerContact {
                geometry,
                base_pose,
                joint_angles,
                torque_map,
            });
        }
        Ok(Self {
            cylinder,
            contacts: ordered,
            friction_mu,
            fingers,
        })
    }

    pub fn has_palm(&self) -> bool {
        self.contacts.last().map_or(false, |c| c.is_palm)
    }
}

/// Per-contact decision variables of one timestep.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ContactVars {
    /// Normal force N (N).
    pub normal: f64,
    /// Tangential friction f_theta (N).
    pub tangential: f64,
    /// Axial friction f_z (N).
    pub axial: f64,
    /// Contact location along the cylinder axis (m).
    pub z: f64,
    /// Contact angle around the cylinder (rad).
    pub theta: f64,
}

/// Joint torques of one finger (N·m).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointTorques {
    pub mcp_z: f64,
    pub mcp_x: f64,
    pub pip: f64,
}

impl JointTorques {
    pub fn get(&self, joint: JointType) -> f64 {
        match joint {
            JointType::McpZ => self.mcp_z,
            JointType::McpX => self.mcp_x,
            JointType::Pip => self.pip,
        }
    }
}

/// Solution of one timestep.
#[derive(Debug, Clone)]
pub struct ContactSolution {
    pub contacts: Vec<ContactVars>,
    /// Per-finger joint torques (palm contributes none).
    pub joint_torques: Vec<JointTorques>,
    /// Sum of normalized fourth-power torques plus the force regularization.
    pub objective: f64,
    pub feasible: bool,
    pub kkt_residual: f64,
    /// Largest constraint violation across equilibrium, cone, pressure, N >= 0.
    pub max_violation: f64,
}

/// Solver options exposed through the run configuration.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Multi-start count: nominal start plus seeded position perturbations.
    pub restarts: usize,
    pub seed: u64,
    /// Inner iteration budget per solve.
    pub max_iters: usize,
    /// Keep contact locations at their nominal values.
    pub freeze_positions: bool,
    /// Acceptance threshold on the equilibrium residual inf-norm (N, N·m).
    pub equilibrium_tol: f64,
    /// Acceptance threshold on friction-cone violation (N^2).
    pub cone_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            restarts: 5,
            seed: 0,
            max_iters: 500,
            freeze_positions: false,
            equilibrium_tol: 1e-6,
            cone_tol: 1e-8,
        }
    }
}

/// Residuals of the six equilibrium equations: measured wrench minus the sum
/// of contact-force contributions (Fx, Fy, Fz, Tx, Ty, Tz).
pub fn equilibrium_residual(
    wrench: &Wrench,
    config: &GraspConfig,
    candidate: &[ContactVars],
) -> [f64; 6] {
    let radius = config.cylinder.radius;
    let mut sums = [0.0; 6];
    for c in candidate {
        let (s, co) = c.theta.sin_cos();
        sums[0] += c.normal * co - c.tangential * s;
        sums[1] += c.normal * s + c.tangential * co;
        sums[2] += c.axial;
        sums[3] += -c.z * (c.normal * s + c.tangential * co) + radius * s * c.axial;
        sums[4] += c.z * (c.normal * co - c.tangential * s) - radius * co * c.axial;
        sums[5] += radius * c.tangential;
    }
    [
        wrench.fx - sums[0],
        wrench.fy - sums[1],
        wrench.fz - sums[2],
        wrench.tx - sums[3],
        wrench.ty - sums[4],
        wrench.tz - sums[5],
    ]
}

/// Equilibrium coefficient matrix for fixed contact locations: rows are the
/// six balance equations, columns (N_i, f_z_i, f_theta_i) per contact.
fn equilibrium_matrix(radius: f64, positions: &[(f64, f64)]) -> DMatrix<f64> {
    let n = positions.len();
    let mut a = DMatrix::zeros(6, 3 * n);
    for (i, &(z, theta)) in positions.iter().enumerate() {
        let (s, c) = theta.sin_cos();
        let col = 3 * i;
        a[(0, col)] = c;
        a[(0, col + 2)] = -s;
        a[(1, col)] = s;
        a[(1, col + 2)] = c;
        a[(2, col + 1)] = 1.0;
        a[(3, col)] = -z * s;
        a[(3, col + 1)] = radius * s;
        a[(3, col + 2)] = -z * c;
        a[(4, col)] = z * c;
        a[(4, col + 1)] = -radius * c;
        a[(4, col + 2)] = -z * s;
        a[(5, col + 2)] = radius;
    }
    a
}

/// Cached per-restart factorization: contact locations are fixed per restart
/// across a trajectory, so the equilibrium matrix and its null space are
/// computed once.
struct RestartContext {
    positions: Vec<(f64, f64)>,
    matrix: DMatrix<f64>,
    /// Range-space eigenpairs of A^T A: (eigenvalue, eigenvector).
    range: Vec<(f64, DVector<f64>)>,
    /// Null-space basis of A (columns).
    null_basis: DMatrix<f64>,
    warm_forces: Option<DVector<f64>>,
    warm_lambda: Option<Vec<f64>>,
}

impl RestartContext {
    fn new(radius: f64, positions: Vec<(f64, f64)>) -> Self {
        let matrix = equilibrium_matrix(radius, &positions);
        let ata = matrix.transpose() * &matrix;
        let eig = ata.symmetric_eigen();
        let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
        let tol = lambda_max * 1e-12;
        let mut range = Vec::new();
        let mut null_cols = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(k).into_owned();
            if lambda > tol {
                range.push((lambda, v));
            } else {
                null_cols.push(v);
            }
        }
        let dim = matrix.ncols();
        let mut null_basis = DMatrix::zeros(dim, null_cols.len());
        for (k, v) in null_cols.iter().enumerate() {
            null_basis.set_column(k, v);
        }
        Self {
            positions,
            matrix,
            range,
            null_basis,
            warm_forces: None,
            warm_lambda: None,
        }
    }

    /// Minimum-norm least-squares solution of A f = b.
    fn particular_solution(&self, b: &DVector<f64>) -> DVector<f64> {
        let atb = self.matrix.transpose() * b;
        let mut f = DVector::zeros(self.matrix.ncols());
        for (lambda, v) in &self.range {
            f += v * (v.dot(&atb) / lambda);
        }
        f
    }
}

#[cfg(test)]
pub(crate) static EVAL_COUNT: std::sync::atomic::AtomicUsize =
    std::sync::atomic::AtomicUsize::new(0);

fn objective_and_grad(
    forces: &DVector<f64>,
    config: &GraspConfig,
    grad_out: Option<&mut DVector<f64>>,
) -> f64 {
    #[cfg(test)]
    EVAL_COUNT.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let mut obj = 0.0;
    let mut grad = DVector::zeros(forces.len());
    for (i, finger) in config.fingers.iter().enumerate() {
        let f = Vector3::new(forces[3 * i], forces[3 * i + 1], forces[3 * i + 2]);
        let tau = finger.torque_map * f / TORQUE_SCALE;
        obj += tau.x.powi(4) + tau.y.powi(4) + tau.z.powi(4);
        let dtau = Vector3::new(
            4.0 * tau.x.powi(3),
            4.0 * tau.y.powi(3),
            4.0 * tau.z.powi(3),
        );
        let g = finger.torque_map.transpose() * dtau / TORQUE_SCALE;
        grad[3 * i] += g.x;
        grad[3 * i + 1] += g.y;
        grad[3 * i + 2] += g.z;
    }
    for k in 0..forces.len() {
        obj += FORCE_REG * forces[k] * forces[k];
        grad[k] += 2.0 * FORCE_REG * forces[k];
    }
    if let Some(out) = grad_out {
        *out = grad;
    }
    obj
}

/// Hessian of [`objective_and_grad`] in force space (block diagonal per
/// finger plus the regularization diagonal).
fn objective_hessian(forces: &DVector<f64>, config: &GraspConfig, hess: &mut DMatrix<f64>) {
    hess.fill(0.0);
    let ts2 = TORQUE_SCALE * TORQUE_SCALE;
    for (i, finger) in config.fingers.iter().enumerate() {
        let f = Vector3::new(forces[3 * i], forces[3 * i + 1], forces[3 * i + 2]);
        let tau = finger.torque_map * f / TORQUE_SCALE;
        let d = Vector3::new(
            12.0 * tau.x * tau.x,
            12.0 * tau.y * tau.y,
            12.0 * tau.z * tau.z,
        );
        let m = finger.torque_map;
        for a in 0..3 {
            for b in 0..3 {
                let mut v = 0.0;
                for k in 0..3 {
                    v += m[(k, a)] * d[k] * m[(k, b)];
                }
                hess[(3 * i + a, 3 * i + b)] += v / ts2;
            }
        }
    }
    for k in 0..forces.len() {
        hess[(k, k)] += 2.0 * FORCE_REG;
    }
}

fn torques_from_forces(forces: &DVector<f64>, config: &GraspConfig) -> Vec<JointTorques> {
    config
        .fingers
        .iter()
        .enumerate()
        .map(|(i, finger)| {
            let f = Vector3::new(forces[3 * i], forces[3 * i + 1], forces[3 * i + 2]);
            let tau = finger.torque_map * f;
            JointTorques {
                mcp_z: tau.x,
                mcp_x: tau.y,
                pip: tau.z,
            }
        })
        .collect()
}

fn solution_from_forces(
    wrench: &Wrench,
    config: &GraspConfig,
    ctx: &RestartContext,
    forces: &DVector<f64>,
    kkt_residual: f64,
    options: &SolverOptions,
) -> ContactSolution {
    let contacts: Vec<ContactVars> = ctx
        .positions
        .iter()
        .enumerate()
        .map(|(i, &(z, theta))| ContactVars {
            normal: forces[3 * i],
            axial: forces[3 * i + 1],
            tangential: forces[3 * i + 2],
            z,
            theta,
        })
        .collect();
    let eq = equilibrium_residual(wrench, config, &contacts);
    let eq_violation = eq.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let mu2 = config.friction_mu * config.friction_mu;
    let mut cone_violation = 0.0f64;
    let mut min_normal = f64::INFINITY;
    let mut pressure_violation = 0.0f64;
    let radius = config.cylinder.radius;
    for (c, nominal) in contacts.iter().zip(&config.contacts) {
        cone_violation = cone_violation.max(
            c.tangential * c.tangential + c.axial * c.axial - mu2 * c.normal * c.normal,
        );
        min_normal = min_normal.min(c.normal);
        let dz = c.z - nominal.nominal_z;
        let dtheta = c.theta - nominal.nominal_theta;
        pressure_violation = pressure_violation.max(
            dz * dz + radius * radius * dtheta * dtheta
                - nominal.pressure_radius * nominal.pressure_radius,
        );
    }
    let feasible = eq_violation <= options.equilibrium_tol
        && cone_violation <= options.cone_tol
        && pressure_violation <= 1e-12
        && min_normal >= -1e-12;
    let max_violation = eq_violation
        .max(cone_violation)
        .max(pressure_violation)
        .max(-min_normal.min(0.0));
    ContactSolution {
        joint_torques: torques_from_forces(forces, config),
        objective: objective_and_grad(forces, config, None),
        feasible,
        kkt_residual,
        max_violation,
        contacts,
    }
}

fn solve_restart(
    wrench: &Wrench,
    config: &GraspConfig,
    ctx: &mut RestartContext,
    options: &SolverOptions,
) -> ContactSolution {
    let b = DVector::from_column_slice(&[
        wrench.fx, wrench.fy, wrench.fz, wrench.tx, wrench.ty, wrench.tz,
    ]);
    let f0 = ctx.particular_solution(&b);
    let residual = &ctx.matrix * &f0 - &b;
    let eq_residual = residual.amax();
    if eq_residual > 1e-8 {
        // wrench outside the range of the equilibrium map
        let sol = solution_from_forces(wrench, config, ctx, &f0, f64::INFINITY, options);
        return ContactSolution {
            feasible: false,
            ..sol
        };
    }
    let z = &ctx.null_basis;
    let m = z.ncols();
    let n_contacts = ctx.positions.len();

    // starting point: warm forces if available, otherwise a light symmetric
    // preload so the cone constraints start near-feasible
    let start_forces = ctx.warm_forces.clone().unwrap_or_else(|| {
        let mut f = DVector::zeros(3 * n_contacts);
        for i in 0..n_contacts {
            f[3 * i] = 0.5;
        }
        f
    });
    let y0: Vec<f64> = (z.transpose() * (&start_forces - &f0)).iter().cloned().collect();

    let forces_of = |y: &[f64]| -> DVector<f64> {
        let yv = DVector::from_column_slice(y);
        &f0 + z * yv
    };

    let objective = |y: &[f64], grad: &mut [f64], hess: &mut DMatrix<f64>| -> f64 {
        let forces = forces_of(y);
        let mut gf = DVector::zeros(forces.len());
        let obj = objective_and_grad(&forces, config, Some(&mut gf));
        let gy = z.transpose() * gf;
        grad.copy_from_slice(gy.as_slice());
        let mut hf = DMatrix::zeros(forces.len(), forces.len());
        objective_hessian(&forces, config, &mut hf);
        hess.copy_from(&(z.transpose() * hf * z));
        obj
    };

    let mut constraints: Vec<Box<dyn SmoothHess>> = Vec::new();
    for i in 0..n_contacts {
        let f0c = f0.clone();
        let zc = z.clone();
        let mu = config.friction_mu;
        constraints.push(Box::new(
            move |y: &[f64], grad: &mut [f64], hess: &mut DMatrix<f64>| {
                let yv = DVector::from_column_slice(y);
                let forces = &f0c + &zc * yv;
                let (n, fz, ft) = (forces[3 * i], forces[3 * i + 1], forces[3 * i + 2]);
                // smoothed second-order cone sqrt(fz^2 + ft^2 + eps^2) <= mu N:
                // unlike the squared form its gradient never vanishes, so the
                // cone vertex of an unloaded contact stays KKT-regular
                let s = (fz * fz + ft * ft + CONE_EPS * CONE_EPS).sqrt();
                let mut gf = DVector::zeros(forces.len());
                gf[3 * i] = -mu;
                gf[3 * i + 1] = fz / s;
                gf[3 * i + 2] = ft / s;
                let gy = zc.transpose() * gf;
                grad.copy_from_slice(gy.as_slice());
                // f-space Hessian: (I - uu^T)/s on the (fz, ft) block
                let s3 = s * s * s;
                let h_zz = (s * s - fz * fz) / s3;
                let h_tt = (s * s - ft * ft) / s3;
                let h_zt = -fz * ft / s3;
                let dim = zc.ncols();
                for r in 0..dim {
                    let zr_z = zc[(3 * i + 1, r)];
                    let zr_t = zc[(3 * i + 2, r)];
                    for c in 0..dim {
                        let zc_z = zc[(3 * i + 1, c)];
                        let zc_t = zc[(3 * i + 2, c)];
                        hess[(r, c)] = h_zz * zr_z * zc_z
                            + h_tt * zr_t * zc_t
                            + h_zt * (zr_z * zc_t + zr_t * zc_z);
                    }
                }
                s - mu * n
            },
        ));
        let f0c = f0.clone();
        let zc = z.clone();
        constraints.push(Box::new(
            move |y: &[f64], grad: &mut [f64], hess: &mut DMatrix<f64>| {
                let yv = DVector::from_column_slice(y);
                let forces = &f0c + &zc * yv;
                let mut gf = DVector::zeros(forces.len());
                gf[3 * i] = -1.0;
                let gy = zc.transpose() * gf;
                grad.copy_from_slice(gy.as_slice());
                hess.fill(0.0);
                -forces[3 * i]
            },
        ));
    }
    let constraint_refs: Vec<&dyn SmoothHess> = constraints.iter().map(|c| c.as_ref()).collect();

    let al_opts = AlOptions {
        inner_max: options.max_iters,
        ..AlOptions::default()
    };
    let result = if m == 0 {
        AlResult {
            x: Vec::new(),
            objective: 0.0,
            max_violation: 0.0,
            grad_norm: 0.0,
            converged: true,
            lambda: Vec::new(),
        }
    } else {
        nlp::minimize_al_newton(
            &y0,
            &objective,
            &constraint_refs,
            &al_opts,
            ctx.warm_lambda.as_deref(),
        )
    };
    let forces = forces_of(&result.x);
    ctx.warm_forces = Some(forces.clone());
    ctx.warm_lambda = Some(result.lambda.clone());
    solution_from_forces(wrench, config, ctx, &forces, result.grad_norm, options)
}

fn restart_contexts(config: &GraspConfig, options: &SolverOptions) -> Vec<RestartContext> {
    let nominal: Vec<(f64, f64)> = config
        .contacts
        .iter()
        .map(|c| (c.nominal_z, c.nominal_theta))
        .collect();
    let radius = config.cylinder.radius;
    let restarts = if options.freeze_positions {
        1
    } else {
        options.restarts.max(1)
    };
    let mut contexts = vec![RestartContext::new(radius, nominal.clone())];
    for r in 1..restarts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(options.seed ^ (r as u64).wrapping_mul(0x9E3779B97F4A7C15));
        let positions: Vec<(f64, f64)> = config
            .contacts
            .iter()
            .map(|c| {
                // uniform in the pressure disc, slightly inside the boundary
                let d = 0.999 * c.pressure_radius * rng.gen::<f64>().sqrt();
                let phi = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                (
                    c.nominal_z + d * phi.cos(),
                    c.nominal_theta + d * phi.sin() / radius,
                )
            })
            .collect();
        contexts.push(RestartContext::new(radius, positions));
    }
    contexts
}

fn best_of(candidates: Vec<ContactSolution>) -> ContactSolution {
    let mut best: Option<ContactSolution> = None;
    for cand in candidates {
        let better = match &best {
            None => true,
            Some(b) => {
                (cand.feasible && !b.feasible)
                    || (cand.feasible == b.feasible
                        && if cand.feasible {
                            cand.objective < b.objective
                        } else {
                            cand.max_violation < b.max_violation
                        })
            }
        };
        if better {
            best = Some(cand);
        }
    }
    best.expect("at least one restart")
}

/// Solve a single timestep: best feasible solution over all restarts, or an
/// infeasible result carrying the smallest constraint violation found.
pub fn solve_timestep(
    wrench: &Wrench,
    config: &GraspConfig,
    options: &SolverOptions,
) -> ContactSolution {
    let mut contexts = restart_contexts(config, options);
    best_of(
        contexts
            .iter_mut()
            .map(|ctx| solve_restart(wrench, config, ctx, options))
            .collect(),
    )
}

/// Torque requirements extracted from one task trajectory.
#[derive(Debug, Clone)]
pub struct TorqueRequirements {
    /// Max |tau| over all fingers and feasible timesteps, per joint type.
    pub peak_pip: f64,
    pub peak_mcp_x: f64,
    pub peak_mcp_z: f64,
    /// One trajectory per (finger, joint); infeasible steps hold the previous
    /// feasible value.
    pub trajectories: Vec<JointTorqueTrajectory>,
    pub solutions: Vec<ContactSolution>,
    pub infeasible_steps: Vec<usize>,
    /// Set when more than 10% of the timesteps were infeasible.
    pub infeasible_warning: bool,
}

impl TorqueRequirements {
    pub fn peak(&self, joint: JointType) -> f64 {
        match joint {
            JointType::Pip => self.peak_pip,
            JointType::McpX => self.peak_mcp_x,
            JointType::McpZ => self.peak_mcp_z,
        }
    }

    /// Overall peak across the three joint types.
    pub fn overall_peak(&self) -> f64 {
        self.peak_pip.max(self.peak_mcp_x).max(self.peak_mcp_z)
    }
}

/// Sequential per-timestep solve with warm starts carried per restart.
pub fn solve_trajectory(
    traj: &WrenchTrajectory,
    config: &GraspConfig,
    options: &SolverOptions,
) -> TorqueRequirements {
    let mut contexts = restart_contexts(config, options);
    let mut solutions = Vec::with_capacity(traj.samples.len());
    let mut infeasible_steps = Vec::new();
    for (k, wrench) in traj.samples.iter().enumerate() {
        let best = best_of(
            contexts
                .iter_mut()
                .map(|ctx| solve_restart(wrench, config, ctx, options))
                .collect(),
        );
        if !best.feasible {
            infeasible_steps.push(k);
        }
        solutions.push(best);
    }

    let joints = [JointType::Pip, JointType::McpX, JointType::McpZ];
    let mut peaks = [0.0f64; 3];
    let mut trajectories = Vec::new();
    for finger in 0..config.fingers.len() {
        for (j, &joint) in joints.iter().enumerate() {
            let mut values = Vec::with_capacity(solutions.len());
            let mut held = 0.0;
            for sol in &solutions {
                if sol.feasible {
                    held = sol.joint_torques[finger].get(joint);
                    peaks[j] = peaks[j].max(held.abs());
                }
                values.push(held);
            }
            trajectories.push(JointTorqueTrajectory {
                sample_rate: traj.sample_rate,
                joint,
                finger_index: finger,
                values,
            });
        }
    }
    let infeasible_warning =
        infeasible_steps.len() * 10 > traj.samples.len();
    TorqueRequirements {
        peak_pip: peaks[0],
        peak_mcp_x: peaks[1],
        peak_mcp_z: peaks[2],
        trajectories,
        solutions,
        infeasible_steps,
        infeasible_warning,
    }
}

/// Mean and (population) standard deviation of |peak-torque change| across
/// perturbation trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityStats {
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
    pub resamples: usize,
}

fn stats(deltas: &[f64], resamples: usize) -> SensitivityStats {
    let n = deltas.len().max(1) as f64;
    let mean = deltas.iter().sum::<f64>() / n;
    let var = deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    SensitivityStats {
        mean,
        std: var.sqrt(),
        trials: deltas.len(),
        resamples,
    }
}

/// Perturb nominal touch-point locations within `pos_radius` (Euclidean on the
/// cylinder surface) and the cylinder radius by ±`radius_delta`, re-solve, and
/// report |Δ overall peak torque| statistics. Deterministic for a fixed seed.
pub fn sensitivity_touchpoints(
    traj: &WrenchTrajectory,
    config: &GraspConfig,
    geometry: FingerGeometry,
    trials: usize,
    pos_radius: f64,
    radius_delta: f64,
    seed: u64,
    options: &SolverOptions,
) -> Result<SensitivityStats, SolveError> {
    if trials < 1 {
        return Err(SolveError::Domain("trials must be >= 1".to_string()));
    }
    let baseline = solve_trajectory(traj, config, options).overall_peak();
    let mut deltas = Vec::with_capacity(trials);
    let mut resamples = 0usize;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add((trial as u64).wrapping_mul(0x9E3779B97F4A7C15)),
        );
        let mut attempts = 0usize;
        let perturbed = loop {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let new_radius = (config.cylinder.radius + sign * radius_delta).max(1e-4);
            let contacts: Vec<ContactPoint> = config
                .contacts
                .iter()
                .map(|c| {
                    let d = pos_radius * rng.gen::<f64>().sqrt();
                    let phi = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                    ContactPoint {
                        nominal_z: c.nominal_z + d * phi.cos(),
                        nominal_theta: c.nominal_theta + d * phi.sin() / new_radius,
                        ..*c
                    }
                })
                .collect();
            match GraspConfig::new(new_radius, contacts, config.friction_mu, geometry) {
                Ok(cfg) => break cfg,
                Err(_) => {
                    attempts += 1;
                    resamples += 1;
                    if attempts >= 100 {
                        return Err(SolveError::ResampleCap(100));
                    }
                }
            }
        };
        let peak = solve_trajectory(traj, &perturbed, options).overall_peak();
        deltas.push((peak - baseline).abs());
    }
    Ok(stats(&deltas, resamples))
}

/// Re-solve under each friction coefficient and report |Δ overall peak torque|
/// statistics against the μ = 0.6 baseline.
pub fn sensitivity_friction(
    traj: &WrenchTrajectory,
    config: &GraspConfig,
    geometry: FingerGeometry,
    mu_values: &[f64],
    options: &SolverOptions,
) -> Result<SensitivityStats, SolveError> {
    if mu_values.iter().any(|&mu| mu <= 0.0) {
        return Err(SolveError::Domain(
            "friction coefficients must be positive".to_string(),
        ));
    }
    let nominal_contacts = config.contacts.clone();
    let baseline_cfg = GraspConfig::new(
        config.cylinder.radius,
        nominal_contacts.clone(),
        0.6,
        geometry,
    )?;
    let baseline = solve_trajectory(traj, &baseline_cfg, options).overall_peak();
    let mut deltas = Vec::with_capacity(mu_values.len());
    for &mu in mu_values {
        let cfg = GraspConfig::new(config.cylinder.radius, nominal_contacts.clone(), mu, geometry)?;
        let peak = solve_trajectory(traj, &cfg, options).overall_peak();
        deltas.push((peak - baseline).abs());
    }
    Ok(stats(&deltas, 0))
}
