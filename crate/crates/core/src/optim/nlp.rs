//! Small dense augmented-Lagrangian solver for smooth inequality-constrained
//! problems, with an L-BFGS inner loop. Equality constraints are expected to
//! be eliminated by the caller (null-space parameterization), so only
//! inequalities g(x) <= 0 appear here.

use nalgebra::{DMatrix, DVector};

/// Objective/constraint evaluation interface. `grad` has the same length as
/// `x` and must be fully overwritten.
pub trait Smooth {
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64;
}

impl<F: Fn(&[f64], &mut [f64]) -> f64> Smooth for F {
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        self(x, grad)
    }
}

#[derive(Debug, Clone)]
pub struct AlOptions {
    pub outer_max: usize,
    pub inner_max: usize,
    /// Target on max inequality violation.
    pub violation_tol: f64,
    /// Target on the inf-norm of the AL gradient.
    pub grad_tol: f64,
    pub initial_penalty: f64,
    pub penalty_growth: f64,
    pub max_penalty: f64,
}

impl Default for AlOptions {
    fn default() -> Self {
        Self {
            outer_max: 40,
            inner_max: 250,
            violation_tol: 1e-9,
            grad_tol: 1e-8,
            initial_penalty: 10.0,
            penalty_growth: 5.0,
            max_penalty: 1e12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlResult {
    pub x: Vec<f64>,
    pub objective: f64,
    pub max_violation: f64,
    pub grad_norm: f64,
    pub converged: bool,
    /// Final multipliers, reusable as a warm start for a nearby problem.
    pub lambda: Vec<f64>,
}

/// Minimize `objective` subject to `ineqs[j](x) <= 0`.
pub fn minimize_al(
    x0: &[f64],
    objective: &dyn Smooth,
    ineqs: &[&dyn Smooth],
    opts: &AlOptions,
) -> AlResult {
    minimize_al_warm(x0, objective, ineqs, opts, None)
}

/// [`minimize_al`] with optional warm-start multipliers (one per inequality).
pub fn minimize_al_warm(
    x0: &[f64],
    objective: &dyn Smooth,
    ineqs: &[&dyn Smooth],
    opts: &AlOptions,
    lambda0: Option<&[f64]>,
) -> AlResult {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut lambda = match lambda0 {
        Some(l0) if l0.len() == ineqs.len() => l0.to_vec(),
        _ => vec![0.0; ineqs.len()],
    };
    let mut rho = opts.initial_penalty;
    let mut prev_violation = f64::INFINITY;
    let mut grad_norm = f64::INFINITY;
    let mut best: Option<AlResult> = None;
    let mut stagnant = 0usize;

    for outer in 0..opts.outer_max {
        // inner tolerance tightens as the multipliers settle
        let inner_tol = (opts.grad_tol).max(1e-4 * 0.1f64.powi(outer as i32));
        let al = AugmentedLagrangian {
            objective,
            ineqs,
            lambda: &lambda,
            rho,
        };
        let (new_x, g_norm) = lbfgs(&x, &al, inner_tol, opts.inner_max);
        x = new_x;
        grad_norm = g_norm;

        let mut scratch = vec![0.0; n];
        let gvals: Vec<f64> = ineqs.iter().map(|g| g.eval(&x, &mut scratch)).collect();
        let violation = gvals.iter().fold(0.0f64, |m, &g| m.max(g.max(0.0)));
        let objective_val = objective.eval(&x, &mut scratch);

        let candidate = AlResult {
            x: x.clone(),
            objective: objective_val,
            max_violation: violation,
            grad_norm,
            converged: violation <= opts.violation_tol && grad_norm <= opts.grad_tol * 10.0,
            lambda: lambda.clone(),
        };
        let better = match &best {
            None => true,
            Some(b) => {
                (candidate.converged && !b.converged)
                    || (candidate.converged == b.converged
                        && (violation < b.max_violation
                            || (violation <= b.max_violation + 1e-15
                                && objective_val < b.objective)))
            }
        };
        if better {
            best = Some(candidate);
        }

        if violation <= opts.violation_tol && grad_norm <= opts.grad_tol {
            break;
        }
        for (l, &g) in lambda.iter_mut().zip(&gvals) {
            *l = (*l + rho * g).max(0.0);
        }
        if violation > 0.25 * prev_violation {
            rho = (rho * opts.penalty_growth).min(opts.max_penalty);
        }
        // on infeasible problems the iterates settle on a violation minimizer
        // and growing the penalty changes nothing; stop instead of grinding
        // the penalty up to its cap
        if violation > opts.violation_tol && violation > 0.9 * prev_violation {
            stagnant += 1;
            if stagnant >= 3 || rho >= opts.max_penalty {
                break;
            }
        } else {
            stagnant = 0;
        }
        prev_violation = violation;
    }

    best.unwrap_or(AlResult {
        x,
        objective: f64::INFINITY,
        max_violation: f64::INFINITY,
        grad_norm,
        converged: false,
        lambda,
    })
}

struct AugmentedLagrangian<'a> {
    objective: &'a dyn Smooth,
    ineqs: &'a [&'a dyn Smooth],
    lambda: &'a [f64],
    rho: f64,
}

impl Smooth for AugmentedLagrangian<'_> {
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let mut f = self.objective.eval(x, grad);
        let n = x.len();
        let mut g_grad = vec![0.0; n];
        for (j, g) in self.ineqs.iter().enumerate() {
            let gv = g.eval(x, &mut g_grad);
            let shifted = self.lambda[j] + self.rho * gv;
            if shifted > 0.0 {
                f += (shifted * shifted - self.lambda[j] * self.lambda[j]) / (2.0 * self.rho);
                for (gi, &ggi) in grad.iter_mut().zip(&g_grad) {
                    *gi += shifted * ggi;
                }
            } else {
                f -= self.lambda[j] * self.lambda[j] / (2.0 * self.rho);
            }
        }
        f
    }
}

/// L-BFGS with Armijo backtracking. Returns (x, final gradient inf-norm).
pub fn lbfgs(x0: &[f64], f: &dyn Smooth, grad_tol: f64, max_iter: usize) -> (Vec<f64>, f64) {
    const MEMORY: usize = 10;
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut grad = vec![0.0; n];
    let mut fx = f.eval(&x, &mut grad);
    let mut s_list: Vec<Vec<f64>> = Vec::new();
    let mut y_list: Vec<Vec<f64>> = Vec::new();
    let mut rho_list: Vec<f64> = Vec::new();

    let inf_norm = |v: &[f64]| v.iter().fold(0.0f64, |m, &a| m.max(a.abs()));

    for _ in 0..max_iter {
        let gnorm = inf_norm(&grad);
        if gnorm <= grad_tol {
            break;
        }
        // two-loop recursion
        let mut dir: Vec<f64> = grad.iter().map(|&g| -g).collect();
        let mut alphas = vec![0.0; s_list.len()];
        for i in (0..s_list.len()).rev() {
            let a = rho_list[i] * dot(&s_list[i], &dir);
            alphas[i] = a;
            axpy(&mut dir, -a, &y_list[i]);
        }
        if let (Some(s), Some(y)) = (s_list.last(), y_list.last()) {
            let gamma = dot(s, y) / dot(y, y).max(1e-300);
            for d in dir.iter_mut() {
                *d *= gamma;
            }
        }
        for i in 0..s_list.len() {
            let b = rho_list[i] * dot(&y_list[i], &dir);
            axpy(&mut dir, alphas[i] - b, &s_list[i]);
        }
        let mut descent = dot(&grad, &dir);
        if descent >= 0.0 {
            // curvature went bad, fall back to steepest descent
            dir = grad.iter().map(|&g| -g).collect();
            descent = -dot(&grad, &grad);
            s_list.clear();
            y_list.clear();
            rho_list.clear();
        }

        // weak-Wolfe line search; on failure retry once along steepest descent
        let mut accepted = wolfe_search(f, &x, fx, &dir, descent);
        if accepted.is_none() && !s_list.is_empty() {
            dir = grad.iter().map(|&g| -g).collect();
            descent = -dot(&grad, &grad);
            s_list.clear();
            y_list.clear();
            rho_list.clear();
            accepted = wolfe_search(f, &x, fx, &dir, descent);
        }
        let Some((x_new, grad_new, f_new)) = accepted else {
            break; // line search failed, at numerical resolution
        };
        let s: Vec<f64> = (0..n).map(|i| x_new[i] - x[i]).collect();
        let y: Vec<f64> = (0..n).map(|i| grad_new[i] - grad[i]).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if s_list.len() == MEMORY {
                s_list.remove(0);
                y_list.remove(0);
                rho_list.remove(0);
            }
            rho_list.push(1.0 / sy);
            s_list.push(s);
            y_list.push(y);
        }
        x = x_new;
        grad = grad_new;
        fx = f_new;
    }
    let gnorm = inf_norm(&grad);
    (x, gnorm)
}

/// Weak-Wolfe (Armijo + curvature) bisection line search. The curvature
/// condition keeps sᵀy > 0, so accepted steps always yield valid L-BFGS
/// pairs. Returns (x_new, grad_new, f_new), or the last Armijo-satisfying
/// point if the curvature condition never holds at numerical resolution.
fn wolfe_search(
    f: &dyn Smooth,
    x: &[f64],
    fx: f64,
    dir: &[f64],
    descent: f64,
) -> Option<(Vec<f64>, Vec<f64>, f64)> {
    const C1: f64 = 1e-4;
    const C2: f64 = 0.9;
    let n = x.len();
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    let mut alpha = 1.0f64;
    let mut armijo_point: Option<(Vec<f64>, Vec<f64>, f64)> = None;
    for _ in 0..60 {
        let x_new: Vec<f64> = x.iter().zip(dir).map(|(xi, di)| xi + alpha * di).collect();
        let mut grad_new = vec![0.0; n];
        let f_new = f.eval(&x_new, &mut grad_new);
        if f_new > fx + C1 * alpha * descent {
            hi = alpha;
            alpha = 0.5 * (lo + hi);
        } else {
            let slope = dot(&grad_new, dir);
            armijo_point = Some((x_new.clone(), grad_new.clone(), f_new));
            if slope < C2 * descent {
                lo = alpha;
                alpha = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * alpha };
            } else {
                return Some((x_new, grad_new, f_new));
            }
        }
        if hi.is_finite() && hi - lo <= 1e-16 * hi.max(1.0) {
            break;
        }
    }
    armijo_point
}

/// Evaluation interface for problems with cheap exact Hessians. `grad` and
/// `hess` (n x n) must be fully overwritten.
pub trait SmoothHess {
    fn eval_hess(&self, x: &[f64], grad: &mut [f64], hess: &mut DMatrix<f64>) -> f64;
}

impl<F: Fn(&[f64], &mut [f64], &mut DMatrix<f64>) -> f64> SmoothHess for F {
    fn eval_hess(&self, x: &[f64], grad: &mut [f64], hess: &mut DMatrix<f64>) -> f64 {
        self(x, grad, hess)
    }
}

/// [`minimize_al`] variant for [`SmoothHess`] problems; the inner loop is a
/// damped Newton method, which converges in a handful of iterations on the
/// low-dimensional problems this crate produces.
pub fn minimize_al_newton(
    x0: &[f64],
    objective: &dyn SmoothHess,
    ineqs: &[&dyn SmoothHess],
    opts: &AlOptions,
    lambda0: Option<&[f64]>,
) -> AlResult {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut lambda = match lambda0 {
        Some(l0) if l0.len() == ineqs.len() => l0.to_vec(),
        _ => vec![0.0; ineqs.len()],
    };
    let mut rho = opts.initial_penalty;
    let mut prev_violation = f64::INFINITY;
    let mut grad_norm = f64::INFINITY;
    let mut best: Option<AlResult> = None;
    let mut stagnant = 0usize;

    let mut scratch_g = vec![0.0; n];
    let mut scratch_h = DMatrix::zeros(n, n);
    for outer in 0..opts.outer_max {
        let inner_tol = (opts.grad_tol).max(1e-4 * 0.1f64.powi(outer as i32));
        let al = AugmentedLagrangianH {
            objective,
            ineqs,
            lambda: &lambda,
            rho,
        };
        let (new_x, g_norm) = newton(&x, &al, inner_tol, opts.inner_max);
        x = new_x;
        grad_norm = g_norm;

        let gvals: Vec<f64> = ineqs
            .iter()
            .map(|g| g.eval_hess(&x, &mut scratch_g, &mut scratch_h))
            .collect();
        let violation = gvals.iter().fold(0.0f64, |m, &g| m.max(g.max(0.0)));
        if std::env::var_os("NLP_DEBUG").is_some() {
            eprintln!(
                "outer {outer}: rho {rho:.1e} viol {violation:.2e} gnorm {g_norm:.2e} tol {inner_tol:.1e}"
            );
        }
        let objective_val = objective.eval_hess(&x, &mut scratch_g, &mut scratch_h);

        let candidate = AlResult {
            x: x.clone(),
            objective: objective_val,
            max_violation: violation,
            grad_norm,
            converged: violation <= opts.violation_tol && grad_norm <= opts.grad_tol * 10.0,
            lambda: lambda.clone(),
        };
        let better = match &best {
            None => true,
            Some(b) => {
                (candidate.converged && !b.converged)
                    || (candidate.converged == b.converged
                        && (violation < b.max_violation
                            || (violation <= b.max_violation + 1e-15
                                && objective_val < b.objective)))
            }
        };
        if better {
            best = Some(candidate);
        }

        if violation <= opts.violation_tol && grad_norm <= opts.grad_tol {
            break;
        }
        // near the solution the penalty updates gain only a constant factor
        // per outer iteration; finish with a quadratically convergent Newton
        // solve of the active-set KKT system instead
        if violation <= 1e-4 {
            if let Some(polished) = kkt_polish(&x, &lambda, objective, ineqs) {
                if polished.max_violation <= opts.violation_tol
                    && polished.grad_norm <= opts.grad_tol
                {
                    return polished;
                }
            }
        }
        for (l, &g) in lambda.iter_mut().zip(&gvals) {
            *l = (*l + rho * g).max(0.0);
        }
        if violation > 0.25 * prev_violation {
            rho = (rho * opts.penalty_growth).min(opts.max_penalty);
        }
        // on infeasible problems the iterates settle on a violation minimizer
        // and growing the penalty changes nothing; stop instead of grinding
        // the penalty up to its cap
        if violation > opts.violation_tol && violation > 0.9 * prev_violation {
            stagnant += 1;
            if stagnant >= 3 || rho >= opts.max_penalty {
                break;
            }
        } else {
            stagnant = 0;
        }
        prev_violation = violation;
    }

    best.unwrap_or(AlResult {
        x,
        objective: f64::INFINITY,
        max_violation: f64::INFINITY,
        grad_norm,
        converged: false,
        lambda,
    })
}

/// Newton refinement of the KKT conditions restricted to the constraints
/// that look active at `x0`. Returns a fully converged [`AlResult`] or None
/// when the guess was wrong (wrong active set, singular system, divergence).
fn kkt_polish(
    x0: &[f64],
    lambda0: &[f64],
    objective: &dyn SmoothHess,
    ineqs: &[&dyn SmoothHess],
) -> Option<AlResult> {
    let n = x0.len();
    let m_all = ineqs.len();
    let mut grad = vec![0.0; n];
    let mut hess = DMatrix::zeros(n, n);
    let mut g_grad = vec![0.0; n];
    let mut g_hess = DMatrix::zeros(n, n);

    let gvals: Vec<f64> = ineqs
        .iter()
        .map(|g| g.eval_hess(x0, &mut g_grad, &mut g_hess))
        .collect();
    let active: Vec<usize> = (0..m_all)
        .filter(|&j| gvals[j] > -1e-6 || lambda0[j] > 1e-9)
        .collect();
    let m = active.len();
    if m > n {
        return None;
    }

    let mut x = x0.to_vec();
    let mut lam: Vec<f64> = active.iter().map(|&j| lambda0[j].max(0.0)).collect();
    let mut prev_res = f64::INFINITY;
    for _ in 0..30 {
        // residual F = [grad L ; g_active] and its Jacobian
        let fx_obj = objective.eval_hess(&x, &mut grad, &mut hess);
        let mut jac = DMatrix::zeros(n + m, n + m);
        let mut rhs = DVector::zeros(n + m);
        let mut lagr_grad = grad.clone();
        let mut lagr_hess = hess.clone();
        for (a, &j) in active.iter().enumerate() {
            let gv = ineqs[j].eval_hess(&x, &mut g_grad, &mut g_hess);
            for r in 0..n {
                lagr_grad[r] += lam[a] * g_grad[r];
                jac[(r, n + a)] = g_grad[r];
                jac[(n + a, r)] = g_grad[r];
                for c in 0..n {
                    lagr_hess[(r, c)] += lam[a] * g_hess[(r, c)];
                }
            }
            rhs[n + a] = -gv;
        }
        for r in 0..n {
            rhs[r] = -lagr_grad[r];
            for c in 0..n {
                jac[(r, c)] = lagr_hess[(r, c)];
            }
        }
        let res = rhs.amax();
        if res <= 1e-12 {
            // verify the active-set guess: multipliers nonnegative,
            // inactive constraints satisfied
            if lam.iter().any(|&l| l < -1e-10) {
                return None;
            }
            let mut viol = 0.0f64;
            for (j, g) in ineqs.iter().enumerate() {
                if !active.contains(&j) {
                    viol = viol.max(g.eval_hess(&x, &mut g_grad, &mut g_hess).max(0.0));
                }
            }
            if viol > 1e-12 {
                return None;
            }
            let mut lambda_full = vec![0.0; m_all];
            for (a, &j) in active.iter().enumerate() {
                lambda_full[j] = lam[a].max(0.0);
            }
            // active constraints sit within `res` of their boundary
            return Some(AlResult {
                x,
                objective: fx_obj,
                max_violation: viol.max(res),
                grad_norm: res,
                converged: true,
                lambda: lambda_full,
            });
        }
        if res > 0.9 * prev_res && res > 1e-9 {
            return None; // not contracting
        }
        prev_res = res;
        let lu = jac.lu();
        let delta = lu.solve(&rhs)?;
        if !delta.iter().all(|d| d.is_finite()) {
            return None;
        }
        for i in 0..n {
            x[i] += delta[i];
        }
        for a in 0..m {
            lam[a] += delta[n + a];
        }
    }
    None
}

struct AugmentedLagrangianH<'a> {
    objective: &'a dyn SmoothHess,
    ineqs: &'a [&'a dyn SmoothHess],
    lambda: &'a [f64],
    rho: f64,
}

impl SmoothHess for AugmentedLagrangianH<'_> {
    fn eval_hess(&self, x: &[f64], grad: &mut [f64], hess: &mut DMatrix<f64>) -> f64 {
        let mut f = self.objective.eval_hess(x, grad, hess);
        let n = x.len();
        let mut g_grad = vec![0.0; n];
        let mut g_hess = DMatrix::zeros(n, n);
        for (j, g) in self.ineqs.iter().enumerate() {
            let gv = g.eval_hess(x, &mut g_grad, &mut g_hess);
            let shifted = self.lambda[j] + self.rho * gv;
            if shifted > 0.0 {
                f += (shifted * shifted - self.lambda[j] * self.lambda[j]) / (2.0 * self.rho);
                for (gi, &ggi) in grad.iter_mut().zip(&g_grad) {
                    *gi += shifted * ggi;
                }
                for r in 0..n {
                    for c in 0..n {
                        hess[(r, c)] += shifted * g_hess[(r, c)]
                            + self.rho * g_grad[r] * g_grad[c];
                    }
                }
            } else {
                f -= self.lambda[j] * self.lambda[j] / (2.0 * self.rho);
            }
        }
        f
    }
}

/// Damped-Newton minimizer with Armijo backtracking. Returns (x, final
/// gradient inf-norm).
fn newton(x0: &[f64], f: &dyn SmoothHess, grad_tol: f64, max_iter: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut grad = vec![0.0; n];
    let mut hess = DMatrix::zeros(n, n);
    let mut fx = f.eval_hess(&x, &mut grad, &mut hess);
    let inf_norm = |v: &[f64]| v.iter().fold(0.0f64, |m, &a| m.max(a.abs()));

    for _ in 0..max_iter {
        if inf_norm(&grad) <= grad_tol {
            break;
        }
        // Levenberg-style damping until the factorization succeeds and the
        // step is a descent direction
        let scale = (0..n).fold(0.0f64, |m, i| m.max(hess[(i, i)].abs())).max(1.0);
        let neg_g = DVector::from_iterator(n, grad.iter().map(|&g| -g));
        let mut damp = 0.0f64;
        let dir = loop {
            let mut h = hess.clone();
            for i in 0..n {
                h[(i, i)] += damp;
            }
            if let Some(ch) = h.cholesky() {
                let d = ch.solve(&neg_g);
                if dot(&grad, d.as_slice()) < 0.0 {
                    break Some(d);
                }
            }
            damp = if damp == 0.0 { 1e-10 * scale } else { damp * 10.0 };
            if damp > 1e16 * scale {
                break None;
            }
        };
        let Some(dir) = dir else { break };
        let descent = dot(&grad, dir.as_slice());

        let mut alpha = 1.0f64;
        let mut stepped = false;
        for _ in 0..60 {
            let x_new: Vec<f64> = x
                .iter()
                .zip(dir.iter())
                .map(|(xi, di)| xi + alpha * di)
                .collect();
            let mut grad_new = vec![0.0; n];
            let mut hess_new = DMatrix::zeros(n, n);
            let f_new = f.eval_hess(&x_new, &mut grad_new, &mut hess_new);
            if f_new <= fx + 1e-4 * alpha * descent {
                x = x_new;
                grad = grad_new;
                hess = hess_new;
                fx = f_new;
                stepped = true;
                break;
            }
            alpha *= 0.5;
        }
        if !stepped {
            break; // at numerical resolution
        }
    }
    let gnorm = inf_norm(&grad);
    (x, gnorm)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lbfgs_minimizes_rosenbrock() {
        let rosen = |x: &[f64], g: &mut [f64]| {
            let (a, b) = (1.0, 100.0);
            g[0] = -2.0 * (a - x[0]) - 4.0 * b * x[0] * (x[1] - x[0] * x[0]);
            g[1] = 2.0 * b * (x[1] - x[0] * x[0]);
            (a - x[0]).powi(2) + b * (x[1] - x[0] * x[0]).powi(2)
        };
        let (x, gnorm) = lbfgs(&[-1.2, 1.0], &rosen, 1e-10, 500);
        assert!(
            (x[0] - 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6,
            "x = {x:?}, gnorm = {gnorm}"
        );
    }

    #[test]
    fn al_solves_constrained_quadratic() {
        // min (x-2)^2 + (y-1)^2 s.t. x + y <= 2  -> (1.5, 0.5)
        let obj = |x: &[f64], g: &mut [f64]| {
            g[0] = 2.0 * (x[0] - 2.0);
            g[1] = 2.0 * (x[1] - 1.0);
            (x[0] - 2.0).powi(2) + (x[1] - 1.0).powi(2)
        };
        let con = |x: &[f64], g: &mut [f64]| {
            g[0] = 1.0;
            g[1] = 1.0;
            x[0] + x[1] - 2.0
        };
        let res = minimize_al(&[0.0, 0.0], &obj, &[&con], &AlOptions::default());
        assert!(res.converged, "{res:?}");
        assert!((res.x[0] - 1.5).abs() < 1e-6 && (res.x[1] - 0.5).abs() < 1e-6);
        assert!(res.max_violation <= 1e-8);
    }

    #[test]
    fn al_newton_solves_constrained_quadratic() {
        // same problem as above, via the exact-Hessian path
        let obj = |x: &[f64], g: &mut [f64], h: &mut DMatrix<f64>| {
            g[0] = 2.0 * (x[0] - 2.0);
            g[1] = 2.0 * (x[1] - 1.0);
            h.fill(0.0);
            h[(0, 0)] = 2.0;
            h[(1, 1)] = 2.0;
            (x[0] - 2.0).powi(2) + (x[1] - 1.0).powi(2)
        };
        let con = |x: &[f64], g: &mut [f64], h: &mut DMatrix<f64>| {
            g[0] = 1.0;
            g[1] = 1.0;
            h.fill(0.0);
            x[0] + x[1] - 2.0
        };
        let res =
            minimize_al_newton(&[0.0, 0.0], &obj, &[&con], &AlOptions::default(), None);
        assert!(res.converged, "{res:?}");
        assert!((res.x[0] - 1.5).abs() < 1e-6 && (res.x[1] - 0.5).abs() < 1e-6);
        assert!(res.max_violation <= 1e-8);
    }

    #[test]
    fn al_detects_infeasible() {
        // x^2 <= -1 has no solution
        let obj = |x: &[f64], g: &mut [f64]| {
            g[0] = 2.0 * x[0];
            x[0] * x[0]
        };
        let con = |x: &[f64], g: &mut [f64]| {
            g[0] = 2.0 * x[0];
            x[0] * x[0] + 1.0
        };
        let res = minimize_al(&[0.5], &obj, &[&con], &AlOptions::default());
        assert!(!res.converged);
        assert!(res.max_violation > 0.5);
    }
}
