//! Damped complex Newton iteration for small square systems, with the
//! convergence and divergence guards used by all root-finding in this crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NewtonError {
    #[error("no root found from the given start (best residual {best_residual:e})")]
    NoRootFound { best_residual: f64 },
    #[error("Jacobian is singular at the current iterate")]
    SingularJacobian,
    #[error("iterate escaped the search region")]
    Diverged,
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub z: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}

pub const MAX_ITERATIONS: usize = 60;
pub const MAX_HALVINGS: usize = 8;
pub const STEP_TOL: f64 = 1e-13;
pub const ESCAPE_RADIUS: f64 = 30.0;

fn inf_norm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Newton iteration on `F(z) = 0` with step halving: a step is accepted only
/// if it does not increase the residual, halving up to 8 times. Converged
/// when the accepted step is below `1e-13 * (1 + |z|)` and the residual is
/// below `tol_at(z)` (callers pass a scale-aware tolerance). Iterates with
/// any coordinate beyond modulus 30 count as diverged.
pub fn solve<F, T>(
    mut system: F,
    tol_at: T,
    start: &[Complex64],
    max_iterations: usize,
) -> Result<NewtonOutcome, NewtonError>
where
    F: FnMut(&[Complex64]) -> (DVector<Complex64>, DMatrix<Complex64>),
    T: Fn(&[Complex64]) -> f64,
{
    let n = start.len();
    let mut z: Vec<Complex64> = start.to_vec();
    let (mut f, mut jac) = system(&z);
    let mut res = inf_norm(&f);
    let mut best = res;

    for iter in 0..max_iterations {
        if z.iter().any(|c| c.norm() > ESCAPE_RADIUS) {
            return Err(NewtonError::Diverged);
        }
        let lu = jac.clone().lu();
        let neg_f = -&f;
        let delta = match lu.solve(&neg_f) {
            Some(d) if d.iter().all(|c| c.re.is_finite() && c.im.is_finite()) => d,
            _ => return Err(NewtonError::SingularJacobian),
        };

        // Damping: halve the step until the residual stops growing.
        let mut lambda = 1.0f64;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand: Vec<Complex64> =
                (0..n).map(|i| z[i] + delta[i] * lambda).collect();
            let (fc, jc) = system(&cand);
            let rc = inf_norm(&fc);
            if rc <= res || rc < tol_at(&cand) {
                accepted = Some((cand, fc, jc, rc, lambda));
                break;
            }
            lambda *= 0.5;
        }
        let (cand, fc, jc, rc, lambda) = match accepted {
            Some(a) => a,
            None => {
                // Residual would not decrease along the Newton direction.
                return Err(NewtonError::NoRootFound { best_residual: best });
            }
        };
        let step = delta.iter().map(|c| (c * lambda).norm()).fold(0.0, f64::max);
        let z_norm = cand.iter().map(|c| c.norm()).fold(0.0, f64::max);
        z = cand;
        f = fc;
        jac = jc;
        res = rc;
        best = best.min(res);

        if step < STEP_TOL * (1.0 + z_norm) && res < tol_at(&z) {
            return Ok(NewtonOutcome { z, residual: res, iterations: iter + 1 });
        }
    }
    Err(NewtonError::NoRootFound { best_residual: best })
}

/// One-dimensional specialization: `f` returns (value, derivative). Returns
/// the root and the final residual. A derivative below `deriv_floor` at the
/// converged point is rejected as a singular (non-transverse) root.
pub fn solve_scalar<F, T>(
    mut f: F,
    tol_at: T,
    deriv_floor_at: impl Fn(Complex64) -> f64,
    start: Complex64,
    max_iterations: usize,
) -> Result<(Complex64, f64), NewtonError>
where
    F: FnMut(Complex64) -> (Complex64, Complex64),
    T: Fn(Complex64) -> f64,
{
    let outcome = solve(
        |z| {
            let (v, d) = f(z[0]);
            (
                DVector::from_element(1, v),
                DMatrix::from_element(1, 1, d),
            )
        },
        |z| tol_at(z[0]),
        &[start],
        max_iterations,
    )?;
    let root = outcome.z[0];
    let (_, d) = f(root);
    if d.norm() < deriv_floor_at(root) {
        return Err(NewtonError::SingularJacobian);
    }
    Ok((root, outcome.residual))
}
