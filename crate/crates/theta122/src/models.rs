//! Product and near-product abelian threefolds carrying the (1,2,2)
//! polarization: the four even theta sections, the surface they cut out,
//! its sixteen base points, elliptic-pencil restrictions, and the small
//! genus-one determinants used by the plane-curve model.
//!
//! Lattice convention: the abelian threefold is `C^3 / (tau Z^3 + L)` where
//! `L` is generated by `2 Z^3` together with the all-ones vector `(1,1,1)`.
//! Sections are the four theta characteristics `a` in `{000, 011, 101, 110}`
//! (halved bit vectors, `b = 0`), which are precisely the ones descending to
//! line-bundle sections for that lattice.

use crate::newton;
use crate::theta::{
    theta_jet, theta_scale, PeriodMatrix, ThetaCharacteristic, ThetaError, ThetaJet,
    TruncationPolicy,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// The four even characteristic labels, in the fixed section order
/// (coefficients attach as 1, b, c, d).
pub const LABELS: [[u8; 3]; 4] = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("expected a genus-{expected} period matrix, got genus {got}")]
    WrongGenus { expected: usize, got: usize },
    #[error("period matrix is not diagonal (largest off-diagonal entry {max_offdiag:e})")]
    NotDiagonal { max_offdiag: f64 },
    #[error(
        "axis {axis} does not split off: coupling entries up to {max_coupling:e} are nonzero"
    )]
    BlockNotSplit { axis: usize, max_coupling: f64 },
    #[error("not a divisor chain: {reason}")]
    NotDivisorChain { reason: String },
    #[error("base point continuation failed for orbit {orbit} at step {step}")]
    ContinuationFailed { orbit: usize, step: f64 },
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Newton(#[from] newton::NewtonError),
}

/// A polarized surface inside the threefold: the zero locus of
/// `theta_000 + b theta_011 + c theta_101 + d theta_110`.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub tau: PeriodMatrix,
    coeffs: [Complex64; 4],
    pub policy: TruncationPolicy,
}

impl SurfaceSpec {
    pub fn new(
        tau: PeriodMatrix,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        policy: TruncationPolicy,
    ) -> Result<Self, ModelError> {
        if tau.g() != 3 {
            return Err(ModelError::WrongGenus { expected: 3, got: tau.g() });
        }
        policy.validate()?;
        Ok(SurfaceSpec { tau, coeffs: [Complex64::new(1.0, 0.0), b, c, d], policy })
    }

    pub fn b(&self) -> Complex64 {
        self.coeffs[1]
    }

    pub fn c(&self) -> Complex64 {
        self.coeffs[2]
    }

    pub fn d(&self) -> Complex64 {
        self.coeffs[3]
    }

    pub fn coeffs(&self) -> [Complex64; 4] {
        self.coeffs
    }

    /// The same surface data over a different period matrix.
    pub fn with_tau(&self, tau: PeriodMatrix) -> Result<Self, ModelError> {
        SurfaceSpec::new(tau, self.coeffs[1], self.coeffs[2], self.coeffs[3], self.policy)
    }

    /// The diagonal part of the period matrix as a new spec (continuation
    /// source).
    pub fn diagonal_part(&self) -> Result<Self, ModelError> {
        let diag: Vec<Complex64> = (0..3).map(|i| self.tau.entry(i, i)).collect();
        self.with_tau(PeriodMatrix::diagonal(&diag)?)
    }
}

/// A point of the threefold with the residual of the section it is asserted
/// to vanish on.
#[derive(Debug, Clone)]
pub struct TorusPoint {
    pub z: [Complex64; 3],
    pub residual: f64,
}

/// Jets of the four basis sections at `z`, in label order.
pub fn basis_jets(spec: &SurfaceSpec, z: &[Complex64]) -> Result<[ThetaJet; 4], ModelError> {
    let mut out = Vec::with_capacity(4);
    for bits in LABELS.iter() {
        let chi = ThetaCharacteristic::from_half_bits(bits);
        out.push(theta_jet(z, &spec.tau, &chi, &spec.policy)?);
    }
    Ok(out.try_into().expect("four jets"))
}

/// Values of the four basis sections at `z`, in label order.
pub fn basis_sections(spec: &SurfaceSpec, z: &[Complex64]) -> Result<[Complex64; 4], ModelError> {
    Ok(basis_jets(spec, z)?.map(|j| j.value))
}

/// Jet of the surface section `f = theta_000 + b theta_011 + c theta_101 +
/// d theta_110`.
pub fn surface_jet(spec: &SurfaceSpec, z: &[Complex64]) -> Result<ThetaJet, ModelError> {
    let jets = basis_jets(spec, z)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut gradient = vec![Complex64::new(0.0, 0.0); 3];
    let mut hessian = DMatrix::from_element(3, 3, Complex64::new(0.0, 0.0));
    for (jet, &coeff) in jets.iter().zip(spec.coeffs.iter()) {
        value += coeff * jet.value;
        for i in 0..3 {
            gradient[i] += coeff * jet.gradient[i];
            for j in 0..3 {
                hessian[(i, j)] += coeff * jet.hessian[(i, j)];
            }
        }
    }
    Ok(ThetaJet { value, gradient, hessian, scale: jets[0].scale })
}

/// The Gaussian magnitude unit at `z` for this period matrix.
pub fn surface_scale(spec: &SurfaceSpec, z: &[Complex64]) -> f64 {
    theta_scale(z, &spec.tau)
}

// ---------------------------------------------------------------------------
// Lattice bookkeeping.
// ---------------------------------------------------------------------------

/// An element `tau m + 2 q + diag (1,1,1)` of the threefold's period lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticePoint {
    pub m: [i64; 3],
    pub q: [i64; 3],
    pub diag: u8,
}

impl LatticePoint {
    pub fn vector(&self, tau: &PeriodMatrix) -> [Complex64; 3] {
        let mut v = [Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            v[i] = Complex64::new(2.0 * self.q[i] as f64 + self.diag as f64, 0.0);
            for j in 0..3 {
                v[i] += tau.entry(i, j) * self.m[j] as f64;
            }
        }
        v
    }
}

/// Decomposes `v` over the full period lattice, trying the plain
/// `tau m + 2 q` branch first and then the all-ones coset.
pub fn lattice_decompose(
    v: &[Complex64],
    tau: &PeriodMatrix,
) -> Result<LatticePoint, ThetaError> {
    match crate::theta::lattice_decompose_t2(v, tau) {
        Ok((m, q)) => Ok(LatticePoint {
            m: [m[0], m[1], m[2]],
            q: [q[0], q[1], q[2]],
            diag: 0,
        }),
        Err(first) => {
            let shifted: Vec<Complex64> =
                v.iter().map(|&c| c - Complex64::new(1.0, 0.0)).collect();
            match crate::theta::lattice_decompose_t2(&shifted, tau) {
                Ok((m, q)) => Ok(LatticePoint {
                    m: [m[0], m[1], m[2]],
                    q: [q[0], q[1], q[2]],
                    diag: 1,
                }),
                Err(_) => Err(first),
            }
        }
    }
}

/// The label-independent descent factor
/// `exp(-pi i m^T tau m - 2 pi i m^T z)` of a lattice element.
pub fn descent_factor(lp: &LatticePoint, z: &[Complex64], tau: &PeriodMatrix) -> Complex64 {
    let mut quad = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            quad += tau.entry(i, j) * (lp.m[i] as f64 * lp.m[j] as f64);
        }
    }
    let mut lin = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        lin += z[i] * lp.m[i] as f64;
    }
    (-Complex64::i() * PI * quad - Complex64::i() * (2.0 * PI) * lin).exp()
}

/// The full transformation factor of the section with the given label under
/// translation by `lp`: the descent factor times the parity sign
/// `(-1)^(diag * (i+j+k))` coming from the all-ones coset. For the four even
/// labels the sign is +1, so all basis sections share one factor.
pub fn section_factor(
    lp: &LatticePoint,
    z: &[Complex64],
    tau: &PeriodMatrix,
    label: &[u8; 3],
) -> Complex64 {
    let parity = (label[0] + label[1] + label[2]) as i64 * lp.diag as i64;
    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
    descent_factor(lp, z, tau) * sign
}

/// Reduces `z` modulo `tau Z^g + 2 Z^g` by rounding (no all-ones coset).
/// Returns the reduced representative and the integer vectors (m, q) that
/// were subtracted.
pub fn lattice_reduce(
    z: &[Complex64],
    tau: &PeriodMatrix,
) -> (Vec<Complex64>, Vec<i64>, Vec<i64>) {
    let g = tau.g();
    assert_eq!(z.len(), g, "point dimension mismatch");
    let mut m_real = vec![0.0f64; g];
    for i in 0..g {
        for j in 0..g {
            m_real[i] += tau.im_inv()[(i, j)] * z[j].im;
        }
    }
    let m: Vec<i64> = m_real.iter().map(|x| x.round() as i64).collect();
    let mut q = vec![0i64; g];
    let mut reduced = vec![Complex64::new(0.0, 0.0); g];
    for i in 0..g {
        let mut w = z[i];
        for j in 0..g {
            w -= tau.entry(i, j) * m[j] as f64;
        }
        q[i] = (w.re / 2.0).round() as i64;
        reduced[i] = w - Complex64::new(2.0 * q[i] as f64, 0.0);
    }
    (reduced, m, q)
}

/// Distance from `p - q` to the nearest lattice element (infinity norm of
/// the rounding residual); with `include_diag` the all-ones coset is also
/// tried. Exact for small distances, an upper bound in general, which is all
/// the distinctness and deduplication checks need.
pub fn lattice_distance(
    p: &[Complex64],
    q: &[Complex64],
    tau: &PeriodMatrix,
    include_diag: bool,
) -> f64 {
    assert_eq!(p.len(), q.len(), "point dimension mismatch");
    let deltas: &[f64] = if include_diag { &[0.0, 1.0] } else { &[0.0] };
    let mut best = f64::INFINITY;
    for &delta in deltas {
        let d: Vec<Complex64> = (0..p.len())
            .map(|i| p[i] - q[i] - Complex64::new(delta, 0.0))
            .collect();
        let (r, _, _) = lattice_reduce(&d, tau);
        let norm = r.iter().map(|c| c.norm()).fold(0.0, f64::max);
        best = best.min(norm);
    }
    best
}

// ---------------------------------------------------------------------------
// Base points.
// ---------------------------------------------------------------------------

/// Closed-form base points of the linear system for a diagonal period
/// matrix: four torsion-shift orbits of four points each, sixteen total,
/// ordered orbit-by-orbit with shifts (0,0,0), (1,0,0), (0,1,0), (1,1,0).
pub fn base_points(spec: &SurfaceSpec) -> Result<Vec<TorusPoint>, ModelError> {
    let off = spec.tau.max_offdiag();
    if off > 1e-14 {
        return Err(ModelError::NotDiagonal { max_offdiag: off });
    }
    let t = [spec.tau.entry(0, 0), spec.tau.entry(1, 1), spec.tau.entry(2, 2)];
    let half = Complex64::new(0.5, 0.0);
    let odd = |i: usize| (Complex64::new(1.0, 0.0) + t[i]) * half;
    let reps: [[Complex64; 3]; 4] = [
        [odd(0), odd(1), odd(2)],
        [odd(0), half, half],
        [half, odd(1), half],
        [half, half, odd(2)],
    ];
    let shifts: [[f64; 3]; 4] = [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [1.0, 1.0, 0.0],
    ];
    let mut pts = Vec::with_capacity(16);
    for rep in reps.iter() {
        for shift in shifts.iter() {
            let z: [Complex64; 3] = [
                rep[0] + shift[0],
                rep[1] + shift[1],
                rep[2] + shift[2],
            ];
            let jet = surface_jet(spec, &z)?;
            pts.push(TorusPoint { z, residual: jet.value.norm() });
        }
    }
    Ok(pts)
}

/// Base points for a non-split period matrix: numerical continuation from
/// the diagonal part, following each closed-form point through a short
/// homotopy in the off-diagonal entries by Gauss-Newton on all four section
/// values.
pub fn base_points_continued(spec: &SurfaceSpec) -> Result<Vec<TorusPoint>, ModelError> {
    let source = spec.diagonal_part()?;
    let start_points = base_points(&source)?;
    let steps = [0.25, 0.5, 0.75, 1.0];
    let mut out = Vec::with_capacity(16);
    for (orbit, pt) in start_points.iter().enumerate() {
        let mut z: Vec<Complex64> = pt.z.to_vec();
        for &t in steps.iter() {
            let tau_t = blend_tau(&spec.tau, t)?;
            let spec_t = spec.with_tau(tau_t)?;
            z = gauss_newton_sections(&spec_t, &z).map_err(|_| {
                ModelError::ContinuationFailed { orbit, step: t }
            })?;
        }
        let jet = surface_jet(spec, &z)?;
        out.push(TorusPoint { z: [z[0], z[1], z[2]], residual: jet.value.norm() });
    }
    Ok(out)
}

fn blend_tau(tau: &PeriodMatrix, t: f64) -> Result<PeriodMatrix, ModelError> {
    let mut m = tau.matrix().clone();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                m[(i, j)] *= t;
            }
        }
    }
    Ok(PeriodMatrix::new(m)?)
}

/// Least-squares Newton on the four basis section values (all must vanish).
fn gauss_newton_sections(
    spec: &SurfaceSpec,
    start: &[Complex64],
) -> Result<Vec<Complex64>, ModelError> {
    let mut z: Vec<Complex64> = start.to_vec();
    for _ in 0..25 {
        let jets = basis_jets(spec, &z)?;
        let scale = jets[0].scale;
        let f = DVector::from_iterator(4, jets.iter().map(|j| j.value));
        let res = f.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if res < 1e-12 * scale {
            return Ok(z);
        }
        let jac = DMatrix::from_fn(4, 3, |r, c| jets[r].gradient[c]);
        let jh = jac.adjoint();
        let normal = &jh * &jac;
        let rhs = &jh * (-&f);
        let delta = normal
            .lu()
            .solve(&rhs)
            .ok_or(ModelError::Newton(newton::NewtonError::SingularJacobian))?;
        for i in 0..3 {
            z[i] += delta[i];
        }
    }
    let jets = basis_jets(spec, &z)?;
    let scale = jets[0].scale;
    let res = jets.iter().map(|j| j.value.norm()).fold(0.0, f64::max);
    if res < 1e-10 * scale {
        Ok(z)
    } else {
        Err(ModelError::Newton(newton::NewtonError::NoRootFound { best_residual: res }))
    }
}

// ---------------------------------------------------------------------------
// Elliptic pencils.
// ---------------------------------------------------------------------------

/// The two block coordinates complementary to axis `k`.
pub fn pencil_axes(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("axis index out of range"),
    }
}

/// Value and block gradient of a genus-two combination, with its scale.
#[derive(Debug, Clone)]
pub struct BlockJet {
    pub value: Complex64,
    pub grad: [Complex64; 2],
    pub scale: f64,
}

/// The pencil pair along axis `k`: coefficients split by the axis bit of
/// each label. Labels with axis bit 0 build `f_blk` (attached to the even
/// axis theta), labels with axis bit 1 build `g_blk` (attached to the odd
/// one): `f(z) = f_blk(z_i, z_j) theta[0](z_k) + g_blk(z_i, z_j)
/// theta[1/2](z_k)`.
pub fn pencil_pair(
    spec: &SurfaceSpec,
    k: usize,
    zi: Complex64,
    zj: Complex64,
) -> Result<(BlockJet, BlockJet), ModelError> {
    let (i, j) = pencil_axes(k);
    let coupling = spec.tau.entry(k, i).norm().max(spec.tau.entry(k, j).norm());
    if coupling > 1e-12 {
        return Err(ModelError::BlockNotSplit { axis: k, max_coupling: coupling });
    }
    let block_tau = spec.tau.block(&[i, j])?;
    let zb = [zi, zj];
    let mut f_val = Complex64::new(0.0, 0.0);
    let mut f_grad = [Complex64::new(0.0, 0.0); 2];
    let mut g_val = Complex64::new(0.0, 0.0);
    let mut g_grad = [Complex64::new(0.0, 0.0); 2];
    let mut scale = 1.0;
    for (label, &coeff) in LABELS.iter().zip(spec.coeffs().iter()) {
        let chi = ThetaCharacteristic::from_half_bits(&[label[i], label[j]]);
        let jet = theta_jet(&zb, &block_tau, &chi, &spec.policy)?;
        scale = jet.scale;
        if label[k] == 0 {
            f_val += coeff * jet.value;
            f_grad[0] += coeff * jet.gradient[0];
            f_grad[1] += coeff * jet.gradient[1];
        } else {
            g_val += coeff * jet.value;
            g_grad[0] += coeff * jet.gradient[0];
            g_grad[1] += coeff * jet.gradient[1];
        }
    }
    Ok((
        BlockJet { value: f_val, grad: f_grad, scale },
        BlockJet { value: g_val, grad: g_grad, scale },
    ))
}

/// Genus-one theta jet on the axis factor: characteristic `bit/2`, `b = 0`.
pub fn axis_theta(
    spec: &SurfaceSpec,
    k: usize,
    bit: u8,
    zk: Complex64,
) -> Result<ThetaJet, ModelError> {
    let tau_k = PeriodMatrix::scalar(spec.tau.entry(k, k))?;
    let chi = ThetaCharacteristic::from_half_bits(&[bit]);
    Ok(theta_jet(&[zk], &tau_k, &chi, &spec.policy)?)
}

/// The four two-torsion values on the elliptic factor with parameter `tau`:
/// 0, 1, tau/2, 1 + tau/2 (lattice generated by 2 and tau).
pub fn two_torsion_values(tau: Complex64) -> [Complex64; 4] {
    let half_tau = tau * 0.5;
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        half_tau,
        half_tau + 1.0,
    ]
}

// ---------------------------------------------------------------------------
// Genus-one determinants.
// ---------------------------------------------------------------------------

/// The odd-degree combination `eta = theta_0 theta_1' - theta_1 theta_0'` on
/// the elliptic factor with parameter `tau`, together with the Gaussian
/// scale at `z` (tolerances for eta are naturally relative to scale^2).
pub fn eta_section(
    z: Complex64,
    tau: Complex64,
    policy: &TruncationPolicy,
) -> Result<(Complex64, f64), ThetaError> {
    let pm = PeriodMatrix::scalar(tau)?;
    let j0 = theta_jet(&[z], &pm, &ThetaCharacteristic::from_half_bits(&[0]), policy)?;
    let j1 = theta_jet(&[z], &pm, &ThetaCharacteristic::from_half_bits(&[1]), policy)?;
    Ok((j0.value * j1.gradient[0] - j1.value * j0.gradient[0], j0.scale))
}

/// The two-point determinants on an elliptic factor:
/// `rho_j(z, w) = theta_j(z) theta_j'(w) - theta_j(w) theta_j'(z)` for
/// j = 0, 1, and the cross combination
/// `v3 = theta_0(z) theta_0(w) rho_1 - theta_1(z) theta_1(w) rho_0`.
pub fn rho_v3(
    z: Complex64,
    w: Complex64,
    tau: Complex64,
    policy: &TruncationPolicy,
) -> Result<(Complex64, Complex64, Complex64), ThetaError> {
    let pm = PeriodMatrix::scalar(tau)?;
    let c0 = ThetaCharacteristic::from_half_bits(&[0]);
    let c1 = ThetaCharacteristic::from_half_bits(&[1]);
    let z0 = theta_jet(&[z], &pm, &c0, policy)?;
    let z1 = theta_jet(&[z], &pm, &c1, policy)?;
    let w0 = theta_jet(&[w], &pm, &c0, policy)?;
    let w1 = theta_jet(&[w], &pm, &c1, policy)?;
    let rho0 = z0.value * w0.gradient[0] - w0.value * z0.gradient[0];
    let rho1 = z1.value * w1.gradient[0] - w1.value * z1.gradient[0];
    let v3 = z0.value * w0.value * rho1 - z1.value * w1.value * rho0;
    Ok((rho0, rho1, v3))
}

// ---------------------------------------------------------------------------
// Numerical invariants.
// ---------------------------------------------------------------------------

/// Surface invariants read off a polarization type `d_1 | d_2 | ... | d_g`:
/// geometric genus `prod(d) + g - 1`, irregularity `g`, and canonical degree
/// `g! * prod(d)`.
pub fn numerical_invariants(d: &[u64]) -> Result<(u64, u64, u64), ModelError> {
    if d.is_empty() {
        return Err(ModelError::NotDivisorChain { reason: "empty polarization type".into() });
    }
    if d.iter().any(|&x| x == 0) {
        return Err(ModelError::NotDivisorChain { reason: "zero entry".into() });
    }
    for w in d.windows(2) {
        if w[1] % w[0] != 0 {
            return Err(ModelError::NotDivisorChain {
                reason: format!("{} does not divide {}", w[0], w[1]),
            });
        }
    }
    let g = d.len() as u64;
    let prod: u64 = d.iter().product();
    let factorial: u64 = (1..=g).product();
    Ok((prod + g - 1, g, factorial * prod))
}
