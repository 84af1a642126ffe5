//! Error-controlled evaluation of Riemann theta functions with
//! characteristics: values, gradients, Hessians, and lattice automorphy
//! factors.
//!
//! Convention: `theta[a,b](z, tau) = sum_n exp(pi i (n+a)^T tau (n+a)
//! + 2 pi i (n+a)^T (z+b))`, summed over `n` in `Z^g`. The sum is recentered
//! at the real minimizer of the Gaussian term and truncated by a conservative
//! shell bound, so the absolute error after factoring out the dominant
//! Gaussian scale stays below the policy's `target_tol`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Default absolute tail target (after factoring out the Gaussian scale).
pub const DEFAULT_TARGET_TOL: f64 = 1e-14;
/// Default cap on the summation radius.
pub const DEFAULT_MAX_RADIUS: usize = 36;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("imaginary part of the period matrix is not positive definite")]
    NonPositiveDefinite,
    #[error("period matrix is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },
    #[error(
        "tail bound cannot reach {target:e} within radius {max_radius} (best achieved {achieved:e})"
    )]
    RadiusExceeded { target: f64, max_radius: usize, achieved: f64 },
    #[error("vector does not decompose over the lattice (integrality defect {residual:e})")]
    NotInLattice { residual: f64 },
    #[error("invalid truncation policy: {0}")]
    BadPolicy(String),
}

/// A point of the Siegel upper half-space: symmetric complex matrix with
/// positive definite imaginary part.
#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    g: usize,
    entries: DMatrix<Complex64>,
    im_inv: DMatrix<f64>,
    lambda_min: f64,
}

impl PeriodMatrix {
    /// Validates symmetry (defect up to 1e-12 is symmetrized away) and
    /// positive definiteness of the imaginary part.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self, ThetaError> {
        let g = entries.nrows();
        assert!(g >= 1, "period matrix must be at least 1x1");
        if entries.ncols() != g {
            return Err(ThetaError::NotSymmetric { defect: f64::INFINITY });
        }
        let mut defect = 0.0f64;
        for i in 0..g {
            for j in (i + 1)..g {
                defect = defect.max((entries[(i, j)] - entries[(j, i)]).norm());
            }
        }
        if defect > 1e-12 {
            return Err(ThetaError::NotSymmetric { defect });
        }
        // Store an exactly symmetric copy.
        let mut sym = entries.clone();
        for i in 0..g {
            for j in (i + 1)..g {
                let avg = (entries[(i, j)] + entries[(j, i)]) * Complex64::new(0.5, 0.0);
                sym[(i, j)] = avg;
                sym[(j, i)] = avg;
            }
        }
        let im = sym.map(|e| e.im);
        let eig = nalgebra::SymmetricEigen::new(im.clone());
        let lambda_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(lambda_min > 0.0) {
            return Err(ThetaError::NonPositiveDefinite);
        }
        let im_inv = im
            .clone()
            .try_inverse()
            .ok_or(ThetaError::NonPositiveDefinite)?;
        Ok(PeriodMatrix { g, entries: sym, im_inv, lambda_min })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, ThetaError> {
        let g = rows.len();
        let mut m = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), g, "ragged period matrix rows");
            for (j, &e) in row.iter().enumerate() {
                m[(i, j)] = e;
            }
        }
        Self::new(m)
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self, ThetaError> {
        let g = diag.len();
        let mut m = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
        for (i, &e) in diag.iter().enumerate() {
            m[(i, i)] = e;
        }
        Self::new(m)
    }

    pub fn scalar(tau: Complex64) -> Result<Self, ThetaError> {
        Self::diagonal(&[tau])
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn im_inv(&self) -> &DMatrix<f64> {
        &self.im_inv
    }

    pub fn im_lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn max_offdiag(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.g {
            for j in 0..self.g {
                if i != j {
                    m = m.max(self.entries[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.max_offdiag() <= tol
    }

    /// The principal submatrix on the listed coordinates.
    pub fn block(&self, indices: &[usize]) -> Result<Self, ThetaError> {
        let k = indices.len();
        let mut m = DMatrix::from_element(k, k, Complex64::new(0.0, 0.0));
        for (i, &a) in indices.iter().enumerate() {
            for (j, &b) in indices.iter().enumerate() {
                m[(i, j)] = self.entries[(a, b)];
            }
        }
        Self::new(m)
    }
}

/// Rational characteristic pair (a, b), entries reduced modulo 1 into [0,1).
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCharacteristic {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl ThetaCharacteristic {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        assert_eq!(a.len(), b.len(), "characteristic halves must agree in length");
        let reduce = |v: Vec<f64>| -> Vec<f64> {
            v.into_iter()
                .map(|x| {
                    let r = x.rem_euclid(1.0);
                    if r == 1.0 {
                        0.0
                    } else {
                        r
                    }
                })
                .collect()
        };
        ThetaCharacteristic { a: reduce(a), b: reduce(b) }
    }

    pub fn zero(g: usize) -> Self {
        ThetaCharacteristic { a: vec![0.0; g], b: vec![0.0; g] }
    }

    /// Characteristic a = bits/2, b = 0, the family the surface machinery
    /// uses (label ijk means a = (i/2, j/2, k/2)).
    pub fn from_half_bits(a_bits: &[u8]) -> Self {
        Self::new(a_bits.iter().map(|&k| k as f64 / 2.0).collect(), vec![0.0; a_bits.len()])
    }

    /// General half-integer characteristic (both halves as bit vectors).
    pub fn half(a_bits: &[u8], b_bits: &[u8]) -> Self {
        Self::new(
            a_bits.iter().map(|&k| k as f64 / 2.0).collect(),
            b_bits.iter().map(|&k| k as f64 / 2.0).collect(),
        )
    }

    pub fn g(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }
}

/// Truncation control: absolute tail target (scale factored out) and a cap
/// on the summation radius.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    pub target_tol: f64,
    pub max_radius: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { target_tol: DEFAULT_TARGET_TOL, max_radius: DEFAULT_MAX_RADIUS }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<(), ThetaError> {
        if !(self.target_tol > 0.0) {
            return Err(ThetaError::BadPolicy("target_tol must be positive".into()));
        }
        if self.max_radius < 1 {
            return Err(ThetaError::BadPolicy("max_radius must be at least 1".into()));
        }
        Ok(())
    }
}

/// Value, gradient and Hessian of a theta function at a point, plus the
/// Gaussian scale `exp(pi y^T Y^-1 y)` that bounds the magnitude of every
/// term (the natural unit for tolerances).
#[derive(Debug, Clone)]
pub struct ThetaJet {
    pub value: Complex64,
    pub gradient: Vec<Complex64>,
    pub hessian: DMatrix<Complex64>,
    pub scale: f64,
}

/// The Gaussian magnitude unit `exp(pi (Im z)^T (Im tau)^-1 (Im z))`.
pub fn theta_scale(z: &[Complex64], tau: &PeriodMatrix) -> f64 {
    let g = tau.g();
    assert_eq!(z.len(), g, "point dimension mismatch");
    let y: Vec<f64> = z.iter().map(|w| w.im).collect();
    let mut quad = 0.0;
    for i in 0..g {
        for j in 0..g {
            quad += y[i] * tau.im_inv()[(i, j)] * y[j];
        }
    }
    (PI * quad).exp()
}

fn center_offsets(z: &[Complex64], tau: &PeriodMatrix, chi: &ThetaCharacteristic) -> (Vec<i64>, f64) {
    let g = tau.g();
    let y: Vec<f64> = z.iter().map(|w| w.im).collect();
    // y0 = Y^-1 y, the real shift of the Gaussian peak.
    let mut y0 = vec![0.0f64; g];
    for i in 0..g {
        for j in 0..g {
            y0[i] += tau.im_inv()[(i, j)] * y[j];
        }
    }
    let mut n0 = vec![0i64; g];
    let mut y0_inf = 0.0f64;
    for i in 0..g {
        n0[i] = (-y0[i] - chi.a()[i]).round() as i64;
        y0_inf = y0_inf.max(y0[i].abs());
    }
    (n0, y0_inf)
}

fn shell_count(g: usize, r: usize) -> f64 {
    if r == 0 {
        return 1.0;
    }
    let big = (2 * r + 1) as f64;
    let small = (2 * r - 1) as f64;
    big.powi(g as i32) - small.powi(g as i32)
}

fn shell_bound(g: usize, r: usize, y0_inf: f64, lambda_min: f64) -> f64 {
    let rho = r as f64 + y0_inf + 0.5;
    let gap = (r as f64 - (g as f64).sqrt() / 2.0).max(0.0);
    // Second-derivative factor dominates value and gradient factors.
    shell_count(g, r) * (2.0 * PI * rho).powi(2) * (-PI * lambda_min * gap * gap).exp()
}

/// The radius the adaptive engine would use at this point: the first shell
/// whose conservative bound drops below a tenth of the target while already
/// decaying, so the geometric remainder of the tail is covered.
pub fn adaptive_radius(
    z: &[Complex64],
    tau: &PeriodMatrix,
    chi: &ThetaCharacteristic,
    policy: &TruncationPolicy,
) -> Result<usize, ThetaError> {
    policy.validate()?;
    let g = tau.g();
    assert_eq!(z.len(), g, "point dimension mismatch");
    assert_eq!(chi.g(), g, "characteristic dimension mismatch");
    let (_, y0_inf) = center_offsets(z, tau, chi);
    let lambda_min = tau.im_lambda_min();
    let mut best = f64::INFINITY;
    let mut prev = f64::INFINITY;
    for r in 1..=policy.max_radius {
        let bound = shell_bound(g, r, y0_inf, lambda_min);
        best = best.min(bound);
        if bound < 0.1 * policy.target_tol && bound <= prev {
            return Ok(r);
        }
        prev = bound;
    }
    Err(ThetaError::RadiusExceeded {
        target: policy.target_tol,
        max_radius: policy.max_radius,
        achieved: best,
    })
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, x: f64) {
        // Neumaier's variant: compensation works whichever operand is larger.
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    fn total(&self) -> f64 {
        self.s + self.c
    }
}

#[derive(Clone, Copy, Default)]
struct KahanC {
    re: Kahan,
    im: Kahan,
}

impl KahanC {
    #[inline]
    fn add(&mut self, x: Complex64) {
        self.re.add(x.re);
        self.im.add(x.im);
    }

    #[inline]
    fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

/// Sums the theta jet over the fixed box `‖n - n0‖_inf <= radius` around the
/// adaptive center, with compensated accumulation. No truncation decision is
/// made here; see [`theta_jet`] for the error-controlled entry point.
pub fn theta_jet_with_radius(
    z: &[Complex64],
    tau: &PeriodMatrix,
    chi: &ThetaCharacteristic,
    radius: usize,
) -> ThetaJet {
    let g = tau.g();
    assert_eq!(z.len(), g, "point dimension mismatch");
    assert_eq!(chi.g(), g, "characteristic dimension mismatch");
    let (n0, _) = center_offsets(z, tau, chi);
    let r = radius as i64;

    let mut val = KahanC::default();
    let mut grad = vec![KahanC::default(); g];
    // Upper triangle of the Hessian, row-major.
    let mut hess = vec![KahanC::default(); g * (g + 1) / 2];

    let mut offset = vec![-r; g];
    let mut m = vec![0.0f64; g];
    loop {
        for i in 0..g {
            m[i] = (n0[i] + offset[i]) as f64 + chi.a()[i];
        }
        // pi i m^T tau m + 2 pi i m^T (z + b)
        let mut expo = Complex64::new(0.0, 0.0);
        for i in 0..g {
            expo += tau.entry(i, i) * (m[i] * m[i]);
            for j in (i + 1)..g {
                expo += tau.entry(i, j) * (2.0 * m[i] * m[j]);
            }
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for i in 0..g {
            lin += (z[i] + chi.b()[i]) * m[i];
        }
        let term = (Complex64::i() * PI * expo + Complex64::i() * (2.0 * PI) * lin).exp();

        val.add(term);
        for i in 0..g {
            grad[i].add(term * Complex64::new(0.0, 2.0 * PI * m[i]));
        }
        let mut idx = 0;
        for i in 0..g {
            for j in i..g {
                hess[idx].add(term * (-4.0 * PI * PI * m[i] * m[j]));
                idx += 1;
            }
        }

        // Odometer over the box.
        let mut carry = 0;
        loop {
            offset[carry] += 1;
            if offset[carry] <= r {
                break;
            }
            offset[carry] = -r;
            carry += 1;
            if carry == g {
                break;
            }
        }
        if carry == g {
            break;
        }
    }

    let mut hessian = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
    let mut idx = 0;
    for i in 0..g {
        for j in i..g {
            let h = hess[idx].total();
            hessian[(i, j)] = h;
            hessian[(j, i)] = h;
            idx += 1;
        }
    }
    ThetaJet {
        value: val.total(),
        gradient: grad.iter().map(|k| k.total()).collect(),
        hessian,
        scale: theta_scale(z, tau),
    }
}

/// Error-controlled theta jet: value, gradient, Hessian with absolute error
/// below `policy.target_tol` times the Gaussian scale.
pub fn theta_jet(
    z: &[Complex64],
    tau: &PeriodMatrix,
    chi: &ThetaCharacteristic,
    policy: &TruncationPolicy,
) -> Result<ThetaJet, ThetaError> {
    let radius = adaptive_radius(z, tau, chi, policy)?;
    Ok(theta_jet_with_radius(z, tau, chi, radius))
}

/// Error-controlled theta value.
pub fn theta_value(
    z: &[Complex64],
    tau: &PeriodMatrix,
    chi: &ThetaCharacteristic,
    policy: &TruncationPolicy,
) -> Result<Complex64, ThetaError> {
    Ok(theta_jet(z, tau, chi, policy)?.value)
}

/// Independent brute-force oracle: plain box summation of the defining
/// series around the origin (no recentering, no tail bound) with compensated
/// accumulation. Meant for cross-checking the adaptive engine in tests at
/// radius >= 30; do not use in hot paths.
pub fn brute_force_jet(
    z: &[Complex64],
    tau: &PeriodMatrix,
    chi: &ThetaCharacteristic,
    radius: usize,
) -> ThetaJet {
    let g = tau.g();
    assert_eq!(z.len(), g, "point dimension mismatch");
    assert_eq!(chi.g(), g, "characteristic dimension mismatch");
    let r = radius as i64;
    let mut val = KahanC::default();
    let mut grad = vec![KahanC::default(); g];
    let mut hess = vec![KahanC::default(); g * g];

    let mut n = vec![-r; g];
    loop {
        let m: Vec<f64> = (0..g).map(|i| n[i] as f64 + chi.a()[i]).collect();
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                quad += tau.entry(i, j) * (m[i] * m[j]);
            }
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for i in 0..g {
            lin += (z[i] + chi.b()[i]) * m[i];
        }
        let term = (Complex64::i() * PI * quad + Complex64::i() * (2.0 * PI) * lin).exp();
        val.add(term);
        for i in 0..g {
            grad[i].add(term * Complex64::new(0.0, 2.0 * PI * m[i]));
            for j in 0..g {
                hess[i * g + j].add(term * (-4.0 * PI * PI * m[i] * m[j]));
            }
        }
        let mut carry = 0;
        loop {
            n[carry] += 1;
            if n[carry] <= r {
                break;
            }
            n[carry] = -r;
            carry += 1;
            if carry == g {
                break;
            }
        }
        if carry == g {
            break;
        }
    }

    let hessian = DMatrix::from_fn(g, g, |i, j| hess[i * g + j].total());
    ThetaJet {
        value: val.total(),
        gradient: grad.iter().map(|k| k.total()).collect(),
        hessian,
        scale: theta_scale(z, tau),
    }
}

/// Solves `lam = tau m + 2 q` for integer vectors (m, q); the integrality
/// tolerance is 1e-9 on the rational solve.
pub fn lattice_decompose_t2(
    lam: &[Complex64],
    tau: &PeriodMatrix,
) -> Result<(Vec<i64>, Vec<i64>), ThetaError> {
    let g = tau.g();
    assert_eq!(lam.len(), g, "vector dimension mismatch");
    let tol = 1e-9;
    // Imaginary parts determine m: Im(lam) = (Im tau) m.
    let mut m_real = vec![0.0f64; g];
    for i in 0..g {
        for j in 0..g {
            m_real[i] += tau.im_inv()[(i, j)] * lam[j].im;
        }
    }
    let mut residual = 0.0f64;
    let m: Vec<i64> = m_real
        .iter()
        .map(|&x| {
            let r = x.round();
            residual = residual.max((x - r).abs());
            r as i64
        })
        .collect();
    if residual > tol {
        return Err(ThetaError::NotInLattice { residual });
    }
    // Remaining real part must be an even integer vector: 2q.
    let mut q = vec![0i64; g];
    for i in 0..g {
        let mut rest = lam[i].re;
        for j in 0..g {
            rest -= tau.entry(i, j).re * m[j] as f64;
        }
        let half = rest / 2.0;
        let r = half.round();
        residual = residual.max((half - r).abs());
        q[i] = r as i64;
    }
    if residual > tol {
        return Err(ThetaError::NotInLattice { residual });
    }
    Ok((m, q))
}

/// The factor of automorphy `phi_lam(z) = exp(-pi i m^T tau m - 2 pi i m^T z)`
/// for `lam = tau m + 2 q` on the lattice `tau Z^g + 2 Z^g`. Satisfies
/// `theta(z + lam) = phi_lam(z) theta(z)` for every characteristic (a, 0)
/// with `a` half-integer.
pub fn automorphy_factor(
    lam: &[Complex64],
    z: &[Complex64],
    tau: &PeriodMatrix,
) -> Result<Complex64, ThetaError> {
    let g = tau.g();
    assert_eq!(z.len(), g, "point dimension mismatch");
    let (m, _q) = lattice_decompose_t2(lam, tau)?;
    let mut quad = Complex64::new(0.0, 0.0);
    for i in 0..g {
        for j in 0..g {
            quad += tau.entry(i, j) * (m[i] as f64 * m[j] as f64);
        }
    }
    let mut lin = Complex64::new(0.0, 0.0);
    for i in 0..g {
        lin += z[i] * m[i] as f64;
    }
    Ok((-Complex64::i() * PI * quad - Complex64::i() * (2.0 * PI) * lin).exp())
}
