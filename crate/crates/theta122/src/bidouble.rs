//! The companion family: a canonical curve in P^3 cut out by a quadric
//! constraint `x + y + z + t = 0`-style relations, carrying a bidouble
//! (Z/2 x Z/2) action by coordinate sign changes, its quotient cover, and
//! the six product sections whose invariance certificates are exact.
//!
//! The curve `C` is `{ sum of squares = 0, q(squares) = product }` in P^3
//! for a rational quadric `q`; the group acts by `a = (+,+,-,-)`,
//! `b = (+,-,+,-)` on the coordinates, and `psi` squares them. Sections
//! live on the product `C x C` in the eight variables
//! `X0, Y0, Z0, T0, X1, Y1, Z1, T1`.

use crate::poly::{MultiPoly, PolyError};
use crate::rng::{derive_seed, task_rng};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BidoubleError {
    #[error("the zero vector does not represent a projective point")]
    ZeroVector,
    #[error("invariance certificate failed for section {section} under {element}")]
    CertificateFailed { section: String, element: String },
    #[error("no curve point found after {attempts} attempts")]
    NoRootFound { attempts: usize },
    #[error("degenerate line restriction: {reason}")]
    DegenerateRestriction { reason: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

// ---------------------------------------------------------------------------
// The quadric and the curve.
// ---------------------------------------------------------------------------

/// A rational quadric `q(u1, u2, u3, u4)`, coefficients in the order
/// (11, 12, 13, 14, 22, 23, 24, 33, 34, 44).
#[derive(Debug, Clone)]
pub struct QuarticModel {
    pub q_coeffs: [BigRational; 10],
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuarticModel {
    /// A fixed generic member of the family: distinct diagonal entries and a
    /// few small cross terms.
    pub fn sample() -> Self {
        QuarticModel {
            q_coeffs: [
                rat(1, 1),  // 11
                rat(1, 3),  // 12
                rat(0, 1),  // 13
                rat(1, 7),  // 14
                rat(2, 1),  // 22
                rat(1, 11), // 23
                rat(0, 1),  // 24
                rat(3, 1),  // 33
                rat(1, 5),  // 34
                rat(5, 1),  // 44
            ],
        }
    }

    fn coeff(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let idx = match (a, b) {
            (0, 0) => 0,
            (0, 1) => 1,
            (0, 2) => 2,
            (0, 3) => 3,
            (1, 1) => 4,
            (1, 2) => 5,
            (1, 3) => 6,
            (2, 2) => 7,
            (2, 3) => 8,
            (3, 3) => 9,
            _ => unreachable!("index pair out of range"),
        };
        self.q_coeffs[idx].to_f64().expect("rational fits in f64")
    }

    /// Evaluates the quadric at a complex 4-vector.
    pub fn q_eval(&self, u: &[Complex64; 4]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in i..4 {
                acc += u[i] * u[j] * self.coeff(i, j);
            }
        }
        acc
    }

    /// Gradient of the quadric.
    pub fn q_grad(&self, u: &[Complex64; 4]) -> [Complex64; 4] {
        let mut g = [Complex64::new(0.0, 0.0); 4];
        for k in 0..4 {
            g[k] = u[k] * (2.0 * self.coeff(k, k));
            for j in 0..4 {
                if j != k {
                    g[k] += u[j] * self.coeff(k, j);
                }
            }
        }
        g
    }
}

/// The two defining residuals of the curve at a projective representative:
/// the sum of squares and the quadric-in-squares minus the coordinate
/// product.
pub fn curve_residuals(
    model: &QuarticModel,
    p: &[Complex64; 4],
) -> Result<(Complex64, Complex64), BidoubleError> {
    if p.iter().all(|c| c.norm() == 0.0) {
        return Err(BidoubleError::ZeroVector);
    }
    let squares = [p[0] * p[0], p[1] * p[1], p[2] * p[2], p[3] * p[3]];
    let r1 = squares[0] + squares[1] + squares[2] + squares[3];
    let r2 = model.q_eval(&squares) - p[0] * p[1] * p[2] * p[3];
    Ok((r1, r2))
}

/// The squaring cover `psi(P) = (X^2, Y^2, Z^2, T^2)`.
pub fn psi_cover(p: &[Complex64; 4]) -> Result<[Complex64; 4], BidoubleError> {
    if p.iter().all(|c| c.norm() == 0.0) {
        return Err(BidoubleError::ZeroVector);
    }
    Ok([p[0] * p[0], p[1] * p[1], p[2] * p[2], p[3] * p[3]])
}

// ---------------------------------------------------------------------------
// The group.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupLabel {
    Id,
    A,
    B,
    Ab,
}

impl GroupLabel {
    pub fn all() -> [GroupLabel; 4] {
        [GroupLabel::Id, GroupLabel::A, GroupLabel::B, GroupLabel::Ab]
    }

    /// Coordinate signs of the element: `a = (+,+,-,-)`, `b = (+,-,+,-)`.
    pub fn signs(&self) -> [i8; 4] {
        match self {
            GroupLabel::Id => [1, 1, 1, 1],
            GroupLabel::A => [1, 1, -1, -1],
            GroupLabel::B => [1, -1, 1, -1],
            GroupLabel::Ab => [1, -1, -1, 1],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupLabel::Id => "id",
            GroupLabel::A => "a",
            GroupLabel::B => "b",
            GroupLabel::Ab => "ab",
        }
    }
}

/// Applies a group element to a curve point.
pub fn apply_group(g: GroupLabel, p: &[Complex64; 4]) -> [Complex64; 4] {
    let s = g.signs();
    [
        p[0] * s[0] as f64,
        p[1] * s[1] as f64,
        p[2] * s[2] as f64,
        p[3] * s[3] as f64,
    ]
}

// ---------------------------------------------------------------------------
// Sections on the product.
// ---------------------------------------------------------------------------

pub const PRODUCT_VARS: [&str; 8] = ["X0", "Y0", "Z0", "T0", "X1", "Y1", "Z1", "T1"];

fn pvar(i: usize) -> MultiPoly {
    MultiPoly::var(8, i)
}

fn pm8(exps: &[(usize, u16)], c: i64) -> MultiPoly {
    MultiPoly::monomial(8, exps, c)
}

pub const SECTION_NAMES: [&str; 6] = [
    "eta01", "eta02", "eta12", "omega45", "omega67", "omega89",
];

/// The six product sections: three even differences of squared pairs and
/// three alternating quadrilinear forms.
pub fn section_polys() -> [MultiPoly; 6] {
    let eta = |u: usize, v: usize| -> MultiPoly {
        pm8(&[(u, 2), (v + 4, 2)], 1).sub(&pm8(&[(u + 4, 2), (v, 2)], 1))
    };
    let omega = |pair: [usize; 2], rest: [usize; 2]| -> MultiPoly {
        // X0-side product of `pair` on factor 0 with `rest` on factor 1,
        // minus the swapped arrangement.
        pm8(
            &[(pair[0], 1), (pair[1], 1), (rest[0] + 4, 1), (rest[1] + 4, 1)],
            1,
        )
        .sub(&pm8(
            &[(pair[0] + 4, 1), (pair[1] + 4, 1), (rest[0], 1), (rest[1], 1)],
            1,
        ))
    };
    [
        eta(0, 1),
        eta(0, 2),
        eta(1, 2),
        omega([0, 1], [2, 3]),
        omega([0, 2], [1, 3]),
        omega([0, 3], [1, 2]),
    ]
}

/// Numeric values of the six sections at a pair of points.
pub fn canonical_sections(
    p0: &[Complex64; 4],
    p1: &[Complex64; 4],
) -> Result<[Complex64; 6], BidoubleError> {
    if p0.iter().all(|c| c.norm() == 0.0) || p1.iter().all(|c| c.norm() == 0.0) {
        return Err(BidoubleError::ZeroVector);
    }
    let mut point = [Complex64::new(0.0, 0.0); 8];
    point[..4].copy_from_slice(p0);
    point[4..].copy_from_slice(p1);
    let polys = section_polys();
    let mut out = [Complex64::new(0.0, 0.0); 6];
    for (i, s) in polys.iter().enumerate() {
        out[i] = s.eval_complex(&point);
    }
    Ok(out)
}

/// The exact certificates: every section is invariant under the diagonal
/// group action and antisymmetric under swapping the two factors, and the
/// squaring cover is invariant under each group element. Single-factor
/// characters (the finer behaviour under the action on one factor only) are
/// reported as data.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    /// (section, element, holds) for the diagonal action.
    pub diagonal_invariant: Vec<(String, String, bool)>,
    /// (section, holds) for swap antisymmetry.
    pub swap_antisymmetric: Vec<(String, bool)>,
    /// (section, signs under a, b, ab applied to factor 0 only); 0 marks
    /// "neither symmetric nor antisymmetric".
    pub single_factor_characters: Vec<(String, [i8; 3])>,
    /// Squaring cover coordinates invariant under every element.
    pub cover_invariant: bool,
    pub all_passed: bool,
}

fn diagonal_signs(g: GroupLabel) -> [i8; 8] {
    let s = g.signs();
    [s[0], s[1], s[2], s[3], s[0], s[1], s[2], s[3]]
}

fn factor0_signs(g: GroupLabel) -> [i8; 8] {
    let s = g.signs();
    [s[0], s[1], s[2], s[3], 1, 1, 1, 1]
}

/// Builds the certificate report by exact polynomial arithmetic.
pub fn invariance_certificates() -> CertificateReport {
    let sections = section_polys();
    let swap: Vec<usize> = vec![4, 5, 6, 7, 0, 1, 2, 3];
    let mut diagonal_invariant = Vec::new();
    let mut swap_antisymmetric = Vec::new();
    let mut single_factor_characters = Vec::new();
    for (name, s) in SECTION_NAMES.iter().zip(sections.iter()) {
        for g in GroupLabel::all() {
            let moved = s.map_signs(&diagonal_signs(g));
            diagonal_invariant.push((
                name.to_string(),
                g.name().to_string(),
                moved.sub(s).is_zero(),
            ));
        }
        let swapped = s.permute_vars(&swap);
        swap_antisymmetric.push((name.to_string(), swapped.add(s).is_zero()));
        let mut chars = [0i8; 3];
        for (slot, g) in [GroupLabel::A, GroupLabel::B, GroupLabel::Ab]
            .into_iter()
            .enumerate()
        {
            let moved = s.map_signs(&factor0_signs(g));
            chars[slot] = if moved.sub(s).is_zero() {
                1
            } else if moved.add(s).is_zero() {
                -1
            } else {
                0
            };
        }
        single_factor_characters.push((name.to_string(), chars));
    }
    // The squaring cover: each coordinate square is fixed by every sign
    // pattern.
    let mut cover_invariant = true;
    for i in 0..4 {
        let sq = pvar(i).mul(&pvar(i));
        for g in GroupLabel::all() {
            if !sq.map_signs(&factor0_signs(g)).sub(&sq).is_zero() {
                cover_invariant = false;
            }
        }
    }
    let all_passed = diagonal_invariant.iter().all(|(_, _, ok)| *ok)
        && swap_antisymmetric.iter().all(|(_, ok)| *ok)
        && cover_invariant;
    CertificateReport {
        diagonal_invariant,
        swap_antisymmetric,
        single_factor_characters,
        cover_invariant,
        all_passed,
    }
}

/// Like [`invariance_certificates`] but promotes the first failed
/// certificate to an error.
pub fn certified_invariance() -> Result<CertificateReport, BidoubleError> {
    let report = invariance_certificates();
    for (section, element, ok) in &report.diagonal_invariant {
        if !ok {
            return Err(BidoubleError::CertificateFailed {
                section: section.clone(),
                element: element.clone(),
            });
        }
    }
    for (section, ok) in &report.swap_antisymmetric {
        if !ok {
            return Err(BidoubleError::CertificateFailed {
                section: section.clone(),
                element: "swap".to_string(),
            });
        }
    }
    if !report.cover_invariant {
        return Err(BidoubleError::CertificateFailed {
            section: "squaring cover".to_string(),
            element: "sign action".to_string(),
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Bitangency of the coordinate lines.
// ---------------------------------------------------------------------------

/// Tangency data of one coordinate line against the quartic.
#[derive(Debug, Clone)]
pub struct LineTangency {
    pub line: String,
    /// Exact certificate: on this line the quartic restricts to the square
    /// of the restricted quadric (rational arithmetic, no rounding).
    pub is_exact_square: bool,
    /// Exact discriminant test: the two contact parameters are distinct.
    pub distinct_contacts: bool,
    /// The two points where the line touches the curve.
    pub contact_points: [[Complex64; 4]; 2],
    /// Roots of the restricted quartic found numerically.
    pub roots: Vec<Complex64>,
    /// Worst gap inside the best pairing of the four roots into two doubles.
    /// Double roots split like the square root of coefficient noise, so
    /// values around 1e-8 to 1e-7 are the expected floor, not a defect.
    pub max_pair_distance: f64,
    pub is_tangent: bool,
}

/// Durand-Kerner root finder for a monic polynomial given by its full
/// coefficient list (constant first). Deterministic starts.
fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |w: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            acc = acc * w + monic[k];
        }
        acc
    };
    let base = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| base.powu(k as u32 + 1)).collect();
    for _ in 0..200 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= roots[k] - roots[j];
                }
            }
            let step = eval(roots[k]) / denom;
            roots[k] -= step;
            worst = worst.max(step.norm());
        }
        if worst < 1e-14 {
            break;
        }
    }
    roots
}

/// Coefficient of `s^k` in a univariate polynomial over the rationals.
fn univariate_coeff(p: &MultiPoly, k: u32) -> BigRational {
    let mut d = p.clone();
    let mut factorial = BigRational::from(BigInt::from(1));
    for i in 0..k {
        d = d.derivative(0);
        factorial *= BigRational::from(BigInt::from(i as i64 + 1));
    }
    d.eval(&[BigRational::from(BigInt::from(0))]) / factorial
}

/// The four coordinate polynomials of the line `{x_i = 0}` inside the
/// hyperplane `x + y + z + t = 0`, in the chart `(s, 1, -s - 1)` on the
/// free slots.
fn line_coordinates(zero_at: usize) -> [MultiPoly; 4] {
    let s = MultiPoly::var(1, 0);
    let one = MultiPoly::one(1);
    let zero = MultiPoly::zero(1);
    let slots: Vec<usize> = (0..4).filter(|&i| i != zero_at).collect();
    let mut out = [zero.clone(), zero.clone(), zero.clone(), zero];
    out[slots[0]] = s.clone();
    out[slots[1]] = one.clone();
    out[slots[2]] = s.neg().sub(&one);
    out
}

/// Restricts the quartic `q(x,y,z,t)^2 - xyzt` to the four coordinate lines
/// of the hyperplane `x + y + z + t = 0` and certifies each line is
/// bitangent. The certificate is exact: the coordinate product vanishes on
/// such a line, so the restriction must be the square of the restricted
/// quadric; rational arithmetic verifies that square identity and the
/// discriminant that separates the two contact points. Numeric quartic
/// roots illustrate the pairing into two doubles.
pub fn bitangency_probe(model: &QuarticModel) -> Result<Vec<LineTangency>, BidoubleError> {
    let names = ["x = 0", "y = 0", "z = 0", "t = 0"];
    let zero_rat = BigRational::from(BigInt::from(0));
    let mut out = Vec::with_capacity(4);
    for zero_at in 0..4 {
        let coords = line_coordinates(zero_at);
        // Restricted quadric Q(s) = q(line(s)) with exact coefficients.
        let mut q_line = MultiPoly::zero(1);
        let pair_index = |i: usize, j: usize| -> usize {
            match (i, j) {
                (0, 0) => 0,
                (0, 1) => 1,
                (0, 2) => 2,
                (0, 3) => 3,
                (1, 1) => 4,
                (1, 2) => 5,
                (1, 3) => 6,
                (2, 2) => 7,
                (2, 3) => 8,
                (3, 3) => 9,
                _ => unreachable!("ordered pair"),
            }
        };
        for i in 0..4 {
            for j in i..4 {
                let term = coords[i]
                    .mul(&coords[j])
                    .scale(&model.q_coeffs[pair_index(i, j)]);
                q_line = q_line.add(&term);
            }
        }
        // Restricted quartic R(s) = q(line)^2 - product(line).
        let mut product = MultiPoly::one(1);
        for c in coords.iter() {
            product = product.mul(c);
        }
        let restriction = q_line.pow(2).sub(&product);
        let is_exact_square = restriction.sub(&q_line.pow(2)).is_zero();
        if q_line.degree_in(0) != 2 {
            return Err(BidoubleError::DegenerateRestriction {
                reason: format!("restriction to {} is not a proper quadric", names[zero_at]),
            });
        }
        let c0 = univariate_coeff(&q_line, 0);
        let c1 = univariate_coeff(&q_line, 1);
        let c2 = univariate_coeff(&q_line, 2);
        let disc = &c1 * &c1 - BigRational::from(BigInt::from(4)) * &c2 * &c0;
        let distinct_contacts = disc != zero_rat;
        // Contact parameters from the quadratic formula, then the points.
        let to_c = |r: &BigRational| Complex64::new(r.to_f64().expect("fits f64"), 0.0);
        let disc_sqrt = to_c(&disc).sqrt();
        let two_a = 2.0 * to_c(&c2);
        let s_contacts = [(-to_c(&c1) + disc_sqrt) / two_a, (-to_c(&c1) - disc_sqrt) / two_a];
        let point_at = |s: Complex64| -> [Complex64; 4] {
            let mut p = [Complex64::new(0.0, 0.0); 4];
            for (i, c) in coords.iter().enumerate() {
                p[i] = c.eval_complex(&[s]);
            }
            p
        };
        let contact_points = [point_at(s_contacts[0]), point_at(s_contacts[1])];
        // Numeric illustration: quartic roots pair into two doubles.
        let coeffs: Vec<Complex64> = (0..=4)
            .map(|k| to_c(&univariate_coeff(&restriction, k)))
            .collect();
        let roots = polynomial_roots(&coeffs);
        let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
        let mut best = f64::INFINITY;
        for pairing in pairings.iter() {
            let worst = pairing
                .iter()
                .map(|&(a, b)| (roots[a] - roots[b]).norm())
                .fold(0.0, f64::max);
            best = best.min(worst);
        }
        let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        out.push(LineTangency {
            line: names[zero_at].to_string(),
            is_exact_square,
            distinct_contacts,
            contact_points,
            roots,
            max_pair_distance: best,
            is_tangent: is_exact_square && distinct_contacts && best < 1e-6 * scale,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Curve sampling and the rank probe.
// ---------------------------------------------------------------------------

/// Draws a curve point: fixes the first two coordinates at small random
/// rationals and Newton-solves the remaining pair from a ladder of
/// deterministic starts. Deterministic per seed.
pub fn sample_curve_point(
    model: &QuarticModel,
    seed: u64,
) -> Result<[Complex64; 4], BidoubleError> {
    let mut rng = task_rng(seed, 2);
    let attempts = 25;
    for _ in 0..attempts {
        // Random small rationals, kept away from zero.
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Complex64 {
            let num = rng.gen_range(3..=9) as f64;
            let den = rng.gen_range(2..=7) as f64;
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            Complex64::new(sign * num / den, 0.0)
        };
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let starts: [(f64, f64); 6] = [
            (0.9, 0.4),
            (-0.7, 1.1),
            (1.3, -0.8),
            (-1.1, -1.2),
            (0.3, 1.7),
            (1.9, 0.2),
        ];
        for &(re, im) in starts.iter() {
            let z0 = Complex64::new(re, im);
            let t0 = Complex64::new(im, -re) + Complex64::new(0.5, 0.3);
            let mut z = z0;
            let mut t = t0;
            let mut converged = false;
            for _ in 0..60 {
                let p = [x, y, z, t];
                let (r1, r2) = curve_residuals(model, &p)?;
                let res = r1.norm().max(r2.norm());
                if res < 1e-11 {
                    converged = true;
                    break;
                }
                let squares = [x * x, y * y, z * z, t * t];
                let qg = model.q_grad(&squares);
                // Jacobian in (z, t).
                let j11 = z * 2.0;
                let j12 = t * 2.0;
                let j21 = qg[2] * z * 2.0 - x * y * t;
                let j22 = qg[3] * t * 2.0 - x * y * z;
                let det = j11 * j22 - j12 * j21;
                if det.norm() < 1e-14 {
                    break;
                }
                let dz = (r1 * j22 - r2 * j12) / det;
                let dt = (r2 * j11 - r1 * j21) / det;
                z -= dz;
                t -= dt;
                if z.norm() > 50.0 || t.norm() > 50.0 {
                    break;
                }
            }
            if converged {
                return Ok([x, y, z, t]);
            }
        }
    }
    Err(BidoubleError::NoRootFound { attempts })
}

/// Summary of the Jacobian rank probe along sampled curve points.
#[derive(Debug, Clone)]
pub struct RankProbeReport {
    pub points: usize,
    /// Smallest ratio sigma_2 / sigma_1 of the 2 x 4 Jacobian seen.
    pub min_sigma_ratio: f64,
    /// Largest curve residual among the sampled points.
    pub max_residual: f64,
}

/// Samples `n` curve points and verifies the 2 x 4 Jacobian of the defining
/// residuals keeps rank 2 (smooth curve probe): requires
/// `sigma_2 / sigma_1 > 1e-6` everywhere.
pub fn jacobian_rank_probe(
    model: &QuarticModel,
    n: usize,
    seed: u64,
) -> Result<RankProbeReport, BidoubleError> {
    let mut min_ratio = f64::INFINITY;
    let mut max_residual: f64 = 0.0;
    for k in 0..n {
        let p = sample_curve_point(model, derive_seed(seed, k as u64))?;
        let (r1, r2) = curve_residuals(model, &p)?;
        max_residual = max_residual.max(r1.norm().max(r2.norm()));
        let squares = [p[0] * p[0], p[1] * p[1], p[2] * p[2], p[3] * p[3]];
        let qg = model.q_grad(&squares);
        let mut jac = DMatrix::from_element(2, 4, Complex64::new(0.0, 0.0));
        for i in 0..4 {
            jac[(0, i)] = p[i] * 2.0;
            let others: Complex64 = (0..4)
                .filter(|&j| j != i)
                .map(|j| p[j])
                .product();
            jac[(1, i)] = qg[i] * p[i] * 2.0 - others;
        }
        let svd = jac.svd(false, false);
        let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
        min_ratio = min_ratio.min(sv[1] / sv[0]);
    }
    Ok(RankProbeReport { points: n, min_sigma_ratio: min_ratio, max_residual })
}
