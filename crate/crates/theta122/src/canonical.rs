//! The canonical map of the polarized surface into P^5, its Gauss-map block,
//! differential rank reports, seeded sampling of surface points and of the
//! coordinate curves `W_j = {f = df/dz_j = 0}`, the degeneracy census along
//! the three elliptic pencils, and symmetry classification of point pairs.
//!
//! Coordinates of the canonical map, in order: the three non-principal theta
//! sections `theta_011, theta_101, theta_110`, then the three partial
//! derivatives `f_1, f_2, f_3` of the surface section. The last block alone
//! is the Gauss map.

use crate::models::{
    self, basis_jets, lattice_distance, pencil_pair, surface_jet, two_torsion_values,
    ModelError, SurfaceSpec, TorusPoint,
};
use crate::newton;
use crate::rng::task_rng;
use crate::theta::ThetaError;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CanonicalError {
    #[error("no root found after {attempts} attempts")]
    NoRootFound { attempts: usize },
    #[error("all coordinates of the map vanish at this point")]
    AllCoordinatesVanish,
    #[error("surface gradient vanishes at this point (norm {norm:e})")]
    GradientVanishes { norm: f64 },
    #[error(
        "census is not grid-stable on axis {axis}: {coarse} zeros at the coarse grid, {fine} at the fine one"
    )]
    CensusUnstable { axis: usize, coarse: usize, fine: usize },
    #[error("projective points have different dimensions ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// A point of projective space, stored with coordinates divided by the
/// largest modulus; `norm_scale` records that modulus so callers can judge
/// how far above the vanishing threshold the representative was.
#[derive(Debug, Clone)]
pub struct ProjectivePoint {
    pub coords: Vec<Complex64>,
    pub norm_scale: f64,
}

impl ProjectivePoint {
    pub fn new(raw: Vec<Complex64>) -> Result<Self, CanonicalError> {
        let max = raw.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 || !max.is_finite() {
            return Err(CanonicalError::AllCoordinatesVanish);
        }
        let coords = raw.into_iter().map(|c| c / max).collect();
        Ok(ProjectivePoint { coords, norm_scale: max })
    }

    /// Fubini-Study chordal distance, scale-free in both arguments:
    /// `sqrt(1 - |<p,q>|^2 / (|p|^2 |q|^2))`.
    pub fn chordal_distance(&self, other: &ProjectivePoint) -> Result<f64, CanonicalError> {
        if self.coords.len() != other.coords.len() {
            return Err(CanonicalError::DimensionMismatch {
                left: self.coords.len(),
                right: other.coords.len(),
            });
        }
        let mut inner = Complex64::new(0.0, 0.0);
        let mut np = 0.0;
        let mut nq = 0.0;
        for (p, q) in self.coords.iter().zip(other.coords.iter()) {
            inner += p * q.conj();
            np += p.norm_sqr();
            nq += q.norm_sqr();
        }
        let cos2 = inner.norm_sqr() / (np * nq);
        Ok((1.0 - cos2).max(0.0).sqrt())
    }
}

/// The canonical map `[theta_011 : theta_101 : theta_110 : f_1 : f_2 : f_3]`.
pub fn canonical_image(
    spec: &SurfaceSpec,
    z: &[Complex64],
) -> Result<ProjectivePoint, CanonicalError> {
    let jets = basis_jets(spec, z)?;
    let coeffs = spec.coeffs();
    let mut grad = [Complex64::new(0.0, 0.0); 3];
    for (jet, &coeff) in jets.iter().zip(coeffs.iter()) {
        for i in 0..3 {
            grad[i] += coeff * jet.gradient[i];
        }
    }
    let raw = vec![
        jets[1].value,
        jets[2].value,
        jets[3].value,
        grad[0],
        grad[1],
        grad[2],
    ];
    let scale = jets[0].scale;
    if raw.iter().all(|c| c.norm() < 1e-12 * scale) {
        return Err(CanonicalError::AllCoordinatesVanish);
    }
    ProjectivePoint::new(raw)
}

/// The Gauss block alone: `[f_1 : f_2 : f_3]`.
pub fn gauss_image(
    spec: &SurfaceSpec,
    z: &[Complex64],
) -> Result<ProjectivePoint, CanonicalError> {
    let jet = surface_jet(spec, z)?;
    let norm = jet.gradient.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if norm < 1e-8 * jet.scale {
        return Err(CanonicalError::GradientVanishes { norm });
    }
    ProjectivePoint::new(jet.gradient.clone())
}

/// Singular values of the first-order behaviour of the seven section
/// candidates at a point, and the induced rank estimate.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub singular_values: Vec<f64>,
    pub rank_estimate: usize,
    pub point: [Complex64; 3],
}

/// The 4 x 7 matrix whose columns are (value, d1, d2, d3) of the seven
/// functions `theta_000, theta_011, theta_101, theta_110, f_1, f_2, f_3`;
/// derivative rows of the `f_i` columns come from the Hessian of `f`.
/// Rank is counted against `1e-8` times the largest singular value.
pub fn diff_rank_matrix(
    spec: &SurfaceSpec,
    z: &[Complex64],
) -> Result<RankReport, CanonicalError> {
    let jets = basis_jets(spec, z)?;
    let coeffs = spec.coeffs();
    let mut grad = [Complex64::new(0.0, 0.0); 3];
    let mut hess = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (jet, &coeff) in jets.iter().zip(coeffs.iter()) {
        for i in 0..3 {
            grad[i] += coeff * jet.gradient[i];
            for j in 0..3 {
                hess[i][j] += coeff * jet.hessian[(i, j)];
            }
        }
    }
    let mut m = DMatrix::from_element(4, 7, Complex64::new(0.0, 0.0));
    for col in 0..4 {
        m[(0, col)] = jets[col].value;
        for row in 1..4 {
            m[(row, col)] = jets[col].gradient[row - 1];
        }
    }
    for axis in 0..3 {
        let col = 4 + axis;
        m[(0, col)] = grad[axis];
        for row in 1..4 {
            m[(row, col)] = hess[row - 1][axis];
        }
    }
    let svd = m.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    let rank = if sv[0] > 0.0 {
        sv.iter().filter(|&&s| s > 1e-8 * sv[0]).count()
    } else {
        0
    };
    Ok(RankReport {
        singular_values: sv,
        rank_estimate: rank,
        point: [z[0], z[1], z[2]],
    })
}

fn cell_draw(rng: &mut impl Rng, tau_kk: Complex64) -> Complex64 {
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    tau_kk * u + Complex64::new(2.0 * v, 0.0)
}

/// Evaluation for Newton closures: when an iterate escapes the region where
/// the truncation policy can deliver (huge imaginary parts), return a huge
/// residual with an identity Jacobian so the step is rejected instead of
/// panicking.
fn jet_or_poison(spec: &SurfaceSpec, z: &[Complex64]) -> crate::theta::ThetaJet {
    match surface_jet(spec, z) {
        Ok(jet) => jet,
        Err(_) => crate::theta::ThetaJet {
            value: Complex64::new(1e30, 0.0),
            gradient: vec![Complex64::new(1.0, 0.0); 3],
            hessian: DMatrix::identity(3, 3),
            scale: 1.0,
        },
    }
}

/// Draws a random surface point: `(z_1, z_2)` uniform in the fundamental
/// cell (coordinate chart `z_k = tau_kk u + 2 v`), then a one-dimensional
/// Newton solve for `z_3` from a fixed ladder of eight starts. Requires a
/// transverse root: `|df/dz_3| >= 1e-8 * scale`. Bit-for-bit deterministic
/// for a given seed.
pub fn sample_surface_point(spec: &SurfaceSpec, seed: u64) -> Result<TorusPoint, CanonicalError> {
    let mut rng = task_rng(seed, 0);
    let starts: [(f64, f64); 8] = [
        (0.125, 0.25),
        (0.375, 0.75),
        (0.625, 0.25),
        (0.875, 0.75),
        (0.125, 0.75),
        (0.375, 0.25),
        (0.625, 0.75),
        (0.875, 0.25),
    ];
    let attempts = 40;
    for _ in 0..attempts {
        let z1 = cell_draw(&mut rng, spec.tau.entry(0, 0));
        let z2 = cell_draw(&mut rng, spec.tau.entry(1, 1));
        for &(u, v) in starts.iter() {
            let z3_start = spec.tau.entry(2, 2) * u + Complex64::new(2.0 * v, 0.0);
            let eval = |z3: Complex64| -> (Complex64, Complex64, f64) {
                let jet = jet_or_poison(spec, &[z1, z2, z3]);
                (jet.value, jet.gradient[2], jet.scale)
            };
            let result = newton::solve_scalar(
                |z3| {
                    let (v, d, _) = eval(z3);
                    (v, d)
                },
                |z3| 1e-9 * eval(z3).2,
                |z3| 1e-8 * eval(z3).2,
                z3_start,
                newton::MAX_ITERATIONS,
            );
            if let Ok((root, residual)) = result {
                return Ok(TorusPoint { z: [z1, z2, root], residual });
            }
        }
    }
    Err(CanonicalError::NoRootFound { attempts })
}

/// Draws a point of the coordinate curve `W_j = {f = f_j = 0}`: freezes the
/// coordinate two past `j` (cyclically) at a random cell value and runs a
/// two-dimensional Newton solve in the remaining pair from a deterministic
/// grid of starts. Deterministic per seed.
pub fn sample_w(
    spec: &SurfaceSpec,
    j: usize,
    seed: u64,
) -> Result<TorusPoint, CanonicalError> {
    assert!(j < 3, "axis index out of range");
    let p = (j + 1) % 3;
    let frozen = (j + 2) % 3;
    let mut rng = task_rng(seed, 0);
    let grid = [1.0 / 6.0, 0.5, 5.0 / 6.0];
    let vs = [0.25, 0.75];
    let attempts = 10;
    for _ in 0..attempts {
        let z_frozen = cell_draw(&mut rng, spec.tau.entry(frozen, frozen));
        for &up in grid.iter() {
            for &uj in grid.iter() {
                for &vp in vs.iter() {
                    for &vj in vs.iter() {
                        let start = [
                            spec.tau.entry(p, p) * up + Complex64::new(2.0 * vp, 0.0),
                            spec.tau.entry(j, j) * uj + Complex64::new(2.0 * vj, 0.0),
                        ];
                        let assemble = |vars: &[Complex64]| -> [Complex64; 3] {
                            let mut z = [Complex64::new(0.0, 0.0); 3];
                            z[p] = vars[0];
                            z[j] = vars[1];
                            z[frozen] = z_frozen;
                            z
                        };
                        let outcome = newton::solve(
                            |vars| {
                                let z = assemble(vars);
                                let jet = jet_or_poison(spec, &z);
                                let f = DVector::from_vec(vec![jet.value, jet.gradient[j]]);
                                let jac = DMatrix::from_row_slice(
                                    2,
                                    2,
                                    &[
                                        jet.gradient[p],
                                        jet.gradient[j],
                                        jet.hessian[(j, p)],
                                        jet.hessian[(j, j)],
                                    ],
                                );
                                (f, jac)
                            },
                            |vars| {
                                let z = assemble(vars);
                                1e-9 * models::surface_scale(spec, &z)
                            },
                            &start,
                            newton::MAX_ITERATIONS,
                        );
                        if let Ok(out) = outcome {
                            let z = assemble(&out.z);
                            return Ok(TorusPoint { z, residual: out.residual });
                        }
                    }
                }
            }
        }
    }
    Err(CanonicalError::NoRootFound { attempts })
}

/// Finds a point of the intersection `W_i ∩ W_j` (a finite set): a
/// three-dimensional Newton solve on `(f, f_i, f_j)` from a deterministic
/// grid of starts with seeded jitter. Deterministic per seed.
pub fn sample_w_pair(
    spec: &SurfaceSpec,
    i: usize,
    j: usize,
    seed: u64,
) -> Result<TorusPoint, CanonicalError> {
    let roots = w_pair_roots(spec, i, j, seed, 3)?;
    roots
        .into_iter()
        .next()
        .ok_or(CanonicalError::NoRootFound { attempts: 27 })
}

/// All distinct roots of `(f, f_i, f_j)` found from an `n^3` grid of starts
/// with seeded jitter, deduplicated modulo the period lattice. The cluster
/// count is grid-stable for the surfaces in range (used by the census-style
/// stability checks).
pub fn w_pair_roots(
    spec: &SurfaceSpec,
    i: usize,
    j: usize,
    seed: u64,
    n: usize,
) -> Result<Vec<TorusPoint>, CanonicalError> {
    assert!(i < 3 && j < 3 && i != j, "need two distinct axes");
    let mut rng = task_rng(seed, 1);
    let mut starts = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let jitter: [f64; 6] = [
                    rng.gen::<f64>() * 0.08,
                    rng.gen::<f64>() * 0.08,
                    rng.gen::<f64>() * 0.08,
                    rng.gen::<f64>() * 0.08,
                    rng.gen::<f64>() * 0.08,
                    rng.gen::<f64>() * 0.08,
                ];
                let coords: Vec<Complex64> = (0..3)
                    .map(|axis| {
                        let u = (([a, b, c][axis] as f64) + 0.5) / n as f64 + jitter[axis];
                        let v = 0.25 + jitter[3 + axis];
                        spec.tau.entry(axis, axis) * u + Complex64::new(2.0 * v, 0.0)
                    })
                    .collect();
                starts.push(coords);
            }
        }
    }
    let found: Vec<TorusPoint> = starts
        .par_iter()
        .filter_map(|start| {
            let outcome = newton::solve(
                |z| {
                    let jet = jet_or_poison(spec, z);
                    let f = DVector::from_vec(vec![
                        jet.value,
                        jet.gradient[i],
                        jet.gradient[j],
                    ]);
                    let mut jac = DMatrix::from_element(3, 3, Complex64::new(0.0, 0.0));
                    for col in 0..3 {
                        jac[(0, col)] = jet.gradient[col];
                        jac[(1, col)] = jet.hessian[(i, col)];
                        jac[(2, col)] = jet.hessian[(j, col)];
                    }
                    (f, jac)
                },
                |z| 1e-9 * models::surface_scale(spec, z),
                start,
                newton::MAX_ITERATIONS,
            );
            outcome.ok().map(|out| TorusPoint {
                z: [out.z[0], out.z[1], out.z[2]],
                residual: out.residual,
            })
        })
        .collect();
    Ok(dedup_mod_lattice(found, &spec.tau, true))
}

/// Deduplicates points modulo the period lattice (cluster radius 1e-6),
/// keeping the first representative in a deterministic sort order.
fn dedup_mod_lattice(
    mut pts: Vec<TorusPoint>,
    tau: &crate::theta::PeriodMatrix,
    include_diag: bool,
) -> Vec<TorusPoint> {
    let key = |p: &TorusPoint| -> Vec<i64> {
        p.z.iter()
            .flat_map(|c| [(c.re * 1e7).round() as i64, (c.im * 1e7).round() as i64])
            .collect()
    };
    pts.sort_by(|a, b| key(a).cmp(&key(b)));
    let mut reps: Vec<TorusPoint> = Vec::new();
    for p in pts {
        let dup = reps
            .iter()
            .any(|r| lattice_distance(&p.z, &r.z, tau, include_diag) < 1e-6);
        if !dup {
            reps.push(p);
        }
    }
    reps
}

/// One degenerate point found by the census, with its rank report.
#[derive(Debug, Clone)]
pub struct CensusPoint {
    pub axis: usize,
    pub z: [Complex64; 3],
    pub rank: RankReport,
}

/// Outcome of the pencil degeneracy census.
#[derive(Debug, Clone)]
pub struct CensusReport {
    /// Distinct common zeros of the pencil pair on each block torus.
    pub block_zero_counts: [usize; 3],
    /// All degeneracy points modulo the full period lattice.
    pub points: Vec<CensusPoint>,
    /// How many census points are fixed by global negation.
    pub negation_fixed: usize,
    /// How many two-element orbits global negation cuts the census into.
    pub antipodal_pairs: usize,
}

/// Census of canonical-map degeneracy points: for each axis `k`, the common
/// zeros of the pencil pair `(f_blk, g_blk)` on the complementary block
/// torus (found from a dense grid of Newton starts, with a finer grid rerun
/// as a stability control), combined with each two-torsion value of `z_k`.
/// Points are deduplicated modulo the full period lattice and each gets a
/// differential rank report. Negation statistics summarize how the census
/// sits under the elliptic involution.
pub fn rank_census(spec: &SurfaceSpec) -> Result<CensusReport, CanonicalError> {
    let mut all: Vec<(usize, [Complex64; 3])> = Vec::new();
    let mut block_zero_counts = [0usize; 3];
    for k in 0..3 {
        let coarse = block_zeros(spec, k, 5)?;
        let fine = block_zeros(spec, k, 7)?;
        if coarse.len() != fine.len() {
            return Err(CanonicalError::CensusUnstable {
                axis: k,
                coarse: coarse.len(),
                fine: fine.len(),
            });
        }
        block_zero_counts[k] = coarse.len();
        let torsion = two_torsion_values(spec.tau.entry(k, k));
        let (i, j) = models::pencil_axes(k);
        for zero in coarse.iter() {
            for &t in torsion.iter() {
                let mut z = [Complex64::new(0.0, 0.0); 3];
                z[i] = zero[0];
                z[j] = zero[1];
                z[k] = t;
                all.push((k, z));
            }
        }
    }
    // Deduplicate modulo the full lattice, keeping generation order.
    let mut reps: Vec<(usize, [Complex64; 3])> = Vec::new();
    for (axis, z) in all {
        let dup = reps
            .iter()
            .any(|(_, r)| lattice_distance(&z, r, &spec.tau, true) < 1e-6);
        if !dup {
            reps.push((axis, z));
        }
    }
    let points: Vec<CensusPoint> = reps
        .par_iter()
        .map(|(axis, z)| {
            diff_rank_matrix(spec, z).map(|rank| CensusPoint { axis: *axis, z: *z, rank })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut negation_fixed = 0usize;
    let mut paired = vec![false; points.len()];
    let mut antipodal_pairs = 0usize;
    for (idx, pt) in points.iter().enumerate() {
        let neg: Vec<Complex64> = pt.z.iter().map(|c| -c).collect();
        if lattice_distance(&neg, &pt.z, &spec.tau, true) < 1e-8 {
            negation_fixed += 1;
            continue;
        }
        if paired[idx] {
            continue;
        }
        for (jdx, other) in points.iter().enumerate().skip(idx + 1) {
            if !paired[jdx]
                && lattice_distance(&neg, &other.z, &spec.tau, true) < 1e-8
            {
                paired[idx] = true;
                paired[jdx] = true;
                antipodal_pairs += 1;
                break;
            }
        }
    }
    Ok(CensusReport { block_zero_counts, points, negation_fixed, antipodal_pairs })
}

/// Common zeros of the axis-`k` pencil pair on its block torus, from an
/// `n^4` grid of Newton starts (grid centers in cell coordinates), after
/// deduplication modulo the block lattice.
fn block_zeros(
    spec: &SurfaceSpec,
    k: usize,
    n: usize,
) -> Result<Vec<[Complex64; 2]>, CanonicalError> {
    let (i, j) = models::pencil_axes(k);
    let block_tau = spec.tau.block(&[i, j])?;
    let mut starts = Vec::with_capacity(n * n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let cu = |t: usize| (t as f64 + 0.5) / n as f64;
                    let zi = spec.tau.entry(i, i) * cu(a) + Complex64::new(2.0 * cu(b), 0.0);
                    let zj = spec.tau.entry(j, j) * cu(c) + Complex64::new(2.0 * cu(d), 0.0);
                    starts.push([zi, zj]);
                }
            }
        }
    }
    let roots: Vec<TorusPoint> = starts
        .par_iter()
        .filter_map(|start| {
            let outcome = newton::solve(
                |vars| {
                    match pencil_pair(spec, k, vars[0], vars[1]) {
                        Ok((fb, gb)) => {
                            let f = DVector::from_vec(vec![fb.value, gb.value]);
                            let jac = DMatrix::from_row_slice(
                                2,
                                2,
                                &[fb.grad[0], fb.grad[1], gb.grad[0], gb.grad[1]],
                            );
                            (f, jac)
                        }
                        Err(_) => (
                            DVector::from_element(2, Complex64::new(1e30, 0.0)),
                            DMatrix::identity(2, 2),
                        ),
                    }
                },
                |vars| {
                    let zb = [vars[0], vars[1]];
                    1e-10 * crate::theta::theta_scale(&zb, &block_tau)
                },
                start,
                newton::MAX_ITERATIONS,
            );
            outcome.ok().map(|out| TorusPoint {
                z: [out.z[0], out.z[1], Complex64::new(0.0, 0.0)],
                residual: out.residual,
            })
        })
        .collect();
    // Reuse the torus-point dedup with a two-coordinate embedding.
    let two: Vec<TorusPoint> = roots
        .into_iter()
        .map(|p| TorusPoint { z: p.z, residual: p.residual })
        .collect();
    let deduped = dedup_block(two, &block_tau);
    Ok(deduped.into_iter().map(|p| [p.z[0], p.z[1]]).collect())
}

fn dedup_block(mut pts: Vec<TorusPoint>, block_tau: &crate::theta::PeriodMatrix) -> Vec<TorusPoint> {
    let key = |p: &TorusPoint| -> Vec<i64> {
        p.z[..2]
            .iter()
            .flat_map(|c| [(c.re * 1e7).round() as i64, (c.im * 1e7).round() as i64])
            .collect()
    };
    pts.sort_by(|a, b| key(a).cmp(&key(b)));
    let mut reps: Vec<TorusPoint> = Vec::new();
    for p in pts {
        let za = [p.z[0], p.z[1]];
        let dup = reps.iter().any(|r| {
            let zb = [r.z[0], r.z[1]];
            lattice_distance(&za, &zb, block_tau, false) < 1e-6
        });
        if !dup {
            reps.push(p);
        }
    }
    reps
}

/// A candidate symmetry of the threefold preserving the section pencil:
/// coordinatewise sign flips composed with half-integer translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryElement {
    pub signs: [i8; 3],
    pub shift: [u8; 3],
}

/// All 64 candidate symmetries `z -> (s_1 z_1 + t_1, s_2 z_2 + t_2,
/// s_3 z_3 + t_3)` with signs in {-1, +1} and integer shifts in {0, 1} that
/// map `p` to `q` modulo the full period lattice (tolerance 1e-8).
pub fn orbit_classify(
    spec: &SurfaceSpec,
    p: &[Complex64],
    q: &[Complex64],
) -> Vec<SymmetryElement> {
    let mut hits = Vec::new();
    for mask in 0..8u8 {
        let signs: [i8; 3] = [
            if mask & 1 == 0 { 1 } else { -1 },
            if mask & 2 == 0 { 1 } else { -1 },
            if mask & 4 == 0 { 1 } else { -1 },
        ];
        for shift_mask in 0..8u8 {
            let shift: [u8; 3] = [
                shift_mask & 1,
                (shift_mask >> 1) & 1,
                (shift_mask >> 2) & 1,
            ];
            let image: Vec<Complex64> = (0..3)
                .map(|idx| p[idx] * signs[idx] as f64 + shift[idx] as f64)
                .collect();
            if lattice_distance(&image, q, &spec.tau, true) < 1e-8 {
                hits.push(SymmetryElement { signs, shift });
            }
        }
    }
    hits
}
