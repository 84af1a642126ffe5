//! Acceptance suite: thirteen numbered criteria, one test each, asserted at
//! the stated tolerances. Each test prints a single summary line; failures
//! carry the measured values and, where an exact certificate exists, the
//! certified form of the identity in question.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use theta122::canonical;
use theta122::legendre;
use theta122::models::{self, SurfaceSpec};
use theta122::report::RunConfig;
use theta122::rng::{derive_seed, task_rng};
use theta122::runner;
use theta122::theta::{
    automorphy_factor, theta_jet, PeriodMatrix, ThetaCharacteristic, TruncationPolicy,
};

fn default_spec() -> SurfaceSpec {
    RunConfig::default().surface_spec().expect("default spec")
}

fn policy() -> TruncationPolicy {
    TruncationPolicy::default()
}

/// A point in a moderate fundamental cell of `C^g / (tau Z^g + 2 Z^g)`.
fn cell_point(rng: &mut ChaCha8Rng, tau: &PeriodMatrix) -> Vec<Complex64> {
    let g = tau.g();
    let vs: Vec<f64> = (0..g).map(|_| rng.gen::<f64>() - 0.5).collect();
    (0..g)
        .map(|i| {
            let mut z = Complex64::new(2.0 * (rng.gen::<f64>() - 0.5), 0.0);
            for (j, v) in vs.iter().enumerate() {
                z += tau.entry(i, j) * *v;
            }
            z
        })
        .collect()
}

fn scalar_cell_point(rng: &mut ChaCha8Rng, tau: Complex64) -> Complex64 {
    let u: f64 = rng.gen::<f64>() * 0.9 + 0.05;
    let v: f64 = rng.gen::<f64>() * 0.9 + 0.05;
    tau * v + Complex64::new(2.0 * u, 0.0)
}

#[test]
fn criterion_01_theta_functional_equation() {
    let pol = policy();
    let chi0 = |g: usize| ThetaCharacteristic::zero(g);
    let full = default_spec().tau;
    let taus: Vec<PeriodMatrix> = vec![
        PeriodMatrix::scalar(full.entry(1, 1)).unwrap(),
        full.block(&[0, 1]).unwrap(),
        full.clone(),
    ];
    let mut max_defect: f64 = 0.0;
    let mut transforms = 0usize;
    for tau in &taus {
        let g = tau.g();
        let chi = chi0(g);
        for gen_index in 0..2 * g {
            let mut rng = task_rng(1, 11_000 + 10 * g as u64 + gen_index as u64);
            let axis = gen_index % g;
            // Generators tau e_axis (full column) and 2 e_axis.
            let lam: Vec<Complex64> = if gen_index < g {
                (0..g).map(|i| tau.entry(i, axis)).collect()
            } else {
                (0..g)
                    .map(|i| Complex64::new(if i == axis { 2.0 } else { 0.0 }, 0.0))
                    .collect()
            };
            for _ in 0..100 {
                let z = cell_point(&mut rng, tau);
                let shifted: Vec<Complex64> =
                    z.iter().zip(lam.iter()).map(|(a, b)| a + b).collect();
                let lhs = theta_jet(&shifted, tau, &chi, &pol).unwrap().value;
                let phi = automorphy_factor(&lam, &z, tau).unwrap();
                let rhs = phi * theta_jet(&z, tau, &chi, &pol).unwrap().value;
                let denom = lhs.norm().max(rhs.norm());
                max_defect = max_defect.max((lhs - rhs).norm() / denom);
                transforms += 1;
            }
        }
    }
    println!(
        "criterion 01 (theta functional equation, genus 1..3): \
         max relative defect {:.3e} over {} lattice transforms [tolerance 1e-9]",
        max_defect, transforms
    );
    assert!(
        max_defect < 1e-9,
        "functional equation defect {:.3e} exceeds 1e-9",
        max_defect
    );
}

#[test]
fn criterion_02_parity_structure() {
    let pol = policy();
    let full = default_spec().tau;
    let mut max_odd: f64 = 0.0;
    for tau1 in [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 1.3),
        Complex64::new(0.0, 0.7),
        Complex64::new(0.3, 0.9),
    ] {
        let pm = PeriodMatrix::scalar(tau1).unwrap();
        let chi = ThetaCharacteristic::half(&[1], &[1]);
        let jet = theta_jet(&[Complex64::new(0.0, 0.0)], &pm, &chi, &pol).unwrap();
        max_odd = max_odd.max(jet.value.norm());
    }
    let mut max_grad: f64 = 0.0;
    let zero = [Complex64::new(0.0, 0.0); 3];
    for bits in models::LABELS.iter() {
        let chi = ThetaCharacteristic::from_half_bits(bits);
        let jet = theta_jet(&zero, &full, &chi, &pol).unwrap();
        let gnorm = jet.gradient.iter().map(|c| c.norm()).fold(0.0, f64::max);
        max_grad = max_grad.max(gnorm / jet.scale);
    }
    println!(
        "criterion 02 (parity structure): odd value at origin {:.3e} \
         [tolerance 1e-12], even-section gradient {:.3e} of scale [tolerance 1e-10]",
        max_odd, max_grad
    );
    assert!(max_odd < 1e-12, "odd theta at origin is {:.3e}", max_odd);
    assert!(
        max_grad < 1e-10,
        "even-section gradient at origin is {:.3e} of scale",
        max_grad
    );
}

#[test]
fn criterion_03_derivative_fidelity() {
    let pol = policy();
    let tau = default_spec().tau;
    let h = 1e-5;
    let mut rng = task_rng(1, 13_000);
    let mut max_err: f64 = 0.0;
    for pt in 0..100 {
        let chi = ThetaCharacteristic::from_half_bits(&models::LABELS[pt % 4]);
        let z = cell_point(&mut rng, &tau);
        let jet = theta_jet(&z, &tau, &chi, &pol).unwrap();
        for i in 0..3 {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[i] += h;
            zm[i] -= h;
            let jp = theta_jet(&zp, &tau, &chi, &pol).unwrap();
            let jm = theta_jet(&zm, &tau, &chi, &pol).unwrap();
            let grad_fd = (jp.value - jm.value) / (2.0 * h);
            max_err = max_err.max((grad_fd - jet.gradient[i]).norm() / jet.scale);
            for j in 0..3 {
                let hess_fd = (jp.gradient[j] - jm.gradient[j]) / (2.0 * h);
                max_err = max_err.max((hess_fd - jet.hessian[(j, i)]).norm() / jet.scale);
            }
        }
    }
    println!(
        "criterion 03 (derivative fidelity): gradient and Hessian agree with \
         central differences (h = 1e-5) to {:.3e} of scale at 100 points \
         [tolerance 1e-6]",
        max_err
    );
    assert!(max_err < 1e-6, "finite-difference defect {:.3e}", max_err);
}

#[test]
fn criterion_04_base_locus() {
    let spec0 = default_spec();
    let mut max_res: f64 = 0.0;
    for trial in 0..5 {
        let mut rng = task_rng(1, 14_000 + trial);
        let mut draw = || {
            Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
                + Complex64::new(0.4, 0.0)
        };
        let spec = SurfaceSpec::new(spec0.tau.clone(), draw(), draw(), draw(), policy())
            .expect("random coefficient spec");
        let pts = models::base_points(&spec).unwrap();
        assert_eq!(pts.len(), 16, "expected sixteen base points");
        for p in &pts {
            let jets = models::basis_jets(&spec, &p.z).unwrap();
            for jet in &jets {
                max_res = max_res.max(jet.value.norm() / jet.scale);
            }
        }
        // Distinctness modulo the full period lattice, unit shift included.
        let mut min_gap = f64::INFINITY;
        for i in 0..16 {
            for j in (i + 1)..16 {
                min_gap = min_gap.min(models::lattice_distance(
                    &pts[i].z, &pts[j].z, &spec.tau, true,
                ));
            }
        }
        assert!(
            min_gap > 1e-3,
            "base points collide modulo the lattice (gap {:.3e})",
            min_gap
        );
    }
    println!(
        "criterion 04 (base locus): sixteen distinct points annihilate all four \
         basis sections for five coefficient triples, worst residual {:.3e} of \
         scale [tolerance 1e-9]",
        max_res
    );
    assert!(max_res < 1e-9, "base point residual {:.3e}", max_res);
}

#[test]
fn criterion_05_numerical_invariants() {
    let inv = models::numerical_invariants(&[1, 2, 2]).unwrap();
    println!(
        "criterion 05 (numerical invariants): polarization (1,2,2) gives \
         p_g = {}, q = {}, K^2 = {} [expected (6, 3, 24)]",
        inv.0, inv.1, inv.2
    );
    assert_eq!(inv, (6, 3, 24));
}

#[test]
fn criterion_06_elliptic_coordinate_relations() {
    let pol = policy();
    let spec = default_spec();
    let mut max_rel: f64 = 0.0;
    let mut max_torsion: f64 = 0.0;
    let mut min_floor = f64::INFINITY;
    let mut samples = 0usize;
    for k in 0..3 {
        let tau = spec.tau.entry(k, k);
        let model = legendre::LegendreModel::new(tau, pol.clone()).unwrap();
        assert_eq!(
            model.normalization.winner, "rescaled",
            "recorded normalization should win on factor {}",
            k
        );
        let a = model.a_param;
        let mut rng = task_rng(1, 16_000 + k as u64);
        let mut done = 0usize;
        let mut guard = 0usize;
        while done < 34 && guard < 200 {
            guard += 1;
            let z = scalar_cell_point(&mut rng, tau);
            let probes = [z, z + 2.0, z + tau, z + 1.0, -z];
            let vals: Result<Vec<Complex64>, _> = probes.iter().map(|&w| model.x(w)).collect();
            let (vals, xp) = match (vals, model.x_prime(z)) {
                (Ok(v), Ok(d)) => (v, d),
                _ => continue,
            };
            let unit = vals[0].norm().max(1.0);
            max_rel = max_rel.max((vals[1] - vals[0]).norm() / unit);
            max_rel = max_rel.max((vals[2] - vals[0]).norm() / unit);
            max_rel = max_rel.max((vals[3] + vals[0]).norm() / unit);
            max_rel = max_rel.max((vals[4] - vals[0]).norm() / unit);
            // Differential relation: (kappa L')^2 = (L^2 - 1)(L^2 - a^2).
            let rhs = model.curve_rhs(vals[0]);
            let y = model.kappa * xp;
            let lhs = y * y;
            let unit_d = lhs.norm().max(rhs.norm()).max(1.0);
            max_rel = max_rel.max((lhs - rhs).norm() / unit_d);
            done += 1;
            samples += 1;
        }
        assert!(done == 34, "could not find pole-free probes on factor {}", k);
        // Two-torsion values and the vanishing locus of the derivative.
        let ht = tau * 0.5;
        let torsion = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), ht, ht + 1.0];
        let expected = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            a,
            -a,
        ];
        let unit = a.norm().max(1.0);
        for (t, e) in torsion.iter().zip(expected.iter()) {
            max_torsion = max_torsion.max((model.x(*t).unwrap() - e).norm() / unit);
            max_torsion = max_torsion.max(model.x_prime(*t).unwrap().norm() / unit);
            let probe = t + Complex64::new(0.35, 0.15);
            min_floor = min_floor.min(model.x_prime(probe).unwrap().norm() / unit);
            // The odd combination vanishes exactly on the same locus.
            let (eta_t, s_t) = models::eta_section(*t, tau, &pol).unwrap();
            max_torsion = max_torsion.max(eta_t.norm() / (s_t * s_t));
            let (eta_p, s_p) = models::eta_section(probe, tau, &pol).unwrap();
            min_floor = min_floor.min(eta_p.norm() / (s_p * s_p));
        }
    }
    println!(
        "criterion 06 (elliptic coordinate relations): {} pole-free samples, \
         worst relation defect {:.3e} [tolerance 1e-9]; torsion values and \
         derivative zeros match to {:.3e}; off-torsion floor {:.3e} [> 1e-3]",
        samples, max_rel, max_torsion, min_floor
    );
    assert!(max_rel < 1e-9, "coordinate relation defect {:.3e}", max_rel);
    assert!(max_torsion < 1e-9, "torsion-value defect {:.3e}", max_torsion);
    assert!(min_floor > 1e-3, "off-torsion floor {:.3e}", min_floor);
}

#[test]
fn criterion_07_antidiagonal_restriction_identity() {
    let pol = policy();
    let spec = default_spec();
    let mut squared_err: f64 = 0.0;
    let mut linear_err: f64 = 0.0;
    let mut count = 0usize;
    for k in 0..3 {
        let tau = spec.tau.entry(k, k);
        let pm = PeriodMatrix::scalar(tau).unwrap();
        let mut rng = task_rng(1, 17_000 + k as u64);
        for _ in 0..34 {
            let z = scalar_cell_point(&mut rng, tau);
            let (_, _, v3) = models::rho_v3(z, -z, tau, &pol).unwrap();
            let chi0 = ThetaCharacteristic::from_half_bits(&[0]);
            let chi1 = ThetaCharacteristic::from_half_bits(&[1]);
            let t0 = theta_jet(&[z], &pm, &chi0, &pol).unwrap();
            let t1 = theta_jet(&[z], &pm, &chi1, &pol).unwrap();
            let (eta, _) = models::eta_section(z, tau, &pol).unwrap();
            let unit = t0.scale.powi(4);
            let squared = -2.0 * t0.value.powu(2) * t1.value.powu(2) * eta;
            let linear = -2.0 * t0.value * t1.value * eta;
            squared_err = squared_err.max((v3 - squared).norm() / unit);
            linear_err = linear_err.max((v3 - linear).norm() / unit);
            count += 1;
        }
    }
    println!(
        "criterion 07 (antidiagonal restriction): over {} samples the stated \
         form with squared factors misses by {:.3e} of scale^4; the variant \
         without the squares matches to {:.3e}",
        count, squared_err, linear_err
    );
    assert!(
        squared_err < 1e-9,
        "the restriction of the two-point determinant to (z, -z) does not \
         equal -2 theta_0(z)^2 theta_1(z)^2 eta(z): worst defect {:.3e} of \
         scale^4 over {} samples. The variant without the squared factors, \
         -2 theta_0(z) theta_1(z) eta(z), matches the computed restriction \
         to {:.3e} over the same samples, and the restriction is antisymmetric \
         under swapping the two arguments as the determinant form requires.",
        squared_err,
        count,
        linear_err
    );
}

#[test]
fn criterion_08_determinant_ledger() {
    let start = std::time::Instant::now();
    let ledger = legendre::identity_ledger().expect("ledger construction");
    let elapsed = start.elapsed();
    let mut lines = Vec::new();
    for check in &ledger.checks {
        if check.passed {
            lines.push(format!("    [ok] {}: matches as displayed", check.name));
        } else {
            let note = check
                .corrected
                .as_deref()
                .unwrap_or("no certified correction");
            lines.push(format!(
                "    [mismatch] {}: displayed {} but the certified determinant \
                 is different ({})",
                check.name, check.reference, note
            ));
        }
    }
    println!(
        "criterion 08 (determinant ledger): {}/{} displayed forms certified \
         literally, corrected catalog certified = {}, runtime {:.2?} [budget 30s]\n{}",
        ledger.literal_passes,
        ledger.checks.len(),
        ledger.all_certified,
        elapsed,
        lines.join("\n")
    );
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "ledger runtime {:.2?} exceeds the 30s budget",
        elapsed
    );
    assert!(
        ledger.all_certified,
        "the corrected determinant catalog must certify with zero residual"
    );
    assert!(
        ledger.all_literal,
        "{} of {} displayed determinant identities do not hold as printed; \
         every minor is certified exactly against a corrected form (overall \
         signs on two affine minors, an odd-factor variable on a third, and \
         rewritten end-game forms), see the per-entry list above",
        ledger.checks.len() - ledger.literal_passes,
        ledger.checks.len()
    );
}

#[test]
fn criterion_09_rank_dichotomy_and_census() {
    let spec = default_spec().diagonal_part().unwrap();
    let mut min_ratio = f64::INFINITY;
    for p in models::base_points(&spec).unwrap() {
        let rank = canonical::diff_rank_matrix(&spec, &p.z).unwrap();
        min_ratio = min_ratio.min(rank.singular_values[3] / rank.singular_values[0]);
    }
    for i in 0..200u64 {
        let p = canonical::sample_surface_point(&spec, derive_seed(1, 19_000 + i)).unwrap();
        let rank = canonical::diff_rank_matrix(&spec, &p.z).unwrap();
        min_ratio = min_ratio.min(rank.singular_values[3] / rank.singular_values[0]);
    }
    assert!(
        min_ratio > 1e-4,
        "a base or sample point fails the full-rank side (sigma4/sigma1 {:.3e})",
        min_ratio
    );
    let census = canonical::rank_census(&spec).unwrap();
    let mut max_drop: f64 = 0.0;
    for pt in &census.points {
        let ratio = pt.rank.singular_values[3] / pt.rank.singular_values[0];
        max_drop = max_drop.max(ratio);
        assert!(
            ratio < 1e-7,
            "census point on axis {} is not rank-degenerate (sigma4/sigma1 {:.3e}, \
             spectrum {:?})",
            pt.axis,
            ratio,
            pt.rank.singular_values
        );
    }
    println!(
        "criterion 09 (rank dichotomy): sigma4/sigma1 > {:.3e} at 16 base and \
         200 surface points [floor 1e-4]; census finds {} degenerate points \
         modulo the lattice ({} per axis pair), none fixed by negation, \
         pairing into {} antipodal orbits, worst sigma4/sigma1 {:.3e} \
         [ceiling 1e-7]; finding: the census totals 24 exactly when points \
         are counted modulo the negation symmetry that the surface and its \
         canonical image both carry",
        min_ratio,
        census.points.len(),
        census.block_zero_counts[0],
        census.antipodal_pairs,
        max_drop
    );
    assert_eq!(census.block_zero_counts, [8, 8, 8]);
    assert_eq!(census.points.len(), 48, "degenerate points modulo the lattice");
    assert_eq!(census.negation_fixed, 0);
    assert_eq!(
        census.antipodal_pairs, 24,
        "census count modulo negation should be 24"
    );
}

#[test]
fn criterion_10_involution_factorization() {
    let spec = default_spec().diagonal_part().unwrap();
    let mut max_fixed: f64 = 0.0;
    for j in 0..3usize {
        let mut found = 0usize;
        let mut attempt = 0u64;
        while found < 50 && attempt < 90 {
            let seed = derive_seed(1, 20_000 + 100 * j as u64 + attempt);
            attempt += 1;
            let p = match canonical::sample_w(&spec, j, seed) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let img = canonical::canonical_image(&spec, &p.z).unwrap();
            let mut zf = p.z;
            zf[j] = -zf[j];
            let img_flip = canonical::canonical_image(&spec, &zf).unwrap();
            max_fixed = max_fixed.max(img.chordal_distance(&img_flip).unwrap());
            found += 1;
        }
        assert_eq!(found, 50, "needed 50 vanishing-locus samples on axis {}", j);
    }
    // Control: a generic point is moved by a single-axis negation.
    let p = canonical::sample_surface_point(&spec, derive_seed(1, 20_900)).unwrap();
    let img = canonical::canonical_image(&spec, &p.z).unwrap();
    let mut zc = p.z;
    zc[0] = -zc[0];
    let control = img
        .chordal_distance(&canonical::canonical_image(&spec, &zc).unwrap())
        .unwrap();
    assert!(control > 0.01, "control involution barely moves a generic image");

    // Deformed period matrix: couple the first two factors.
    let eps = Complex64::new(0.15, 0.05);
    let d = [
        spec.tau.entry(0, 0),
        spec.tau.entry(1, 1),
        spec.tau.entry(2, 2),
    ];
    let zero = Complex64::new(0.0, 0.0);
    let tau_def = PeriodMatrix::from_rows(&[
        vec![d[0], eps, zero],
        vec![eps, d[1], zero],
        vec![zero, zero, d[2]],
    ])
    .unwrap();
    let spec_def = spec.with_tau(tau_def).unwrap();
    let mut max_def: f64 = 0.0;
    let mut found = 0usize;
    let mut attempt = 0u64;
    while found < 50 && attempt < 90 {
        let seed = derive_seed(1, 21_000 + attempt);
        attempt += 1;
        let p = match canonical::sample_w(&spec_def, 2, seed) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let img = canonical::canonical_image(&spec_def, &p.z).unwrap();
        let mut zf = p.z;
        zf[2] = -zf[2];
        let img_flip = canonical::canonical_image(&spec_def, &zf).unwrap();
        max_def = max_def.max(img.chordal_distance(&img_flip).unwrap());
        found += 1;
    }
    assert_eq!(found, 50, "needed 50 third-axis samples on the deformed surface");
    let mut pair_samples = 0usize;
    for root in canonical::w_pair_roots(&spec_def, 0, 1, derive_seed(1, 21_500), 3)
        .unwrap()
        .iter()
    {
        let img = canonical::canonical_image(&spec_def, &root.z).unwrap();
        let mut zf = root.z;
        zf[0] = -zf[0];
        zf[1] = -zf[1];
        let img_flip = canonical::canonical_image(&spec_def, &zf).unwrap();
        max_def = max_def.max(img.chordal_distance(&img_flip).unwrap());
        pair_samples += 1;
    }
    assert!(pair_samples > 0, "no joint vanishing-locus roots found");
    println!(
        "criterion 10 (involution factorization): 150 single-axis samples fixed \
         to {:.3e} [tolerance 1e-8]; deformed surface, 50 third-axis and {} \
         joint samples fixed to {:.3e}; generic control moves by {:.3}",
        max_fixed, pair_samples, max_def, control
    );
    assert!(max_fixed < 1e-8, "involution fixing defect {:.3e}", max_fixed);
    assert!(max_def < 1e-8, "deformed fixing defect {:.3e}", max_def);
}

#[test]
fn criterion_11_affine_analytic_agreement() {
    let spec = default_spec();
    let report = legendre::basis_alignment(&spec, 1).unwrap();
    println!(
        "criterion 11 (affine and analytic pictures agree): held-out chordal \
         {:.3e} on {} points [tolerance 1e-6]; affine surface relation residual \
         {:.3e} [tolerance 1e-9]; alignment condition number {:.3e}",
        report.heldout_max_chordal,
        report.heldout_points,
        report.surface_relation_max,
        report.condition_number
    );
    assert_eq!(report.heldout_points, 20);
    assert!(
        report.heldout_max_chordal < 1e-6,
        "held-out alignment defect {:.3e}",
        report.heldout_max_chordal
    );
    assert!(
        report.surface_relation_max < 1e-9,
        "affine surface relation residual {:.3e}",
        report.surface_relation_max
    );
}

#[test]
fn criterion_12_bidouble_certificates() {
    let report = theta122::bidouble::certified_invariance().expect("exact certificates");
    assert!(report.all_passed, "invariance certificates must all pass");
    assert!(report.cover_invariant, "squared coordinates must be invariant");
    for (section, element, holds) in &report.diagonal_invariant {
        assert!(*holds, "{} is not invariant under {}", section, element);
    }
    for (section, holds) in &report.swap_antisymmetric {
        assert!(*holds, "{} is not antisymmetric under the factor swap", section);
    }
    let model = theta122::bidouble::QuarticModel::sample();
    let lines = theta122::bidouble::bitangency_probe(&model).expect("bitangency probe");
    let mut worst_pairing: f64 = 0.0;
    for line in &lines {
        assert!(
            line.is_exact_square,
            "restriction to {} is not a perfect square: the tangency \
             certificate fails with nonzero polynomial residual",
            line.line
        );
        assert!(
            line.distinct_contacts,
            "contact points on {} coincide (discriminant vanishes)",
            line.line
        );
        assert!(line.is_tangent, "probe rejects {}", line.line);
        worst_pairing = worst_pairing.max(line.max_pair_distance);
    }
    println!(
        "criterion 12 (bidouble model): diagonal invariance, swap antisymmetry \
         and cover invariance certified exactly; all {} coordinate lines are \
         bitangent with zero polynomial residual in the square certificate \
         [tolerance 1e-8, residual is exactly 0]; numeric double roots of the \
         restricted quartic pair to {:.3e}, the square-root-of-noise floor for \
         a double root at this scale",
        lines.len(),
        worst_pairing
    );
    assert_eq!(lines.len(), 4);
}

#[test]
fn criterion_13_determinism_and_interface() {
    let mut config = RunConfig::default();
    config.samples = 60;
    config.suites = vec!["theta".to_string()];
    let r1 = runner::run(&config).expect("first run");
    let r2 = runner::run(&config).expect("second run");
    let j1 = serde_json::to_string(&r1).unwrap();
    let j2 = serde_json::to_string(&r2).unwrap();
    assert_eq!(j1, j2, "reports from the same seed differ");
    let c1 = runner::samples_csv(&config).expect("first csv");
    let c2 = runner::samples_csv(&config).expect("second csv");
    assert_eq!(c1, c2, "sample CSVs from the same seed differ");
    let mut other = config.clone();
    other.seed = 2;
    let c3 = runner::samples_csv(&other).expect("reseeded csv");
    assert_ne!(c1, c3, "different seeds should move the sample points");
    let mut bad = config.clone();
    bad.samples = 0;
    assert!(bad.validate().is_err(), "zero samples must be rejected");
    println!(
        "criterion 13 (determinism and interface): report and {}-line CSV are \
         byte-identical across reruns with the same seed and move under a new \
         seed; invalid configurations are rejected before any computation \
         (process-level exit codes are exercised by the command-line test \
         target)",
        c1.lines().count()
    );
}
