//! The canonical map: projective geometry helpers, surface sampling, the
//! rank dichotomy, the degeneracy census, and the symmetry actions.

use num_complex::Complex64;
use theta122::canonical::{self, CanonicalError, ProjectivePoint};
use theta122::models::{self, SurfaceSpec};
use theta122::rng::derive_seed;
use theta122::theta::{PeriodMatrix, TruncationPolicy};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn default_spec() -> SurfaceSpec {
    let tau = PeriodMatrix::diagonal(&[c(0.0, 1.0), c(0.0, 1.3), c(0.0, 0.7)]).unwrap();
    SurfaceSpec::new(
        tau,
        c(0.9, 0.1),
        c(1.1, -0.2),
        c(0.8, 0.3),
        TruncationPolicy::default(),
    )
    .unwrap()
}

#[test]
fn projective_points_normalize_and_measure() {
    let p = ProjectivePoint::new(vec![c(2.0, 0.0), c(0.0, -4.0), c(1.0, 1.0)]).unwrap();
    assert!((p.norm_scale - 4.0).abs() < 1e-15);
    let max = p.coords.iter().map(|w| w.norm()).fold(0.0, f64::max);
    assert!((max - 1.0).abs() < 1e-15);

    // Chordal distance is projective: rescaling either side changes nothing.
    let q = ProjectivePoint::new(vec![c(-6.0, 0.0), c(0.0, 12.0), c(-3.0, -3.0)]).unwrap();
    assert!(p.chordal_distance(&q).unwrap() < 1e-12);
    let r = ProjectivePoint::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let d = p.chordal_distance(&r).unwrap();
    assert!(d > 0.5 && d <= 1.0 + 1e-12);

    assert!(matches!(
        ProjectivePoint::new(vec![c(0.0, 0.0); 4]),
        Err(CanonicalError::AllCoordinatesVanish)
    ));
    let s2 = ProjectivePoint::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!(matches!(
        p.chordal_distance(&s2),
        Err(CanonicalError::DimensionMismatch { left: 3, right: 2 })
    ));
}

#[test]
fn surface_sampling_is_deterministic_and_on_surface() {
    let spec = default_spec();
    let a = canonical::sample_surface_point(&spec, 42).unwrap();
    let b = canonical::sample_surface_point(&spec, 42).unwrap();
    for i in 0..3 {
        assert_eq!(a.z[i], b.z[i], "same seed must give the same point");
    }
    let other = canonical::sample_surface_point(&spec, 43).unwrap();
    let moved = (0..3).map(|i| (a.z[i] - other.z[i]).norm()).fold(0.0, f64::max);
    assert!(moved > 1e-6, "different seeds should move the sample");
    for seed in [7u64, 8, 9, 10] {
        let p = canonical::sample_surface_point(&spec, seed).unwrap();
        let jet = models::surface_jet(&spec, &p.z).unwrap();
        assert!(jet.value.norm() / jet.scale < 1e-10, "sample off the surface");
    }
}

#[test]
fn canonical_image_and_gauss_block_are_consistent() {
    let spec = default_spec();
    let p = canonical::sample_surface_point(&spec, 5).unwrap();
    let img = canonical::canonical_image(&spec, &p.z).unwrap();
    assert_eq!(img.coords.len(), 6);
    let gauss = canonical::gauss_image(&spec, &p.z).unwrap();
    assert_eq!(gauss.coords.len(), 3);
    // The Gauss block is the projectivized tail of the full image.
    let tail = ProjectivePoint::new(img.coords[3..6].to_vec()).unwrap();
    assert!(tail.chordal_distance(&gauss).unwrap() < 1e-12);
}

#[test]
fn rank_dichotomy_shows_in_the_singular_values() {
    let spec = default_spec();
    // Generic surface point: all four singular values in play.
    let p = canonical::sample_surface_point(&spec, 11).unwrap();
    let rank = canonical::diff_rank_matrix(&spec, &p.z).unwrap();
    assert_eq!(rank.singular_values.len(), 4);
    assert!(rank.singular_values.windows(2).all(|w| w[0] >= w[1]));
    assert!(rank.singular_values[3] / rank.singular_values[0] > 1e-4);
    assert_eq!(rank.rank_estimate, 4);
    // Base points also carry the full rank.
    for bp in models::base_points(&spec).unwrap().iter().take(4) {
        let r = canonical::diff_rank_matrix(&spec, &bp.z).unwrap();
        assert!(r.singular_values[3] / r.singular_values[0] > 1e-4);
    }
}

#[test]
fn census_counts_and_spectra_are_stable() {
    let spec = default_spec();
    let census = canonical::rank_census(&spec).unwrap();
    assert_eq!(census.block_zero_counts, [8, 8, 8]);
    assert_eq!(census.points.len(), 48);
    assert_eq!(census.negation_fixed, 0);
    assert_eq!(census.antipodal_pairs, 24);
    for pt in &census.points {
        assert!(pt.axis < 3);
        let ratio = pt.rank.singular_values[3] / pt.rank.singular_values[0];
        assert!(ratio < 1e-7, "census point not degenerate: {:e}", ratio);
        assert!(pt.rank.rank_estimate <= 3);
        // Census points sit on the surface.
        let jet = models::surface_jet(&spec, &pt.z).unwrap();
        assert!(jet.value.norm() / jet.scale < 1e-8);
    }
    // Antipodal pairing: the census is symmetric under global negation.
    let mut paired = 0usize;
    for (i, a) in census.points.iter().enumerate() {
        let neg: Vec<Complex64> = a.z.iter().map(|w| -w).collect();
        for (j, b) in census.points.iter().enumerate() {
            if i != j && models::lattice_distance(&neg, &b.z, &spec.tau, true) < 1e-6 {
                paired += 1;
                break;
            }
        }
    }
    assert_eq!(paired, 48, "every census point should pair with its negative");
}

#[test]
fn involutions_fix_their_vanishing_loci() {
    let spec = default_spec();
    for j in 0..3usize {
        let p = canonical::sample_w(&spec, j, derive_seed(9, 30 + j as u64)).unwrap();
        let img = canonical::canonical_image(&spec, &p.z).unwrap();
        let mut zf = p.z;
        zf[j] = -zf[j];
        let flipped = canonical::canonical_image(&spec, &zf).unwrap();
        assert!(
            img.chordal_distance(&flipped).unwrap() < 1e-8,
            "axis {} involution moves its locus",
            j
        );
    }
    // Generic control: a single-axis negation moves a generic image point.
    let p = canonical::sample_surface_point(&spec, 12).unwrap();
    let img = canonical::canonical_image(&spec, &p.z).unwrap();
    let mut zc = p.z;
    zc[1] = -zc[1];
    let moved = canonical::canonical_image(&spec, &zc).unwrap();
    assert!(img.chordal_distance(&moved).unwrap() > 0.01);
}

#[test]
fn joint_roots_satisfy_all_three_equations() {
    let spec = default_spec();
    let roots = canonical::w_pair_roots(&spec, 0, 1, 77, 3).unwrap();
    assert!(!roots.is_empty());
    for root in &roots {
        let jet = models::surface_jet(&spec, &root.z).unwrap();
        assert!(jet.value.norm() / jet.scale < 1e-9);
        assert!(jet.gradient[0].norm() / jet.scale < 1e-8);
        assert!(jet.gradient[1].norm() / jet.scale < 1e-8);
    }
    // Roots are pairwise distinct modulo the lattice.
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let d = models::lattice_distance(&roots[i].z, &roots[j].z, &spec.tau, true);
            assert!(d > 1e-6, "duplicate root in the cluster");
        }
    }
}

#[test]
fn symmetry_elements_classify_orbit_relations() {
    let spec = default_spec();
    let p = canonical::sample_surface_point(&spec, 21).unwrap();
    // The identity relates a point to itself.
    let hits = canonical::orbit_classify(&spec, &p.z, &p.z);
    assert!(hits
        .iter()
        .any(|e| e.signs == [1, 1, 1] && e.shift == [0, 0, 0]));
    // Global negation relates a point to its antipode.
    let neg: Vec<Complex64> = p.z.iter().map(|w| -w).collect();
    let hits = canonical::orbit_classify(&spec, &p.z, &neg);
    assert!(hits.iter().any(|e| e.signs == [-1, -1, -1]));
    // A generic unrelated pair matches no element.
    let q = canonical::sample_surface_point(&spec, 22).unwrap();
    let hits = canonical::orbit_classify(&spec, &p.z, &q.z);
    assert!(hits.is_empty());
    // A half-period shift is detected with its shift vector.
    let shifted: Vec<Complex64> = vec![p.z[0] + 1.0, p.z[1], p.z[2]];
    let hits = canonical::orbit_classify(&spec, &p.z, &shifted);
    assert!(hits
        .iter()
        .any(|e| e.signs == [1, 1, 1] && e.shift == [1, 0, 0]));
}
