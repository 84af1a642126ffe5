//! The product-quartic cover: group action certificates, character table,
//! coordinate-line bitangency, and curve sampling.

use num_complex::Complex64;
use rand::Rng;
use theta122::bidouble::{
    self, apply_group, BidoubleError, GroupLabel, QuarticModel, SECTION_NAMES,
};
use theta122::rng::task_rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_point(rng: &mut impl Rng) -> [Complex64; 4] {
    let mut p = [c(0.0, 0.0); 4];
    for w in p.iter_mut() {
        *w = c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
    }
    p
}

#[test]
fn quartic_gradient_matches_finite_differences() {
    let model = QuarticModel::sample();
    let mut rng = task_rng(5, 0);
    let p = random_point(&mut rng);
    let grad = model.q_grad(&p);
    let h = 1e-6;
    for i in 0..4 {
        let mut pp = p;
        let mut pm = p;
        pp[i] += h;
        pm[i] -= h;
        let fd = (model.q_eval(&pp) - model.q_eval(&pm)) / (2.0 * h);
        assert!(
            (fd - grad[i]).norm() < 1e-6,
            "gradient slot {} off by {:e}",
            i,
            (fd - grad[i]).norm()
        );
    }
}

#[test]
fn residuals_reject_the_zero_vector() {
    let model = QuarticModel::sample();
    let zero = [c(0.0, 0.0); 4];
    assert!(matches!(
        bidouble::curve_residuals(&model, &zero),
        Err(BidoubleError::ZeroVector)
    ));
}

#[test]
fn cover_map_is_group_invariant_pointwise() {
    let mut rng = task_rng(5, 1);
    let p = random_point(&mut rng);
    let base = bidouble::psi_cover(&p).unwrap();
    for g in GroupLabel::all() {
        let moved = bidouble::psi_cover(&apply_group(g, &p)).unwrap();
        // Sign flips square away exactly, so this is bitwise equality.
        for i in 0..4 {
            assert_eq!(base[i], moved[i], "cover moves under {}", g.name());
        }
    }
}

#[test]
fn group_table_is_the_klein_four_group() {
    let mut rng = task_rng(5, 2);
    let p = random_point(&mut rng);
    // a then b equals ab.
    let ab = apply_group(GroupLabel::B, &apply_group(GroupLabel::A, &p));
    let direct = apply_group(GroupLabel::Ab, &p);
    assert_eq!(ab, direct);
    // Every element squares to the identity.
    for g in GroupLabel::all() {
        let twice = apply_group(g, &apply_group(g, &p));
        assert_eq!(twice, p);
    }
    // Characters: a fixes the first pair, b alternates, ab is the product.
    assert_eq!(GroupLabel::A.signs(), [1, 1, -1, -1]);
    assert_eq!(GroupLabel::B.signs(), [1, -1, 1, -1]);
    assert_eq!(GroupLabel::Ab.signs(), [1, -1, -1, 1]);
}

#[test]
fn invariance_certificates_and_character_table() {
    let report = bidouble::certified_invariance().unwrap();
    assert!(report.all_passed);
    assert!(report.cover_invariant);
    assert_eq!(report.diagonal_invariant.len(), SECTION_NAMES.len() * 4);
    for (section, element, holds) in &report.diagonal_invariant {
        assert!(*holds, "{} not invariant under diagonal {}", section, element);
    }
    assert_eq!(report.swap_antisymmetric.len(), SECTION_NAMES.len());
    for (section, holds) in &report.swap_antisymmetric {
        assert!(*holds, "{} not swap-antisymmetric", section);
    }
    // Single-factor character table: the even differences are invariant,
    // each quadrilinear form picks out one nontrivial character.
    let expected: [(&str, [i8; 3]); 6] = [
        ("eta01", [1, 1, 1]),
        ("eta02", [1, 1, 1]),
        ("eta12", [1, 1, 1]),
        ("omega45", [1, -1, -1]),
        ("omega67", [-1, 1, -1]),
        ("omega89", [-1, -1, 1]),
    ];
    assert_eq!(report.single_factor_characters.len(), 6);
    for ((name, signs), (want_name, want_signs)) in report
        .single_factor_characters
        .iter()
        .zip(expected.iter())
    {
        assert_eq!(name.as_str(), *want_name);
        assert_eq!(signs, want_signs, "character row for {}", name);
    }
}

#[test]
fn coordinate_lines_are_bitangent_with_exact_certificates() {
    let model = QuarticModel::sample();
    let lines = bidouble::bitangency_probe(&model).unwrap();
    assert_eq!(lines.len(), 4);
    for line in &lines {
        assert!(line.is_exact_square, "{} restriction is not a square", line.line);
        assert!(line.distinct_contacts, "{} contacts coincide", line.line);
        assert!(line.is_tangent);
        assert_eq!(line.roots.len(), 4);
        // Numeric double roots split at the square root of coefficient
        // noise; anything below 1e-6 confirms the pairing.
        assert!(line.max_pair_distance < 1e-6);
        // Contact points satisfy the quartic.
        for contact in &line.contact_points {
            let scale = contact.iter().map(|w| w.norm()).fold(0.0, f64::max).powi(4);
            let v = model.q_eval(contact);
            assert!(
                v.norm() / scale < 1e-10,
                "contact point off the quartic on {} ({:e})",
                line.line,
                v.norm() / scale
            );
        }
    }
}

#[test]
fn curve_sampling_is_deterministic_and_smooth() {
    let model = QuarticModel::sample();
    let p = bidouble::sample_curve_point(&model, 3).unwrap();
    let q = bidouble::sample_curve_point(&model, 3).unwrap();
    assert_eq!(p, q, "same seed must reproduce the same curve point");
    let (r1, r2) = bidouble::curve_residuals(&model, &p).unwrap();
    assert!(r1.norm() < 1e-10, "sum-of-squares residual {:e}", r1.norm());
    assert!(r2.norm() < 1e-10, "quartic relation residual {:e}", r2.norm());

    let probe = bidouble::jacobian_rank_probe(&model, 5, 17).unwrap();
    assert_eq!(probe.points, 5);
    assert!(probe.max_residual < 1e-9);
    assert!(
        probe.min_sigma_ratio > 1e-6,
        "Jacobian nearly drops rank ({:e})",
        probe.min_sigma_ratio
    );
}
