//! The plane quartic picture: elliptic coordinate model, the exact
//! determinant ledger with its corrected forms, chart changes, and the
//! alignment between the analytic and affine maps.

use num_complex::Complex64;
use theta122::legendre::{
    self, identity_ledger, LegendreError, LegendreModel,
};
use theta122::models::SurfaceSpec;
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
fn model_records_the_rescaled_normalization() {
    for tau in [c(0.0, 1.0), c(0.0, 1.3), c(0.0, 0.7)] {
        let model = LegendreModel::new(tau, TruncationPolicy::default()).unwrap();
        assert_eq!(model.normalization.winner, "rescaled");
        assert!(model.normalization.rescaled_error < 1e-10);
        assert!(model.normalization.plain_error > 1e-2);
        // Special values under the recorded normalization.
        let a = model.a_param;
        assert!((model.x(c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-10);
        assert!((model.x(c(1.0, 0.0)).unwrap() + 1.0).norm() < 1e-10);
        assert!((model.x(tau * 0.5).unwrap() - a).norm() < 1e-10 * a.norm().max(1.0));
        assert!((model.x(tau * 0.5 + 1.0).unwrap() + a).norm() < 1e-10 * a.norm().max(1.0));
        // The derivative lands on the quartic curve model.
        let z = tau * 0.31 + 0.47;
        let (x, y) = model.analytic_to_affine(z).unwrap();
        let rhs = model.curve_rhs(x);
        assert!((y * y - rhs).norm() / rhs.norm().max(1.0) < 1e-10);
    }
}

#[test]
fn pole_is_reported_at_the_theta_zero() {
    let tau = c(0.0, 1.3);
    let model = LegendreModel::new(tau, TruncationPolicy::default()).unwrap();
    // The even theta vanishes at half the sum of the odd periods.
    let pole = tau * 0.5 + 0.5;
    match model.x(pole) {
        Err(LegendreError::PoleAtZ { magnitude }) => assert!(magnitude < 1e-12),
        other => panic!("expected a pole, got {:?}", other),
    }
    // Slightly off the zero the coordinate is finite again.
    assert!(model.x(pole + 0.2).is_ok());
    // The recorded theta constants are the values at the origin.
    assert!(model.theta0_zero.norm() > 0.5);
    assert!(model.theta1_zero.norm() > 0.5);
}

#[test]
fn ledger_certifies_every_entry_and_flags_the_literal_mismatches() {
    let ledger = identity_ledger().unwrap();
    assert_eq!(ledger.checks.len(), 10);
    assert!(ledger.all_certified);
    assert!(!ledger.all_literal);
    assert_eq!(ledger.literal_passes, 4);

    let expected_literal = [false, true, false, false, true, true, false, false, false, true];
    for (check, want) in ledger.checks.iter().zip(expected_literal.iter()) {
        assert_eq!(
            check.passed, *want,
            "literal status changed for {}",
            check.name
        );
        assert!(check.certified, "{} lost its certificate", check.name);
        assert!(check.oracle_agrees, "{} fails the rational oracle", check.name);
        if check.passed {
            assert!(check.corrected.is_none());
        } else {
            let note = check.corrected.as_deref().unwrap();
            assert!(!note.is_empty());
        }
    }

    // The three affine mismatches are the two sign flips and the odd-factor
    // slip; the displayed end-game forms all differ from the computed ones.
    assert!(ledger.checks[0].corrected.as_deref().unwrap().contains("sign"));
    assert!(ledger.checks[2].corrected.as_deref().unwrap().contains("sign"));
    assert!(ledger.checks[3]
        .corrected
        .as_deref()
        .unwrap()
        .contains("y1*y2"));
    assert!(ledger.checks[9].name.contains("at-infinity"));
    assert!(ledger.checks[9].passed);
}

#[test]
fn affine_minors_are_homogeneous() {
    let ledger = identity_ledger().unwrap();
    // The six affine minors are homogeneous in the surface variables; the
    // end-game forms mix degrees after the on-curve substitution, so only
    // the first block carries this structural invariant.
    for check in &ledger.checks[..6] {
        assert!(
            check.homogeneous_degree.is_some(),
            "{} is not homogeneous in the surface variables",
            check.name
        );
    }
}

#[test]
fn entry_table_and_display_notes() {
    let entries = legendre::n_entry_checks();
    assert!(!entries.is_empty());
    for (name, ok) in &entries {
        assert!(*ok, "matrix entry {} deviates from its displayed form", name);
    }
    let notes = legendre::m_display_notes();
    assert_eq!(notes.len(), 4);
    assert!(notes[0].contains("does not match"));
    assert!(notes[1].contains("does not match"));
    for note in &notes {
        assert!(!note.is_empty());
    }
}

#[test]
fn chart_change_is_exact() {
    let report = legendre::chart_change_report().unwrap();
    assert!(report.all_exact);
    assert_eq!(report.items.len(), 10);
    for item in &report.items {
        assert!(item.exact, "chart change fails for {}", item.name);
        assert!(!item.factor.is_empty());
    }
}

#[test]
fn minor_rejects_bad_column_lists() {
    let n = legendre::build_phi_matrix_n();
    let ncols = n[0].len();
    let err = legendre::minor(&n, &[1, 2, 3]).unwrap_err();
    assert!(matches!(err, LegendreError::BadColumnList { .. }));
    let err = legendre::minor(&n, &[1, 1, 2, 3, 4, 5]).unwrap_err();
    match err {
        LegendreError::BadColumnList { reason } => assert!(reason.contains("twice")),
        other => panic!("expected BadColumnList, got {:?}", other),
    }
    let err = legendre::minor(&n, &[1, 2, 3, 4, 5, ncols + 1]).unwrap_err();
    match err {
        LegendreError::BadColumnList { reason } => assert!(reason.contains("range")),
        other => panic!("expected BadColumnList, got {:?}", other),
    }
}

#[test]
fn alignment_matches_the_affine_picture() {
    let spec = default_spec();
    let report = legendre::basis_alignment(&spec, 1).unwrap();
    assert!(report.heldout_max_chordal < 1e-6);
    assert_eq!(report.heldout_points, 20);
    assert!(report.fit_points >= 6);
    assert!(report.pattern_offdiag_ratio < 1e-4);
    assert!(report.surface_relation_max < 1e-9);
    assert!(report.condition_number < 1e6);
    // The primed coefficients recorded by the fit are the theta-constant
    // rescalings, computed independently.
    let primed = legendre::primed_coefficients(&spec).unwrap();
    for i in 0..3 {
        assert!((report.primed[i] - primed[i]).norm() < 1e-12);
    }
    // The fitted matrix is anti-diagonal up to the stated ratio.
    let m = &report.matrix;
    let k = m.nrows();
    let mut min_anti = f64::INFINITY;
    let mut max_off: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let v = m[(i, j)].norm();
            if i + j == k - 1 {
                min_anti = min_anti.min(v);
            } else {
                max_off = max_off.max(v);
            }
        }
    }
    assert!(max_off / min_anti < 1e-4);
}
