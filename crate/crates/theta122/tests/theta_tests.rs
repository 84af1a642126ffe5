//! Theta evaluation: series against brute-force summation, parity, the
//! functional equation, truncation policy, and input validation.

use num_complex::Complex64;
use rand::Rng;
use theta122::rng::task_rng;
use theta122::theta::{
    adaptive_radius, automorphy_factor, brute_force_jet, theta_jet, theta_jet_with_radius,
    theta_scale, theta_value, PeriodMatrix, ThetaCharacteristic, ThetaError, TruncationPolicy,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn default_tau3() -> PeriodMatrix {
    PeriodMatrix::diagonal(&[c(0.0, 1.0), c(0.0, 1.3), c(0.0, 0.7)]).unwrap()
}

#[test]
fn lemniscatic_reference_value() {
    // theta[0,0](0, i) = pi^(1/4) / Gamma(3/4), a classical closed form.
    let pm = PeriodMatrix::scalar(c(0.0, 1.0)).unwrap();
    let chi = ThetaCharacteristic::zero(1);
    let v = theta_value(&[c(0.0, 0.0)], &pm, &chi, &TruncationPolicy::default()).unwrap();
    assert!((v.re - 1.0864348112133080).abs() < 1e-12, "value {}", v);
    assert!(v.im.abs() < 1e-14);
}

#[test]
fn series_matches_brute_force_summation() {
    let pol = TruncationPolicy::default();
    let mut rng = task_rng(7, 0);
    // Genus one, radius 30 reference sum.
    let pm1 = PeriodMatrix::scalar(c(0.1, 0.8)).unwrap();
    for bits in [[0u8], [1u8]] {
        let chi = ThetaCharacteristic::from_half_bits(&bits);
        for _ in 0..10 {
            let z = [c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)];
            let fast = theta_jet(&z, &pm1, &chi, &pol).unwrap();
            let slow = brute_force_jet(&z, &pm1, &chi, 30);
            assert!((fast.value - slow.value).norm() / fast.scale < 1e-12);
            assert!((fast.gradient[0] - slow.gradient[0]).norm() / fast.scale < 1e-11);
            assert!(
                (fast.hessian[(0, 0)] - slow.hessian[(0, 0)]).norm() / fast.scale < 1e-10
            );
        }
    }
    // Genus three, diagonal period matrix.
    let pm3 = default_tau3();
    let chi = ThetaCharacteristic::from_half_bits(&[0, 1, 1]);
    let z = [c(0.12, 0.21), c(-0.31, 0.05), c(0.44, -0.17)];
    let fast = theta_jet(&z, &pm3, &chi, &pol).unwrap();
    let slow = brute_force_jet(&z, &pm3, &chi, 10);
    assert!((fast.value - slow.value).norm() / fast.scale < 1e-12);
    for i in 0..3 {
        assert!((fast.gradient[i] - slow.gradient[i]).norm() / fast.scale < 1e-11);
    }
}

#[test]
fn odd_characteristics_vanish_at_origin() {
    let pol = TruncationPolicy::default();
    for tau in [c(0.0, 1.0), c(0.3, 0.9), c(0.0, 0.62)] {
        let pm = PeriodMatrix::scalar(tau).unwrap();
        let chi = ThetaCharacteristic::half(&[1], &[1]);
        let v = theta_value(&[c(0.0, 0.0)], &pm, &chi, &pol).unwrap();
        assert!(v.norm() < 1e-13, "odd value {:e} at tau {}", v.norm(), tau);
    }
    // Genus three odd characteristic: 4 a.b odd.
    let pm = default_tau3();
    let chi = ThetaCharacteristic::half(&[1, 0, 0], &[1, 0, 0]);
    let v = theta_value(&[c(0.0, 0.0); 3], &pm, &chi, &pol).unwrap();
    assert!(v.norm() < 1e-13);
}

#[test]
fn evenness_of_the_basis_characteristics() {
    let pol = TruncationPolicy::default();
    let pm = default_tau3();
    let mut rng = task_rng(7, 1);
    for bits in [[0u8, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]] {
        let chi = ThetaCharacteristic::from_half_bits(&bits);
        let z: Vec<Complex64> = (0..3)
            .map(|_| c(rng.gen::<f64>() - 0.5, 0.4 * (rng.gen::<f64>() - 0.5)))
            .collect();
        let zm: Vec<Complex64> = z.iter().map(|w| -w).collect();
        let a = theta_value(&z, &pm, &chi, &pol).unwrap();
        let b = theta_value(&zm, &pm, &chi, &pol).unwrap();
        let scale = theta_scale(&z, &pm);
        assert!((a - b).norm() / scale < 1e-12, "not even for {:?}", bits);
    }
}

#[test]
fn functional_equation_over_generators() {
    let pol = TruncationPolicy::default();
    let pm = default_tau3();
    let chi = ThetaCharacteristic::zero(3);
    let mut rng = task_rng(7, 2);
    for axis in 0..3 {
        for kind in 0..2 {
            let lam: Vec<Complex64> = if kind == 0 {
                (0..3).map(|i| pm.entry(i, axis)).collect()
            } else {
                (0..3)
                    .map(|i| c(if i == axis { 2.0 } else { 0.0 }, 0.0))
                    .collect()
            };
            for _ in 0..5 {
                let z: Vec<Complex64> = (0..3)
                    .map(|_| c(rng.gen::<f64>() - 0.5, 0.5 * (rng.gen::<f64>() - 0.5)))
                    .collect();
                let shifted: Vec<Complex64> =
                    z.iter().zip(lam.iter()).map(|(a, b)| a + b).collect();
                let lhs = theta_value(&shifted, &pm, &chi, &pol).unwrap();
                let rhs = automorphy_factor(&lam, &z, &pm).unwrap()
                    * theta_value(&z, &pm, &chi, &pol).unwrap();
                let denom = lhs.norm().max(rhs.norm());
                assert!((lhs - rhs).norm() / denom < 1e-10);
            }
        }
    }
    // A vector outside the lattice is rejected.
    let bad = [c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let z = [c(0.1, 0.1), c(0.0, 0.0), c(0.0, 0.0)];
    assert!(matches!(
        automorphy_factor(&bad, &z, &pm),
        Err(ThetaError::NotInLattice { .. })
    ));
}

#[test]
fn period_matrix_validation() {
    // Asymmetric input is rejected with the defect size.
    let bad = PeriodMatrix::from_rows(&[
        vec![c(0.0, 1.0), c(0.2, 0.0)],
        vec![c(0.1, 0.0), c(0.0, 1.0)],
    ]);
    assert!(matches!(bad, Err(ThetaError::NotSymmetric { .. })));

    // Imaginary part must be positive definite.
    let bad = PeriodMatrix::scalar(c(0.3, -0.2));
    assert!(matches!(bad, Err(ThetaError::NonPositiveDefinite)));
    let bad = PeriodMatrix::from_rows(&[
        vec![c(0.0, 1.0), c(0.0, 2.0)],
        vec![c(0.0, 2.0), c(0.0, 1.0)],
    ]);
    assert!(matches!(bad, Err(ThetaError::NonPositiveDefinite)));

    let pm = default_tau3();
    assert_eq!(pm.g(), 3);
    assert!(pm.is_diagonal(1e-14));
    assert_eq!(pm.max_offdiag(), 0.0);
    assert!((pm.im_lambda_min() - 0.7).abs() < 1e-12);
    let block = pm.block(&[0, 2]).unwrap();
    assert_eq!(block.g(), 2);
    assert_eq!(block.entry(1, 1), c(0.0, 0.7));

    let coupled = PeriodMatrix::from_rows(&[
        vec![c(0.0, 1.0), c(0.15, 0.05)],
        vec![c(0.15, 0.05), c(0.0, 1.3)],
    ])
    .unwrap();
    assert!(!coupled.is_diagonal(1e-6));
    assert!((coupled.max_offdiag() - (0.15f64 * 0.15 + 0.05 * 0.05).sqrt()).abs() < 1e-12);
}

#[test]
fn characteristic_helpers() {
    let chi = ThetaCharacteristic::half(&[1, 0], &[0, 1]);
    assert_eq!(chi.g(), 2);
    assert_eq!(chi.a(), &[0.5, 0.0]);
    assert_eq!(chi.b(), &[0.0, 0.5]);
    let zero = ThetaCharacteristic::zero(3);
    assert!(zero.a().iter().all(|v| *v == 0.0));
    let from_bits = ThetaCharacteristic::from_half_bits(&[1, 1, 0]);
    assert_eq!(from_bits.a(), &[0.5, 0.5, 0.0]);
    assert_eq!(from_bits.b(), &[0.0, 0.0, 0.0]);
    assert!(TruncationPolicy::default().validate().is_ok());
}

#[test]
fn truncation_policy_controls_the_tail() {
    let pm = default_tau3();
    let chi = ThetaCharacteristic::zero(3);
    let z = [c(0.2, 0.3), c(0.1, -0.2), c(0.05, 0.4)];

    // Tighter targets never shrink the radius.
    let loose = TruncationPolicy { target_tol: 1e-6, max_radius: 60 };
    let tight = TruncationPolicy { target_tol: 1e-14, max_radius: 60 };
    let r_loose = adaptive_radius(&z, &pm, &chi, &loose).unwrap();
    let r_tight = adaptive_radius(&z, &pm, &chi, &tight).unwrap();
    assert!(r_tight >= r_loose);

    // An unreachable target reports the best achievable bound.
    let impossible = TruncationPolicy { target_tol: 1e-14, max_radius: 2 };
    match adaptive_radius(&z, &pm, &chi, &impossible) {
        Err(ThetaError::RadiusExceeded { target, max_radius, achieved }) => {
            assert_eq!(max_radius, 2);
            assert!(achieved > target);
        }
        other => panic!("expected RadiusExceeded, got {:?}", other),
    }

    // Fixed-radius evaluation converges to the adaptive answer.
    let pol = TruncationPolicy::default();
    let full = theta_jet(&z, &pm, &chi, &pol).unwrap();
    let fixed = theta_jet_with_radius(&z, &pm, &chi, 14);
    assert!((full.value - fixed.value).norm() / full.scale < 1e-12);

    let bad_policy = TruncationPolicy { target_tol: 0.0, max_radius: 10 };
    assert!(matches!(
        theta_jet(&z, &pm, &chi, &bad_policy),
        Err(ThetaError::BadPolicy(_))
    ));
}

#[test]
fn scale_tracks_the_gaussian_envelope() {
    let pm = default_tau3();
    let origin = [c(0.0, 0.0); 3];
    assert!((theta_scale(&origin, &pm) - 1.0).abs() < 1e-14);
    // Purely real displacements do not change the envelope.
    let real = [c(0.7, 0.0), c(-0.3, 0.0), c(0.2, 0.0)];
    assert!((theta_scale(&real, &pm) - 1.0).abs() < 1e-14);
    // Imaginary displacement grows it.
    let up = [c(0.0, 0.5), c(0.0, 0.0), c(0.0, 0.0)];
    assert!(theta_scale(&up, &pm) > 1.5);
}
