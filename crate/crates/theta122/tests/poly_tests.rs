//! Exact polynomial arithmetic: ring operations, substitution, determinants,
//! and the rendering used by the identity ledger.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use theta122::poly::{determinant, rational_det, MultiPoly, PolyError};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn x() -> MultiPoly {
    MultiPoly::var(3, 0)
}

fn y() -> MultiPoly {
    MultiPoly::var(3, 1)
}

fn z() -> MultiPoly {
    MultiPoly::var(3, 2)
}

#[test]
fn ring_operations_normalize() {
    let p = x().add(&y());
    let q = x().sub(&y());
    let product = p.mul(&q);
    let expected = x().mul(&x()).sub(&y().mul(&y()));
    assert!(product.sub(&expected).is_zero());
    assert_eq!(product.term_count(), 2);

    let cancel = p.sub(&p);
    assert!(cancel.is_zero());
    assert_eq!(cancel.term_count(), 0);

    let zero_scaled = p.scale(&rat(0, 1));
    assert!(zero_scaled.is_zero());

    // pow agrees with repeated multiplication.
    let cubed = p.pow(3);
    let manual = p.mul(&p).mul(&p);
    assert!(cubed.sub(&manual).is_zero());
    assert_eq!(p.pow(0).term_count(), 1);
}

#[test]
fn derivative_and_degrees() {
    // p = x^2 y + 3 z
    let p = x().pow(2).mul(&y()).add(&z().scale(&rat(3, 1)));
    let dx = p.derivative(0);
    let expected = x().mul(&y()).scale(&rat(2, 1));
    assert!(dx.sub(&expected).is_zero());
    assert!(p.derivative(2).sub(&MultiPoly::from_int(3, 3)).is_zero());

    assert_eq!(p.degree_in(0), 2);
    assert_eq!(p.degree_in(1), 1);
    assert_eq!(p.total_degree(), 3);
    assert_eq!(x().pow(2).mul(&y()).homogeneous_degree_in(&[0, 1]), Some(3));
    assert_eq!(p.homogeneous_degree_in(&[0, 1, 2]), None);
}

#[test]
fn evaluation_paths_agree() {
    let p = x().pow(3).sub(&y().mul(&z()).scale(&rat(7, 2)));
    let point = [rat(2, 3), rat(-1, 5), rat(4, 7)];
    let exact = p.eval(&point);
    let approx = p.eval_complex(&[
        Complex64::new(2.0 / 3.0, 0.0),
        Complex64::new(-0.2, 0.0),
        Complex64::new(4.0 / 7.0, 0.0),
    ]);
    let exact_f = exact.numer().to_string().parse::<f64>().unwrap()
        / exact.denom().to_string().parse::<f64>().unwrap();
    assert!((approx.re - exact_f).abs() < 1e-12);
    assert!(approx.im.abs() < 1e-15);
}

#[test]
fn substitution_forms() {
    let p = x().pow(2).add(&y());
    // Constant substitution keeps the variable count.
    let at_half = p.substitute(0, &rat(1, 2));
    assert_eq!(at_half.nvars(), 3);
    assert!(at_half
        .sub(&y().add(&MultiPoly::constant(3, rat(1, 4))))
        .is_zero());

    // Polynomial substitution composes.
    let composed = p.substitute_poly(0, &y().add(&z()));
    let expected = y().add(&z()).pow(2).add(&y());
    assert!(composed.sub(&expected).is_zero());

    // Ratio substitution clears the denominator by the degree in x:
    // (x^2 + y) with x -> y/z becomes y^2 + y z^2.
    let cleared = p.subst_ratio(0, &y(), &z());
    let expected = y().pow(2).add(&y().mul(&z().pow(2)));
    assert!(cleared.sub(&expected).is_zero());
}

#[test]
fn square_reduction_respects_parity() {
    // Reduce y^2 -> 1 - x^2 inside y^3 x: odd power keeps one y.
    let p = y().pow(3).mul(&x());
    let rep = MultiPoly::one(3).sub(&x().pow(2));
    let reduced = p.reduce_square(1, &rep);
    let expected = y().mul(&x()).mul(&rep);
    assert!(reduced.sub(&expected).is_zero());
    assert_eq!(reduced.degree_in(1), 1);
}

#[test]
fn sign_maps_and_permutations() {
    let p = x().pow(2).mul(&y()).add(&z());
    let flipped = p.map_signs(&[-1, 1, 1]);
    // x appears squared, so only the z term could change; it does not.
    assert!(flipped.sub(&p).is_zero());
    let odd_flip = p.map_signs(&[1, -1, 1]);
    let expected = z().sub(&x().pow(2).mul(&y()));
    assert!(odd_flip.sub(&expected).is_zero());
    // Applying a sign map twice is the identity.
    assert!(p.map_signs(&[-1, -1, 1]).map_signs(&[-1, -1, 1]).sub(&p).is_zero());

    // Cyclic permutation x -> y -> z -> x.
    let rotated = p.permute_vars(&[1, 2, 0]);
    let expected = y().pow(2).mul(&z()).add(&x());
    assert!(rotated.sub(&expected).is_zero());
    let back = rotated.permute_vars(&[2, 0, 1]);
    assert!(back.sub(&p).is_zero());
}

#[test]
fn vandermonde_determinant_factors() {
    let one = MultiPoly::one(3);
    let rows = vec![
        vec![one.clone(), x(), x().pow(2)],
        vec![one.clone(), y(), y().pow(2)],
        vec![one.clone(), z(), z().pow(2)],
    ];
    let det = determinant(&rows).unwrap();
    let expected = y()
        .sub(&x())
        .mul(&z().sub(&x()))
        .mul(&z().sub(&y()));
    assert!(det.sub(&expected).is_zero());
}

#[test]
fn determinant_agrees_with_rational_path() {
    // Evaluate a polynomial determinant at a rational point and compare with
    // the pure rational determinant of the evaluated matrix.
    let rows = vec![
        vec![x().add(&y()), z(), MultiPoly::from_int(3, 2)],
        vec![y().pow(2), x().sub(&z()), y()],
        vec![MultiPoly::one(3), x().mul(&z()), z().pow(3)],
    ];
    let det = determinant(&rows).unwrap();
    let point = [rat(3, 7), rat(-2, 5), rat(11, 4)];
    let direct = det.eval(&point);
    let numeric_rows: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| row.iter().map(|p| p.eval(&point)).collect())
        .collect();
    let via_numbers = rational_det(&numeric_rows).unwrap();
    assert_eq!(direct, via_numbers);
}

#[test]
fn determinant_rejects_ragged_input() {
    let rows = vec![vec![x(), y()], vec![z()]];
    match determinant(&rows) {
        Err(PolyError::NotSquare { rows: r, cols: c }) => {
            assert_eq!((r, c), (2, 1));
        }
        other => panic!("expected NotSquare, got {:?}", other),
    }
    let numeric = vec![vec![rat(1, 1)], vec![rat(2, 1)]];
    assert!(matches!(
        rational_det(&numeric),
        Err(PolyError::NotSquare { .. })
    ));
}

#[test]
fn rendering_is_stable() {
    let names = ["x1", "x2", "x3"];
    assert_eq!(MultiPoly::zero(3).render(&names), "0");
    let p = x().mul(&y()).scale(&rat(4, 1));
    assert_eq!(p.render(&names), "4*x1*x2");
    let q = x().pow(2).sub(&y());
    let rendered = q.render(&names);
    assert!(rendered.contains("x1^2"), "rendered form: {}", rendered);
    assert!(rendered.contains("- x2") || rendered.contains("-x2") || rendered.contains("-1*x2"),
        "rendered form: {}", rendered);
}
