//! Per-factor coordinate on the quotient curve: normalization of the
//! Legendre-style coordinate, its special values, the differential relation,
//! and the change of basis that matches the analytic sections to the affine
//! chart on which the symbolic work runs.

use num_complex::Complex64;
use theta122::legendre::{self, LegendreModel};
use theta122::models::{two_torsion_values, SurfaceSpec};
use theta122::theta::{PeriodMatrix, TruncationPolicy};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tau = c(0.0, 1.3);
    let policy = TruncationPolicy::default();
    let model = LegendreModel::new(tau, policy)?;

    println!("coordinate normalization on the factor with tau = {}:", tau);
    println!(
        "  winner: {:?} (error {:.3e}; the plain placement misses by {:.3e})",
        model.normalization.winner,
        model.normalization.rescaled_error,
        model.normalization.plain_error
    );
    println!("  branch parameter a = {:.6}", model.a_param);
    println!("  differential scale kappa = {:.6}", model.kappa);

    // Special values at the two-torsion points of the doubled lattice.
    let torsion = two_torsion_values(tau);
    let expected = [c(1.0, 0.0), c(-1.0, 0.0), model.a_param, -model.a_param];
    println!("\nspecial values:");
    for (t, want) in torsion.iter().zip(expected.iter()) {
        let got = model.x(*t)?;
        println!(
            "  x({:.3}) = {:.6}, defect from {:.3} is {:.3e}",
            t,
            got,
            want,
            (got - want).norm()
        );
    }

    // The coordinate has its pole where theta_0 vanishes.
    let pole = tau * 0.5 + c(0.5, 0.0);
    match model.x(pole) {
        Err(legendre::LegendreError::PoleAtZ { magnitude }) => {
            println!("\npole at tau/2 + 1/2: theta_0 magnitude there is {:.3e}", magnitude)
        }
        other => println!("\nunexpected value at the pole candidate: {:?}", other),
    }

    // Differential relation (kappa x')^2 = (x^2 - 1)(x^2 - a^2) off the poles.
    let mut worst = 0.0f64;
    for k in 0..12 {
        let z = c(0.11 + 0.13 * k as f64, 0.07) + tau * (0.06 * k as f64);
        let (x, y) = match model.analytic_to_affine(z) {
            Ok(p) => p,
            Err(legendre::LegendreError::PoleAtZ { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        let rhs = model.curve_rhs(x);
        let unit = (y * y).norm().max(rhs.norm()).max(1.0);
        worst = worst.max((y * y - rhs).norm() / unit);
    }
    println!("curve relation residual over a dozen sample points: {:.3e}", worst);

    // Alignment of the analytic basis sections with the affine chart used by
    // the symbolic identities, fitted on sampled surface points and judged on
    // held-out ones.
    let tau3 = PeriodMatrix::diagonal(&[c(0.0, 1.0), c(0.0, 1.3), c(0.0, 0.7)])?;
    let spec = SurfaceSpec::new(tau3, c(0.9, 0.1), c(1.1, -0.2), c(0.8, 0.3), policy)?;
    let align = legendre::basis_alignment(&spec, 1)?;
    println!("\nanalytic-to-affine alignment:");
    println!(
        "  fitted on {} points, held out {}: worst chordal gap {:.3e}",
        align.fit_points, align.heldout_points, align.heldout_max_chordal
    );
    println!("  matrix condition number: {:.3e}", align.condition_number);
    println!(
        "  off-pattern to on-pattern entry ratio: {:.3e} (the matrix is anti-diagonal)",
        align.pattern_offdiag_ratio
    );
    println!(
        "  pulled-back surface relation residual: {:.3e}",
        align.surface_relation_max
    );
    let primed = legendre::primed_coefficients(&spec)?;
    println!("  primed coefficients recovered by the fit:");
    for (k, (got, direct)) in align.primed.iter().zip(primed.iter()).enumerate() {
        println!(
            "    c{}' = {:.6} (direct formula differs by {:.3e})",
            k + 1,
            got,
            (got - direct).norm()
        );
    }
    Ok(())
}
