//! Evaluate theta functions with half-integer characteristics: values, jets,
//! the Gaussian scale, parity, and the functional equation under lattice
//! translations.

use num_complex::Complex64;
use theta122::theta::{
    automorphy_factor, brute_force_jet, theta_jet, theta_scale, PeriodMatrix,
    ThetaCharacteristic, TruncationPolicy,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let policy = TruncationPolicy::default();

    // Genus one: the classical value theta(0, i) = pi^(1/4) / Gamma(3/4).
    let pm1 = PeriodMatrix::scalar(Complex64::new(0.0, 1.0))?;
    let chi0 = ThetaCharacteristic::zero(1);
    let origin = [Complex64::new(0.0, 0.0)];
    let v = theta_jet(&origin, &pm1, &chi0, &policy)?;
    println!("theta[0,0](0, i)            = {:.15}", v.value.re);
    println!("reference pi^1/4/Gamma(3/4) = 1.086434811213308");

    // The odd characteristic [1/2, 1/2] vanishes at the origin.
    let odd = ThetaCharacteristic::half(&[1], &[1]);
    let vo = theta_jet(&origin, &pm1, &odd, &policy)?;
    println!(
        "odd characteristic at origin: |value| = {:.3e}, |derivative| = {:.3}",
        vo.value.norm(),
        vo.gradient[0].norm()
    );

    // Genus three, diagonal period matrix: the four even basis labels.
    let pm3 = PeriodMatrix::diagonal(&[
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 1.3),
        Complex64::new(0.0, 0.7),
    ])?;
    let z = [
        Complex64::new(0.21, 0.13),
        Complex64::new(-0.34, 0.05),
        Complex64::new(0.11, -0.22),
    ];
    println!("\nbasis sections at a genus-3 point (scale {:.3}):", theta_scale(&z, &pm3));
    for bits in [[0u8, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]] {
        let chi = ThetaCharacteristic::from_half_bits(&bits);
        let jet = theta_jet(&z, &pm3, &chi, &policy)?;
        let slow = brute_force_jet(&z, &pm3, &chi, 10);
        println!(
            "  theta[{}{}{}] = {:>24.16e}  (brute-force gap {:.1e})",
            bits[0],
            bits[1],
            bits[2],
            jet.value,
            (jet.value - slow.value).norm() / jet.scale
        );
    }

    // Functional equation: translate by a period and compare with the
    // automorphy factor.
    let lam: Vec<Complex64> = (0..3).map(|i| pm3.entry(i, 1)).collect();
    let shifted: Vec<Complex64> = z.iter().zip(lam.iter()).map(|(a, b)| a + b).collect();
    let chi = ThetaCharacteristic::zero(3);
    let lhs = theta_jet(&shifted, &pm3, &chi, &policy)?.value;
    let rhs = automorphy_factor(&lam, &z, &pm3)? * theta_jet(&z, &pm3, &chi, &policy)?.value;
    println!(
        "\nfunctional equation along the second tau column: defect {:.3e}",
        (lhs - rhs).norm() / lhs.norm()
    );
    Ok(())
}
