//! Coordinate involutions through the canonical map: negating one factor
//! coordinate fixes the image exactly on the locus where the matching
//! gradient coordinate vanishes, and the symmetry survives deformation.

use num_complex::Complex64;
use theta122::canonical;
use theta122::models::SurfaceSpec;
use theta122::rng::derive_seed;
use theta122::theta::{PeriodMatrix, TruncationPolicy};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tau = PeriodMatrix::diagonal(&[c(0.0, 1.0), c(0.0, 1.3), c(0.0, 0.7)])?;
    let spec = SurfaceSpec::new(
        tau,
        c(0.9, 0.1),
        c(1.1, -0.2),
        c(0.8, 0.3),
        TruncationPolicy::default(),
    )?;

    println!("single-axis negation on its vanishing locus:");
    for axis in 0..3usize {
        let p = canonical::sample_w(&spec, axis, derive_seed(11, axis as u64))?;
        let img = canonical::canonical_image(&spec, &p.z)?;
        let mut zf = p.z;
        zf[axis] = -zf[axis];
        let flipped = canonical::canonical_image(&spec, &zf)?;
        println!(
            "  axis {}: chordal(image, image after negation) = {:.3e}",
            axis,
            img.chordal_distance(&flipped)?
        );
    }

    // Away from the locus the same negation moves the image.
    let p = canonical::sample_surface_point(&spec, derive_seed(11, 100))?;
    let img = canonical::canonical_image(&spec, &p.z)?;
    let mut zc = p.z;
    zc[0] = -zc[0];
    println!(
        "generic control: first-axis negation moves the image by {:.3}",
        img.chordal_distance(&canonical::canonical_image(&spec, &zc)?)?
    );

    // Orbit classification recovers which symmetry relates two points.
    let neg: Vec<Complex64> = p.z.iter().map(|w| -w).collect();
    let hits = canonical::orbit_classify(&spec, &p.z, &neg);
    println!("symmetries taking a point to its antipode: {} match(es)", hits.len());
    for e in &hits {
        println!("  signs {:?}, half-period shift {:?}", e.signs, e.shift);
    }

    // Couple the first two factors: the joint negation of both coupled axes
    // still fixes the intersection of their vanishing loci.
    let eps = c(0.15, 0.05);
    let tau_def = PeriodMatrix::from_rows(&[
        vec![spec.tau.entry(0, 0), eps, c(0.0, 0.0)],
        vec![eps, spec.tau.entry(1, 1), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), spec.tau.entry(2, 2)],
    ])?;
    let spec_def = spec.with_tau(tau_def)?;
    let roots = canonical::w_pair_roots(&spec_def, 0, 1, derive_seed(11, 200), 3)?;
    println!(
        "\ndeformed surface (tau_12 = {}): {} joint vanishing points found",
        eps,
        roots.len()
    );
    for root in roots.iter().take(3) {
        let img = canonical::canonical_image(&spec_def, &root.z)?;
        let mut zf = root.z;
        zf[0] = -zf[0];
        zf[1] = -zf[1];
        let flipped = canonical::canonical_image(&spec_def, &zf)?;
        println!(
            "  joint negation of the coupled axes: chordal = {:.3e}",
            img.chordal_distance(&flipped)?
        );
    }
    Ok(())
}
