//! The base locus of the linear system: sixteen points in four half-period
//! orbits, each annihilating all four basis sections, stable under
//! deformation of the period matrix.

use num_complex::Complex64;
use theta122::models::{self, SurfaceSpec};
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

    let pts = models::base_points(&spec)?;
    println!("{} base points, listed orbit by orbit:", pts.len());
    for (i, p) in pts.iter().enumerate() {
        if i % 4 == 0 {
            println!("  orbit {}:", i / 4);
        }
        let jets = models::basis_jets(&spec, &p.z)?;
        let worst = jets
            .iter()
            .map(|j| j.value.norm() / j.scale)
            .fold(0.0, f64::max);
        println!(
            "    ({:>6.3} {:>+6.3}i, {:>6.3} {:>+6.3}i, {:>6.3} {:>+6.3}i)  \
             max |section|/scale = {:.1e}",
            p.z[0].re, p.z[0].im, p.z[1].re, p.z[1].im, p.z[2].re, p.z[2].im, worst
        );
    }

    // All sixteen are distinct modulo the full period lattice.
    let mut min_gap = f64::INFINITY;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            min_gap = min_gap.min(models::lattice_distance(
                &pts[i].z, &pts[j].z, &spec.tau, true,
            ));
        }
    }
    println!("smallest pairwise gap modulo the lattice: {:.3}", min_gap);

    // The locus survives coupling the first two factors: continuation walks
    // the same sixteen points through nonzero off-diagonal entries.
    let eps = c(0.05, 0.02);
    let coupled_tau = PeriodMatrix::from_rows(&[
        vec![spec.tau.entry(0, 0), eps, c(0.0, 0.0)],
        vec![eps, spec.tau.entry(1, 1), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), spec.tau.entry(2, 2)],
    ])?;
    let coupled = spec.with_tau(coupled_tau)?;
    let continued = models::base_points_continued(&coupled)?;
    let worst = continued
        .iter()
        .map(|p| {
            models::basis_jets(&coupled, &p.z)
                .map(|jets| {
                    jets.iter()
                        .map(|j| j.value.norm() / j.scale)
                        .fold(0.0, f64::max)
                })
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    println!(
        "after coupling tau_12 = {}: {} continued points, worst residual {:.1e}",
        eps,
        continued.len(),
        worst
    );
    Ok(())
}
