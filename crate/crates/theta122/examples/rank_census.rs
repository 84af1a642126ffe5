//! Rank of the canonical map's first-order data: full rank at generic and
//! base points, and a census of the finitely many degeneracy points with
//! their behaviour under negation.

use num_complex::Complex64;
use theta122::canonical;
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

    // Generic surface points: the 4 x 7 first-order matrix has full rank.
    println!("rank at random surface points:");
    for seed in 0..4u64 {
        let p = canonical::sample_surface_point(&spec, 500 + seed)?;
        let report = canonical::diff_rank_matrix(&spec, &p.z)?;
        let ratio = report.singular_values[3] / report.singular_values[0];
        println!(
            "  seed {}: rank {} (sigma_4 / sigma_1 = {:.3e})",
            500 + seed,
            report.rank_estimate,
            ratio
        );
    }

    // Base points of the linear system keep full rank as well.
    let base = models::base_points(&spec)?;
    let report = canonical::diff_rank_matrix(&spec, &base[0].z)?;
    println!(
        "rank at the first of {} base points: {} (sigma_4 / sigma_1 = {:.3e})",
        base.len(),
        report.rank_estimate,
        report.singular_values[3] / report.singular_values[0]
    );

    // Census of the points where the rank actually drops.
    let census = canonical::rank_census(&spec)?;
    println!("\ndegeneracy census:");
    println!(
        "  pencil-pair zeros per block torus: {:?}",
        census.block_zero_counts
    );
    println!("  degeneracy points modulo the lattice: {}", census.points.len());
    let mut worst_ratio = 0.0f64;
    let mut rank_counts = [0usize; 5];
    for pt in &census.points {
        worst_ratio = worst_ratio.max(pt.rank.singular_values[3] / pt.rank.singular_values[0]);
        rank_counts[pt.rank.rank_estimate.min(4)] += 1;
    }
    println!("  rank histogram (rank 0..4): {:?}", rank_counts);
    println!("  largest sigma_4 / sigma_1 over the census: {:.3e}", worst_ratio);
    println!(
        "  fixed by negation: {}, antipodal pairs: {}",
        census.negation_fixed, census.antipodal_pairs
    );
    println!(
        "  so the census is {} points, or {} modulo negation",
        census.points.len(),
        census.negation_fixed + census.antipodal_pairs
    );

    // A closer look at one census point.
    let pt = &census.points[0];
    println!("\nfirst census point (axis {}):", pt.axis);
    println!(
        "  z = ({:.4}, {:.4}, {:.4})",
        pt.z[0], pt.z[1], pt.z[2]
    );
    let sv = &pt.rank.singular_values;
    println!(
        "  singular values: {:.3e}, {:.3e}, {:.3e}, {:.3e}",
        sv[0], sv[1], sv[2], sv[3]
    );
    Ok(())
}
