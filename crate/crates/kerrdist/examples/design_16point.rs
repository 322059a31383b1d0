//! Max–min-distance design of a 16-point constellation on a polar grid via
//! the threshold-graph / maximum-clique procedure, compared against 16-QAM of
//! the same peak power.
//!
//! Desk scale by default (10×16 grid); pass `--full` for the 20×40 grid.
//!
//! ```bash
//! cargo run --release --example design_16point [-- --full]
//! ```

use kerrdist::constellation::{design_max_min, distance_matrix, polar_grid, Constellation, DistanceSource};
use kerrdist::distance::{self, DistanceOptions};
use kerrdist::FiberParams;

fn main() -> anyhow::Result<()> {
    let full = std::env::args().any(|a| a == "--full");
    let fiber = FiberParams::reference();
    let opts = DistanceOptions::default();
    let (n_radii, n_phases) = if full { (20, 40) } else { (10, 16) };
    let r_max = 0.05;
    let peak = r_max * r_max;

    println!("candidate grid: {n_radii} radii x {n_phases} phases, peak power {peak} W");
    let grid = polar_grid(n_radii, r_max, n_phases)?;
    let t0 = std::time::Instant::now();
    let matrix = distance_matrix(&grid, &fiber, &DistanceSource::Exact(&opts))?;
    println!(
        "distance matrix: {} points, {} unique solves, {:.1} s",
        matrix.len(),
        matrix.solves,
        t0.elapsed().as_secs_f64()
    );

    let (designed, threshold) = design_max_min(&matrix, 16, peak, fiber)?;
    println!("\ndesigned 16-point constellation, min distance {threshold:.6e}:");
    for p in &designed.points {
        println!("  ({:>9.5}, {:>9.5})  |x| = {:.4}", p.re, p.im, p.norm());
    }

    let qam = Constellation::qam(16, peak, fiber)?;
    let mut exact = |a, b| distance::exact_distance(a, b, &fiber, &opts).map(|r| r.value);
    let d_qam = qam.min_distance(&mut exact)?;
    let d_designed = designed.min_distance(&mut exact)?;
    println!("\nmin adversarial distance:");
    println!("  designed: {d_designed:.6e}");
    println!("  16-QAM:   {d_qam:.6e}");
    println!("  ratio:    {:.2}x", d_designed / d_qam);
    println!("\navg power: designed {:.6e} W, QAM {:.6e} W", designed.avg_power(), qam.avg_power());
    Ok(())
}
