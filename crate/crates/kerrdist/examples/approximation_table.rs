//! Build the deviation table behind the fast distance approximation, persist
//! it as CSV, and measure its accuracy against the exact solver on held-out
//! pairs (off-grid radii, random angles).
//!
//! ```bash
//! cargo run --release --example approximation_table
//! ```

use rand::{Rng, SeedableRng};

use kerrdist::approx::{self, phi_star};
use kerrdist::distance::{self, DistanceOptions};
use kerrdist::{ComplexPoint, FiberParams};

fn main() -> anyhow::Result<()> {
    let fiber = FiberParams::reference();
    let opts = DistanceOptions::default();

    // Desk-scale table: 14 radii up to 0.05 (the full build uses 26).
    let radii = approx::uniform_radii(14, 0.05);
    println!("building {0}x{0} deviation table ...", radii.len());
    let table = approx::build_table(&fiber, &radii, &opts)?;

    let path = std::env::temp_dir().join("kerrdist_table.csv");
    table.save_csv(&path)?;
    println!("table saved to {}\n", path.display());

    println!("deviation A along the diagonal (antipodal pairs):");
    for (i, &r) in table.radii.iter().enumerate().step_by(3) {
        println!("  A({r:.3}, {r:.3}) = {:.6e}", table.values[i][i]);
    }

    println!("\nphi* examples: phi*(0.03, 0.01) = {:.4} rad", phi_star(0.03, 0.01, &fiber));

    // Held-out accuracy.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut errors: Vec<f64> = Vec::new();
    for _ in 0..25 {
        let r1 = rng.random_range(0.005..0.05);
        let r2 = rng.random_range(0.005..0.05);
        let phi1 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let phi2 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let x1 = ComplexPoint::from_polar(r1, phi1);
        let x2 = ComplexPoint::from_polar(r2, phi2);
        let exact = distance::exact_distance(x1, x2, &fiber, &opts)?.value;
        let fast = table.distance(x1, x2)?;
        errors.push((fast - exact).abs() / exact);
    }
    errors.sort_by(f64::total_cmp);
    println!(
        "\nheld-out relative error over {} pairs: median {:.1}%, max {:.1}%",
        errors.len(),
        100.0 * errors[errors.len() / 2],
        100.0 * errors.last().unwrap()
    );
    Ok(())
}
