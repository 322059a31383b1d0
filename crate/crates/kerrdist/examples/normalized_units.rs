//! The dimensionless form of the problem: amplitudes scale by √(γL) and
//! distances by L²γ, so one solve on the unit fiber (L = 1, γ = 1) serves any
//! physical fiber. This example computes a distance in physical units and via
//! the normalized route and checks the scaling law across two different
//! fibers sharing the same normalized inputs.
//!
//! ```bash
//! cargo run --release --example normalized_units
//! ```

use kerrdist::distance::{self, DistanceOptions, NormalizedUnits};
use kerrdist::{ComplexPoint, FiberParams};

fn main() -> anyhow::Result<()> {
    let fiber = FiberParams::reference();
    let opts = DistanceOptions::default();
    let units = NormalizedUnits::new(&fiber)?;

    let x1 = ComplexPoint::new(0.03, 0.005);
    let x2 = ComplexPoint::new(-0.012, 0.02);
    println!("scale: amplitude x{:.4}, distance x{:.4e}", units.scale_amplitude, units.scale_distance);
    println!("normalized inputs: {} and {}", units.normalize_point(x1), units.normalize_point(x2));

    let physical = distance::exact_distance(x1, x2, &fiber, &opts)?.value;
    let normalized = distance::exact_distance_normalized(x1, x2, &fiber, &opts)?.value;
    println!("\nphysical-units solve:    {physical:.9e}");
    println!("via dimensionless solve: {normalized:.9e}");
    println!("relative gap:            {:.2e}", (physical - normalized).abs() / physical);

    // Scaling law: a different fiber with matched normalized inputs maps by
    // the ratio of L²γ factors.
    let other = FiberParams::new(500.0, 2.1)?;
    let other_units = NormalizedUnits::new(&other)?;
    let y1 = units.normalize_point(x1) / other_units.scale_amplitude;
    let y2 = units.normalize_point(x2) / other_units.scale_amplitude;
    let d_other = distance::exact_distance(y1, y2, &other, &opts)?.value;
    println!("\nsecond fiber (L = 500, gamma = 2.1) with matched normalized inputs:");
    println!("  direct solve           {d_other:.9e}");
    println!("  mapped from first:     {:.9e}", physical * units.scale_distance / other_units.scale_distance);
    Ok(())
}
