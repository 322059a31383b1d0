//! Compute the adversarial distance between two input points three ways:
//! the joint boundary-value solver, the min-max decomposition, and the
//! closed-form bounds that sandwich both.
//!
//! ```bash
//! cargo run --release --example distance_query
//! ```

use kerrdist::distance::{self, DistanceOptions};
use kerrdist::{ComplexPoint, FiberParams};

fn main() -> anyhow::Result<()> {
    let fiber = FiberParams::reference();
    let opts = DistanceOptions::default();

    let pairs = [
        (ComplexPoint::new(0.04, 0.0), ComplexPoint::new(0.0, 0.0)),
        (ComplexPoint::new(0.02, 0.0), ComplexPoint::new(-0.02, 0.0)),
        (ComplexPoint::new(0.03, 0.01), ComplexPoint::new(-0.01, 0.025)),
    ];

    println!("fiber: L = {} km, gamma = {} 1/(W km)\n", fiber.length_km, fiber.gamma);
    println!(
        "{:>24} {:>24} {:>13} {:>13} {:>13} {:>13}",
        "x1", "x2", "lower", "joint", "decomp", "upper"
    );
    for (x1, x2) in pairs {
        let exact = distance::exact_distance(x1, x2, &fiber, &opts)?;
        let decomp = distance::decompose_distance(x1, x2, &fiber, &opts)?;
        println!(
            "{:>24} {:>24} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e}",
            format!("{x1}"),
            format!("{x2}"),
            exact.lower_bound,
            exact.value,
            decomp.value,
            exact.upper_bound,
        );
        if let Some(w) = &exact.witness {
            println!(
                "{:>49} meeting point {} (lambda {:.4})",
                "",
                w.meeting_point,
                w.lambda.unwrap_or(f64::NAN)
            );
        }
    }

    // The closed form for a pair involving the origin: d(x, 0) = |x|^2/(4L).
    let x = ComplexPoint::new(0.04, 0.0);
    println!(
        "\nclosed form d(0.04, 0) = {:.6e} (solver above should match within 2%)",
        distance::distance_from_origin(x, &fiber)
    );
    Ok(())
}
