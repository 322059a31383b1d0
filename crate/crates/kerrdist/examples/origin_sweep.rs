//! Sweep the distance from the origin d(x, 0) over input magnitudes and
//! compare the boundary-value solver against the closed form |x|²/(4L).
//!
//! ```bash
//! cargo run --release --example origin_sweep
//! ```

use kerrdist::distance::{self, DistanceOptions};
use kerrdist::{ComplexPoint, FiberParams};

fn main() -> anyhow::Result<()> {
    let fiber = FiberParams::reference();
    let opts = DistanceOptions::default();

    println!("{:>8} {:>14} {:>14} {:>10}", "x", "solver", "closed form", "rel err");
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let x = 0.05 * k as f64 / 10.0;
        let point = ComplexPoint::new(x, 0.0);
        let closed = distance::distance_from_origin(point, &fiber);
        let solved = distance::exact_distance(point, ComplexPoint::new(0.0, 0.0), &fiber, &opts)?;
        let err = (solved.value - closed).abs() / closed;
        worst = worst.max(err);
        println!("{x:>8.4} {:>14.6e} {closed:>14.6e} {err:>10.2e}", solved.value);
    }
    println!("\nworst relative error: {worst:.2e}");
    Ok(())
}
