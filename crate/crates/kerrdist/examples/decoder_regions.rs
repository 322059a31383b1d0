//! Minimum-effort decoder look-up table: quantize the complex plane, label
//! each cell with the constellation point of least adversarial effort, and
//! render the decision regions as ASCII art. At γ = 0 the regions are the
//! Euclidean Voronoi cells; the Kerr rotation visibly swirls them.
//!
//! ```bash
//! cargo run --release --example decoder_regions
//! ```

use kerrdist::constellation::Constellation;
use kerrdist::stochastic::{decoder_table, EffortSource, GridSpec};
use kerrdist::{ComplexPoint, FiberParams};

fn main() -> anyhow::Result<()> {
    let fiber = FiberParams::reference();
    let peak = 0.0025;
    let points = vec![
        ComplexPoint::new(0.05, 0.0),
        ComplexPoint::new(0.0, 0.05),
        ComplexPoint::new(-0.05, 0.0),
        ComplexPoint::new(0.0, -0.05),
        ComplexPoint::new(0.02, 0.0),
        ComplexPoint::new(-0.02, 0.0),
    ];
    let c = Constellation::new(points, peak, fiber)?;

    let n = 48;
    let spec = GridSpec { re_min: -0.08, re_max: 0.08, im_min: -0.08, im_max: 0.08, n };
    println!("labeling a {n}x{n} grid with the minimum-effort decoder ...\n");
    let table = decoder_table(&c, &fiber, &spec, &EffortSource::Approximate)?;

    let glyphs = [b'0', b'1', b'2', b'3', b'4', b'5'];
    for iy in (0..n).rev() {
        let mut line = Vec::with_capacity(n);
        for ix in 0..n {
            line.push(glyphs[table.labels[iy * n + ix] as usize % glyphs.len()]);
        }
        println!("{}", String::from_utf8(line).unwrap());
    }

    println!("\nnoise-free outputs (the cells containing them carry their label):");
    for (i, &x) in c.points.iter().enumerate() {
        let y = kerrdist::channel::propagate_noise_free(x, &fiber);
        println!("  point {i}: {x} -> {y}, decoded {}", table.decode(y));
    }

    let path = std::env::temp_dir().join("kerrdist_decoder.csv");
    table.save_csv(&path)?;
    println!("\ntable saved to {}", path.display());
    Ok(())
}
