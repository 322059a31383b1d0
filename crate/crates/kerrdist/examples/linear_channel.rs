//! Linear evolution channels solved per Fourier mode: the dispersion-only
//! channel has μ = 1/2 and a distance proportional to the squared Euclidean
//! distance, Σ|ΔX_m|²/(4L) = (1/(8LT))·∫|x₂−x₁|²dt. Also demonstrates the
//! waveform distance of the nondispersive channel as a time integral of the
//! per-sample distance.
//!
//! ```bash
//! cargo run --release --example linear_channel
//! ```

use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use kerrdist::linear::{linear_distance, solve_mu, waveform_distance, ChannelPolynomial, FourierSignal};
use kerrdist::{ComplexPoint, FiberParams};

fn main() -> anyhow::Result<()> {
    let length = 2000.0;
    let half_window = 1.0;
    let poly = ChannelPolynomial::dispersive(-0.021);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut x1 = FourierSignal::zero(half_window, 16);
    let mut x2 = FourierSignal::zero(half_window, 16);
    for m in -16..=16i64 {
        x1.set_coeff(m, Complex64::new(rng.random_range(-0.02..0.02), rng.random_range(-0.02..0.02)));
        x2.set_coeff(m, Complex64::new(rng.random_range(-0.02..0.02), rng.random_range(-0.02..0.02)));
    }

    let mu = solve_mu(&x1, &x2, &poly, length)?;
    println!("dispersion-only channel, 33 modes:");
    println!("  solved multiplier mu = {mu:.12}");

    let d = linear_distance(&x1, &x2, &poly, length)?;
    let mut sum_dx = 0.0;
    for m in -16..=16i64 {
        sum_dx += (x2.coeff(m) - x1.coeff(m)).norm_sqr();
    }
    println!("  linear distance        {d:.9e}");
    println!("  closed form sum/4L     {:.9e}", sum_dx / (4.0 * length));

    // Time-domain cross-check via Parseval.
    let n = 2048;
    let h = 2.0 * half_window / n as f64;
    let mut integral = 0.0;
    for k in 0..=n {
        let t = -half_window + k as f64 * h;
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        integral += w * (x2.eval(t) - x1.eval(t)).norm_sqr();
    }
    integral *= h;
    println!("  (1/8LT)·integral       {:.9e}", integral / (8.0 * length * half_window));

    // Waveform distance of the nondispersive channel: rectangular antipodal
    // pulses give 2T·d(A, −A).
    let fiber = FiberParams::new(length, 0.0)?;
    let t_grid: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 / 100.0).collect();
    let a = ComplexPoint::new(0.02, 0.0);
    let w1 = vec![a; t_grid.len()];
    let w2 = vec![-a; t_grid.len()];
    let mut per_sample = |p: ComplexPoint, q: ComplexPoint| Ok((p - q).norm_sqr() / (4.0 * length));
    let dw = waveform_distance(&t_grid, &w1, &w2, &fiber, &mut per_sample)?;
    println!("\nnondispersive waveform distance of antipodal rectangular pulses:");
    println!("  quadrature {dw:.9e}, closed form {:.9e}", 2.0 * (2.0 * a).norm_sqr() / (4.0 * length));
    Ok(())
}
