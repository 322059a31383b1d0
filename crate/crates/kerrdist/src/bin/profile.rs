// Internal profiling scratchpad (not part of the public surface).
use kerrdist::constellation::Constellation;
use kerrdist::stochastic::{self, NoiseConfig};
use kerrdist::FiberParams;
use num_complex::Complex64 as C;

fn main() {
    let fiber = FiberParams::reference();
    let c = Constellation::new(vec![C::new(0.05, 0.0), C::new(-0.05, 0.0)], 0.0025, fiber).unwrap();
    let noise = NoiseConfig::new(1e-12, 1.0, &fiber).unwrap();
    // raw outputs
    for pi in 0..2 {
        let mut outs = Vec::new();
        for t in 0..500 {
            let mut rng = stochastic::trial_rng(3, pi, t);
            outs.push(stochastic::simulate_once(c.points[pi], &noise, &fiber, &mut rng));
        }
        let mean = outs.iter().sum::<C>() / outs.len() as f64;
        let var_re = outs.iter().map(|y| (y.re - mean.re).powi(2)).sum::<f64>() / outs.len() as f64;
        let var_im = outs.iter().map(|y| (y.im - mean.im).powi(2)).sum::<f64>() / outs.len() as f64;
        let expect = kerrdist::channel::propagate_noise_free(c.points[pi], &fiber);
        println!(
            "point {pi}: mean ({:.6},{:.6}) expect ({:.6},{:.6}) std_re {:.3e} std_im {:.3e}",
            mean.re, mean.im, expect.re, expect.im, var_re.sqrt(), var_im.sqrt()
        );
    }
    let hist = stochastic::train_histogram(&c, &noise, &fiber, 500, 64, 3).unwrap();
    println!("bounds re [{:.4},{:.4}] im [{:.4},{:.4}]", hist.re_min, hist.re_max, hist.im_min, hist.im_max);
    for pi in 0..2 {
        let mut top: Vec<(u32, usize)> = hist.counts[pi].iter().cloned().zip(0..).filter(|(c_, _)| *c_ > 0).collect();
        top.sort_by(|a, b| b.0.cmp(&a.0));
        print!("point {pi} top bins:");
        for (cnt, cell) in top.iter().take(8) {
            print!(" [{},{}]={}", cell % 64, cell / 64, cnt);
        }
        println!(" ({} populated)", top.len());
    }
}
