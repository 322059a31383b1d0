//! Monte Carlo simulation of the Gaussian-noise per-sample channel and
//! constellation evaluation.
//!
//! The stochastic channel is simulated as a concatenation of noise-free
//! segments: across each segment the state picks up the exact Kerr rotation
//! `q ← q·exp(iγΔz|q|²)` and then a circularly symmetric complex Gaussian
//! sample of variance σ²Δz is injected. Every (point, trial) pair owns a
//! counter-derived RNG stream, so results are reproducible regardless of
//! worker scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::bvp::{self, SolverConfig};
use crate::channel::{ComplexPoint, FiberParams};
use crate::constellation::Constellation;
use crate::distance;
use crate::error::{Error, Result};

/// White Gaussian noise of power spectral density σ² injected every
/// `segment_km` of propagation.
#[derive(Debug, Clone, Copy)]
pub struct NoiseConfig {
    /// Power spectral density σ² (W/km).
    pub sigma2: f64,
    /// Segment length Δz (km); must divide the fiber length.
    pub segment_km: f64,
}

impl NoiseConfig {
    pub fn new(sigma2: f64, segment_km: f64, fiber: &FiberParams) -> Result<Self> {
        if !(sigma2 >= 0.0) {
            return Err(Error::InvalidInput("sigma2 must be nonnegative".into()));
        }
        if !(segment_km > 0.0) {
            return Err(Error::InvalidInput("segment length must be positive".into()));
        }
        let segments = (fiber.length_km / segment_km).round();
        if segments < 1.0 || (segments * segment_km - fiber.length_km).abs() > 1e-9 * fiber.length_km {
            return Err(Error::InvalidInput(format!(
                "segment length {segment_km} does not divide fiber length {}",
                fiber.length_km
            )));
        }
        Ok(NoiseConfig { sigma2, segment_km })
    }

    /// The 1 km default segmentation.
    pub fn with_sigma2(sigma2: f64, fiber: &FiberParams) -> Result<Self> {
        NoiseConfig::new(sigma2, 1.0_f64.min(fiber.length_km), fiber)
    }

    pub fn segments(&self, fiber: &FiberParams) -> usize {
        (fiber.length_km / self.segment_km).round() as usize
    }
}

/// One split-step realization of the stochastic channel.
pub fn simulate_once(
    x: ComplexPoint,
    noise: &NoiseConfig,
    fiber: &FiberParams,
    rng: &mut impl Rng,
) -> ComplexPoint {
    let segments = noise.segments(fiber);
    let dz = noise.segment_km;
    let kerr = fiber.gamma * dz;
    // Per-component standard deviation of a CN(0, σ²Δz) sample.
    let std = (0.5 * noise.sigma2 * dz).sqrt();
    let mut q = x;
    for _ in 0..segments {
        q *= Complex64::from_polar(1.0, kerr * q.norm_sqr());
        let (nr, ni): (f64, f64) =
            (StandardNormal.sample(rng), StandardNormal.sample(rng));
        q += Complex64::new(std * nr, std * ni);
    }
    q
}

// splitmix64 finalizer for counter-derived seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Independent RNG stream of a (seed, point, trial) counter triple.
pub fn trial_rng(seed: u64, point: usize, trial: usize) -> ChaCha8Rng {
    let s = mix(mix(seed ^ mix(point as u64 + 1)) ^ (trial as u64).wrapping_mul(0x2545F4914F6CDD1D));
    ChaCha8Rng::seed_from_u64(s)
}

fn simulate_outputs(
    c: &Constellation,
    noise: &NoiseConfig,
    fiber: &FiberParams,
    trials: usize,
    seed: u64,
) -> Vec<Vec<Complex64>> {
    c.points
        .par_iter()
        .enumerate()
        .map(|(pi, &x)| {
            (0..trials)
                .map(|t| simulate_once(x, noise, fiber, &mut trial_rng(seed, pi, t)))
                .collect()
        })
        .collect()
}

/// Empirical conditional output distribution captured on a square grid.
#[derive(Debug, Clone)]
pub struct Histogram2D {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    /// Bins per axis.
    pub bins: usize,
    /// counts[point][iy·bins + ix]
    pub counts: Vec<Vec<u32>>,
    /// Per-point trial totals.
    pub totals: Vec<u64>,
    pub rng_seed: u64,
}

impl Histogram2D {
    fn cell_of(&self, y: Complex64) -> usize {
        let nx = self.bins as f64;
        let ix = (((y.re - self.re_min) / (self.re_max - self.re_min) * nx) as isize)
            .clamp(0, self.bins as isize - 1) as usize;
        let iy = (((y.im - self.im_min) / (self.im_max - self.im_min) * nx) as isize)
            .clamp(0, self.bins as isize - 1) as usize;
        iy * self.bins + ix
    }

    fn cell_center(&self, cell: usize) -> Complex64 {
        let (iy, ix) = (cell / self.bins, cell % self.bins);
        let wx = (self.re_max - self.re_min) / self.bins as f64;
        let wy = (self.im_max - self.im_min) / self.bins as f64;
        Complex64::new(
            self.re_min + (ix as f64 + 0.5) * wx,
            self.im_min + (iy as f64 + 0.5) * wy,
        )
    }
}

/// Train the conditional histogram: `trials` channel uses per constellation
/// point, bounds auto-sized to cover every observed output with a 5% margin.
pub fn train_histogram(
    c: &Constellation,
    noise: &NoiseConfig,
    fiber: &FiberParams,
    trials: usize,
    bins: usize,
    rng_seed: u64,
) -> Result<Histogram2D> {
    let outputs = simulate_outputs(c, noise, fiber, trials, rng_seed);
    let mut re_min = f64::INFINITY;
    let mut re_max = f64::NEG_INFINITY;
    let mut im_min = f64::INFINITY;
    let mut im_max = f64::NEG_INFINITY;
    for y in outputs.iter().flatten() {
        re_min = re_min.min(y.re);
        re_max = re_max.max(y.re);
        im_min = im_min.min(y.im);
        im_max = im_max.max(y.im);
    }
    let margin = |lo: f64, hi: f64| {
        let span = (hi - lo).max(1e-9 * hi.abs().max(lo.abs()).max(1e-12));
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (re_min, re_max) = margin(re_min, re_max);
    let (im_min, im_max) = margin(im_min, im_max);
    train_histogram_from_outputs(&outputs, (re_min, re_max, im_min, im_max), bins, rng_seed)
}

/// Train on fixed bounds (used for paired-batch comparisons); outputs outside
/// the bounds are clamped into the edge bins.
pub fn train_histogram_bounded(
    c: &Constellation,
    noise: &NoiseConfig,
    fiber: &FiberParams,
    trials: usize,
    bins: usize,
    rng_seed: u64,
    bounds: (f64, f64, f64, f64),
) -> Result<Histogram2D> {
    let outputs = simulate_outputs(c, noise, fiber, trials, rng_seed);
    train_histogram_from_outputs(&outputs, bounds, bins, rng_seed)
}

fn train_histogram_from_outputs(
    outputs: &[Vec<Complex64>],
    bounds: (f64, f64, f64, f64),
    bins: usize,
    rng_seed: u64,
) -> Result<Histogram2D> {
    if bins < 2 {
        return Err(Error::InvalidInput("histogram needs at least 2 bins per axis".into()));
    }
    let (re_min, re_max, im_min, im_max) = bounds;
    let mut hist = Histogram2D {
        re_min,
        re_max,
        im_min,
        im_max,
        bins,
        counts: vec![vec![0u32; bins * bins]; outputs.len()],
        totals: vec![0u64; outputs.len()],
        rng_seed,
    };
    for (pi, ys) in outputs.iter().enumerate() {
        for &y in ys {
            let cell = hist.cell_of(y);
            hist.counts[pi][cell] += 1;
            hist.totals[pi] += 1;
        }
    }
    Ok(hist)
}

/// Plug-in mutual information of the histogram channel with uniform inputs,
/// I = Σ_x (1/M) Σ_bins p̂(bin|x)·log₂(p̂(bin|x)/p̄(bin)); empty bins skipped.
pub fn mutual_information(hist: &Histogram2D) -> f64 {
    let m = hist.counts.len() as f64;
    let cells = hist.bins * hist.bins;
    let mut mi = 0.0;
    for cell in 0..cells {
        let mut marginal = 0.0;
        for (pi, counts) in hist.counts.iter().enumerate() {
            if hist.totals[pi] > 0 {
                marginal += counts[cell] as f64 / hist.totals[pi] as f64;
            }
        }
        if marginal == 0.0 {
            continue;
        }
        let marginal = marginal / m;
        for (pi, counts) in hist.counts.iter().enumerate() {
            let p = counts[cell] as f64 / hist.totals[pi] as f64;
            if p > 0.0 {
                mi += p / m * (p / marginal).log2();
            }
        }
    }
    mi.max(0.0)
}

/// Square quantization grid of the complex plane for the look-up decoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    /// Cells per axis.
    pub n: usize,
}

impl GridSpec {
    /// Square grid centred on the noise-free outputs of a constellation,
    /// padded by `pad` times the output radius spread.
    pub fn covering(c: &Constellation, pad: f64, n: usize) -> Self {
        let outs: Vec<Complex64> =
            c.points.iter().map(|&x| crate::channel::propagate_noise_free(x, &c.fiber)).collect();
        let r = outs.iter().map(|y| y.norm()).fold(0.0, f64::max).max(1e-6);
        let half = r * (1.0 + pad);
        GridSpec { re_min: -half, re_max: half, im_min: -half, im_max: half, n }
    }

    fn cell_center(&self, cell: usize) -> Complex64 {
        let (iy, ix) = (cell / self.n, cell % self.n);
        let wx = (self.re_max - self.re_min) / self.n as f64;
        let wy = (self.im_max - self.im_min) / self.n as f64;
        Complex64::new(self.re_min + (ix as f64 + 0.5) * wx, self.im_min + (iy as f64 + 0.5) * wy)
    }

    fn cell_of(&self, y: Complex64) -> usize {
        let n = self.n as f64;
        let ix = (((y.re - self.re_min) / (self.re_max - self.re_min) * n) as isize)
            .clamp(0, self.n as isize - 1) as usize;
        let iy = (((y.im - self.im_min) / (self.im_max - self.im_min) * n) as isize)
            .clamp(0, self.n as isize - 1) as usize;
        iy * self.n + ix
    }
}

/// How per-cell efforts E(x, y) are computed for the look-up decoder.
pub enum EffortSource<'a> {
    /// Single-trajectory BVP solves.
    Exact(&'a SolverConfig),
    /// Constant-envelope closed form minimized over winding (fast proxy).
    Approximate,
}

/// Minimum-effort decoder look-up table: each grid cell is labeled with the
/// constellation point of least adversarial effort to its center.
#[derive(Debug, Clone)]
pub struct DecoderTable {
    pub spec: GridSpec,
    /// Row-major point indices.
    pub labels: Vec<u16>,
}

/// Build the decoder table; exact-source failures identify the offending cell.
pub fn decoder_table(
    c: &Constellation,
    fiber: &FiberParams,
    spec: &GridSpec,
    source: &EffortSource<'_>,
) -> Result<DecoderTable> {
    if c.is_empty() {
        return Err(Error::UntrainedDecoder("empty constellation".into()));
    }
    let cells = spec.n * spec.n;
    let labels: Vec<Result<u16>> = (0..cells)
        .into_par_iter()
        .map(|cell| {
            let y = spec.cell_center(cell);
            let mut best = (f64::INFINITY, 0u16);
            for (pi, &x) in c.points.iter().enumerate() {
                let effort = match source {
                    EffortSource::Exact(cfg) => {
                        if (y - crate::channel::propagate_noise_free(x, fiber)).norm() < 1e-12 {
                            0.0
                        } else {
                            bvp::solve_effort(x, y, fiber, &bvp::effort_seeds_extended(x, y, fiber, cfg), cfg)
                                .map_err(|e| {
                                    Error::InvalidInput(format!(
                                        "decoder cell {cell} (y = {y}) point {pi}: {e}"
                                    ))
                                })?
                                .effort
                        }
                    }
                    EffortSource::Approximate => distance::envelope_effort_min_winding(x, y, fiber),
                };
                if effort < best.0 {
                    best = (effort, pi as u16);
                }
            }
            Ok(best.1)
        })
        .collect();
    let labels = labels.into_iter().collect::<Result<Vec<u16>>>()?;
    Ok(DecoderTable { spec: *spec, labels })
}

impl DecoderTable {
    pub fn decode(&self, y: Complex64) -> u16 {
        self.labels[self.spec.cell_of(y)]
    }

    /// CSV with a bounds/resolution header line, then `re,im,label` rows
    /// (row-major cell centers).
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(
            out,
            "# re_min={:.9e} re_max={:.9e} im_min={:.9e} im_max={:.9e} n={}",
            self.spec.re_min, self.spec.re_max, self.spec.im_min, self.spec.im_max, self.spec.n
        )?;
        writeln!(out, "re,im,label")?;
        for (cell, &label) in self.labels.iter().enumerate() {
            let y = self.spec.cell_center(cell);
            writeln!(out, "{:.9e},{:.9e},{label}", y.re, y.im)?;
        }
        Ok(())
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut lines = file.lines();
        let meta = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty decoder table".into()))??;
        let mut spec = GridSpec { re_min: 0.0, re_max: 0.0, im_min: 0.0, im_max: 0.0, n: 0 };
        for token in meta.trim_start_matches('#').split_whitespace() {
            let Some((key, value)) = token.split_once('=') else { continue };
            match key {
                "re_min" => spec.re_min = value.parse().unwrap_or(f64::NAN),
                "re_max" => spec.re_max = value.parse().unwrap_or(f64::NAN),
                "im_min" => spec.im_min = value.parse().unwrap_or(f64::NAN),
                "im_max" => spec.im_max = value.parse().unwrap_or(f64::NAN),
                "n" => spec.n = value.parse().unwrap_or(0),
                _ => {}
            }
        }
        if spec.n == 0 || !spec.re_min.is_finite() {
            return Err(Error::InvalidInput("bad decoder-table header".into()));
        }
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("missing column header".into()))??;
        if header.trim() != "re,im,label" {
            return Err(Error::InvalidInput(format!("unexpected columns: {header}")));
        }
        let mut labels = Vec::with_capacity(spec.n * spec.n);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let label = line
                .rsplit(',')
                .next()
                .and_then(|v| v.trim().parse::<u16>().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad label row: {line}")))?;
            labels.push(label);
        }
        if labels.len() != spec.n * spec.n {
            return Err(Error::InvalidInput(format!(
                "decoder table has {} labels, expected {}",
                labels.len(),
                spec.n * spec.n
            )));
        }
        Ok(DecoderTable { spec, labels })
    }
}

/// Decoders available to the SER estimator.
pub enum Decoder<'a> {
    /// Maximum empirical conditional mass on a trained histogram; unseen bins
    /// fall back to the nearest populated bin.
    HistogramMap(&'a Histogram2D),
    /// Minimum-adversarial-effort look-up table.
    AdversarialMd(&'a DecoderTable),
}

struct MapDecoder<'a> {
    hist: &'a Histogram2D,
    /// Per-cell argmax label; None where no training mass landed.
    cell_labels: Vec<Option<u16>>,
    populated: Vec<usize>,
}

impl<'a> MapDecoder<'a> {
    fn new(hist: &'a Histogram2D) -> Result<Self> {
        if hist.totals.iter().all(|&t| t == 0) {
            return Err(Error::UntrainedDecoder("histogram has no mass".into()));
        }
        let cells = hist.bins * hist.bins;
        let mut cell_labels = vec![None; cells];
        let mut populated = Vec::new();
        for cell in 0..cells {
            let mut best: Option<(f64, u16)> = None;
            for (pi, counts) in hist.counts.iter().enumerate() {
                if counts[cell] == 0 {
                    continue;
                }
                let p = counts[cell] as f64 / hist.totals[pi] as f64;
                if best.map_or(true, |(bp, _)| p > bp) {
                    best = Some((p, pi as u16));
                }
            }
            if let Some((_, label)) = best {
                cell_labels[cell] = Some(label);
                populated.push(cell);
            }
        }
        Ok(MapDecoder { hist, cell_labels, populated })
    }

    fn decode(&self, y: Complex64, fallback_cache: &mut HashMap<usize, u16>) -> u16 {
        let cell = self.hist.cell_of(y);
        if let Some(label) = self.cell_labels[cell] {
            return label;
        }
        if let Some(&label) = fallback_cache.get(&cell) {
            return label;
        }
        // Unseen bin: nearest populated bin centroid.
        let center = self.hist.cell_center(cell);
        let mut best = (f64::INFINITY, 0u16);
        for &p in &self.populated {
            let d = (self.hist.cell_center(p) - center).norm_sqr();
            if d < best.0 {
                best = (d, self.cell_labels[p].unwrap());
            }
        }
        fallback_cache.insert(cell, best.1);
        best.1
    }
}

/// Monte Carlo symbol error rate with uniform transmission over the
/// constellation. The histogram decoder must be trained on a seed disjoint
/// from `rng_seed` (training and testing use independent streams).
pub fn ser(
    c: &Constellation,
    decoder: &Decoder<'_>,
    noise: &NoiseConfig,
    fiber: &FiberParams,
    trials: usize,
    rng_seed: u64,
) -> Result<f64> {
    let map = match decoder {
        Decoder::HistogramMap(h) => {
            if h.counts.len() != c.len() {
                return Err(Error::UntrainedDecoder(format!(
                    "histogram trained for {} points, constellation has {}",
                    h.counts.len(),
                    c.len()
                )));
            }
            Some(MapDecoder::new(h)?)
        }
        Decoder::AdversarialMd(t) => {
            if t.labels.iter().any(|&l| l as usize >= c.len()) {
                return Err(Error::UntrainedDecoder(
                    "decoder table labels exceed the constellation".into(),
                ));
            }
            None
        }
    };

    let errors: u64 = c
        .points
        .par_iter()
        .enumerate()
        .map(|(pi, &x)| {
            let mut fallback = HashMap::new();
            let mut errs = 0u64;
            for t in 0..trials {
                let y = simulate_once(x, noise, fiber, &mut trial_rng(rng_seed, pi, t));
                let decided = match (&map, decoder) {
                    (Some(m), _) => m.decode(y, &mut fallback),
                    (None, Decoder::AdversarialMd(table)) => table.decode(y),
                    _ => unreachable!(),
                };
                if decided as usize != pi {
                    errs += 1;
                }
            }
            errs
        })
        .sum();
    Ok(errors as f64 / (trials as f64 * c.len() as f64))
}

/// One σ² sweep row of an evaluation report.
#[derive(Debug, Clone)]
pub struct EvalRow {
    pub sigma2: f64,
    pub psnr_db: f64,
    pub ser_map: f64,
    pub ser_md: f64,
    pub mi_bits: f64,
}

/// SER/MI sweep of a constellation over a σ² list.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub trials: usize,
    pub rng_seed: u64,
}

/// Evaluate a constellation over a σ² sweep: histogram-MAP SER (trained and
/// tested on disjoint streams), optional minimum-effort SER, and the
/// histogram mutual information. PSNR is peak_power/(σ²L) in dB.
pub fn evaluate(
    c: &Constellation,
    fiber: &FiberParams,
    sigma2_values: &[f64],
    trials: usize,
    bins: usize,
    rng_seed: u64,
    md_table: Option<&DecoderTable>,
) -> Result<EvalReport> {
    let mut rows = Vec::with_capacity(sigma2_values.len());
    for (si, &sigma2) in sigma2_values.iter().enumerate() {
        let noise = NoiseConfig::with_sigma2(sigma2, fiber)?;
        let train_seed = mix(rng_seed ^ mix(2 * si as u64 + 1));
        let test_seed = mix(rng_seed ^ mix(2 * si as u64 + 2));
        let hist = train_histogram(c, &noise, fiber, trials, bins, train_seed)?;
        let ser_map = ser(c, &Decoder::HistogramMap(&hist), &noise, fiber, trials, test_seed)?;
        let ser_md = match md_table {
            Some(table) => {
                ser(c, &Decoder::AdversarialMd(table), &noise, fiber, trials, test_seed)?
            }
            None => f64::NAN,
        };
        let mi_bits = mutual_information(&hist);
        let psnr_db = 10.0 * (c.peak_power / (sigma2 * fiber.length_km)).log10();
        rows.push(EvalRow { sigma2, psnr_db, ser_map, ser_md, mi_bits });
    }
    Ok(EvalReport { rows, trials, rng_seed })
}

impl EvalReport {
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "sigma2,psnr_db,ser_map,ser_md,mi_bits")?;
        for r in &self.rows {
            writeln!(
                out,
                "{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
                r.sigma2, r.psnr_db, r.ser_map, r.ser_md, r.mi_bits
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn two_point(fiber: FiberParams) -> Constellation {
        Constellation::new(vec![C::new(0.05, 0.0), C::new(-0.05, 0.0)], 0.0025, fiber).unwrap()
    }

    #[test]
    fn noiseless_matches_closed_form() {
        let fiber = FiberParams::reference();
        let noise = NoiseConfig::new(0.0, 1.0, &fiber).unwrap();
        let x = C::new(0.04, 0.01);
        let mut rng = trial_rng(1, 0, 0);
        let y = simulate_once(x, &noise, &fiber, &mut rng);
        let expect = crate::channel::propagate_noise_free(x, &fiber);
        assert!((y - expect).norm() < 1e-12, "split-step {y} vs {expect}");
    }

    #[test]
    fn gamma_zero_variance() {
        // Output = x + CN(0, σ²L): empirical variance within 3% at 1e5 runs.
        let fiber = FiberParams::new(2000.0, 0.0).unwrap();
        let sigma2 = 1e-9;
        let noise = NoiseConfig::new(sigma2, 1.0, &fiber).unwrap();
        let x = C::new(0.02, 0.0);
        let n = 100_000;
        let sum: f64 = (0..n)
            .into_par_iter()
            .map(|t| {
                let y = simulate_once(x, &noise, &fiber, &mut trial_rng(42, 0, t));
                (y - x).norm_sqr()
            })
            .sum();
        let var = sum / n as f64;
        let expect = sigma2 * fiber.length_km;
        assert!((var - expect).abs() / expect < 0.03, "variance {var} vs {expect}");
    }

    #[test]
    fn mean_power_bookkeeping() {
        // Rotation preserves power and each segment adds σ²Δz:
        // E|q(L)|² ≈ |x|² + σ²L within 5% over 1e5 runs.
        let fiber = FiberParams::reference();
        let sigma2 = 2e-9;
        let noise = NoiseConfig::new(sigma2, 1.0, &fiber).unwrap();
        let x = C::new(0.03, 0.0);
        let n = 100_000;
        let sum: f64 = (0..n)
            .into_par_iter()
            .map(|t| simulate_once(x, &noise, &fiber, &mut trial_rng(7, 0, t)).norm_sqr())
            .sum();
        let mean_power = sum / n as f64;
        let expect = x.norm_sqr() + sigma2 * fiber.length_km;
        assert!((mean_power - expect).abs() / expect < 0.05, "{mean_power} vs {expect}");
    }

    #[test]
    fn histogram_totals_and_concentration() {
        let fiber = FiberParams::reference();
        let c = two_point(fiber);
        let noise = NoiseConfig::new(1e-12, 1.0, &fiber).unwrap();
        let hist = train_histogram(&c, &noise, &fiber, 500, 64, 3).unwrap();
        assert!(hist.totals.iter().all(|&t| t == 500));
        // Near-noiseless: each point's mass concentrates within a 2x2 bin
        // block (the cloud can straddle a bin corner).
        let n = hist.bins;
        for counts in &hist.counts {
            let mut best_block = 0u64;
            for iy in 0..n - 1 {
                for ix in 0..n - 1 {
                    let s = counts[iy * n + ix] as u64
                        + counts[iy * n + ix + 1] as u64
                        + counts[(iy + 1) * n + ix] as u64
                        + counts[(iy + 1) * n + ix + 1] as u64;
                    best_block = best_block.max(s);
                }
            }
            assert!(best_block >= 495, "mass spread: best 2x2 block {best_block}");
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let fiber = FiberParams::reference();
        let c = two_point(fiber);
        let noise = NoiseConfig::new(1e-9, 1.0, &fiber).unwrap();
        let h1 = train_histogram(&c, &noise, &fiber, 200, 32, 9).unwrap();
        let h2 = train_histogram(&c, &noise, &fiber, 200, 32, 9).unwrap();
        assert_eq!(h1.counts, h2.counts);
        let s1 = ser(&c, &Decoder::HistogramMap(&h1), &noise, &fiber, 200, 10).unwrap();
        let s2 = ser(&c, &Decoder::HistogramMap(&h2), &noise, &fiber, 200, 10).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn ser_limits() {
        let fiber = FiberParams::reference();
        let c = two_point(fiber);
        // σ² → 0: SER → 0.
        let tiny = NoiseConfig::new(1e-14, 1.0, &fiber).unwrap();
        let hist = train_histogram(&c, &tiny, &fiber, 300, 64, 21).unwrap();
        let s = ser(&c, &Decoder::HistogramMap(&hist), &tiny, &fiber, 300, 22).unwrap();
        assert_eq!(s, 0.0);
        // Huge σ²: SER near (M−1)/M, never above by more than sampling error.
        let huge = NoiseConfig::new(1e-4, 1.0, &fiber).unwrap();
        let hist = train_histogram(&c, &huge, &fiber, 2000, 32, 23).unwrap();
        let s = ser(&c, &Decoder::HistogramMap(&hist), &huge, &fiber, 2000, 24).unwrap();
        let guess = 0.5_f64;
        let sampling = 3.0 * (guess / (2000.0 * 2.0)).sqrt();
        assert!(s <= guess + sampling, "SER {s}");
    }

    #[test]
    fn mutual_information_limits() {
        let fiber = FiberParams::reference();
        let c = two_point(fiber);
        // Noiseless limit: log2 M bits.
        let tiny = NoiseConfig::new(1e-14, 1.0, &fiber).unwrap();
        let hist = train_histogram(&c, &tiny, &fiber, 400, 64, 31).unwrap();
        let mi = mutual_information(&hist);
        assert!((mi - 1.0).abs() < 1e-12, "MI {mi}");
        // Very large σ²: MI near 0 (estimator bias allowed).
        let huge = NoiseConfig::new(1e-3, 1.0, &fiber).unwrap();
        let hist = train_histogram(&c, &huge, &fiber, 4000, 16, 33).unwrap();
        let mi = mutual_information(&hist);
        assert!(mi < 0.15, "MI {mi}");
        assert!(mi <= 1.0);
    }

    #[test]
    fn decoder_table_gamma_zero_is_euclidean() {
        let fiber = FiberParams::new(2000.0, 0.0).unwrap();
        let c = two_point(fiber);
        let spec = GridSpec { re_min: -0.08, re_max: 0.08, im_min: -0.08, im_max: 0.08, n: 17 };
        let cfg = SolverConfig::default();
        let table = decoder_table(&c, &fiber, &spec, &EffortSource::Exact(&cfg)).unwrap();
        for cell in 0..table.labels.len() {
            let y = spec.cell_center(cell);
            let d0 = (y - c.points[0]).norm();
            let d1 = (y - c.points[1]).norm();
            if (d0 - d1).abs() < 1e-6 {
                continue; // equidistant cells decode arbitrarily
            }
            let nearest = if d0 < d1 { 0 } else { 1 };
            assert_eq!(table.labels[cell] as usize, nearest, "cell {cell} at {y}");
        }
    }

    #[test]
    fn decoder_table_labels_noise_free_outputs() {
        let fiber = FiberParams::reference();
        let c = two_point(fiber);
        let spec = GridSpec::covering(&c, 0.3, 33);
        let cfg = SolverConfig::default();
        let table = decoder_table(&c, &fiber, &spec, &EffortSource::Exact(&cfg)).unwrap();
        for (pi, &x) in c.points.iter().enumerate() {
            let y = crate::channel::propagate_noise_free(x, &fiber);
            assert_eq!(table.decode(y) as usize, pi);
        }
    }

    #[test]
    fn decoder_table_rotation_invariance() {
        // Jointly rotating constellation and grid relabels cells consistently
        // (up to cell quantization at class boundaries).
        let fiber = FiberParams::reference();
        let c = two_point(fiber);
        let spec = GridSpec { re_min: -0.07, re_max: 0.07, im_min: -0.07, im_max: 0.07, n: 21 };
        let table = decoder_table(&c, &fiber, &spec, &EffortSource::Approximate).unwrap();
        let theta = 0.8;
        let rot = C::from_polar(1.0, theta);
        let c_rot = Constellation::new(
            c.points.iter().map(|&p| p * rot).collect(),
            c.peak_power,
            fiber,
        )
        .unwrap();
        let table_rot = decoder_table(&c_rot, &fiber, &spec, &EffortSource::Approximate).unwrap();
        let n = spec.n;
        let interior = |cell: usize| {
            let (iy, ix) = (cell / n, cell % n);
            if ix == 0 || iy == 0 || ix + 1 == n || iy + 1 == n {
                return false;
            }
            let l = table.labels[cell];
            [cell - 1, cell + 1, cell - n, cell + n].iter().all(|&c| table.labels[c] == l)
        };
        let mut agree = 0usize;
        let mut total = 0usize;
        for cell in 0..table.labels.len() {
            let y = spec.cell_center(cell);
            if y.norm() > 0.06 || !interior(cell) {
                continue; // decision boundaries move by a cell under rotation
            }
            total += 1;
            if table_rot.decode(y * rot) == table.labels[cell] {
                agree += 1;
            }
        }
        assert!(agree as f64 >= 0.98 * total as f64, "{agree}/{total} agreement");
    }

    #[test]
    fn decoder_table_csv_round_trip() {
        let fiber = FiberParams::reference();
        let c = two_point(fiber);
        let spec = GridSpec { re_min: -0.07, re_max: 0.07, im_min: -0.07, im_max: 0.07, n: 9 };
        let table = decoder_table(&c, &fiber, &spec, &EffortSource::Approximate).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dec.csv");
        table.save_csv(&path).unwrap();
        let loaded = DecoderTable::load_csv(&path).unwrap();
        assert_eq!(loaded.labels, table.labels);
        assert_eq!(loaded.spec.n, table.spec.n);
    }

    #[test]
    fn invalid_noise_config_rejected() {
        let fiber = FiberParams::reference();
        assert!(NoiseConfig::new(1e-9, 0.7, &fiber).is_err());
        assert!(NoiseConfig::new(-1.0, 1.0, &fiber).is_err());
        assert!(NoiseConfig::new(1e-9, 1.0, &fiber).is_ok());
    }

    #[test]
    fn untrained_decoder_detected() {
        let fiber = FiberParams::reference();
        let c = two_point(fiber);
        let empty = Histogram2D {
            re_min: -1.0,
            re_max: 1.0,
            im_min: -1.0,
            im_max: 1.0,
            bins: 4,
            counts: vec![vec![0; 16]; 2],
            totals: vec![0; 2],
            rng_seed: 0,
        };
        let noise = NoiseConfig::new(1e-9, 1.0, &fiber).unwrap();
        let r = ser(&c, &Decoder::HistogramMap(&empty), &noise, &fiber, 10, 1);
        assert!(matches!(r, Err(Error::UntrainedDecoder(_))));
    }
}
