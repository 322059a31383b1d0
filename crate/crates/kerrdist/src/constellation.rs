//! Constellation design under a peak-power constraint.
//!
//! The max–min-distance design follows the threshold-graph recipe: sort the
//! pairwise distances, binary-search a threshold d_th, connect candidate
//! points at distance ≥ d_th, and ask for a maximum clique of the prescribed
//! size. Large constellations are refined greedily by coordinate ascent on the
//! minimum distance.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::approx::ApproxTable;
use crate::channel::{ComplexPoint, FiberParams};
use crate::distance::{self, DistanceOptions};
use crate::error::{Error, Result};

/// A finite set of channel input points under a peak-power constraint.
#[derive(Debug, Clone)]
pub struct Constellation {
    pub points: Vec<ComplexPoint>,
    /// Peak power bound (W): |x|² ≤ peak_power for every point.
    pub peak_power: f64,
    pub fiber: FiberParams,
}

#[derive(Serialize, Deserialize)]
struct ConstellationFile {
    fiber: FiberParams,
    peak_power: f64,
    points: Vec<PointFile>,
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    re: f64,
    im: f64,
}

impl Constellation {
    pub fn new(points: Vec<ComplexPoint>, peak_power: f64, fiber: FiberParams) -> Result<Self> {
        if !(peak_power > 0.0) {
            return Err(Error::InvalidInput("peak power must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.norm_sqr() > peak_power * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "point {i} ({p}) violates the peak power {peak_power}"
                )));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::InvalidInput(format!("duplicate point at {i} and {j}")));
                }
            }
        }
        Ok(Constellation { points, peak_power, fiber })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean of |x|² over the points (W).
    pub fn avg_power(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    /// Minimum pairwise distance under the supplied distance function.
    pub fn min_distance(&self, dist: &mut dyn FnMut(ComplexPoint, ComplexPoint) -> Result<f64>) -> Result<f64> {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                best = best.min(dist(self.points[i], self.points[j])?);
            }
        }
        Ok(best)
    }

    /// Standard square QAM of size m² (m even lattice {±1, ±3, ...}²), scaled
    /// so the corner magnitude equals √peak_power.
    pub fn qam(size: usize, peak_power: f64, fiber: FiberParams) -> Result<Self> {
        let m = (size as f64).sqrt().round() as usize;
        if m * m != size || m < 2 {
            return Err(Error::InvalidInput(format!("QAM size {size} is not a even square")));
        }
        let corner = (2.0 * (m - 1) as f64 * (m - 1) as f64).sqrt();
        let scale = peak_power.sqrt() / corner;
        let mut points = Vec::with_capacity(size);
        for i in 0..m {
            for j in 0..m {
                let re = (2.0 * i as f64 - (m - 1) as f64) * scale;
                let im = (2.0 * j as f64 - (m - 1) as f64) * scale;
                points.push(Complex64::new(re, im));
            }
        }
        Constellation::new(points, peak_power, fiber)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let file = ConstellationFile {
            fiber: self.fiber,
            peak_power: self.peak_power,
            points: self.points.iter().map(|p| PointFile { re: p.re, im: p.im }).collect(),
        };
        let out = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(out), &file)?;
        Ok(())
    }

    /// Read a constellation file, rejecting points that violate the recorded
    /// peak constraint.
    pub fn load_json(path: &Path) -> Result<Self> {
        let file: ConstellationFile =
            serde_json::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))?;
        Constellation::new(
            file.points.iter().map(|p| Complex64::new(p.re, p.im)).collect(),
            file.peak_power,
            file.fiber,
        )
    }
}

/// Polar grid of design candidates: radii k·r_max/n (origin excluded) with
/// uniformly spaced phases on [−π, π).
#[derive(Debug, Clone)]
pub struct PolarGrid {
    pub radii: Vec<f64>,
    pub phases_per_radius: usize,
    /// Include the single origin point (for on-off-keying style designs).
    pub include_origin: bool,
}

impl PolarGrid {
    pub fn new(n_radii: usize, r_max: f64, n_phases: usize) -> Result<Self> {
        if n_radii < 1 || n_phases < 1 || !(r_max > 0.0) {
            return Err(Error::InvalidInput("polar grid needs n_radii, n_phases >= 1, r_max > 0".into()));
        }
        Ok(PolarGrid {
            radii: (1..=n_radii).map(|k| r_max * k as f64 / n_radii as f64).collect(),
            phases_per_radius: n_phases,
            include_origin: false,
        })
    }

    pub fn with_origin(mut self) -> Self {
        self.include_origin = true;
        self
    }

    pub fn points(&self) -> Vec<ComplexPoint> {
        let mut pts = Vec::with_capacity(self.radii.len() * self.phases_per_radius + 1);
        if self.include_origin {
            pts.push(Complex64::ZERO);
        }
        for &r in &self.radii {
            for j in 0..self.phases_per_radius {
                let phi = -PI + 2.0 * PI * j as f64 / self.phases_per_radius as f64;
                pts.push(Complex64::from_polar(r, phi));
            }
        }
        pts
    }
}

/// Construct a polar grid (convenience mirror of [`PolarGrid::new`]).
pub fn polar_grid(n_radii: usize, r_max: f64, n_phases: usize) -> Result<PolarGrid> {
    PolarGrid::new(n_radii, r_max, n_phases)
}

/// Which distance backend fills a matrix.
pub enum DistanceSource<'a> {
    /// Joint-BVP distances (decomposition fallback), memoized over the
    /// rotational equivalence classes (r₁, r₂, Δφ).
    Exact(&'a DistanceOptions),
    /// Table-backed approximation.
    Approximation(&'a ApproxTable),
}

/// Labeled symmetric matrix of pairwise distances.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    pub labels: Vec<ComplexPoint>,
    pub values: Vec<Vec<f64>>,
    pub exact_source: bool,
    /// Number of BVP solves actually performed (after symmetry reduction).
    pub solves: usize,
    /// Count of solved pairs violating the radial-lower/constant-envelope-
    /// upper sandwich beyond numerical slack (exact source only).
    pub sandwich_violations: usize,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Canonical form of the rotational equivalence class of a pair: the distance
/// depends only on (|x₁|, |x₂|, arg x₂ − arg x₁), is symmetric under swap
/// (with Δφ negated), and even in Δφ for equal radii. Returns the quantized
/// key and the canonical representative (r₁ real positive, r₁ ≤ r₂).
fn pair_key(x1: ComplexPoint, x2: ComplexPoint) -> ((u64, u64, i64), (f64, f64, f64)) {
    let (mut r1, mut r2) = (x1.norm(), x2.norm());
    let mut dphi = wrap(x2.arg() - x1.arg());
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
        dphi = -dphi;
    }
    let q = |v: f64| (v * 1e12).round() as u64;
    let r1q = q(r1);
    let r2q = q(r2);
    if r1q == r2q || r1q == 0 {
        dphi = dphi.abs();
    }
    let pq = wrap_quantized(dphi);
    ((r1q, r2q, pq), (r1, r2, dphi))
}

fn wrap(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let w = t - two_pi * ((t + PI) / two_pi).floor();
    if w >= PI {
        w - two_pi
    } else {
        w
    }
}

fn wrap_quantized(dphi: f64) -> i64 {
    let q = (dphi * 1e9).round() as i64;
    let period = (2.0 * PI * 1e9).round() as i64;
    // −π and +π quantize to the same class.
    if q == period / 2 { -period / 2 } else { q }
}

/// Pairwise distances for an arbitrary point list, with rotational-symmetry
/// memoization. Exact-source fills group the unique classes by radius pair
/// and sweep the relative angle with warm-started solves; groups run in
/// parallel.
pub fn distance_matrix_for_points(
    points: &[ComplexPoint],
    fiber: &FiberParams,
    source: &DistanceSource<'_>,
) -> Result<DistanceMatrix> {
    let n = points.len();
    let mut class_of = vec![vec![0usize; n]; n];
    let mut classes: Vec<(f64, f64, f64)> = Vec::new();
    let mut index: HashMap<(u64, u64, i64), usize> = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let (key, canonical) = pair_key(points[i], points[j]);
            let id = *index.entry(key).or_insert_with(|| {
                classes.push(canonical);
                classes.len() - 1
            });
            class_of[i][j] = id;
        }
    }

    let mut violations = 0usize;
    let class_values: Vec<f64> = match source {
        DistanceSource::Exact(opts) => {
            // Group class indices by radius pair, angle ascending.
            let mut groups: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
            for (id, &(r1, r2, _)) in classes.iter().enumerate() {
                let q = |v: f64| (v * 1e12).round() as u64;
                groups.entry((q(r1), q(r2))).or_default().push(id);
            }
            let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
            for g in &mut groups {
                g.sort_by(|&a, &b| classes[a].2.total_cmp(&classes[b].2));
            }
            groups.sort_by_key(|g| g[0]);

            let swept: Vec<Result<Vec<(usize, f64, bool)>>> = groups
                .par_iter()
                .map(|group| sweep_group(group, &classes, fiber, opts))
                .collect();
            let mut resolved = vec![0.0; classes.len()];
            for result in swept {
                for (id, value, ok) in result? {
                    resolved[id] = value;
                    if !ok {
                        violations += 1;
                    }
                }
            }
            resolved
        }
        DistanceSource::Approximation(table) => {
            let mut resolved = Vec::with_capacity(classes.len());
            for &(r1, r2, dphi) in &classes {
                let x1 = Complex64::new(r1, 0.0);
                let x2 = Complex64::from_polar(r2, dphi);
                resolved.push(table.distance(x1, x2).map_err(|e| {
                    Error::InvalidInput(format!("matrix cell ({x1}, {x2}) failed: {e}"))
                })?);
            }
            resolved
        }
    };

    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = class_values[class_of[i][j]];
            values[i][j] = d;
            values[j][i] = d;
        }
    }
    Ok(DistanceMatrix {
        labels: points.to_vec(),
        values,
        exact_source: matches!(source, DistanceSource::Exact(_)),
        solves: classes.len(),
        sandwich_violations: violations,
    })
}

/// Sweep one radius-pair group over its relative angles, warm-starting each
/// solve from the previous one; the full analytic seed battery runs on the
/// first cell, periodically, and whenever the warm result misses the bound
/// sandwich. Falls back to the decomposition method for stubborn cells.
fn sweep_group(
    group: &[usize],
    classes: &[(f64, f64, f64)],
    fiber: &FiberParams,
    opts: &DistanceOptions,
) -> Result<Vec<(usize, f64, bool)>> {
    let mut out = Vec::with_capacity(group.len());
    let mut warm: Option<crate::bvp::ShootingSeed> = None;
    for (pos, &id) in group.iter().enumerate() {
        let (r1, r2, dphi) = classes[id];
        let x1 = Complex64::new(r1, 0.0);
        let x2 = Complex64::from_polar(r2, dphi);
        let lower = distance::radial_distance(x1, x2, fiber);
        let upper = distance::upper_bound(x1, x2, fiber).unwrap_or(f64::INFINITY);

        let full_battery = warm.is_none() || pos % 5 == 0;
        let mut seeds = Vec::new();
        if let Some(w) = warm {
            seeds.push(w);
        }
        if full_battery {
            seeds.extend(crate::bvp::all_seeds(x1, x2, fiber));
        } else {
            seeds.extend(crate::bvp::make_seeds(x1, x2, fiber, crate::bvp::SeedBranch::Linear));
            seeds.extend(crate::bvp::make_seeds(x1, x2, fiber, crate::bvp::SeedBranch::Radial));
        }

        let mut solved = crate::bvp::solve_joint(x1, x2, fiber, &seeds, &opts.solver).ok();
        let misses_bounds = |v: f64| v < lower * (1.0 - 1e-4) || v > upper * (1.0 + 1e-4);
        if !full_battery
            && solved.as_ref().map_or(true, |s| misses_bounds(s.effort))
        {
            // Retry with every analytic branch before giving up on the cell.
            let battery = crate::bvp::all_seeds(x1, x2, fiber);
            if let Ok(retry) = crate::bvp::solve_joint(x1, x2, fiber, &battery, &opts.solver) {
                if solved.as_ref().map_or(true, |s| retry.effort < s.effort) {
                    solved = Some(retry);
                }
            }
        }

        let (value, ok) = match solved {
            Some(sol) => {
                warm = Some(sol.as_seed(fiber));
                (sol.effort, !misses_bounds(sol.effort))
            }
            None => {
                warm = None;
                let res = distance::decompose_distance(x1, x2, fiber, opts).map_err(|e| {
                    Error::InvalidInput(format!("matrix cell ({x1}, {x2}) failed: {e}"))
                })?;
                (res.value, !misses_bounds(res.value))
            }
        };
        out.push((id, value, ok));
    }
    Ok(out)
}

/// Distance matrix over a polar grid; rotational symmetry reduces the work to
/// the unique (r_i, r_j, Δφ) triples.
pub fn distance_matrix(
    grid: &PolarGrid,
    fiber: &FiberParams,
    source: &DistanceSource<'_>,
) -> Result<DistanceMatrix> {
    distance_matrix_for_points(&grid.points(), fiber, source)
}

/// Exact maximum clique of a symmetric adjacency matrix via branch and bound
/// with greedy-coloring pruning; among maximum cliques the lexicographically
/// smallest vertex set is returned.
pub fn max_clique(adjacency: &[Vec<bool>]) -> Vec<usize> {
    let n = adjacency.len();
    if n == 0 {
        return Vec::new();
    }
    let size = max_clique_size(adjacency, usize::MAX);
    lexicographic_clique(adjacency, size)
}

/// Size of the maximum clique; stops early once `target` is reached (pass
/// usize::MAX for the true maximum).
fn max_clique_size(adj: &[Vec<bool>], target: usize) -> usize {
    let n = adj.len();
    let mut best = 0usize;
    let mut current = Vec::new();
    let vertices: Vec<usize> = (0..n).collect();
    branch(adj, &vertices, &mut current, &mut best, target);
    best
}

fn branch(adj: &[Vec<bool>], candidates: &[usize], current: &mut Vec<usize>, best: &mut usize, target: usize) {
    if *best >= target {
        return;
    }
    if candidates.is_empty() {
        *best = (*best).max(current.len());
        return;
    }
    // Greedy coloring bound; candidates sorted by ascending color so that at
    // position idx no clique within the prefix exceeds colors[idx] vertices.
    let order = greedy_coloring(adj, candidates);
    for idx in (0..order.len()).rev() {
        let (v, color) = order[idx];
        if current.len() + color <= *best {
            return;
        }
        current.push(v);
        let next: Vec<usize> =
            order[..idx].iter().map(|&(u, _)| u).filter(|&u| adj[v][u]).collect();
        branch(adj, &next, current, best, target);
        current.pop();
        if *best >= target {
            return;
        }
    }
}

/// Sequential greedy coloring; returns (vertex, 1-based color) pairs sorted
/// by ascending color.
fn greedy_coloring(adj: &[Vec<bool>], candidates: &[usize]) -> Vec<(usize, usize)> {
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(candidates.len());
    let mut color_classes: Vec<Vec<usize>> = Vec::new();
    for &v in candidates {
        let mut assigned = false;
        for (c, class) in color_classes.iter_mut().enumerate() {
            if class.iter().all(|&u| !adj[v][u]) {
                class.push(v);
                order.push((v, c + 1));
                assigned = true;
                break;
            }
        }
        if !assigned {
            color_classes.push(vec![v]);
            order.push((v, color_classes.len()));
        }
    }
    order.sort_by_key(|&(_, c)| c);
    order
}

/// Lexicographically smallest clique of the given size: take vertices in
/// increasing order whenever a completion to the full size still exists.
fn lexicographic_clique(adj: &[Vec<bool>], size: usize) -> Vec<usize> {
    let n = adj.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    let mut candidates: Vec<usize> = (0..n).collect();
    while chosen.len() < size {
        let mut advanced = false;
        for (pos, &v) in candidates.iter().enumerate() {
            let rest: Vec<usize> = candidates[pos + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
            let need = size - chosen.len() - 1;
            if rest.len() >= need && max_clique_size_within(adj, &rest, need) >= need {
                chosen.push(v);
                candidates = rest;
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    chosen
}

fn max_clique_size_within(adj: &[Vec<bool>], candidates: &[usize], target: usize) -> usize {
    if target == 0 {
        return 0;
    }
    let mut best = 0usize;
    let mut current = Vec::new();
    branch(adj, candidates, &mut current, &mut best, target);
    best
}

/// Does the graph contain a clique of at least `size` vertices?
fn has_clique(adj: &[Vec<bool>], size: usize) -> bool {
    if size == 0 {
        return true;
    }
    max_clique_size(adj, size) >= size
}

/// Max–min-distance design: binary search over the sorted unique distances for
/// the largest threshold whose graph (edges where d ≥ d_th) still contains a
/// clique of the requested size; that clique is the constellation.
///
/// Returns the designed constellation and the achieved threshold; the next
/// larger threshold is guaranteed to admit only strictly smaller cliques.
pub fn design_max_min(
    matrix: &DistanceMatrix,
    size: usize,
    peak_power: f64,
    fiber: FiberParams,
) -> Result<(Constellation, f64)> {
    let n = matrix.len();
    if size < 2 || n < size {
        return Err(Error::InvalidInput(format!(
            "design size {size} out of range for a {n}-point matrix"
        )));
    }
    let mut thresholds: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            thresholds.push(matrix.values[i][j]);
        }
    }
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let adjacency_at = |d_th: f64| -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                adj[i][j] = i != j && matrix.values[i][j] >= d_th;
            }
        }
        adj
    };

    // Binary search over threshold indices: feasible(lo) must hold.
    if !has_clique(&adjacency_at(thresholds[0]), size) {
        return Err(Error::Infeasible { size });
    }
    let (mut lo, mut hi) = (0usize, thresholds.len());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if has_clique(&adjacency_at(thresholds[mid]), size) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let d_th = thresholds[lo];
    let clique = max_clique(&adjacency_at(d_th));
    debug_assert!(clique.len() >= size);
    let points: Vec<ComplexPoint> = clique.iter().take(size).map(|&v| matrix.labels[v]).collect();
    let constellation = Constellation::new(points, peak_power, fiber)?;
    Ok((constellation, d_th))
}

/// Step-size schedule of the greedy refinement.
#[derive(Debug, Clone, Copy)]
pub struct RefineConfig {
    /// Initial move size (√W along radius, arc length along azimuth).
    pub initial_step: f64,
    /// Stop once the step falls below this fraction of √peak_power.
    pub min_step_fraction: f64,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig { initial_step: 0.0, min_step_fraction: 1e-5 }
    }
}

/// Coordinate ascent on the minimum distance: cycle the points, trying
/// ±radial and ±azimuthal moves of the current step; keep a move only if the
/// minimum distance strictly increases and the peak constraint holds; halve
/// the step after a full cycle without improvement. Deterministic.
pub fn greedy_refine(
    initial: &Constellation,
    dist: &mut dyn FnMut(ComplexPoint, ComplexPoint) -> Result<f64>,
    cfg: &RefineConfig,
) -> Result<Constellation> {
    let n = initial.points.len();
    let r_peak = initial.peak_power.sqrt();
    let mut points = initial.points.clone();

    // Pairwise distance cache, updated per accepted move.
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(points[i], points[j])?;
            values[i][j] = d;
            values[j][i] = d;
        }
    }
    let min_of = |values: &Vec<Vec<f64>>| -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                m = m.min(values[i][j]);
            }
        }
        m
    };
    let mut current_min = min_of(&values);

    let mut step = if cfg.initial_step > 0.0 { cfg.initial_step } else { 0.05 * r_peak };
    let min_step = cfg.min_step_fraction * r_peak;

    while step >= min_step {
        let mut improved = false;
        for i in 0..n {
            let p = points[i];
            let r = p.norm();
            let mut moves: Vec<Complex64> = Vec::with_capacity(4);
            moves.push(Complex64::from_polar((r + step).min(r_peak), p.arg()));
            if r - step > 0.0 {
                moves.push(Complex64::from_polar(r - step, p.arg()));
            }
            if r > step {
                // Azimuthal moves by arc length `step`.
                let dphi = step / r;
                moves.push(Complex64::from_polar(r, p.arg() + dphi));
                moves.push(Complex64::from_polar(r, p.arg() - dphi));
            }
            for cand in moves {
                if cand.norm_sqr() > initial.peak_power * (1.0 + 1e-12) || cand == p {
                    continue;
                }
                if points.iter().enumerate().any(|(j, q)| j != i && *q == cand) {
                    continue;
                }
                // Candidate row against every other point.
                let mut row = vec![0.0; n];
                let mut ok = true;
                for (j, q) in points.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    match dist(cand, *q) {
                        Ok(d) => row[j] = d,
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let mut trial = values.clone();
                for j in 0..n {
                    if j != i {
                        trial[i][j] = row[j];
                        trial[j][i] = row[j];
                    }
                }
                let trial_min = min_of(&trial);
                if trial_min > current_min {
                    points[i] = cand;
                    values = trial;
                    current_min = trial_min;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    Constellation::new(points, initial.peak_power, initial.fiber)
}

/// Uniformly random constellation inside the peak disc (used as restart
/// material for [`greedy_refine`]).
pub fn random_constellation(
    size: usize,
    peak_power: f64,
    fiber: FiberParams,
    rng: &mut impl rand::Rng,
) -> Constellation {
    let r_peak = peak_power.sqrt();
    let mut points = Vec::with_capacity(size);
    while points.len() < size {
        // Uniform on the disc via the square-root radius transform.
        let r = r_peak * rng.random_range(0.0f64..1.0).sqrt();
        let phi = rng.random_range(-PI..PI);
        let p = Complex64::from_polar(r, phi);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    Constellation { points, peak_power, fiber }
}
