//! Adversarial distance computation: closed forms, bounds, the exact
//! joint-BVP distance with a min–max decomposition fallback, and the
//! dimensionless normalization of the problem.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bvp::{self, JointSolution, SolverConfig};
use crate::channel::{ComplexPoint, FiberParams, Trajectory};
use crate::error::{Error, Result};
use crate::optim::{self, NelderMeadOptions};

/// How a distance value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    JointBvp,
    Decomposition,
    Approximation,
}

/// Optimal trajectories certifying a distance value.
#[derive(Debug, Clone)]
pub struct Witness {
    pub traj1: Trajectory,
    pub traj2: Trajectory,
    pub meeting_point: ComplexPoint,
    /// Multiplier of the joint system; absent for decomposition witnesses.
    pub lambda: Option<f64>,
    pub residual_norm: f64,
}

impl From<JointSolution> for Witness {
    fn from(sol: JointSolution) -> Self {
        Witness {
            meeting_point: sol.meeting_point,
            lambda: Some(sol.lambda),
            residual_norm: sol.residual_norm,
            traj1: sol.traj1,
            traj2: sol.traj2,
        }
    }
}

/// A computed distance with its provenance and sandwich bounds.
#[derive(Debug, Clone)]
pub struct DistanceResult {
    /// Adversarial distance (W/km).
    pub value: f64,
    pub method: Method,
    /// Radial lower bound (|x₁|−|x₂|)²/(4L).
    pub lower_bound: f64,
    /// Constant-envelope upper bound.
    pub upper_bound: f64,
    pub witness: Option<Witness>,
}

/// Distance of a point from the origin: d(x, 0) = |x|²/(4L).
pub fn distance_from_origin(x: ComplexPoint, fiber: &FiberParams) -> f64 {
    x.norm_sqr() / (4.0 * fiber.length_km)
}

/// Radial distance (minimum distance between the origin-centred circles
/// through the two points): d_R = (|x₁|−|x₂|)²/(4L). Doubles as the lower
/// bound of the adversarial distance.
pub fn radial_distance(x1: ComplexPoint, x2: ComplexPoint, fiber: &FiberParams) -> f64 {
    let dr = x1.norm() - x2.norm();
    dr * dr / (4.0 * fiber.length_km)
}

/// Phase mismatch Δ(x, y) of the constant-envelope control family:
/// arg(y/x) minus the Kerr rotation (γL/3)(|y|²+|y||x|+|x|²), reduced into
/// [−π, π). Requires x, y ≠ 0.
pub fn delta_angle(x: ComplexPoint, y: ComplexPoint, fiber: &FiberParams) -> f64 {
    let (r, rho) = (x.norm(), y.norm());
    // (|y|³−|x|³)/(|y|−|x|) in its factored, singularity-free form.
    let kerr = fiber.gamma * fiber.length_km / 3.0 * (rho * rho + rho * r + r * r);
    wrap_to_pi((y / x).arg() - kerr)
}

fn wrap_to_pi(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let w = t - two_pi * ((t + PI) / two_pi).floor();
    // Guard the half-open convention against roundoff at +π.
    if w >= PI {
        w - two_pi
    } else {
        w
    }
}

/// Minimal energy of a constant-envelope control moving x to y:
/// ((|y|−|x|)²/L)·[1 + (Δ/ln(|y|/|x|))²], with the singular limits
/// |x|→|y| (series), |x|→0 and |y|→0 (bracket → 1) evaluated as limits.
pub fn envelope_effort(x: ComplexPoint, y: ComplexPoint, fiber: &FiberParams) -> f64 {
    let length = fiber.length_km;
    let (r, rho) = (x.norm(), y.norm());
    if r == 0.0 || rho == 0.0 {
        let dr = rho - r;
        return dr * dr / length;
    }
    let delta = delta_angle(x, y, fiber);
    let dr = rho - r;
    if dr.abs() < 1e-6 * rho.max(r) {
        // u = (ρ−r)/ln(ρ/r) ≈ ρ(1 − ε/2 + ε²/12) with ε = (ρ−r)/ρ.
        let eps = dr / rho;
        let u = rho * (1.0 - 0.5 * eps + eps * eps / 12.0);
        (dr * dr + delta * delta * u * u) / length
    } else {
        let ln_ratio = (rho / r).ln();
        dr * dr / length * (1.0 + (delta / ln_ratio).powi(2))
    }
}

/// Constant-envelope effort minimized over winding shifts Δ + 2πk,
/// k ∈ {−1, 0, 1}; a cheap proxy for the point-to-point effort E(x, y).
pub fn envelope_effort_min_winding(x: ComplexPoint, y: ComplexPoint, fiber: &FiberParams) -> f64 {
    let length = fiber.length_km;
    let (r, rho) = (x.norm(), y.norm());
    if r == 0.0 || rho == 0.0 {
        let dr = rho - r;
        return dr * dr / length;
    }
    let base = delta_angle(x, y, fiber);
    let dr = rho - r;
    let u = if dr.abs() < 1e-6 * rho.max(r) {
        let eps = dr / rho;
        rho * (1.0 - 0.5 * eps + eps * eps / 12.0)
    } else {
        dr / (rho / r).ln()
    };
    let mut best = f64::INFINITY;
    for k in [-1.0, 0.0, 1.0] {
        let delta = base + 2.0 * PI * k;
        let e = (dr * dr + delta * delta * u * u) / length;
        best = best.min(e);
    }
    best
}

/// Theorem-7-style upper bound together with its minimizing meeting point:
/// min over y of max_k envelope_effort(x_k, y).
pub fn upper_bound_witness(
    x1: ComplexPoint,
    x2: ComplexPoint,
    fiber: &FiberParams,
) -> Result<(f64, ComplexPoint)> {
    if x1.norm() == 0.0 && x2.norm() == 0.0 {
        return Err(Error::BothZero);
    }
    let objective = |y: Complex64| envelope_effort(x1, y, fiber).max(envelope_effort(x2, y, fiber));

    let (r1, r2) = (x1.norm(), x2.norm());
    let r_max = 1.3 * r1.max(r2);
    let n_r = 25;
    let n_phi = 32;

    // Coarse polar scan; radius 0 collapses to the single origin candidate.
    let mut cells: Vec<(f64, Complex64)> = Vec::with_capacity(n_r * n_phi);
    cells.push((objective(Complex64::ZERO), Complex64::ZERO));
    for i in 1..=n_r {
        let rho = r_max * i as f64 / n_r as f64;
        for j in 0..n_phi {
            let phi = -PI + 2.0 * PI * j as f64 / n_phi as f64;
            let y = Complex64::from_polar(rho, phi);
            cells.push((objective(y), y));
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Local refinement from the three best cells.
    let mut best = cells[0];
    let step = r_max / n_r as f64;
    for &(_, y0) in cells.iter().take(3) {
        let opts = NelderMeadOptions { initial_step: 0.5 * step, max_evals: 400, x_tol: 1e-6 * r_max };
        let (xy, val) = optim::nelder_mead(
            |p: &[f64]| objective(Complex64::new(p[0], p[1])),
            &[y0.re, y0.im],
            &opts,
        );
        if val < best.0 {
            best = (val, Complex64::new(xy[0], xy[1]));
        }
    }
    Ok((best.0, best.1))
}

/// Theorem-7 upper bound on the adversarial distance. Errors when both
/// points are zero.
pub fn upper_bound(x1: ComplexPoint, x2: ComplexPoint, fiber: &FiberParams) -> Result<f64> {
    if x1.norm() == 0.0 && x2.norm() == 0.0 {
        return Err(Error::BothZero);
    }
    if x1 == x2 {
        return Ok(0.0);
    }
    upper_bound_witness(x1, x2, fiber).map(|(v, _)| v)
}

/// Options shared by the exact and decomposition distance drivers.
#[derive(Debug, Clone, Copy)]
pub struct DistanceOptions {
    pub solver: SolverConfig,
    /// Polar grid resolution of the decomposition's outer search.
    pub decomp_grid: usize,
    /// Nelder–Mead restarts of the outer search.
    pub decomp_restarts: usize,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions { solver: SolverConfig::default(), decomp_grid: 12, decomp_restarts: 3 }
    }
}

/// Exact adversarial distance: rotates the pair so x₁ is real positive, runs
/// the joint BVP over all seed branches, and falls back to the decomposition
/// method on failure or λ-degeneracy. The result carries the radial lower
/// bound and the Theorem-7 upper bound.
pub fn exact_distance(
    x1: ComplexPoint,
    x2: ComplexPoint,
    fiber: &FiberParams,
    opts: &DistanceOptions,
) -> Result<DistanceResult> {
    if x1 == x2 {
        return Ok(DistanceResult {
            value: 0.0,
            method: Method::ClosedForm,
            lower_bound: 0.0,
            upper_bound: 0.0,
            witness: None,
        });
    }
    let lower = radial_distance(x1, x2, fiber);
    let upper = upper_bound(x1, x2, fiber)?;

    // Rotational symmetry: rotate so the larger point is real positive (the
    // larger one so the reduction is defined when the other is the origin).
    let pivot = if x1.norm() >= x2.norm() { x1 } else { x2 };
    let rot = Complex64::from_polar(1.0, -pivot.arg());
    let (y1, y2) = (x1 * rot, x2 * rot);

    let seeds = bvp::all_seeds(y1, y2, fiber);
    match bvp::solve_joint(y1, y2, fiber, &seeds, &opts.solver) {
        Ok(sol) => {
            let value = sol.effort;
            Ok(DistanceResult {
                value,
                method: Method::JointBvp,
                lower_bound: lower,
                upper_bound: upper,
                witness: Some(sol.into()),
            })
        }
        Err(Error::NoConvergence { .. }) | Err(Error::DegenerateMultiplier { .. }) => {
            decompose_distance(x1, x2, fiber, opts)
        }
        Err(e) => Err(e),
    }
}

/// Decomposition restatement of the definition: minimize over meeting points
/// y the larger of the two point-to-point efforts, F(y) = max_k E(x_k → y).
/// Seeded on a coarse polar grid around the midpoint and the mean-radius
/// circle, refined by Nelder–Mead restarts from the best cells.
pub fn decompose_distance(
    x1: ComplexPoint,
    x2: ComplexPoint,
    fiber: &FiberParams,
    opts: &DistanceOptions,
) -> Result<DistanceResult> {
    if x1 == x2 {
        return Err(Error::InvalidInput("decompose_distance requires distinct inputs".into()));
    }
    let lower = radial_distance(x1, x2, fiber);
    let upper = upper_bound(x1, x2, fiber)?;

    let solver = opts.solver;
    let effort_to = |y: Complex64| -> Option<(f64, bvp::EffortSolution, bvp::EffortSolution)> {
        let seeds1 = bvp::effort_seeds_extended(x1, y, fiber, &solver);
        let s1 = bvp::solve_effort(x1, y, fiber, &seeds1, &solver).ok()?;
        let seeds2 = bvp::effort_seeds_extended(x2, y, fiber, &solver);
        let s2 = bvp::solve_effort(x2, y, fiber, &seeds2, &solver).ok()?;
        Some((s1.effort.max(s2.effort), s1, s2))
    };
    let objective = |y: Complex64| effort_to(y).map_or(f64::INFINITY, |(f, _, _)| f);

    let (r1, r2) = (x1.norm(), x2.norm());
    let r_hi = 1.2 * r1.max(r2);
    let n = opts.decomp_grid.max(2);

    let mut cells: Vec<(f64, Complex64)> = Vec::with_capacity(n * n + 2);
    let mid = 0.5 * (x1 + x2);
    cells.push((objective(mid), mid));
    let mean_circle = Complex64::from_polar(0.5 * (r1 + r2), mid.arg());
    cells.push((objective(mean_circle), mean_circle));
    for i in 0..n {
        let rho = r_hi * i as f64 / (n - 1) as f64;
        if rho == 0.0 {
            cells.push((objective(Complex64::ZERO), Complex64::ZERO));
            continue;
        }
        for j in 0..n {
            let phi = -PI + 2.0 * PI * j as f64 / n as f64;
            let y = Complex64::from_polar(rho, phi);
            cells.push((objective(y), y));
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    if !cells[0].0.is_finite() {
        return Err(Error::NoConvergence {
            context: format!("decomposition outer search for ({x1}, {x2})"),
            best_residual: f64::INFINITY,
        });
    }

    let mut best = cells[0];
    for &(f0, y0) in cells.iter().take(opts.decomp_restarts) {
        if !f0.is_finite() {
            continue;
        }
        let nm = NelderMeadOptions {
            initial_step: 0.1 * r_hi.max(1e-6),
            max_evals: 160,
            x_tol: 1e-5 * r_hi.max(1e-9),
        };
        let (xy, val) =
            optim::nelder_mead(|p: &[f64]| objective(Complex64::new(p[0], p[1])), &[y0.re, y0.im], &nm);
        if val < best.0 {
            best = (val, Complex64::new(xy[0], xy[1]));
        }
    }

    let Some((value, s1, s2)) = effort_to(best.1) else {
        return Err(Error::NoConvergence {
            context: format!("decomposition refinement for ({x1}, {x2})"),
            best_residual: f64::INFINITY,
        });
    };
    let witness = Witness {
        meeting_point: best.1,
        lambda: None,
        residual_norm: s1.residual_norm.max(s2.residual_norm),
        traj1: s1.traj,
        traj2: s2.traj,
    };
    Ok(DistanceResult {
        value,
        method: Method::Decomposition,
        lower_bound: lower,
        upper_bound: upper,
        witness: Some(witness),
    })
}

/// Scale factors of the dimensionless problem: amplitudes scale by √(γL) and
/// distances by L²γ.
#[derive(Debug, Clone, Copy)]
pub struct NormalizedUnits {
    pub scale_amplitude: f64,
    pub scale_distance: f64,
}

impl NormalizedUnits {
    pub fn new(fiber: &FiberParams) -> Result<Self> {
        if fiber.gamma <= 0.0 {
            return Err(Error::ZeroGamma);
        }
        Ok(NormalizedUnits {
            scale_amplitude: (fiber.gamma * fiber.length_km).sqrt(),
            scale_distance: fiber.length_km * fiber.length_km * fiber.gamma,
        })
    }

    pub fn normalize_point(&self, x: ComplexPoint) -> ComplexPoint {
        x * self.scale_amplitude
    }

    pub fn denormalize_point(&self, x: ComplexPoint) -> ComplexPoint {
        x / self.scale_amplitude
    }

    pub fn denormalize_distance(&self, d_norm: f64) -> f64 {
        d_norm / self.scale_distance
    }

    pub fn normalize_distance(&self, d: f64) -> f64 {
        d * self.scale_distance
    }

    /// The unit fiber (L = 1, γ = 1) the normalized problem lives on.
    pub fn unit_fiber() -> FiberParams {
        FiberParams { length_km: 1.0, gamma: 1.0 }
    }
}

/// Convenience alias for [`NormalizedUnits::new`].
pub fn to_normalized(fiber: &FiberParams) -> Result<NormalizedUnits> {
    NormalizedUnits::new(fiber)
}

/// Exact distance computed on the dimensionless problem and mapped back to
/// physical units (an independent route to [`exact_distance`]).
pub fn exact_distance_normalized(
    x1: ComplexPoint,
    x2: ComplexPoint,
    fiber: &FiberParams,
    opts: &DistanceOptions,
) -> Result<DistanceResult> {
    let units = NormalizedUnits::new(fiber)?;
    let unit = NormalizedUnits::unit_fiber();
    let mut res = exact_distance(units.normalize_point(x1), units.normalize_point(x2), &unit, opts)?;
    res.value = units.denormalize_distance(res.value);
    res.lower_bound = units.denormalize_distance(res.lower_bound);
    res.upper_bound = units.denormalize_distance(res.upper_bound);
    res.witness = None;
    Ok(res)
}
