//! Shooting solvers for the two Euler–Lagrange boundary value problems.
//!
//! Both trajectories of the joint confusion problem obey the same stationary
//! dynamics
//!
//! ```text
//! a'' = −4γ b'(a²+b²) + 3γ² a (a²+b²)²
//! b'' =  4γ a'(a²+b²) + 3γ² b (a²+b²)²
//! ```
//!
//! with the running cost g = (a' + γb(a²+b²))² + (b' − γa(a²+b²))² (the squared
//! control magnitude). The joint system couples them through the meeting
//! condition at z = L, an equal-energy helper state c with c(0) = c(L) = 0, and
//! two transversality rows weighted by the multiplier λ. The point-to-point
//! effort problem is the same dynamics for a single trajectory with both
//! endpoints pinned.
//!
//! Solution strategy: damped Newton on the shooting unknowns with
//! finite-difference Jacobians, seeded from analytically constructed control
//! families (straight lines, radial moves to a common circle, constant-envelope
//! phase controls with winding variants), with γ-continuation from the exact
//! linear solution as the fallback.

use num_complex::Complex64;

use crate::channel::{ComplexPoint, ControlSignal, FiberParams, Trajectory};
use crate::distance;
use crate::error::{Error, Result};
use crate::ode;
use crate::optim;

/// Instantaneous state of the joint system; `c` accumulates the energy
/// mismatch and `lambda` is the (constant) multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub da1: f64,
    pub db1: f64,
    pub da2: f64,
    pub db2: f64,
    pub c: f64,
    pub lambda: f64,
}

/// Converged solution of the joint problem.
#[derive(Debug, Clone)]
pub struct JointSolution {
    pub traj1: Trajectory,
    pub traj2: Trajectory,
    pub lambda: f64,
    /// Minimized effort ∫g₁dz (W/km); equals ∫g₂dz at acceptance since c(L)=0.
    pub effort: f64,
    /// Scaled terminal residual ∞-norm at acceptance.
    pub residual_norm: f64,
    pub meeting_point: ComplexPoint,
    /// Energy mismatch c(L) of the accepted solution (diagnostic).
    pub energy_mismatch: f64,
}

/// Converged solution of the point-to-point effort problem.
#[derive(Debug, Clone)]
pub struct EffortSolution {
    pub traj: Trajectory,
    pub effort: f64,
    pub residual_norm: f64,
}

impl JointSolution {
    /// Reuse this solution as a shooting seed (warm starts of parameter
    /// sweeps): q' = n + iγ|q|²q recovers the initial derivatives.
    pub fn as_seed(&self, fiber: &FiberParams) -> ShootingSeed {
        let dq = |t: &Trajectory| {
            let x = t.states[0];
            t.control.samples[0] + Complex64::I * fiber.gamma * x.norm_sqr() * x
        };
        ShootingSeed { dq1: dq(&self.traj1), dq2: dq(&self.traj2), lambda: self.lambda }
    }
}

/// Seed families for the shooting unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedBranch {
    /// Straight-line solution of the γ = 0 problem, meeting at the midpoint.
    Linear,
    /// Radial constant-envelope controls toward a common circle.
    Radial,
    /// Constant-envelope phase controls toward the upper-bound meeting point,
    /// including winding-shifted variants.
    Phase,
}

/// Initial guess for the joint shooting unknowns (q₁'(0), q₂'(0), λ).
#[derive(Debug, Clone, Copy)]
pub struct ShootingSeed {
    pub dq1: Complex64,
    pub dq2: Complex64,
    pub lambda: f64,
}

/// Tunables for the shooting solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Mixed abs/rel tolerance of the adaptive integrator.
    pub ode_tol: f64,
    /// Convergence threshold on the scaled terminal residual ∞-norm.
    pub newton_tol: f64,
    pub max_iters: usize,
    /// Line-search halvings per Newton step before the step is rejected.
    pub max_halvings: usize,
    /// Relative finite-difference step for Jacobian columns.
    pub fd_step: f64,
    /// Geometric γ-continuation levels used when all seeds fail.
    pub continuation_steps: usize,
    /// Uniform sample count of recovered controls.
    pub control_samples: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            ode_tol: 1e-10,
            newton_tol: 1e-9,
            max_iters: 50,
            max_halvings: 8,
            fd_step: 1e-7,
            continuation_steps: 8,
            control_samples: 2049,
        }
    }
}

impl SolverConfig {
    /// Profile for bulk matrix fills: looser tolerances (still orders of
    /// magnitude inside the percent-level distance contracts), coarser
    /// recorded controls.
    pub fn fast() -> Self {
        SolverConfig {
            ode_tol: 1e-9,
            newton_tol: 1e-8,
            control_samples: 513,
            ..SolverConfig::default()
        }
    }
}

/// Running cost g = |q' − iγ|q|²q|², evaluated from real components.
pub fn running_cost(a: f64, b: f64, da: f64, db: f64, gamma: f64) -> f64 {
    let rho = a * a + b * b;
    let u = da + gamma * b * rho;
    let t = db - gamma * a * rho;
    u * u + t * t
}

/// Derivative of the joint state under the stationary dynamics
/// (the returned struct holds the derivative of each field; λ' = 0).
pub fn eulag_rhs(s: &JointState, fiber: &FiberParams) -> JointState {
    let g = fiber.gamma;
    let r1 = s.a1 * s.a1 + s.b1 * s.b1;
    let r2 = s.a2 * s.a2 + s.b2 * s.b2;
    let g1 = running_cost(s.a1, s.b1, s.da1, s.db1, g);
    let g2 = running_cost(s.a2, s.b2, s.da2, s.db2, g);
    JointState {
        a1: s.da1,
        b1: s.db1,
        a2: s.da2,
        b2: s.db2,
        da1: -4.0 * g * s.db1 * r1 + 3.0 * g * g * s.a1 * r1 * r1,
        db1: 4.0 * g * s.da1 * r1 + 3.0 * g * g * s.b1 * r1 * r1,
        da2: -4.0 * g * s.db2 * r2 + 3.0 * g * g * s.a2 * r2 * r2,
        db2: 4.0 * g * s.da2 * r2 + 3.0 * g * g * s.b2 * r2 * r2,
        c: g2 - g1,
        lambda: 0.0,
    }
}

// Internal integration state: [a1, b1, a1', b1', a2, b2, a2', b2', c, e]
// where e accumulates ∫g₁dz.
fn joint_rhs(gamma: f64, y: &[f64; 10]) -> [f64; 10] {
    let (a1, b1, v1, w1) = (y[0], y[1], y[2], y[3]);
    let (a2, b2, v2, w2) = (y[4], y[5], y[6], y[7]);
    let r1 = a1 * a1 + b1 * b1;
    let r2 = a2 * a2 + b2 * b2;
    let g1 = running_cost(a1, b1, v1, w1, gamma);
    let g2 = running_cost(a2, b2, v2, w2, gamma);
    [
        v1,
        w1,
        -4.0 * gamma * w1 * r1 + 3.0 * gamma * gamma * a1 * r1 * r1,
        4.0 * gamma * v1 * r1 + 3.0 * gamma * gamma * b1 * r1 * r1,
        v2,
        w2,
        -4.0 * gamma * w2 * r2 + 3.0 * gamma * gamma * a2 * r2 * r2,
        4.0 * gamma * v2 * r2 + 3.0 * gamma * gamma * b2 * r2 * r2,
        g2 - g1,
        g1,
    ]
}

// Single-trajectory state: [a, b, a', b', e].
fn single_rhs(gamma: f64, y: &[f64; 5]) -> [f64; 5] {
    let (a, b, v, w) = (y[0], y[1], y[2], y[3]);
    let r = a * a + b * b;
    [
        v,
        w,
        -4.0 * gamma * w * r + 3.0 * gamma * gamma * a * r * r,
        4.0 * gamma * v * r + 3.0 * gamma * gamma * b * r * r,
        running_cost(a, b, v, w, gamma),
    ]
}

struct JointShooter<'a> {
    x1: Complex64,
    x2: Complex64,
    fiber: &'a FiberParams,
    cfg: &'a SolverConfig,
    pos_scale: f64,
    der_scale: f64,
    energy_scale: f64,
}

enum SeedOutcome {
    Converged { u: [f64; 5], end: [f64; 10], norm: f64 },
    DegenerateLambda { lambda: f64 },
    Failed { best_norm: f64 },
}

impl<'a> JointShooter<'a> {
    fn new(x1: Complex64, x2: Complex64, fiber: &'a FiberParams, cfg: &'a SolverConfig) -> Self {
        let pos_scale = x1.norm().max(x2.norm());
        JointShooter {
            x1,
            x2,
            fiber,
            cfg,
            pos_scale,
            der_scale: pos_scale / fiber.length_km,
            energy_scale: pos_scale * pos_scale / fiber.length_km,
        }
    }

    fn floors(&self) -> [f64; 10] {
        let p = self.pos_scale;
        let d = self.der_scale;
        let e = self.energy_scale;
        [p, p, d, d, p, p, d, d, e, e]
    }

    fn integrate_endpoint(&self, v: &[f64; 4]) -> Option<[f64; 10]> {
        let y0 = [
            self.x1.re, self.x1.im, v[0], v[1], self.x2.re, self.x2.im, v[2], v[3], 0.0, 0.0,
        ];
        let gamma = self.fiber.gamma;
        let mut opts = ode::Options::with_floors(self.cfg.ode_tol, self.floors());
        // Optimal trajectories stay within a few input radii; anything beyond
        // is a diverging shot and gets cut off immediately.
        opts.state_cap = Some(6.0 * self.pos_scale.max(self.der_scale));
        ode::endpoint(|_z, y| joint_rhs(gamma, y), 0.0, self.fiber.length_km, y0, &opts).ok()
    }

    /// Scaled terminal residuals (meeting re/im, energy equality, transversality re/im).
    fn residual(&self, end: &[f64; 10], lambda: f64) -> [f64; 5] {
        let g = self.fiber.gamma;
        let rho1 = end[0] * end[0] + end[1] * end[1];
        let t_a = (1.0 - lambda) * end[2] + lambda * end[6] + g * end[1] * rho1;
        let t_b = (1.0 - lambda) * end[3] + lambda * end[7] - g * end[0] * rho1;
        [
            (end[0] - end[4]) / self.pos_scale,
            (end[1] - end[5]) / self.pos_scale,
            end[8] / self.energy_scale,
            t_a / self.der_scale,
            t_b / self.der_scale,
        ]
    }

    fn residual_at(&self, u: &[f64; 5]) -> Option<([f64; 5], [f64; 10])> {
        let end = self.integrate_endpoint(&[u[0], u[1], u[2], u[3]])?;
        Some((self.residual(&end, u[4]), end))
    }

    /// Finite-difference Jacobian over the four initial derivatives, analytic
    /// column for λ (which only enters the terminal rows).
    fn fd_jacobian(&self, u: &[f64; 5], r: &[f64; 5], end: &[f64; 10]) -> Option<Vec<Vec<f64>>> {
        let cfg = self.cfg;
        let mut jac = vec![vec![0.0; 5]; 5];
        for col in 0..4 {
            let h = cfg.fd_step * u[col].abs().max(self.der_scale.max(1e-300));
            let mut up = *u;
            up[col] += h;
            let (rp, _) = self.residual_at(&up)?;
            for row in 0..5 {
                jac[row][col] = (rp[row] - r[row]) / h;
            }
        }
        jac[3][4] = (end[6] - end[2]) / self.der_scale;
        jac[4][4] = (end[7] - end[3]) / self.der_scale;
        Some(jac)
    }

    fn solve_from(&self, seed: &ShootingSeed) -> SeedOutcome {
        let cfg = self.cfg;
        let mut u = [seed.dq1.re, seed.dq1.im, seed.dq2.re, seed.dq2.im, seed.lambda];
        let Some((mut r, mut end)) = self.residual_at(&u) else {
            return SeedOutcome::Failed { best_norm: f64::INFINITY };
        };
        let mut norm = inf_norm(&r);

        // Quasi-Newton: finite-difference Jacobian at the start and after a
        // stalled line search, rank-1 Broyden updates in between.
        let mut jac: Option<Vec<Vec<f64>>> = None;
        let mut fresh = false;
        let mut norms = vec![norm];

        for _iter in 0..cfg.max_iters {
            if norm <= cfg.newton_tol {
                break;
            }
            // A run that cannot even halve its residual across twelve damped
            // steps is chasing the wrong branch; give up early.
            if norms.len() >= 13 && norm > 0.5 * norms[norms.len() - 13] {
                return SeedOutcome::Failed { best_norm: norm };
            }

            if jac.is_none() {
                match self.fd_jacobian(&u, &r, &end) {
                    Some(j) => {
                        jac = Some(j);
                        fresh = true;
                    }
                    None => return SeedOutcome::Failed { best_norm: norm },
                }
            }
            let mut lhs = jac.clone().expect("jacobian present");
            let mut rhs = vec![-r[0], -r[1], -r[2], -r[3], -r[4]];
            let Some(step) = optim::solve_real(&mut lhs, &mut rhs) else {
                return SeedOutcome::Failed { best_norm: norm };
            };

            // Damped update: halve until the residual decreases.
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..=cfg.max_halvings {
                let mut trial = u;
                for i in 0..5 {
                    trial[i] += alpha * step[i];
                }
                if let Some((rt, et)) = self.residual_at(&trial) {
                    let nt = inf_norm(&rt);
                    if nt < norm {
                        // Broyden: B += (Δr − BΔu)Δuᵀ/(ΔuᵀΔu).
                        if let Some(b) = jac.as_mut() {
                            let du: Vec<f64> = (0..5).map(|i| trial[i] - u[i]).collect();
                            let du_sq: f64 = du.iter().map(|v| v * v).sum();
                            if du_sq > 0.0 {
                                for row in 0..5 {
                                    let mut bdu = 0.0;
                                    for col in 0..5 {
                                        bdu += b[row][col] * du[col];
                                    }
                                    let coef = (rt[row] - r[row] - bdu) / du_sq;
                                    for col in 0..5 {
                                        b[row][col] += coef * du[col];
                                    }
                                }
                            }
                        }
                        u = trial;
                        r = rt;
                        end = et;
                        norm = nt;
                        norms.push(nt);
                        accepted = true;
                        fresh = false;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                if fresh {
                    return SeedOutcome::Failed { best_norm: norm };
                }
                // Stale Broyden matrix; refresh and retry.
                jac = None;
            }
        }

        if norm <= cfg.newton_tol {
            if u[4] <= 1e-6 || u[4] >= 1.0 - 1e-6 {
                SeedOutcome::DegenerateLambda { lambda: u[4] }
            } else {
                SeedOutcome::Converged { u, end, norm }
            }
        } else {
            SeedOutcome::Failed { best_norm: norm }
        }
    }

    /// Record the full trajectories for an accepted unknown vector. The step
    /// is capped at the control sample spacing so the resampled control stays
    /// faithful to the continuous one.
    fn build_solution(&self, u: &[f64; 5], norm: f64) -> Result<JointSolution> {
        let y0 = [
            self.x1.re, self.x1.im, u[0], u[1], self.x2.re, self.x2.im, u[2], u[3], 0.0, 0.0,
        ];
        let gamma = self.fiber.gamma;
        let length = self.fiber.length_km;
        let h_rec = length / (self.cfg.control_samples.max(257) - 1) as f64;
        let opts = ode::Options {
            tol: self.cfg.ode_tol,
            floors: self.floors(),
            max_step: Some(h_rec),
            state_cap: None,
        };
        let sol = ode::integrate(|_z, y| joint_rhs(gamma, y), 0.0, length, y0, &opts)?;
        let end = *sol.y.last().expect("nonempty solution");

        let traj1 = extract_trajectory(&sol, 0, gamma, length, self.cfg.control_samples);
        let traj2 = extract_trajectory(&sol, 4, gamma, length, self.cfg.control_samples);
        let meeting_point =
            0.5 * (Complex64::new(end[0], end[1]) + Complex64::new(end[4], end[5]));
        Ok(JointSolution {
            traj1,
            traj2,
            lambda: u[4],
            effort: end[9],
            residual_norm: norm,
            meeting_point,
            energy_mismatch: end[8],
        })
    }
}

fn inf_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Slice trajectory k (state offset 0 or 4) out of a recorded joint solution,
/// recovering the control n = q' − iγ|q|²q on a uniform grid.
fn extract_trajectory(
    sol: &ode::OdeSolution<10>,
    offset: usize,
    gamma: f64,
    length: f64,
    control_samples: usize,
) -> Trajectory {
    let states: Vec<Complex64> = sol
        .y
        .iter()
        .map(|y| Complex64::new(y[offset], y[offset + 1]))
        .collect();
    let node_controls: Vec<Complex64> = sol
        .y
        .iter()
        .map(|y| {
            let q = Complex64::new(y[offset], y[offset + 1]);
            let dq = Complex64::new(y[offset + 2], y[offset + 3]);
            dq - Complex64::I * gamma * q.norm_sqr() * q
        })
        .collect();
    let control = resample_uniform(&sol.z, &node_controls, length, control_samples);
    Trajectory { z_grid: sol.z.clone(), states, control }
}

fn resample_uniform(z: &[f64], values: &[Complex64], length: f64, n: usize) -> ControlSignal {
    let n = n.max(2);
    let step = length / (n - 1) as f64;
    let mut samples = Vec::with_capacity(n);
    let mut seg = 0usize;
    for i in 0..n {
        let zi = i as f64 * step;
        while seg + 2 < z.len() && z[seg + 1] < zi {
            seg += 1;
        }
        let h = z[seg + 1] - z[seg];
        let t = if h > 0.0 { ((zi - z[seg]) / h).clamp(0.0, 1.0) } else { 0.0 };
        samples.push(values[seg] * (1.0 - t) + values[seg + 1] * t);
    }
    ControlSignal { samples, grid_step: step }
}

/// Solve the joint confusion problem for the pair (x1, x2), trying every seed
/// and returning the minimum-effort converged solution.
///
/// Falls back to γ-continuation from the exact linear solution when no seed
/// converges directly. Errors with [`Error::DegenerateMultiplier`] when every
/// convergent branch has λ outside (0, 1) (the caller should switch to the
/// decomposition method), or [`Error::NoConvergence`] when nothing converges.
pub fn solve_joint(
    x1: ComplexPoint,
    x2: ComplexPoint,
    fiber: &FiberParams,
    seeds: &[ShootingSeed],
    cfg: &SolverConfig,
) -> Result<JointSolution> {
    if x1 == x2 {
        return Err(Error::InvalidInput("solve_joint requires distinct inputs".into()));
    }
    let shooter = JointShooter::new(x1, x2, fiber, cfg);

    let mut best: Option<([f64; 5], [f64; 10], f64)> = None;
    let mut best_failed_norm = f64::INFINITY;
    let mut degenerate_lambda: Option<f64> = None;

    let consider = |outcome: SeedOutcome,
                        best: &mut Option<([f64; 5], [f64; 10], f64)>,
                        best_failed: &mut f64,
                        degenerate: &mut Option<f64>| {
        match outcome {
            SeedOutcome::Converged { u, end, norm } => {
                if best.as_ref().map_or(true, |(_, e, _)| end[9] < e[9]) {
                    *best = Some((u, end, norm));
                }
            }
            SeedOutcome::DegenerateLambda { lambda } => *degenerate = Some(lambda),
            SeedOutcome::Failed { best_norm } => *best_failed = best_failed.min(best_norm),
        }
    };

    for seed in seeds {
        let outcome = shooter.solve_from(seed);
        consider(outcome, &mut best, &mut best_failed_norm, &mut degenerate_lambda);
    }

    if best.is_none() {
        if let Some(outcome) = continuation(&shooter, cfg) {
            consider(outcome, &mut best, &mut best_failed_norm, &mut degenerate_lambda);
        }
    }

    match best {
        Some((u, _end, norm)) => shooter.build_solution(&u, norm),
        None => match degenerate_lambda {
            Some(lambda) => Err(Error::DegenerateMultiplier { lambda }),
            None => Err(Error::NoConvergence {
                context: format!("joint BVP for ({x1}, {x2})"),
                best_residual: best_failed_norm,
            }),
        },
    }
}

/// γ-continuation: start at the exact γ = 0 straight-line solution and ramp
/// the nonlinearity geometrically up to the target, reusing each converged
/// unknown vector as the next seed. Failed stages bisect the γ interval.
fn continuation(shooter: &JointShooter<'_>, cfg: &SolverConfig) -> Option<SeedOutcome> {
    let target = shooter.fiber.gamma;
    if target == 0.0 {
        return None;
    }
    let length = shooter.fiber.length_km;
    let mid = 0.5 * (shooter.x1 + shooter.x2);
    let mut seed = ShootingSeed {
        dq1: (mid - shooter.x1) / length,
        dq2: (mid - shooter.x2) / length,
        lambda: 0.5,
    };

    let steps = cfg.continuation_steps.max(1);
    let mut gamma_done = 0.0;
    let mut gamma_try = target * 0.5f64.powi(steps as i32 - 1);
    let mut budget = 6 * steps;
    while budget > 0 {
        budget -= 1;
        let fiber_j = FiberParams { length_km: length, gamma: gamma_try };
        let stage = JointShooter::new(shooter.x1, shooter.x2, &fiber_j, cfg);
        match stage.solve_from(&seed) {
            SeedOutcome::Converged { u, end, norm } => {
                if gamma_try == target {
                    return Some(SeedOutcome::Converged { u, end, norm });
                }
                seed = ShootingSeed {
                    dq1: Complex64::new(u[0], u[1]),
                    dq2: Complex64::new(u[2], u[3]),
                    lambda: u[4],
                };
                gamma_done = gamma_try;
                gamma_try = (2.0 * gamma_try).min(target);
            }
            other => {
                if (gamma_try - gamma_done) < 1e-3 * target {
                    return if gamma_try == target { Some(other) } else { None };
                }
                gamma_try = 0.5 * (gamma_done + gamma_try);
            }
        }
    }
    None
}

/// Solve the point-to-point minimum-effort problem x → y; returns the
/// minimum-effort converged solution over the seed list.
pub fn solve_effort(
    x: ComplexPoint,
    y: ComplexPoint,
    fiber: &FiberParams,
    seeds: &[Complex64],
    cfg: &SolverConfig,
) -> Result<EffortSolution> {
    let gamma = fiber.gamma;
    let length = fiber.length_km;
    let pos_scale = x.norm().max(y.norm()).max(1e-12);
    let der_scale = pos_scale / length;
    let floors =
        [pos_scale, pos_scale, der_scale, der_scale, pos_scale * pos_scale / length];

    let residual_at = |u: &[f64; 2]| -> Option<([f64; 2], [f64; 5])> {
        let y0 = [x.re, x.im, u[0], u[1], 0.0];
        let mut opts = ode::Options::with_floors(cfg.ode_tol, floors);
        opts.state_cap = Some(6.0 * pos_scale.max(der_scale));
        let end = ode::endpoint(|_z, s| single_rhs(gamma, s), 0.0, length, y0, &opts).ok()?;
        Some(([(end[0] - y.re) / pos_scale, (end[1] - y.im) / pos_scale], end))
    };

    let fd_jacobian = |u: &[f64; 2], r: &[f64; 2]| -> Option<Vec<Vec<f64>>> {
        let mut jac = vec![vec![0.0; 2]; 2];
        for col in 0..2 {
            let h = cfg.fd_step * u[col].abs().max(der_scale.max(1e-300));
            let mut up = *u;
            up[col] += h;
            let (rp, _) = residual_at(&up)?;
            for row in 0..2 {
                jac[row][col] = (rp[row] - r[row]) / h;
            }
        }
        Some(jac)
    };

    let mut best: Option<([f64; 2], [f64; 5], f64)> = None;
    let mut best_failed = f64::INFINITY;

    for seed in seeds {
        let mut u = [seed.re, seed.im];
        let Some((mut r, mut end)) = residual_at(&u) else { continue };
        let mut norm = inf_norm(&r);
        let mut jac: Option<Vec<Vec<f64>>> = None;
        let mut fresh = false;
        let mut norms = vec![norm];

        for _iter in 0..cfg.max_iters {
            if norm <= cfg.newton_tol {
                break;
            }
            if norms.len() >= 13 && norm > 0.5 * norms[norms.len() - 13] {
                break;
            }
            if jac.is_none() {
                match fd_jacobian(&u, &r) {
                    Some(j) => {
                        jac = Some(j);
                        fresh = true;
                    }
                    None => break,
                }
            }
            let mut lhs = jac.clone().expect("jacobian present");
            let mut rhs = vec![-r[0], -r[1]];
            let Some(step) = optim::solve_real(&mut lhs, &mut rhs) else { break };

            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..=cfg.max_halvings {
                let trial = [u[0] + alpha * step[0], u[1] + alpha * step[1]];
                if let Some((rt, et)) = residual_at(&trial) {
                    let nt = inf_norm(&rt);
                    if nt < norm {
                        if let Some(b) = jac.as_mut() {
                            let du = [trial[0] - u[0], trial[1] - u[1]];
                            let du_sq = du[0] * du[0] + du[1] * du[1];
                            if du_sq > 0.0 {
                                for row in 0..2 {
                                    let bdu = b[row][0] * du[0] + b[row][1] * du[1];
                                    let coef = (rt[row] - r[row] - bdu) / du_sq;
                                    b[row][0] += coef * du[0];
                                    b[row][1] += coef * du[1];
                                }
                            }
                        }
                        u = trial;
                        r = rt;
                        end = et;
                        norm = nt;
                        norms.push(nt);
                        accepted = true;
                        fresh = false;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                if fresh {
                    break;
                }
                jac = None;
            }
        }

        if norm <= cfg.newton_tol {
            if best.as_ref().map_or(true, |(_, e, _)| end[4] < e[4]) {
                best = Some((u, end, norm));
            }
        } else {
            best_failed = best_failed.min(norm);
        }
    }

    let Some((u, _end, norm)) = best else {
        return Err(Error::NoConvergence {
            context: format!("effort BVP {x} -> {y}"),
            best_residual: best_failed,
        });
    };

    // Re-run with recording for the returned trajectory; step capped at the
    // control sample spacing.
    let y0 = [x.re, x.im, u[0], u[1], 0.0];
    let h_rec = length / (cfg.control_samples.max(257) - 1) as f64;
    let opts = ode::Options { tol: cfg.ode_tol, floors, max_step: Some(h_rec), state_cap: None };
    let sol = ode::integrate(|_z, s| single_rhs(gamma, s), 0.0, length, y0, &opts)?;
    let states: Vec<Complex64> = sol.y.iter().map(|s| Complex64::new(s[0], s[1])).collect();
    let node_controls: Vec<Complex64> = sol
        .y
        .iter()
        .map(|s| {
            let q = Complex64::new(s[0], s[1]);
            Complex64::new(s[2], s[3]) - Complex64::I * gamma * q.norm_sqr() * q
        })
        .collect();
    let control = resample_uniform(&sol.z, &node_controls, length, cfg.control_samples);
    let effort = sol.y.last().unwrap()[4];
    Ok(EffortSolution {
        traj: Trajectory { z_grid: sol.z, states, control },
        effort,
        residual_norm: norm,
    })
}

/// Default seed list for [`solve_effort`]: the straight line, the noise-free
/// rotation, constant-envelope controls toward y with winding variants, and
/// parabolic-dip controls that trade radial excursion for Kerr phase.
pub fn effort_seeds(x: ComplexPoint, y: ComplexPoint, fiber: &FiberParams) -> Vec<Complex64> {
    let length = fiber.length_km;
    let gamma = fiber.gamma;
    let mut seeds = vec![(y - x) / length, Complex64::I * gamma * x.norm_sqr() * x];
    let (r, rho) = (x.norm(), y.norm());
    if r == 0.0 {
        if rho > 0.0 {
            // Explicit minimal control from the origin.
            seeds.push(
                (y / length) * Complex64::from_polar(1.0, -gamma * y.norm_sqr() * length / 3.0),
            );
        }
    } else {
        let theta0 = x.arg();
        if rho == 0.0 {
            seeds.push(
                Complex64::from_polar(1.0, theta0) * Complex64::new(-r / length, gamma * r.powi(3)),
            );
        } else {
            let a = (rho - r) / length;
            let base = distance::delta_angle(x, y, fiber);
            for w in [-1.0, 0.0, 1.0] {
                let b = (base + 2.0 * std::f64::consts::PI * w) * log_mean(r, rho) / length;
                seeds.push(
                    Complex64::from_polar(1.0, theta0)
                        * Complex64::new(a, gamma * r.powi(3) + b),
                );
            }
            if gamma > 0.0 {
                for w in [0.0, 1.0, -1.0] {
                    let dtheta = base + 2.0 * std::f64::consts::PI * w;
                    let a_dip = dip_amplitude(dtheta, 0.5 * (r + rho), gamma, length);
                    seeds.push(
                        Complex64::from_polar(1.0, theta0)
                            * Complex64::new(a + a_dip * length / 2.0, gamma * r.powi(3)),
                    );
                }
            }
        }
    }
    seeds
}

/// Amplitude of the parabolic dip control n = −a(z−L/2)e^{iθ} producing a
/// Kerr phase offset Δθ at mean radius r̄; one correction step for the
/// quadratic term Δθ(a) = γ(r̄ a L³/6 + a²L⁵/120).
fn dip_amplitude(dtheta: f64, r_mean: f64, gamma: f64, length: f64) -> f64 {
    let l3 = length.powi(3);
    let a0 = 6.0 * dtheta / (gamma * r_mean * l3);
    6.0 * (dtheta - gamma * a0 * a0 * l3 * length * length / 120.0) / (gamma * r_mean * l3)
}

fn wrap_angle(t: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let w = t - two_pi * ((t + std::f64::consts::PI) / two_pi).floor();
    if w >= std::f64::consts::PI { w - two_pi } else { w }
}

/// Track the dip branch of the point-to-point problem by continuation in the
/// target phase: start at the plain radial-transit endpoint (where the
/// constant-envelope seed converges trivially) and rotate the target toward y
/// in a few warm-started solves. Returns the branch's initial derivative as a
/// seed for the full problem.
fn phase_continuation_seed(
    x: Complex64,
    y: Complex64,
    fiber: &FiberParams,
    cfg: &SolverConfig,
) -> Option<Complex64> {
    let length = fiber.length_km;
    let gamma = fiber.gamma;
    let (r, rho) = (x.norm(), y.norm());
    if gamma == 0.0 || r == 0.0 || rho == 0.0 {
        return None;
    }
    let kerr = gamma * length * (rho * rho + rho * r + r * r) / 3.0;
    let theta_land = x.arg() + kerr;
    let delta = wrap_angle(y.arg() - theta_land);

    let stage_cfg = SolverConfig { control_samples: 257, ..*cfg };
    let theta0 = x.arg();
    let mut seed =
        Complex64::from_polar(1.0, theta0) * Complex64::new((rho - r) / length, gamma * r.powi(3));
    let steps = 4;
    for j in 1..=steps {
        let yj = Complex64::from_polar(rho, theta_land + delta * j as f64 / steps as f64);
        let sol = solve_effort(x, yj, fiber, &[seed], &stage_cfg).ok()?;
        let x0 = sol.traj.states[0];
        seed = sol.traj.control.samples[0] + Complex64::I * gamma * x0.norm_sqr() * x0;
    }
    Some(seed)
}

/// [`effort_seeds`] plus a phase-continuation run that tracks the dip branch;
/// the robust default for decomposition and decoder work.
pub fn effort_seeds_extended(
    x: ComplexPoint,
    y: ComplexPoint,
    fiber: &FiberParams,
    cfg: &SolverConfig,
) -> Vec<Complex64> {
    let mut seeds = effort_seeds(x, y, fiber);
    if let Some(s) = phase_continuation_seed(x, y, fiber, cfg) {
        seeds.push(s);
    }
    seeds
}

/// (ρ−r)/ln(ρ/r), continuously extended at ρ = r.
fn log_mean(r: f64, rho: f64) -> f64 {
    if (rho - r).abs() <= 1e-9 * rho.max(r) {
        0.5 * (rho + r)
    } else {
        (rho - r) / (rho / r).ln()
    }
}

/// Construct shooting seeds of the requested branch for the pair (x1, x2).
pub fn make_seeds(
    x1: ComplexPoint,
    x2: ComplexPoint,
    fiber: &FiberParams,
    branch: SeedBranch,
) -> Vec<ShootingSeed> {
    let length = fiber.length_km;
    let gamma = fiber.gamma;
    let (r1, r2) = (x1.norm(), x2.norm());
    match branch {
        SeedBranch::Linear => {
            let mid = 0.5 * (x1 + x2);
            vec![ShootingSeed { dq1: (mid - x1) / length, dq2: (mid - x2) / length, lambda: 0.5 }]
        }
        SeedBranch::Radial => {
            let mut seeds = Vec::new();
            for rho in [0.5 * (r1 + r2), 0.0] {
                let dq1 = radial_seed_derivative(x1, x2, rho, fiber);
                let dq2 = radial_seed_derivative(x2, x1, rho, fiber);
                seeds.push(ShootingSeed { dq1, dq2, lambda: 0.5 });
            }
            seeds
        }
        SeedBranch::Phase => {
            let Ok((_bound, y_star)) = distance::upper_bound_witness(x1, x2, fiber) else {
                return Vec::new();
            };
            let rho = y_star.norm();
            let mut seeds = Vec::new();
            for (w1, w2) in [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
                let dq1 = envelope_seed_derivative(x1, y_star, rho, w1, gamma, length, fiber);
                let dq2 = envelope_seed_derivative(x2, y_star, rho, w2, gamma, length, fiber);
                seeds.push(ShootingSeed { dq1, dq2, lambda: 0.5 });
            }
            seeds.extend(dip_seeds(x1, x2, fiber));
            seeds
        }
    }
}

/// All seed branches concatenated.
pub fn all_seeds(x1: ComplexPoint, x2: ComplexPoint, fiber: &FiberParams) -> Vec<ShootingSeed> {
    let mut seeds = make_seeds(x1, x2, fiber, SeedBranch::Linear);
    seeds.extend(make_seeds(x1, x2, fiber, SeedBranch::Radial));
    seeds.extend(make_seeds(x1, x2, fiber, SeedBranch::Phase));
    seeds
}

/// Initial derivative of a radial constant-envelope trajectory from `x`
/// toward the circle of radius ρ; `other` fixes the landing angle when `x`
/// is the origin.
fn radial_seed_derivative(x: Complex64, other: Complex64, rho: f64, fiber: &FiberParams) -> Complex64 {
    let length = fiber.length_km;
    let gamma = fiber.gamma;
    let r = x.norm();
    if r > 0.0 {
        Complex64::from_polar(1.0, x.arg()) * Complex64::new((rho - r) / length, gamma * r.powi(3))
    } else {
        // Landing angle of the partner's radial trajectory.
        let r_o = other.norm();
        let phi_y = other.arg() + gamma * length * (rho * rho + rho * r_o + r_o * r_o) / 3.0;
        let y = Complex64::from_polar(rho, phi_y);
        (y / length) * Complex64::from_polar(1.0, -gamma * y.norm_sqr() * length / 3.0)
    }
}

/// Seeds for the high-power phase branch, built from the paper-style dip
/// construction: each trajectory rides a control n = −a(z − L/2)e^{iθ(z)}
/// whose radial bow modulates the Kerr rate into a phase lead or lag
/// Δθ ≈ γ(r̄ a L³/6 + a²L⁵/120) at effort a²L³/12. The pair splits the
/// required relative phase symmetrically toward a balanced meeting point on
/// the mean circle; the two single-trajectory problems toward that point are
/// solved numerically (they are only 2-dimensional) and their initial
/// derivatives form the joint seed. Winding variants cover ±2π.
fn dip_seeds(x1: Complex64, x2: Complex64, fiber: &FiberParams) -> Vec<ShootingSeed> {
    let length = fiber.length_km;
    let gamma = fiber.gamma;
    let (r1, r2) = (x1.norm(), x2.norm());
    if gamma == 0.0 || r1 == 0.0 || r2 == 0.0 {
        return Vec::new();
    }
    let rho = 0.5 * (r1 + r2);
    // Residual phase gap at the meeting circle after the Kerr rotations of
    // plain radial transits.
    let kerr = |r: f64| gamma * length * (rho * rho + rho * r + r * r) / 3.0;
    let wrap = |t: f64| {
        let two_pi = 2.0 * std::f64::consts::PI;
        let w = t - two_pi * ((t + std::f64::consts::PI) / two_pi).floor();
        if w >= std::f64::consts::PI { w - two_pi } else { w }
    };
    let gap = wrap(x2.arg() + kerr(r2) - x1.arg() - kerr(r1));

    let nested_cfg = SolverConfig { control_samples: 257, ..SolverConfig::fast() };
    let mut seeds = Vec::new();
    for m in [0.0, 1.0, -1.0] {
        let rel = -gap + 2.0 * std::f64::consts::PI * m;
        let theta_meet = x1.arg() + kerr(r1) + 0.5 * rel;
        let y_meet = Complex64::from_polar(rho, theta_meet);

        // Solve the two point-to-point problems toward the balanced meeting
        // point; their initial derivatives put the joint solve essentially on
        // the solution manifold.
        let s1 = solve_effort(
            x1,
            y_meet,
            fiber,
            &effort_seeds_extended(x1, y_meet, fiber, &nested_cfg),
            &nested_cfg,
        );
        let s2 = solve_effort(
            x2,
            y_meet,
            fiber,
            &effort_seeds_extended(x2, y_meet, fiber, &nested_cfg),
            &nested_cfg,
        );
        if let (Ok(s1), Ok(s2)) = (s1, s2) {
            let dq = |s: &EffortSolution, x: Complex64| {
                s.traj.control.samples[0] + Complex64::I * gamma * x.norm_sqr() * x
            };
            seeds.push(ShootingSeed { dq1: dq(&s1, x1), dq2: dq(&s2, x2), lambda: 0.5 });
        } else {
            // Raw parabolic guess as a fallback.
            let dtheta = [0.5 * rel, -0.5 * rel];
            let mut dq = [Complex64::ZERO; 2];
            for (k, (&x, r)) in [(x1, r1), (x2, r2)].iter().map(|(x, r)| (x, *r)).enumerate() {
                let a_dip = dip_amplitude(dtheta[k], 0.5 * (r + rho), gamma, length);
                let radial = (rho - r) / length + a_dip * length / 2.0;
                dq[k] = Complex64::from_polar(1.0, x.arg())
                    * Complex64::new(radial, gamma * r.powi(3));
            }
            seeds.push(ShootingSeed { dq1: dq[0], dq2: dq[1], lambda: 0.5 });
        }
    }
    seeds
}

fn envelope_seed_derivative(
    x: Complex64,
    y_star: Complex64,
    rho: f64,
    winding: f64,
    gamma: f64,
    length: f64,
    fiber: &FiberParams,
) -> Complex64 {
    let r = x.norm();
    if r == 0.0 {
        return if rho > 0.0 {
            (y_star / length)
                * Complex64::from_polar(1.0, -gamma * y_star.norm_sqr() * length / 3.0)
        } else {
            Complex64::ZERO
        };
    }
    if rho == 0.0 {
        return Complex64::from_polar(1.0, x.arg()) * Complex64::new(-r / length, gamma * r.powi(3));
    }
    let a = (rho - r) / length;
    let delta = distance::delta_angle(x, y_star, fiber) + 2.0 * std::f64::consts::PI * winding;
    let b = delta * log_mean(r, rho) / length;
    Complex64::from_polar(1.0, x.arg()) * Complex64::new(a, gamma * r.powi(3) + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn rhs_linear_limit() {
        let fiber = FiberParams::new(2000.0, 0.0).unwrap();
        let s = JointState {
            a1: 0.01,
            b1: -0.02,
            a2: 0.03,
            b2: 0.005,
            da1: 1e-5,
            db1: -2e-5,
            da2: 3e-6,
            db2: 4e-6,
            c: 0.0,
            lambda: 0.4,
        };
        let d = eulag_rhs(&s, &fiber);
        assert_eq!(d.da1, 0.0);
        assert_eq!(d.db1, 0.0);
        assert_eq!(d.da2, 0.0);
        assert_eq!(d.db2, 0.0);
        let expect = (s.da2 * s.da2 + s.db2 * s.db2) - (s.da1 * s.da1 + s.db1 * s.db1);
        assert!((d.c - expect).abs() < 1e-18);
        assert_eq!(d.lambda, 0.0);
    }

    #[test]
    fn running_cost_matches_complex_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let gamma = 1.27;
        for _ in 0..32 {
            let q = c(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1));
            let dq = c(rng.random_range(-1e-4..1e-4), rng.random_range(-1e-4..1e-4));
            let g = running_cost(q.re, q.im, dq.re, dq.im, gamma);
            let oracle = (dq - C::I * gamma * q.norm_sqr() * q).norm_sqr();
            assert!((g - oracle).abs() <= 1e-12 * oracle.max(1e-30));
        }
    }

    #[test]
    fn running_cost_zero_on_noise_free() {
        let gamma = 1.27;
        let q = c(0.04, 0.01);
        let dq = C::I * gamma * q.norm_sqr() * q;
        assert!(running_cost(q.re, q.im, dq.re, dq.im, gamma) < 1e-30);
    }

    #[test]
    fn joint_linear_antipodal_closed_form() {
        // γ = 0, x2 = −x1: straight lines meeting at 0, λ = 1/2,
        // effort |2x₁|²/(4L); at x1 = 0.02, L = 2000 that is 2.0e-7.
        let fiber = FiberParams::new(2000.0, 0.0).unwrap();
        let x1 = c(0.02, 0.0);
        let x2 = -x1;
        let cfg = SolverConfig::default();
        let seeds = make_seeds(x1, x2, &fiber, SeedBranch::Linear);
        let sol = solve_joint(x1, x2, &fiber, &seeds, &cfg).unwrap();
        assert!((sol.lambda - 0.5).abs() < 1e-6);
        let expect = (2.0 * 0.02f64).powi(2) / (4.0 * 2000.0);
        assert!((sol.effort - expect).abs() / expect < 1e-6, "effort {}", sol.effort);
        assert!(sol.meeting_point.norm() < 1e-9);
    }

    #[test]
    fn joint_origin_pair_matches_closed_form() {
        // d(x, 0) = |x|²/(4L): with x = 0.04, L = 2000 → 2.0e-7, within 2%.
        let fiber = FiberParams::reference();
        let x1 = c(0.04, 0.0);
        let x2 = C::ZERO;
        let cfg = SolverConfig::default();
        let sol = solve_joint(x1, x2, &fiber, &all_seeds(x1, x2, &fiber), &cfg).unwrap();
        let expect = 0.04f64.powi(2) / (4.0 * 2000.0);
        assert!(
            (sol.effort - expect).abs() / expect < 0.02,
            "effort {} vs {}",
            sol.effort,
            expect
        );
        assert!(sol.lambda > 0.0 && sol.lambda < 1.0);
        assert!(sol.energy_mismatch.abs() <= 1e-6 * sol.effort);
    }

    #[test]
    fn joint_swap_symmetry() {
        let fiber = FiberParams::reference();
        let x1 = c(0.03, 0.01);
        let x2 = c(-0.02, 0.02);
        let cfg = SolverConfig::default();
        let a = solve_joint(x1, x2, &fiber, &all_seeds(x1, x2, &fiber), &cfg).unwrap();
        let b = solve_joint(x2, x1, &fiber, &all_seeds(x2, x1, &fiber), &cfg).unwrap();
        assert!((a.effort - b.effort).abs() / a.effort < 1e-4);
        assert!((a.lambda - (1.0 - b.lambda)).abs() < 1e-4);
    }

    #[test]
    fn effort_from_origin_closed_form() {
        // E(0 → y) = |y|²/L within 1%.
        let fiber = FiberParams::reference();
        let y = C::from_polar(0.02, 0.7);
        let cfg = SolverConfig::default();
        let sol =
            solve_effort(C::ZERO, y, &fiber, &effort_seeds(C::ZERO, y, &fiber), &cfg).unwrap();
        let expect = y.norm_sqr() / fiber.length_km;
        assert!((sol.effort - expect).abs() / expect < 0.01, "effort {}", sol.effort);
    }

    #[test]
    fn effort_zero_for_noise_free_image() {
        let fiber = FiberParams::reference();
        let x = c(0.03, -0.01);
        let y = crate::channel::propagate_noise_free(x, &fiber);
        let cfg = SolverConfig::default();
        let sol = solve_effort(x, y, &fiber, &effort_seeds(x, y, &fiber), &cfg).unwrap();
        assert!(sol.effort < 1e-15, "effort {}", sol.effort);
    }

    #[test]
    fn effort_respects_radial_lower_bound() {
        // E ≥ (|y|−|x|)²/L for any target phase.
        let fiber = FiberParams::reference();
        let x = c(0.01, 0.0);
        let cfg = SolverConfig::default();
        for k in 0..4 {
            let theta = k as f64 * 1.3;
            let y = C::from_polar(0.03, theta);
            let sol = solve_effort(x, y, &fiber, &effort_seeds(x, y, &fiber), &cfg).unwrap();
            let bound = (0.03f64 - 0.01).powi(2) / fiber.length_km;
            assert!(
                sol.effort >= bound * (1.0 - 1e-9),
                "theta {theta}: {} < {bound}",
                sol.effort
            );
        }
    }

    #[test]
    fn effort_control_reintegrates_to_target() {
        let fiber = FiberParams::reference();
        let x = c(0.015, 0.01);
        let y = C::from_polar(0.035, -1.2);
        let cfg = SolverConfig::default();
        let sol = solve_effort(x, y, &fiber, &effort_seeds(x, y, &fiber), &cfg).unwrap();
        let redone = crate::channel::integrate(x, &sol.traj.control, &fiber, 1e-11).unwrap();
        let err = (redone.endpoint() - y).norm() / y.norm();
        assert!(err < 1e-5, "re-integration error {err}");
        // Quadrature energy of the recovered control agrees with the solver effort.
        let quad = crate::channel::control_energy(&sol.traj.control);
        assert!((quad - sol.effort).abs() / sol.effort < 1e-3);
    }

    #[test]
    fn rejects_equal_inputs() {
        let fiber = FiberParams::reference();
        let x = c(0.01, 0.0);
        assert!(solve_joint(x, x, &fiber, &[], &SolverConfig::default()).is_err());
    }
}

/// Integration cost probe used by the profiling binary: one endpoint
/// integration of the joint system, returning (rhs evaluations, endpoint).
#[doc(hidden)]
pub fn probe_joint_integration(
    x1: ComplexPoint,
    x2: ComplexPoint,
    seed: &ShootingSeed,
    fiber: &FiberParams,
    cfg: &SolverConfig,
) -> (usize, [f64; 10]) {
    use std::cell::Cell;
    let count = Cell::new(0usize);
    let shooter = JointShooter::new(x1, x2, fiber, cfg);
    let y0 = [
        x1.re, x1.im, seed.dq1.re, seed.dq1.im, x2.re, x2.im, seed.dq2.re, seed.dq2.im, 0.0, 0.0,
    ];
    let gamma = fiber.gamma;
    let mut opts = ode::Options::with_floors(cfg.ode_tol, shooter.floors());
    opts.state_cap = Some(6.0 * shooter.pos_scale.max(shooter.der_scale));
    let end = ode::endpoint(
        |_z, y| {
            count.set(count.get() + 1);
            joint_rhs(gamma, y)
        },
        0.0,
        fiber.length_km,
        y0,
        &opts,
    )
    .unwrap_or([f64::NAN; 10]);
    (count.get(), end)
}

/// Seed-outcome probe used by the profiling binary.
#[doc(hidden)]
pub fn probe_seed(
    x1: ComplexPoint,
    x2: ComplexPoint,
    seed: &ShootingSeed,
    fiber: &FiberParams,
    cfg: &SolverConfig,
) -> String {
    let shooter = JointShooter::new(x1, x2, fiber, cfg);
    match shooter.solve_from(seed) {
        SeedOutcome::Converged { end, norm, u } => format!(
            "converged: effort {:.4e} norm {:.1e} lambda {:.3} meet ({:.4},{:.4})",
            end[9], norm, u[4], end[0], end[1]
        ),
        SeedOutcome::DegenerateLambda { lambda } => format!("degenerate lambda {lambda:.4}"),
        SeedOutcome::Failed { best_norm } => format!("failed: best norm {best_norm:.3e}"),
    }
}

/// Expose the dip family for probing.
#[doc(hidden)]
pub fn probe_dip_seeds(x1: ComplexPoint, x2: ComplexPoint, fiber: &FiberParams) -> Vec<ShootingSeed> {
    dip_seeds(x1, x2, fiber)
}

/// Initial-residual probe used by the profiling binary.
#[doc(hidden)]
pub fn probe_residual(
    x1: ComplexPoint,
    x2: ComplexPoint,
    seed: &ShootingSeed,
    fiber: &FiberParams,
    cfg: &SolverConfig,
) -> Option<[f64; 5]> {
    let shooter = JointShooter::new(x1, x2, fiber, cfg);
    let u = [seed.dq1.re, seed.dq1.im, seed.dq2.re, seed.dq2.im, seed.lambda];
    shooter.residual_at(&u).map(|(r, _)| r)
}
