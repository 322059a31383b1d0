//! The per-sample fiber channel: state equation `q' = iγ|q|²q + n(z)`.
//!
//! Units used throughout the crate: `q` in √W, `z` in km, `γ` in 1/(W·km),
//! control energies in W/km.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode;

/// A channel input/output symbol in the complex plane (√W).
pub type ComplexPoint = Complex64;

/// Fiber instance: length and Kerr nonlinearity coefficient.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FiberParams {
    /// Fiber length L (km), strictly positive.
    #[serde(rename = "L_km")]
    pub length_km: f64,
    /// Nonlinearity coefficient γ (1/(W·km)); zero selects the linear limit.
    pub gamma: f64,
}

impl FiberParams {
    pub fn new(length_km: f64, gamma: f64) -> Result<Self> {
        if !(length_km > 0.0) || !length_km.is_finite() {
            return Err(Error::InvalidInput(format!("fiber length must be positive, got {length_km}")));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidInput(format!("gamma must be nonnegative, got {gamma}")));
        }
        Ok(FiberParams { length_km, gamma })
    }

    /// The paper-scale reference fiber: L = 2000 km, γ = 1.27 (W·km)⁻¹.
    pub fn reference() -> Self {
        FiberParams { length_km: 2000.0, gamma: 1.27 }
    }
}

/// A control (adversarial noise) signal sampled on a uniform z-grid over
/// [0, L], linearly interpolated between samples. Units √W/km.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSignal {
    pub samples: Vec<Complex64>,
    pub grid_step: f64,
}

impl ControlSignal {
    pub fn new(samples: Vec<Complex64>, grid_step: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput("control needs at least 2 samples".into()));
        }
        if !(grid_step > 0.0) {
            return Err(Error::InvalidInput("control grid step must be positive".into()));
        }
        Ok(ControlSignal { samples, grid_step })
    }

    /// Sample a function uniformly on [0, L] with `n` points (n ≥ 2).
    pub fn from_fn(length_km: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Self {
        assert!(n >= 2);
        let step = length_km / (n - 1) as f64;
        let samples = (0..n).map(|i| f(i as f64 * step)).collect();
        ControlSignal { samples, grid_step: step }
    }

    /// The identically-zero control on [0, L].
    pub fn zero(length_km: f64) -> Self {
        ControlSignal::from_fn(length_km, 2, |_| Complex64::ZERO)
    }

    /// Length of the covered interval (km).
    pub fn length_km(&self) -> f64 {
        self.grid_step * (self.samples.len() - 1) as f64
    }

    /// Linear interpolation at position z, clamped to [0, L].
    pub fn at(&self, z: f64) -> Complex64 {
        let n = self.samples.len();
        let t = (z / self.grid_step).clamp(0.0, (n - 1) as f64);
        let i = (t as usize).min(n - 2);
        let frac = t - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }
}

/// A state trajectory q(z) together with the control that produced it.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Strictly increasing grid from 0 to L (km).
    pub z_grid: Vec<f64>,
    /// State samples q(z_grid[i]).
    pub states: Vec<Complex64>,
    pub control: ControlSignal,
}

impl Trajectory {
    pub fn endpoint(&self) -> Complex64 {
        *self.states.last().expect("trajectory is nonempty")
    }
}

/// Noise-free propagation: the channel only rotates the input,
/// `q(L) = x·exp(iγL|x|²)`; the magnitude is preserved exactly.
pub fn propagate_noise_free(x: ComplexPoint, fiber: &FiberParams) -> ComplexPoint {
    let phase = fiber.gamma * fiber.length_km * x.norm_sqr();
    x * Complex64::from_polar(1.0, phase)
}

/// Integrate q' = iγ|q|²q + n(z) from q(0) = x with local error below `tol`.
///
/// The integrator steps adaptively; the control is evaluated by linear
/// interpolation wherever the steps fall. The step size is capped at L/256 so
/// the recorded grid stays fine enough for quadrature checks on the result.
pub fn integrate(x: ComplexPoint, n: &ControlSignal, fiber: &FiberParams, tol: f64) -> Result<Trajectory> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("integrator tolerance must be positive".into()));
    }
    let length = fiber.length_km;
    let gamma = fiber.gamma;
    let rhs = |z: f64, y: &[f64; 2]| -> [f64; 2] {
        let q = Complex64::new(y[0], y[1]);
        let dq = Complex64::I * gamma * q.norm_sqr() * q + n.at(z);
        [dq.re, dq.im]
    };
    // The state magnitude is bounded by |x| + L·max|n|.
    let n_max = n.samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let scale = (x.norm() + length * n_max).max(1e-12);
    let opts = ode::Options {
        tol,
        floors: [scale; 2],
        max_step: Some(length / 256.0),
        state_cap: Some(16.0 * scale),
    };
    let sol = ode::integrate(rhs, 0.0, length, [x.re, x.im], &opts)?;
    Ok(Trajectory {
        z_grid: sol.z,
        states: sol.y.iter().map(|y| Complex64::new(y[0], y[1])).collect(),
        control: n.clone(),
    })
}

/// Control energy E = ∫₀ᴸ |n(z)|² dz by trapezoidal quadrature (W/km).
pub fn control_energy(n: &ControlSignal) -> f64 {
    let h = n.grid_step;
    let mut acc = 0.0;
    for w in n.samples.windows(2) {
        acc += 0.5 * h * (w[0].norm_sqr() + w[1].norm_sqr());
    }
    acc
}

/// Maximum residual over the trajectory grid between q(z) and the
/// integrating-factor expression
/// `exp(iγ∫₀ᶻ|q|²ds)·(q(0) + ∫₀ᶻ n(r)·exp(−iγ∫₀ʳ|q|²ds)dr)`,
/// with both integrals evaluated by composite Simpson quadrature on the
/// recorded grid (midpoint states from cubic Hermite interpolation, using the
/// state equation for node derivatives). Used as an integrator self-test;
/// small residuals certify consistency.
pub fn check_integrating_factor(traj: &Trajectory, fiber: &FiberParams) -> f64 {
    let gamma = fiber.gamma;
    let q_init = traj.states[0];
    let deriv = |z: f64, q: Complex64| Complex64::I * gamma * q.norm_sqr() * q + traj.control.at(z);

    let mut max_residual = 0.0f64;
    // Running integrals Φ(z) = ∫₀ᶻ|q|²ds and I(z) = ∫₀ᶻ n e^{−iγΦ} dr.
    let mut phase = 0.0;
    let mut inner = Complex64::ZERO;

    for i in 1..traj.z_grid.len() {
        let (z0, z1) = (traj.z_grid[i - 1], traj.z_grid[i]);
        let (q0, q1) = (traj.states[i - 1], traj.states[i]);
        let h = z1 - z0;
        let zm = z0 + 0.5 * h;
        let qm = 0.5 * (q0 + q1) + 0.125 * h * (deriv(z0, q0) - deriv(z1, q1));

        let (p0, pm, p1) = (q0.norm_sqr(), qm.norm_sqr(), q1.norm_sqr());
        // Half- and full-interval integrals of the parabola through (p0, pm, p1).
        let phase_mid = phase + h * (5.0 * p0 + 8.0 * pm - p1) / 24.0;
        let phase_end = phase + h * (p0 + 4.0 * pm + p1) / 6.0;

        let f0 = traj.control.at(z0) * Complex64::from_polar(1.0, -gamma * phase);
        let fm = traj.control.at(zm) * Complex64::from_polar(1.0, -gamma * phase_mid);
        let f1 = traj.control.at(z1) * Complex64::from_polar(1.0, -gamma * phase_end);
        inner += (f0 + 4.0 * fm + f1) * (h / 6.0);
        phase = phase_end;

        let expr = Complex64::from_polar(1.0, gamma * phase) * (q_init + inner);
        max_residual = max_residual.max((q1 - expr).norm());
    }
    max_residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn noise_free_zero_input() {
        let fiber = FiberParams::reference();
        assert_eq!(propagate_noise_free(C::ZERO, &fiber), C::ZERO);
    }

    #[test]
    fn noise_free_rotation_angle() {
        // x = 0.05, L = 2000, γ = 1.27: rotation angle 1.27·2000·0.0025 = 6.35 rad.
        let fiber = FiberParams::reference();
        let y = propagate_noise_free(c(0.05, 0.0), &fiber);
        let expected = c(0.05, 0.0) * C::from_polar(1.0, 6.35);
        assert!((y - expected).norm() < 1e-15);
        assert!((y.norm() - 0.05).abs() < 1e-17);
    }

    #[test]
    fn noise_free_gamma_zero_is_identity() {
        let fiber = FiberParams::new(2000.0, 0.0).unwrap();
        let x = c(0.03, -0.01);
        assert_eq!(propagate_noise_free(x, &fiber), x);
    }

    #[test]
    fn integrate_zero_control_matches_closed_form() {
        let fiber = FiberParams::reference();
        let x = c(0.04, 0.01);
        let traj = integrate(x, &ControlSignal::zero(fiber.length_km), &fiber, 1e-12).unwrap();
        let expected = propagate_noise_free(x, &fiber);
        assert!((traj.endpoint() - expected).norm() / expected.norm() < 1e-10);
    }

    #[test]
    fn integrate_linear_constant_control() {
        let fiber = FiberParams::new(2000.0, 0.0).unwrap();
        let cc = c(1e-5, -2e-5);
        let n = ControlSignal::from_fn(fiber.length_km, 3, |_| cc);
        let x = c(0.01, 0.0);
        let traj = integrate(x, &n, &fiber, 1e-12).unwrap();
        let expected = x + cc * fiber.length_km;
        assert!((traj.endpoint() - expected).norm() < 1e-12);
    }

    #[test]
    fn integrate_origin_control_reaches_target() {
        // n(z) = (y/L)·exp(iγ|y|²(z³−L³)/(3L²)) steers 0 to y.
        let fiber = FiberParams::reference();
        let y = c(0.02, 0.035);
        let l = fiber.length_km;
        let g = fiber.gamma;
        let n = ControlSignal::from_fn(l, 2001, |z| {
            (y / l) * C::from_polar(1.0, g * y.norm_sqr() * (z.powi(3) - l.powi(3)) / (3.0 * l * l))
        });
        let traj = integrate(C::ZERO, &n, &fiber, 1e-11).unwrap();
        assert!(
            (traj.endpoint() - y).norm() < 1e-7,
            "endpoint {} vs target {}",
            traj.endpoint(),
            y
        );
        // The §-closed-form effort for this control is |y|²/L.
        let e = control_energy(&n);
        assert!((e - y.norm_sqr() / l).abs() / (y.norm_sqr() / l) < 1e-6);
    }

    #[test]
    fn control_energy_basics() {
        let l = 2000.0;
        assert_eq!(control_energy(&ControlSignal::zero(l)), 0.0);
        let cc = c(3e-5, 4e-5);
        let n = ControlSignal::from_fn(l, 11, |_| cc);
        assert!((control_energy(&n) - cc.norm_sqr() * l).abs() < 1e-18);
    }

    #[test]
    fn control_energy_scales_quadratically() {
        let n = ControlSignal::from_fn(100.0, 33, |z| c((z * 0.1).sin() * 1e-4, (z * 0.05).cos() * 1e-4));
        let scaled = ControlSignal {
            samples: n.samples.iter().map(|s| s * 3.0).collect(),
            grid_step: n.grid_step,
        };
        let ratio = control_energy(&scaled) / control_energy(&n);
        assert!((ratio - 9.0).abs() < 1e-12);
    }

    #[test]
    fn integrating_factor_noise_free() {
        let fiber = FiberParams::reference();
        let traj = integrate(c(0.05, 0.0), &ControlSignal::zero(fiber.length_km), &fiber, 1e-10).unwrap();
        assert!(check_integrating_factor(&traj, &fiber) <= 1e-8);
    }

    #[test]
    fn integrating_factor_gamma_zero() {
        let fiber = FiberParams::new(500.0, 0.0).unwrap();
        let n = ControlSignal::from_fn(fiber.length_km, 5, |_| c(2e-5, 1e-5));
        let traj = integrate(c(0.01, 0.02), &n, &fiber, 1e-10).unwrap();
        assert!(check_integrating_factor(&traj, &fiber) <= 1e-10);
    }

    #[test]
    fn integrating_factor_random_controls() {
        use rand::{Rng, SeedableRng};
        let fiber = FiberParams::reference();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let samples: Vec<C> = (0..257)
                .map(|_| c(rng.random_range(-5e-5..5e-5), rng.random_range(-5e-5..5e-5)))
                .collect();
            let n = ControlSignal::new(samples, fiber.length_km / 256.0).unwrap();
            let x = c(rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05));
            let traj = integrate(x, &n, &fiber, 1e-10).unwrap();
            let r = check_integrating_factor(&traj, &fiber);
            assert!(r <= 1e-6, "residual {r}");
        }
    }

    #[test]
    fn integrate_is_deterministic() {
        let fiber = FiberParams::reference();
        let n = ControlSignal::from_fn(fiber.length_km, 65, |z| c((z * 0.01).sin() * 3e-5, 0.0));
        let a = integrate(c(0.02, 0.01), &n, &fiber, 1e-10).unwrap();
        let b = integrate(c(0.02, 0.01), &n, &fiber, 1e-10).unwrap();
        assert_eq!(a.z_grid, b.z_grid);
        assert_eq!(a.states, b.states);
    }

    #[test]
    fn radial_growth_bound() {
        // |R(z2) − R(z1)| ≤ (z2−z1)·max|n| along any trajectory.
        use rand::{Rng, SeedableRng};
        let fiber = FiberParams::reference();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<C> = (0..129)
            .map(|_| c(rng.random_range(-1e-4..1e-4), rng.random_range(-1e-4..1e-4)))
            .collect();
        let n = ControlSignal::new(samples, fiber.length_km / 128.0).unwrap();
        let n_max = n.samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
        let traj = integrate(c(0.03, 0.0), &n, &fiber, 1e-10).unwrap();
        for w in traj.z_grid.windows(2).zip(traj.states.windows(2)) {
            let (zw, qw) = w;
            let dr = (qw[1].norm() - qw[0].norm()).abs();
            assert!(dr <= (zw[1] - zw[0]) * n_max * (1.0 + 1e-6) + 1e-15);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(FiberParams::new(0.0, 1.0).is_err());
        assert!(FiberParams::new(100.0, -0.5).is_err());
        assert!(ControlSignal::new(vec![C::ZERO], 1.0).is_err());
        assert!(integrate(C::ZERO, &ControlSignal::zero(1.0), &FiberParams::reference(), 0.0).is_err());
    }
}
