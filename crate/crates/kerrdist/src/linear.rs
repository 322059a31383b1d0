//! Linear evolution channels, treated per Fourier mode.
//!
//! A channel q_z = Σ_j a_j ∂ʲq/∂tʲ + n acts on the Fourier coefficients of a
//! 2T-periodic signal through the channel polynomial R(iω_m). The optimal
//! confusion trajectories have the closed per-mode form
//!
//! ```text
//! Q_m(z) = (A + Bz)e^{Rz}              Re R(iω_m) = 0
//! Q_m(z) = Ae^{Rz} + Be^{−R*z}         otherwise
//! ```
//!
//! (and likewise P_m with C, D), tied together by Q_m(L) = P_m(L), the
//! multiplier row (1−μ)B_m + μD_m = 0, and the scalar stationarity condition
//! Σ f(R(iω_m))(|B_m|²−|D_m|²) = 0 solved for μ ∈ (0, 1).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::channel::{ComplexPoint, FiberParams};
use crate::error::{Error, Result};
use crate::optim;

/// Band-limited signal on [−T, T]: x(t) = Σ_{m=−M..M} X_m e^{iω_m t},
/// ω_m = mπ/T.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSignal {
    /// Half-window T (seconds).
    pub half_window: f64,
    /// Coefficients for m = −M..M, stored in that order.
    coeffs: Vec<Complex64>,
}

impl FourierSignal {
    pub fn new(half_window: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if !(half_window > 0.0) {
            return Err(Error::InvalidInput("half window must be positive".into()));
        }
        if coeffs.len() % 2 != 1 {
            return Err(Error::InvalidInput("coefficient count must be odd (m = −M..M)".into()));
        }
        Ok(FourierSignal { half_window, coeffs })
    }

    pub fn zero(half_window: f64, max_mode: usize) -> Self {
        FourierSignal { half_window, coeffs: vec![Complex64::ZERO; 2 * max_mode + 1] }
    }

    pub fn max_mode(&self) -> i64 {
        (self.coeffs.len() as i64 - 1) / 2
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        let idx = m + self.max_mode();
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn set_coeff(&mut self, m: i64, value: Complex64) {
        let idx = (m + self.max_mode()) as usize;
        self.coeffs[idx] = value;
    }

    pub fn omega(&self, m: i64) -> f64 {
        m as f64 * PI / self.half_window
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for m in -self.max_mode()..=self.max_mode() {
            acc += self.coeff(m) * Complex64::from_polar(1.0, self.omega(m) * t);
        }
        acc
    }

    /// Truncate or zero-pad to a new mode count (for truncation-stability checks).
    pub fn with_max_mode(&self, max_mode: usize) -> Self {
        let mut out = FourierSignal::zero(self.half_window, max_mode);
        let keep = (max_mode as i64).min(self.max_mode());
        for m in -keep..=keep {
            out.set_coeff(m, self.coeff(m));
        }
        out
    }
}

/// Channel polynomial R(x) = Σ_j a_j x^j identifying the linear evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPolynomial {
    pub coefficients: Vec<Complex64>,
}

impl ChannelPolynomial {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        ChannelPolynomial { coefficients }
    }

    /// Dispersion-only channel: R(x) = −i(β₂/2)x².
    pub fn dispersive(beta2: f64) -> Self {
        ChannelPolynomial {
            coefficients: vec![
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(0.0, -0.5 * beta2),
            ],
        }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &a in self.coefficients.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn at_mode(&self, signal: &FourierSignal, m: i64) -> Complex64 {
        self.eval(Complex64::new(0.0, signal.omega(m)))
    }
}

const RE_ZERO_SWITCH: f64 = 1e-12;

/// Per-mode coefficients (A, B, C, D) of the optimal trajectories.
#[derive(Debug, Clone, Copy)]
pub struct ModeCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    /// Whether the Re R(iω) = 0 limit branch was used.
    pub limit_branch: bool,
}

/// Solve one mode's 4×4 linear system for the boundary conditions
/// Q(0) = x1, P(0) = x2, Q(L) = P(L), (1−μ)B + μD = 0.
pub fn mode_solution(
    m: i64,
    x1: Complex64,
    x2: Complex64,
    r_at_iw: Complex64,
    mu: f64,
    length: f64,
) -> Result<ModeCoefficients> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidInput(format!("mu = {mu} outside (0, 1)")));
    }
    let limit_branch = r_at_iw.re.abs() < RE_ZERO_SWITCH;
    let zero = Complex64::ZERO;
    let one = Complex64::new(1.0, 0.0);
    let e_r = (r_at_iw * length).exp();
    let mu_c = Complex64::new(mu, 0.0);
    let one_minus_mu = Complex64::new(1.0 - mu, 0.0);

    // Unknowns ordered (A, B, C, D).
    let (mut mat, mut rhs) = if limit_branch {
        (
            vec![
                vec![one, zero, zero, zero],
                vec![zero, zero, one, zero],
                vec![e_r, e_r * length, -e_r, -e_r * length],
                vec![zero, one_minus_mu, zero, mu_c],
            ],
            vec![x1, x2, zero, zero],
        )
    } else {
        let e_s = (-r_at_iw.conj() * length).exp();
        (
            vec![
                vec![one, one, zero, zero],
                vec![zero, zero, one, one],
                vec![e_r, e_s, -e_r, -e_s],
                vec![zero, one_minus_mu, zero, mu_c],
            ],
            vec![x1, x2, zero, zero],
        )
    };

    let Some(sol) = optim::solve_complex(&mut mat, &mut rhs) else {
        return Err(Error::SingularSystem { mode: m });
    };
    Ok(ModeCoefficients { a: sol[0], b: sol[1], c: sol[2], d: sol[3], limit_branch })
}

/// Stationarity weight f(R): 1 on the Re R = 0 branch, else
/// (R+R*)(e^{−L(R+R*)} − 1).
fn stationarity_weight(r: Complex64, length: f64) -> f64 {
    let u = 2.0 * r.re;
    if u.abs() < RE_ZERO_SWITCH {
        1.0
    } else {
        u * ((-length * u).exp() - 1.0)
    }
}

/// Energy kernel κ(R) with ∫₀ᴸ|N_m|²dz = κ·|B_m|²: L on the limit branch,
/// (2 Re R)(1 − e^{−2L Re R}) otherwise.
fn energy_kernel(r: Complex64, length: f64) -> f64 {
    let u = 2.0 * r.re;
    if u.abs() < RE_ZERO_SWITCH {
        length
    } else {
        u * (1.0 - (-length * u).exp())
    }
}

fn check_compatible(x1: &FourierSignal, x2: &FourierSignal) -> Result<()> {
    if (x1.half_window - x2.half_window).abs() > 1e-12 * x1.half_window
        || x1.max_mode() != x2.max_mode()
    {
        return Err(Error::InvalidInput("signals must share T and mode count".into()));
    }
    Ok(())
}

fn scalar_condition(
    x1: &FourierSignal,
    x2: &FourierSignal,
    poly: &ChannelPolynomial,
    length: f64,
    mu: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for m in -x1.max_mode()..=x1.max_mode() {
        let r = poly.at_mode(x1, m);
        let modes = mode_solution(m, x1.coeff(m), x2.coeff(m), r, mu, length)?;
        acc += stationarity_weight(r, length) * (modes.b.norm_sqr() - modes.d.norm_sqr());
    }
    Ok(acc)
}

/// Solve the scalar stationarity condition for μ ∈ (0, 1) by bracketed
/// bisection with a secant polish. Equal inputs return μ = 1/2 by convention.
pub fn solve_mu(
    x1: &FourierSignal,
    x2: &FourierSignal,
    poly: &ChannelPolynomial,
    length: f64,
) -> Result<f64> {
    check_compatible(x1, x2)?;
    if (-x1.max_mode()..=x1.max_mode()).all(|m| (x1.coeff(m) - x2.coeff(m)).norm() == 0.0) {
        return Ok(0.5);
    }

    let f = |mu: f64| scalar_condition(x1, x2, poly, length, mu);
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo * f_hi > 0.0 {
        // Endpoint refinement: scan the interior for a sign change.
        let mut found = None;
        let mut prev = (lo, f_lo);
        for k in 1..=16 {
            let mu = lo + (hi - lo) * k as f64 / 16.0;
            let fv = f(mu)?;
            if prev.1 * fv <= 0.0 {
                found = Some((prev.0, mu, prev.1, fv));
                break;
            }
            prev = (mu, fv);
        }
        match found {
            Some((a, b, fa, fb)) => {
                lo = a;
                hi = b;
                f_lo = fa;
                f_hi = fb;
            }
            None => return Err(Error::NoRoot),
        }
    }
    let _ = f_hi;

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 || hi - lo < 1e-15 {
            return Ok(mid);
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Adversarial distance of the linear channel: per-mode quadratic forms at
/// the solved μ. For dispersion-only polynomials this equals Σ|ΔX_m|²/(4L).
pub fn linear_distance(
    x1: &FourierSignal,
    x2: &FourierSignal,
    poly: &ChannelPolynomial,
    length: f64,
) -> Result<f64> {
    check_compatible(x1, x2)?;
    let mu = solve_mu(x1, x2, poly, length)?;
    let mut effort = 0.0;
    for m in -x1.max_mode()..=x1.max_mode() {
        let r = poly.at_mode(x1, m);
        let modes = mode_solution(m, x1.coeff(m), x2.coeff(m), r, mu, length)?;
        effort += energy_kernel(r, length) * modes.b.norm_sqr();
    }
    Ok(effort)
}

/// Waveform distance D(x₁, x₂) = ∫ d(x₁(t), x₂(t)) dt by trapezoidal
/// quadrature of the per-sample distance over a common uniform time grid.
pub fn waveform_distance(
    t_grid: &[f64],
    x1: &[ComplexPoint],
    x2: &[ComplexPoint],
    _fiber: &FiberParams,
    per_sample: &mut dyn FnMut(ComplexPoint, ComplexPoint) -> Result<f64>,
) -> Result<f64> {
    if t_grid.len() < 2 || x1.len() != t_grid.len() || x2.len() != t_grid.len() {
        return Err(Error::InvalidInput("waveforms must share a grid of at least 2 samples".into()));
    }
    let mut acc = 0.0;
    let mut prev = per_sample(x1[0], x2[0])?;
    for i in 1..t_grid.len() {
        let d = per_sample(x1[i], x2[i])?;
        acc += 0.5 * (t_grid[i] - t_grid[i - 1]) * (prev + d);
        prev = d;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_signal(rng: &mut impl Rng, half_window: f64, max_mode: usize, scale: f64) -> FourierSignal {
        let mut s = FourierSignal::zero(half_window, max_mode);
        for m in -(max_mode as i64)..=(max_mode as i64) {
            s.set_coeff(m, c(rng.random_range(-scale..scale), rng.random_range(-scale..scale)));
        }
        s
    }

    #[test]
    fn equal_inputs_give_zero_mode() {
        let x = c(0.01, -0.02);
        let r = c(0.0, 0.35);
        let modes = mode_solution(0, x, x, r, 0.5, 2000.0).unwrap();
        assert!(modes.b.norm() < 1e-18);
        assert!(modes.d.norm() < 1e-18);
        assert!((modes.a - x).norm() < 1e-15);
    }

    #[test]
    fn zero_polynomial_gives_straight_line() {
        // R ≡ 0: Q(z) = X1 + (X2−X1)z/(2L) at μ = 1/2.
        let (x1, x2) = (c(0.02, 0.0), c(-0.01, 0.01));
        let length = 2000.0;
        let modes = mode_solution(0, x1, x2, Complex64::ZERO, 0.5, length).unwrap();
        assert!(modes.limit_branch);
        assert!((modes.a - x1).norm() < 1e-15);
        let expect_b = (x2 - x1) / (2.0 * length);
        assert!((modes.b - expect_b).norm() < 1e-18);
        // Q(L) = P(L).
        let q_l = modes.a + modes.b * length;
        let p_l = modes.c + modes.d * length;
        assert!((q_l - p_l).norm() < 1e-15);
    }

    #[test]
    fn dispersive_mode_matches_printed_form() {
        let beta2 = -21.0e-3; // arbitrary units; only the structure matters
        let poly = ChannelPolynomial::dispersive(beta2);
        let sig = FourierSignal::zero(1.0, 4);
        let m = 3;
        let r = poly.at_mode(&sig, m);
        // R(iω) = i(β₂/2)ω² is purely imaginary.
        assert!(r.re.abs() < 1e-18);
        assert!((r.im - 0.5 * beta2 * sig.omega(m) * sig.omega(m)).abs() < 1e-15);
        let (x1, x2) = (c(0.01, 0.02), c(-0.03, 0.005));
        let length = 2000.0;
        let modes = mode_solution(m, x1, x2, r, 0.5, length).unwrap();
        let expect_b = (x2 - x1) / (2.0 * length);
        assert!((modes.b - expect_b).norm() < 1e-18);
        assert!((modes.d + expect_b).norm() < 1e-18);
    }

    #[test]
    fn mu_is_half_for_dispersion_only() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let poly = ChannelPolynomial::dispersive(-0.021);
        let x1 = random_signal(&mut rng, 1.0, 8, 0.02);
        let x2 = random_signal(&mut rng, 1.0, 8, 0.02);
        let mu = solve_mu(&x1, &x2, &poly, 2000.0).unwrap();
        assert!((mu - 0.5).abs() < 1e-10, "mu = {mu}");
    }

    #[test]
    fn mu_equal_inputs_convention() {
        let x = FourierSignal::new(1.0, vec![c(0.01, 0.0), c(0.0, 0.02), c(0.01, -0.01)]).unwrap();
        let poly = ChannelPolynomial::dispersive(-0.021);
        assert_eq!(solve_mu(&x, &x.clone(), &poly, 2000.0).unwrap(), 0.5);
    }

    #[test]
    fn single_mode_closed_form() {
        // |ΔX| = 0.02, L = 2000: distance 4e-4/8000 = 5e-8.
        let length = 2000.0;
        let mut x1 = FourierSignal::zero(1.0, 2);
        let mut x2 = FourierSignal::zero(1.0, 2);
        x1.set_coeff(1, c(0.01, 0.0));
        x2.set_coeff(1, c(0.03, 0.0));
        let poly = ChannelPolynomial::dispersive(-0.021);
        let d = linear_distance(&x1, &x2, &poly, length).unwrap();
        assert!((d - 5.0e-8).abs() < 1e-18, "d = {d}");
    }

    #[test]
    fn dispersion_only_matches_time_domain_quadrature() {
        // d = (1/(8LT))·∫|x2−x1|²dt within 1e-8 relative (Simpson quadrature).
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let half_window = 0.7;
        let length = 2000.0;
        let x1 = random_signal(&mut rng, half_window, 16, 0.02);
        let x2 = random_signal(&mut rng, half_window, 16, 0.02);
        let poly = ChannelPolynomial::dispersive(-0.021);
        let d = linear_distance(&x1, &x2, &poly, length).unwrap();

        let n = 4096;
        let h = 2.0 * half_window / n as f64;
        let mut integral = 0.0;
        for k in 0..=n {
            let t = -half_window + k as f64 * h;
            let v = (x2.eval(t) - x1.eval(t)).norm_sqr();
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            integral += w * v;
        }
        integral *= h / 3.0;
        let expect = integral / (8.0 * length * half_window);
        assert!((d - expect).abs() / expect < 1e-8, "d {d} vs quadrature {expect}");
    }

    #[test]
    fn invariant_under_common_offset() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let poly = ChannelPolynomial::dispersive(-0.021);
        let x1 = random_signal(&mut rng, 1.0, 6, 0.02);
        let x2 = random_signal(&mut rng, 1.0, 6, 0.02);
        let offset = random_signal(&mut rng, 1.0, 6, 0.05);
        let d0 = linear_distance(&x1, &x2, &poly, 2000.0).unwrap();
        let add = |a: &FourierSignal, b: &FourierSignal| {
            let mut out = a.clone();
            for m in -a.max_mode()..=a.max_mode() {
                out.set_coeff(m, a.coeff(m) + b.coeff(m));
            }
            out
        };
        let d1 = linear_distance(&add(&x1, &offset), &add(&x2, &offset), &poly, 2000.0).unwrap();
        assert!((d0 - d1).abs() <= 1e-12 * d0);
    }

    #[test]
    fn truncation_stability_of_mu() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let poly = ChannelPolynomial::dispersive(-0.021);
        // Conjugate-symmetric signals (real time series).
        let mut x1 = FourierSignal::zero(1.0, 8);
        let mut x2 = FourierSignal::zero(1.0, 8);
        for m in 0..=8i64 {
            let a = c(rng.random_range(-0.02..0.02), rng.random_range(-0.02..0.02));
            let b = c(rng.random_range(-0.02..0.02), rng.random_range(-0.02..0.02));
            x1.set_coeff(m, a);
            x1.set_coeff(-m, a.conj());
            x2.set_coeff(m, b);
            x2.set_coeff(-m, b.conj());
        }
        let mu8 = solve_mu(&x1, &x2, &poly, 2000.0).unwrap();
        let mu12 = solve_mu(&x1.with_max_mode(12), &x2.with_max_mode(12), &poly, 2000.0).unwrap();
        assert!((mu8 - mu12).abs() < 1e-8);
    }

    #[test]
    fn general_branch_energy_positive() {
        // A lossy channel polynomial (Re R ≠ 0) exercises the two-exponential
        // branch; the mode energy must stay positive and finite.
        let poly = ChannelPolynomial::new(vec![c(-1e-4, 0.0), Complex64::ZERO, c(0.0, -0.01)]);
        let mut x1 = FourierSignal::zero(1.0, 3);
        let mut x2 = FourierSignal::zero(1.0, 3);
        x1.set_coeff(1, c(0.02, 0.0));
        x2.set_coeff(1, c(-0.01, 0.01));
        x1.set_coeff(2, c(0.01, 0.01));
        x2.set_coeff(2, c(0.01, -0.02));
        let d = linear_distance(&x1, &x2, &poly, 2000.0).unwrap();
        assert!(d.is_finite() && d > 0.0, "d = {d}");
        // Boundary conditions hold mode by mode at the solved mu.
        let mu = solve_mu(&x1, &x2, &poly, 2000.0).unwrap();
        for m in -3..=3i64 {
            let r = poly.at_mode(&x1, m);
            let modes = mode_solution(m, x1.coeff(m), x2.coeff(m), r, mu, 2000.0).unwrap();
            let length = 2000.0;
            let (q_l, p_l) = if modes.limit_branch {
                (
                    (modes.a + modes.b * length) * (r * length).exp(),
                    (modes.c + modes.d * length) * (r * length).exp(),
                )
            } else {
                (
                    modes.a * (r * length).exp() + modes.b * (-r.conj() * length).exp(),
                    modes.c * (r * length).exp() + modes.d * (-r.conj() * length).exp(),
                )
            };
            assert!((q_l - p_l).norm() < 1e-12, "mode {m} meeting gap {}", (q_l - p_l).norm());
        }
    }

    #[test]
    fn waveform_distance_cases() {
        let fiber = FiberParams::new(2000.0, 0.0).unwrap();
        let length = fiber.length_km;
        let n = 101;
        let t: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let amp = c(0.02, 0.0);
        let x1: Vec<Complex64> = vec![amp; n];
        let x2: Vec<Complex64> = vec![-amp; n];
        // γ=0 per-sample closed form under the integral.
        let mut per_sample =
            |a: Complex64, b: Complex64| Ok((a - b).norm_sqr() / (4.0 * length));
        let d = waveform_distance(&t, &x1, &x2, &fiber, &mut per_sample).unwrap();
        // Constant integrand: 2T·d(A, −A).
        let expect = 2.0 * (2.0 * amp).norm_sqr() / (4.0 * length);
        assert!((d - expect).abs() < 1e-15, "d = {d}");
        // Identical waveforms: zero.
        let d0 = waveform_distance(&t, &x1, &x1, &fiber, &mut per_sample).unwrap();
        assert_eq!(d0, 0.0);
    }
}
