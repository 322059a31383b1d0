//! Adaptive Dormand–Prince 5(4) integrator over fixed-size real states.
//!
//! Error per step is controlled componentwise against `tol·(floor_i + |y_i|)`
//! where `floor_i` is the caller's typical scale of component i, so states of
//! very different magnitudes (positions, derivatives, running costs) are each
//! held to the same relative accuracy. The pair is FSAL, so an accepted step
//! reuses its last stage evaluation.

use crate::error::{Error, Result};

// Dormand-Prince RK5(4)7M coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order solution weights equal the last A row (FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;

pub struct OdeSolution<const N: usize> {
    pub z: Vec<f64>,
    pub y: Vec<[f64; N]>,
}

pub struct Options<const N: usize> {
    /// Relative tolerance against the componentwise scale floors.
    pub tol: f64,
    /// Typical magnitude of each component (the absolute-error floor is
    /// tol·floor_i).
    pub floors: [f64; N],
    /// Optional cap on the step size (keeps output grids fine enough for
    /// quadrature on the recorded trajectory).
    pub max_step: Option<f64>,
    /// Abort once any component magnitude exceeds this bound (detects shots
    /// diverging under unstable dynamics without burning steps on them).
    pub state_cap: Option<f64>,
}

impl<const N: usize> Options<N> {
    /// Unit floors: plain mixed absolute/relative control at `tol`.
    #[allow(dead_code)]
    pub fn with_tol(tol: f64) -> Self {
        Options { tol, floors: [1.0; N], max_step: None, state_cap: None }
    }

    pub fn with_floors(tol: f64, floors: [f64; N]) -> Self {
        Options { tol, floors, max_step: None, state_cap: None }
    }
}

/// Integrate `y' = f(z, y)` from `z0` to `z1`, recording every accepted step.
pub fn integrate<const N: usize, F>(
    f: F,
    z0: f64,
    z1: f64,
    y0: [f64; N],
    opts: &Options<N>,
) -> Result<OdeSolution<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut sol = OdeSolution {
        z: Vec::with_capacity(256),
        y: Vec::with_capacity(256),
    };
    sol.z.push(z0);
    sol.y.push(y0);
    drive(f, z0, z1, y0, opts, |z, y| {
        sol.z.push(z);
        sol.y.push(*y);
    })?;
    Ok(sol)
}

/// Integrate and return only the final state.
pub fn endpoint<const N: usize, F>(
    f: F,
    z0: f64,
    z1: f64,
    y0: [f64; N],
    opts: &Options<N>,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut last = y0;
    drive(f, z0, z1, y0, opts, |_, y| last = *y)?;
    Ok(last)
}

fn drive<const N: usize, F, R>(
    f: F,
    z0: f64,
    z1: f64,
    y0: [f64; N],
    opts: &Options<N>,
    mut record: R,
) -> Result<()>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    R: FnMut(f64, &[f64; N]),
{
    let span = z1 - z0;
    if span <= 0.0 {
        return Ok(());
    }
    let tol = opts.tol;
    let h_max = opts.max_step.unwrap_or(span).min(span);
    let h_floor = span * 1e-14;

    let mut z = z0;
    let mut y = y0;
    let mut h = (span / 64.0).min(h_max);
    let mut k: [[f64; N]; 7] = [[0.0; N]; 7];
    k[0] = f(z, &y);
    let mut first_same_as_last = true;

    while z < z1 {
        if h < h_floor {
            return Err(Error::StepFailure { z });
        }
        let h_step = h.min(z1 - z);

        if !first_same_as_last {
            k[0] = f(z, &y);
            first_same_as_last = true;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h_step * a * kj[i];
                    }
                }
            }
            k[s] = f(z + C[s] * h_step, &ys);
        }

        let mut y5 = y;
        let mut err = 0.0f64;
        for i in 0..N {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += h_step * d5;
            let scale = tol * (opts.floors[i] + y[i].abs().max(y5[i].abs()));
            if scale > 0.0 {
                let e = (h_step * (d5 - d4)).abs() / scale;
                if e > err {
                    err = e;
                }
            }
        }

        if err <= 1.0 {
            z += h_step;
            y = y5;
            if let Some(cap) = opts.state_cap {
                if y.iter().any(|v| v.abs() > cap) {
                    return Err(Error::StepFailure { z });
                }
            }
            record(z, &y);
            // FSAL: stage 7 was evaluated at (z, y5).
            k[0] = k[6];
            let scale = (SAFETY * err.max(1e-10).powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE);
            h = (h_step * scale).min(h_max);
        } else {
            let scale = (SAFETY * err.powf(-0.2)).clamp(MIN_SCALE, 1.0);
            h = h_step * scale;
            first_same_as_last = false;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let f = |_z: f64, y: &[f64; 1]| [-y[0]];
        let end = endpoint(f, 0.0, 5.0, [1.0], &Options::with_tol(1e-12)).unwrap();
        assert!((end[0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let f = |_z: f64, y: &[f64; 2]| [y[1], -y[0]];
        let sol = integrate(f, 0.0, 20.0, [1.0, 0.0], &Options::with_tol(1e-11)).unwrap();
        for (z, y) in sol.z.iter().zip(&sol.y) {
            assert!((y[0] - z.cos()).abs() < 1e-8, "drift at z={z}");
        }
    }

    #[test]
    fn polynomial_is_exact() {
        // RK5 integrates quartics exactly up to roundoff.
        let f = |z: f64, _y: &[f64; 1]| [4.0 * z.powi(3)];
        let end = endpoint(f, 0.0, 2.0, [0.0], &Options::with_tol(1e-9)).unwrap();
        assert!((end[0] - 16.0).abs() < 1e-12);
    }

    #[test]
    fn small_component_accuracy_with_floors() {
        // A tiny quadrature component rides along a large oscillation; scale
        // floors keep its relative accuracy.
        let f = |_z: f64, y: &[f64; 3]| [y[1], -y[0], 1e-8 * y[0] * y[0]];
        let opts = Options::with_floors(1e-10, [1.0, 1.0, 1e-8]);
        let end = endpoint(f, 0.0, 20.0, [1.0, 0.0, 0.0], &opts).unwrap();
        // ∫cos² over [0,20] = 10 + sin(40)/4.
        let expect = 1e-8 * (10.0 + (40.0f64).sin() / 4.0);
        assert!((end[2] - expect).abs() < 1e-6 * expect, "got {} want {}", end[2], expect);
    }

    #[test]
    fn deterministic_repeat() {
        let f = |z: f64, y: &[f64; 2]| [y[1], -z * y[0]];
        let a = integrate(f, 0.0, 10.0, [1.0, 0.5], &Options::with_tol(1e-10)).unwrap();
        let b = integrate(f, 0.0, 10.0, [1.0, 0.5], &Options::with_tol(1e-10)).unwrap();
        assert_eq!(a.z, b.z);
        assert_eq!(a.y, b.y);
    }

    #[test]
    fn max_step_respected() {
        let f = |_z: f64, y: &[f64; 1]| [-0.01 * y[0]];
        let opts = Options { tol: 1e-8, floors: [1.0], max_step: Some(0.5), state_cap: None };
        let sol = integrate(f, 0.0, 10.0, [1.0], &opts).unwrap();
        for w in sol.z.windows(2) {
            assert!(w[1] - w[0] <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn step_failure_on_blowup() {
        // Finite-time blowup forces the step below the floor.
        let f = |_z: f64, y: &[f64; 1]| [y[0] * y[0]];
        let r = endpoint(f, 0.0, 2.0, [1.0], &Options::with_tol(1e-10));
        assert!(matches!(r, Err(Error::StepFailure { .. })));
    }
}
