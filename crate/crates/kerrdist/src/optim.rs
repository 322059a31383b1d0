//! Small internal numerics: dense linear solves and a Nelder–Mead simplex.

use num_complex::Complex64;

/// Solve A·x = b in place for a small dense real system by Gaussian
/// elimination with partial pivoting. Returns None if the pivot underflows.
pub fn solve_real(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Complex variant of [`solve_real`], pivoting on modulus.
pub fn solve_complex(a: &mut [Vec<Complex64>], b: &mut [Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm_sqr().total_cmp(&a[j][col].norm_sqr()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != Complex64::ZERO {
                for k in col..n {
                    let t = f * a[col][k];
                    a[row][k] -= t;
                }
                let t = f * b[col];
                b[row] -= t;
            }
        }
    }
    let mut x = vec![Complex64::ZERO; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

pub struct NelderMeadOptions {
    pub initial_step: f64,
    pub max_evals: usize,
    /// Stop once the simplex diameter falls below this (same units as x).
    pub x_tol: f64,
}

/// Minimize `f` from `x0` with a standard Nelder–Mead simplex
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Returns (argmin, min).
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut evals = n + 1;

    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diam = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diam < opts.x_tol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|i| 2.0 * centroid[i] - worst.0[i]).collect();
        let f_r = f(&reflect);
        evals += 1;

        if f_r < simplex[0].1 {
            let expand: Vec<f64> = (0..n).map(|i| centroid[i] + 2.0 * (reflect[i] - centroid[i])).collect();
            let f_e = f(&expand);
            evals += 1;
            simplex[n] = if f_e < f_r { (expand, f_e) } else { (reflect, f_r) };
        } else if f_r < simplex[n - 1].1 {
            simplex[n] = (reflect, f_r);
        } else {
            let contract: Vec<f64> = if f_r < worst.1 {
                (0..n).map(|i| centroid[i] + 0.5 * (reflect[i] - centroid[i])).collect()
            } else {
                (0..n).map(|i| centroid[i] + 0.5 * (worst.0[i] - centroid[i])).collect()
            };
            let f_c = f(&contract);
            evals += 1;
            if f_c < worst.1.min(f_r) {
                simplex[n] = (contract, f_c);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for i in 0..n {
                        entry.0[i] = best[i] + 0.5 * (entry.0[i] - best[i]);
                    }
                    entry.1 = f(&entry.0);
                    evals += 1;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_solve_roundtrip() {
        let mut a = vec![vec![2.0, 1.0, -1.0], vec![-3.0, -1.0, 2.0], vec![-2.0, 1.0, 2.0]];
        let mut b = vec![8.0, -11.0, -3.0];
        let x = solve_real(&mut a, &mut b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
        assert!((x[2] - -1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_solve_roundtrip() {
        let i = Complex64::I;
        let mut a = vec![
            vec![Complex64::new(1.0, 0.0), i],
            vec![-i, Complex64::new(2.0, 0.0)],
        ];
        let x_true = [Complex64::new(1.0, -2.0), Complex64::new(0.5, 3.0)];
        let mut b = vec![
            a[0][0] * x_true[0] + a[0][1] * x_true[1],
            a[1][0] * x_true[0] + a[1][1] * x_true[1],
        ];
        let x = solve_complex(&mut a, &mut b).unwrap();
        assert!((x[0] - x_true[0]).norm() < 1e-12);
        assert!((x[1] - x_true[1]).norm() < 1e-12);
    }

    #[test]
    fn singular_detected() {
        let mut a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        let mut b = vec![1.0, 2.0];
        assert!(solve_real(&mut a, &mut b).is_none());
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions { initial_step: 0.5, max_evals: 4000, x_tol: 1e-10 };
        let (x, _fx) = nelder_mead(f, &[-1.2, 1.0], &opts);
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] - 1.0).abs() < 1e-4);
    }
}
