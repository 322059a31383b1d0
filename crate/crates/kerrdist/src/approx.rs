//! Fast approximation of the adversarial distance.
//!
//! For real radii r₁, r₂ the distance as a function of the relative angle φ is
//! approximated by
//!
//! ```text
//! d(r₁, r₂e^{iφ}) ≈ d_R(r₁, r₂) + A(r₁, r₂)·sin²((φ − φ*(r₁, r₂))/2)
//! ```
//!
//! where φ* = (Lγ/2)(r₁²−r₂²) is the angle at which the radial lower bound is
//! attained and A is the maximum deviation from the radial distance, reached
//! at φ* − π. A is tabulated on a radius grid by solving the exact problem at
//! the worst angle and read back with bilinear interpolation.

use rayon::prelude::*;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::channel::{ComplexPoint, FiberParams};
use crate::distance::{self, DistanceOptions};
use crate::error::{Error, Result};

/// Angle (not reduced mod 2π) at which d(r₁, r₂e^{iφ}) attains the radial
/// lower bound: φ*(r₁, r₂) = (Lγ/2)(r₁²−r₂²).
pub fn phi_star(r1: f64, r2: f64, fiber: &FiberParams) -> f64 {
    0.5 * fiber.length_km * fiber.gamma * (r1 * r1 - r2 * r2)
}

/// Symmetric table of maximum deviations A(r₁, r₂) on a radius grid.
#[derive(Debug, Clone)]
pub struct ApproxTable {
    /// Strictly increasing radii from 0 to r_max (√W).
    pub radii: Vec<f64>,
    /// Row-major square matrix A[i][j] (W/km), symmetrized on build.
    pub values: Vec<Vec<f64>>,
    pub fiber: FiberParams,
}

/// Build the deviation table: each cell solves the exact problem at the
/// worst angle φ*−π and subtracts the radial distance. Cells run in parallel;
/// the result is symmetrized as (A[i][j]+A[j][i])/2 (the raw values already
/// agree to solver accuracy).
pub fn build_table(fiber: &FiberParams, radii: &[f64], opts: &DistanceOptions) -> Result<ApproxTable> {
    if radii.len() < 2 || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("table radii must be strictly increasing".into()));
    }
    if radii[0] < 0.0 {
        return Err(Error::InvalidInput("table radii must be nonnegative".into()));
    }
    let n = radii.len();

    // Unique upper-triangle cells with nonzero radii; the r = 0 row is exact.
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            if radii[i] > 0.0 {
                cells.push((i, j));
            }
        }
    }

    let computed: Vec<((usize, usize), Result<f64>)> = cells
        .par_iter()
        .map(|&(i, j)| {
            let (r1, r2) = (radii[i], radii[j]);
            let x1 = ComplexPoint::new(r1, 0.0);
            let worst = phi_star(r1, r2, fiber) - std::f64::consts::PI;
            let x2 = ComplexPoint::from_polar(r2, worst);
            let a = distance::exact_distance(x1, x2, fiber, opts)
                .map(|res| (res.value - distance::radial_distance(x1, x2, fiber)).max(0.0))
                .map_err(|e| {
                    Error::InvalidInput(format!("table cell (r1={r1}, r2={r2}) failed: {e}"))
                });
            ((i, j), a)
        })
        .collect();

    let mut values = vec![vec![0.0; n]; n];
    for ((i, j), a) in computed {
        let a = a?;
        values[i][j] = a;
        values[j][i] = a;
    }
    // The r = 0 row stays zero: the distance from the origin is phase-free.
    Ok(ApproxTable { radii: radii.to_vec(), values, fiber: *fiber })
}

/// Uniform radius grid 0..r_max with `n` points (the standard table uses
/// 26 radii on [0, 0.05]).
pub fn uniform_radii(n: usize, r_max: f64) -> Vec<f64> {
    (0..n).map(|i| r_max * i as f64 / (n - 1) as f64).collect()
}

impl ApproxTable {
    pub fn r_max(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    /// Bilinearly interpolated deviation A(r₁, r₂).
    pub fn deviation(&self, r1: f64, r2: f64) -> Result<f64> {
        let (i, ti) = self.locate(r1)?;
        let (j, tj) = self.locate(r2)?;
        let v = &self.values;
        Ok(v[i][j] * (1.0 - ti) * (1.0 - tj)
            + v[i + 1][j] * ti * (1.0 - tj)
            + v[i][j + 1] * (1.0 - ti) * tj
            + v[i + 1][j + 1] * ti * tj)
    }

    fn locate(&self, r: f64) -> Result<(usize, f64)> {
        let r_max = self.r_max();
        if !(0.0..=r_max * (1.0 + 1e-12)).contains(&r) {
            return Err(Error::OutOfRange { radius: r, r_max });
        }
        let r = r.min(r_max);
        let mut i = match self.radii.binary_search_by(|v| v.total_cmp(&r)) {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        };
        if i >= self.radii.len() - 1 {
            i = self.radii.len() - 2;
        }
        let h = self.radii[i + 1] - self.radii[i];
        Ok((i, ((r - self.radii[i]) / h).clamp(0.0, 1.0)))
    }

    /// Approximate distance d(x₁, x₂) from the table:
    /// d_R + A(|x₁|,|x₂|)·sin²((arg x₂ − arg x₁ − φ*)/2).
    pub fn distance(&self, x1: ComplexPoint, x2: ComplexPoint) -> Result<f64> {
        let (r1, r2) = (x1.norm(), x2.norm());
        let a = self.deviation(r1, r2)?;
        let d_r = distance::radial_distance(x1, x2, &self.fiber);
        let phi = x2.arg() - x1.arg() - phi_star(r1, r2, &self.fiber);
        Ok(d_r + a * (0.5 * phi).sin().powi(2))
    }

    /// Write the table as CSV: header `r1,r2,A`, one row per ordered pair,
    /// radii with 9 significant digits.
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "r1,r2,A")?;
        for (i, &r1) in self.radii.iter().enumerate() {
            for (j, &r2) in self.radii.iter().enumerate() {
                writeln!(out, "{:.9e},{:.9e},{:.12e}", r1, r2, self.values[i][j])?;
            }
        }
        Ok(())
    }

    /// Load a table written by [`ApproxTable::save_csv`]; validates squareness,
    /// grid regularity and symmetry.
    pub fn load_csv(path: &Path, fiber: &FiberParams) -> Result<Self> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut lines = file.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty table file".into()))??;
        if header.trim() != "r1,r2,A" {
            return Err(Error::InvalidInput(format!("unexpected table header: {header}")));
        }
        let mut rows: Vec<(f64, f64, f64)> = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let mut next = || -> Result<f64> {
                parts
                    .next()
                    .ok_or_else(|| Error::InvalidInput(format!("short row: {line}")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("bad number in row '{line}': {e}")))
            };
            rows.push((next()?, next()?, next()?));
        }
        let n2 = rows.len();
        let n = (n2 as f64).sqrt().round() as usize;
        if n * n != n2 || n < 2 {
            return Err(Error::InvalidInput(format!("table is not square: {n2} rows")));
        }
        let radii: Vec<f64> = (0..n).map(|i| rows[i * n].0).collect();
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("table radii not strictly increasing".into()));
        }
        let mut values = vec![vec![0.0; n]; n];
        for (k, &(r1, r2, a)) in rows.iter().enumerate() {
            let (i, j) = (k / n, k % n);
            let tol = 1e-9 * radii[n - 1];
            if (r1 - radii[i]).abs() > tol || (r2 - radii[j]).abs() > tol {
                return Err(Error::InvalidInput(format!("irregular grid at row {k}")));
            }
            values[i][j] = a;
        }
        for i in 0..n {
            for j in 0..n {
                if (values[i][j] - values[j][i]).abs()
                    > 1e-9 * values[i][j].abs().max(values[j][i].abs()).max(1e-300)
                {
                    return Err(Error::InvalidInput(format!("asymmetric table at ({i}, {j})")));
                }
                if values[i][j] < 0.0 {
                    return Err(Error::InvalidInput(format!("negative deviation at ({i}, {j})")));
                }
            }
        }
        Ok(ApproxTable { radii, values, fiber: *fiber })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn phi_star_values() {
        let fiber = FiberParams::reference();
        assert_eq!(phi_star(0.02, 0.02, &fiber), 0.0);
        // (Lγ/2)(r1²−r2²) = 1270·8e-4 = 1.016 rad.
        assert!((phi_star(0.03, 0.01, &fiber) - 1.016).abs() < 1e-12);
        let linear = FiberParams::new(2000.0, 0.0).unwrap();
        assert_eq!(phi_star(0.04, 0.01, &linear), 0.0);
    }

    fn small_table(fiber: &FiberParams) -> ApproxTable {
        let radii = uniform_radii(5, 0.04);
        build_table(fiber, &radii, &DistanceOptions::default()).unwrap()
    }

    #[test]
    fn gamma_zero_table_matches_euclidean_oracle() {
        // At γ = 0 the exact distance is |x−ye^{iφ}|²/(4L), so the worst-angle
        // deviation is A = r1·r2/L.
        let fiber = FiberParams::new(2000.0, 0.0).unwrap();
        let table = small_table(&fiber);
        for (i, &r1) in table.radii.iter().enumerate() {
            for (j, &r2) in table.radii.iter().enumerate() {
                let expect = r1 * r2 / fiber.length_km;
                let got = table.values[i][j];
                assert!(
                    (got - expect).abs() <= 1e-4 * expect.max(1e-12),
                    "A[{i}][{j}] = {got}, expected {expect}"
                );
            }
        }
    }

    #[test]
    fn zero_radius_row_is_zero_and_symmetric() {
        let fiber = FiberParams::reference();
        let table = small_table(&fiber);
        let n = table.radii.len();
        for j in 0..n {
            assert_eq!(table.values[0][j], 0.0);
            assert_eq!(table.values[j][0], 0.0);
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(table.values[i][j], table.values[j][i]);
                assert!(table.values[i][j] >= 0.0);
            }
        }
    }

    #[test]
    fn node_exactness_and_angle_structure() {
        let fiber = FiberParams::reference();
        let table = small_table(&fiber);
        let (i, j) = (2, 3);
        let (r1, r2) = (table.radii[i], table.radii[j]);
        // At the radially matched angle the approximation is exactly d_R.
        let x1 = C::new(r1, 0.0);
        let x2 = C::from_polar(r2, phi_star(r1, r2, &fiber));
        let d = table.distance(x1, x2).unwrap();
        assert!((d - distance::radial_distance(x1, x2, &fiber)).abs() < 1e-18);
        // At the worst angle it is d_R + A (node exactness of the bilinear fit).
        let x2w = C::from_polar(r2, phi_star(r1, r2, &fiber) - std::f64::consts::PI);
        let dw = table.distance(x1, x2w).unwrap();
        let expect = distance::radial_distance(x1, x2w, &fiber) + table.values[i][j];
        assert!((dw - expect).abs() <= 1e-15 + 1e-12 * expect);
    }

    #[test]
    fn approx_distance_symmetry_and_lower_bound() {
        let fiber = FiberParams::reference();
        let table = small_table(&fiber);
        let x1 = C::from_polar(0.033, 0.4);
        let x2 = C::from_polar(0.011, -1.9);
        let d12 = table.distance(x1, x2).unwrap();
        let d21 = table.distance(x2, x1).unwrap();
        assert!((d12 - d21).abs() <= 1e-15 + 1e-12 * d12);
        assert!(d12 >= distance::radial_distance(x1, x2, &fiber) - 1e-18);
        // Rotational invariance.
        let rot = C::from_polar(1.0, 2.2);
        let drot = table.distance(x1 * rot, x2 * rot).unwrap();
        assert!((drot - d12).abs() <= 1e-12 * d12.max(1e-18));
    }

    #[test]
    fn out_of_range_rejected() {
        let fiber = FiberParams::reference();
        let table = small_table(&fiber);
        let far = C::new(0.1, 0.0);
        assert!(matches!(table.distance(far, C::new(0.01, 0.0)), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let fiber = FiberParams::reference();
        let table = small_table(&fiber);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.csv");
        table.save_csv(&path).unwrap();
        let loaded = ApproxTable::load_csv(&path, &fiber).unwrap();
        assert_eq!(loaded.radii.len(), table.radii.len());
        for (a, b) in loaded.values.iter().flatten().zip(table.values.iter().flatten()) {
            assert!((a - b).abs() <= 1e-15 + 1e-9 * b.abs());
        }
    }

    #[test]
    fn loader_rejects_asymmetry() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "r1,r2,A\n0,0,0\n0,1e-2,0\n1e-2,0,1e-9\n1e-2,1e-2,2e-9\n").unwrap();
        assert!(ApproxTable::load_csv(&path, &FiberParams::reference()).is_err());
    }

    #[test]
    fn worst_angle_is_near_phi_star_minus_pi() {
        // Sample 8 angles at random radius pairs and check the max deviation
        // occurs within one sample of φ*−π.
        use rand::{Rng, SeedableRng};
        let fiber = FiberParams::reference();
        let opts = DistanceOptions::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..3 {
            let r1: f64 = rng.random_range(0.01..0.04);
            let r2: f64 = rng.random_range(0.01..0.04);
            let pstar = phi_star(r1, r2, &fiber);
            let x1 = C::new(r1, 0.0);
            let mut best = (f64::NEG_INFINITY, 0usize);
            for k in 0..8 {
                let phi = pstar + 2.0 * std::f64::consts::PI * k as f64 / 8.0;
                let x2 = C::from_polar(r2, phi);
                let d = distance::exact_distance(x1, x2, &fiber, &opts).unwrap().value;
                if d > best.0 {
                    best = (d, k);
                }
            }
            // φ*−π is sample k = 4; allow ±1 sample.
            assert!(
                (3..=5).contains(&best.1),
                "worst angle index {} for (r1={r1}, r2={r2})",
                best.1
            );
        }
    }
}
