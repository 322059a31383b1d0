//! Thin command-line front end over the library: distance queries, sweep and
//! table builds, constellation design/refinement, Monte Carlo evaluation and
//! decoder tables, all emitting plot-ready CSV/JSON files.
//!
//! Exit codes: 0 success, 1 usage error, 2 compute failure.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use kerrdist::approx::{self, ApproxTable};
use kerrdist::constellation::{
    design_max_min, distance_matrix, greedy_refine, polar_grid, random_constellation,
    Constellation, DistanceSource, RefineConfig,
};
use kerrdist::distance::{self, DistanceOptions, Method};
use kerrdist::stochastic::{self, EffortSource, GridSpec};
use kerrdist::FiberParams;

#[derive(Parser)]
#[command(name = "kerrdist", version, about = "Adversarial distances and constellation design for the nondispersive Kerr fiber channel", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FiberArgs {
    /// Fiber length L (km).
    #[arg(long = "L", default_value_t = 2000.0)]
    length_km: f64,
    /// Nonlinearity coefficient γ (1/(W·km)).
    #[arg(long, default_value_t = 1.27)]
    gamma: f64,
    /// Worker threads for parallel stages (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Shooting-solver residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl FiberArgs {
    fn fiber(&self) -> anyhow::Result<FiberParams> {
        Ok(FiberParams::new(self.length_km, self.gamma)?)
    }

    fn options(&self) -> DistanceOptions {
        let mut opts = DistanceOptions::default();
        opts.solver.newton_tol = self.tol;
        opts
    }

    fn init_threads(&self) {
        if self.threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(self.threads).build_global();
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Adversarial distance between two points.
    Distance {
        #[command(flatten)]
        fiber: FiberArgs,
        /// First point as re,im.
        #[arg(long, value_parser = parse_point)]
        x1: Complex64,
        /// Second point as re,im.
        #[arg(long, value_parser = parse_point)]
        x2: Complex64,
        /// exact | decomp | approx | bounds
        #[arg(long, default_value = "exact")]
        method: String,
        /// Approximation table CSV (required for --method approx).
        #[arg(long)]
        table: Option<PathBuf>,
        /// Emit a JSON object instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Distance-from-origin sweep: solver vs closed form, CSV per radius.
    Fig2 {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long, default_value_t = 0.05)]
        xmax: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Antipodal vs on-off-keying sweep with witness trajectories.
    AntipodalSweep {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long, default_value_t = 0.1)]
        xmax: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        /// Directory for the three witness-trajectory CSVs.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Build the deviation table backing the fast approximation.
    BuildTable {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long, default_value_t = 26)]
        radii: usize,
        #[arg(long, default_value_t = 0.05)]
        rmax: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Max-min-distance constellation design on a polar grid.
    Design {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long)]
        size: usize,
        /// Grid as n_radii,n_phases,r_max (paper scale: 20,40,0.05).
        #[arg(long, default_value = "10,16,0.05")]
        grid: String,
        /// exact | approx
        #[arg(long, default_value = "exact")]
        source: String,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Greedy refinement of random constellations under the approximate distance.
    Refine {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long)]
        size: usize,
        /// Random restarts.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Peak power (W); defaults to 0.05 squared.
        #[arg(long, default_value_t = 0.0025)]
        peak: f64,
        /// Approximation table CSV.
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo SER/MI evaluation over a sigma^2 sweep.
    Eval {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long)]
        constellation: PathBuf,
        /// Sweep as lo:hi:n (geometric spacing, inclusive).
        #[arg(long, default_value = "1e-10:1e-8:6")]
        sigma2: String,
        #[arg(long, default_value_t = 20000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Histogram bins per axis.
        #[arg(long, default_value_t = 200)]
        bins: usize,
        /// Minimum-effort decoder source: approx | exact | none.
        #[arg(long, default_value = "approx")]
        md_source: String,
        /// Minimum-effort decoder grid cells per axis.
        #[arg(long, default_value_t = 96)]
        md_grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Minimum-effort decoder look-up table for a constellation.
    DecoderTable {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long)]
        constellation: PathBuf,
        /// Grid as re_min,re_max,im_min,im_max,n; default covers the outputs.
        #[arg(long)]
        grid: Option<String>,
        /// exact | approx
        #[arg(long, default_value = "approx")]
        source: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im — got '{s}'"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part '{re}': {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part '{im}': {e}"))?;
    Ok(Complex64::new(re, im))
}

fn parse_sweep(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("sweep must be lo:hi:n, got '{s}'");
    }
    let lo: f64 = parts[0].parse().context("bad sweep start")?;
    let hi: f64 = parts[1].parse().context("bad sweep end")?;
    let n: usize = parts[2].parse().context("bad sweep count")?;
    if !(lo > 0.0 && hi >= lo && n >= 1) {
        bail!("sweep needs 0 < lo <= hi and n >= 1");
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    Ok((0..n).map(|i| lo * ratio.powi(i as i32)).collect())
}

fn parse_grid3(s: &str) -> anyhow::Result<(usize, usize, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        bail!("grid must be n_radii,n_phases,r_max, got '{s}'");
    }
    Ok((
        parts[0].trim().parse().context("bad n_radii")?,
        parts[1].trim().parse().context("bad n_phases")?,
        parts[2].trim().parse().context("bad r_max")?,
    ))
}

fn main() -> ExitCode {
    // Usage errors (including clap parse failures) exit 1, compute errors 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Distance { fiber, x1, x2, method, table, json } => {
            fiber.init_threads();
            let fp = fiber.fiber()?;
            let opts = fiber.options();
            let (value, method_name, lower, upper) = match method.as_str() {
                "exact" => {
                    let r = distance::exact_distance(x1, x2, &fp, &opts)?;
                    (r.value, method_label(r.method), r.lower_bound, r.upper_bound)
                }
                "decomp" => {
                    if x1 == x2 {
                        (0.0, "closed_form", 0.0, 0.0)
                    } else {
                        let r = distance::decompose_distance(x1, x2, &fp, &opts)?;
                        (r.value, method_label(r.method), r.lower_bound, r.upper_bound)
                    }
                }
                "approx" => {
                    let path = table.context("--method approx needs --table")?;
                    let t = ApproxTable::load_csv(&path, &fp)?;
                    let v = t.distance(x1, x2)?;
                    let lower = distance::radial_distance(x1, x2, &fp);
                    let upper = distance::upper_bound(x1, x2, &fp).unwrap_or(f64::NAN);
                    (v, "approximation", lower, upper)
                }
                "bounds" => {
                    let lower = distance::radial_distance(x1, x2, &fp);
                    let upper = distance::upper_bound(x1, x2, &fp)?;
                    (f64::NAN, "bounds", lower, upper)
                }
                other => bail!("unknown method '{other}' (use exact|decomp|approx|bounds)"),
            };
            if json {
                println!(
                    "{{\"value\":{value:.12e},\"method\":\"{method_name}\",\"lower_bound\":{lower:.12e},\"upper_bound\":{upper:.12e}}}"
                );
            } else {
                println!("value       {value:.9e}");
                println!("method      {method_name}");
                println!("lower_bound {lower:.9e}");
                println!("upper_bound {upper:.9e}");
            }
        }

        Command::Fig2 { fiber, xmax, steps, out } => {
            fiber.init_threads();
            let fp = fiber.fiber()?;
            let opts = fiber.options();
            let mut rows = Vec::new();
            let mut failures = 0usize;
            for k in 1..=steps {
                let x = xmax * k as f64 / steps as f64;
                let closed = distance::distance_from_origin(Complex64::new(x, 0.0), &fp);
                let solved =
                    distance::exact_distance(Complex64::new(x, 0.0), Complex64::ZERO, &fp, &opts);
                let (value, err) = match solved {
                    Ok(r) => {
                        let e = (r.value - closed).abs() / closed;
                        (r.value, e)
                    }
                    Err(e) => {
                        eprintln!("row x={x}: {e}");
                        failures += 1;
                        (f64::NAN, f64::NAN)
                    }
                };
                println!("x = {x:.4}  solver {value:.6e}  closed {closed:.6e}");
                rows.push((x, value, closed, err));
            }
            let mut file = std::io::BufWriter::new(std::fs::File::create(&out)?);
            writeln!(file, "x,exact_solver,closed_form,rel_err")?;
            for (x, v, c, e) in rows {
                writeln!(file, "{x:.9e},{v:.9e},{c:.9e},{e:.9e}")?;
            }
            if failures > 0 {
                bail!("{failures} rows failed to converge");
            }
        }

        Command::AntipodalSweep { fiber, xmax, steps, out, witness_dir } => {
            fiber.init_threads();
            let fp = fiber.fiber()?;
            let opts = fiber.options();
            let mut rows = Vec::new();
            let mut failures = 0usize;
            for k in 1..=steps {
                let x = xmax * k as f64 / steps as f64;
                let x1 = Complex64::new(x, 0.0);
                let d_anti = match distance::exact_distance(x1, -x1, &fp, &opts) {
                    Ok(r) => r.value,
                    Err(e) => {
                        eprintln!("row x={x}: {e}");
                        failures += 1;
                        f64::NAN
                    }
                };
                let d_ook = distance::distance_from_origin(x1, &fp);
                let ub = distance::upper_bound(x1, -x1, &fp)?;
                println!("x = {x:.4}  antipodal {d_anti:.6e}  ook {d_ook:.6e}  bound {ub:.6e}");
                rows.push((x, d_anti, d_ook, ub));
            }
            let mut file = std::io::BufWriter::new(std::fs::File::create(&out)?);
            writeln!(file, "x,d_antipodal,d_ook,upper_bound")?;
            for (x, a, o, u) in rows {
                writeln!(file, "{x:.9e},{a:.9e},{o:.9e},{u:.9e}")?;
            }

            if let Some(dir) = witness_dir {
                std::fs::create_dir_all(&dir)?;
                for (tag, frac) in [("small", 0.2), ("medium", 0.5), ("large", 1.0)] {
                    let x1 = Complex64::new(xmax * frac, 0.0);
                    let res = distance::exact_distance(x1, -x1, &fp, &opts)?;
                    let Some(w) = res.witness else { continue };
                    let path = dir.join(format!("trajectory_{tag}.csv"));
                    let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
                    writeln!(file, "z,a1,b1,a2,b2")?;
                    for (i, &z) in w.traj1.z_grid.iter().enumerate() {
                        let q1 = w.traj1.states[i];
                        let q2 = w.traj2.states[i];
                        writeln!(
                            file,
                            "{z:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
                            q1.re, q1.im, q2.re, q2.im
                        )?;
                    }
                    println!("witness {tag}: effort {:.6e} -> {}", res.value, path.display());
                }
            }
            if failures > 0 {
                bail!("{failures} rows failed to converge");
            }
        }

        Command::BuildTable { fiber, radii, rmax, out } => {
            fiber.init_threads();
            let fp = fiber.fiber()?;
            let opts = fiber.options();
            if radii < 2 {
                bail!("need at least 2 radii");
            }
            println!("building {radii}x{radii} deviation table up to r = {rmax} ...");
            let grid = approx::uniform_radii(radii, rmax);
            let table = approx::build_table(&fp, &grid, &opts)?;
            table.save_csv(&out)?;
            println!("table written to {}", out.display());
        }

        Command::Design { fiber, size, grid, source, table, out } => {
            fiber.init_threads();
            let fp = fiber.fiber()?;
            let opts = fiber.options();
            let (n_radii, n_phases, r_max) = parse_grid3(&grid)?;
            let pg = polar_grid(n_radii, r_max, n_phases)?;
            println!("grid: {} candidate points", n_radii * n_phases);
            let matrix = match source.as_str() {
                "exact" => distance_matrix(&pg, &fp, &DistanceSource::Exact(&opts))?,
                "approx" => {
                    let path = table.context("--source approx needs --table")?;
                    let t = ApproxTable::load_csv(&path, &fp)?;
                    distance_matrix(&pg, &fp, &DistanceSource::Approximation(&t))?
                }
                other => bail!("unknown source '{other}'"),
            };
            println!("matrix filled ({} unique solves)", matrix.solves);
            let peak = r_max * r_max;
            let (constellation, threshold) = design_max_min(&matrix, size, peak, fp)?;
            println!("designed {size} points with min distance >= {threshold:.9e}");
            constellation.save_json(&out)?;
            println!("constellation written to {}", out.display());
        }

        Command::Refine { fiber, size, trials, seed, peak, table, out } => {
            fiber.init_threads();
            let fp = fiber.fiber()?;
            let t = ApproxTable::load_csv(&table, &fp)?;
            let mut best: Option<(f64, Constellation)> = None;
            let cfg = RefineConfig::default();
            for trial in 0..trials {
                use rand::SeedableRng;
                let mut rng =
                    rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ ((trial as u64) << 20));
                let start = random_constellation(size, peak, fp, &mut rng);
                let mut dist = |a, b| t.distance(a, b);
                let refined = greedy_refine(&start, &mut dist, &cfg)?;
                let d = refined.min_distance(&mut dist)?;
                if best.as_ref().map_or(true, |(bd, _)| d > *bd) {
                    best = Some((d, refined));
                }
                if (trial + 1) % 10 == 0 || trial + 1 == trials {
                    println!(
                        "trial {}/{}: best min distance {:.9e}",
                        trial + 1,
                        trials,
                        best.as_ref().unwrap().0
                    );
                }
            }
            let (d, constellation) = best.context("no trials run")?;
            println!("best of {trials} restarts: min distance {d:.9e}");
            constellation.save_json(&out)?;
            println!("constellation written to {}", out.display());
        }

        Command::Eval { fiber, constellation, sigma2, trials, seed, bins, md_source, md_grid, out } => {
            fiber.init_threads();
            let c = Constellation::load_json(&constellation)?;
            let fp = c.fiber;
            let sweep = parse_sweep(&sigma2)?;
            let md_table = match md_source.as_str() {
                "none" => None,
                "approx" => {
                    let spec = GridSpec::covering(&c, 0.5, md_grid);
                    println!("building {md_grid}x{md_grid} minimum-effort decoder (approx) ...");
                    Some(stochastic::decoder_table(&c, &fp, &spec, &EffortSource::Approximate)?)
                }
                "exact" => {
                    let spec = GridSpec::covering(&c, 0.5, md_grid);
                    println!("building {md_grid}x{md_grid} minimum-effort decoder (exact) ...");
                    let cfg = fiber.options().solver;
                    Some(stochastic::decoder_table(&c, &fp, &spec, &EffortSource::Exact(&cfg))?)
                }
                other => bail!("unknown md source '{other}'"),
            };
            let mut report = stochastic::EvalReport { rows: Vec::new(), trials, rng_seed: seed };
            for (i, &s2) in sweep.iter().enumerate() {
                let partial = stochastic::evaluate(
                    &c,
                    &fp,
                    &[s2],
                    trials,
                    bins,
                    seed.wrapping_add(1000 * i as u64),
                    md_table.as_ref(),
                )?;
                let row = partial.rows.into_iter().next().unwrap();
                println!(
                    "sigma2 {:.3e}: PSNR {:.2} dB, SER(map) {:.4e}, SER(md) {:.4e}, MI {:.4}",
                    row.sigma2, row.psnr_db, row.ser_map, row.ser_md, row.mi_bits
                );
                report.rows.push(row);
            }
            report.save_csv(&out)?;
            println!("report written to {}", out.display());
        }

        Command::DecoderTable { fiber, constellation, grid, source, out } => {
            fiber.init_threads();
            let c = Constellation::load_json(&constellation)?;
            let fp = c.fiber;
            let spec = match grid {
                Some(g) => {
                    let parts: Vec<&str> = g.split(',').collect();
                    if parts.len() != 5 {
                        bail!("grid must be re_min,re_max,im_min,im_max,n");
                    }
                    GridSpec {
                        re_min: parts[0].trim().parse().context("bad re_min")?,
                        re_max: parts[1].trim().parse().context("bad re_max")?,
                        im_min: parts[2].trim().parse().context("bad im_min")?,
                        im_max: parts[3].trim().parse().context("bad im_max")?,
                        n: parts[4].trim().parse().context("bad n")?,
                    }
                }
                None => GridSpec::covering(&c, 0.5, 96),
            };
            let table = match source.as_str() {
                "approx" => stochastic::decoder_table(&c, &fp, &spec, &EffortSource::Approximate)?,
                "exact" => {
                    let cfg = fiber.options().solver;
                    stochastic::decoder_table(&c, &fp, &spec, &EffortSource::Exact(&cfg))?
                }
                other => bail!("unknown source '{other}'"),
            };
            table.save_csv(&out)?;
            println!("decoder table ({}x{}) written to {}", spec.n, spec.n, out.display());
        }
    }
    Ok(())
}

fn method_label(m: Method) -> &'static str {
    match m {
        Method::ClosedForm => "closed_form",
        Method::JointBvp => "joint_bvp",
        Method::Decomposition => "decomposition",
        Method::Approximation => "approximation",
    }
}
