//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 a computation that
//! did not resolve under refinement.

use crate::acceptance::{run_all, AcceptanceOptions};
use crate::asymptotics::{fh_remainder_sweep, poisson_bound_sweep, FhGrid, Symbol};
use crate::config::{parse_f64_list, ConfigFile};
use crate::cutoffs::Cutoffs;
use crate::error::{invalid, Error, Result};
use crate::io::{coefficients_table, fmt_f64, read_coefficients, Table};
use crate::kernel::{decay_profile, sup_scan, Localization, ScanGrid};
use crate::sobolev::{norm_h, norm_mixed, norm_w, MixedNormParams};
use crate::spectrum::{eigen_data, enumerate_annulus, Region, SpectralIndex};
use crate::strichartz::{duhamel, eigenfunction_growth_fit, strichartz_quotient, Family, Interval};
use crate::zonal::zonal_eval;
use crate::DiskPoint;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "crsphere", version, about = "Spectral experiments for the sublaplacian on the CR sphere S^{2n+1}")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Sphere S^{2n+1}
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Frequency scale(s), comma separated
    #[arg(long, global = true)]
    pub h: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// Cone aperture
    #[arg(long = "M", global = true)]
    pub m: Option<f64>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// full | cone | edge | diag | plus | minus
    #[arg(long, global = true)]
    pub localization: Option<String>,
    #[arg(long = "grid-theta", global = true)]
    pub grid_theta: Option<usize>,
    #[arg(long = "grid-omega", global = true)]
    pub grid_omega: Option<usize>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key = value configuration file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub quick: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues and multiplicities, on a square lattice or a spectral annulus
    Spectrum {
        #[arg(long, default_value_t = 10)]
        ell_max: u32,
    },
    /// Samples of one zonal harmonic
    Zonal {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        ellp: u32,
    },
    /// W, H and mixed norms of a coefficient file (ell,ellp,re,im)
    Norms {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
    },
    /// Localized propagator kernels
    Kernel {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Order-zero Jacobi-to-Bessel remainder sweep
    FhCheck {
        #[arg(long, default_value_t = 0)]
        alpha: u32,
        #[arg(long, default_value_t = 0)]
        beta: u32,
        #[arg(long, default_value = "20,40,80,160")]
        ells: String,
        #[arg(long, default_value_t = 1.2)]
        theta_max: f64,
    },
    /// Oscillatory lattice sums against the Poisson bound
    PoissonDemo {
        #[arg(long, default_value = "0.1,0.25,0.5")]
        mus: String,
        /// epsilon = dist(mu, Z) / divisor
        #[arg(long, default_value = "1,2,10,100")]
        divisors: String,
        #[arg(long = "L", default_value_t = 3)]
        l: u32,
        /// one | s0
        #[arg(long, default_value = "one")]
        symbol: String,
    },
    /// Space-time experiments
    Strichartz {
        #[command(subcommand)]
        action: StrichartzAction,
    },
    /// Run the acceptance suite and emit a JSON scorecard
    Acceptance,
}

#[derive(Subcommand, Debug)]
pub enum KernelAction {
    /// Sample |K_h(t)| on the scan grid
    Scan,
    /// sup |K_h(t)| over log-spaced t in [h^2, c h^s]
    Decay {
        #[arg(long, default_value_t = 24)]
        times: usize,
        /// Window constant c
        #[arg(long)]
        c: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum StrichartzAction {
    /// L^p L^q norm over the mixed Sobolev norm
    Quotient {
        #[arg(long)]
        input: PathBuf,
    },
    /// Slope of log ||Z||_q/||Z||_2 against log lambda
    GrowthFit {
        /// diag | holo
        #[arg(long, default_value = "diag")]
        family: String,
        #[arg(long, default_value = "8,16,32,64")]
        ells: String,
    },
    /// Duhamel integral of a time-constant forcing
    Duhamel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

/// Flags merged over the optional configuration file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: Option<u32>,
    pub h_list: Vec<f64>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub c: Option<f64>,
    pub m: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub localization: Localization,
    pub grid_theta: Option<usize>,
    pub grid_omega: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub quick: bool,
    pub cutoffs: Cutoffs,
}

impl RunConfig {
    pub fn resolve(g: &GlobalArgs) -> Result<Self> {
        let file = match &g.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let h_list = match &g.h {
            Some(s) => parse_f64_list(s)?,
            None => file.list_f64("h")?.unwrap_or_default(),
        };
        if let Some(bad) = h_list.iter().find(|h| !(**h > 0.0 && **h <= 1.0)) {
            return Err(invalid(format!("h={bad} outside (0, 1]")));
        }
        let localization = match &g.localization {
            Some(s) => s.parse()?,
            None => file.get("localization").map(str::parse).transpose()?.unwrap_or(Localization::Cone),
        };
        let n = g.n.or(file.parsed("n")?);
        if n == Some(0) {
            return Err(invalid("n must be at least 1"));
        }
        Ok(Self {
            n,
            h_list,
            t: g.t.or(file.parsed("t")?),
            s: g.s.or(file.parsed("s")?),
            c: file.parsed("c")?,
            m: g.m.or(file.parsed("M")?),
            p: g.p.or(file.parsed("p")?),
            q: g.q.or(file.parsed("q")?),
            localization,
            grid_theta: g.grid_theta.or(file.parsed("grid.theta")?),
            grid_omega: g.grid_omega.or(file.parsed("grid.omega")?),
            out: g.out.clone().or(file.get("out").map(PathBuf::from)),
            seed: g.seed.or(file.parsed("seed")?).unwrap_or(0),
            quick: g.quick,
            cutoffs: Cutoffs::new(file.cutoff_params()?)?,
        })
    }

    fn n(&self) -> Result<u32> {
        self.n.ok_or_else(|| invalid("missing required --n"))
    }

    fn single_h(&self) -> Result<f64> {
        match self.h_list.as_slice() {
            [h] => Ok(*h),
            [] => Err(invalid("missing required --h")),
            _ => Err(invalid("this command takes a single --h")),
        }
    }

    fn scan_grid(&self) -> ScanGrid {
        let d = ScanGrid::default();
        ScanGrid::with_size(self.grid_theta.unwrap_or(d.n_theta), self.grid_omega.unwrap_or(d.n_omega))
    }

    fn cone_m(&self) -> f64 {
        self.m.unwrap_or(self.cutoffs.params.cone_m)
    }
}

/// Where primary output goes: the `--out` file or the given stdout.
fn emit(cfg: &RunConfig, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => write_file(p, text),
        None => {
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serialises") + "\n"
}

fn parse_u32_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad integer '{x}' in list '{s}'"))))
        .collect()
}

fn load_coefficients(path: &Path, n: u32) -> Result<crate::ZonalSpectralData> {
    let f = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_coefficients(n, f)
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let cfg = RunConfig::resolve(&cli.global)?;
    match cli.command {
        Command::Spectrum { ell_max } => {
            let n = cfg.n()?;
            let blocks: Vec<SpectralIndex> = match cfg.h_list.as_slice() {
                [] => (0..=ell_max).flat_map(|l| (0..=ell_max).map(move |lp| SpectralIndex::new(l, lp))).collect(),
                [h] => {
                    let p = cfg.cutoffs.params;
                    enumerate_annulus(p.phi_a, p.phi_b, *h, n, Region::All)?
                }
                _ => return Err(invalid("spectrum takes a single --h")),
            };
            let mut t = Table::new(&["ell", "ellp", "lambda", "mu", "dim", "N", "beta"]);
            for b in blocks {
                let e = eigen_data(b, n);
                t.push(
                    [b.ell as u128, b.ellp as u128, e.lambda as u128, e.mu as u128, e.dim, e.big_n as u128, e.beta as u128]
                        .iter()
                        .map(u128::to_string)
                        .collect(),
                );
            }
            emit(&cfg, stdout, &t.to_csv_string())
        }
        Command::Zonal { ell, ellp } => {
            let n = cfg.n()?;
            let grid = cfg.scan_grid();
            grid.validate()?;
            let idx = SpectralIndex::new(ell, ellp);
            let mut t = Table::new(&["omega", "theta", "re", "im", "abs"]);
            for &theta in &grid.thetas() {
                for &omega in &grid.omegas() {
                    let z = zonal_eval(idx, n, &DiskPoint::at(omega, theta));
                    t.push_f64(&[omega, theta, z.re, z.im, z.norm()]);
                }
            }
            emit(&cfg, stdout, &t.to_csv_string())
        }
        Command::Norms { input, r } => {
            let n = cfg.n()?;
            let u = load_coefficients(&input, n)?;
            let s = cfg.s.unwrap_or(1.0);
            let params = MixedNormParams::new(r, s, cfg.cone_m())?;
            let v = json!({
                "n": n, "blocks": u.len(), "r": r, "s": s, "M": params.m,
                "l2": u.l2_norm(), "w_r": norm_w(&u, r), "h_s": norm_h(&u, s), "mixed": norm_mixed(&u, params),
            });
            emit(&cfg, stdout, &pretty(&v))
        }
        Command::Kernel { action } => {
            let (n, h) = (cfg.n()?, cfg.single_h()?);
            match action {
                KernelAction::Scan => {
                    let t = cfg.t.unwrap_or(h * h);
                    let scan = sup_scan(t, h, n, cfg.localization, cfg.scan_grid(), &cfg.cutoffs)?;
                    let mut table = Table::new(&["t", "omega", "theta", "re", "im", "abs"]);
                    for (p, v) in scan.grid() {
                        table.push_f64(&[t, p.omega_angle, p.theta, v.re, v.im, v.norm()]);
                    }
                    let summary = json!({
                        "params": { "n": n, "h": h, "t": t, "localization": cfg.localization },
                        "sup_abs": scan.sup_abs,
                        "argmax": { "omega": scan.argmax.0, "theta": scan.argmax.1 },
                        "term_count": scan.term_count,
                    });
                    finish_with_summary(&cfg, stdout, &table, &summary)
                }
                KernelAction::Decay { times, c } => {
                    let s = cfg.s.unwrap_or(crate::strichartz::s_threshold(n));
                    let c = c.or(cfg.c).unwrap_or(1.0);
                    let prof = decay_profile(h, n, s, c, cfg.localization, times, cfg.scan_grid(), &cfg.cutoffs)?;
                    let mut table = Table::new(&["t", "sup", "sup_scaled"]);
                    for r in &prof.rows {
                        table.push_f64(&[r.t, r.sup, r.sup_scaled]);
                    }
                    let summary = json!({
                        "params": { "n": n, "h": h, "s": s, "c": c, "localization": cfg.localization, "times": times },
                        "slope": prof.slope,
                        "max_scaled": prof.max_scaled,
                        "argmax": prof.argmax_t,
                        "term_count": prof.term_count,
                    });
                    finish_with_summary(&cfg, stdout, &table, &summary)
                }
            }
        }
        Command::FhCheck { alpha, beta, ells, theta_max } => {
            let ells = parse_u32_list(&ells)?;
            let points = if cfg.quick { 1000 } else { FhGrid::default().points };
            let grid = FhGrid::new(FhGrid::default().theta_min, theta_max, points)?;
            let mut t = Table::new(&["ell", "alpha", "beta", "N", "remainder_sup", "scaled_remainder_sup", "argmax_theta"]);
            for r in fh_remainder_sweep(alpha, beta, grid, &ells)? {
                t.push(vec![
                    r.ell.to_string(),
                    r.alpha.to_string(),
                    r.beta.to_string(),
                    r.big_n.to_string(),
                    fmt_f64(r.remainder_sup),
                    fmt_f64(r.scaled_remainder_sup),
                    fmt_f64(r.argmax_theta),
                ]);
            }
            emit(&cfg, stdout, &t.to_csv_string())
        }
        Command::PoissonDemo { mus, divisors, l, symbol } => {
            let symbol = match symbol.as_str() {
                "one" => Symbol::One,
                "s0" => Symbol::S0,
                other => return Err(invalid(format!("unknown symbol '{other}' (one|s0)"))),
            };
            let res = poisson_bound_sweep(&parse_f64_list(&mus)?, &parse_f64_list(&divisors)?, l, &cfg.cutoffs.phi, symbol)?;
            let mut t = Table::new(&["mu", "delta", "epsilon", "L", "sum_abs", "bound", "ratio"]);
            for r in res {
                t.push(vec![
                    fmt_f64(r.mu),
                    fmt_f64(r.delta),
                    fmt_f64(r.epsilon),
                    r.l.to_string(),
                    fmt_f64(r.sum_abs),
                    fmt_f64(r.bound),
                    fmt_f64(r.ratio),
                ]);
            }
            emit(&cfg, stdout, &t.to_csv_string())
        }
        Command::Strichartz { action } => {
            let n = cfg.n()?;
            match action {
                StrichartzAction::Quotient { input } => {
                    let u = load_coefficients(&input, n)?;
                    let p = cfg.p.unwrap_or(2.0);
                    let s = cfg.s.unwrap_or(crate::strichartz::s_threshold(n));
                    let interval = Interval::new(0.0, cfg.t.unwrap_or(1.0))?;
                    let r = strichartz_quotient(&u, p, s, cfg.cone_m(), interval)?;
                    emit(&cfg, stdout, &pretty(&json!({ "n": n, "interval": interval, "result": r })))
                }
                StrichartzAction::GrowthFit { family, ells } => {
                    let family: Family = family.parse()?;
                    let fit = eigenfunction_growth_fit(family, cfg.q.unwrap_or(6.0), n, &parse_u32_list(&ells)?)?;
                    emit(&cfg, stdout, &pretty(&serde_json::to_value(&fit).expect("fit serialises")))
                }
                StrichartzAction::Duhamel { input, samples } => {
                    let u = load_coefficients(&input, n)?;
                    let t = cfg.t.ok_or_else(|| invalid("missing required --t"))?;
                    let out = duhamel(|_| u.clone(), t, samples)?;
                    emit(&cfg, stdout, &coefficients_table(&out).to_csv_string())
                }
            }
        }
        Command::Acceptance => {
            let opts = AcceptanceOptions { n: cfg.n()?, quick: cfg.quick, seed: cfg.seed };
            let card = run_all(opts)?;
            for c in &card.criteria {
                log::info!("{} {}", c.id, if c.passed { "pass" } else { "FAIL" });
            }
            emit(&cfg, stdout, &card.to_json())
        }
    }
}

/// CSV to `--out` with the JSON summary on stdout, or CSV alone on stdout.
fn finish_with_summary(cfg: &RunConfig, stdout: &mut dyn Write, table: &Table, summary: &serde_json::Value) -> Result<()> {
    match &cfg.out {
        Some(p) => {
            write_file(p, &table.to_csv_string())?;
            stdout.write_all(pretty(summary).as_bytes())?;
            Ok(())
        }
        None => {
            stdout.write_all(table.to_csv_string().as_bytes())?;
            Ok(())
        }
    }
}

/// Caps the global thread pool from `CRSPHERE_THREADS`.
pub fn configure_threads() {
    if let Some(k) = std::env::var("CRSPHERE_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if k > 0 {
            // a second initialisation in the same process is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Unresolved(_) => 2,
                _ => 1,
            }
        }
    }
}
