//! The acceptance suite A1–A12 as a library, producing a deterministic JSON
//! scorecard (no timings, fixed evaluation order).
//!
//! `quick` shrinks lattices, grids and sweeps so the whole suite runs in
//! seconds; thresholds are the same in both modes.

use crate::cutoffs::{lp_partition, Cutoffs};
use crate::error::{invalid, Result};
use crate::geometry::{surface_area, DiskGrid};
use crate::kernel::{decay_over_window, l2_lower_bound, log_times, KernelEvaluator, Localization, ScanGrid, SpectralTable};
use crate::asymptotics::{fh_remainder_sweep, max_ratio, poisson_bound_sweep, FhGrid, Symbol};
use crate::sobolev::{norm_w, quadrature_l2, resolving_grid};
use crate::spectrum::{dimension, eigen_data, hyperbolic_sum, SpectralIndex};
use crate::strichartz::{
    eigenfunction_growth_fit, lq_grid, lq_norm, s_threshold, spacetime_norm, strichartz_quotient, Family, Interval,
};
use crate::zonal::{radial_values, ZonalSpectralData};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::f64::consts::FRAC_PI_2;

pub const CRITERIA: [&str; 12] = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "A12"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceOptions {
    pub n: u32,
    pub quick: bool,
    pub seed: u64,
}

impl Default for AcceptanceOptions {
    fn default() -> Self {
        Self { n: 1, quick: false, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub metrics: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scorecard {
    pub suite: String,
    pub options: AcceptanceOptions,
    pub criteria: Vec<CriterionResult>,
    pub passed: usize,
    pub failed: usize,
}

impl Scorecard {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scorecard serialises") + "\n"
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_all(opts: AcceptanceOptions) -> Result<Scorecard> {
    let criteria = CRITERIA.iter().map(|id| run_criterion(id, opts)).collect::<Result<Vec<_>>>()?;
    let passed = criteria.iter().filter(|c| c.passed).count();
    Ok(Scorecard { suite: "crsphere-acceptance".into(), options: opts, failed: criteria.len() - passed, passed, criteria })
}

pub fn run_criterion(id: &str, opts: AcceptanceOptions) -> Result<CriterionResult> {
    if opts.n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let (title, passed, metrics) = match id {
        "A1" => a1(),
        "A2" => a2(opts)?,
        "A3" => a3(opts),
        "A4" => a4(opts)?,
        "A5" => a5(opts)?,
        "A6" => a6(opts)?,
        "A7" => a7(opts)?,
        "A8" => a8()?,
        "A9" => a9(opts)?,
        "A10" => a10()?,
        "A11" => a11(opts)?,
        "A12" => a12(opts)?,
        other => return Err(invalid(format!("unknown criterion '{other}'"))),
    };
    let metrics = match metrics {
        Value::Object(m) => m,
        _ => unreachable!("metrics are objects"),
    };
    Ok(CriterionResult { id: id.to_string(), title: title.to_string(), passed, metrics })
}

type Outcome = (&'static str, bool, Value);

fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// Pascal-triangle binomials, independent of the product formulas.
fn pascal(rows: usize) -> Vec<Vec<u128>> {
    let mut t: Vec<Vec<u128>> = vec![vec![1]];
    for r in 1..rows {
        let prev = &t[r - 1];
        let mut row = vec![1u128; r + 1];
        for k in 1..r {
            row[k] = prev[k - 1] + prev[k];
        }
        t.push(row);
    }
    t
}

fn a1() -> Outcome {
    let cap = 50u32;
    let c = pascal(2 * cap as usize + 8);
    let binom = |a: u32, b: u32| if b > a { 0 } else { c[a as usize][b as usize] };
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for n in 1..=3u32 {
        for l in 0..=cap {
            for lp in 0..=cap {
                let e = eigen_data(SpectralIndex::new(l, lp), n);
                // dim H^{ℓ,ℓ′} = dim P_{ℓ,ℓ′} − dim P_{ℓ−1,ℓ′−1}
                let dim = binom(l + n, n) * binom(lp + n, n)
                    - if l > 0 && lp > 0 { binom(l + n - 1, n) * binom(lp + n - 1, n) } else { 0 };
                let (a, b, m) = (l as u64, lp as u64, n as u64);
                let lambda = a * b + a * b + m * a + m * b;
                let mu = (a + b) * (a + b) + 2 * m * (a + b);
                checked += 1;
                if (e.lambda, e.mu, e.dim, e.big_n, e.beta) != (lambda, mu, dim, a + b + m, l.abs_diff(lp)) {
                    mismatches += 1;
                }
            }
        }
    }
    ("spectral table exactness", mismatches == 0, json!({ "checked": checked, "mismatches": mismatches }))
}

fn a2(opts: AcceptanceOptions) -> Result<Outcome> {
    let cap: u32 = if opts.quick { 12 } else { 40 };
    let mut worst_norm = 0.0f64;
    let mut worst_orth = 0.0f64;
    for n in 1..=2u32 {
        let area = surface_area(n)?;
        let grid = DiskGrid::new(n, cap as usize + n as usize + 4, 2 * cap as usize + 16)?;
        let blocks: Vec<SpectralIndex> =
            (0..=cap).flat_map(|l| (0..=cap).map(move |lp| SpectralIndex::new(l, lp))).collect();
        // radial[b][i]
        let per_theta: Vec<Vec<f64>> = grid.thetas.par_iter().map(|&t| radial_values(&blocks, n, t)).collect();
        let radial: Vec<Vec<f64>> = (0..blocks.len()).map(|b| per_theta.iter().map(|row| row[b]).collect()).collect();
        let step = grid.omega_step();
        // ω-quadrature of e^{i m ω} for every frequency difference m
        let span = 2 * cap as i64;
        let omega_sum: Vec<Complex64> = (-span..=span)
            .map(|m| grid.omegas.iter().map(|&w| Complex64::from_polar(step, m as f64 * w)).sum())
            .collect();
        let radial_ip = |a: usize, b: usize| -> f64 {
            radial[a].iter().zip(&radial[b]).zip(&grid.theta_weights).map(|((x, y), w)| x * y * w).sum()
        };
        let norms: Vec<f64> = (0..blocks.len())
            .map(|a| (omega_sum[span as usize] * radial_ip(a, a)).re)
            .collect();
        for (a, b) in blocks.iter().enumerate() {
            let exact = dimension(*b, n) as f64 / area;
            worst_norm = worst_norm.max((norms[a] - exact).abs() / exact);
        }
        let orth = (0..blocks.len())
            .into_par_iter()
            .map(|a| {
                let mut w = 0.0f64;
                for b in a + 1..blocks.len() {
                    let ka = blocks[a].ellp as i64 - blocks[a].ell as i64;
                    let kb = blocks[b].ellp as i64 - blocks[b].ell as i64;
                    let ip = omega_sum[(ka - kb + span) as usize] * radial_ip(a, b);
                    w = w.max(ip.norm() / (norms[a] * norms[b]).sqrt());
                }
                w
            })
            .collect::<Vec<f64>>();
        worst_orth = orth.into_iter().fold(worst_orth, f64::max);
    }
    // seeded Parseval spot checks bridge synthesis and the spectral L² norm
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst_parseval = 0.0f64;
    for _ in 0..4 {
        let u = ZonalSpectralData::from_pairs(
            1,
            (0..6).map(|_| {
                (
                    SpectralIndex::new(rng.gen_range(0..=cap), rng.gen_range(0..=cap)),
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            }),
        );
        let q = quadrature_l2(&u, &resolving_grid(&u)?)?;
        worst_parseval = worst_parseval.max((q - norm_w(&u, 0.0)).abs() / q);
    }
    let passed = worst_norm <= 1e-6 && worst_orth <= 1e-8 && worst_parseval <= 1e-6;
    Ok((
        "zonal reproducing identity",
        passed,
        json!({ "cap": cap, "max_rel_norm_error": worst_norm, "max_normalized_inner_product": worst_orth, "max_parseval_error": worst_parseval }),
    ))
}

fn a3(opts: AcceptanceOptions) -> Outcome {
    let (cap, grid) = if opts.quick { (20u32, ScanGrid::with_size(45, 64)) } else { (60, ScanGrid::default()) };
    let mut worst = 0.0f64;
    for n in 1..=2u32 {
        let area = surface_area(n).expect("n >= 1");
        let blocks: Vec<SpectralIndex> =
            (0..=cap).flat_map(|l| (0..=cap).map(move |lp| SpectralIndex::new(l, lp))).collect();
        let scale: Vec<f64> = blocks.iter().map(|b| area / dimension(*b, n) as f64).collect();
        let omegas = grid.omegas();
        let per_theta: Vec<f64> = grid
            .thetas()
            .par_iter()
            .map(|&t| {
                let r = radial_values(&blocks, n, t);
                let mut w = 0.0f64;
                for (i, b) in blocks.iter().enumerate() {
                    let k = b.ellp as f64 - b.ell as f64;
                    for &om in &omegas {
                        w = w.max(Complex64::from_polar(r[i], k * om).norm() * scale[i]);
                    }
                }
                w
            })
            .collect();
        worst = per_theta.into_iter().fold(worst, f64::max);
    }
    ("zonal bound", worst <= 1.0 + 1e-9, json!({ "cap": cap, "grid": [grid.n_theta, grid.n_omega], "max_ratio": worst }))
}

fn a4(opts: AcceptanceOptions) -> Result<Outcome> {
    let bs: Vec<f64> = if opts.quick { vec![1e2, 1e3, 1e4] } else { vec![1e2, 1e3, 1e4, 1e5] };
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for &b in &bs {
        for a in [b / 2.0, 1.0] {
            let (sum, r) = hyperbolic_sum(a, b, 1)?;
            rows.push(json!({ "a": a, "b": b, "sum": sum, "ratio": r }));
            ratios.push(r);
        }
    }
    let s = spread(&ratios);
    Ok(("hyperbolic counting bound", s < 3.0, json!({ "rows": rows, "max_over_min": s })))
}

fn a5(opts: AcceptanceOptions) -> Result<Outcome> {
    let c = Cutoffs::default();
    let hs = [0.2, 0.1, 0.05, 0.025];
    let vals: Vec<f64> = hs.iter().map(|&h| l2_lower_bound(h, opts.n, &c)).collect::<Result<_>>()?;
    let s = spread(&vals);
    Ok(("L2 floor of the localized kernel", s < 4.0, json!({ "h": hs, "values": vals, "max_over_min": s })))
}

struct DecaySettings {
    hs: Vec<f64>,
    grid: ScanGrid,
    times: usize,
}

fn decay_settings(opts: AcceptanceOptions) -> DecaySettings {
    if opts.quick {
        DecaySettings { hs: vec![0.2, 0.1], grid: ScanGrid::with_size(60, 64), times: 8 }
    } else {
        DecaySettings { hs: vec![0.2, 0.1, 0.05], grid: ScanGrid::default(), times: 24 }
    }
}

fn a6(opts: AcceptanceOptions) -> Result<Outcome> {
    let c = Cutoffs::default();
    let cfg = decay_settings(opts);
    let s = s_threshold(opts.n);
    let mut cone_rows = Vec::new();
    let (mut cone_scaled, mut slopes, mut edge_scaled) = (Vec::new(), Vec::new(), Vec::new());
    for &h in &cfg.hs {
        let ev = KernelEvaluator::new(SpectralTable::new(h, opts.n, Localization::Cone, &c)?, cfg.grid)?;
        let p = decay_over_window(&ev, s, h * h, h.powf(s), cfg.times);
        let ev = KernelEvaluator::new(SpectralTable::new(h, opts.n, Localization::Edge, &c)?, cfg.grid)?;
        let e = decay_over_window(&ev, 1.0, 0.5 * h * h, h * h, cfg.times);
        cone_rows.push(json!({
            "h": h, "terms": p.term_count, "max_scaled": p.max_scaled, "argmax_t": p.argmax_t,
            "slope": p.slope, "edge_max_scaled": e.max_scaled,
        }));
        cone_scaled.push(p.max_scaled);
        slopes.push(p.slope);
        edge_scaled.push(e.max_scaled);
    }
    let (cone_spread, edge_spread) = (spread(&cone_scaled), spread(&edge_scaled));
    let ratio_ok = cone_spread < 6.0;
    let slope_ok = slopes.iter().all(|&x| x <= -1.5);
    let edge_ok = edge_spread < 6.0;
    Ok((
        "dispersive decay of the cone kernel",
        ratio_ok && slope_ok && edge_ok,
        json!({
            "s": s, "rows": cone_rows, "cone_max_over_min": cone_spread, "edge_max_over_min": edge_spread,
            "ratio_ok": ratio_ok, "slope_ok": slope_ok, "edge_ok": edge_ok,
        }),
    ))
}

fn a7(opts: AcceptanceOptions) -> Result<Outcome> {
    let c = Cutoffs::default();
    let cfg = decay_settings(opts);
    let s = s_threshold(opts.n);
    let grid = cfg.grid.restricted(0.3, FRAC_PI_2);
    let mut vals = Vec::new();
    for &h in &cfg.hs {
        let ev = KernelEvaluator::new(SpectralTable::new(h, opts.n, Localization::Full, &c)?, grid)?;
        let sup = log_times(h * h, h.powf(s), cfg.times).iter().map(|&t| ev.sup(t)).fold(0.0, f64::max);
        vals.push(sup * h.powi(2 * opts.n as i32));
    }
    let sp = spread(&vals);
    Ok(("compact-set kernel bound", sp < 4.0, json!({ "h": cfg.hs, "scaled_sup": vals, "max_over_min": sp })))
}

fn a8() -> Result<Outcome> {
    let phi = Cutoffs::default().phi;
    let mus = [0.1, 0.25, 0.5];
    let base = [1.0, 2.0, 10.0, 100.0];
    let ext = [1.0, 2.0, 10.0, 100.0, 1000.0];
    let mut rows = Vec::new();
    let mut passed = true;
    for symbol in [Symbol::One, Symbol::S0] {
        let c0 = max_ratio(&poisson_bound_sweep(&mus, &base, 3, &phi, symbol)?);
        let c1 = max_ratio(&poisson_bound_sweep(&mus, &ext, 3, &phi, symbol)?);
        let drift = (c1 - c0).abs() / c0;
        passed &= drift < 0.2;
        rows.push(json!({ "symbol": symbol, "constant": c0, "extended_constant": c1, "drift": drift }));
    }
    Ok(("Poisson oscillatory-sum bound", passed, json!({ "rows": rows })))
}

fn a9(opts: AcceptanceOptions) -> Result<Outcome> {
    let grid = FhGrid { points: if opts.quick { 1000 } else { 4000 }, ..FhGrid::default() };
    let ells = [20, 40, 80, 160];
    let mut rows = Vec::new();
    let mut passed = true;
    for (a, b) in [(0u32, 0u32), (0, 5), (1, 3), (2, 0)] {
        let res = fh_remainder_sweep(a, b, grid, &ells)?;
        let sc: Vec<f64> = res.iter().map(|r| r.scaled_remainder_sup).collect();
        let sp = spread(&sc);
        passed &= sp < 3.0;
        rows.push(json!({ "alpha": a, "beta": b, "scaled_remainder": sc, "max_over_min": sp }));
    }
    Ok(("Jacobi-to-Bessel remainder", passed, json!({ "ells": ells, "rows": rows })))
}

fn a10() -> Result<Outcome> {
    let j = 10u32;
    let lp = lp_partition(j)?;
    let top = 2f64.powi(2 * j as i32 - 1);
    let count = 10_000;
    let lo = 1e-6f64;
    let mut worst = (lp.total(0.0) - 1.0).abs();
    for i in 0..count {
        let x = (lo.ln() + (top.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp();
        worst = worst.max((lp.total(x) - 1.0).abs());
    }
    Ok(("Littlewood-Paley partition", worst <= 1e-12, json!({ "J": j, "points": count + 1, "max_deviation": worst })))
}

fn a11(opts: AcceptanceOptions) -> Result<Outcome> {
    let n = opts.n;
    let mut worst_identity = 0.0f64;
    for &(b, p, q) in &[(SpectralIndex::new(3, 2), 4.0, 3.0), (SpectralIndex::new(4, 4), 2.0, 4.0)] {
        let u = ZonalSpectralData::single(n, b, Complex64::new(0.6, -0.8));
        let grid = lq_grid(&u, q)?;
        let i = Interval::new(0.0, 0.7)?;
        let v = spacetime_norm(&u, p, q, i, 8, &grid)?;
        let want = i.len().powf(1.0 / p) * lq_norm(&u, q, &grid)?;
        worst_identity = worst_identity.max((v - want).abs() / want);
    }
    let ells: Vec<u32> = if opts.quick { vec![4, 8, 16] } else { vec![4, 8, 16, 32, 64] };
    let s = s_threshold(n);
    let quotients: Vec<f64> = ells
        .iter()
        .map(|&l| {
            let u = ZonalSpectralData::single(n, Family::Diag.block(l), Complex64::new(1.0, 0.0));
            Ok(strichartz_quotient(&u, 2.0, s, 4.0, Interval::default())?.quotient)
        })
        .collect::<Result<_>>()?;
    let growth = quotients[quotients.len() - 1] / quotients[0];
    let monotone_up = quotients.windows(2).all(|w| w[1] > w[0]);
    Ok((
        "Strichartz machinery",
        worst_identity <= 1e-6 && growth < 2.0,
        json!({ "single_block_error": worst_identity, "ells": ells, "quotients": quotients, "last_over_first": growth, "monotone_increasing": monotone_up }),
    ))
}

fn a12(opts: AcceptanceOptions) -> Result<Outcome> {
    let ells: Vec<u32> = if opts.quick { vec![4, 8, 16, 32] } else { vec![8, 16, 32, 64] };
    let mut rows = Vec::new();
    let mut passed = true;
    for family in [Family::Diag, Family::Holo] {
        let fit = eigenfunction_growth_fit(family, 6.0, opts.n, &ells)?;
        let err = (fit.slope - fit.predicted).abs();
        passed &= err <= 0.05;
        rows.push(json!({ "family": family, "slope": fit.slope, "predicted": fit.predicted, "error": err }));
    }
    Ok(("eigenfunction growth exponents", passed, json!({ "q": 6.0, "ells": ells, "rows": rows })))
}
