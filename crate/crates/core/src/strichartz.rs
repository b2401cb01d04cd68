//! Schrödinger evolution `e^{itL}` on pole-zonal data, space–time norms
//! `L^p_t L^q_x`, Strichartz quotients, the Duhamel integral and the
//! eigenfunction growth exponents `α(1/q,n)`, `β(1/q,n)`.

use crate::error::{invalid, Error, Result};
use crate::geometry::DiskGrid;
use crate::kernel::loglog_slope;
use crate::sobolev::{norm_mixed, MixedNormParams};
use crate::spectrum::SpectralIndex;
use crate::sum::tree_sum;
use crate::zonal::{synthesize, Synthesizer, ZonalSpectralData};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `c_{ℓ,ℓ′} ↦ e^{itλ} c_{ℓ,ℓ′}`.
pub fn evolve(u: &ZonalSpectralData, t: f64) -> ZonalSpectralData {
    ZonalSpectralData {
        n: u.n,
        coeffs: u.coeffs.iter().map(|(&b, &c)| (b, c * Complex64::from_polar(1.0, t * b.lambda(u.n) as f64))).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub p: f64,
    pub q: f64,
    #[serde(rename = "Q")]
    pub big_q: u32,
}

impl AdmissiblePair {
    pub fn new(p: f64, big_q: u32) -> Result<Self> {
        Ok(Self { p, q: admissible_q(p, big_q)?, big_q })
    }
}

/// `q` with `2/p + Q/q = Q/2`.
pub fn admissible_q(p: f64, big_q: u32) -> Result<f64> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(invalid(format!("p={p} must be finite and at least 2")));
    }
    let qf = big_q as f64;
    let denom = qf * p - 4.0;
    if denom <= 0.0 {
        return Err(invalid(format!("p={p}, Q={big_q} forces q = infinity")));
    }
    let q = 2.0 * qf * p / denom;
    if q < 2.0 {
        return Err(invalid(format!("p={p}, Q={big_q} gives q={q} < 2")));
    }
    Ok(q)
}

/// Smoothing threshold `s_n`: `4/3` for `n = 1`, `2(1 − 1/(n+1))` above.
pub fn s_threshold(n: u32) -> f64 {
    if n == 1 {
        4.0 / 3.0
    } else {
        2.0 * (1.0 - 1.0 / (n as f64 + 1.0))
    }
}

/// `(Σ w |f|^q)^{1/q}` for θ-major grid samples.
pub fn lq_from_samples(samples: &[Complex64], grid: &DiskGrid, q: f64) -> Result<f64> {
    let pow: Vec<Complex64> = samples.iter().map(|v| Complex64::new(v.norm().powf(q), 0.0)).collect();
    Ok(grid.integrate_samples(&pow)?.re.max(0.0).powf(1.0 / q))
}

pub fn lq_norm(u: &ZonalSpectralData, q: f64, grid: &DiskGrid) -> Result<f64> {
    lq_from_samples(&synthesize(u, grid), grid, q)
}

/// Disk grid for `L^q` norms of `u`: exact when `q` is an even integer.
pub fn lq_grid(u: &ZonalSpectralData, q: f64) -> Result<DiskGrid> {
    let top = u.coeffs.keys().map(|b| b.ell + b.ellp).max().unwrap_or(0) as f64;
    let ks: Vec<i64> = u.coeffs.keys().map(|b| b.ellp as i64 - b.ell as i64).collect();
    let spread = (ks.iter().max().unwrap_or(&0) - ks.iter().min().unwrap_or(&0)) as f64;
    let half = (q / 2.0).ceil();
    let n_theta = (half * top) as usize / 2 + 4 * u.n as usize + 8;
    let n_omega = ((2.0 * half * spread) as usize + 1).max(8);
    DiskGrid::new(u.n, n_theta, n_omega)
}

/// Time interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(invalid(format!("interval [{start}, {end}] is empty")));
        }
        Ok(Self { start, end })
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self { start: 0.0, end: 1.0 }
    }
}

const MAX_DOUBLINGS: u32 = 14;

fn max_lambda(u: &ZonalSpectralData) -> f64 {
    u.coeffs.keys().map(|b| b.lambda(u.n)).max().unwrap_or(0) as f64
}

/// Minimal number of trapezoid intervals: 8 per period of the fastest phase.
fn time_floor(u: &ZonalSpectralData, interval: Interval) -> usize {
    (8.0 * max_lambda(u) * interval.len() / (2.0 * PI)).ceil() as usize
}

/// `‖e^{itL}u₀‖_{L^p(I; L^q)}` by composite trapezoid in `t`, doubled until
/// the value changes by less than 0.5%.
pub fn spacetime_norm(
    u0: &ZonalSpectralData,
    p: f64,
    q: f64,
    interval: Interval,
    time_samples: usize,
    grid: &DiskGrid,
) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite() && q >= 1.0 && q.is_finite()) {
        return Err(invalid(format!("need finite p, q >= 1 (p={p}, q={q})")));
    }
    let blocks = u0.blocks();
    let lambdas: Vec<f64> = blocks.iter().map(|b| b.lambda(u0.n) as f64).collect();
    let coeffs: Vec<Complex64> = blocks.iter().map(|b| u0.coeffs[b]).collect();
    let synth = Synthesizer::new(blocks, u0.n, grid);
    let g = |t: f64| -> Result<f64> {
        let c: Vec<Complex64> = coeffs.iter().zip(&lambdas).map(|(c, l)| c * Complex64::from_polar(1.0, t * l)).collect();
        Ok(lq_from_samples(&synth.synthesize(&c), grid, q)?.powf(p))
    };
    let trapezoid = |m: usize| -> Result<f64> {
        let h = interval.len() / m as f64;
        let vals: Vec<f64> = (0..=m)
            .into_par_iter()
            .map(|i| g(interval.start + h * i as f64).map(|v| if i == 0 || i == m { 0.5 * v } else { v }))
            .collect::<Result<_>>()?;
        Ok(tree_sum(&vals) * h)
    };
    let mut m = time_samples.max(time_floor(u0, interval)).max(2);
    let mut prev = trapezoid(m)?;
    for _ in 0..MAX_DOUBLINGS {
        m *= 2;
        let next = trapezoid(m)?;
        let (a, b) = (prev.powf(1.0 / p), next.powf(1.0 / p));
        if (a - b).abs() <= 0.005 * b.abs() {
            return Ok(b);
        }
        prev = next;
    }
    Err(Error::Unresolved(format!("space-time norm not converged with {m} time intervals")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientResult {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub quotient: f64,
}

/// `‖e^{itL}u₀‖_{L^pL^q} / ‖u₀‖_{X^{(s/p, 2/p)}_M}` with `q` admissible.
pub fn strichartz_quotient(u0: &ZonalSpectralData, p: f64, s: f64, m: f64, interval: Interval) -> Result<QuotientResult> {
    let q = admissible_q(p, 2 * u0.n + 2)?;
    if s < s_threshold(u0.n) {
        log::warn!("s={s} below the threshold {} for n={}", s_threshold(u0.n), u0.n);
    }
    let denominator = norm_mixed(u0, MixedNormParams::new(s / p, 2.0 / p, m)?);
    if denominator == 0.0 {
        return Err(invalid("zero initial data"));
    }
    let grid = lq_grid(u0, q)?;
    let numerator = spacetime_norm(u0, p, q, interval, 16, &grid)?;
    Ok(QuotientResult { p, q, s, m, numerator, denominator, quotient: numerator / denominator })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalityExponents {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub n: u32,
}

/// Lower-bound exponents of `‖h_{ℓ,ℓ′}‖_q/‖h_{ℓ,ℓ′}‖_2 ≳ (λ+1)^α (ℓ+ℓ′+1)^β`.
pub fn optimality_exponents(q: f64, n: u32) -> Result<OptimalityExponents> {
    if !(q >= 2.0) || n == 0 {
        return Err(invalid(format!("need q >= 2 and n >= 1 (q={q}, n={n})")));
    }
    let nf = n as f64;
    let (alpha, beta) = if q >= 2.0 * (2.0 * nf + 1.0) / (2.0 * nf - 1.0) {
        (nf * (0.5 - 1.0 / q) - 0.5, 0.5)
    } else {
        (0.5 * (1.0 / q - 0.5), (nf + 0.5) * (0.5 - 1.0 / q))
    };
    Ok(OptimalityExponents { alpha, beta, q, n })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `Z_{ℓ,ℓ}`.
    Diag,
    /// `Z_{ℓ,0}`.
    Holo,
}

impl Family {
    pub fn block(self, ell: u32) -> SpectralIndex {
        match self {
            Family::Diag => SpectralIndex::new(ell, ell),
            Family::Holo => SpectralIndex::new(ell, 0),
        }
    }

    /// Predicted slope of `log ‖Z‖_q/‖Z‖_2` against `log λ`.
    pub fn predicted_slope(self, e: &OptimalityExponents) -> f64 {
        match self {
            Family::Diag => e.alpha + e.beta / 2.0,
            Family::Holo => e.alpha + e.beta,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diag" => Ok(Family::Diag),
            "holo" => Ok(Family::Holo),
            _ => Err(invalid(format!("unknown family '{s}' (diag|holo)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub ell: u32,
    pub lambda: u64,
    /// `‖Z‖_q / ‖Z‖_2`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub family: Family,
    pub q: f64,
    pub n: u32,
    pub points: Vec<GrowthPoint>,
    pub slope: f64,
    pub predicted: f64,
}

/// `‖Z‖_q/‖Z‖_2` for one block, refining the θ-grid until it is stable to 1e−8.
pub fn normalized_lq(idx: SpectralIndex, n: u32, q: f64) -> Result<f64> {
    let u = ZonalSpectralData::single(n, idx, Complex64::new(1.0, 0.0));
    let l2 = u.l2_norm();
    let base = lq_grid(&u, q)?;
    let mut n_theta = base.thetas.len();
    // |Z| does not depend on ω
    let mut prev = lq_norm(&u, q, &DiskGrid::new(n, n_theta, 8)?)?;
    for _ in 0..8 {
        n_theta *= 2;
        let next = lq_norm(&u, q, &DiskGrid::new(n, n_theta, 8)?)?;
        if (next - prev).abs() <= 1e-8 * next {
            return Ok(next / l2);
        }
        prev = next;
    }
    Err(Error::Unresolved(format!("L^{q} norm of ({},{}) not converged at {n_theta} nodes", idx.ell, idx.ellp)))
}

pub fn eigenfunction_growth_fit(family: Family, q: f64, n: u32, ells: &[u32]) -> Result<GrowthFit> {
    if ells.len() < 4 || ells.contains(&0) {
        return Err(invalid("growth fit needs at least four positive degrees"));
    }
    let points: Vec<GrowthPoint> = ells
        .par_iter()
        .map(|&ell| {
            let b = family.block(ell);
            Ok(GrowthPoint { ell, lambda: b.lambda(n), ratio: normalized_lq(b, n, q)? })
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = points.iter().map(|p| p.lambda as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.ratio).collect();
    let predicted = family.predicted_slope(&optimality_exponents(q, n)?);
    Ok(GrowthFit { family, q, n, points, slope: loglog_slope(&xs, &ys), predicted })
}

/// `∫₀ᵗ e^{i(t−t′)L} f(t′) dt′` by composite Simpson, doubled until the
/// result is stable to 1e−9 relative in L².
pub fn duhamel<F>(f: F, t: f64, time_samples: usize) -> Result<ZonalSpectralData>
where
    F: Fn(f64) -> ZonalSpectralData + Sync,
{
    if !t.is_finite() {
        return Err(invalid("non-finite time"));
    }
    let simpson = |m: usize| -> ZonalSpectralData {
        let h = t / m as f64;
        let parts: Vec<ZonalSpectralData> = (0..=m)
            .into_par_iter()
            .map(|i| {
                let s = h * i as f64;
                let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                evolve(&f(s), t - s).scaled(Complex64::new(w * h / 3.0, 0.0))
            })
            .collect();
        parts.iter().fold(ZonalSpectralData::new(parts[0].n), |acc, p| acc.plus(p))
    };
    let first = f(0.0);
    let floor = (8.0 * max_lambda(&first) * t.abs() / (2.0 * PI)).ceil() as usize;
    let mut m = time_samples.max(floor).max(2);
    m += m % 2;
    let mut prev = simpson(m);
    for _ in 0..MAX_DOUBLINGS {
        m *= 2;
        let next = simpson(m);
        let diff = next.plus(&prev.scaled(Complex64::new(-1.0, 0.0))).l2_norm();
        if diff <= 1e-9 * next.l2_norm().max(1e-300) || next.l2_norm() == 0.0 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Unresolved(format!("Duhamel integral not converged with {m} time intervals")))
}
