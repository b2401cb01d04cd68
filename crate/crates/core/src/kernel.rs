//! Frequency-localised Schrödinger kernels
//! `K_h(t; ω, θ) = Σ e^{itλ} φ(h²λ) m(ℓ,ℓ′) Z_{ℓ,ℓ′}(e^{iω} cos θ)`
//! and their sup-norm decay in time.
//!
//! The sum runs over the annulus `a/h² < λ ≤ b/h²` given by the support of
//! `φ`; `m` is the localisation multiplier.

use crate::cutoffs::Cutoffs;
use crate::error::{invalid, Result};
use crate::geometry::{surface_area, DiskPoint};
use crate::spectrum::{dimension, enumerate_annulus, Region, SpectralIndex};
use crate::sum::{tree_sum, tree_sum_complex};
use crate::zonal::radial_values;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Localization {
    Full,
    /// `ψ(ℓ′/ℓ)`.
    Cone,
    /// `1 − ψ(ℓ′/ℓ)`.
    Edge,
    /// `η₀(ℓ′−ℓ) ψ(ℓ′/ℓ)`.
    Diag,
    /// `η₊(ℓ′−ℓ) ψ(ℓ′/ℓ)`.
    Plus,
    /// `η₋(ℓ′−ℓ) ψ(ℓ′/ℓ)`.
    Minus,
}

impl Localization {
    pub const ALL: [Localization; 6] =
        [Localization::Full, Localization::Cone, Localization::Edge, Localization::Diag, Localization::Plus, Localization::Minus];

    pub fn multiplier(self, idx: SpectralIndex, cutoffs: &Cutoffs) -> f64 {
        // ψ(ℓ′/ℓ) with ℓ = 0 lies outside the cone support
        let psi = if idx.ell == 0 { 0.0 } else { cutoffs.cone.eval(idx.ellp as f64 / idx.ell as f64) };
        let xi = idx.ellp as f64 - idx.ell as f64;
        match self {
            Localization::Full => 1.0,
            Localization::Cone => psi,
            Localization::Edge => 1.0 - psi,
            Localization::Diag => cutoffs.eta0.eval(xi) * psi,
            Localization::Plus => cutoffs.eta_plus.eval(xi) * psi,
            Localization::Minus => cutoffs.eta_minus.eval(xi) * psi,
        }
    }
}

impl fmt::Display for Localization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Localization::Full => "full",
            Localization::Cone => "cone",
            Localization::Edge => "edge",
            Localization::Diag => "diag",
            Localization::Plus => "plus",
            Localization::Minus => "minus",
        };
        f.write_str(s)
    }
}

impl FromStr for Localization {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Localization::ALL
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| invalid(format!("unknown localization '{s}' (full|cone|edge|diag|plus|minus)")))
    }
}

/// One term of the kernel sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTerm {
    pub idx: SpectralIndex,
    pub lambda: f64,
    /// `φ(h²λ) · m(ℓ,ℓ′)`.
    pub weight: f64,
}

/// Terms of `K_h` for fixed `(n, h, localisation)`, lexicographic in `(ℓ,ℓ′)`.
#[derive(Debug, Clone)]
pub struct SpectralTable {
    pub n: u32,
    pub h: f64,
    pub localization: Localization,
    pub terms: Vec<KernelTerm>,
}

impl SpectralTable {
    pub fn new(h: f64, n: u32, localization: Localization, cutoffs: &Cutoffs) -> Result<Self> {
        if !(h > 0.0 && h <= 1.0) {
            return Err(invalid(format!("h={h} outside (0, 1]")));
        }
        let p = cutoffs.params;
        let blocks = enumerate_annulus(p.phi_a, p.phi_b, h, n, Region::All)?;
        let h2 = h * h;
        let terms = blocks
            .into_iter()
            .map(|idx| {
                let lambda = idx.lambda(n) as f64;
                KernelTerm { idx, lambda, weight: cutoffs.phi.eval(h2 * lambda) * localization.multiplier(idx, cutoffs) }
            })
            .collect();
        Ok(Self { n, h, localization, terms })
    }

    /// Size of the enumerated annulus.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn blocks(&self) -> Vec<SpectralIndex> {
        self.terms.iter().map(|t| t.idx).collect()
    }

    /// `K_h(t)` at one point, summed in lexicographic order.
    pub fn value(&self, t: f64, point: &DiskPoint) -> Complex64 {
        let radial = radial_values(&self.blocks(), self.n, point.theta);
        let terms: Vec<Complex64> = self
            .terms
            .iter()
            .zip(&radial)
            .map(|(term, r)| {
                let k = term.idx.ellp as f64 - term.idx.ell as f64;
                Complex64::from_polar(term.weight * r, t * term.lambda + k * point.omega_angle)
            })
            .collect();
        tree_sum_complex(&terms)
    }

    /// `Σ |weight| d/ω`: the triangle-inequality ceiling of `|K_h(t)|`.
    pub fn modulus_ceiling(&self) -> f64 {
        let area = surface_area(self.n).expect("n >= 1");
        let terms: Vec<f64> = self.terms.iter().map(|t| t.weight.abs() * dimension(t.idx, self.n) as f64 / area).collect();
        tree_sum(&terms)
    }
}

/// Spec-level single-point evaluation.
pub fn kernel_value(
    t: f64,
    h: f64,
    n: u32,
    point: &DiskPoint,
    localization: Localization,
    cutoffs: &Cutoffs,
) -> Result<Complex64> {
    Ok(SpectralTable::new(h, n, localization, cutoffs)?.value(t, point))
}

/// Sampling grid for sup scans: `θ = θ_lo + (θ_hi−θ_lo)u²` with `u` uniform
/// (nodes crowd toward the pole), `ω` uniform on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub n_theta: usize,
    pub n_omega: usize,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self { n_theta: 180, n_omega: 256, theta_lo: 0.0, theta_hi: FRAC_PI_2 }
    }
}

impl ScanGrid {
    pub fn with_size(n_theta: usize, n_omega: usize) -> Self {
        Self { n_theta, n_omega, ..Self::default() }
    }

    pub fn restricted(self, theta_lo: f64, theta_hi: f64) -> Self {
        Self { theta_lo, theta_hi, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 2 || self.n_omega < 4 {
            return Err(invalid(format!("scan grid too small: {} x {}", self.n_theta, self.n_omega)));
        }
        if !(0.0 <= self.theta_lo && self.theta_lo < self.theta_hi && self.theta_hi <= FRAC_PI_2) {
            return Err(invalid(format!("theta range [{}, {}] not inside [0, pi/2]", self.theta_lo, self.theta_hi)));
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        let span = self.theta_hi - self.theta_lo;
        (0..self.n_theta)
            .map(|i| {
                let u = i as f64 / (self.n_theta - 1) as f64;
                self.theta_lo + span * u * u
            })
            .collect()
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n_omega).map(|j| 2.0 * PI * j as f64 / self.n_omega as f64).collect()
    }
}

/// Sampled `|K_h(t,·)|` over a scan grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelScan {
    pub n: u32,
    pub h: f64,
    pub t: f64,
    pub localization: Localization,
    pub thetas: Vec<f64>,
    pub omegas: Vec<f64>,
    /// θ-major.
    pub values: Vec<Complex64>,
    pub sup_abs: f64,
    /// `(ω, θ)` attaining the sup.
    pub argmax: (f64, f64),
    pub term_count: usize,
}

impl KernelScan {
    pub fn grid(&self) -> impl Iterator<Item = (DiskPoint, Complex64)> + '_ {
        let n_omega = self.omegas.len();
        self.values.iter().enumerate().map(move |(i, &v)| {
            (DiskPoint::at(self.omegas[i % n_omega], self.thetas[i / n_omega]), v)
        })
    }
}

/// Kernel evaluator with the radial table for a scan grid cached, so that
/// many times can be scanned cheaply.
pub struct KernelEvaluator {
    pub table: SpectralTable,
    pub grid: ScanGrid,
    thetas: Vec<f64>,
    omegas: Vec<f64>,
    /// Per θ, `weight · radial` for every term.
    weighted_radial: Vec<Vec<f64>>,
    /// `(ℓ′−ℓ) mod n_ω` per term.
    bins: Vec<usize>,
    fft: Arc<dyn Fft<f64>>,
}

impl KernelEvaluator {
    pub fn new(table: SpectralTable, grid: ScanGrid) -> Result<Self> {
        grid.validate()?;
        let thetas = grid.thetas();
        let omegas = grid.omegas();
        let blocks = table.blocks();
        let weighted_radial = thetas
            .par_iter()
            .map(|&theta| {
                radial_values(&blocks, table.n, theta).into_iter().zip(&table.terms).map(|(r, t)| r * t.weight).collect()
            })
            .collect();
        let m = grid.n_omega as i64;
        let bins = table.terms.iter().map(|t| ((t.idx.ellp as i64 - t.idx.ell as i64).rem_euclid(m)) as usize).collect();
        let fft = FftPlanner::new().plan_fft_inverse(grid.n_omega);
        Ok(Self { table, grid, thetas, omegas, weighted_radial, bins, fft })
    }

    /// Values on the scan grid at time `t`, θ-major.
    pub fn values(&self, t: f64) -> Vec<Complex64> {
        let n_omega = self.grid.n_omega;
        let phases: Vec<Complex64> = self.table.terms.iter().map(|term| Complex64::from_polar(1.0, t * term.lambda)).collect();
        // terms grouped by ω-bin, each group in lexicographic order
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_omega];
        for (i, &b) in self.bins.iter().enumerate() {
            members[b].push(i);
        }
        let rows: Vec<Vec<Complex64>> = self
            .weighted_radial
            .par_iter()
            .map(|wr| {
                let mut buf: Vec<Complex64> = members
                    .iter()
                    .map(|group| {
                        let terms: Vec<Complex64> = group.iter().map(|&i| phases[i] * wr[i]).collect();
                        tree_sum_complex(&terms)
                    })
                    .collect();
                let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
                self.fft.process_with_scratch(&mut buf, &mut scratch);
                buf
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    pub fn scan(&self, t: f64) -> KernelScan {
        let values = self.values(t);
        let n_omega = self.grid.n_omega;
        let (mut best, mut arg) = (f64::NEG_INFINITY, 0usize);
        for (i, v) in values.iter().enumerate() {
            let a = v.norm();
            if a > best {
                best = a;
                arg = i;
            }
        }
        KernelScan {
            n: self.table.n,
            h: self.table.h,
            t,
            localization: self.table.localization,
            thetas: self.thetas.clone(),
            omegas: self.omegas.clone(),
            argmax: (self.omegas[arg % n_omega], self.thetas[arg / n_omega]),
            sup_abs: best,
            values,
            term_count: self.table.term_count(),
        }
    }

    /// Sup of `|K_h(t)|` only, without keeping the grid.
    pub fn sup(&self, t: f64) -> f64 {
        self.values(t).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub fn sup_scan(t: f64, h: f64, n: u32, localization: Localization, grid: ScanGrid, cutoffs: &Cutoffs) -> Result<KernelScan> {
    let table = SpectralTable::new(h, n, localization, cutoffs)?;
    Ok(KernelEvaluator::new(table, grid)?.scan(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub t: f64,
    pub sup: f64,
    /// `sup · t^{Q/2}`.
    pub sup_scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub n: u32,
    pub h: f64,
    pub s: f64,
    pub localization: Localization,
    pub t_lo: f64,
    pub t_hi: f64,
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `log sup` against `log t`.
    pub slope: f64,
    pub max_scaled: f64,
    pub argmax_t: f64,
    pub term_count: usize,
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_times(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Sup of the kernel over `t ∈ [t_lo, t_hi]` on log-spaced times.
pub fn decay_over_window(evaluator: &KernelEvaluator, s: f64, t_lo: f64, t_hi: f64, num_times: usize) -> DecayProfile {
    let table = &evaluator.table;
    let q_half = (table.n + 1) as f64;
    let mut rows = Vec::new();
    if t_hi >= t_lo && num_times > 0 {
        for t in log_times(t_lo, t_hi, num_times) {
            let sup = evaluator.sup(t);
            rows.push(DecayRow { t, sup, sup_scaled: sup * t.powf(q_half) });
        }
    } else {
        log::warn!("empty time window [{t_lo}, {t_hi}] for h={}", table.h);
    }
    let slope = if rows.len() >= 2 {
        loglog_slope(&rows.iter().map(|r| r.t).collect::<Vec<_>>(), &rows.iter().map(|r| r.sup).collect::<Vec<_>>())
    } else {
        f64::NAN
    };
    let (max_scaled, argmax_t) =
        rows.iter().fold((f64::NEG_INFINITY, f64::NAN), |acc, r| if r.sup_scaled > acc.0 { (r.sup_scaled, r.t) } else { acc });
    DecayProfile {
        n: table.n,
        h: table.h,
        s,
        localization: table.localization,
        t_lo,
        t_hi,
        rows,
        slope,
        max_scaled,
        argmax_t,
        term_count: table.term_count(),
    }
}

/// Decay table on the dispersive window `[h², c·h^s]`.
#[allow(clippy::too_many_arguments)]
pub fn decay_profile(
    h: f64,
    n: u32,
    s: f64,
    c: f64,
    localization: Localization,
    num_times: usize,
    grid: ScanGrid,
    cutoffs: &Cutoffs,
) -> Result<DecayProfile> {
    if !(s >= 1.0) {
        return Err(invalid(format!("window exponent s must be at least 1, got {s}")));
    }
    let table = SpectralTable::new(h, n, localization, cutoffs)?;
    let evaluator = KernelEvaluator::new(table, grid)?;
    Ok(decay_over_window(&evaluator, s, h * h, c * h.powf(s), num_times))
}

/// `h^{n+1} (Σ φ(h²λ)² d_{ℓ,ℓ′})^{1/2}`, the normalised L² size of `K_h(t)`.
pub fn l2_lower_bound(h: f64, n: u32, cutoffs: &Cutoffs) -> Result<f64> {
    let table = SpectralTable::new(h, n, Localization::Full, cutoffs)?;
    Ok(raw_l2_sum(&table).sqrt() * h.powi(n as i32 + 1))
}

pub(crate) fn raw_l2_sum(table: &SpectralTable) -> f64 {
    let terms: Vec<f64> = table.terms.iter().map(|t| t.weight * t.weight * dimension(t.idx, table.n) as f64).collect();
    tree_sum(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut() -> Cutoffs {
        Cutoffs::default()
    }

    #[test]
    fn localization_round_trip() {
        for l in Localization::ALL {
            assert_eq!(l.to_string().parse::<Localization>().unwrap(), l);
        }
        assert!("diagonal".parse::<Localization>().is_err());
    }

    #[test]
    fn pole_at_time_zero_is_weighted_dimension_sum() {
        let c = cut();
        let table = SpectralTable::new(0.3, 1, Localization::Full, &c).unwrap();
        let v = table.value(0.0, &DiskPoint::at(0.0, 0.0));
        assert!(v.im.abs() < 1e-12 * v.re);
        assert!(v.re > 0.0);
        assert!((v.re - table.modulus_ceiling()).abs() < 1e-12 * v.re);
    }

    #[test]
    fn eta_pieces_sum_to_cone_and_cone_plus_edge_is_full() {
        let c = cut();
        let h = 0.15;
        for &(t, w, th) in &[(0.0, 0.0, 0.0), (0.03, 1.0, 0.2), (0.5, 4.0, 0.9)] {
            let p = DiskPoint::at(w, th);
            let k = |l| kernel_value(t, h, 1, &p, l, &c).unwrap();
            let pieces = k(Localization::Diag) + k(Localization::Plus) + k(Localization::Minus);
            let cone = k(Localization::Cone);
            assert!((pieces - cone).norm() <= 1e-12 * cone.norm().max(1.0));
            let full = k(Localization::Full);
            assert!((cone + k(Localization::Edge) - full).norm() <= 1e-12 * full.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_bad_h() {
        assert!(SpectralTable::new(0.0, 1, Localization::Full, &cut()).is_err());
        assert!(SpectralTable::new(1.5, 1, Localization::Full, &cut()).is_err());
    }

    #[test]
    fn scan_matches_pointwise_values() {
        let c = cut();
        let table = SpectralTable::new(0.2, 1, Localization::Cone, &c).unwrap();
        let ev = KernelEvaluator::new(table.clone(), ScanGrid::with_size(9, 16)).unwrap();
        let scan = ev.scan(0.07);
        for (p, v) in scan.grid() {
            let direct = table.value(0.07, &p);
            assert!((direct - v).norm() <= 1e-10 * table.modulus_ceiling());
        }
        assert_eq!(scan.sup_abs, scan.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }

    #[test]
    fn sup_at_time_zero_sits_at_the_pole() {
        let scan = sup_scan(0.0, 0.2, 1, Localization::Full, ScanGrid::with_size(40, 32), &cut()).unwrap();
        assert_eq!(scan.argmax, (0.0, 0.0));
    }

    #[test]
    fn time_reversal_preserves_modulus_for_full_localization() {
        let c = cut();
        let table = SpectralTable::new(0.2, 1, Localization::Full, &c).unwrap();
        for &(w, th) in &[(0.4, 0.1), (2.0, 0.5)] {
            let p = DiskPoint::at(w, th);
            for &t in &[0.01, 0.3] {
                assert!((table.value(t, &p).norm() - table.value(-t, &p).norm()).abs() < 1e-10 * table.modulus_ceiling());
            }
        }
    }

    #[test]
    fn time_zero_sup_is_a_ceiling() {
        let c = cut();
        for loc in [Localization::Full, Localization::Cone, Localization::Edge] {
            let table = SpectralTable::new(0.2, 1, loc, &c).unwrap();
            let ev = KernelEvaluator::new(table, ScanGrid::with_size(30, 32)).unwrap();
            let s0 = ev.sup(0.0);
            for i in 1..10 {
                assert!(ev.sup(0.05 * i as f64) <= s0 * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn l2_bound_small_lattice_by_hand() {
        // h = 1, n = 1: the annulus (1, 4] holds (2,0),(0,2),(3,0),(0,3),(4,0),(0,4),(1,1)
        let c = cut();
        let table = SpectralTable::new(1.0, 1, Localization::Full, &c).unwrap();
        let blocks = table.blocks();
        let expected_blocks: Vec<SpectralIndex> = [(0, 2), (0, 3), (0, 4), (1, 1), (2, 0), (3, 0), (4, 0)]
            .iter()
            .map(|&(a, b)| SpectralIndex::new(a, b))
            .collect();
        assert_eq!(blocks, expected_blocks);
        let phi = |x: f64| c.phi.eval(x);
        let by_hand = 2.0 * (phi(2.0).powi(2) * 3.0 + phi(3.0).powi(2) * 4.0 + phi(4.0).powi(2) * 5.0) + phi(4.0).powi(2) * 3.0;
        assert!((l2_lower_bound(1.0, 1, &c).unwrap() - by_hand.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn l2_raw_sum_grows_as_h_shrinks() {
        let c = cut();
        let raw = |h: f64| raw_l2_sum(&SpectralTable::new(h, 1, Localization::Full, &c).unwrap());
        assert!(raw(0.1) > raw(0.2) && raw(0.05) > raw(0.1));
    }

    #[test]
    fn slope_of_pure_power() {
        let xs: Vec<f64> = (1..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-2.0)).collect();
        assert!((loglog_slope(&xs, &ys) + 2.0).abs() < 1e-12);
    }
    #[test]
    fn grid_doubling_moves_sup_by_under_two_percent() {
        for h in [0.2, 0.1, 0.05] {
            let table = SpectralTable::new(h, 1, Localization::Cone, &cut()).unwrap();
            let coarse = KernelEvaluator::new(table.clone(), ScanGrid::default()).unwrap();
            let fine = KernelEvaluator::new(table, ScanGrid::with_size(360, 512)).unwrap();
            for t in [h * h, h.powf(4.0 / 3.0)] {
                let (a, b) = (coarse.sup(t), fine.sup(t));
                assert!((b - a).abs() < 0.02 * b, "h={h} t={t}: {a} vs {b}");
            }
        }
    }
}
