//! Spectral Sobolev norms `W^r` (weights `(1+λ)^r`), `H^s` (weights
//! `(1+μ)^s`) and the mixed cone/edge norm `X^{(r,s)}_M`.

use crate::error::{invalid, Result};
use crate::geometry::{surface_area, DiskGrid};
use crate::spectrum::{dimension, SpectralIndex};
use crate::sum::tree_sum;
use crate::zonal::{synthesize, ZonalSpectralData};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedNormParams {
    pub r: f64,
    pub s: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

impl MixedNormParams {
    pub fn new(r: f64, s: f64, m: f64) -> Result<Self> {
        if !(r >= 0.0 && s >= 0.0) {
            return Err(invalid(format!("Sobolev orders must be nonnegative (r={r}, s={s})")));
        }
        if !(m > 1.0) {
            return Err(invalid(format!("cone aperture M must exceed 1, got {m}")));
        }
        Ok(Self { r, s, m })
    }
}

fn weighted_norm<F: Fn(SpectralIndex) -> f64>(u: &ZonalSpectralData, weight: F) -> f64 {
    let area = surface_area(u.n).expect("n >= 1");
    let terms: Vec<f64> = u
        .coeffs
        .iter()
        .map(|(&b, c)| weight(b) * c.norm_sqr() * dimension(b, u.n) as f64 / area)
        .collect();
    tree_sum(&terms).sqrt()
}

/// `(Σ (1+λ)^r ‖c Z‖₂²)^{1/2}`.
pub fn norm_w(u: &ZonalSpectralData, r: f64) -> f64 {
    weighted_norm(u, |b| (1.0 + b.lambda(u.n) as f64).powf(r))
}

/// `(Σ (1+μ)^s ‖c Z‖₂²)^{1/2}`.
pub fn norm_h(u: &ZonalSpectralData, s: f64) -> f64 {
    weighted_norm(u, |b| (1.0 + b.mu(u.n) as f64).powf(s))
}

/// Cone blocks weighted by `(1+λ)^r`, edge blocks by `(1+λ)^s`.
pub fn norm_mixed(u: &ZonalSpectralData, params: MixedNormParams) -> f64 {
    weighted_norm(u, |b| {
        let order = if b.in_cone(params.m) { params.r } else { params.s };
        (1.0 + b.lambda(u.n) as f64).powf(order)
    })
}

/// `(π_V u, π_E u)`: the strict cone `ℓ/M < ℓ′ < Mℓ` and its complement.
pub fn project_cone_edge(u: &ZonalSpectralData, m: f64) -> Result<(ZonalSpectralData, ZonalSpectralData)> {
    if !(m > 1.0) {
        return Err(invalid(format!("cone aperture M must exceed 1, got {m}")));
    }
    let (cone, edge): (Vec<_>, Vec<_>) = u.coeffs.iter().map(|(&b, &c)| (b, c)).partition(|(b, _)| b.in_cone(m));
    Ok((ZonalSpectralData::from_pairs(u.n, cone), ZonalSpectralData::from_pairs(u.n, edge)))
}

/// A disk grid on which `|u|²` integrates exactly.
pub fn resolving_grid(u: &ZonalSpectralData) -> Result<DiskGrid> {
    let top = u.coeffs.keys().map(|b| b.ell + b.ellp).max().unwrap_or(0) as usize;
    let freq = u.coeffs.keys().map(|b| b.ell.abs_diff(b.ellp)).max().unwrap_or(0) as usize;
    DiskGrid::new(u.n, top + u.n as usize / 2 + 4, (4 * freq + 4).max(8))
}

/// `‖u‖₂` by quadrature of the synthesised function.
pub fn quadrature_l2(u: &ZonalSpectralData, grid: &DiskGrid) -> Result<f64> {
    let values = synthesize(u, grid);
    let sq: Vec<_> = values.iter().map(|v| num_complex::Complex64::new(v.norm_sqr(), 0.0)).collect();
    Ok(grid.integrate_samples(&sq)?.re.sqrt())
}

/// Range of a blockwise ratio over a lattice region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRange {
    pub min: f64,
    pub max: f64,
}

impl RatioRange {
    fn empty() -> Self {
        Self { min: f64::INFINITY, max: f64::NEG_INFINITY }
    }

    fn push(&mut self, x: f64) {
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub n: u32,
    #[serde(rename = "M")]
    pub m: f64,
    pub lattice_cap: u32,
    /// `(1+μ)/(1+λ)` on the cone, up to `lattice_cap` and `2·lattice_cap`.
    pub cone: RatioRange,
    pub cone_doubled: RatioRange,
    /// `(1+λ)/(1+μ)^{1/2}` where `min(ℓ,ℓ′) ≤ M`.
    pub low: RatioRange,
    pub low_doubled: RatioRange,
    /// `(1+λ)/(1+μ)^{1/2}` along `(ℓ,ℓ)`, `ℓ = 1, 2, 4, …, cap`.
    pub diagonal_growth: Vec<(u32, f64)>,
}

fn lattice_ranges(n: u32, m: f64, cap: u32) -> (RatioRange, RatioRange) {
    let (mut cone, mut low) = (RatioRange::empty(), RatioRange::empty());
    for l in 0..=cap {
        for lp in 0..=cap {
            let b = SpectralIndex::new(l, lp);
            let (lam, mu) = (1.0 + b.lambda(n) as f64, 1.0 + b.mu(n) as f64);
            if b.in_cone(m) {
                cone.push(mu / lam);
            }
            if (l.min(lp) as f64) <= m {
                low.push(lam / mu.sqrt());
            }
        }
    }
    (cone, low)
}

pub fn embedding_report(n: u32, m: f64, lattice_cap: u32) -> Result<EmbeddingReport> {
    if !(m > 1.0) || n == 0 || lattice_cap == 0 {
        return Err(invalid(format!("embedding report needs M > 1, n >= 1, cap >= 1 (M={m}, n={n}, cap={lattice_cap})")));
    }
    let (cone, low) = lattice_ranges(n, m, lattice_cap);
    let (cone_doubled, low_doubled) = lattice_ranges(n, m, 2 * lattice_cap);
    let diagonal_growth = std::iter::successors(Some(1u32), |l| Some(l * 2))
        .take_while(|&l| l <= lattice_cap)
        .map(|l| {
            let b = SpectralIndex::new(l, l);
            (l, (1.0 + b.lambda(n) as f64) / (1.0 + b.mu(n) as f64).sqrt())
        })
        .collect();
    Ok(EmbeddingReport { n, m, lattice_cap, cone, cone_doubled, low, low_doubled, diagonal_growth })
}
