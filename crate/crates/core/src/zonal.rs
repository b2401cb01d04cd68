//! Zonal harmonics `Z_{ℓ,ℓ′}(e^{iω} cos θ)` and pole-zonal spectral data.
//!
//! For `ℓ ≤ ℓ′`
//! `Z_{ℓ,ℓ′} = d/ω_{2n+1} · ℓ!(n−1)!/(ℓ+n−1)! · e^{iω(ℓ′−ℓ)} (cos θ)^{ℓ′−ℓ} P_ℓ^{(n−1,ℓ′−ℓ)}(cos 2θ)`,
//! and `Z_{ℓ′,ℓ} = conj(Z_{ℓ,ℓ′})`, so the phase is `e^{iω(ℓ′−ℓ)}` in every
//! case and the radial factor only depends on `min(ℓ,ℓ′)` and `|ℓ′−ℓ|`.

use crate::error::{invalid, Error, Result};
use crate::geometry::{surface_area, DiskGrid, DiskPoint};
use crate::specfun::{binomial_f64, damped_jacobi_sequence};
use crate::spectrum::{dimension, SpectralIndex};
use crate::sum::tree_sum_complex;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// `d_{ℓ,ℓ′}/ω · 1/C(ℓ_min+n−1, ℓ_min)`.
pub fn zonal_prefactor(idx: SpectralIndex, n: u32, area: f64) -> f64 {
    let lmin = idx.ell.min(idx.ellp) as u64;
    dimension(idx, n) as f64 / area / binomial_f64(lmin + n as u64 - 1, lmin)
}

/// Real radial factor of `Z_{ℓ,ℓ′}`; `zonal_eval = radial · e^{iω(ℓ′−ℓ)}`.
pub fn zonal_radial(idx: SpectralIndex, n: u32, theta: f64) -> f64 {
    let area = surface_area(n).expect("n >= 1");
    let lmin = idx.ell.min(idx.ellp);
    let seq = damped_jacobi_sequence(n as f64 - 1.0, idx.beta() as f64, theta, lmin);
    zonal_prefactor(idx, n, area) * seq[lmin as usize]
}

fn phase(idx: SpectralIndex, omega_angle: f64) -> Complex64 {
    let k = idx.ellp as f64 - idx.ell as f64;
    Complex64::from_polar(1.0, k * omega_angle)
}

pub fn zonal_eval(idx: SpectralIndex, n: u32, point: &DiskPoint) -> Complex64 {
    phase(idx, point.omega_angle) * zonal_radial(idx, n, point.theta)
}

/// `|Z_{ℓ,ℓ′}(point)| · ω / d_{ℓ,ℓ′}`, at most 1.
pub fn zonal_bound_ratio(idx: SpectralIndex, n: u32, point: &DiskPoint) -> f64 {
    let area = surface_area(n).expect("n >= 1");
    zonal_eval(idx, n, point).norm() * area / dimension(idx, n) as f64
}

/// Radial factors of several bidegrees at one `θ`, in the order given.
///
/// Bidegrees sharing `|ℓ′−ℓ|` share one Jacobi recurrence.
pub fn radial_values(blocks: &[SpectralIndex], n: u32, theta: f64) -> Vec<f64> {
    let area = surface_area(n).expect("n >= 1");
    let mut top: BTreeMap<u32, u32> = BTreeMap::new();
    for b in blocks {
        let e = top.entry(b.beta()).or_insert(0);
        *e = (*e).max(b.ell.min(b.ellp));
    }
    let alpha = n as f64 - 1.0;
    let seqs: BTreeMap<u32, Vec<f64>> = top
        .into_iter()
        .map(|(beta, lmax)| (beta, damped_jacobi_sequence(alpha, beta as f64, theta, lmax)))
        .collect();
    blocks
        .iter()
        .map(|b| zonal_prefactor(*b, n, area) * seqs[&b.beta()][b.ell.min(b.ellp) as usize])
        .collect()
}

/// Finitely supported `u = Σ c_{ℓ,ℓ′} Z_{ℓ,ℓ′}(⟨·,w₀⟩)` for a fixed pole `w₀`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZonalSpectralData {
    pub n: u32,
    pub coeffs: BTreeMap<SpectralIndex, Complex64>,
}

impl ZonalSpectralData {
    pub fn new(n: u32) -> Self {
        Self { n, coeffs: BTreeMap::new() }
    }

    pub fn single(n: u32, idx: SpectralIndex, c: Complex64) -> Self {
        let mut u = Self::new(n);
        u.coeffs.insert(idx, c);
        u
    }

    pub fn from_pairs<I: IntoIterator<Item = (SpectralIndex, Complex64)>>(n: u32, pairs: I) -> Self {
        let mut u = Self::new(n);
        for (idx, c) in pairs {
            *u.coeffs.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        u
    }

    pub fn get(&self, idx: SpectralIndex) -> Complex64 {
        self.coeffs.get(&idx).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn blocks(&self) -> Vec<SpectralIndex> {
        self.coeffs.keys().copied().collect()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c * s)).collect() }
    }

    /// Blockwise sum; both operands must live on the same sphere.
    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &c) in &other.coeffs {
            *out.coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        out
    }

    pub fn eval(&self, point: &DiskPoint) -> Complex64 {
        let blocks = self.blocks();
        let radial = radial_values(&blocks, self.n, point.theta);
        let terms: Vec<Complex64> = blocks
            .iter()
            .zip(&radial)
            .map(|(b, r)| self.coeffs[b] * phase(*b, point.omega_angle) * *r)
            .collect();
        tree_sum_complex(&terms)
    }

    /// Exact L² norm from `‖Z_{ℓ,ℓ′}‖₂² = d_{ℓ,ℓ′}/ω`.
    pub fn l2_norm(&self) -> f64 {
        let area = surface_area(self.n).expect("n >= 1");
        let terms: Vec<f64> =
            self.coeffs.iter().map(|(b, c)| c.norm_sqr() * dimension(*b, self.n) as f64 / area).collect();
        crate::sum::tree_sum(&terms).sqrt()
    }
}

/// Precomputed radial factors of a fixed block set on a grid, so that
/// evaluating many coefficient vectors over the same blocks is cheap.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    pub blocks: Vec<SpectralIndex>,
    /// Distinct `ℓ′−ℓ`, ascending.
    freqs: Vec<i64>,
    freq_of_block: Vec<usize>,
    /// `radial[i][b]` for θ index `i`.
    radial: Vec<Vec<f64>>,
    /// `twiddle[j][f] = e^{i ω_j freqs[f]}`.
    twiddle: Vec<Vec<Complex64>>,
    n_omega: usize,
}

impl Synthesizer {
    pub fn new(blocks: Vec<SpectralIndex>, n: u32, grid: &DiskGrid) -> Self {
        let mut freqs: Vec<i64> = blocks.iter().map(|b| b.ellp as i64 - b.ell as i64).collect();
        freqs.sort_unstable();
        freqs.dedup();
        let freq_of_block =
            blocks.iter().map(|b| freqs.binary_search(&(b.ellp as i64 - b.ell as i64)).unwrap()).collect();
        let radial = grid.thetas.par_iter().map(|&t| radial_values(&blocks, n, t)).collect();
        let twiddle = grid
            .omegas
            .iter()
            .map(|&w| freqs.iter().map(|&k| Complex64::from_polar(1.0, k as f64 * w)).collect())
            .collect();
        Self { blocks, freqs, freq_of_block, radial, twiddle, n_omega: grid.omegas.len() }
    }

    /// Values of `Σ c_b Z_b` on the grid, θ-major; `coeffs` follows `self.blocks`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), self.blocks.len());
        let per_theta: Vec<Vec<Complex64>> = self
            .radial
            .par_iter()
            .map(|radial| {
                let mut groups: Vec<Vec<Complex64>> = vec![Vec::new(); self.freqs.len()];
                for (b, (&c, &r)) in coeffs.iter().zip(radial).enumerate() {
                    groups[self.freq_of_block[b]].push(c * r);
                }
                let amps: Vec<Complex64> = groups.iter().map(|g| tree_sum_complex(g)).collect();
                let mut row = Vec::with_capacity(self.n_omega);
                let mut terms = vec![Complex64::new(0.0, 0.0); amps.len()];
                for tw in &self.twiddle {
                    for (f, t) in terms.iter_mut().enumerate() {
                        *t = amps[f] * tw[f];
                    }
                    row.push(tree_sum_complex(&terms));
                }
                row
            })
            .collect();
        per_theta.into_iter().flatten().collect()
    }
}

/// Evaluate `u` on every node of `grid` (θ-major).
pub fn synthesize(u: &ZonalSpectralData, grid: &DiskGrid) -> Vec<Complex64> {
    let synth = Synthesizer::new(u.blocks(), u.n, grid);
    let coeffs: Vec<Complex64> = synth.blocks.iter().map(|b| u.coeffs[b]).collect();
    synth.synthesize(&coeffs)
}

/// Coefficient `c_{ℓ,ℓ′}` of grid samples: `ω/d · Σ w u conj(Z)`.
pub fn project_samples(samples: &[Complex64], grid: &DiskGrid, idx: SpectralIndex) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(invalid(format!("expected {} samples, got {}", grid.len(), samples.len())));
    }
    let n = grid.n;
    let area = surface_area(n)?;
    let basis = synthesize(&ZonalSpectralData::single(n, idx, Complex64::new(1.0, 0.0)), grid);
    let products: Vec<Complex64> = samples.iter().zip(&basis).map(|(u, z)| u * z.conj()).collect();
    let inner = grid.integrate_samples(&products)?;
    Ok(inner * (area / dimension(idx, n) as f64))
}

/// Project a pole-zonal function given pointwise, checking that the grid and
/// its refinement agree to 1e−6.
pub fn project<F>(u: F, idx: SpectralIndex, n: u32, n_theta: usize, n_omega: usize) -> Result<Complex64>
where
    F: Fn(&DiskPoint) -> Complex64 + Sync,
{
    let run = |nt: usize, no: usize| -> Result<Complex64> {
        let grid = DiskGrid::new(n, nt, no)?;
        let samples: Vec<Complex64> = grid.points().par_iter().map(&u).collect();
        project_samples(&samples, &grid, idx)
    };
    let coarse = run(n_theta, n_omega)?;
    let fine = run(2 * n_theta, 2 * n_omega)?;
    if (coarse - fine).norm() > 1e-6 * fine.norm().max(1.0) {
        return Err(Error::Unresolved(format!(
            "projection onto ({},{}) changed from {coarse} to {fine} under grid refinement",
            idx.ell, idx.ellp
        )));
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn idx(l: u32, lp: u32) -> SpectralIndex {
        SpectralIndex::new(l, lp)
    }

    #[test]
    fn holomorphic_block_closed_form() {
        let z = zonal_eval(idx(2, 0), 1, &DiskPoint::at(0.0, 0.0));
        assert!((z.re - 3.0 / (2.0 * PI * PI)).abs() < 1e-14 && z.im.abs() < 1e-15);
        // Z_{ℓ,0}(ζ) = C(ℓ+n,ℓ)/ω · conj(ζ)^ℓ
        let p = DiskPoint::at(0.7, 0.4);
        let want = p.inner().conj().powu(3) * (binomial_f64(5, 3) / surface_area(2).unwrap());
        assert!((zonal_eval(idx(3, 0), 2, &p) - want).norm() < 1e-14);
    }

    #[test]
    fn vanishes_on_equator_when_off_diagonal() {
        let p = DiskPoint::at(0.3, PI / 2.0);
        assert!(zonal_eval(idx(2, 5), 1, &p).norm() < 1e-12);
        assert!(zonal_bound_ratio(idx(2, 5), 1, &p) < 1e-12);
    }

    #[test]
    fn pole_value_is_dimension_over_area() {
        for n in 1..=3 {
            for l in 0..12 {
                for lp in 0..12 {
                    let b = idx(l, lp);
                    let z = zonal_eval(b, n, &DiskPoint::at(0.0, 0.0));
                    let want = dimension(b, n) as f64 / surface_area(n).unwrap();
                    assert!((z.re - want).abs() < 1e-12 * want && z.im.abs() < 1e-12 * want);
                    assert!((zonal_bound_ratio(b, n, &DiskPoint::at(0.0, 0.0)) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn swap_is_conjugation() {
        for &(l, lp) in &[(1, 4), (3, 7), (0, 5), (6, 6)] {
            for &(w, t) in &[(0.3, 0.2), (2.0, 1.1), (5.0, 0.01)] {
                let p = DiskPoint::at(w, t);
                let a = zonal_eval(idx(l, lp), 2, &p);
                let b = zonal_eval(idx(lp, l), 2, &p);
                assert!((a - b.conj()).norm() < 1e-13);
                let mirrored = zonal_eval(idx(lp, l), 2, &DiskPoint::at(-w, t));
                assert!((a - mirrored).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn bound_holds_on_a_grid() {
        for n in 1..=2 {
            for l in (0..=30).step_by(3) {
                for lp in (0..=30).step_by(4) {
                    for i in 0..40 {
                        let p = DiskPoint::at(0.1 * i as f64, PI / 2.0 * i as f64 / 39.0);
                        assert!(zonal_bound_ratio(idx(l, lp), n, &p) <= 1.0 + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn reproducing_identity_and_orthogonality() {
        let grid = DiskGrid::new(1, 64, 32).unwrap();
        let z11 = synthesize(&ZonalSpectralData::single(1, idx(1, 1), Complex64::new(1.0, 0.0)), &grid);
        let norm: Vec<Complex64> = z11.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
        let total = grid.integrate_samples(&norm).unwrap().re;
        let want = 3.0 / surface_area(1).unwrap();
        assert!((total - want).abs() / want < 1e-12);
        let z10 = synthesize(&ZonalSpectralData::single(1, idx(1, 0), Complex64::new(1.0, 0.0)), &grid);
        let z20 = synthesize(&ZonalSpectralData::single(1, idx(2, 0), Complex64::new(1.0, 0.0)), &grid);
        let cross: Vec<Complex64> = z10.iter().zip(&z20).map(|(a, b)| a * b.conj()).collect();
        assert!(grid.integrate_samples(&cross).unwrap().norm() < 1e-12);
    }

    #[test]
    fn synthesis_matches_pointwise_evaluation() {
        let u = ZonalSpectralData::from_pairs(
            2,
            [(idx(3, 1), Complex64::new(2.0, 0.0)), (idx(1, 3), Complex64::new(0.0, 1.0)), (idx(4, 4), Complex64::new(-0.5, 0.25))],
        );
        let grid = DiskGrid::new(2, 9, 7).unwrap();
        let values = synthesize(&u, &grid);
        for (p, v) in grid.points().iter().zip(&values) {
            assert!((u.eval(p) - v).norm() < 1e-12);
        }
    }

    #[test]
    fn projection_recovers_coefficients() {
        let n = 1;
        let u = ZonalSpectralData::from_pairs(n, [(idx(3, 1), Complex64::new(2.0, 0.0)), (idx(1, 3), Complex64::new(0.0, 1.0))]);
        let c31 = project(|p| u.eval(p), idx(3, 1), n, 32, 16).unwrap();
        let c13 = project(|p| u.eval(p), idx(1, 3), n, 32, 16).unwrap();
        let c22 = project(|p| u.eval(p), idx(2, 2), n, 32, 16).unwrap();
        assert!((c31 - Complex64::new(2.0, 0.0)).norm() < 1e-8);
        assert!((c13 - Complex64::new(0.0, 1.0)).norm() < 1e-8);
        assert!(c22.norm() < 1e-8);
        let one = project(|_| Complex64::new(1.0, 0.0), idx(0, 0), n, 16, 8).unwrap();
        assert!((one.re - surface_area(1).unwrap()).abs() < 1e-10);
        let z11 = project(|p| zonal_eval(idx(1, 1), n, p), idx(1, 1), n, 16, 8).unwrap();
        assert!((z11 - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn projection_flags_unresolved_input() {
        // degree far beyond what a 4-node radial rule can integrate
        let res = project(|p| zonal_eval(idx(40, 40), 1, p), idx(0, 0), 1, 4, 4);
        assert!(matches!(res, Err(Error::Unresolved(_))));
    }
}
