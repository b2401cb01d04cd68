//! The `(ℓ,ℓ′)` lattice: joint eigenvalues, multiplicities and spectral
//! annuli.
//!
//! Annuli are half-open, `a/h² < λ ≤ b/h²`, everywhere in the crate.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Bidegree of a complex spherical harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpectralIndex {
    pub ell: u32,
    pub ellp: u32,
}

impl SpectralIndex {
    pub const fn new(ell: u32, ellp: u32) -> Self {
        Self { ell, ellp }
    }

    pub fn swapped(self) -> Self {
        Self { ell: self.ellp, ellp: self.ell }
    }

    /// Sublaplacian eigenvalue `2ℓℓ′ + n(ℓ+ℓ′)`.
    pub fn lambda(self, n: u32) -> u64 {
        let (l, lp, n) = (self.ell as u64, self.ellp as u64, n as u64);
        2 * l * lp + n * (l + lp)
    }

    /// Laplace–Beltrami eigenvalue `(ℓ+ℓ′)(ℓ+ℓ′+2n)`.
    pub fn mu(self, n: u32) -> u64 {
        let s = self.ell as u64 + self.ellp as u64;
        s * (s + 2 * n as u64)
    }

    /// `|ℓ′ − ℓ|`.
    pub fn beta(self) -> u32 {
        self.ell.abs_diff(self.ellp)
    }

    /// Strict cone predicate `ℓ/M < ℓ′ < Mℓ`.
    pub fn in_cone(self, m: f64) -> bool {
        let (l, lp) = (self.ell as f64, self.ellp as f64);
        l < m * lp && lp < m * l
    }
}

/// Spectral data attached to one bidegree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenData {
    pub lambda: u64,
    pub mu: u64,
    /// Dimension `d_{ℓ,ℓ′}` of the bidegree space.
    pub dim: u128,
    /// `ℓ + ℓ′ + n`.
    pub big_n: u64,
    pub beta: u32,
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc·(n−i) is divisible by (i+1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the space of bidegree `(ℓ,ℓ′)` harmonics on `S^{2n+1}`.
pub fn dimension(idx: SpectralIndex, n: u32) -> u128 {
    let (l, lp, n) = (idx.ell as u64, idx.ellp as u64, n as u64);
    if l == 0 || lp == 0 {
        return binomial_u128(l + lp + n, l + lp);
    }
    let num = n as u128 * (l + lp + n) as u128 * binomial_u128(l + n - 1, l - 1) * binomial_u128(lp + n - 1, lp - 1);
    num / (l as u128 * lp as u128)
}

pub fn eigen_data(idx: SpectralIndex, n: u32) -> EigenData {
    EigenData {
        lambda: idx.lambda(n),
        mu: idx.mu(n),
        dim: dimension(idx, n),
        big_n: idx.ell as u64 + idx.ellp as u64 + n as u64,
        beta: idx.beta(),
    }
}

/// Lattice region filter for annulus enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    All,
    /// `ℓ/M < ℓ′ < Mℓ`.
    Cone(f64),
    /// Complement of the cone.
    Edge(f64),
    /// `ℓ = ℓ′`, the integer support of `η₀(ℓ′−ℓ)`.
    Diag,
    /// `ℓ′ > ℓ`.
    Upper,
    /// `ℓ′ < ℓ`.
    Lower,
}

impl Region {
    pub fn contains(self, idx: SpectralIndex) -> bool {
        match self {
            Region::All => true,
            Region::Cone(m) => idx.in_cone(m),
            Region::Edge(m) => !idx.in_cone(m),
            Region::Diag => idx.ell == idx.ellp,
            Region::Upper => idx.ellp > idx.ell,
            Region::Lower => idx.ellp < idx.ell,
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            Region::Cone(m) | Region::Edge(m) if !(m > 1.0) => Err(invalid(format!("cone aperture M must exceed 1, got {m}"))),
            _ => Ok(()),
        }
    }
}

/// All bidegrees with `lo < λ ≤ hi` in lexicographic order.
pub(crate) fn enumerate_lambda_range(lo: f64, hi: f64, n: u32, region: Region) -> Vec<SpectralIndex> {
    let mut out = Vec::new();
    let mut ell = 0u32;
    while (n as f64) * ell as f64 <= hi {
        let mut ellp = 0u32;
        loop {
            let idx = SpectralIndex::new(ell, ellp);
            let lambda = idx.lambda(n) as f64;
            if lambda > hi {
                break;
            }
            if lambda > lo && region.contains(idx) {
                out.push(idx);
            }
            ellp += 1;
        }
        ell += 1;
    }
    out
}

/// Bidegrees with `a/h² < λ ≤ b/h²` satisfying `region`.
pub fn enumerate_annulus(a: f64, b: f64, h: f64, n: u32, region: Region) -> Result<Vec<SpectralIndex>> {
    if !(a > 0.0 && a < b) {
        return Err(invalid(format!("annulus needs 0 < a < b (a={a}, b={b})")));
    }
    if !(h > 0.0 && h <= 1.0) {
        return Err(invalid(format!("h={h} outside (0, 1]")));
    }
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    region.validate()?;
    let h2 = h * h;
    Ok(enumerate_lambda_range(a / h2, b / h2, n, region))
}

/// `Σ_{λ∈(a,b]} (ℓ+ℓ′)` and its ratio to `b(b−a+log(b+1))`.
pub fn hyperbolic_sum(a: f64, b: f64, n: u32) -> Result<(u64, f64)> {
    if !(a >= 1.0 && b > a) {
        return Err(invalid(format!("hyperbolic sum needs 1 <= a < b (a={a}, b={b})")));
    }
    let sum: u64 = enumerate_lambda_range(a, b, n, Region::All)
        .iter()
        .map(|idx| idx.ell as u64 + idx.ellp as u64)
        .sum();
    let ratio = sum as f64 / (b * (b - a + (b + 1.0).ln()));
    Ok((sum, ratio))
}
