//! Smooth cutoff profiles.
//!
//! Every profile is built from the C^∞ transition
//! `S(x) = g(x)/(g(x)+g(1−x))`, `g(x) = exp(−1/x)·[x>0]`.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

fn g(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = g(x);
        a / (a + g(1.0 - x))
    }
}

/// 1 for `x ≤ start`, 0 for `x ≥ end`.
fn falling(start: f64, end: f64, x: f64) -> f64 {
    smooth_step((end - x) / (end - start))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffKind {
    Window,
    Cone,
    Eta0,
    EtaPlus,
    EtaMinus,
    Chi1,
    Chi2,
    LpLow,
    LpBand,
    /// Generic bump from [`make_bump`].
    Bump,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// Support `[a,b]`, plateau `[a2,b2]`.
    Bump { a: f64, a2: f64, b2: f64, b: f64 },
    /// 1 up to `start`, 0 from `end`.
    Falling { start: f64, end: f64 },
    /// `1 − Falling`.
    Rising { start: f64, end: f64 },
    /// `(1 − bump(ξ))·[sign·ξ > 0]`.
    OneSided { inner: (f64, f64, f64, f64), positive: bool },
    /// `Falling(start·4, end·4) − Falling(start, end)` evaluated at `x·scale`.
    Band { start: f64, end: f64, scale: f64 },
}

/// A smooth profile with values in `[0,1]` and declared support/plateau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    pub kind: CutoffKind,
    shape: Shape,
}

impl CutoffProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match self.shape {
            Shape::Bump { a, a2, b2, b } => bump_eval(a, a2, b2, b, x),
            Shape::Falling { start, end } => falling(start, end, x),
            Shape::Rising { start, end } => smooth_step((x - start) / (end - start)),
            Shape::OneSided { inner: (a, a2, b2, b), positive } => {
                let side = if positive { x > 0.0 } else { x < 0.0 };
                if side {
                    bump_complement(a, a2, b2, b, x)
                } else {
                    0.0
                }
            }
            Shape::Band { start, end, scale } => {
                let y = x * scale;
                falling(4.0 * start, 4.0 * end, y) - falling(start, end, y)
            }
        }
    }

    /// Closed interval outside of which the profile vanishes (may be unbounded).
    pub fn support(&self) -> (f64, f64) {
        match self.shape {
            Shape::Bump { a, b, .. } => (a, b),
            Shape::Falling { end, .. } => (f64::NEG_INFINITY, end),
            Shape::Rising { start, .. } => (start, f64::INFINITY),
            Shape::OneSided { inner: (_, a2, b2, _), positive } => {
                if positive {
                    (b2, f64::INFINITY)
                } else {
                    (f64::NEG_INFINITY, a2)
                }
            }
            Shape::Band { start, end, scale } => (start / scale, 4.0 * end / scale),
        }
    }

    /// Interval on which the profile equals 1 (may be degenerate).
    pub fn plateau(&self) -> (f64, f64) {
        match self.shape {
            Shape::Bump { a2, b2, .. } => (a2, b2),
            Shape::Falling { start, .. } => (f64::NEG_INFINITY, start),
            Shape::Rising { end, .. } => (end, f64::INFINITY),
            Shape::OneSided { inner: (a, _, _, b), positive } => {
                if positive {
                    (b, f64::INFINITY)
                } else {
                    (f64::NEG_INFINITY, a)
                }
            }
            Shape::Band { start, scale, .. } => (4.0 * start / scale, 4.0 * start / scale),
        }
    }

    pub fn with_kind(mut self, kind: CutoffKind) -> Self {
        self.kind = kind;
        self
    }
}

fn bump_eval(a: f64, a2: f64, b2: f64, b: f64, x: f64) -> f64 {
    if x <= a || x >= b {
        0.0
    } else if x < a2 {
        smooth_step((x - a) / (a2 - a))
    } else if x <= b2 {
        1.0
    } else {
        smooth_step((b - x) / (b - b2))
    }
}

/// `1 − bump`, using `1 − S(y) = S(1 − y)` to keep full relative precision
/// near the support edges.
fn bump_complement(a: f64, a2: f64, b2: f64, b: f64, x: f64) -> f64 {
    if x <= a || x >= b {
        1.0
    } else if x < a2 {
        smooth_step((a2 - x) / (a2 - a))
    } else if x <= b2 {
        0.0
    } else {
        smooth_step((x - b2) / (b - b2))
    }
}

/// C^∞ bump with `support = [a,b]` and `plateau = [a′,b′]`, `a < a′ < b′ < b`.
pub fn make_bump(support: (f64, f64), plateau: (f64, f64)) -> Result<CutoffProfile> {
    let (a, b) = support;
    let (a2, b2) = plateau;
    if !(a < a2 && a2 < b2 && b2 < b) || ![a, a2, b2, b].iter().all(|v| v.is_finite()) {
        return Err(invalid(format!("bump needs a < a' < b' < b, got support [{a},{b}] plateau [{a2},{b2}]")));
    }
    Ok(CutoffProfile { kind: CutoffKind::Bump, shape: Shape::Bump { a, a2, b2, b } })
}

/// Spectral window `φ`, defaults: support `[1,4]`, plateau `[1.5,3]`.
pub fn window(support: (f64, f64), plateau: (f64, f64)) -> Result<CutoffProfile> {
    Ok(make_bump(support, plateau)?.with_kind(CutoffKind::Window))
}

/// Cone profile `ψ` on `ℓ′/ℓ`: support `[1/M, M]`, plateau `[2/M, M/2]`.
pub fn cone_profile(m: f64) -> Result<CutoffProfile> {
    if !(m > 2.0) {
        return Err(invalid(format!("cone profile needs M > 2 for a nonempty plateau, got {m}")));
    }
    Ok(make_bump((1.0 / m, m), (2.0 / m, m / 2.0))?.with_kind(CutoffKind::Cone))
}

/// The `θ/tN` window `Ψ` with support `[1/M₁, M₁]`.
pub fn theta_window(m1: f64) -> Result<CutoffProfile> {
    if !(m1 > 2.0) {
        return Err(invalid(format!("window needs M1 > 2, got {m1}")));
    }
    make_bump((1.0 / m1, m1), (2.0 / m1, m1 / 2.0))
}

const ETA_INNER: (f64, f64, f64, f64) = (-0.5, -0.25, 0.25, 0.5);

/// `(η₀, η₊, η₋)`: η₀ is even, 1 on `|ξ| ≤ ¼`, 0 on `|ξ| ≥ ½`, and
/// `η± = (1 − η₀)·[±ξ > 0]`, so the three sum to 1.
pub fn eta_family() -> (CutoffProfile, CutoffProfile, CutoffProfile) {
    let (a, a2, b2, b) = ETA_INNER;
    let eta0 = CutoffProfile { kind: CutoffKind::Eta0, shape: Shape::Bump { a, a2, b2, b } };
    let plus = CutoffProfile { kind: CutoffKind::EtaPlus, shape: Shape::OneSided { inner: ETA_INNER, positive: true } };
    let minus = CutoffProfile { kind: CutoffKind::EtaMinus, shape: Shape::OneSided { inner: ETA_INNER, positive: false } };
    (eta0, plus, minus)
}

/// `(χ₁, χ₂)`: χ₁ = 1 on `[0,1]`, 0 on `[2,∞)`; χ₂ = 1 − χ₁.
pub fn chi_pair() -> (CutoffProfile, CutoffProfile) {
    (
        CutoffProfile { kind: CutoffKind::Chi1, shape: Shape::Falling { start: 1.0, end: 2.0 } },
        CutoffProfile { kind: CutoffKind::Chi2, shape: Shape::Rising { start: 1.0, end: 2.0 } },
    )
}

/// Dyadic Littlewood–Paley partition in the eigenvalue variable.
///
/// With `Φ` falling from 1 at `λ = 1` to 0 at `λ = 4`, the low-pass piece is
/// `ψ̃(λ) = Φ(λ/4)` and the band profile is `ψ(λ) = Φ(λ/4) − Φ(λ)`; the
/// pieces `ψ(2^{−2j}λ)`, `j = 1..J`, telescope so that
/// `ψ̃ + Σ_j ψ(2^{−2j}·) = Φ(λ/4^{J+1})`, which is 1 on `[0, 4^{J+1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpPartition {
    pub low: CutoffProfile,
    pub bands: Vec<CutoffProfile>,
}

impl LpPartition {
    pub fn new(levels: u32) -> Result<Self> {
        if levels == 0 {
            return Err(invalid("Littlewood-Paley partition needs J >= 1"));
        }
        let low = CutoffProfile { kind: CutoffKind::LpLow, shape: Shape::Falling { start: 4.0, end: 16.0 } };
        let bands = (1..=levels)
            .map(|j| CutoffProfile {
                kind: CutoffKind::LpBand,
                shape: Shape::Band { start: 1.0, end: 4.0, scale: 4f64.powi(-(j as i32)) },
            })
            .collect();
        Ok(Self { low, bands })
    }

    pub fn levels(&self) -> u32 {
        self.bands.len() as u32
    }

    /// Upper end of the interval on which the pieces sum to exactly 1.
    pub fn exact_up_to(&self) -> f64 {
        4f64.powi(self.levels() as i32 + 1)
    }

    /// `ψ̃(λ) + Σ_j ψ_j(λ)`.
    pub fn total(&self, lambda: f64) -> f64 {
        self.low.eval(lambda) + self.bands.iter().map(|b| b.eval(lambda)).sum::<f64>()
    }
}

pub fn lp_partition(levels: u32) -> Result<LpPartition> {
    LpPartition::new(levels)
}

/// The configurable set of cutoffs used by kernels and norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffParams {
    pub phi_a: f64,
    pub phi_b: f64,
    pub phi_a2: f64,
    pub phi_b2: f64,
    pub cone_m: f64,
    pub window_m1: f64,
    pub lp_j: u32,
}

impl Default for CutoffParams {
    fn default() -> Self {
        // M₁ = 2(1+M)+1 is the smallest integer above 2(1+M)
        Self { phi_a: 1.0, phi_b: 4.0, phi_a2: 1.5, phi_b2: 3.0, cone_m: 4.0, window_m1: 11.0, lp_j: 10 }
    }
}

/// Materialised profiles for a [`CutoffParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cutoffs {
    pub params: CutoffParams,
    pub phi: CutoffProfile,
    pub cone: CutoffProfile,
    pub eta0: CutoffProfile,
    pub eta_plus: CutoffProfile,
    pub eta_minus: CutoffProfile,
}

impl Cutoffs {
    pub fn new(params: CutoffParams) -> Result<Self> {
        let phi = window((params.phi_a, params.phi_b), (params.phi_a2, params.phi_b2))?;
        if !(params.phi_a > 0.0) {
            return Err(invalid("spectral window must be supported away from 0"));
        }
        let cone = cone_profile(params.cone_m)?;
        let (eta0, eta_plus, eta_minus) = eta_family();
        Ok(Self { params, phi, cone, eta0, eta_plus, eta_minus })
    }
}

impl Default for Cutoffs {
    fn default() -> Self {
        Self::new(CutoffParams::default()).expect("default cutoffs are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_basics() {
        let p = make_bump((1.0, 4.0), (1.5, 3.0)).unwrap();
        assert_eq!(p.eval(1.0), 0.0);
        assert_eq!(p.eval(2.25), 1.0);
        assert_eq!(p.eval(4.0), 0.0);
        assert_eq!(p.support(), (1.0, 4.0));
        assert!(make_bump((1.0, 4.0), (3.0, 2.0)).is_err());
        assert!(make_bump((1.0, 4.0), (0.5, 3.0)).is_err());
    }

    #[test]
    fn bump_monotone_on_transitions() {
        let p = make_bump((1.0, 4.0), (1.5, 3.0)).unwrap();
        let rise: Vec<f64> = (0..=100).map(|i| p.eval(1.0 + 0.005 * i as f64)).collect();
        assert!(rise.windows(2).all(|w| w[1] >= w[0]));
        let fall: Vec<f64> = (0..=100).map(|i| p.eval(3.0 + 0.01 * i as f64)).collect();
        assert!(fall.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn bump_is_flat_at_support_edges() {
        // central differences of order 1..4 at the edges vanish to 1e-6
        let p = make_bump((1.0, 4.0), (1.5, 3.0)).unwrap();
        let step = 5e-3;
        for &edge in &[1.0, 4.0] {
            let f = |k: i32| p.eval(edge + k as f64 * step);
            let d1 = (f(1) - f(-1)) / (2.0 * step);
            let d2 = (f(1) - 2.0 * f(0) + f(-1)) / step.powi(2);
            let d3 = (f(2) - 2.0 * f(1) + 2.0 * f(-1) - f(-2)) / (2.0 * step.powi(3));
            let d4 = (f(2) - 4.0 * f(1) + 6.0 * f(0) - 4.0 * f(-1) + f(-2)) / step.powi(4);
            for d in [d1, d2, d3, d4] {
                assert!(d.abs() < 1e-6, "edge {edge}: {d}");
            }
        }
    }

    #[test]
    fn finite_differences_shrink_with_step() {
        // k-th differences of a smooth profile scale like step^k
        let p = make_bump((1.0, 4.0), (1.5, 3.0)).unwrap();
        let diff = |k: usize, step: f64, x: f64| -> f64 {
            let mut acc = 0.0;
            let mut binom = 1.0;
            for i in 0..=k {
                let sign = if (k - i).is_multiple_of(2) { 1.0 } else { -1.0 };
                acc += sign * binom * p.eval(x + i as f64 * step);
                binom = binom * (k - i) as f64 / (i + 1) as f64;
            }
            acc
        };
        for k in 1..=6 {
            let coarse = (0..200).map(|i| diff(k, 1e-2, 0.9 + 0.016 * i as f64).abs()).fold(0.0, f64::max);
            let fine = (0..200).map(|i| diff(k, 5e-3, 0.9 + 0.016 * i as f64).abs()).fold(0.0, f64::max);
            assert!(fine <= coarse, "k={k}: {fine} vs {coarse}");
        }
    }

    #[test]
    fn eta_family_examples() {
        let (e0, ep, em) = eta_family();
        assert_eq!((e0.eval(0.0), ep.eval(0.0), em.eval(0.0)), (1.0, 0.0, 0.0));
        assert_eq!((e0.eval(3.0), ep.eval(3.0), em.eval(3.0)), (0.0, 1.0, 0.0));
        assert_eq!((e0.eval(-3.0), ep.eval(-3.0), em.eval(-3.0)), (0.0, 0.0, 1.0));
        let mut state = 99u64;
        for _ in 0..10_000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let xi = ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 4.0;
            let total = e0.eval(xi) + ep.eval(xi) + em.eval(xi);
            assert!((total - 1.0).abs() < 1e-14);
            assert_eq!(e0.eval(xi), e0.eval(-xi));
        }
    }

    #[test]
    fn chi_pair_sums_to_one() {
        let (c1, c2) = chi_pair();
        for i in 0..1000 {
            let x = 0.004 * i as f64;
            assert!((c1.eval(x) + c2.eval(x) - 1.0).abs() < 1e-15);
        }
        assert_eq!(c1.eval(0.5), 1.0);
        assert_eq!(c1.eval(2.0), 0.0);
    }

    #[test]
    fn ranges_and_tight_supports() {
        let cut = Cutoffs::default();
        let (c1, c2) = chi_pair();
        let profiles = [cut.phi, cut.cone, cut.eta0, cut.eta_plus, cut.eta_minus, c1, c2, theta_window(11.0).unwrap()];
        for p in profiles {
            for i in 0..4000 {
                let x = -20.0 + 0.01 * i as f64;
                let v = p.eval(x);
                assert!((0.0..=1.0).contains(&v));
                let (lo, hi) = p.support();
                if x < lo || x > hi {
                    assert_eq!(v, 0.0, "{:?} at {x}", p.kind);
                }
                let (plo, phi) = p.plateau();
                if x >= plo && x <= phi {
                    assert_eq!(v, 1.0, "{:?} at {x}", p.kind);
                }
            }
            // exp(-1/x) underflows below x ≈ 1/744, so the probe offset is
            // 2e-3 of the transition width rather than an absolute 1e-3
            let (lo, hi) = p.support();
            let (plo, phi) = p.plateau();
            if lo.is_finite() {
                let width = if plo.is_finite() { plo - lo } else { 1.0 };
                assert!(p.eval(lo + 2e-3 * width) > 0.0, "{:?}", p.kind);
            }
            if hi.is_finite() {
                let width = if phi.is_finite() { hi - phi } else { 1.0 };
                assert!(p.eval(hi - 2e-3 * width) > 0.0, "{:?}", p.kind);
            }
        }
        assert_eq!(cut.cone.support(), (0.25, 4.0));
        assert_eq!(cut.cone.plateau(), (0.5, 2.0));
    }

    #[test]
    fn lp_partition_examples() {
        let lp = lp_partition(10).unwrap();
        assert_eq!(lp.low.eval(0.0), 1.0);
        assert!(lp.bands.iter().all(|b| b.eval(0.0) == 0.0));
        let top = 2f64.powi(19);
        for i in 0..10_000 {
            let lambda = if i == 0 { 0.0 } else { top.powf(i as f64 / 9_999.0) };
            assert!((lp.total(lambda) - 1.0).abs() <= 1e-12);
            let touched = lp.bands.iter().filter(|b| b.eval(lambda) > 0.0).count();
            assert!(touched <= 2, "lambda={lambda} touched {touched}");
        }
        assert!(lp_partition(0).is_err());
        assert!(lp.exact_up_to() >= top);
    }
}
