//! Two numerical demonstrators: the Jacobi-to-Bessel (Fitouhi–Hamza)
//! expansion at order zero, and the Poisson-summation bound for oscillatory
//! lattice sums `Σ e^{2πiμk} φ(εk) σ(k)`.

use crate::cutoffs::CutoffProfile;
use crate::error::{invalid, Result};
use crate::kernel::loglog_slope;
use crate::specfun::{bessel_j, damped_jacobi, gamma_ratio};
use crate::sum::tree_sum_complex;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Upper end of the θ-range on which the expansion is uniform.
pub const FH_THETA_LIMIT: f64 = FRAC_PI_2 - 0.05;

/// `(sin θ)^{α+½} (cos θ)^{β+½} P_ℓ^{(α,β)}(cos 2θ)`.
pub fn fh_lhs(ell: u32, alpha: u32, beta: u32, theta: f64) -> f64 {
    let (a, b) = (alpha as f64, beta as f64);
    theta.sin().powf(a + 0.5) * theta.cos().sqrt() * damped_jacobi(ell, a, b, theta)
}

/// `N = 2ℓ + α + β + 1`.
pub fn fh_big_n(ell: u32, alpha: u32, beta: u32) -> u64 {
    2 * ell as u64 + alpha as u64 + beta as u64 + 1
}

/// `Γ(ℓ+α+1)/ℓ! · θ^{½} · J_α(Nθ) / (N/2)^α`.
pub fn fh_leading(ell: u32, alpha: u32, beta: u32, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let big_n = fh_big_n(ell, alpha, beta) as f64;
    let pref = gamma_ratio(ell as u64, alpha as u64)?;
    Ok(pref * theta.sqrt() * bessel_j(alpha, big_n * theta)? / (big_n / 2.0).powi(alpha as i32))
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=FH_THETA_LIMIT).contains(&theta) {
        return Err(invalid(format!("theta={theta} outside [0, pi/2 - 0.05]")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FHCheckResult {
    pub ell: u32,
    pub alpha: u32,
    pub beta: u32,
    pub big_n: u64,
    #[serde(skip)]
    pub theta_grid: Vec<f64>,
    /// `sup_θ |LHS − leading| / (Γ-prefactor · θ^{3/2})`.
    pub remainder_sup: f64,
    /// `remainder_sup · N^{α+3/2}`.
    pub scaled_remainder_sup: f64,
    pub argmax_theta: f64,
}

/// θ-grid for the remainder check: uniform on `[theta_min, theta_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhGrid {
    pub theta_min: f64,
    pub theta_max: f64,
    pub points: usize,
}

impl FhGrid {
    pub fn new(theta_min: f64, theta_max: f64, points: usize) -> Result<Self> {
        if !(theta_min > 0.0 && theta_min < theta_max) || points < 2 {
            return Err(invalid(format!("bad theta grid [{theta_min}, {theta_max}] with {points} points")));
        }
        check_theta(theta_max)?;
        Ok(Self { theta_min, theta_max, points })
    }

    pub fn thetas(&self) -> Vec<f64> {
        let step = (self.theta_max - self.theta_min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.theta_min + step * i as f64).collect()
    }
}

impl Default for FhGrid {
    fn default() -> Self {
        Self { theta_min: 0.01, theta_max: 1.2, points: 4000 }
    }
}

pub fn fh_check_one(ell: u32, alpha: u32, beta: u32, grid: FhGrid) -> Result<FHCheckResult> {
    let pref = gamma_ratio(ell as u64, alpha as u64)?;
    let big_n = fh_big_n(ell, alpha, beta);
    let thetas = grid.thetas();
    let (mut best, mut arg) = (0.0f64, grid.theta_min);
    for &theta in &thetas {
        let r = (fh_lhs(ell, alpha, beta, theta) - fh_leading(ell, alpha, beta, theta)?).abs() / (pref * theta.powf(1.5));
        if r > best {
            best = r;
            arg = theta;
        }
    }
    Ok(FHCheckResult {
        ell,
        alpha,
        beta,
        big_n,
        theta_grid: thetas,
        remainder_sup: best,
        scaled_remainder_sup: best * (big_n as f64).powf(alpha as f64 + 1.5),
        argmax_theta: arg,
    })
}

/// Scaled order-zero remainder for each degree in `ells`, on `θ ∈ [0.01, theta_max]`.
pub fn fh_remainder_check(alpha: u32, beta: u32, theta_max: f64, ells: &[u32]) -> Result<Vec<FHCheckResult>> {
    let grid = FhGrid { theta_max, ..FhGrid::default() };
    fh_remainder_sweep(alpha, beta, grid, ells)
}

pub fn fh_remainder_sweep(alpha: u32, beta: u32, grid: FhGrid, ells: &[u32]) -> Result<Vec<FHCheckResult>> {
    let grid = FhGrid::new(grid.theta_min, grid.theta_max, grid.points)?;
    ells.par_iter().map(|&ell| fh_check_one(ell, alpha, beta, grid)).collect()
}

/// Log-log slope of the unscaled remainder against `N`.
pub fn fh_residual_slope(results: &[FHCheckResult]) -> f64 {
    let ns: Vec<f64> = results.iter().map(|r| r.big_n as f64).collect();
    let rs: Vec<f64> = results.iter().map(|r| r.remainder_sup).collect();
    loglog_slope(&ns, &rs)
}

/// Symbols `σ(k)` for the oscillatory sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symbol {
    /// `σ ≡ 1`.
    One,
    /// `σ(k) = k (1+k²)^{-½}`.
    S0,
}

impl Symbol {
    pub fn eval(self, k: i64) -> Complex64 {
        match self {
            Symbol::One => Complex64::new(1.0, 0.0),
            Symbol::S0 => {
                let k = k as f64;
                Complex64::new(k / (1.0 + k * k).sqrt(), 0.0)
            }
        }
    }
}

/// Distance from `x` to the nearest integer.
pub fn dist_to_integers(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// `Σ_k e^{2πiμk} φ(εk) σ(k)` over the finite support of `φ(ε·)`.
///
/// `k_max` caps the number of terms.
pub fn oscillatory_sum<S>(mu: f64, epsilon: f64, profile: &CutoffProfile, symbol: S, k_max: u64) -> Result<Complex64>
where
    S: Fn(i64) -> Complex64,
{
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(invalid(format!("epsilon={epsilon} outside (0, 1]")));
    }
    let (a, b) = profile.support();
    if !(a > 0.0 && b.is_finite()) {
        return Err(invalid(format!("profile support [{a}, {b}] must lie in (0, inf)")));
    }
    let lo = (a / epsilon).ceil() as i64;
    let hi = (b / epsilon).floor() as i64;
    if hi >= lo && (hi - lo) as u64 + 1 > k_max {
        return Err(invalid(format!("{} terms exceed k_max={k_max}", hi - lo + 1)));
    }
    let frac = mu - mu.round();
    let terms: Vec<Complex64> = (lo..=hi)
        .map(|k| {
            let turns = frac * k as f64;
            let phase = 2.0 * PI * (turns - turns.round());
            Complex64::from_polar(profile.eval(epsilon * k as f64), phase) * symbol(k)
        })
        .collect();
    Ok(tree_sum_complex(&terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscSumResult {
    pub mu: f64,
    pub delta: f64,
    pub epsilon: f64,
    #[serde(rename = "L")]
    pub l: u32,
    pub sum_abs: f64,
    /// `max(ε^{L−1}/δ^L, 1)`.
    pub bound: f64,
    pub ratio: f64,
}

pub const DEFAULT_K_MAX: u64 = 100_000_000;

pub fn osc_result(mu: f64, epsilon: f64, l: u32, profile: &CutoffProfile, symbol: Symbol) -> Result<OscSumResult> {
    let delta = dist_to_integers(mu);
    if delta == 0.0 {
        return Err(invalid(format!("mu={mu} is an integer")));
    }
    let sum_abs = oscillatory_sum(mu, epsilon, profile, |k| symbol.eval(k), DEFAULT_K_MAX)?.norm();
    let bound = (epsilon.powi(l as i32 - 1) / delta.powi(l as i32)).max(1.0);
    Ok(OscSumResult { mu, delta, epsilon, l, sum_abs, bound, ratio: sum_abs / bound })
}

/// Sweep over `μ ∈ mu_list` and `ε = δ(μ)/d` for `d ∈ divisors`.
/// Pairs with `ε > δ` (divisor below 1) are skipped with a warning.
pub fn poisson_bound_sweep(
    mu_list: &[f64],
    divisors: &[f64],
    l: u32,
    profile: &CutoffProfile,
    symbol: Symbol,
) -> Result<Vec<OscSumResult>> {
    let mut pairs = Vec::new();
    for &mu in mu_list {
        let delta = dist_to_integers(mu);
        for &d in divisors {
            let eps = delta / d;
            if !(d >= 1.0) || eps > delta {
                log::warn!("skipping mu={mu}, epsilon=delta/{d}: needs epsilon <= delta");
                continue;
            }
            pairs.push((mu, eps));
        }
    }
    pairs.par_iter().map(|&(mu, eps)| osc_result(mu, eps, l, profile, symbol)).collect()
}

pub fn max_ratio(results: &[OscSumResult]) -> f64 {
    results.iter().map(|r| r.ratio).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoffs::Cutoffs;
    use crate::specfun::{jacobi_p, JacobiParams};

    fn phi() -> CutoffProfile {
        Cutoffs::default().phi
    }

    #[test]
    fn leading_vanishes_at_the_pole() {
        for alpha in 0..3 {
            assert_eq!(fh_leading(10, alpha, 2, 0.0).unwrap(), 0.0);
        }
        assert!(fh_leading(10, 0, 0, 1.6).is_err());
    }

    #[test]
    fn lhs_matches_direct_jacobi() {
        for &(l, a, b, th) in &[(7u32, 1u32, 3u32, 0.4f64), (20, 0, 5, 1.0), (3, 2, 0, 0.05)] {
            let p = jacobi_p(JacobiParams::new(l, a as f64, b as f64).unwrap(), (2.0 * th).cos()).unwrap();
            let want = th.sin().powf(a as f64 + 0.5) * th.cos().powf(b as f64 + 0.5) * p;
            assert!((fh_lhs(l, a, b, th) - want).abs() < 1e-12 * want.abs().max(1e-300));
        }
    }

    #[test]
    fn degree_zero_taylor_agreement() {
        // (sinθ cosθ)^{1/2} − θ^{1/2} J₀(θ) = O(θ^{5/2})
        for &th in &[0.1, 0.05, 0.025] {
            let diff = (fh_lhs(0, 0, 0, th) - fh_leading(0, 0, 0, th).unwrap()).abs();
            assert!(diff < th.powf(2.5), "{th} {diff}");
        }
        let d1 = (fh_lhs(0, 0, 0, 0.04) - fh_leading(0, 0, 0, 0.04).unwrap()).abs();
        let d2 = (fh_lhs(0, 0, 0, 0.02) - fh_leading(0, 0, 0, 0.02).unwrap()).abs();
        assert!((d1 / d2).log2() > 2.3);
    }

    #[test]
    fn small_angle_limit_fixes_the_bessel_normalization() {
        // at θ → 0 the lead must reproduce P_ℓ(1) = C(ℓ+α, ℓ)
        let (l, a, b) = (40u32, 2u32, 3u32);
        let th = 1e-4;
        let ratio = fh_leading(l, a, b, th).unwrap() / fh_lhs(l, a, b, th);
        assert!((ratio - 1.0).abs() < 1e-3, "{ratio}");
        // dividing by N^α instead of (N/2)^α is off by 2^α
        let literal = ratio / 2f64.powi(a as i32);
        assert!((literal - 0.25).abs() < 1e-3);
    }

    #[test]
    fn remainder_at_small_theta_is_finite() {
        let r = fh_check_one(20, 1, 3, FhGrid::new(1e-4, 1e-2, 50).unwrap()).unwrap();
        assert!(r.scaled_remainder_sup.is_finite() && r.scaled_remainder_sup > 0.0);
    }

    #[test]
    fn remainder_bound_at_a_sample_point() {
        let (l, a, b, th) = (50u32, 1u32, 3u32, 0.2);
        let r = fh_remainder_check(a, b, 1.2, &[l]).unwrap().remove(0);
        let pref = gamma_ratio(l as u64, a as u64).unwrap();
        let diff = (fh_lhs(l, a, b, th) - fh_leading(l, a, b, th).unwrap()).abs();
        let allowed = r.scaled_remainder_sup * th.powf(1.5) / (r.big_n as f64).powf(a as f64 + 1.5) * pref;
        assert!(diff <= allowed * (1.0 + 1e-9) + 1e-15);
    }

    #[test]
    fn remainder_sweep_bounded_across_degrees() {
        for &(a, b) in &[(0u32, 0u32), (0, 5), (1, 3), (2, 0)] {
            let res = fh_remainder_check(a, b, 1.2, &[20, 40, 80, 160]).unwrap();
            let sc: Vec<f64> = res.iter().map(|r| r.scaled_remainder_sup).collect();
            let max = sc.iter().cloned().fold(0.0, f64::max);
            let min = sc.iter().cloned().fold(f64::MAX, f64::min);
            assert!(max / min < 3.0, "{a} {b} {sc:?}");
        }
    }

    #[test]
    fn remainder_decays_at_the_predicted_rate_away_from_the_pole() {
        let grid = FhGrid::new(0.1, 1.2, 4000).unwrap();
        for &(a, b) in &[(0u32, 0u32), (0, 5), (1, 3), (2, 0)] {
            let res = fh_remainder_sweep(a, b, grid, &[20, 40, 80, 160]).unwrap();
            let slope = fh_residual_slope(&res);
            assert!((slope + a as f64 + 1.5).abs() < 0.4, "{a} {b} {slope}");
        }
    }

    #[test]
    fn near_the_pole_the_remainder_decays_one_half_order_slower() {
        // the sup sits at Nθ = O(1), where the first omitted term is θ·J_{α+1}(Nθ)/N^{α+1}
        let res = fh_remainder_check(1, 3, 1.2, &[20, 40, 80, 160]).unwrap();
        let slope = fh_residual_slope(&res);
        assert!((slope + 2.0).abs() < 0.2, "{slope}");
        assert!(res.iter().all(|r| r.argmax_theta * (r.big_n as f64) < 4.0));
    }

    #[test]
    fn oscillatory_sum_half_integer_is_small() {
        let s = oscillatory_sum(0.5, 0.01, &phi(), |k| Symbol::One.eval(k), DEFAULT_K_MAX).unwrap();
        assert!(s.norm() <= 1.0, "{s}");
    }

    #[test]
    fn oscillatory_sum_on_integers_is_a_riemann_sum() {
        let eps = 0.01;
        let s = oscillatory_sum(0.0, eps, &phi(), |k| Symbol::One.eval(k), DEFAULT_K_MAX).unwrap();
        // ∫φ by the trapezoid rule on a fine grid
        let m = 200_000;
        let h = 3.0 / m as f64;
        let integral: f64 = (0..=m).map(|i| phi().eval(1.0 + h * i as f64)).sum::<f64>() * h;
        assert!(s.im.abs() < 1e-9);
        assert!((s.re * eps / integral - 1.0).abs() < 0.01);
    }

    #[test]
    fn boundary_case_epsilon_equals_delta() {
        let r = osc_result(0.01, 0.01, 3, &phi(), Symbol::One).unwrap();
        assert!(r.ratio.is_finite());
        assert!((r.bound - 100.0).abs() < 1e-9);
    }

    #[test]
    fn integer_shift_and_conjugation() {
        let p = phi();
        for &mu in &[0.1, 0.25, 0.37] {
            let s = oscillatory_sum(mu, 0.01, &p, |k| Symbol::S0.eval(k), DEFAULT_K_MAX).unwrap();
            let shifted = oscillatory_sum(mu + 3.0, 0.01, &p, |k| Symbol::S0.eval(k), DEFAULT_K_MAX).unwrap();
            assert!((s - shifted).norm() < 1e-12 * s.norm().max(1.0));
            let neg = oscillatory_sum(-mu, 0.01, &p, |k| Symbol::S0.eval(k), DEFAULT_K_MAX).unwrap();
            assert!((neg - s.conj()).norm() < 1e-12 * s.norm().max(1.0));
        }
    }

    #[test]
    fn truncation_is_exact_outside_support() {
        let p = phi();
        let eps = 0.05;
        let s = oscillatory_sum(0.3, eps, &p, |k| Symbol::One.eval(k), DEFAULT_K_MAX).unwrap();
        let wide: Vec<Complex64> = (-500i64..500)
            .map(|k| Complex64::from_polar(p.eval(eps * k as f64), 2.0 * PI * 0.3 * k as f64))
            .collect();
        assert!((s - wide.iter().sum::<Complex64>()).norm() < 1e-10);
    }

    #[test]
    fn oscillatory_sum_rejects_bad_input() {
        assert!(oscillatory_sum(0.3, 0.0, &phi(), |k| Symbol::One.eval(k), 10).is_err());
        assert!(oscillatory_sum(0.3, 0.001, &phi(), |k| Symbol::One.eval(k), 10).is_err());
    }

    #[test]
    fn sweep_constant_is_stable_for_smaller_epsilon() {
        let p = phi();
        for symbol in [Symbol::One, Symbol::S0] {
            let base = poisson_bound_sweep(&[0.1, 0.25, 0.5], &[1.0, 2.0, 10.0], 3, &p, symbol).unwrap();
            let ext = poisson_bound_sweep(&[0.1, 0.25, 0.5], &[1.0, 2.0, 10.0, 100.0], 3, &p, symbol).unwrap();
            assert_eq!(base.len(), 9);
            let (c0, c1) = (max_ratio(&base), max_ratio(&ext));
            assert!(c1 / c0 < 1.2, "{c0} {c1}");
        }
        assert_eq!(poisson_bound_sweep(&[0.25], &[0.5], 3, &p, Symbol::One).unwrap().len(), 0);
    }
}
