use super::ln_factorial;
use crate::error::{invalid, Result};
use std::f64::consts::PI;

/// Bessel function of the first kind `J_ν(x)` for integer `ν ≥ 0`, `x ≥ 0`.
///
/// Three regimes:
/// * ascending series while its terms decrease from the start, `x ≤ 2√(ν+1)`;
/// * the Hankel expansion `J_ν(x) = (2/πx)^{1/2}(P cos χ − Q sin χ)`, i.e. the
///   `x^{-1/2}(ρ₁e^{ix} + ρ₂e^{-ix})` form, once `x ≥ max(25, ν²)`;
/// * Miller's backward recurrence normalised by `J₀ + 2ΣJ_{2k} = 1` in between.
pub fn bessel_j(nu: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid(format!("bessel_j requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(if nu == 0 { 1.0 } else { 0.0 });
    }
    let nu_f = nu as f64;
    if x <= 2.0 * (nu_f + 1.0).sqrt() {
        Ok(series(nu, x))
    } else if x >= 25.0f64.max(nu_f * nu_f) {
        Ok(hankel(nu, x))
    } else {
        Ok(miller(nu, x))
    }
}

pub(crate) fn series(nu: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (nu as f64 * half.ln() - ln_factorial(nu as u64)).exp();
    let q = half * half;
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..200u32 {
        term *= -q / (k as f64 * (nu + k) as f64);
        acc += term;
        if term.abs() < 1e-17 * acc.abs() {
            break;
        }
    }
    lead * acc
}

pub(crate) fn hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..100u32 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        // k odd feeds Q, k even feeds P; signs alternate within each series
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    // χ = x − φ; cos χ and sin χ via the addition formulas
    let phase = (0.5 * nu as f64 + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

pub(crate) fn miller(nu: u32, x: f64) -> f64 {
    let top = (nu as f64).max(x);
    let mut m = (top + 30.0 + (60.0 * top).sqrt()) as u32;
    m += m % 2;
    let mut above = 0.0f64;
    let mut cur = 1e-30f64;
    let mut norm = 0.0f64;
    let mut result = 0.0f64;
    if m == nu {
        result = cur;
    }
    let mut k = m;
    while k > 0 {
        let below = (2.0 * k as f64 / x) * cur - above;
        above = cur;
        cur = below;
        k -= 1;
        if k == nu {
            result = cur;
        }
        if k.is_multiple_of(2) {
            norm += if k == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    result / norm
}
