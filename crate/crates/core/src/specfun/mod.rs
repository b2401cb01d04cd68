//! Special functions: Jacobi polynomials, integer-order Bessel functions and
//! the gamma ratios that appear in the Jacobi-to-Bessel expansion.

mod bessel;
mod jacobi;

pub use bessel::bessel_j;
pub use jacobi::{damped_jacobi, damped_jacobi_sequence, jacobi_bound_ratio, jacobi_p, JacobiParams};

use crate::error::{Error, Result};

/// `Γ(d+α+1)/d!` as the product `(d+1)(d+2)…(d+α)`.
pub fn gamma_ratio(d: u64, alpha: u64) -> Result<f64> {
    let mut acc = 1.0f64;
    for i in 1..=alpha {
        acc *= (d + i) as f64;
        if !acc.is_finite() {
            return Err(Error::Overflow(format!("gamma ratio d={d}, alpha={alpha}")));
        }
    }
    Ok(acc)
}

/// `ln(k!)` by direct summation; exact enough for the moderate `k` used here.
pub(crate) fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Binomial coefficient as f64 (product form, no factorial overflow).
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
