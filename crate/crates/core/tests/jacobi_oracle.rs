//! Jacobi recurrence against the explicit binomial sum in exact arithmetic.

use crsphere::specfun::{jacobi_p, JacobiParams};
use num_bigint::BigInt;

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// `P_ℓ^{(α,β)}(x)` for `x = xn/2`, returned as `numerator / 4^ℓ`.
fn exact(ell: u32, alpha: u32, beta: u32, xn: i64) -> (BigInt, BigInt) {
    // (x-1)/2 = (xn-2)/4 and (x+1)/2 = (xn+2)/4
    let (a, b) = (BigInt::from(xn - 2), BigInt::from(xn + 2));
    let mut num = BigInt::from(0);
    for s in 0..=ell {
        num += binom(ell + alpha, ell - s) * binom(ell + beta, s) * a.pow(s) * b.pow(ell - s);
    }
    (num, BigInt::from(4).pow(ell))
}

fn to_f64(num: &BigInt, den: &BigInt) -> f64 {
    // both fit comfortably after scaling by a shared power of two
    let shift = den.bits().saturating_sub(60);
    let (n, d) = (num >> shift, den >> shift);
    n.to_string().parse::<f64>().unwrap() / d.to_string().parse::<f64>().unwrap()
}

#[test]
fn recurrence_matches_exact_sum() {
    let mut worst = 0.0f64;
    for ell in 0..=30 {
        for alpha in 0..=10 {
            for beta in 0..=10 {
                for xn in [-2i64, -1, 0, 1, 2] {
                    let (num, den) = exact(ell, alpha, beta, xn);
                    let want = to_f64(&num, &den);
                    let p = JacobiParams::new(ell, alpha as f64, beta as f64).unwrap();
                    let got = jacobi_p(p, xn as f64 / 2.0).unwrap();
                    let err = (got - want).abs() / want.abs().max(1.0);
                    worst = worst.max(err);
                }
            }
        }
    }
    println!("worst relative error {worst:e}");
    assert!(worst < 1e-11, "worst {worst:e}");
}

#[test]
fn endpoint_is_a_binomial() {
    let (num, den) = exact(5, 2, 3, 2);
    assert_eq!(num, den * 21);
}
