//! Order-fixed pairwise summation.
//!
//! Every reduction in the crate goes through these helpers so that results
//! are bit-identical regardless of how work was split across threads: callers
//! produce their terms in a deterministic order and the tree shape depends
//! only on the number of terms.

use num_complex::Complex64;
use std::ops::Add;

const LEAF: usize = 8;

fn pairwise<T: Copy + Add<Output = T>>(terms: &[T], zero: T) -> T {
    if terms.len() <= LEAF {
        return terms.iter().fold(zero, |acc, &x| acc + x);
    }
    let mid = terms.len() / 2;
    pairwise(&terms[..mid], zero) + pairwise(&terms[mid..], zero)
}

pub fn tree_sum(terms: &[f64]) -> f64 {
    pairwise(terms, 0.0)
}

pub fn tree_sum_complex(terms: &[Complex64]) -> Complex64 {
    pairwise(terms, Complex64::new(0.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_on_small_inputs() {
        let v = [1.0, 2.0, 3.0];
        assert_eq!(tree_sum(&v), 6.0);
        assert_eq!(tree_sum(&[]), 0.0);
    }

    #[test]
    fn more_accurate_than_naive_for_long_sums() {
        let v = vec![0.1; 1 << 20];
        let exact = 0.1 * (1u64 << 20) as f64;
        let naive: f64 = v.iter().sum();
        let tree = tree_sum(&v);
        assert!((tree - exact).abs() <= (naive - exact).abs());
        assert!((tree - exact).abs() / exact < 1e-13);
    }

    #[test]
    fn complex_sum_is_componentwise() {
        let v: Vec<Complex64> = (0..100).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
        let s = tree_sum_complex(&v);
        assert_eq!(s, Complex64::new(4950.0, -4950.0));
    }
}
