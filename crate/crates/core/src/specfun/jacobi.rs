use crate::error::{invalid, Error, Result};

/// Degree and parameters of a Jacobi polynomial `P_ℓ^{(α,β)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub degree: u32,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(degree: u32, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(invalid(format!("Jacobi parameters must exceed -1 (alpha={alpha}, beta={beta})")));
        }
        Ok(Self { degree, alpha, beta })
    }
}

/// Coefficients of the degree recurrence
/// `P_k = (a·x + b)·P_{k-1} − c·P_{k-2}` for `k ≥ 2`.
#[inline]
fn recurrence(k: u32, alpha: f64, beta: f64) -> (f64, f64, f64) {
    let k = k as f64;
    let s = 2.0 * k + alpha + beta;
    let denom = 2.0 * k * (k + alpha + beta) * (s - 2.0);
    let a = (s - 1.0) * s * (s - 2.0) / denom;
    let b = (s - 1.0) * (alpha * alpha - beta * beta) / denom;
    let c = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s / denom;
    (a, b, c)
}

#[inline]
fn first_degree(alpha: f64, beta: f64, x: f64) -> f64 {
    (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
}

/// `P_ℓ^{(α,β)}(x)` by forward three-term recurrence in the degree.
pub fn jacobi_p(params: JacobiParams, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(invalid(format!("Jacobi argument {x} outside [-1, 1]")));
    }
    let JacobiParams { degree, alpha, beta } = params;
    if degree == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = first_degree(alpha, beta, x);
    for k in 2..=degree {
        let (a, b, c) = recurrence(k, alpha, beta);
        let next = (a * x + b) * cur - c * prev;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return Err(Error::Overflow(format!(
                "P_{degree}^({alpha},{beta}) at x={x} exceeds f64 range at degree {k}"
            )));
        }
    }
    Ok(cur)
}

const RESCALE_AT: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;

/// `(cos θ)^β · P_k^{(α,β)}(cos 2θ)` for every `k = 0..=max_degree`.
///
/// The raw polynomial overflows for large `β` near `θ = π/2` while the damped
/// product stays bounded, so the recurrence carries a running log-scale and the
/// damping is applied in log space.
pub fn damped_jacobi_sequence(alpha: f64, beta: f64, theta: f64, max_degree: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_degree as usize + 1);
    let cos_t = theta.cos();
    let x = (2.0 * theta).cos().clamp(-1.0, 1.0);
    let log_damp = if beta == 0.0 {
        0.0
    } else if cos_t <= 0.0 {
        f64::NEG_INFINITY
    } else {
        beta * cos_t.ln()
    };
    let emit = |p: f64, log_scale: f64| -> f64 {
        if p == 0.0 || log_damp == f64::NEG_INFINITY {
            return 0.0;
        }
        p.signum() * (p.abs().ln() + log_scale + log_damp).exp()
    };

    let mut log_scale = 0.0;
    let mut prev = 1.0;
    out.push(emit(prev, log_scale));
    if max_degree == 0 {
        return out;
    }
    let mut cur = first_degree(alpha, beta, x);
    out.push(emit(cur, log_scale));
    for k in 2..=max_degree {
        let (a, b, c) = recurrence(k, alpha, beta);
        let next = (a * x + b) * cur - c * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev *= RESCALE_BY;
            cur *= RESCALE_BY;
            log_scale -= RESCALE_BY.ln();
        }
        out.push(emit(cur, log_scale));
    }
    out
}

/// Single-degree form of [`damped_jacobi_sequence`].
pub fn damped_jacobi(degree: u32, alpha: f64, beta: f64, theta: f64) -> f64 {
    damped_jacobi_sequence(alpha, beta, theta, degree)[degree as usize]
}

/// `|P_ℓ^{(α,β)}(cos θ)|` divided by the smallest of the classical Jacobi
/// envelopes (constant 1) valid at this `θ`:
/// `ℓ^α` and `ℓ^{-1/2} θ^{-α-1/2}` on `(0, π/2]`,
/// `ℓ^β` and `ℓ^{-1/2} (π−θ)^{-β-1/2}` on `[π/2, π)`.
///
/// `ℓ` enters as `max(1, ℓ)` so that degree zero is well defined.
pub fn jacobi_bound_ratio(params: JacobiParams, theta: f64) -> Result<f64> {
    use std::f64::consts::{FRAC_PI_2, PI};
    if !(theta > 0.0 && theta < PI) {
        return Err(invalid(format!("theta={theta} outside (0, pi)")));
    }
    let value = jacobi_p(params, theta.cos())?.abs();
    let l = (params.degree.max(1)) as f64;
    let JacobiParams { alpha, beta, .. } = params;
    let mut bound = f64::INFINITY;
    if theta <= FRAC_PI_2 {
        bound = bound.min(l.powf(alpha));
        bound = bound.min(l.powf(-0.5) * theta.powf(-alpha - 0.5));
    }
    if theta >= FRAC_PI_2 {
        bound = bound.min(l.powf(beta));
        bound = bound.min(l.powf(-0.5) * (PI - theta).powf(-beta - 0.5));
    }
    Ok(value / bound)
}
