//! Sphere constants, the Korányi distance and zonal quadrature.
//!
//! A function on `S^{2n+1}` that depends only on `⟨z,w₀⟩ = e^{iω}cos θ` has
//! its integral reduced to the unit disk. With `r = cos θ` the pushforward of
//! surface measure is `c_n (1−r²)^{n−1} r dr dω`; in the variable
//! `x = cos 2θ = 2r² − 1` this becomes `c_n ((1−x)/2)^{n−1} dx/4 dω`, so
//! Gauss–Legendre in `x` integrates every `ζ^a ζ̄^b` exactly up to its degree.

use crate::error::{invalid, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Constants of the CR sphere `S^{2n+1} ⊂ ℂ^{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereGeometry {
    pub n: u32,
    /// Homogeneous dimension `2n + 2`.
    pub q: u32,
    /// Surface area of `S^{2n+1}`.
    pub omega: f64,
}

impl SphereGeometry {
    pub fn new(n: u32) -> Result<Self> {
        Ok(Self { n, q: 2 * n + 2, omega: surface_area(n)? })
    }
}

/// A quadrature node on the unit disk: `⟨z,w₀⟩ = e^{iω} cos θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub omega_angle: f64,
    pub theta: f64,
    pub weight: f64,
}

impl DiskPoint {
    pub fn at(omega_angle: f64, theta: f64) -> Self {
        Self { omega_angle, theta, weight: 0.0 }
    }

    pub fn inner(&self) -> Complex64 {
        Complex64::from_polar(self.theta.cos(), self.omega_angle)
    }
}

/// `2π^{n+1}/n!`, the area of the unit sphere in `ℂ^{n+1}`.
pub fn surface_area(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(invalid("sphere dimension n must be at least 1"));
    }
    let mut area = 2.0 * PI;
    for k in 1..=n {
        area *= PI / k as f64;
    }
    Ok(area)
}

/// `|1 − ⟨z,w⟩|^{1/2}`.
pub fn koranyi_distance(inner: Complex64) -> Result<f64> {
    if inner.norm() > 1.0 + 1e-12 {
        return Err(invalid(format!("|<z,w>| = {} exceeds 1", inner.norm())));
    }
    Ok((Complex64::new(1.0, 0.0) - inner).norm().sqrt())
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor quadrature for pole-zonal integrals: Gauss–Legendre in `cos 2θ`,
/// uniform trapezoid in `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    pub n: u32,
    /// Ascending in `[0, π/2]`.
    pub thetas: Vec<f64>,
    /// Radial weights; the full node weight is `theta_weights[i] * omega_step()`.
    pub theta_weights: Vec<f64>,
    pub omegas: Vec<f64>,
}

impl DiskGrid {
    pub fn new(n: u32, n_theta: usize, n_omega: usize) -> Result<Self> {
        if n_theta < 4 || n_omega < 4 {
            return Err(invalid(format!("grid sizes must be at least 4 (got {n_theta} x {n_omega})")));
        }
        let area = surface_area(n)?;
        let (xs, ws) = gauss_legendre(n_theta);
        // x ascending => theta descending; reverse so theta ascends
        let mut thetas = Vec::with_capacity(n_theta);
        let mut raw = Vec::with_capacity(n_theta);
        for (&x, &w) in xs.iter().zip(&ws).rev() {
            thetas.push(0.5 * x.clamp(-1.0, 1.0).acos());
            raw.push(w * (0.5 * (1.0 - x)).powi(n as i32 - 1) / 4.0);
        }
        // c_n fixed by requiring the constant function to integrate to the area
        let total = crate::sum::tree_sum(&raw) * 2.0 * PI;
        let scale = area / total;
        let theta_weights = raw.into_iter().map(|w| w * scale).collect();
        let omegas = (0..n_omega).map(|j| 2.0 * PI * j as f64 / n_omega as f64).collect();
        Ok(Self { n, thetas, theta_weights, omegas })
    }

    pub fn omega_step(&self) -> f64 {
        2.0 * PI / self.omegas.len() as f64
    }

    pub fn len(&self) -> usize {
        self.thetas.len() * self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes in θ-major order.
    pub fn points(&self) -> Vec<DiskPoint> {
        let step = self.omega_step();
        let mut out = Vec::with_capacity(self.len());
        for (&theta, &wt) in self.thetas.iter().zip(&self.theta_weights) {
            for &omega_angle in &self.omegas {
                out.push(DiskPoint { omega_angle, theta, weight: wt * step });
            }
        }
        out
    }

    /// `Σ weight · f(point)` with the fixed θ-major tree order.
    pub fn integrate<F: Fn(&DiskPoint) -> Complex64>(&self, f: F) -> Complex64 {
        let terms: Vec<Complex64> = self.points().iter().map(|p| f(p) * p.weight).collect();
        crate::sum::tree_sum_complex(&terms)
    }

    /// Integrate θ-major samples laid out like [`DiskGrid::points`].
    pub fn integrate_samples(&self, samples: &[Complex64]) -> Result<Complex64> {
        if samples.len() != self.len() {
            return Err(invalid(format!("expected {} samples, got {}", self.len(), samples.len())));
        }
        let step = self.omega_step();
        let n_omega = self.omegas.len();
        let terms: Vec<Complex64> = samples
            .iter()
            .enumerate()
            .map(|(idx, &v)| v * (self.theta_weights[idx / n_omega] * step))
            .collect();
        Ok(crate::sum::tree_sum_complex(&terms))
    }
}

/// Spec-level constructor returning the node list.
pub fn disk_grid(n: u32, n_theta: usize, n_omega: usize) -> Result<Vec<DiskPoint>> {
    Ok(DiskGrid::new(n, n_theta, n_omega)?.points())
}

/// Monte-Carlo estimate of the area of `S^{2n+1}`: the fraction of a cube
/// falling in the unit ball gives the ball volume, and area = dim × volume.
pub fn monte_carlo_surface_area(n: u32, samples: u64, seed: u64) -> f64 {
    use rand::Rng;
    let dim = 2 * n as usize + 2;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut inside = 0u64;
    for _ in 0..samples {
        let mut r2 = 0.0;
        for _ in 0..dim {
            let u: f64 = rng.gen_range(-1.0..1.0);
            r2 += u * u;
        }
        if r2 <= 1.0 {
            inside += 1;
        }
    }
    let volume = inside as f64 / samples as f64 * 2f64.powi(dim as i32);
    dim as f64 * volume
}

/// Monte-Carlo estimate of `E|⟨z,w₀⟩|^{2a}` for `z` uniform on `S^{2n+1}`.
pub fn monte_carlo_moment(n: u32, a: u32, samples: u64, seed: u64) -> f64 {
    let dim = 2 * n as usize + 2;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let first = (v[0] * v[0] + v[1] * v[1]) / norm2;
        acc += first.powi(a as i32);
    }
    acc / samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_area_closed_forms() {
        assert!((surface_area(1).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        assert!((surface_area(2).unwrap() - PI.powi(3)).abs() < 1e-12);
        assert!(surface_area(0).is_err());
        let g = SphereGeometry::new(3).unwrap();
        assert_eq!(g.q, 8);
    }

    #[test]
    fn koranyi_examples() {
        assert_eq!(koranyi_distance(Complex64::new(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(koranyi_distance(Complex64::new(0.0, 0.0)).unwrap(), 1.0);
        assert!((koranyi_distance(Complex64::new(-1.0, 0.0)).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(koranyi_distance(Complex64::new(1.0, 0.1)).is_err());
    }

    #[test]
    fn gauss_legendre_small_rules() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert!(x[1].abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        // degree 2m-1 exactness
        let (x, w) = gauss_legendre(20);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((integral - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn constant_integrates_to_area() {
        for n in 1..=3 {
            for &(nt, no) in &[(4, 4), (37, 16), (256, 256)] {
                let grid = DiskGrid::new(n, nt, no).unwrap();
                let total = grid.integrate(|_| Complex64::new(1.0, 0.0)).re;
                let area = surface_area(n).unwrap();
                assert!(((total - area) / area).abs() < 1e-10);
                let weights: f64 = grid.points().iter().map(|p| p.weight).sum();
                assert!(((weights - area) / area).abs() < 1e-10);
            }
        }
        assert!(DiskGrid::new(1, 3, 8).is_err());
    }

    #[test]
    fn calibration_constant_matches_closed_form() {
        // c_n = n·ω/π, independent of the calibration-by-normalisation route
        for n in 1..=3u32 {
            let grid = DiskGrid::new(n, 16, 8).unwrap();
            let (xs, ws) = gauss_legendre(16);
            let raw: f64 = xs.iter().zip(&ws).map(|(x, w)| w * (0.5 * (1.0 - x)).powi(n as i32 - 1) / 4.0).sum();
            let c_n = grid.theta_weights.iter().sum::<f64>() / raw;
            let expected = n as f64 * surface_area(n).unwrap() / PI;
            assert!((c_n - expected).abs() / expected < 1e-12);
        }
    }

    #[test]
    fn monomials_are_exact() {
        // ∫ ζ^a conj(ζ)^b dσ = δ_ab ω E|ζ|^{2a}; E|ζ|^{2a} = a! n! / (a+n)!
        for n in 1..=2u32 {
            let nt = 24;
            let grid = DiskGrid::new(n, nt, 32).unwrap();
            let area = surface_area(n).unwrap();
            for a in 0..=nt / 2 {
                for b in 0..=(nt / 2 - a) {
                    let val = grid.integrate(|p| {
                        let z = p.inner();
                        z.powu(a as u32) * z.conj().powu(b as u32)
                    });
                    let want = if a == b {
                        let mut m = 1.0;
                        for k in 1..=n {
                            m *= k as f64 / (a as f64 + k as f64);
                        }
                        area * m
                    } else {
                        0.0
                    };
                    assert!((val.re - want).abs() <= 1e-10 * area && val.im.abs() <= 1e-10 * area, "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn moment_formula_against_monte_carlo() {
        for n in 1..=2u32 {
            for a in 1..=3u32 {
                let mc = monte_carlo_moment(n, a, 400_000, 11 + a as u64);
                let mut exact = 1.0;
                for k in 1..=n {
                    exact *= k as f64 / (a as f64 + k as f64);
                }
                assert!((mc - exact).abs() / exact < 0.02, "n={n} a={a}: mc={mc} exact={exact}");
            }
        }
    }

    #[test]
    fn surface_area_against_monte_carlo() {
        let mc = monte_carlo_surface_area(1, 10_000_000, 7);
        let exact = surface_area(1).unwrap();
        assert!((mc - exact).abs() / exact < 5e-3, "mc={mc}");
        let mc2 = monte_carlo_surface_area(2, 2_000_000, 8);
        assert!((mc2 - PI.powi(3)).abs() / PI.powi(3) < 2e-2, "mc2={mc2}");
    }

    #[test]
    fn quasi_triangle_inequality_on_random_triples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let point = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Complex64> {
            let v: Vec<f64> = (0..4).map(|_| StandardNormal.sample(rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            vec![Complex64::new(v[0], v[1]) / norm, Complex64::new(v[2], v[3]) / norm]
        };
        let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
            a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>()
        };
        let mut worst = 0.0f64;
        for _ in 0..20_000 {
            let (z, u, w) = (point(&mut rng), point(&mut rng), point(&mut rng));
            let d = |a: &[Complex64], b: &[Complex64]| koranyi_distance(inner(a, b)).unwrap();
            let lhs = d(&z, &w);
            let rhs = d(&z, &u) + d(&u, &w);
            if rhs > 0.0 {
                worst = worst.max(lhs / rhs);
            }
        }
        assert!(worst <= 2.0, "quasi-triangle constant {worst}");
    }
}
