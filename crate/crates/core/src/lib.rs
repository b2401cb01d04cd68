//! Spectral calculus of the sublaplacian on the CR sphere `S^{2n+1}`.
//!
//! The crate evaluates zonal harmonics through Jacobi polynomials, builds the
//! frequency-localised Schrödinger kernels `Σ e^{itλ} φ(h²λ) Z_{ℓ,ℓ′}` and
//! measures their decay, checks the Jacobi-to-Bessel and Poisson-summation
//! estimates numerically, and computes mixed Sobolev and space-time norms for
//! pole-zonal data.

pub mod acceptance;
pub mod asymptotics;
pub mod cli;
pub mod config;
pub mod cutoffs;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kernel;
pub mod sobolev;
pub mod specfun;
pub mod spectrum;
pub mod strichartz;
pub mod sum;
pub mod zonal;

pub use error::{Error, Result};
pub use geometry::{DiskGrid, DiskPoint, SphereGeometry};
pub use spectrum::{EigenData, Region, SpectralIndex};
pub use zonal::ZonalSpectralData;
