//! Numerical core for dyadic frequency analysis on periodic grids.
//!
//! Functions on a torus `[-L/2, L/2)^n` (`n` in `{1, 2}`) are sampled on a
//! power-of-two lattice. On top of the discrete Fourier transform this crate
//! builds the Littlewood-Paley cutoffs `psi_j`, Besov and Triebel-Lizorkin
//! quasi-norms, `h^p` atoms, Fourier integral operators applied by direct
//! frequency quadrature (with a multiplier fast path), the second dyadic cone
//! decomposition, and the constant-coefficient wave propagator.
//!
//! The crate is `no_std` and only needs `alloc`; float functions come from
//! `num_traits::Float` (libm). Whenever std is linked its inherent methods
//! take over, which is why those imports carry `allow(unused_imports)`.
//!
//! All reductions run in a fixed order; per-point evaluators ([`fio::FioPlan::value_at`],
//! [`cones::ConeKernelPlan::value_at`]) are `Sync` so that callers may spread
//! them over worker threads without changing a single bit of the output.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod atoms;
pub mod cones;
pub mod error;
pub mod fft;
pub mod fio;
pub mod fit;
pub mod grid;
pub mod littlewood_paley;
pub mod profile;
pub mod quadrature;
pub mod spaces;
pub mod wave;

pub use error::{Error, Result};
pub use grid::{Combine, GridFunction, GridSpec, Point, Spectrum};
pub use littlewood_paley::{BallMode, DyadicCutoffFamily};
pub use num_complex::Complex64;
pub use profile::{BumpProfile, ProfileKind};
pub use spaces::{BandDecomposition, SpaceKind, SpaceParams};
