//! Numerical deautoconvolution on the unit interval.
//!
//! Given noisy samples of y = F(x₀) with [F(x)](s) = ∫₀ˢ x(s−t)x(t) dt, the
//! crate reconstructs x₀ by Lavrentiev regularization,
//!
//! > α(x⋆ − x) + yᵟ = F(x),
//!
//! discretized two-sidedly with σ-weighted piecewise-constant splines (which
//! admit an explicit O(m²) solver), with optional cubic-spline post-smoothing,
//! or directly with a cubic-spline Galerkin ansatz solved by damped Newton.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only adds wall-clock timing and `std::error::Error` integration.
//! File formats, experiment drivers and the CLI live in the companion
//! `autodeconv` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod autoconv;
pub mod error;
pub mod fit;
pub mod grid;
pub mod initval;
mod linalg;
pub mod pc;
pub mod solver;
pub mod spline;

pub use error::Error;
pub use grid::{GridFunction, UniformGrid, Weight, WeightDirection};
pub use initval::{NoiseKind, NoiseModel};
pub use pc::PcCoeffs;
pub use solver::{SolveParams, SolveResult};
pub use spline::SplineFunction;

/// Fine-grid resolution used throughout the numerical study.
pub const DEFAULT_FINE_N: usize = 5000;
