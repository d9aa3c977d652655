//! Data-driven estimation of x₀(0) and the constant reference element x⋆.
//!
//! Under sup-norm noise, x₀(0)² = y₀′(0) is recovered from the averaged data
//! value √([Q_m y^δ](√δ)/√δ) at accuracy O(√δ) provided m·δ ≥ 1; under
//! L²-noise an integral window of width h ≍ δ^(2/5) yields accuracy O(δ^(2/5)).

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, UniformGrid};
use crate::pc::{cell_index, pc_project};

/// Which norm the noise level δ bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// ‖y^δ − y₀‖∞ ≤ δ (noise scaled to ‖ξ‖∞ = 1).
    SupNorm,
    /// ‖y^δ − y₀‖₂ ≤ δ (noise scaled to ‖ξ‖₂ = 1).
    L2Norm,
}

/// Noise description for data generation and reference-element construction.
///
/// `smoothness_bound` is the constant K bounding ‖x₀‖_C¹(0,1); it only
/// enters the L²-noise estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub delta: f64,
    pub seed: u64,
    pub smoothness_bound: f64,
}

impl NoiseModel {
    /// δ = 0 is allowed and means noiseless data; the estimators themselves
    /// require δ > 0.
    pub fn new(kind: NoiseKind, delta: f64, seed: u64, smoothness_bound: f64) -> Result<Self> {
        if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
            return Err(Error::invalid("noise level delta must lie in [0, 1]"));
        }
        if !smoothness_bound.is_finite() || smoothness_bound <= 0.0 {
            return Err(Error::invalid("smoothness bound K must be positive"));
        }
        Ok(NoiseModel {
            kind,
            delta,
            seed,
            smoothness_bound,
        })
    }
}

/// Nodewise max(y, 0). Never increases the noise level of nonnegative data.
pub fn clip_nonneg(y: &GridFunction) -> GridFunction {
    y.map(|v| v.max(0.0))
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta <= 0.0 || delta > 1.0 {
        return Err(Error::invalid("delta must lie in (0, 1]"));
    }
    Ok(())
}

/// √([Q_m⁰ y^δ](√δ) / √δ) when the projected value is nonnegative, else 0.
///
/// Requires m·δ ≥ 1 and 0 < δ ≤ 1.
pub fn estimate_x0_sup(y_delta: &GridFunction, delta: f64, m: usize) -> Result<f64> {
    check_delta(delta)?;
    if (m as f64) * delta < 1.0 - 1e-9 {
        return Err(Error::invalid("sup-norm estimator requires m*delta >= 1"));
    }
    let proj = pc_project(y_delta, m, 0.0)?;
    let v = proj.coeffs()[cell_index(delta.sqrt(), m)];
    Ok(if v >= 0.0 {
        (v / delta.sqrt()).sqrt()
    } else {
        0.0
    })
}

/// Averaging window h = ((2/3)K²)^(−2/5) δ^(2/5) of the L²-noise estimator,
/// clamped to (0, 1] (the asymptotic formula can exceed the domain for large
/// δ and small K).
pub fn l2_window(delta: f64, smoothness_bound: f64) -> Result<f64> {
    check_delta(delta)?;
    if !smoothness_bound.is_finite() || smoothness_bound <= 0.0 {
        return Err(Error::invalid("smoothness bound K must be positive"));
    }
    let k2 = smoothness_bound * smoothness_bound;
    let h = ((2.0 / 3.0) * k2).powf(-0.4) * delta.powf(0.4);
    Ok(h.min(1.0))
}

/// √((2/h²)∫₀ʰ y^δ(t) dt) when the window integral is nonnegative, else 0.
pub fn estimate_x0_l2(y_delta: &GridFunction, delta: f64, smoothness_bound: f64) -> Result<f64> {
    let h = l2_window(delta, smoothness_bound)?;
    let integral = y_delta.integral_linear(0.0, h);
    let v = 2.0 / (h * h) * integral;
    Ok(if v >= 0.0 { v.sqrt() } else { 0.0 })
}

/// The constant reference element x⋆ built from the estimator matching the
/// noise model. Requires δ > 0.
pub fn reference_element(
    y_delta: &GridFunction,
    noise: &NoiseModel,
    m: usize,
    grid: UniformGrid,
) -> Result<GridFunction> {
    let c = match noise.kind {
        NoiseKind::SupNorm => estimate_x0_sup(y_delta, noise.delta, m)?,
        NoiseKind::L2Norm => estimate_x0_l2(y_delta, noise.delta, noise.smoothness_bound)?,
    };
    GridFunction::constant(grid, c)
}
