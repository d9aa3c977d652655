//! The autoconvolution operator F and its Fréchet derivative.
//!
//! [F(x)](s) = ∫₀ˢ x(s−t) x(t) dt and [F′(x)h](s) = 2∫₀ˢ x(s−t) h(t) dt,
//! evaluated at every grid node by the composite trapezoidal rule. The
//! convolution at node s_k only touches node differences, so no interpolation
//! enters. Plain O(N²) loops; at N = 5000 a full evaluation is ~1.2e7
//! multiply-adds.

use alloc::vec;

use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// y = F(x) with y(t_k) = h(½x₀x_k + Σ_{j=1..k−1} x_j x_{k−j} + ½x_k x₀),
/// y(0) = 0 exactly (integral over an empty interval).
pub fn forward(x: &GridFunction) -> GridFunction {
    let v = x.values();
    let n = x.grid().n_cells();
    let h = x.grid().spacing();
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        let mut acc = 0.0;
        for j in 0..=k {
            acc += v[j] * v[k - j];
        }
        // trapezoid halves both end terms j = 0 and j = k
        out[k] = h * (acc - v[0] * v[k]);
    }
    GridFunction::from_values_unchecked(x.grid(), out)
}

/// [F′(u)v](t_k) by the trapezoidal rule; zero at node 0.
pub fn frechet_apply(u: &GridFunction, v: &GridFunction) -> Result<GridFunction> {
    if u.grid() != v.grid() {
        return Err(Error::IncompatibleGrids);
    }
    let uu = u.values();
    let vv = v.values();
    let n = u.grid().n_cells();
    let h = u.grid().spacing();
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        let mut acc = 0.0;
        for j in 0..=k {
            acc += uu[k - j] * vv[j];
        }
        out[k] = 2.0 * h * (acc - 0.5 * (uu[k] * vv[0] + uu[0] * vv[k]));
    }
    Ok(GridFunction::from_values_unchecked(u.grid(), out))
}
