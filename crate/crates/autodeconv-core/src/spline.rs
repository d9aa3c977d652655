//! Cubic splines on equidistant knots of [0,1].
//!
//! The space 𝒮₄^m has dimension m+3; functions are stored as B-spline
//! coefficients over the clamped knot vector 0,0,0,0, 1/m, …, (m−1)/m, 1,1,1,1
//! and evaluated with de Boor's recursion.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, UniformGrid};
use crate::linalg::solve_dense;
use crate::pc::cell_index;

/// Cubic spline with `n_intervals` knot intervals, stored as m+3 B-spline
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineFunction {
    n_intervals: usize,
    coeffs: Vec<f64>,
}

/// Knot τ_j of the clamped vector, j = 0..m+6.
fn knot(m: usize, j: usize) -> f64 {
    let inner = j.saturating_sub(3).min(m);
    inner as f64 / m as f64
}

/// Values of the four cubic B-splines that are nonzero at t, together with
/// the index of the first one. Errors outside [0,1].
fn basis_at(m: usize, t: f64) -> Result<(usize, [f64; 4])> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutsideDomain { t });
    }
    let interval = cell_index(t, m);
    let span = interval + 3; // τ_span <= t < τ_span+1 (t = 1 uses the last span)
    let mut values = [0.0_f64; 4];
    let mut left = [0.0_f64; 4];
    let mut right = [0.0_f64; 4];
    values[0] = 1.0;
    for j in 1..4 {
        left[j] = t - knot(m, span + 1 - j);
        right[j] = knot(m, span + j) - t;
        let mut saved = 0.0;
        for r in 0..j {
            let tmp = values[r] / (right[r + 1] + left[j - r]);
            values[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        values[j] = saved;
    }
    Ok((interval, values))
}

impl SplineFunction {
    pub fn new(n_intervals: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n_intervals == 0 {
            return Err(Error::invalid("spline needs at least one knot interval"));
        }
        if coeffs.len() != n_intervals + 3 {
            return Err(Error::invalid("cubic spline needs m + 3 coefficients"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("spline coefficients"));
        }
        Ok(SplineFunction {
            n_intervals,
            coeffs,
        })
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// de Boor evaluation; evaluation outside [0,1] is a contract violation.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let (start, basis) = basis_at(self.n_intervals, t)?;
        Ok((0..4).map(|r| self.coeffs[start + r] * basis[r]).sum())
    }

    /// Greville abscissae ξ_i = (τ_{i+1}+τ_{i+2}+τ_{i+3})/3; a spline with
    /// coefficients g(ξ_i) reproduces any linear g exactly.
    pub fn greville(n_intervals: usize) -> Vec<f64> {
        let m = n_intervals;
        (0..m + 3)
            .map(|i| (knot(m, i + 1) + knot(m, i + 2) + knot(m, i + 3)) / 3.0)
            .collect()
    }
}

/// Nodewise de Boor evaluation on a grid.
pub fn spline_eval(s: &SplineFunction, grid: UniformGrid) -> GridFunction {
    let values = grid
        .nodes()
        .map(|t| s.value_at(t).expect("grid nodes lie in [0,1]"))
        .collect();
    GridFunction::from_values_unchecked(grid, values)
}

/// Least-squares fit of the sampled function in the trapezoid-weighted
/// discrete L² inner product: minimizes ‖x − S‖₀ over S ∈ 𝒮₄^m via the
/// normal equations of the (m+3)-dimensional Gram system (banded, bandwidth
/// 7; solved densely — the systems stay small).
pub fn spline_project(x: &GridFunction, m: usize) -> Result<SplineFunction> {
    if m == 0 {
        return Err(Error::invalid("spline projection needs m >= 1"));
    }
    let grid = x.grid();
    let nb = m + 3;
    if grid.n_nodes() < 4 * nb {
        return Err(Error::invalid(
            "spline projection needs a fine grid with N >= 4(m+3) nodes",
        ));
    }
    let n = grid.n_cells();
    let h = grid.spacing();
    let mut gram = alloc::vec![0.0; nb * nb];
    let mut rhs = alloc::vec![0.0; nb];
    for k in 0..=n {
        let wk = if k == 0 || k == n { 0.5 * h } else { h };
        let (start, basis) = basis_at(m, grid.node(k))?;
        for r in 0..4 {
            let br = wk * basis[r];
            rhs[start + r] += br * x.value(k);
            for c in 0..4 {
                gram[(start + r) * nb + (start + c)] += br * basis[c];
            }
        }
    }
    solve_dense(nb, &mut gram, &mut rhs, "spline Gram system singular")?;
    SplineFunction::new(m, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> UniformGrid {
        UniformGrid::new(n).unwrap()
    }

    #[test]
    fn partition_of_unity() {
        let s = SplineFunction::new(6, alloc::vec![1.0; 9]).unwrap();
        let e = spline_eval(&s, grid(1000));
        for k in 0..=1000 {
            assert!((e.value(k) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn linear_reproduction_from_greville_coefficients() {
        let m = 5;
        let coeffs = SplineFunction::greville(m);
        let s = SplineFunction::new(m, coeffs).unwrap();
        let g = grid(777);
        let e = spline_eval(&s, g);
        for (k, t) in g.nodes().enumerate() {
            assert!((e.value(k) - t).abs() <= 1e-12, "t = {t}");
        }
    }

    #[test]
    fn evaluation_outside_domain_errors() {
        let s = SplineFunction::new(3, alloc::vec![0.0; 6]).unwrap();
        assert!(matches!(
            s.value_at(1.0 + 1e-9),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(s.value_at(-0.5), Err(Error::OutsideDomain { .. })));
        assert!(s.value_at(0.0).is_ok());
        assert!(s.value_at(1.0).is_ok());
    }

    #[test]
    fn reproduces_cubics_exactly() {
        let g = grid(2000);
        let x = GridFunction::from_fn(g, |t| t * t * t).unwrap();
        let s = spline_project(&x, 4).unwrap();
        let err = spline_eval(&s, g).zip_with(&x, |a, b| a - b).sup_norm();
        assert!(err <= 1e-8, "cubic reproduction error {err}");
    }

    #[test]
    fn projects_constants_to_unit_coefficients() {
        let g = grid(2000);
        let one = GridFunction::constant(g, 1.0).unwrap();
        let s = spline_project(&one, 8).unwrap();
        for &c in s.coeffs() {
            assert!((c - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn refinement_shrinks_oscillatory_error() {
        let g = grid(5000);
        let x =
            GridFunction::from_fn(g, |t| 2.0 + (4.0 * core::f64::consts::PI * t).cos()).unwrap();
        let err = |m: usize| {
            spline_eval(&spline_project(&x, m).unwrap(), g)
                .zip_with(&x, |a, b| a - b)
                .weighted_norm(crate::grid::Weight::UNWEIGHTED)
        };
        let e5 = err(5);
        let e10 = err(10);
        assert!(e10 <= e5 / 3.0, "e5 {e5}, e10 {e10}");
    }

    #[test]
    fn guards_coarse_grids() {
        let x = GridFunction::zeros(grid(20));
        assert!(spline_project(&x, 8).is_err());
    }
}
