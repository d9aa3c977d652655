//! Uniform grids on [0,1], grid-sampled functions and the weighted L²σ
//! geometry.
//!
//! All integrals are composite trapezoidal sums over the nodes t_k = k/N,
//! and the weighted inner product is
//!
//! > ⟨x,y⟩σ = ∫₀¹ e^(−2σt) x(t) y(t) dt,   ‖x‖σ = ⟨x,x⟩σ^(1/2).
//!
//! The weight function f_σ(t) = e^(σt) induces the isometry
//! D_σ: L²(0,1) → L²σ(0,1), realized nodewise by [`GridFunction::apply_weight`].

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Snap tolerance for deciding that a real grid position is an integer.
///
/// Cell boundaries (i/m)·N are rationals with denominator m; when they are
/// not mathematically integral they miss the nearest integer by at least 1/m,
/// many orders above this window, so snapping is unambiguous.
pub(crate) const POS_SNAP: f64 = 1e-9;

/// Uniform partition of [0,1] into `n_cells` cells (`n_cells`+1 nodes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformGrid {
    n_cells: usize,
}

impl UniformGrid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::invalid("grid needs at least 2 cells"));
        }
        Ok(UniformGrid { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    /// Node spacing h = 1/N.
    pub fn spacing(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// k-th node t_k = k/N; `node(0) = 0` and `node(N) = 1` exactly.
    pub fn node(&self, k: usize) -> f64 {
        k as f64 / self.n_cells as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_nodes()).map(move |k| self.node(k))
    }
}

/// Exponential weight exp(−2σt) of the L²σ inner product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight {
    sigma: f64,
}

impl Weight {
    /// σ = 0, the plain L²(0,1) geometry.
    pub const UNWEIGHTED: Weight = Weight { sigma: 0.0 };

    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::invalid("sigma must be finite and >= 0"));
        }
        Ok(Weight { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Direction of the isometry D_σ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightDirection {
    /// Multiply nodewise by e^(σt).
    Forward,
    /// Divide nodewise by e^(σt) (the exact inverse of `Forward`).
    Inverse,
}

/// Real-valued function sampled at the nodes of a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps node values; rejects length mismatches and non-finite entries.
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::invalid("value count must equal node count"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid function values"));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().map(f).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: UniformGrid, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite("constant value"));
        }
        Ok(GridFunction {
            grid,
            values: vec![c; grid.n_nodes()],
        })
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        GridFunction {
            grid,
            values: vec![0.0; grid.n_nodes()],
        }
    }

    pub(crate) fn from_values_unchecked(grid: UniformGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_nodes());
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Nodewise map that also sees the node coordinate: f(t_k, x(t_k)).
    pub fn map_nodes(&self, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self
                .grid
                .nodes()
                .zip(&self.values)
                .map(|(t, &v)| f(t, v))
                .collect(),
        }
    }

    /// Nodewise combination of two functions on the same grid.
    ///
    /// Panics on grid mismatch; the fallible entry points of this crate check
    /// compatibility before combining.
    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        assert_eq!(self.grid, other.grid, "incompatible grids");
        GridFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        self.map(|v| c * v)
    }

    /// self + c·other.
    pub fn scaled_add(&self, c: f64, other: &GridFunction) -> GridFunction {
        self.zip_with(other, |a, b| a + c * b)
    }

    /// Trapezoidal ⟨self, other⟩σ; errors on grid mismatch.
    pub fn weighted_inner(&self, other: &GridFunction, w: Weight) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::IncompatibleGrids);
        }
        Ok(self.inner_unchecked(other, w))
    }

    fn inner_unchecked(&self, other: &GridFunction, w: Weight) -> f64 {
        let n = self.grid.n_cells();
        let h = self.grid.spacing();
        let sigma = w.sigma();
        let mut acc = 0.0;
        for k in 0..=n {
            let wk = if k == 0 || k == n { 0.5 * h } else { h };
            let e = if sigma == 0.0 {
                1.0
            } else {
                (-2.0 * sigma * self.grid.node(k)).exp()
            };
            acc += wk * e * self.values[k] * other.values[k];
        }
        acc
    }

    /// ‖self‖σ; zero exactly when every node value is zero.
    pub fn weighted_norm(&self, w: Weight) -> f64 {
        self.inner_unchecked(self, w).max(0.0).sqrt()
    }

    /// max_k |x(t_k)|.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
    }

    /// Applies the isometry D_σ (`Forward`: ×e^(σt)) or its inverse.
    pub fn apply_weight(&self, w: Weight, direction: WeightDirection) -> GridFunction {
        let sigma = w.sigma();
        if sigma == 0.0 {
            return self.clone();
        }
        let values = self
            .grid
            .nodes()
            .zip(&self.values)
            .map(|(t, &v)| {
                let e = (sigma * t).exp();
                match direction {
                    WeightDirection::Forward => v * e,
                    WeightDirection::Inverse => v / e,
                }
            })
            .collect();
        GridFunction {
            grid: self.grid,
            values,
        }
    }

    /// Piecewise-linear interpolant of the node values at t ∈ [0,1].
    pub fn linear_value_at(&self, t: f64) -> f64 {
        let n = self.grid.n_cells();
        let p = (t.clamp(0.0, 1.0)) * n as f64;
        let j = (p.floor() as usize).min(n - 1);
        let frac = p - j as f64;
        self.values[j] + frac * (self.values[j + 1] - self.values[j])
    }

    /// ∫_a^b of the piecewise-linear interpolant: whole segments by
    /// trapezoid, partial end segments by linear interpolation.
    pub(crate) fn integral_linear(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a <= b && a >= 0.0 && b <= 1.0);
        let n = self.grid.n_cells() as f64;
        let h = self.grid.spacing();
        let pa = a * n;
        let pb = b * n;
        let ka = snap_ceil(pa);
        let kb = snap_floor(pb);
        if ka > kb {
            // both endpoints inside one segment
            return (b - a) * 0.5 * (self.linear_value_at(a) + self.linear_value_at(b));
        }
        let mut acc = 0.0;
        if (pa - ka as f64).abs() > POS_SNAP {
            acc += (self.grid.node(ka) - a) * 0.5 * (self.linear_value_at(a) + self.values[ka]);
        }
        for k in ka..kb {
            acc += h * 0.5 * (self.values[k] + self.values[k + 1]);
        }
        if (pb - kb as f64).abs() > POS_SNAP {
            acc += (b - self.grid.node(kb)) * 0.5 * (self.values[kb] + self.linear_value_at(b));
        }
        acc
    }
}

/// First node index with t_k ≥ position `p` (in node units).
pub(crate) fn snap_ceil(p: f64) -> usize {
    let r = p.round();
    if (p - r).abs() <= POS_SNAP {
        r as usize
    } else {
        p.ceil() as usize
    }
}

/// Last node index with t_k ≤ position `p` (in node units).
pub(crate) fn snap_floor(p: f64) -> usize {
    let r = p.round();
    if (p - r).abs() <= POS_SNAP {
        r as usize
    } else {
        p.floor() as usize
    }
}

/// Smooth random test function: partial Fourier sum with standard-normal
/// coefficients,
/// x(t) = a₀ + Σ_{k=1..modes} (a_k cos 2πkt + b_k sin 2πkt).
pub fn random_fourier(grid: UniformGrid, modes: usize, rng: &mut impl Rng) -> GridFunction {
    let a0: f64 = rng.sample(StandardNormal);
    let coeffs: Vec<(f64, f64)> = (0..modes)
        .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let two_pi = 2.0 * core::f64::consts::PI;
    let values = grid
        .nodes()
        .map(|t| {
            let mut v = a0;
            for (k, &(a, b)) in coeffs.iter().enumerate() {
                let phase = two_pi * (k + 1) as f64 * t;
                v += a * phase.cos() + b * phase.sin();
            }
            v
        })
        .collect();
    GridFunction::from_values_unchecked(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> UniformGrid {
        UniformGrid::new(n).unwrap()
    }

    #[test]
    fn grid_invariants() {
        assert!(UniformGrid::new(1).is_err());
        let g = grid(5000);
        assert_eq!(g.n_nodes(), 5001);
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(5000), 1.0);
        assert!((g.node(1) - g.spacing()).abs() == 0.0);
    }

    #[test]
    fn constructors_reject_bad_values() {
        let g = grid(4);
        assert!(GridFunction::new(g, vec![0.0; 3]).is_err());
        assert!(GridFunction::new(g, vec![0.0, 1.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(GridFunction::constant(g, f64::INFINITY).is_err());
        assert!(Weight::new(-0.1).is_err());
        assert!(Weight::new(f64::NAN).is_err());
    }

    #[test]
    fn inner_of_constants_sigma0() {
        let g = grid(100);
        let one = GridFunction::constant(g, 1.0).unwrap();
        let v = one.weighted_inner(&one, Weight::UNWEIGHTED).unwrap();
        assert!((v - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn inner_of_constants_sigma1_matches_closed_form() {
        let g = grid(5000);
        let one = GridFunction::constant(g, 1.0).unwrap();
        let v = one.weighted_inner(&one, Weight::new(1.0).unwrap()).unwrap();
        let exact = (1.0 - (-2.0_f64).exp()) / 2.0;
        assert!((v - exact).abs() <= 1e-6, "got {v}, want {exact}");
    }

    #[test]
    fn inner_linear_times_one() {
        let g = grid(5000);
        let t = GridFunction::from_fn(g, |t| t).unwrap();
        let one = GridFunction::constant(g, 1.0).unwrap();
        let v = t.weighted_inner(&one, Weight::UNWEIGHTED).unwrap();
        assert!((v - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn inner_rejects_grid_mismatch() {
        let a = GridFunction::zeros(grid(10));
        let b = GridFunction::zeros(grid(20));
        assert_eq!(
            a.weighted_inner(&b, Weight::UNWEIGHTED),
            Err(Error::IncompatibleGrids)
        );
    }

    #[test]
    fn norm_examples() {
        let g = grid(5000);
        let one = GridFunction::constant(g, 1.0).unwrap();
        assert!((one.weighted_norm(Weight::UNWEIGHTED) - 1.0).abs() <= 1e-12);
        let exact = ((1.0 - (-2.0_f64).exp()) / 2.0).sqrt();
        assert!((one.weighted_norm(Weight::new(1.0).unwrap()) - exact).abs() <= 1e-6);
        // homogeneity
        let three = GridFunction::constant(g, 3.0).unwrap();
        assert!((three.weighted_norm(Weight::UNWEIGHTED) - 3.0).abs() <= 1e-12);
        assert_eq!(
            GridFunction::zeros(g).weighted_norm(Weight::UNWEIGHTED),
            0.0
        );
    }

    #[test]
    fn sup_norm_examples() {
        let g = grid(100);
        assert_eq!(GridFunction::constant(g, -2.0).unwrap().sup_norm(), 2.0);
        assert_eq!(GridFunction::from_fn(g, |t| t).unwrap().sup_norm(), 1.0);
        assert_eq!(GridFunction::zeros(g).sup_norm(), 0.0);
    }

    #[test]
    fn apply_weight_examples() {
        let g = grid(100);
        let one = GridFunction::constant(g, 1.0).unwrap();
        let same = one.apply_weight(Weight::UNWEIGHTED, WeightDirection::Forward);
        assert_eq!(same, one);
        let w = Weight::new(1.0).unwrap();
        let fwd = one.apply_weight(w, WeightDirection::Forward);
        for (k, t) in g.nodes().enumerate() {
            assert_eq!(fwd.value(k), t.exp());
        }
    }

    #[test]
    fn apply_weight_round_trip() {
        let g = grid(300);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_fourier(g, 20, &mut rng);
        let w = Weight::new(2.0).unwrap();
        let rt = x
            .apply_weight(w, WeightDirection::Forward)
            .apply_weight(w, WeightDirection::Inverse);
        for k in 0..g.n_nodes() {
            let err = (rt.value(k) - x.value(k)).abs();
            assert!(err <= 1e-15 * x.value(k).abs().max(1.0), "node {k}: {err}");
        }
        // sigma = 0 round-trips bitwise
        let rt0 = x
            .apply_weight(Weight::UNWEIGHTED, WeightDirection::Forward)
            .apply_weight(Weight::UNWEIGHTED, WeightDirection::Inverse);
        assert_eq!(rt0, x);
    }

    #[test]
    fn weighting_is_isometric() {
        let g = grid(500);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for sigma in [0.5, 1.0, 5.0] {
            let w = Weight::new(sigma).unwrap();
            for _ in 0..50 {
                let x = random_fourier(g, 20, &mut rng);
                let n0 = x.weighted_norm(Weight::UNWEIGHTED);
                let ns = x.apply_weight(w, WeightDirection::Forward).weighted_norm(w);
                assert!((ns - n0).abs() <= 1e-10 * n0);
            }
        }
    }

    #[test]
    fn norm_equivalence() {
        let g = grid(200);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sigma in [0.5, 1.0, 5.0] {
            let w = Weight::new(sigma).unwrap();
            for _ in 0..1000 {
                let x = random_fourier(g, 20, &mut rng);
                let n0 = x.weighted_norm(Weight::UNWEIGHTED);
                let ns = x.weighted_norm(w);
                assert!((-sigma).exp() * n0 <= ns + 1e-10);
                assert!(ns <= n0 + 1e-10);
            }
        }
    }

    #[test]
    fn cauchy_schwarz() {
        let g = grid(200);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let w = Weight::new(1.0).unwrap();
        for _ in 0..500 {
            let x = random_fourier(g, 20, &mut rng);
            let y = random_fourier(g, 20, &mut rng);
            let ip = x.weighted_inner(&y, w).unwrap().abs();
            assert!(ip <= x.weighted_norm(w) * y.weighted_norm(w) + 1e-12);
        }
    }

    #[test]
    fn integral_linear_matches_closed_forms() {
        let g = grid(1000);
        let t = GridFunction::from_fn(g, |t| t).unwrap();
        // exact for the interpolant of a linear function on any window
        assert!((t.integral_linear(0.0, 1.0) - 0.5).abs() <= 1e-14);
        assert!((t.integral_linear(0.25, 0.75) - 0.25).abs() <= 1e-14);
        let (a, b) = (0.123456, 0.654321);
        assert!((t.integral_linear(a, b) - 0.5 * (b * b - a * a)).abs() <= 1e-14);
        // window inside a single segment
        let (a, b) = (0.00012, 0.00088);
        assert!((t.integral_linear(a, b) - 0.5 * (b * b - a * a)).abs() <= 1e-16);
    }
}
