//! σ-weighted piecewise-constant approximation spaces.
//!
//! The basis functions are f_i(s) = e^(σs) on the half-open cell
//! Δ_i = [(i−1)/m, i/m) and zero elsewhere (t = 1 belongs to the last cell),
//! so the projection of x onto span{f_i} orthogonal in L²σ has coefficients
//!
//! > xⁱ = m ∫_{Δ_i} e^(−σt) x(t) dt,
//!
//! and ⟨f_i, f_j⟩σ = δ_ij/m. For σ = 0 this is the ordinary cell-average
//! projection onto piecewise constants.
//!
//! Grid functions only carry node samples, so the cell integrals interpolate
//! the weight-removed samples e^(−σt_k)x_k linearly through each cell's own
//! nodes and extend the boundary pieces one-sidedly. On anything in the range
//! of [`pc_eval`] the weight-removed samples are cell-wise constant, which
//! makes project ∘ eval exact to rounding; interpolating across a cell
//! boundary instead would smear the jump by (m/2N)·|jump|.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{random_fourier, snap_ceil, GridFunction, UniformGrid, Weight, POS_SNAP};
use crate::DEFAULT_FINE_N;

/// Base seed for the Monte-Carlo bound estimates; trial i uses stream
/// `MC_SEED + i`.
const MC_SEED: u64 = 715_517;

/// Coefficients xⁱ of Σ xⁱ f_i in the σ-weighted piecewise-constant basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PcCoeffs {
    m: usize,
    sigma: f64,
    coeffs: Vec<f64>,
}

impl PcCoeffs {
    pub fn new(m: usize, sigma: f64, coeffs: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("pc level m must be positive"));
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::invalid("sigma must be finite and >= 0"));
        }
        if coeffs.len() != m {
            return Err(Error::invalid("coefficient count must equal m"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("pc coefficients"));
        }
        Ok(PcCoeffs { m, sigma, coeffs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// 0-based index of the half-open cell [(i−1)/m, i/m) containing t;
/// t = 1 maps to the last cell.
pub(crate) fn cell_index(t: f64, m: usize) -> usize {
    let p = t * m as f64;
    let r = p.round();
    let idx = if (p - r).abs() <= POS_SNAP {
        r as usize
    } else {
        p.floor() as usize
    };
    idx.min(m - 1)
}

/// Q_m^σ x: the m σ-weighted cell averages of the sampled function.
pub fn pc_project(x: &GridFunction, m: usize, sigma: f64) -> Result<PcCoeffs> {
    if m < 2 {
        return Err(Error::invalid("pc projection needs m >= 2"));
    }
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::invalid("sigma must be finite and >= 0"));
    }
    let grid = x.grid();
    let n = grid.n_cells();
    let h = grid.spacing();
    // weight-removed samples
    let g = if sigma == 0.0 {
        x.clone()
    } else {
        x.map_nodes(|t, v| v * (-sigma * t).exp())
    };
    let gv = g.values();
    let mf = m as f64;
    let mut coeffs = Vec::with_capacity(m);
    for i in 1..=m {
        let left = (i - 1) as f64 / mf;
        let right = i as f64 / mf;
        // own nodes: t_k in [left, right), plus t = 1 for the last cell
        let k0 = snap_ceil(left * n as f64);
        let k1 = if i == m {
            n
        } else {
            let p = right * n as f64;
            let r = p.round();
            if (p - r).abs() <= POS_SNAP {
                r as usize - 1
            } else {
                p.floor() as usize
            }
        };
        let integral = if k1 <= k0 {
            // cell owns fewer than two nodes; fall back to the global
            // interpolant
            g.integral_linear(left, right)
        } else {
            let mut acc = 0.0;
            for k in k0..k1 {
                acc += h * 0.5 * (gv[k] + gv[k + 1]);
            }
            let t0 = grid.node(k0);
            if t0 - left > POS_SNAP * h {
                let slope = (gv[k0 + 1] - gv[k0]) / h;
                let gl = gv[k0] - slope * (t0 - left);
                acc += (t0 - left) * 0.5 * (gl + gv[k0]);
            }
            let t1 = grid.node(k1);
            if right - t1 > POS_SNAP * h {
                let slope = (gv[k1] - gv[k1 - 1]) / h;
                let gr = gv[k1] + slope * (right - t1);
                acc += (right - t1) * 0.5 * (gv[k1] + gr);
            }
            acc
        };
        coeffs.push(mf * integral);
    }
    Ok(PcCoeffs { m, sigma, coeffs })
}

/// Nodewise evaluation of Σ xⁱ f_i.
pub fn pc_eval(p: &PcCoeffs, grid: UniformGrid) -> GridFunction {
    let sigma = p.sigma;
    let values = grid
        .nodes()
        .map(|t| {
            let c = p.coeffs[cell_index(t, p.m)];
            if sigma == 0.0 {
                c
            } else {
                c * (sigma * t).exp()
            }
        })
        .collect();
    GridFunction::from_values_unchecked(grid, values)
}

/// Monte-Carlo lower estimate of ‖Q_m − Q_m^σ‖ in the σ → σ operator norm:
/// the maximum over smooth random trial functions of
/// ‖(Q_m⁰ − Q_m^σ)x‖σ / ‖x‖σ. Bounded by 2σ/m for m ≥ σ.
pub fn projector_gap(m: usize, sigma: f64, trials: usize) -> Result<f64> {
    if !sigma.is_finite() || sigma < 0.0 || (m as f64) < sigma {
        return Err(Error::invalid("projector gap requires m >= sigma >= 0"));
    }
    let grid = UniformGrid::new(DEFAULT_FINE_N)?;
    let w = Weight::new(sigma)?;
    let mut worst = 0.0_f64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(MC_SEED + trial as u64);
        let x = random_fourier(grid, 20, &mut rng);
        let q0 = pc_eval(&pc_project(&x, m, 0.0)?, grid);
        let qs = pc_eval(&pc_project(&x, m, sigma)?, grid);
        let gap = q0.zip_with(&qs, |a, b| a - b).weighted_norm(w) / x.weighted_norm(w);
        worst = worst.max(gap);
    }
    Ok(worst)
}

/// Monte-Carlo lower estimate of ‖Q_m⁰‖ in the σ → σ operator norm
/// (bounded by 1 + 2σ/m).
pub fn unweighted_projection_norm(m: usize, sigma: f64, trials: usize) -> Result<f64> {
    if !sigma.is_finite() || sigma < 0.0 || (m as f64) < sigma {
        return Err(Error::invalid("norm estimate requires m >= sigma >= 0"));
    }
    let grid = UniformGrid::new(DEFAULT_FINE_N)?;
    let w = Weight::new(sigma)?;
    let mut worst = 0.0_f64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(MC_SEED + trial as u64);
        let x = random_fourier(grid, 20, &mut rng);
        let q0 = pc_eval(&pc_project(&x, m, 0.0)?, grid);
        worst = worst.max(q0.weighted_norm(w) / x.weighted_norm(w));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::log_log_slope;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> UniformGrid {
        UniformGrid::new(n).unwrap()
    }

    #[test]
    fn rejects_small_m() {
        let x = GridFunction::zeros(grid(100));
        assert!(pc_project(&x, 1, 0.0).is_err());
    }

    #[test]
    fn constants_project_to_weighted_averages() {
        let g = grid(5000);
        let c = 2.5;
        let x = GridFunction::constant(g, c).unwrap();
        let p0 = pc_project(&x, 7, 0.0).unwrap();
        for &v in p0.coeffs() {
            assert!((v - c).abs() <= 1e-12);
        }
        for sigma in [1.0, 3.0] {
            let p = pc_project(&x, 7, sigma).unwrap();
            for (i, &v) in p.coeffs().iter().enumerate() {
                let l = i as f64 / 7.0;
                let r = (i + 1) as f64 / 7.0;
                let exact = 7.0 * c * ((-sigma * l).exp() - (-sigma * r).exp()) / sigma;
                assert!((v - exact).abs() <= 1e-6, "sigma {sigma} cell {i}");
            }
        }
    }

    #[test]
    fn identity_function_m2() {
        let g = grid(5000);
        let x = GridFunction::from_fn(g, |t| t).unwrap();
        let p = pc_project(&x, 2, 0.0).unwrap();
        assert!((p.coeffs()[0] - 0.25).abs() <= 1e-12);
        assert!((p.coeffs()[1] - 0.75).abs() <= 1e-12);
    }

    #[test]
    fn eval_examples() {
        let g = grid(5000);
        let p = PcCoeffs::new(4, 0.0, alloc::vec![1.5; 4]).unwrap();
        assert_eq!(pc_eval(&p, g), GridFunction::constant(g, 1.5).unwrap());

        let mut coeffs = alloc::vec![0.0; 5];
        coeffs[0] = 1.0;
        let p = PcCoeffs::new(5, 1.0, coeffs).unwrap();
        let e = pc_eval(&p, g);
        for (k, t) in g.nodes().enumerate() {
            if t < 0.2 {
                assert_eq!(e.value(k), t.exp());
            } else {
                assert_eq!(e.value(k), 0.0);
            }
        }
    }

    #[test]
    fn boundary_nodes_belong_to_the_right_cell() {
        let g = grid(10);
        let p = PcCoeffs::new(2, 0.0, alloc::vec![1.0, 2.0]).unwrap();
        let e = pc_eval(&p, g);
        assert_eq!(e.value(4), 1.0);
        assert_eq!(e.value(5), 2.0); // t = 0.5 opens the second cell
        assert_eq!(e.value(10), 2.0); // t = 1 belongs to the last cell
    }

    #[test]
    fn project_after_eval_is_identity() {
        let g = grid(5000);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for sigma in [0.0, 1.0] {
            // aligned (5000 % 10 == 0) and unaligned (5000 % 7 != 0) levels
            for m in [10usize, 7] {
                let x = random_fourier(g, 20, &mut rng);
                let p = pc_project(&x, m, sigma).unwrap();
                let rt = pc_project(&pc_eval(&p, g), m, sigma).unwrap();
                for (a, b) in rt.coeffs().iter().zip(p.coeffs()) {
                    assert!((a - b).abs() <= 1e-9, "sigma {sigma} m {m}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn projected_residual_vanishes() {
        // residual ⟂ range, stated through the defining cell-integral
        // functional: projecting x − Q_m^σ x gives zero coefficients
        let g = grid(5000);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for sigma in [0.0, 1.0] {
            let x = random_fourier(g, 20, &mut rng);
            let p = pc_project(&x, 10, sigma).unwrap();
            let resid = x.zip_with(&pc_eval(&p, g), |a, b| a - b);
            let back = pc_project(&resid, 10, sigma).unwrap();
            let scale = x.sup_norm();
            for &c in back.coeffs() {
                assert!(c.abs() <= 1e-8 * scale.max(1.0), "sigma {sigma}: {c}");
            }
        }
    }

    #[test]
    fn projection_contracts_weighted_norm() {
        let g = grid(2000);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for sigma in [0.0, 1.0] {
            let w = Weight::new(sigma).unwrap();
            for _ in 0..100 {
                let x = random_fourier(g, 20, &mut rng);
                let qx = pc_eval(&pc_project(&x, 25, sigma).unwrap(), g);
                assert!(qx.weighted_norm(w) <= x.weighted_norm(w) + 1e-8);
            }
        }
    }

    #[test]
    fn approximation_order_in_m() {
        let g = grid(5000);
        let x =
            GridFunction::from_fn(g, |t| 2.0 + (4.0 * core::f64::consts::PI * t).cos()).unwrap();
        let ms = [10.0, 20.0, 40.0, 80.0];
        for sigma in [0.0, 1.0] {
            let w = Weight::new(sigma).unwrap();
            let errs: Vec<f64> = ms
                .iter()
                .map(|&m| {
                    let p = pc_project(&x, m as usize, sigma).unwrap();
                    x.zip_with(&pc_eval(&p, g), |a, b| a - b).weighted_norm(w)
                })
                .collect();
            let order = -log_log_slope(&ms, &errs).unwrap();
            assert!(order >= 0.9, "sigma {sigma}: order {order}");
        }
    }

    #[test]
    fn gap_vanishes_at_sigma_zero() {
        assert_eq!(projector_gap(10, 0.0, 5).unwrap(), 0.0);
    }

    #[test]
    fn gap_respects_lemma_bound() {
        let gap = projector_gap(10, 1.0, 50).unwrap();
        assert!(gap <= 0.2 + 1e-6, "gap {gap}");
        assert!(projector_gap(2, 3.0, 1).is_err()); // m < sigma
    }

    #[test]
    fn unweighted_projection_norm_bound() {
        let norm = unweighted_projection_norm(10, 1.0, 50).unwrap();
        assert!(norm <= 1.0 + 0.2 + 1e-6, "norm {norm}");
    }
}
