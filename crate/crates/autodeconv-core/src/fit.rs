//! Least-squares slope on log-log axes, used by the convergence-order checks
//! and the rate studies.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Least-squares slope of ln(y) against ln(x).
///
/// For y ≈ C·x^p this returns p. Requires at least two strictly positive
/// samples on each axis.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("slope fit: mismatched sample counts"));
    }
    if xs.len() < 2 {
        return Err(Error::invalid("slope fit: need >= 2 samples"));
    }
    if xs.iter().chain(ys).any(|&v| !v.is_finite() || v <= 0.0) {
        return Err(Error::invalid(
            "slope fit: samples must be positive and finite",
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|&v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|&v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        return Err(Error::invalid("slope fit: degenerate abscissae"));
    }
    Ok(num / den)
}

/// Ceiling in real arithmetic: values within 1e−9 of an integer are snapped
/// first, so floating-point quotients like 1/0.0025 = 399.999…97 still yield
/// the mathematical ⌈1/δ⌉ = 400.
pub fn ceil_real(v: f64) -> usize {
    debug_assert!(v.is_finite() && v >= 0.0);
    let r = v.round();
    if (v - r).abs() <= 1e-9 {
        r as usize
    } else {
        v.ceil() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_real_snaps_near_integers() {
        assert_eq!(ceil_real(1.0 / 0.0025), 400);
        assert_eq!(ceil_real(1.0 / 0.04), 25);
        assert_eq!(ceil_real(400.0 + 3e-10), 400);
        assert_eq!(ceil_real(4.728), 5);
        assert_eq!(ceil_real(9.457), 10);
    }

    #[test]
    fn recovers_power_law() {
        let xs = [0.04, 0.02, 0.01, 0.005];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.5)).collect();
        let p = log_log_slope(&xs, &ys).unwrap();
        assert!((p - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(log_log_slope(&[0.1], &[1.0]).is_err());
        assert!(log_log_slope(&[0.1, 0.2], &[1.0]).is_err());
        assert!(log_log_slope(&[0.1, 0.2], &[1.0, -1.0]).is_err());
    }
}
