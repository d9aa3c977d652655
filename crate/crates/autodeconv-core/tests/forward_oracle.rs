//! Checks the trapezoidal forward operator against an independent adaptive
//! Simpson quadrature of the exact integrand.

mod common;

use autodeconv_core::autoconv::forward;
use autodeconv_core::grid::UniformGrid;

#[allow(clippy::too_many_arguments)]
fn simpson_segment(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_segment(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_segment(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_segment(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[test]
fn forward_matches_adaptive_simpson_on_f1() {
    let x0 = |t: f64| t * t - 2.0 * t + 2.0;
    let g = UniformGrid::new(5000).unwrap();
    let y = forward(&common::f1(g));
    for k in (0..=5000usize).step_by(25).chain([1, 4999]) {
        let s = g.node(k);
        let oracle = adaptive_simpson(&|t| x0(s - t) * x0(t), 0.0, s, 1e-10);
        let err = (y.value(k) - oracle).abs();
        assert!(
            err <= 5e-7,
            "node {k} (s = {s}): |{} - {oracle}| = {err}",
            y.value(k)
        );
    }
}
