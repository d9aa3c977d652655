//! Numerical-bound property suites behind `autodeconv verify`: each check
//! exercises one proved bound or structural identity on seeded random inputs
//! and reports the observed value against the bound.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use autodeconv_core::autoconv::{forward, frechet_apply};
use autodeconv_core::fit::{ceil_real, log_log_slope};
use autodeconv_core::grid::{random_fourier, GridFunction, UniformGrid, Weight};
use autodeconv_core::initval::{estimate_x0_l2, estimate_x0_sup, NoiseKind, NoiseModel};
use autodeconv_core::pc::{pc_project, projector_gap, unweighted_projection_norm};
use autodeconv_core::solver::{pc_system_residual, solve_pc, SolveParams};

use crate::experiment::{generate_data, ProblemSpec, Solution};
use crate::Result;

/// Outcome of one numerical bound check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_bound(name: &str, observed: f64, bound: f64) -> Check {
        Check {
            name: name.to_string(),
            passed: observed <= bound,
            detail: format!("observed {observed:.3e} <= bound {bound:.3e}"),
        }
    }

    fn from_lower(name: &str, observed: f64, bound: f64) -> Check {
        Check {
            name: name.to_string(),
            passed: observed >= bound,
            detail: format!("observed {observed:.3} >= required {bound:.3}"),
        }
    }
}

/// Named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Projector,
    Operator,
    Initval,
    Solver,
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Projector => projector_suite(),
        Suite::Operator => operator_suite(),
        Suite::Initval => initval_suite(),
        Suite::Solver => solver_suite(),
    }
}

pub fn all_suites() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for suite in [
        Suite::Projector,
        Suite::Operator,
        Suite::Initval,
        Suite::Solver,
    ] {
        checks.extend(run_suite(suite)?);
    }
    Ok(checks)
}

/// Projector bounds: the weighted/unweighted projection gap ≤ 2σ/m, the
/// unweighted projection σ-norm ≤ 1 + 2σ/m, and first-order approximation
/// power in m.
pub fn projector_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for m in [10usize, 100] {
        let gap = projector_gap(m, 1.0, 200)?;
        checks.push(Check::from_bound(
            &format!("projector gap (m = {m}, sigma = 1, 200 trials)"),
            gap,
            2.0 / m as f64 + 1e-6,
        ));
    }
    for m in [10usize, 100] {
        let norm = unweighted_projection_norm(m, 1.0, 200)?;
        checks.push(Check::from_bound(
            &format!("unweighted projection norm (m = {m}, sigma = 1)"),
            norm,
            1.0 + 2.0 / m as f64 + 1e-6,
        ));
    }
    let grid = UniformGrid::new(5000)?;
    let x = GridFunction::from_fn(grid, |t| 2.0 + (4.0 * std::f64::consts::PI * t).cos())?;
    for sigma in [0.0, 1.0] {
        let w = Weight::new(sigma)?;
        let ms = [10.0, 20.0, 40.0, 80.0];
        let errs: Vec<f64> = ms
            .iter()
            .map(|&m| {
                let p = autodeconv_core::pc::pc_project(&x, m as usize, sigma)?;
                Ok(
                    x.zip_with(&autodeconv_core::pc::pc_eval(&p, grid), |a, b| a - b)
                        .weighted_norm(w),
                )
            })
            .collect::<Result<_>>()?;
        let order = -log_log_slope(&ms, &errs)?;
        checks.push(Check::from_lower(
            &format!("pc approximation order in m (sigma = {sigma})"),
            order,
            0.9,
        ));
    }
    Ok(checks)
}

/// Autoconvolution bounds ‖F(x)‖σ ≤ ‖x‖σ² and ‖F′(u)v‖σ ≤ 2‖u‖σ‖v‖σ over
/// 1000 random trial functions per σ, plus the exact quadratic-remainder
/// identity.
pub fn operator_suite() -> Result<Vec<Check>> {
    let grid = UniformGrid::new(1000)?;
    let mut checks = Vec::new();
    for sigma in [0.0, 1.0] {
        let w = Weight::new(sigma)?;
        let mut rng = ChaCha8Rng::seed_from_u64(1001);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let x = random_fourier(grid, 20, &mut rng);
            let nx = x.weighted_norm(w);
            worst = worst.max(forward(&x).weighted_norm(w) - nx * nx);
        }
        checks.push(Check::from_bound(
            &format!("forward norm bound slack (sigma = {sigma}, 1000 trials)"),
            worst,
            1e-8,
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(1002);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let u = random_fourier(grid, 20, &mut rng);
            let v = random_fourier(grid, 20, &mut rng);
            let lhs = frechet_apply(&u, &v)?.weighted_norm(w);
            worst = worst.max(lhs - 2.0 * u.weighted_norm(w) * v.weighted_norm(w));
        }
        checks.push(Check::from_bound(
            &format!("derivative norm bound slack (sigma = {sigma}, 1000 trials)"),
            worst,
            1e-8,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let x = random_fourier(grid, 20, &mut rng);
        let v = random_fourier(grid, 20, &mut rng);
        for eps in [1e-3, 1e-4] {
            let lhs = forward(&x.scaled_add(eps, &v))
                .zip_with(&forward(&x), |a, b| a - b)
                .zip_with(&frechet_apply(&x, &v)?, move |a, b| a - eps * b);
            let remainder = lhs.zip_with(&forward(&v).scale(eps * eps), |a, b| a - b);
            worst = worst.max(remainder.sup_norm());
        }
    }
    checks.push(Check::from_bound(
        "quadratic Taylor remainder identity",
        worst,
        1e-10,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut ok = true;
    for _ in 0..100 {
        let x = random_fourier(grid, 20, &mut rng).map(|v| v.abs());
        ok &= forward(&x).values().iter().all(|&v| v >= 0.0);
    }
    checks.push(Check {
        name: "nonnegative data from nonnegative input".into(),
        passed: ok,
        detail: if ok {
            "holds on 100 trials".into()
        } else {
            "violated".into()
        },
    });
    Ok(checks)
}

/// Initial-value estimator accuracy under both noise models.
pub fn initval_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    // sup-norm noise: |est - x0(0)| <= 4.25 sqrt(delta) on f1
    let mut worst_ratio = 0.0_f64;
    for &delta in &[0.04, 0.01, 0.0025, 0.001] {
        let m = ceil_real(1.0 / delta);
        for seed in 0..5u64 {
            let noise = NoiseModel::new(NoiseKind::SupNorm, delta, 500 + seed, 2.0)?;
            let spec = ProblemSpec::new(Solution::F1, 5000, noise, 0.0)?;
            let (_, _, yd) = generate_data(&spec)?;
            let est = estimate_x0_sup(&yd, delta, m)?;
            worst_ratio = worst_ratio.max((est - 2.0).abs() / (4.25 * delta.sqrt()));
        }
    }
    checks.push(Check::from_bound(
        "sup-noise estimator error / (4.25 sqrt(delta)) on f1 (4 levels x 5 seeds)",
        worst_ratio,
        1.0,
    ));

    // L2 noise: empirical order >= 0.35 (target 2/5)
    let deltas = [0.04, 0.01, 0.0025, 0.001];
    let mut means = Vec::new();
    for &delta in &deltas {
        let mut acc = 0.0;
        for seed in 0..5u64 {
            let noise = NoiseModel::new(NoiseKind::L2Norm, delta, 700 + seed, 2.0)?;
            let spec = ProblemSpec::new(Solution::F1, 5000, noise, 0.0)?;
            let (_, _, yd) = generate_data(&spec)?;
            acc += (estimate_x0_l2(&yd, delta, 2.0)? - 2.0).abs();
        }
        means.push(acc / 5.0);
    }
    checks.push(Check::from_lower(
        "L2-noise estimator empirical order in delta (target 0.4)",
        log_log_slope(&deltas, &means)?,
        0.35,
    ));
    Ok(checks)
}

/// Solver exactness and stability checks.
pub fn solver_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    // exact recursion residual over in-regime random configurations
    let mut worst = 0.0_f64;
    for (i, &delta) in [0.04, 0.01, 0.0025].iter().enumerate() {
        let noise = NoiseModel::new(NoiseKind::SupNorm, delta, 900 + i as u64, 2.0)?;
        let spec = ProblemSpec::new(Solution::F1, 2000, noise, 0.25 * i as f64)?;
        let (_, _, yd) = generate_data(&spec)?;
        let m = ceil_real(1.0 / delta);
        let p = SolveParams::new(delta.sqrt(), m, spec.sigma)?;
        let xs = GridFunction::constant(UniformGrid::new(2000)?, 2.0)?;
        let res = solve_pc(&yd, &xs, &p)?;
        let resid = pc_system_residual(res.pc.as_ref().unwrap(), &yd, &xs, &p)?;
        let yi = pc_project(&yd, m, spec.sigma)?;
        for (r, s) in resid.iter().zip(yi.coeffs()) {
            worst = worst.max(r.abs() / (1.0 + s.abs()));
        }
    }
    checks.push(Check::from_bound(
        "explicit-solver component residuals (scaled)",
        worst,
        1e-10,
    ));

    // noiseless consistency
    let noise = NoiseModel::new(NoiseKind::SupNorm, 0.0, 0, 2.0)?;
    let spec = ProblemSpec::new(Solution::F1, 5000, noise, 0.0)?;
    let (x0, _, y0) = generate_data(&spec)?;
    let grid = UniformGrid::new(5000)?;
    let p = SolveParams::new(1e-4, 400, 0.0)?;
    let res = solve_pc(&y0, &GridFunction::zeros(grid), &p)?;
    let err = res
        .reconstruction
        .zip_with(&x0, |a, b| a - b)
        .weighted_norm(Weight::UNWEIGHTED);
    checks.push(Check::from_bound(
        "noiseless consistency (delta = 0, alpha = 1e-4, m = 400)",
        err,
        5e-2,
    ));

    // monotone pull toward the reference element
    let noise = NoiseModel::new(NoiseKind::SupNorm, 0.04, 5, 2.0)?;
    let spec = ProblemSpec::new(Solution::F1, 2000, noise, 0.0)?;
    let (_, _, yd) = generate_data(&spec)?;
    let xs = GridFunction::constant(UniformGrid::new(2000)?, 2.0)?;
    let mut last = f64::INFINITY;
    let mut monotone = true;
    for alpha in [1e-2, 1.0, 1e2, 1e4] {
        let p = SolveParams::new(alpha, 25, 0.0)?;
        let d = solve_pc(&yd, &xs, &p)?
            .reconstruction
            .zip_with(&xs, |a, b| a - b)
            .weighted_norm(Weight::UNWEIGHTED);
        monotone &= d <= last + 1e-10;
        last = d;
    }
    checks.push(Check {
        name: "distance to reference nonincreasing in alpha".into(),
        passed: monotone,
        detail: format!("final distance {last:.3e}"),
    });

    // weighted-vs-unweighted projection stability gap shrinks at order >= 0.9
    let noise = NoiseModel::new(NoiseKind::SupNorm, 0.0025, 42, 2.0)?;
    let spec = ProblemSpec::new(Solution::F1, 5000, noise, 0.0)?;
    let (_, _, yd) = generate_data(&spec)?;
    let xs = GridFunction::constant(UniformGrid::new(5000)?, 2.0)?;
    let w = Weight::new(1.0)?;
    let ms = [25.0, 50.0, 100.0, 200.0];
    let gaps: Vec<f64> = ms
        .iter()
        .map(|&mf| {
            let m = mf as usize;
            let weighted = solve_pc(&yd, &xs, &SolveParams::new(0.05, m, 1.0)?)?;
            let plain = solve_pc(&yd, &xs, &SolveParams::new(0.05, m, 0.0)?)?;
            Ok(weighted
                .reconstruction
                .zip_with(&plain.reconstruction, |a, b| a - b)
                .weighted_norm(w))
        })
        .collect::<Result<_>>()?;
    checks.push(Check::from_lower(
        "sigma-extension stability gap order in m",
        -log_log_slope(&ms, &gaps)?,
        0.9,
    ));
    Ok(checks)
}
