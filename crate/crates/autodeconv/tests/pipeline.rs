//! End-to-end pipeline invariants on shared noisy data.

use autodeconv::experiment::{run_single, AlphaRule, Method, ProblemSpec, Solution};
use autodeconv_core::grid::{UniformGrid, Weight};
use autodeconv_core::initval::{NoiseKind, NoiseModel};
use autodeconv_core::solver::smoothing_intervals;
use autodeconv_core::spline::{spline_eval, spline_project};

fn f1_spec(delta: f64, seed: u64) -> ProblemSpec {
    let noise = NoiseModel::new(NoiseKind::SupNorm, delta, seed, 2.0).unwrap();
    ProblemSpec::new(Solution::F1, 5000, noise, 0.0).unwrap()
}

#[test]
fn error_ordering_at_smallest_delta() {
    let delta = 0.0025;
    let spec = f1_spec(delta, 42);
    let rule = AlphaRule::SqrtDelta(1.0);
    let pc = run_single(&spec, Method::Pc, rule, None, None).unwrap();
    let smoothed = run_single(&spec, Method::PcSmoothed, rule, None, None).unwrap();
    let cubic = run_single(&spec, Method::Cubic, rule, None, None).unwrap();

    // smoothing can cost at most the spline approximation error of x0
    let grid = UniformGrid::new(5000).unwrap();
    let m_s = smoothing_intervals(delta).unwrap();
    let best = spline_eval(&spline_project(&pc.x0, m_s).unwrap(), grid)
        .zip_with(&pc.x0, |a, b| a - b)
        .weighted_norm(Weight::UNWEIGHTED);
    assert!(
        smoothed.l2_error <= pc.l2_error + best + 1e-8,
        "smoothed {} > pc {} + best {}",
        smoothed.l2_error,
        pc.l2_error,
        best
    );
    // direct cubic discretization lands near the smoothed solution
    assert!(
        cubic.l2_error <= 2.0 * smoothed.l2_error,
        "cubic {} > 2 x smoothed {}",
        cubic.l2_error,
        smoothed.l2_error
    );
}

#[test]
fn reference_run_error_level() {
    let run = run_single(
        &f1_spec(0.0025, 42),
        Method::Pc,
        AlphaRule::SqrtDelta(1.0),
        None,
        None,
    )
    .unwrap();
    assert!(run.l2_error <= 0.12, "seed-42 error {}", run.l2_error);
    assert_eq!(run.m, 400);
    assert!((run.alpha - 0.05).abs() <= 1e-15);
}

#[test]
fn identical_specs_give_identical_runs() {
    let spec = f1_spec(0.01, 7);
    let a = run_single(&spec, Method::Pc, AlphaRule::SqrtDelta(1.0), None, None).unwrap();
    let b = run_single(&spec, Method::Pc, AlphaRule::SqrtDelta(1.0), None, None).unwrap();
    assert_eq!(a.reconstruction, b.reconstruction);
    assert_eq!(a.l2_error, b.l2_error);
}

#[test]
fn l2_noise_pipeline_runs() {
    let noise = NoiseModel::new(NoiseKind::L2Norm, 0.01, 3, 2.0).unwrap();
    let spec = ProblemSpec::new(Solution::F1, 5000, noise, 0.0).unwrap();
    let run = run_single(&spec, Method::Pc, AlphaRule::TwoFifths(1.0), None, None).unwrap();
    assert!((run.alpha - 0.01_f64.powf(0.4)).abs() <= 1e-15);
    assert!(run.l2_error < 0.5);
}

#[test]
fn weighted_solve_pipeline_runs() {
    let noise = NoiseModel::new(NoiseKind::SupNorm, 0.01, 11, 2.0).unwrap();
    let spec = ProblemSpec::new(Solution::F1, 5000, noise, 1.0).unwrap();
    let run = run_single(&spec, Method::Pc, AlphaRule::SqrtDelta(1.0), None, None).unwrap();
    assert!(run.l2_error < 0.5);
    assert!(run.residual_sigma <= 1e-10);
}
