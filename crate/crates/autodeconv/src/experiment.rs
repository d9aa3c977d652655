//! Synthetic problems, parameter-choice rules and the convergence-rate study.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use autodeconv_core::autoconv::forward;
use autodeconv_core::fit::{ceil_real, log_log_slope};
use autodeconv_core::grid::{GridFunction, UniformGrid, Weight};
use autodeconv_core::initval::{clip_nonneg, reference_element, NoiseKind, NoiseModel};
use autodeconv_core::solver::{post_smooth, solve_pc, solve_spline, SolveParams};
use autodeconv_core::spline::spline_eval;
use autodeconv_core::Error as CoreError;

use crate::{Error, Result};

/// Exact solution of a synthetic problem.
#[derive(Debug, Clone)]
pub enum Solution {
    /// x₀(t) = t² − 2t + 2 (positive, decreasing, convex).
    F1,
    /// x₀(t) = 2 + cos(4πt).
    F2,
    /// User-supplied samples on a uniform grid over [0,1], resampled to the
    /// fine grid by linear interpolation.
    Custom(Vec<(f64, f64)>),
}

impl Solution {
    pub fn sample(&self, grid: UniformGrid) -> Result<GridFunction> {
        match self {
            Solution::F1 => Ok(GridFunction::from_fn(grid, |t| t * t - 2.0 * t + 2.0)?),
            Solution::F2 => Ok(GridFunction::from_fn(grid, |t| {
                2.0 + (4.0 * std::f64::consts::PI * t).cos()
            })?),
            Solution::Custom(samples) => {
                if samples.len() < 2 {
                    return Err(Error::Format("custom solution needs >= 2 samples".into()));
                }
                let n = samples.len() - 1;
                let values = grid
                    .nodes()
                    .map(|t| {
                        let p = (t * n as f64).clamp(0.0, n as f64);
                        let j = (p.floor() as usize).min(n - 1);
                        let frac = p - j as f64;
                        samples[j].1 + frac * (samples[j + 1].1 - samples[j].1)
                    })
                    .collect();
                Ok(GridFunction::new(grid, values)?)
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Solution::F1 => "f1",
            Solution::F2 => "f2",
            Solution::Custom(_) => "custom",
        }
    }
}

/// Upper bound for ‖x‖_C¹ read off the samples (sup of values and forward
/// differences); feeds the L²-noise estimator when no explicit bound is
/// given.
pub fn c1_bound(x: &GridFunction) -> f64 {
    let h = x.grid().spacing();
    let vals = x.values();
    let mut sup = 0.0_f64;
    let mut slope = 0.0_f64;
    for w in vals.windows(2) {
        sup = sup.max(w[0].abs());
        slope = slope.max((w[1] - w[0]).abs() / h);
    }
    sup.max(vals[vals.len() - 1].abs()).max(slope)
}

/// Full description of a synthetic reconstruction problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub solution: Solution,
    pub fine_n: usize,
    pub noise: NoiseModel,
    pub sigma: f64,
}

impl ProblemSpec {
    pub fn new(solution: Solution, fine_n: usize, noise: NoiseModel, sigma: f64) -> Result<Self> {
        if fine_n < 100 {
            return Err(CoreError::Invalid("fine grid needs at least 100 cells".into()).into());
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(CoreError::Invalid("sigma must be finite and >= 0".into()).into());
        }
        Ok(ProblemSpec {
            solution,
            fine_n,
            noise,
            sigma,
        })
    }

    fn grid(&self) -> Result<UniformGrid> {
        Ok(UniformGrid::new(self.fine_n)?)
    }
}

/// Samples x₀, computes exact data y₀ = F(x₀) and perturbs:
/// y^δ = clip(y₀ + δξ) with seeded i.i.d. uniform ξ rescaled so that
/// ‖ξ‖∞ = 1 exactly (sup-norm model) or ‖ξ‖₂ = 1 (L² model).
pub fn generate_data(spec: &ProblemSpec) -> Result<(GridFunction, GridFunction, GridFunction)> {
    let grid = spec.grid()?;
    let x0 = spec.solution.sample(grid)?;
    let y0 = forward(&x0);
    let delta = spec.noise.delta;
    if delta == 0.0 {
        let yd = y0.clone();
        return Ok((x0, y0, yd));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.noise.seed);
    let raw: Vec<f64> = (0..grid.n_nodes())
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect();
    let xi = GridFunction::new(grid, raw)?;
    let scale = match spec.noise.kind {
        NoiseKind::SupNorm => xi.sup_norm(),
        NoiseKind::L2Norm => xi.weighted_norm(Weight::UNWEIGHTED),
    };
    let xi = xi.scale(1.0 / scale);
    let yd = clip_nonneg(&y0.scaled_add(delta, &xi));
    Ok((x0, y0, yd))
}

/// A priori regularization-parameter schedules tied to the noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaRule {
    /// α = c·√δ (sup-norm noise).
    SqrtDelta(f64),
    /// α = c·δ^(2/5) (L²-noise).
    TwoFifths(f64),
}

pub fn choose_alpha(delta: f64, rule: AlphaRule) -> Result<f64> {
    if !delta.is_finite() || delta <= 0.0 || delta > 1.0 {
        return Err(CoreError::Invalid("delta must lie in (0, 1]".into()).into());
    }
    let (c, alpha) = match rule {
        AlphaRule::SqrtDelta(c) => (c, c * delta.sqrt()),
        AlphaRule::TwoFifths(c) => (c, c * delta.powf(0.4)),
    };
    if !c.is_finite() || c <= 0.0 {
        return Err(CoreError::Invalid("alpha rule constant c must be positive".into()).into());
    }
    Ok(alpha)
}

/// Approximation space of a solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    PiecewiseConstant,
    CubicSpline,
}

/// Discretization-level rules: m = ⌈1/δ⌉ for piecewise constants,
/// m = ⌈(20/δ)^(1/4)⌉ for cubic splines.
pub fn choose_m(delta: f64, space: SpaceKind) -> Result<usize> {
    if !delta.is_finite() || delta <= 0.0 || delta > 1.0 {
        return Err(CoreError::Invalid("delta must lie in (0, 1]".into()).into());
    }
    Ok(match space {
        SpaceKind::PiecewiseConstant => ceil_real(1.0 / delta),
        SpaceKind::CubicSpline => ceil_real((20.0 / delta).powf(0.25)),
    })
}

/// Reconstruction method of the experiment pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Method {
    /// Explicit piecewise-constant solver.
    #[value(name = "pc")]
    Pc,
    /// Explicit solver followed by cubic post-smoothing.
    #[value(name = "pc-smooth")]
    PcSmoothed,
    /// Direct cubic-spline Galerkin solver.
    #[value(name = "cubic")]
    Cubic,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Pc => "pc",
            Method::PcSmoothed => "pc-smooth",
            Method::Cubic => "cubic",
        }
    }

    fn space(&self) -> SpaceKind {
        match self {
            Method::Pc | Method::PcSmoothed => SpaceKind::PiecewiseConstant,
            Method::Cubic => SpaceKind::CubicSpline,
        }
    }
}

/// Everything a single pipeline run produced.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub method: Method,
    pub delta: f64,
    pub alpha: f64,
    pub m: usize,
    pub sigma: f64,
    pub l2_error: f64,
    pub residual_sigma: f64,
    pub iterations: usize,
    pub wall_time: f64,
    pub x0: GridFunction,
    pub reconstruction: GridFunction,
}

/// Full pipeline: data generation, reference element, parameter choice and
/// the selected solver. `alpha_override`/`m_override` bypass the rules (and
/// are required for noiseless runs, where the rules degenerate).
pub fn run_single(
    spec: &ProblemSpec,
    method: Method,
    alpha_rule: AlphaRule,
    alpha_override: Option<f64>,
    m_override: Option<usize>,
) -> Result<RunResult> {
    let grid = spec.grid()?;
    let delta = spec.noise.delta;
    let (x0, _y0, yd) = generate_data(spec)?;

    let alpha = match alpha_override {
        Some(a) => a,
        None => choose_alpha(delta, alpha_rule)?,
    };
    let m = match m_override {
        Some(m) => m,
        None => choose_m(delta, method.space())?,
    };

    // the x0(0)-estimator has its own level requirement m_est*delta >= 1,
    // independent of the solver level
    let x_star = if delta == 0.0 {
        GridFunction::zeros(grid)
    } else {
        let m_est = ceil_real(1.0 / delta);
        reference_element(&yd, &spec.noise, m_est, grid)?
    };

    let params = SolveParams::new(alpha, m, spec.sigma)?;
    let start = Instant::now();
    let (reconstruction, residual_sigma, iterations) = match method {
        Method::Pc => {
            let res = solve_pc(&yd, &x_star, &params)?;
            (res.reconstruction, res.residual_sigma, res.iterations)
        }
        Method::PcSmoothed => {
            let res = solve_pc(&yd, &x_star, &params)?;
            let pc = res.pc.as_ref().expect("pc solver returns coefficients");
            let smooth = post_smooth(pc, delta, grid)?;
            (
                spline_eval(&smooth, grid),
                res.residual_sigma,
                res.iterations,
            )
        }
        Method::Cubic => {
            let res = solve_spline(&yd, &x_star, &params)?;
            (res.reconstruction, res.residual_sigma, res.iterations)
        }
    };
    let wall_time = start.elapsed().as_secs_f64();
    let l2_error = reconstruction
        .zip_with(&x0, |a, b| a - b)
        .weighted_norm(Weight::UNWEIGHTED);

    Ok(RunResult {
        method,
        delta,
        alpha,
        m,
        sigma: spec.sigma,
        l2_error,
        residual_sigma,
        iterations,
        wall_time,
        x0,
        reconstruction,
    })
}

/// One rate-study cell (a single seeded run).
#[derive(Debug, Clone)]
pub struct RateRow {
    pub delta: f64,
    pub method: Method,
    pub m: usize,
    pub alpha: f64,
    pub l2_error: f64,
    pub residual: f64,
    pub wall_time: f64,
}

#[derive(Debug, Clone)]
pub struct RateStudyResult {
    pub rows: Vec<RateRow>,
    /// Least-squares slope of −ln(mean error) versus −ln(δ) per method.
    pub fitted_slopes: BTreeMap<Method, f64>,
}

impl RateStudyResult {
    /// Mean error over the repeats of each (δ, method) cell, in row order.
    pub fn mean_errors(&self, method: Method) -> Vec<(f64, f64)> {
        let mut acc: Vec<(f64, f64, usize)> = Vec::new();
        for row in self.rows.iter().filter(|r| r.method == method) {
            match acc.last_mut() {
                Some(last) if last.0 == row.delta => {
                    last.1 += row.l2_error;
                    last.2 += 1;
                }
                _ => acc.push((row.delta, row.l2_error, 1)),
            }
        }
        acc.into_iter()
            .map(|(d, sum, n)| (d, sum / n as f64))
            .collect()
    }
}

/// Runs the full pipeline over a δ-grid with the α = √δ schedule and the
/// per-method m-rules, `repeats` noise realizations per cell (seeds seed,
/// seed+1, …), and fits the convergence slope per method. Cells run on a
/// bounded worker pool; results are gathered in input order. Failed cells
/// are logged, skipped and excluded from the fit.
pub fn rate_study(
    spec_template: &ProblemSpec,
    deltas: &[f64],
    methods: &[Method],
    repeats: usize,
) -> Result<RateStudyResult> {
    if deltas.len() < 2 {
        return Err(CoreError::Invalid("need >= 2 deltas for a slope fit".into()).into());
    }
    if !deltas.windows(2).all(|w| w[0] > w[1]) {
        return Err(CoreError::Invalid("deltas must be strictly decreasing".into()).into());
    }
    if deltas
        .iter()
        .any(|&d| !d.is_finite() || d <= 0.0 || d > 1.0)
    {
        return Err(CoreError::Invalid("every delta must lie in (0, 1]".into()).into());
    }
    if methods.is_empty() {
        return Err(CoreError::Invalid("need at least one method".into()).into());
    }
    if repeats == 0 {
        return Err(CoreError::Invalid("repeats must be >= 1".into()).into());
    }

    let cells: Vec<(f64, Method, u64)> = deltas
        .iter()
        .flat_map(|&d| {
            methods
                .iter()
                .flat_map(move |&m| (0..repeats as u64).map(move |r| (d, m, r)))
        })
        .collect();

    let outcomes: Vec<Option<RateRow>> = cells
        .par_iter()
        .map(|&(delta, method, rep)| {
            let mut noise = spec_template.noise;
            noise.delta = delta;
            noise.seed = spec_template.noise.seed + rep;
            let spec = ProblemSpec {
                solution: spec_template.solution.clone(),
                fine_n: spec_template.fine_n,
                noise,
                sigma: spec_template.sigma,
            };
            match run_single(&spec, method, AlphaRule::SqrtDelta(1.0), None, None) {
                Ok(run) => Some(RateRow {
                    delta,
                    method,
                    m: run.m,
                    alpha: run.alpha,
                    l2_error: run.l2_error,
                    residual: run.residual_sigma,
                    wall_time: run.wall_time,
                }),
                Err(err) => {
                    log::warn!(
                        "rate cell failed (delta = {delta}, method = {}, repeat = {rep}): {err}",
                        method.label()
                    );
                    None
                }
            }
        })
        .collect();

    let rows: Vec<RateRow> = outcomes.into_iter().flatten().collect();

    let mut fitted_slopes = BTreeMap::new();
    let result = RateStudyResult {
        rows,
        fitted_slopes: BTreeMap::new(),
    };
    for &method in methods {
        let means = result.mean_errors(method);
        if means.len() < 2 {
            return Err(CoreError::Invalid(format!(
                "method {} has < 2 usable deltas",
                method.label()
            ))
            .into());
        }
        let (ds, errs): (Vec<f64>, Vec<f64>) = means.into_iter().unzip();
        // slope of -ln(err) vs -ln(delta) equals the log-log slope in delta
        fitted_slopes.insert(method, log_log_slope(&ds, &errs)?);
    }
    Ok(RateStudyResult {
        fitted_slopes,
        ..result
    })
}
