//! Command-line interface: `solve` runs one reconstruction, `rate` reproduces
//! the convergence-rate study, `verify` runs the numerical-bound suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use autodeconv::experiment::{
    c1_bound, rate_study, run_single, AlphaRule, Method, ProblemSpec, Solution,
};
use autodeconv::verify::{all_suites, run_suite, Suite};
use autodeconv::{io, plot};
use autodeconv_core::grid::UniformGrid;
use autodeconv_core::initval::{NoiseKind, NoiseModel};

#[derive(Parser)]
#[command(
    name = "autodeconv",
    about = "Regularized reconstruction from noisy autoconvolution data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single synthetic (or file-based) problem and write the
    /// reconstruction.
    Solve(SolveArgs),
    /// Run the convergence-rate study over a grid of noise levels.
    Rate(RateArgs),
    /// Run the numerical-bound property suites and print pass/fail per bound.
    Verify(VerifyArgs),
}

#[derive(Clone, Debug)]
enum ProblemArg {
    F1,
    F2,
    File(PathBuf),
}

fn parse_problem(s: &str) -> Result<ProblemArg, String> {
    match s {
        "f1" => Ok(ProblemArg::F1),
        "f2" => Ok(ProblemArg::F2),
        _ => match s.strip_prefix("file:") {
            Some(path) if !path.is_empty() => Ok(ProblemArg::File(PathBuf::from(path))),
            _ => Err(format!("expected f1, f2 or file:PATH, got {s:?}")),
        },
    }
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum AlphaRuleArg {
    /// alpha = c * sqrt(delta)
    Sqrt,
    /// alpha = c * delta^(2/5)
    Twofifths,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum NoiseArg {
    /// noise bounded in the sup norm
    Sup,
    /// noise bounded in the L2 norm
    L2,
}

#[derive(Args)]
struct SolveArgs {
    /// Exact solution: f1, f2 or file:PATH (CSV t,value on a uniform grid)
    #[arg(long, value_parser = parse_problem)]
    problem: ProblemArg,
    /// Noise level delta (0 for noiseless data; then --alpha and --m are
    /// required)
    #[arg(long)]
    delta: f64,
    #[arg(long, value_enum)]
    method: Method,
    /// Weight exponent sigma of the L2-sigma geometry
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Explicit regularization parameter (overrides --alpha-rule)
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = AlphaRuleArg::Sqrt)]
    alpha_rule: AlphaRuleArg,
    /// Constant c of the alpha rule
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Explicit discretization level (overrides the m-rule)
    #[arg(long)]
    m: Option<usize>,
    /// Fine-grid resolution
    #[arg(long, default_value_t = 5000)]
    fine_n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = NoiseArg::Sup)]
    noise: NoiseArg,
    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RateArgs {
    /// Test problem: f1 or f2
    #[arg(long, value_parser = ["f1", "f2"])]
    problem: String,
    /// Strictly decreasing noise levels, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    deltas: Vec<f64>,
    /// Methods to benchmark
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = [Method::Pc, Method::PcSmoothed, Method::Cubic])]
    methods: Vec<Method>,
    /// Noise realizations per cell (seeds seed..seed+repeats-1)
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite instead of all of them
    #[arg(long, value_enum)]
    suite: Option<Suite>,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<autodeconv::Error> for Failure {
    fn from(e: autodeconv::Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Run(e.to_string())
        }
    }
}

impl From<autodeconv_core::Error> for Failure {
    fn from(e: autodeconv_core::Error) -> Self {
        Failure::from(autodeconv::Error::from(e))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Rate(args) => cmd_rate(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn build_solution(problem: &ProblemArg) -> Result<Solution, Failure> {
    Ok(match problem {
        ProblemArg::F1 => Solution::F1,
        ProblemArg::F2 => Solution::F2,
        ProblemArg::File(path) => {
            let samples = io::read_grid_samples(path).map_err(|e| match e {
                autodeconv::Error::Io(io) => Failure::Run(format!("cannot read {path:?}: {io}")),
                other => Failure::Usage(format!("{path:?}: {other}")),
            })?;
            Solution::Custom(samples)
        }
    })
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    let solution = build_solution(&args.problem)?;
    let kind = match args.noise {
        NoiseArg::Sup => NoiseKind::SupNorm,
        NoiseArg::L2 => NoiseKind::L2Norm,
    };
    // smoothness bound for the L2 estimator, read off the exact solution
    let probe_grid = UniformGrid::new(args.fine_n.max(100))?;
    let smoothness = c1_bound(&solution.sample(probe_grid)?);
    let noise = NoiseModel::new(kind, args.delta, args.seed, smoothness)?;
    let spec = ProblemSpec::new(solution, args.fine_n, noise, args.sigma)?;
    let rule = match args.alpha_rule {
        AlphaRuleArg::Sqrt => AlphaRule::SqrtDelta(args.c),
        AlphaRuleArg::Twofifths => AlphaRule::TwoFifths(args.c),
    };
    if args.delta == 0.0 && (args.alpha.is_none() || args.m.is_none()) {
        return Err(Failure::Usage(
            "noiseless runs (--delta 0) require explicit --alpha and --m".into(),
        ));
    }

    let run = run_single(&spec, args.method, rule, args.alpha, args.m)?;

    std::fs::create_dir_all(&args.out)?;
    io::write_grid_csv(&args.out.join("run.csv"), &run.reconstruction)?;
    io::write_run_json(&args.out.join("run.json"), &run)?;
    // plotting is best effort and never gates the exit code
    if let Err(e) = std::fs::write(
        args.out.join("run.svg"),
        plot::overlay_svg(&run.x0, &run.reconstruction),
    ) {
        log::warn!("could not write run.svg: {e}");
    }

    println!(
        "method {} m {} alpha {:.6e} sigma {} l2_error {:.6e} residual {:.3e} time {:.3}s",
        run.method.label(),
        run.m,
        run.alpha,
        run.sigma,
        run.l2_error,
        run.residual_sigma,
        run.wall_time
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_rate(args: RateArgs) -> Result<ExitCode, Failure> {
    let solution = match args.problem.as_str() {
        "f1" => Solution::F1,
        "f2" => Solution::F2,
        other => return Err(Failure::Usage(format!("unknown problem {other:?}"))),
    };
    if args.deltas.len() < 2 {
        return Err(Failure::Usage("need >= 2 deltas for a slope fit".into()));
    }
    let noise = NoiseModel::new(NoiseKind::SupNorm, args.deltas[0], args.seed, 2.0)?;
    let spec = ProblemSpec::new(solution, 5000, noise, 0.0)?;
    let result = rate_study(&spec, &args.deltas, &args.methods, args.repeats)?;

    std::fs::create_dir_all(&args.out)?;
    io::write_rate_csv(&args.out.join("rate.csv"), &result)?;
    if let Err(e) = std::fs::write(args.out.join("rate.svg"), plot::rate_svg(&result)) {
        log::warn!("could not write rate.svg: {e}");
    }

    for (method, slope) in &result.fitted_slopes {
        println!("slope {} {:.4}", method.label(), slope);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let checks = match args.suite {
        Some(suite) => run_suite(suite)?,
        None => all_suites()?,
    };
    let mut all_ok = true;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", check.name, check.detail);
        all_ok &= check.passed;
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
