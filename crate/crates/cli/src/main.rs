//! `focpc`: solve fractional optimal control problems from the command line.
//!
//! Exit status: 0 ok, 1 usage or validation error, 2 sweep or series did not
//! converge, 3 the solver diverged.

mod config;
mod format;
mod problems;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use focpc_core::resource::min_horizon;
use focpc_core::special::{mittag_leffler, MLParams};
use focpc_core::validation::{run_suite, FAMILIES};
use focpc_core::{FractionalOrder, SweepResult};

use config::{PartialConfig, RunConfig};
use format::sig15;

const EXIT_USAGE: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "focpc", version, about = "Fractional optimal control: sweeps, special functions, checks")]
#[command(after_help = "Logging: set FOCPC_LOG=off|info|debug (default off).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the forward-backward sweep and write the trajectory as CSV.
    Solve(SolveArgs),
    /// Evaluate the two-parameter Mittag-Leffler function E_{alpha,beta}(z).
    Ml(MlArgs),
    /// Print the closed-form switching time T - Gamma(alpha+1)^(1/alpha) of the resource problem.
    SwitchTime(SwitchArgs),
    /// Run the fixed-seed property suite; exit 1 if any check fails.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// JSON file with any of the keys below (T, n_steps, max_iters, ...); flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Problem name from the registry [default: resource]
    #[arg(long, value_name = "NAME")]
    problem: Option<String>,
    /// Fractional order alpha in (0, 1], dimensionless [default: 1]
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated orders; one run and one output file per order
    #[arg(long, value_delimiter = ',', value_name = "A,B,..")]
    alphas: Option<Vec<f64>>,
    /// Horizon T in time units, starting from t = 0 [default: 2]
    #[arg(long = "T", value_name = "T")]
    horizon: Option<f64>,
    /// Initial state x(0), in state units [default: 1]
    #[arg(long)]
    x0: Option<f64>,
    /// Number of grid steps N, so N + 1 nodes [default: 1000]
    #[arg(long = "n", value_name = "N")]
    n_steps: Option<usize>,
    /// Sweep iteration cap, count [default: 500]
    #[arg(long)]
    max_iters: Option<usize>,
    /// Stop once the sup-norm control change is below this, control units [default: 1e-6]
    #[arg(long)]
    tol: Option<f64>,
    /// Weight theta on the previous control, u = theta u_old + (1 - theta) u_new, in [0, 1) [default: 0.5]
    #[arg(long)]
    relaxation: Option<f64>,
    /// CSV output path [default: solution.csv]
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl SolveArgs {
    fn flags(&self) -> PartialConfig {
        PartialConfig {
            problem: self.problem.clone(),
            alpha: self.alpha,
            alphas: self.alphas.clone(),
            horizon: self.horizon,
            x0: self.x0,
            n_steps: self.n_steps,
            max_iters: self.max_iters,
            tol: self.tol,
            relaxation: self.relaxation,
            output: self.output.clone(),
        }
    }
}

#[derive(Args)]
struct MlArgs {
    /// alpha >= 0, dimensionless [default: 1]
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// beta > 0, dimensionless [default: 1]
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Real argument, |z| <= 50 [default: 0]
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    z: f64,
    /// Series truncation tolerance [default: 1e-14]
    #[arg(long, default_value_t = focpc_core::special::ML_DEFAULT_TOL)]
    tol: f64,
    /// Series term cap, count [default: 200]
    #[arg(long, default_value_t = focpc_core::special::ML_DEFAULT_MAX_TERMS)]
    max_terms: usize,
}

#[derive(Args)]
struct SwitchArgs {
    /// Fractional order alpha in (0, 1] [default: 1]
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Horizon T in time units [default: 2]
    #[arg(long = "T", value_name = "T", default_value_t = 2.0)]
    horizon: f64,
}

#[derive(Args)]
struct ValidateArgs {
    /// Run a single property family [default: all]
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(FAMILIES))]
    only: Option<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FOCPC_LOG", "off")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Ml(args) => cmd_ml(&args),
        Command::SwitchTime(args) => cmd_switch_time(&args),
        Command::Validate(args) => cmd_validate(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use focpc_core::Error;
    match err.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::NonConvergence { .. }) => EXIT_NOT_CONVERGED,
        Some(Error::Divergence { .. }) => EXIT_DIVERGED,
        _ => EXIT_USAGE,
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let file = match &args.config {
        Some(path) => PartialConfig::from_file(path)?,
        None => PartialConfig::default(),
    };
    let runs = config::resolve(args.flags().over(file))?;

    let results: Vec<Result<(String, bool)>> = if runs.len() == 1 {
        vec![run_one(&runs[0])]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = runs.iter().map(|cfg| s.spawn(move || run_one(cfg))).collect();
            handles.into_iter().map(|h| h.join().expect("solve thread panicked")).collect()
        })
    };

    let mut code = 0;
    for (cfg, result) in runs.iter().zip(results) {
        match result {
            Ok((report, converged)) => {
                print!("{report}");
                if !converged {
                    code = code.max(EXIT_NOT_CONVERGED);
                }
            }
            Err(e) => {
                eprintln!("error (alpha = {}): {e:#}", cfg.alpha);
                code = code.max(exit_code(&e));
            }
        }
    }
    Ok(code)
}

fn run_one(cfg: &RunConfig) -> Result<(String, bool)> {
    let problem = problems::lookup(&cfg.problem).expect("validated during resolve");
    let instance = problem.build(cfg)?;
    let grid = instance.spec.grid(cfg.n_steps)?;
    info!("solving {} with alpha = {}, N = {}", cfg.problem, cfg.alpha, cfg.n_steps);
    let started = Instant::now();
    let res = focpc_core::pmp::forward_backward_sweep(&instance.spec, grid, &cfg.sweep_options())?;
    info!("sweep finished in {:.2?}", started.elapsed());
    write_csv(&cfg.output, &res).with_context(|| format!("writing {}", cfg.output.display()))?;

    let mut report = String::new();
    let mut line = |k: &str, v: String| report.push_str(&format!("{k:<12}{v}\n"));
    line("problem", format!("{} ({})", problem.name, problem.summary));
    line("alpha", cfg.alpha.to_string());
    line("cost", sig15(res.cost));
    line("iterations", res.iterations.to_string());
    line("converged", res.converged.to_string());
    if !res.converged {
        line("last change", sig15(res.control_change_norm));
    }
    if let Some(ts) = instance.analytic_switch {
        let detected = match res.first_node_below(0.5) {
            Some(k) => {
                let t = grid.node(k);
                format!("node {k} (t = {}, {} cells off)", sig15(t), sig15((t - ts).abs() / grid.step()))
            }
            None => "none".into(),
        };
        line("switch", format!("analytic t* = {}, detected {detected}", sig15(ts)));
    }
    line("csv", cfg.output.display().to_string());
    Ok((report, res.converged))
}

fn write_csv(path: &Path, res: &SweepResult) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    let (m, d) = (res.control.dim(), res.state.dim());
    let mut header = vec!["t".to_string()];
    if m == 1 {
        header.push("u".into());
    } else {
        header.extend((1..=m).map(|i| format!("u_{i}")));
    }
    header.extend((1..=d).map(|i| format!("x_{i}")));
    header.extend((1..=d).map(|i| format!("p_{i}")));
    w.write_record(&header)?;

    let grid = res.control.grid();
    for (k, t) in grid.nodes().enumerate() {
        let row = std::iter::once(t)
            .chain(res.control.node(k).iter().copied())
            .chain(res.state.node(k).iter().copied())
            .chain(res.adjoint.node(k).iter().copied())
            .map(sig15);
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_ml(args: &MlArgs) -> Result<u8> {
    let params = MLParams::new(args.alpha, args.beta)?
        .with_tol(args.tol)?
        .with_max_terms(args.max_terms)?;
    println!("{}", sig15(mittag_leffler(&params, args.z)?));
    Ok(0)
}

fn cmd_switch_time(args: &SwitchArgs) -> Result<u8> {
    let alpha = FractionalOrder::new(args.alpha)?;
    let params = focpc_core::ResourceParams::new(alpha, args.horizon, 1.0)?;
    println!("{}", sig15(focpc_core::resource::switch_time(&params)));
    info!("minimal horizon for alpha = {alpha}: {}", sig15(min_horizon(alpha)));
    Ok(0)
}

fn cmd_validate(args: &ValidateArgs) -> Result<u8> {
    let checks = run_suite(args.only.as_deref())?;
    let mut failed = Vec::new();
    for c in &checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict}  {:<21} {:<52} measured {:<12} threshold {}",
            c.family,
            c.name,
            format::sig(c.measured, 4),
            format::sig(c.threshold, 4)
        );
        if !c.passed {
            failed.push(format!("{}: {}", c.family, c.name));
        }
    }
    if failed.is_empty() {
        println!("all {} checks passed", checks.len());
        Ok(0)
    } else {
        eprintln!("{} of {} checks failed:", failed.len(), checks.len());
        for f in &failed {
            eprintln!("  {f}");
        }
        Ok(EXIT_USAGE)
    }
}
