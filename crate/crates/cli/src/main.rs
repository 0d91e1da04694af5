//! `cylquant`: quantize observables on the cylinder, run verification suites
//! and export lower-symbol fields.

mod config;
mod error;
mod observable;
mod output;
mod tolerances;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cylquant::matrix::max_scaled_deviation;
use cylquant::{lower_symbol, quantize, PhaseGrid};

use config::{ConfigFile, Format, OneOrMany, RunConfig, SizeSpec};
use error::CliError;
use observable::Observable;
use verify::{Suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "cylquant", version, about = "Coherent-state quantization on the cylinder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the operator matrix of an observable.
    Quantize {
        /// `J`, `J^m`, `beta`, `exp(aJ)cos(kbeta)` or `laurent:(p,q,re,im)...`
        #[arg(long, allow_hyphen_values = true)]
        obs: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite and write its report.
    Verify {
        suite: Suite,
        #[arg(long, default_value = "-3..3", value_parser = verify::parse_range, allow_hyphen_values = true)]
        p_range: std::ops::RangeInclusive<i64>,
        #[arg(long, default_value = "-3..3", value_parser = verify::parse_range, allow_hyphen_values = true)]
        q_range: std::ops::RangeInclusive<i64>,
        /// Single observable for the oracle suite; without it a fixed battery runs.
        #[arg(long, allow_hyphen_values = true)]
        obs: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample the lower symbol of an operator on a (beta, J) grid.
    Symbol {
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        /// `start:end:count`
        #[arg(long, default_value = "0:6.283185307179586:9", allow_hyphen_values = true)]
        beta_grid: String,
        /// `start:end:count`, inside `[-J_max, J_max]`
        #[arg(long, default_value = "-1:1:9", allow_hyphen_values = true)]
        j_grid: String,
        /// Add the classical function and the pointwise deviation.
        #[arg(long)]
        compare_classical: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Comma-separated list; most commands take exactly one.
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    /// Window half-width N, or `auto`.
    #[arg(long)]
    window: Option<SizeSpec>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    gh_nodes: Option<usize>,
    /// β trapezoid points, or `auto`.
    #[arg(long)]
    beta_points: Option<SizeSpec>,
    #[arg(long = "j-max")]
    j_max: Option<f64>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let file = self.config.as_deref().map(ConfigFile::load).transpose()?;
        let flags = ConfigFile {
            epsilon: self.epsilon.map(OneOrMany::Many),
            window_n: self.window,
            tol: self.tol,
            gh_nodes: self.gh_nodes,
            beta_points: self.beta_points,
            j_max: self.j_max,
            output_path: self.output,
            format: self.format,
        };
        RunConfig::resolve(file, flags)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Quantize { obs, common } => cmd_quantize(&obs, common.resolve()?),
        Command::Verify { suite, p_range, q_range, obs, common } => {
            let cfg = common.resolve()?;
            let obs = obs.as_deref().map(Observable::parse).transpose()?;
            cmd_verify(suite, &cfg, &VerifyOptions { p_range, q_range, obs })
        }
        Command::Symbol { op, beta_grid, j_grid, compare_classical, common } => {
            cmd_symbol(&op, &beta_grid, &j_grid, compare_classical, common.resolve()?)
        }
    }
}

fn cmd_quantize(text: &str, cfg: RunConfig) -> Result<u8, CliError> {
    let obs = Observable::parse(text)?;
    let eps = cfg.single_epsilon()?;
    let window = cfg.window(eps)?;
    let spec = obs.oracle_spec(window);
    let quad = cfg.quadrature(window, spec.bandwidth())?;
    let oracle = quantize(&spec, eps, window, &quad)?;
    let mut code = 0;
    let matrix = match obs.closed_form(eps, window)? {
        Some(closed) => {
            let defect = max_scaled_deviation(&closed, &oracle, |_, _| true)?;
            let ok = defect < tolerances::ORACLE;
            eprintln!(
                "oracle vs closed form: max defect {defect:e} (tolerance {:e}) {}",
                tolerances::ORACLE,
                if ok { "ok" } else { "FAILED" }
            );
            if !ok {
                code = 3;
            }
            closed
        }
        None => oracle,
    };
    output::emit(&output::render_matrix(&matrix, cfg.format), cfg.output().as_deref())?;
    Ok(code)
}

fn cmd_verify(suite: Suite, cfg: &RunConfig, opts: &VerifyOptions) -> Result<u8, CliError> {
    let report = verify::run(suite, cfg, opts)?;
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    output::emit(&text, cfg.output().as_deref())?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("failed: {} (epsilon {}, value {:e}, tolerance {:e})", c.name, c.epsilon, c.value, c.tolerance);
    }
    eprintln!("{}: {} passed, {} failed", serde_json::to_value(suite).unwrap().as_str().unwrap(), report.passed, report.failed);
    Ok(if report.pass { 0 } else { 3 })
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("expected `start:end:count`, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(PhaseGrid::linspace(a, b, n))
}

fn cmd_symbol(text: &str, beta_grid: &str, j_grid: &str, compare: bool, cfg: RunConfig) -> Result<u8, CliError> {
    let obs = Observable::parse(text)?;
    let eps = cfg.single_epsilon()?;
    let window = cfg.window(eps)?;
    let grid = PhaseGrid::new(parse_grid(beta_grid)?, parse_grid(j_grid)?)?;
    if grid.max_abs_j() > cfg.j_max {
        return Err(CliError::Config(format!(
            "J grid reaches |J| = {} beyond J_max = {}",
            grid.max_abs_j(),
            cfg.j_max
        )));
    }
    let op = match obs.closed_form(eps, window)? {
        Some(op) => op,
        None => {
            let spec = obs.oracle_spec(window);
            quantize(&spec, eps, window, &cfg.quadrature(window, spec.bandwidth())?)?
        }
    };
    let field = lower_symbol(&op, &grid, window, obs.to_string())?;
    let comparison = if compare {
        let classical = grid.points().map(|(b, j)| obs.classical(b, j, eps)).collect::<Result<Vec<_>, _>>()?;
        Some(output::Comparison { classical })
    } else {
        None
    };
    output::emit(&output::render_field(&field, window.n_max(), cfg.format, comparison.as_ref()), cfg.output().as_deref())?;
    Ok(0)
}
