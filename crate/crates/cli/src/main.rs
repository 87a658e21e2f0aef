//! `ddinterp`: informativity checks, transfer values and minimal reduced
//! models from input/output data.
//!
//! Exit status: 0 when every requested check holds, 2 when the run
//! completed but found a non-informative point or a failed verification,
//! 1 on errors.

mod commands;
mod literal;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddinterp_core::{Complex64, InterpolationPair, RankTolerance};

#[derive(Parser, Debug)]
#[command(
    name = "ddinterp",
    version,
    about = "Data-driven interpolatory model reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide informativity at each interpolation point.
    Check(SweepArgs),
    /// Recover the transfer value at each informative point.
    Value(SweepArgs),
    /// Fit the lowest-order model interpolating the recovered values.
    Reduce(ReduceArgs),
    /// Simulate a model on an input signal.
    Simulate(SimulateArgs),
    /// Check a model against interpolation pairs.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Data CSV with header `t,u,y`, or `@paper-rl` for the built-in data set.
    #[arg(long, value_name = "PATH")]
    data: String,
    /// Order bound n of the data-generating system.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    order: u64,
    /// Interpolation point such as `0.5`, `2i` or `0.7071+0.7071i`.
    #[arg(long = "sigma", value_name = "C", required = true, allow_hyphen_values = true,
          value_parser = literal::parse_complex)]
    sigmas: Vec<Complex64>,
    #[command(flatten)]
    tolerance: ToleranceArgs,
}

#[derive(Args, Debug)]
struct ToleranceArgs {
    /// Relative rank tolerance, scaled by the largest singular value and the
    /// matrix dimension.
    #[arg(long, value_name = "F", default_value_t = RankTolerance::DEFAULT_REL_TOL)]
    rank_rel_tol: f64,
    /// Absolute singular-value threshold; overrides the relative tolerance.
    #[arg(long, value_name = "F")]
    rank_abs_tol: Option<f64>,
}

impl ToleranceArgs {
    fn policy(&self) -> anyhow::Result<RankTolerance> {
        Ok(RankTolerance::new(self.rank_rel_tol, self.rank_abs_tol)?)
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the JSON report to this file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print the JSON report to stdout instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Largest reduced order to try; defaults to the order bound.
    #[arg(long, value_name = "N")]
    r_max: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Model JSON (system parameters or a reduced model).
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// Input CSV with header `t,u` or `t,u,y`, or `@paper-rl`.
    #[arg(long, value_name = "PATH")]
    data: String,
    /// Initial output sample; repeat once per model order. Defaults to zeros.
    #[arg(long = "init", value_name = "F", allow_negative_numbers = true)]
    init: Vec<f64>,
    /// Write the `t,u,y` CSV to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Model JSON (system parameters or a reduced model).
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// Pair `SIGMA=VALUE`; defaults to the pairs stored in a reduced model.
    #[arg(long = "pair", value_name = "C=C", allow_hyphen_values = true,
          value_parser = literal::parse_pair)]
    pairs: Vec<InterpolationPair>,
    /// Largest accepted interpolation error.
    #[arg(long, value_name = "F", default_value_t = commands::DEFAULT_VERIFY_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Whether a completed run met every requested check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Findings,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Check(args) => commands::check(&args, false),
        Command::Value(args) => commands::check(&args, true),
        Command::Reduce(args) => commands::reduce(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Findings) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
