use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ddinterp_core::fixture::{self, RL_LADDER_NAME};
use ddinterp_core::interpolation::PairOutcome;
use ddinterp_core::signals::load_input_csv;
use ddinterp_core::{
    conjugate_close, eval_transfer, informative_sweep, interpolate_minimal, load_csv,
    simulate as run_model, verify_interpolation, Complex64, DataSet, InformativityVerdict,
    InterpolationPair, PairSet, RankTolerance, ReducedModel, SystemParams, TimeSeries,
};
use serde::Serialize;

use crate::literal::format_complex;
use crate::{OutputArgs, ReduceArgs, SimulateArgs, Status, SweepArgs, VerifyArgs};

pub const DEFAULT_VERIFY_TOL: f64 = 1e-3;

/// Allowed mismatch between a recovered value and the conjugate of its
/// partner's value before the pair set is rejected as non-real.
const CONJUGATE_TOL: f64 = 1e-6;

fn builtin(name: &str) -> Result<DataSet> {
    match name {
        RL_LADDER_NAME => Ok(fixture::rl_ladder()),
        _ => bail!("unknown built-in data set `@{name}` (available: @{RL_LADDER_NAME})"),
    }
}

fn load_data(source: &str) -> Result<DataSet> {
    match source.strip_prefix('@') {
        Some(name) => builtin(name),
        None => Ok(load_csv(source)?),
    }
}

fn load_input(source: &str) -> Result<TimeSeries> {
    match source.strip_prefix('@') {
        Some(name) => Ok(builtin(name)?.input().clone()),
        None => Ok(load_input_csv(source)?),
    }
}

/// Reads either bare system parameters or a reduced model with its pairs.
fn load_model(path: &Path) -> Result<(SystemParams, Option<PairSet>)> {
    let text = fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("{}: invalid JSON", path.display()))?;
    if value.get("pairs").is_some() {
        let model: ReducedModel = serde_json::from_value(value)
            .with_context(|| format!("{}: invalid reduced model", path.display()))?;
        Ok((model.params, Some(model.source_pairs)))
    } else {
        let params: SystemParams = serde_json::from_value(value)
            .with_context(|| format!("{}: invalid model", path.display()))?;
        Ok((params, None))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Writes the JSON report to `--out` and prints either it or the table.
fn emit(output: &OutputArgs, json: &str, table: &str) -> Result<()> {
    if let Some(path) = &output.out {
        write_file(path, json)?;
    }
    if output.json {
        print!("{json}");
    } else {
        print!("{table}");
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn describe_policy(tol: &RankTolerance) -> String {
    match tol.abs_tol {
        Some(abs) => format!("absolute {abs:e}"),
        None => format!("relative {:e}", tol.rel_tol),
    }
}

fn sigma_list(verdicts: &[&InformativityVerdict]) -> String {
    verdicts
        .iter()
        .map(|v| format_complex(v.sigma))
        .collect::<Vec<_>>()
        .join(", ")
}

fn verdict_table(
    source: &str,
    n: usize,
    tol: &RankTolerance,
    verdicts: &[InformativityVerdict],
    with_values: bool,
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "data {source}, order n = {n}, rank tolerance {}",
        describe_policy(tol)
    );
    let _ = write!(
        out,
        "{:<28} {:<11} {:<5} {:<5} {:<10} {:<10} {:<10}",
        "sigma", "informative", "(a)", "(b)", "ranks", "threshold", "margin"
    );
    if with_values {
        let _ = write!(out, " M");
    }
    out.push('\n');
    for v in verdicts {
        let ranks = format!(
            "{}/{}/{}",
            v.ranks.augmented, v.ranks.extended, v.ranks.base
        );
        let _ = write!(
            out,
            "{:<28} {:<11} {:<5} {:<5} {:<10} {:<10.3e} {:<10.3e}",
            format_complex(v.sigma),
            yes_no(v.informative),
            yes_no(v.condition_a),
            yes_no(v.condition_b),
            ranks,
            v.tolerance_used,
            v.threshold_margin()
        );
        if with_values {
            let m =
                v.m.map_or_else(|| "not determined".to_string(), format_complex);
            let _ = write!(out, " {m}");
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "ranks are augmented/extended/base; margin is the closest singular-value ratio to the threshold"
    );
    trim_lines(&out)
}

fn trim_lines(text: &str) -> String {
    text.lines()
        .map(|l| l.trim_end().to_owned() + "\n")
        .collect()
}

fn sweep(args: &crate::DataArgs) -> Result<(usize, RankTolerance, Vec<InformativityVerdict>)> {
    let data = load_data(&args.data)?;
    let n = usize::try_from(args.order).context("order out of range")?;
    let tol = args.tolerance.policy()?;
    let verdicts = informative_sweep(&data, n, &args.sigmas, &tol)?;
    Ok((n, tol, verdicts))
}

pub fn check(args: &SweepArgs, with_values: bool) -> Result<Status> {
    let (n, tol, verdicts) = sweep(&args.data)?;
    let table = verdict_table(&args.data.data, n, &tol, &verdicts, with_values);
    emit(&args.output, &to_json(&verdicts)?, &table)?;

    let failing: Vec<_> = verdicts.iter().filter(|v| !v.informative).collect();
    if failing.is_empty() {
        return Ok(Status::Ok);
    }
    eprintln!(
        "transfer value not determined by data at sigma = {}",
        sigma_list(&failing)
    );
    Ok(Status::Findings)
}

fn model_summary(model: &ReducedModel, r_max: usize, tol: &RankTolerance) -> String {
    let fmt = |c: &[f64]| {
        c.iter()
            .map(|x| format!("{x:.6}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "reduced order r = {} (searched r <= {r_max})",
        model.order()
    );
    let _ = writeln!(
        out,
        "denominator p (ascending, monic) = [{}]",
        fmt(model.params.p())
    );
    let _ = writeln!(out, "numerator q (ascending) = [{}]", fmt(model.params.q()));
    let _ = writeln!(
        out,
        "max interpolation error over {} pairs = {:.3e}",
        model.source_pairs.len(),
        model.max_interp_error
    );
    let _ = writeln!(out, "rank tolerance {}", describe_policy(tol));
    out
}

pub fn reduce(args: &ReduceArgs) -> Result<Status> {
    let (n, tol, verdicts) = sweep(&args.data)?;
    let failing: Vec<_> = verdicts.iter().filter(|v| !v.informative).collect();
    if !failing.is_empty() {
        eprintln!(
            "cannot reduce: transfer value not determined by data at sigma = {}",
            sigma_list(&failing)
        );
        return Ok(Status::Findings);
    }
    let pairs = verdicts
        .iter()
        .filter_map(|v| v.m.map(|m| InterpolationPair::new(v.sigma, m)))
        .collect();
    let closed = conjugate_close(&PairSet::new(pairs)?, CONJUGATE_TOL)?;
    let r_max = args.r_max.unwrap_or(n);
    let model = interpolate_minimal(&closed, r_max, &tol)?;
    emit(
        &args.output,
        &to_json(&model)?,
        &model_summary(&model, r_max, &tol),
    )?;
    Ok(Status::Ok)
}

pub fn simulate(args: &SimulateArgs) -> Result<Status> {
    let (params, _) = load_model(&args.model)?;
    let input = load_input(&args.data)?;
    let init = if args.init.is_empty() {
        vec![0.0; params.order()]
    } else {
        args.init.clone()
    };
    let output = run_model(&params, &input, &init)?;
    let csv = DataSet::new(input, output)?.to_csv();
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct PairCheck {
    sigma: [f64; 2],
    expected: [f64; 2],
    model_value: Option<[f64; 2]>,
    error: Option<f64>,
    outcome: &'static str,
}

#[derive(Serialize)]
struct VerifyReport {
    tolerance: f64,
    passed: bool,
    max_error: Option<f64>,
    pairs: Vec<PairCheck>,
}

fn parts(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

pub fn verify(args: &VerifyArgs) -> Result<Status> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        bail!("--tol must be finite and positive, got {}", args.tol);
    }
    let (params, stored) = load_model(&args.model)?;
    let pairs = if args.pairs.is_empty() {
        stored.unwrap_or_default()
    } else {
        PairSet::new(args.pairs.clone())?
    };
    if pairs.is_empty() {
        eprintln!("warning: no interpolation pairs given; verification is vacuous");
    }

    let report = verify_interpolation(&params, &pairs, args.tol);
    let checks: Vec<PairCheck> = pairs
        .pairs()
        .iter()
        .zip(&report.outcomes)
        .map(|(pair, outcome)| {
            let (error, outcome) = match *outcome {
                PairOutcome::Error(e) if e <= args.tol => (Some(e), "ok"),
                PairOutcome::Error(e) => (Some(e), "mismatch"),
                PairOutcome::Pole => (None, "pole"),
                PairOutcome::Indeterminate => (None, "indeterminate"),
            };
            PairCheck {
                sigma: parts(pair.sigma),
                expected: parts(pair.m),
                model_value: eval_transfer(&params, pair.sigma).value().map(parts),
                error,
                outcome,
            }
        })
        .collect();

    let max_error = report.max_error();
    let summary = VerifyReport {
        tolerance: args.tol,
        passed: report.passed,
        max_error: max_error.is_finite().then_some(max_error),
        pairs: checks,
    };

    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<28} {:<28} {:<28} {:<10} status",
        "sigma", "expected", "model", "error"
    );
    for check in &summary.pairs {
        let c = |p: [f64; 2]| format_complex(Complex64::new(p[0], p[1]));
        let _ = writeln!(
            table,
            "{:<28} {:<28} {:<28} {:<10} {}",
            c(check.sigma),
            c(check.expected),
            check.model_value.map_or_else(|| "-".into(), c),
            check
                .error
                .map_or_else(|| "-".into(), |e| format!("{e:.3e}")),
            check.outcome
        );
    }
    let _ = writeln!(
        table,
        "{} (tolerance {:e})",
        if report.passed { "passed" } else { "failed" },
        args.tol
    );
    emit(&args.output, &to_json(&summary)?, &trim_lines(&table))?;
    Ok(if report.passed {
        Status::Ok
    } else {
        Status::Findings
    })
}
