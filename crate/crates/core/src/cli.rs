//! Command-line front end.
//!
//! Exit codes: 0 on success (including statistical rejection), 2 on input
//! or parameter errors, 3 on estimation failures.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::estimate::{fit, Estimator, FitResult};
use crate::lrt::{two_sample_test, TestResult};
use crate::model::{empirical_ccdf, PowerLawModel, Sample};
use crate::montecarlo::{
    calibrate_null, power_sweep, CalibrationConfig, CalibrationReport, PowerConfig, PowerReport,
    ReplicateRecord,
};
use crate::sampling::{stream_rng, InverseCdf, SamplingMethod};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ESTIMATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "powerlaw-lrt", version, about = "Discrete power-law fitting and two-sample likelihood-ratio test")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the scaling parameter of one sample.
    Fit {
        /// Input file, one positive integer per line ('-' for stdin).
        input: String,
        #[command(flatten)]
        common: FitArgs,
        #[arg(long)]
        json: bool,
    },
    /// Test whether two samples share one power law.
    Test {
        input1: String,
        input2: String,
        #[command(flatten)]
        common: FitArgs,
        /// Drop values below x_min instead of failing.
        #[arg(long)]
        truncate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw a sample from a discrete power law.
    Sample {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        xmin: u64,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SamplingMethod::ExactInverseCdf)]
        method: SamplingMethod,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit empirical CCDF rows as CSV, optionally with a model column.
    Ccdf {
        input: String,
        /// Scaling parameter of the model overlay.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 1)]
        xmin: u64,
    },
    /// Monte Carlo type I error calibration under the null.
    Calibrate {
        #[command(flatten)]
        mc: MonteCarloArgs,
        /// Significance level (repeatable).
        #[arg(long = "level", default_values_t = vec![0.05])]
        levels: Vec<f64>,
    },
    /// Monte Carlo rejection rate with a gap delta between samples.
    Power {
        #[command(flatten)]
        mc: MonteCarloArgs,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0.05)]
        level: f64,
    },
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, default_value_t = 1)]
    pub xmin: u64,
    #[arg(long, value_enum, default_value_t = Estimator::Exact)]
    pub estimator: Estimator,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub xmin: u64,
    /// Values per sample.
    #[arg(long, short = 'n', default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Estimator::Exact)]
    pub estimator: Estimator,
    #[arg(long, value_enum, default_value_t = SamplingMethod::ExactInverseCdf)]
    pub method: SamplingMethod,
    /// Write per-replicate statistics as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnboundedLikelihood { .. }
            | Error::Boundary { .. }
            | Error::NegativeStatistic { .. }
            | Error::NoReplicates { .. } => EXIT_ESTIMATION,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::input(format!("I/O error: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses one positive integer per line. Blank lines and lines starting
/// with '#' are skipped; errors carry the 1-based line number.
pub fn parse_values<R: BufRead>(reader: R, source: &str) -> CliResult<Vec<u64>> {
    let mut values = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        match trimmed.parse::<u64>() {
            Ok(0) => {
                return Err(CliError::input(format!(
                    "{source}:{lineno}: zero is not a positive integer"
                )))
            }
            Ok(v) => values.push(v),
            Err(_) => {
                return Err(CliError::input(format!(
                    "{source}:{lineno}: expected a positive integer, found {trimmed:?}"
                )))
            }
        }
    }
    Ok(values)
}

fn read_sample(input: &str) -> CliResult<Sample> {
    let values = if input == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        parse_values(buf.as_bytes(), "<stdin>")?
    } else {
        let file = File::open(input).map_err(|e| CliError::input(format!("{input}: {e}")))?;
        parse_values(BufReader::new(file), input)?
    };
    if values.is_empty() {
        return Err(CliError::input(format!("{input}: no values")));
    }
    Ok(Sample::new(values)?)
}

/// Shortest round-trip decimal, identical to the JSON rendering.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}

fn fmt_p(p: f64) -> String {
    if p < 1e-3 {
        format!("{} (< 1e-3)", fmt_num(p))
    } else {
        fmt_num(p)
    }
}

fn write_json<T: Serialize, W: Write>(out: &mut W, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn render_fit<W: Write>(out: &mut W, fit: &FitResult) -> io::Result<()> {
    writeln!(out, "estimator       {}", fit.method)?;
    writeln!(out, "x_min           {}", fit.x_min)?;
    writeln!(out, "n               {}", fit.n)?;
    writeln!(out, "alpha_hat       {}", fmt_num(fit.alpha_hat))?;
    writeln!(out, "log_likelihood  {}", fmt_num(fit.log_likelihood_at_fit))
}

fn render_test<W: Write>(out: &mut W, r: &TestResult, dropped: Option<(usize, usize)>) -> io::Result<()> {
    writeln!(out, "estimator         {}", r.estimator)?;
    writeln!(out, "x_min             {}", r.x_min)?;
    writeln!(out, "n1                {}", r.n1)?;
    writeln!(out, "n2                {}", r.n2)?;
    if let Some((d1, d2)) = dropped {
        writeln!(out, "dropped1          {d1}")?;
        writeln!(out, "dropped2          {d2}")?;
    }
    writeln!(out, "alpha_hat_1       {}", fmt_num(r.alpha_hat_1))?;
    writeln!(out, "alpha_hat_2       {}", fmt_num(r.alpha_hat_2))?;
    writeln!(out, "alpha_hat_pooled  {}", fmt_num(r.alpha_hat_pooled))?;
    writeln!(out, "lambda            {}", fmt_num(r.lambda))?;
    writeln!(out, "df                {}", r.df)?;
    writeln!(out, "p_value           {}", fmt_p(r.p_value))?;
    if let Some(w) = &r.warning {
        writeln!(out, "warning           {w}")?;
    }
    Ok(())
}

fn render_skipped<W: Write>(out: &mut W, skipped: &[crate::montecarlo::SkippedReplicate]) -> io::Result<()> {
    writeln!(out, "skipped           {}", skipped.len())?;
    for s in skipped.iter().take(10) {
        writeln!(out, "  replicate {}: {}", s.replicate, s.reason)?;
    }
    Ok(())
}

fn render_calibration<W: Write>(out: &mut W, r: &CalibrationReport) -> io::Result<()> {
    let c = &r.config;
    writeln!(out, "alpha             {}", fmt_num(c.alpha))?;
    writeln!(out, "x_min             {}", c.x_min)?;
    writeln!(out, "n_per_sample      {}", c.n_per_sample)?;
    writeln!(out, "seed              {}", c.seed)?;
    writeln!(out, "estimator         {}", c.estimator)?;
    writeln!(out, "replicates_run    {}", r.replicates_run)?;
    render_skipped(out, &r.skipped)?;
    for level in &r.rejection_rate_per_level {
        writeln!(
            out,
            "rejection_rate    level={} rate={}",
            fmt_num(level.level),
            fmt_num(level.rejection_rate)
        )?;
    }
    for q in &r.lambda_quantiles {
        writeln!(
            out,
            "lambda_quantile   p={} empirical={} chi2={}",
            fmt_num(q.probability),
            fmt_num(q.empirical),
            fmt_num(q.chi2_reference)
        )?;
    }
    Ok(())
}

fn render_power<W: Write>(out: &mut W, r: &PowerReport) -> io::Result<()> {
    let c = &r.config;
    writeln!(out, "alpha             {}", fmt_num(c.alpha))?;
    writeln!(out, "delta             {}", fmt_num(c.delta))?;
    writeln!(out, "x_min             {}", c.x_min)?;
    writeln!(out, "n_per_sample      {}", c.n_per_sample)?;
    writeln!(out, "level             {}", fmt_num(c.level))?;
    writeln!(out, "seed              {}", c.seed)?;
    writeln!(out, "estimator         {}", c.estimator)?;
    writeln!(out, "replicates_run    {}", r.replicates_run)?;
    render_skipped(out, &r.skipped)?;
    writeln!(out, "rejection_rate    {}", fmt_num(r.rejection_rate))?;
    writeln!(out, "lambda_median     {}", fmt_num(r.lambda_median))
}

fn write_records(path: &PathBuf, records: &[ReplicateRecord]) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "replicate,lambda,p_value")?;
    for r in records {
        writeln!(w, "{},{},{}", r.replicate, fmt_num(r.lambda), fmt_num(r.p_value))?;
    }
    w.flush()?;
    Ok(())
}

/// Runs a parsed command, writing results to `out`.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> CliResult<()> {
    match cli.command {
        Command::Fit { input, common, json } => {
            let sample = read_sample(&input)?;
            let result = fit(&sample, common.xmin, common.estimator)?;
            if json {
                write_json(out, &result)?;
            } else {
                render_fit(out, &result)?;
            }
        }
        Command::Test {
            input1,
            input2,
            common,
            truncate,
            json,
        } => {
            let mut s1 = read_sample(&input1)?;
            let mut s2 = read_sample(&input2)?;
            let mut dropped = None;
            if truncate {
                let (t1, d1) = s1.truncated(common.xmin);
                let (t2, d2) = s2.truncated(common.xmin);
                s1 = t1.ok_or_else(|| CliError::input(format!("{input1}: no values at or above x_min")))?;
                s2 = t2.ok_or_else(|| CliError::input(format!("{input2}: no values at or above x_min")))?;
                dropped = Some((d1, d2));
            }
            let result = two_sample_test(&s1, &s2, common.xmin, common.estimator)?;
            if json {
                #[derive(Serialize)]
                struct Envelope<'a> {
                    #[serde(flatten)]
                    result: &'a TestResult,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    dropped1: Option<usize>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    dropped2: Option<usize>,
                }
                write_json(
                    out,
                    &Envelope {
                        result: &result,
                        dropped1: dropped.map(|d| d.0),
                        dropped2: dropped.map(|d| d.1),
                    },
                )?;
            } else {
                render_test(out, &result, dropped)?;
            }
        }
        Command::Sample {
            alpha,
            xmin,
            n,
            seed,
            method,
            out: path,
        } => {
            if n == 0 {
                return Err(CliError::input("n must be at least 1"));
            }
            let model = PowerLawModel::new(alpha, xmin)?;
            // draw order, as produced by stream 0 of the seed
            let values = InverseCdf::new(model).draw_values(&mut stream_rng(seed, 0), method, n);
            let write_all = |w: &mut dyn Write| -> io::Result<()> {
                for v in &values {
                    writeln!(w, "{v}")?;
                }
                w.flush()
            };
            match path {
                Some(p) => {
                    let file = File::create(&p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
                    write_all(&mut BufWriter::new(file))?;
                }
                None => write_all(out)?,
            }
        }
        Command::Ccdf { input, alpha, xmin } => {
            let sample = read_sample(&input)?;
            let model = alpha.map(|a| PowerLawModel::new(a, xmin)).transpose()?;
            if model.is_some() {
                sample.check_support(xmin)?;
                writeln!(out, "x,empirical,model")?;
            } else {
                writeln!(out, "x,empirical")?;
            }
            for point in empirical_ccdf(&sample) {
                match &model {
                    Some(m) => writeln!(
                        out,
                        "{},{},{}",
                        point.x,
                        fmt_num(point.proportion),
                        fmt_num(m.ccdf(point.x)?)
                    )?,
                    None => writeln!(out, "{},{}", point.x, fmt_num(point.proportion))?,
                }
            }
        }
        Command::Calibrate { mc, levels } => {
            let config = CalibrationConfig {
                alpha: mc.alpha,
                x_min: mc.xmin,
                n_per_sample: mc.n,
                replicates: mc.replicates,
                levels,
                seed: mc.seed,
                estimator: mc.estimator,
                method: mc.method,
            };
            PowerLawModel::new(config.alpha, config.x_min)?;
            let report = calibrate_null(&config)?;
            if let Some(p) = &mc.out {
                write_records(p, &report.records)?;
            }
            if mc.json {
                write_json(out, &report)?;
            } else {
                render_calibration(out, &report)?;
            }
        }
        Command::Power { mc, delta, level } => {
            let config = PowerConfig {
                alpha: mc.alpha,
                delta,
                x_min: mc.xmin,
                n_per_sample: mc.n,
                replicates: mc.replicates,
                level,
                seed: mc.seed,
                estimator: mc.estimator,
                method: mc.method,
            };
            PowerLawModel::new(config.alpha, config.x_min)?;
            let report = power_sweep(&config)?;
            if let Some(p) = &mc.out {
                write_records(p, &report.records)?;
            }
            if mc.json {
                write_json(out, &report)?;
            } else {
                render_power(out, &report)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_skips_comments_and_blank_lines() {
        let text = "# provenance\n1\n\n  2 \n# more\n3\n";
        assert_eq!(parse_values(text.as_bytes(), "t").unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn parse_reports_line_numbers() {
        for (text, line) in [("1\nabc\n", 2), ("1\n2\n0\n", 3), ("-4\n", 1), ("1.5\n", 1)] {
            let err = parse_values(text.as_bytes(), "f").unwrap_err();
            assert_eq!(err.code, EXIT_INPUT);
            assert!(err.message.contains(&format!("f:{line}:")), "{}", err.message);
        }
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(CliError::from(Error::UnboundedLikelihood { x_min: 1 }).code, EXIT_ESTIMATION);
        assert_eq!(CliError::from(Error::EmptySample).code, EXIT_INPUT);
        assert_eq!(CliError::from(Error::BelowSupport { value: 1, x_min: 2 }).code, EXIT_INPUT);
        assert_eq!(CliError::from(Error::Config("x".into())).code, EXIT_INPUT);
    }

    #[test]
    fn numbers_render_like_json() {
        assert_eq!(fmt_num(2.0), "2.0");
        assert_eq!(fmt_num(0.1), "0.1");
        assert_eq!(fmt_p(2.5e-34), "2.5e-34 (< 1e-3)");
        assert_eq!(fmt_p(0.5), "0.5");
    }
}
