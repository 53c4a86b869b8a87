//! Command-line front end: `radius`, `monitor`, `simulate`, `generate`.
//!
//! Output is machine-first: JSON objects (one per line) for `radius` and
//! `monitor`, CSV for `simulate`, the matrix text format for `generate`.
//! Identical invocations with identical inputs and seeds produce
//! byte-identical standard output.
//!
//! Exit codes: 0 success, 1 computation error (a JSON error object goes to
//! stderr), 2 usage error, 3 config-file error. Defaults may be supplied via
//! `--config <file>` (key=value lines, `#` comments) and the `MATRIX_EB_SEED`
//! environment variable; explicit flags always win.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundRequest, BoundResult, Method, Side, Terms};
use crate::estimators::{self, MatrixSample};
use crate::io as mio;
use crate::seqeb::{self, GammaSchedule, Predictor, SeqEbState};
use crate::sim::{self, SimConfig, TableKind};

/// Environment variable consulted for the default seed.
pub const SEED_ENV_VAR: &str = "MATRIX_EB_SEED";

pub const USAGE: &str = "\
usage: matrix-eb <subcommand> [flags]

subcommands:
  radius    --method {tb,meb1,meb1c,mb,hoeffding,mp,sharp-mp,meb2} --alpha A --input FILE
            [--format {text,csv}] [--variance-norm V] [--trace-v T] [--bound-b B] [--two-sided]
            one JSON object: {method, n_used, radius, terms, side}
  monitor   --alpha A --d D --null FILE [--n N | --schedule user --gammas FILE]
            [--predictor {running-mean,psi-weighted}] [--randomize-u U]
            reads matrix records from stdin, emits one JSON line per step
  simulate  --table {1,2,3,coverage,sharpness} [--reps R] [--seed S] [--max-n N]
            [--out FILE] [--include-1e6] [--pretty]
  generate  --generator {projection-mixture,scalar-uniform,covariance-outer,dependent-stream}
            --n N [--d D] [--seed S] [--stream K] [--out FILE] [--format {text,csv}]

common flags: --config FILE (key=value defaults; flags override)
environment:  MATRIX_EB_SEED sets the default seed
";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
        }
    }
}

fn usage_err(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn compute_err(err: impl std::fmt::Display) -> CliError {
    CliError::Compute(err.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone)]
pub enum Command {
    Radius {
        method: Method,
        alpha: f64,
        input: PathBuf,
        format: FileFormat,
        variance_norm: Option<f64>,
        trace_v: Option<f64>,
        bound_b: f64,
        two_sided: bool,
    },
    Monitor {
        alpha: f64,
        dim: usize,
        null_path: PathBuf,
        fixed_n: Option<usize>,
        gammas: Option<PathBuf>,
        predictor: Predictor,
        randomize_u: Option<f64>,
    },
    Simulate {
        table: TableKind,
        reps: usize,
        seed: u64,
        max_n: usize,
        out: Option<PathBuf>,
        include_large_n: bool,
        pretty: bool,
    },
    Generate {
        kind: sim::GeneratorKind,
        n: usize,
        seed: u64,
        stream: u64,
        out: Option<PathBuf>,
        format: FileFormat,
    },
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: Command,
}

/// Raw key→value view of config file plus flags, flags winning.
struct Options {
    values: HashMap<String, String>,
}

impl Options {
    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn required(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| usage_err(format!("missing required flag --{key}")))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| usage_err(format!("bad value '{raw}' for --{key}"))),
        }
    }

    fn parse_required<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self.required(key)?;
        raw.parse::<T>()
            .map_err(|_| usage_err(format!("bad value '{raw}' for --{key}")))
    }

    fn flag(&self, key: &str) -> bool {
        matches!(self.get(key), Some("true") | Some("1") | Some("yes"))
    }
}

const BOOL_FLAGS: &[&str] = &["two-sided", "include-1e6", "pretty"];

fn collect_options(args: &[String]) -> Result<Options, CliError> {
    let mut flag_values: HashMap<String, String> = HashMap::new();
    let mut config_path: Option<String> = None;
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let Some(key) = arg.strip_prefix("--") else {
            return Err(usage_err(format!("unexpected argument '{arg}'")));
        };
        if BOOL_FLAGS.contains(&key) {
            flag_values.insert(key.to_string(), "true".to_string());
            i += 1;
            continue;
        }
        let value = args
            .get(i + 1)
            .ok_or_else(|| usage_err(format!("flag --{key} needs a value")))?;
        if key == "config" {
            config_path = Some(value.clone());
        } else {
            flag_values.insert(key.to_string(), value.clone());
        }
        i += 2;
    }

    let mut values = HashMap::new();
    if let Some(path) = config_path {
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read config '{path}': {e}")))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "config '{path}' line {}: expected key=value",
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    // Flags override config-file values deterministically.
    values.extend(flag_values);
    Ok(Options { values })
}

fn default_seed(options: &Options) -> Result<u64, CliError> {
    if let Some(seed) = options.parse::<u64>("seed")? {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(raw) => raw
            .parse::<u64>()
            .map_err(|_| usage_err(format!("bad {SEED_ENV_VAR} value '{raw}'"))),
        Err(_) => Ok(1),
    }
}

fn parse_alpha(options: &Options) -> Result<f64, CliError> {
    let alpha: f64 = options.parse_required("alpha")?;
    if alpha.is_nan() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(usage_err(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(alpha)
}

fn parse_format(options: &Options) -> Result<FileFormat, CliError> {
    match options.get("format") {
        None | Some("text") => Ok(FileFormat::Text),
        Some("csv") => Ok(FileFormat::Csv),
        Some(other) => Err(usage_err(format!("unknown format '{other}'"))),
    }
}

/// Parses an argument vector (without the program name).
pub fn parse_args(args: &[String]) -> Result<CliConfig, CliError> {
    let Some(subcommand) = args.first() else {
        return Err(usage_err("missing subcommand"));
    };
    let options = collect_options(&args[1..])?;

    let command = match subcommand.as_str() {
        "radius" => {
            let method_tag = options.required("method")?;
            let method = Method::parse(method_tag)
                .ok_or_else(|| usage_err(format!("unknown method '{method_tag}'")))?;
            Command::Radius {
                method,
                alpha: parse_alpha(&options)?,
                input: PathBuf::from(options.required("input")?),
                format: parse_format(&options)?,
                variance_norm: options.parse("variance-norm")?,
                trace_v: options.parse("trace-v")?,
                bound_b: options.parse("bound-b")?.unwrap_or(1.0),
                two_sided: options.flag("two-sided"),
            }
        }
        "monitor" => {
            let fixed_n: Option<usize> = options.parse("n")?;
            let gammas: Option<PathBuf> = options.get("gammas").map(PathBuf::from);
            match options.get("schedule") {
                None => {}
                Some("user") => {
                    if gammas.is_none() {
                        return Err(usage_err("--schedule user needs --gammas FILE"));
                    }
                }
                Some("fixed-n") => {
                    if fixed_n.is_none() {
                        return Err(usage_err("--schedule fixed-n needs --n N"));
                    }
                }
                Some(other) => {
                    return Err(usage_err(format!("unknown schedule '{other}'")));
                }
            }
            if fixed_n.is_some() == gammas.is_some() {
                return Err(usage_err("monitor needs exactly one of --n or --gammas"));
            }
            let predictor = match options.get("predictor") {
                None | Some("running-mean") => Predictor::RunningMean,
                Some("psi-weighted") => Predictor::PsiWeightedMean,
                Some(other) => {
                    return Err(usage_err(format!("unknown predictor '{other}'")));
                }
            };
            Command::Monitor {
                alpha: parse_alpha(&options)?,
                dim: options.parse_required("d")?,
                null_path: PathBuf::from(options.required("null")?),
                fixed_n,
                gammas,
                predictor,
                randomize_u: options.parse("randomize-u")?,
            }
        }
        "simulate" => {
            let table_tag = options.required("table")?;
            let table = TableKind::parse(table_tag)
                .ok_or_else(|| usage_err(format!("unknown table '{table_tag}'")))?;
            Command::Simulate {
                table,
                reps: options.parse::<usize>("reps")?.unwrap_or(100),
                seed: default_seed(&options)?,
                max_n: options.parse::<usize>("max-n")?.unwrap_or(100_000),
                out: options.get("out").map(PathBuf::from),
                include_large_n: options.flag("include-1e6"),
                pretty: options.flag("pretty"),
            }
        }
        "generate" => {
            let kind = match options.required("generator")? {
                "projection-mixture" => sim::GeneratorKind::ProjectionMixture,
                "scalar-uniform" => sim::GeneratorKind::ScalarUniform,
                "covariance-outer" => sim::GeneratorKind::CovarianceOuter {
                    dim: options.parse::<usize>("d")?.unwrap_or(3),
                },
                "dependent-stream" => sim::GeneratorKind::DependentStream,
                other => return Err(usage_err(format!("unknown generator '{other}'"))),
            };
            Command::Generate {
                kind,
                n: options.parse_required("n")?,
                seed: default_seed(&options)?,
                stream: options.parse::<u64>("stream")?.unwrap_or(0),
                out: options.get("out").map(PathBuf::from),
                format: parse_format(&options)?,
            }
        }
        other => {
            return Err(usage_err(format!("unknown subcommand '{other}'")));
        }
    };
    Ok(CliConfig { command })
}

fn read_sample(path: &Path, format: FileFormat) -> Result<MatrixSample, CliError> {
    let file = fs::File::open(path)
        .map_err(|e| compute_err(format!("cannot open '{}': {e}", path.display())))?;
    let reader = std::io::BufReader::new(file);
    let matrices = match format {
        FileFormat::Text => mio::read_matrices(reader),
        FileFormat::Csv => mio::read_matrices_csv(reader),
    }
    .map_err(compute_err)?;
    MatrixSample::unit_interval(matrices).map_err(compute_err)
}

fn radius_result(
    method: Method,
    alpha: f64,
    sample: &MatrixSample,
    variance_norm: Option<f64>,
    trace_v: Option<f64>,
    bound_b: f64,
) -> Result<BoundResult, CliError> {
    let n = sample.len();
    let d = sample.dim();
    let request = || -> Result<BoundRequest, CliError> {
        let mut req = BoundRequest::new(n, d, alpha)
            .and_then(|r| r.with_bound_b(bound_b))
            .map_err(compute_err)?;
        if let Some(v) = variance_norm {
            req = req.with_variance_norm(v).map_err(compute_err)?;
        }
        if let Some(t) = trace_v {
            req = req.with_trace_v(t).map_err(compute_err)?;
        }
        Ok(req)
    };
    let scalar_variance = || -> Result<f64, CliError> {
        if d != 1 {
            return Err(compute_err(format!(
                "method {} expects scalar (1x1) input, got d={d}",
                method.as_str()
            )));
        }
        Ok(estimators::bessel_variance(sample)
            .map_err(compute_err)?
            .matrix
            .get(0, 0))
    };
    let result = match method {
        Method::Tb => bounds::matrix_bennett_bernstein(&request()?).map_err(compute_err)?,
        Method::Meb1 => bounds::meb1_radius(sample, alpha).map_err(compute_err)?,
        Method::Meb1c => bounds::meb1c_radius(sample, alpha).map_err(compute_err)?,
        Method::Mb => bounds::minsker_radius(&request()?).map_err(compute_err)?,
        Method::Hoeffding => {
            bounds::matrix_hoeffding_radius(n, d, alpha, bound_b).map_err(compute_err)?
        }
        Method::Mp => {
            bounds::maurer_pontil_radius(n, alpha, scalar_variance()?).map_err(compute_err)?
        }
        Method::SharpMp => {
            bounds::sharp_mp_radius(n, alpha, scalar_variance()?).map_err(compute_err)?
        }
        Method::Meb2 => {
            let r = seqeb::meb2_fixed_n(sample, alpha).map_err(compute_err)?;
            let log_term = (d as f64 / alpha).ln();
            let terms = Terms {
                bounded: log_term / r.gamma_sum,
                variance: r.penalty_lambda_max / r.gamma_sum,
                correction: 0.0,
            };
            BoundResult {
                method: Method::Meb2,
                n_used: r.n_used,
                radius: terms.bounded + terms.variance + terms.correction,
                terms,
                side: Side::OneSidedUpper,
            }
        }
    };
    Ok(result)
}

#[derive(Serialize)]
struct MonitorLine {
    step: usize,
    log_l: f64,
    threshold: f64,
    reject: bool,
    radius: f64,
    gamma: f64,
}

struct MonitorParams<'a> {
    alpha: f64,
    dim: usize,
    null_path: &'a Path,
    fixed_n: Option<usize>,
    gammas: Option<&'a Path>,
    predictor: Predictor,
    randomize_u: Option<f64>,
}

fn run_monitor<R: BufRead, W: Write>(
    params: MonitorParams<'_>,
    input: R,
    out: &mut W,
) -> Result<(), CliError> {
    let MonitorParams {
        alpha,
        dim,
        null_path,
        fixed_n,
        gammas,
        predictor,
        randomize_u,
    } = params;
    let nulls = mio::read_matrices(std::io::BufReader::new(
        fs::File::open(null_path)
            .map_err(|e| compute_err(format!("cannot open '{}': {e}", null_path.display())))?,
    ))
    .map_err(compute_err)?;
    if nulls.len() != 1 {
        return Err(compute_err(format!(
            "null file must hold exactly one matrix, found {}",
            nulls.len()
        )));
    }
    let m_null = nulls.into_iter().next().expect("length checked");
    if m_null.dim() != dim {
        return Err(compute_err(format!(
            "null matrix has dim {}, expected {dim}",
            m_null.dim()
        )));
    }

    let schedule = match (fixed_n, gammas) {
        (Some(n), None) => GammaSchedule::FixedNAdaptive { n },
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| compute_err(format!("cannot read '{}': {e}", path.display())))?;
            let values: Result<Vec<f64>, _> = text
                .split_whitespace()
                .map(|tok| tok.parse::<f64>())
                .collect();
            GammaSchedule::UserSupplied(
                values.map_err(|e| compute_err(format!("bad gamma value: {e}")))?,
            )
        }
        _ => unreachable!("parse_args enforces exactly one schedule source"),
    };

    let mut state = SeqEbState::new(dim, alpha, schedule, predictor).map_err(compute_err)?;
    if let Some(u) = randomize_u {
        state = state.with_randomize_u(u).map_err(compute_err)?;
    }

    // Records arrive on stdin one per step; emit a decision as each record
    // completes.
    let mut buffer = String::new();
    let mut rows_expected: Option<usize> = None;
    let mut rows_seen = 0usize;
    for line in input.lines() {
        let line = line.map_err(compute_err)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(dim_str) = trimmed.strip_prefix("d=") {
            if rows_expected.is_some() {
                return Err(compute_err("record truncated mid-stream"));
            }
            let d: usize = dim_str
                .trim()
                .parse()
                .map_err(|_| compute_err(format!("bad dimension line '{trimmed}'")))?;
            rows_expected = Some(d);
            rows_seen = 0;
            buffer.clear();
            buffer.push_str(trimmed);
            buffer.push('\n');
            continue;
        }
        let Some(expected) = rows_expected else {
            return Err(compute_err(format!(
                "expected a 'd=<int>' record header, got '{trimmed}'"
            )));
        };
        buffer.push_str(trimmed);
        buffer.push('\n');
        rows_seen += 1;
        if rows_seen < expected {
            continue;
        }
        let matrices = mio::read_matrices_str(&buffer).map_err(compute_err)?;
        rows_expected = None;
        let x = &matrices[0];
        let (next, decision) = state.update(x, &m_null).map_err(compute_err)?;
        state = next;
        let line = MonitorLine {
            step: decision.step,
            log_l: decision.log_supermartingale,
            threshold: decision.threshold,
            reject: decision.reject,
            radius: decision.current_radius,
            gamma: decision.gamma,
        };
        serde_json::to_writer(&mut *out, &line).map_err(compute_err)?;
        writeln!(out).map_err(compute_err)?;
    }
    if rows_expected.is_some() {
        return Err(compute_err("input ended mid-record"));
    }
    Ok(())
}

fn pretty_table(report: &sim::SimReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:>8} {:<16} {:>12} {:>12} {:>10}\n",
        "table", "n", "method", "ratio_mean", "ratio_sd", "coverage"
    ));
    for r in &report.rows {
        let fmt = |v: Option<f64>| match v {
            Some(x) => format!("{x:.4}"),
            None => "-".to_string(),
        };
        out.push_str(&format!(
            "{:<10} {:>8} {:<16} {:>12} {:>12} {:>10}\n",
            r.table,
            r.n,
            r.method,
            fmt(r.ratio_mean),
            fmt(r.ratio_sd),
            fmt(r.coverage)
        ));
    }
    out
}

/// Executes a parsed command, writing to the given stdout handle.
pub fn run<W: Write>(config: &CliConfig, out: &mut W) -> Result<(), CliError> {
    match &config.command {
        Command::Radius {
            method,
            alpha,
            input,
            format,
            variance_norm,
            trace_v,
            bound_b,
            two_sided,
        } => {
            let sample = read_sample(input, *format)?;
            let effective_alpha = if *two_sided { alpha / 2.0 } else { *alpha };
            let mut result = radius_result(
                *method,
                effective_alpha,
                &sample,
                *variance_norm,
                *trace_v,
                *bound_b,
            )?;
            if *two_sided {
                result.side = Side::TwoSided;
            }
            serde_json::to_writer(&mut *out, &result).map_err(compute_err)?;
            writeln!(out).map_err(compute_err)?;
            Ok(())
        }
        Command::Monitor {
            alpha,
            dim,
            null_path,
            fixed_n,
            gammas,
            predictor,
            randomize_u,
        } => {
            let stdin = std::io::stdin();
            run_monitor(
                MonitorParams {
                    alpha: *alpha,
                    dim: *dim,
                    null_path,
                    fixed_n: *fixed_n,
                    gammas: gammas.as_deref(),
                    predictor: *predictor,
                    randomize_u: *randomize_u,
                },
                stdin.lock(),
                out,
            )
        }
        Command::Simulate {
            table,
            reps,
            seed,
            max_n,
            out: out_path,
            include_large_n,
            pretty,
        } => {
            if *include_large_n {
                eprintln!(
                    "warning: the n=1,000,000 grid point is enabled; expect a long runtime"
                );
            }
            let mut cfg = SimConfig::new(*table, *reps, *seed, *max_n);
            cfg.allow_large_n = *include_large_n;
            let report = sim::run_table(&cfg).map_err(compute_err)?;
            let mut rendered = Vec::new();
            if *pretty {
                rendered.extend_from_slice(pretty_table(&report).as_bytes());
            } else {
                report.write_csv(&mut rendered).map_err(compute_err)?;
            }
            match out_path {
                Some(path) => fs::write(path, rendered)
                    .map_err(|e| compute_err(format!("cannot write '{}': {e}", path.display())))?,
                None => out.write_all(&rendered).map_err(compute_err)?,
            }
            Ok(())
        }
        Command::Generate {
            kind,
            n,
            seed,
            stream,
            out: out_path,
            format,
        } => {
            let generator = sim::Generator::new(*kind, *seed);
            let sample = generator.sample(*n, *stream).map_err(compute_err)?;
            let mut rendered = Vec::new();
            match format {
                FileFormat::Text => mio::write_matrices(&mut rendered, sample.items()),
                FileFormat::Csv => mio::write_matrices_csv(&mut rendered, sample.items()),
            }
            .map_err(compute_err)?;
            match out_path {
                Some(path) => fs::write(path, rendered)
                    .map_err(|e| compute_err(format!("cannot write '{}': {e}", path.display())))?,
                None => out.write_all(&rendered).map_err(compute_err)?,
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: &'a str,
    kind: &'a str,
    exit_code: i32,
}

/// Full CLI entry point; returns the process exit code.
pub fn main_with_args(args: &[String]) -> i32 {
    let config = match parse_args(args) {
        Ok(config) => config,
        Err(err) => {
            let code = err.exit_code();
            if matches!(err, CliError::Usage(_)) {
                eprintln!("error: {err}");
                eprint!("{USAGE}");
            } else {
                eprintln!("error: {err}");
            }
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    match run(&config, &mut out) {
        Ok(()) => {
            let _ = out.flush();
            0
        }
        Err(err) => {
            let _ = out.flush();
            let code = err.exit_code();
            let kind = match err {
                CliError::Compute(_) => "compute",
                CliError::Usage(_) => "usage",
                CliError::Config(_) => "config",
            };
            let obj = ErrorObject {
                error: &err.to_string(),
                kind,
                exit_code: code,
            };
            eprintln!(
                "{}",
                serde_json::to_string(&obj).unwrap_or_else(|_| format!("{{\"error\":\"{err}\"}}"))
            );
            code
        }
    }
}
