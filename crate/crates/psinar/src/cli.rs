//! Command-line front end: argument types, CSV ingestion and report
//! rendering. The `psinar` binary is a thin wrapper over [`run`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{
    compare_models, predict_with, run_mc_study, ComparisonTable, LagPolicy, McConfig, McReport,
    PredictionTrace,
};
use crate::distributions::{InnovationKind, ThinningFamily};
use crate::error::{Error, Result};
use crate::estimation::{fit_cmle, fit_moment_method, FitResult, Method};
use crate::process::{CountSeries, InarModel};

/// Default RNG seed used whenever `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Bernoulli,
    Geometric,
    Poisson,
}

impl FamilyArg {
    pub fn to_family(self) -> ThinningFamily {
        match self {
            FamilyArg::Bernoulli => ThinningFamily::Bernoulli,
            FamilyArg::Geometric => ThinningFamily::Geometric,
            FamilyArg::Poisson => ThinningFamily::Poisson,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnovationArg {
    PoissonLindley,
    Poisson,
    Geometric,
}

impl InnovationArg {
    pub fn to_kind(self) -> InnovationKind {
        match self {
            InnovationArg::PoissonLindley => InnovationKind::PoissonLindley,
            InnovationArg::Poisson => InnovationKind::Poisson,
            InnovationArg::Geometric => InnovationKind::Geometric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Cls,
    Yw,
    Cmle,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Cls => vec![Method::Cls],
            MethodArg::Yw => vec![Method::Yw],
            MethodArg::Cmle => vec![Method::Cmle],
            MethodArg::All => vec![Method::Cls, Method::Yw, Method::Cmle],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LagArg {
    Observed,
    Predicted,
}

impl LagArg {
    fn to_policy(self) -> LagPolicy {
        match self {
            LagArg::Observed => LagPolicy::Observed,
            LagArg::Predicted => LagPolicy::Predicted,
        }
    }
}

/// Innovation parameter flags: exactly one of θ/λ/p selects the law.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct InnovationParam {
    /// Poisson-Lindley innovation parameter θ > 0.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Poisson innovation rate λ > 0.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Geometric innovation success probability p in (0,1).
    #[arg(long)]
    pub p: Option<f64>,
}

impl InnovationParam {
    fn resolve(&self) -> Result<(InnovationKind, f64)> {
        match (self.theta, self.lambda, self.p) {
            (Some(t), None, None) => Ok((InnovationKind::PoissonLindley, t)),
            (None, Some(l), None) => Ok((InnovationKind::Poisson, l)),
            (None, None, Some(p)) => Ok((InnovationKind::Geometric, p)),
            _ => Err(Error::Config(
                "provide exactly one of --theta, --lambda or --p".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Thinning family of the counting series.
    #[arg(long, value_enum, default_value = "bernoulli")]
    pub family: FamilyArg,
    /// Thinning parameter α in (0,1).
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub innovation: InnovationParam,
    /// Number of observations to emit.
    #[arg(long)]
    pub length: usize,
    /// Steps discarded before recording, starting from X₀ = 0.
    #[arg(long, default_value_t = 500)]
    pub burn_in: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FitArgs {
    /// Input series (single-column CSV or whitespace-separated integers).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "bernoulli")]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value = "poisson-lindley")]
    pub innovation: InnovationArg,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CompareArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PredictArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Model family used when fitting (ignored with explicit estimates).
    #[arg(long, value_enum, default_value = "bernoulli")]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value = "poisson-lindley")]
    pub innovation: InnovationArg,
    /// Estimation method when no explicit estimates are given.
    #[arg(long, value_enum, default_value = "cmle")]
    pub method: MethodArg,
    /// Use this α̂ instead of fitting (requires one of --theta/--lambda/--p).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub param: InnovationParam,
    #[arg(long, value_enum, default_value = "observed")]
    pub lag: LagArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct McStudyArgs {
    #[arg(long, value_enum, default_value = "bernoulli")]
    pub family: FamilyArg,
    /// True α of the generating process.
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub innovation: InnovationParam,
    /// Series lengths, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 300])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub burn_in: usize,
    /// Estimators to include.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::All])]
    pub methods: Vec<MethodArg>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DescribeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// One invocation of the tool; embedded verbatim in every report for replay.
#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    /// Simulate a series from a fully specified model.
    Simulate(SimulateArgs),
    /// Estimate (α, innovation parameter) from a series.
    Fit(FitArgs),
    /// Fit all five models and rank them by AIC/BIC.
    Compare(CompareArgs),
    /// One-step-ahead predictions and residuals.
    Predict(PredictArgs),
    /// Monte Carlo estimator study (AE/ABias/RMSE tables).
    McStudy(McStudyArgs),
    /// Summary statistics and checksum of a series file.
    Describe(DescribeArgs),
}

#[derive(Debug, Parser)]
#[command(
    name = "psinar",
    version,
    about = "Integer-valued AR(1) count series: simulate, fit, compare, predict"
)]
pub struct Cli {
    #[command(subcommand)]
    pub config: RunConfig,
}

/// Reads a count series: single-column CSV with an optional header, or
/// integers separated by whitespace, newlines or commas.
pub fn ingest_series(path: &Path) -> Result<CountSeries> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    let mut first_data_line = true;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim_start_matches('\u{feff}').trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .collect();
        let parsed: Vec<Option<u32>> = tokens
            .iter()
            .map(|t| parse_count(t))
            .collect::<Result<_>>()
            .map_err(|e| at_line(e, line_no))?;
        if parsed.iter().any(Option::is_none) {
            // A non-numeric first line is treated as a header.
            if first_data_line && tokens.iter().all(|t| t.parse::<f64>().is_err()) {
                first_data_line = false;
                continue;
            }
            return Err(Error::Parse {
                line: line_no,
                message: format!("missing or non-numeric value in `{trimmed}`"),
            });
        }
        values.extend(parsed.into_iter().flatten());
        first_data_line = false;
    }
    if values.len() < 3 {
        return Err(Error::SeriesTooShort {
            need: 3,
            got: values.len(),
        });
    }
    CountSeries::new(values)
}

fn parse_count(token: &str) -> Result<Option<u32>> {
    if token.is_empty() {
        return Ok(None);
    }
    if let Ok(v) = token.parse::<i64>() {
        if v < 0 {
            return Err(Error::Parse {
                line: 0,
                message: format!("negative value {v}"),
            });
        }
        return Ok(Some(v as u32));
    }
    if let Ok(v) = token.parse::<f64>() {
        if v.fract() != 0.0 {
            return Err(Error::Parse {
                line: 0,
                message: format!("non-integer value {v}"),
            });
        }
        if v < 0.0 {
            return Err(Error::Parse {
                line: 0,
                message: format!("negative value {v}"),
            });
        }
        return Ok(Some(v as u32));
    }
    Ok(None)
}

fn at_line(err: Error, line: usize) -> Error {
    match err {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

/// Executes one command and renders its report in the requested format.
pub fn run(config: &RunConfig) -> Result<String> {
    match config {
        RunConfig::Simulate(args) => run_simulate(config, args),
        RunConfig::Fit(args) => run_fit(config, args),
        RunConfig::Compare(args) => run_compare(config, args),
        RunConfig::Predict(args) => run_predict(config, args),
        RunConfig::McStudy(args) => run_mc(config, args),
        RunConfig::Describe(args) => run_describe(config, args),
    }
}

/// Runs a command and writes its report to `--output` (or stdout).
/// Returns the process exit code; errors print a structured record to
/// stderr.
pub fn run_to_completion(cli: &Cli) -> i32 {
    match run(&cli.config) {
        Ok(report) => {
            let output = match &cli.config {
                RunConfig::Simulate(a) => a.output.as_ref(),
                RunConfig::Fit(a) => a.output.as_ref(),
                RunConfig::Compare(a) => a.output.as_ref(),
                RunConfig::Predict(a) => a.output.as_ref(),
                RunConfig::McStudy(a) => a.output.as_ref(),
                RunConfig::Describe(a) => a.output.as_ref(),
            };
            match output {
                Some(path) => {
                    if let Err(err) = std::fs::write(path, report) {
                        let err = Error::from(err);
                        eprintln!("{}", error_record(&err));
                        return err.exit_code();
                    }
                }
                None => print!("{report}"),
            }
            0
        }
        Err(err) => {
            eprintln!("{}", error_record(&err));
            err.exit_code()
        }
    }
}

fn error_record(err: &Error) -> String {
    json!({ "error": err.to_string(), "exit_code": err.exit_code() }).to_string()
}

fn config_json(config: &RunConfig) -> Value {
    serde_json::to_value(config).expect("config serializes")
}

fn envelope(config: &RunConfig, result: Value) -> String {
    let doc = json!({ "config": config_json(config), "result": result });
    let mut body = serde_json::to_string_pretty(&doc).expect("valid json");
    body.push('\n');
    body
}

// Config echo for CSV/table outputs, as comment lines.
fn config_comment(config: &RunConfig) -> String {
    let mut out = String::new();
    let value = config_json(config);
    let obj = value.as_object().expect("config is an object");
    let mut keys: Vec<&String> = obj.keys().collect();
    keys.sort();
    for key in keys {
        let _ = writeln!(out, "# {} = {}", key, obj[key.as_str()]);
    }
    out
}

fn fit_json(fit: &std::result::Result<FitResult, String>) -> Value {
    match fit {
        Ok(f) => serde_json::to_value(f).expect("fit serializes"),
        Err(message) => json!({ "error": message }),
    }
}

fn summary_json(series: &CountSeries) -> Value {
    json!({
        "n": series.len(),
        "mean": series.mean(),
        "variance": series.variance(),
        "acf1": series.autocorrelation(1),
    })
}

fn run_simulate(config: &RunConfig, args: &SimulateArgs) -> Result<String> {
    let (kind, param) = args.innovation.resolve()?;
    let innovation = kind.with_param(param)?;
    let model = InarModel::new(args.family.to_family(), args.alpha, innovation)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let series = model.simulate(args.length, args.burn_in, &mut rng)?;

    Ok(match args.format {
        FormatArg::Json => envelope(
            config,
            json!({ "series": series.values(), "summary": summary_json(&series) }),
        ),
        FormatArg::Csv | FormatArg::Table => {
            let mut out = config_comment(config);
            out.push_str("count\n");
            for v in series.values() {
                let _ = writeln!(out, "{v}");
            }
            out
        }
    })
}

fn fit_by(
    series: &CountSeries,
    family: &ThinningFamily,
    kind: InnovationKind,
    method: Method,
) -> std::result::Result<FitResult, String> {
    match method {
        Method::Cls | Method::Yw => {
            fit_moment_method(series, family, kind, method).map_err(|e| e.to_string())
        }
        Method::Cmle => fit_cmle(series, family, kind, None).map_err(|e| e.to_string()),
    }
}

fn run_fit(config: &RunConfig, args: &FitArgs) -> Result<String> {
    let series = ingest_series(&args.input)?;
    let family = args.family.to_family();
    let kind = args.innovation.to_kind();
    let methods = args.method.methods();
    let fits: Vec<(Method, std::result::Result<FitResult, String>)> = methods
        .iter()
        .map(|&m| (m, fit_by(&series, &family, kind, m)))
        .collect();
    if fits.iter().all(|(_, f)| f.is_err()) {
        return Err(Error::OptimizationFailed {
            reason: fits[0].1.as_ref().err().cloned().unwrap_or_default(),
            starts: fits.len(),
        });
    }

    Ok(match args.format {
        FormatArg::Json => {
            let mut map = serde_json::Map::new();
            for (method, fit) in &fits {
                map.insert(method.to_string().to_lowercase(), fit_json(fit));
            }
            envelope(
                config,
                json!({ "summary": summary_json(&series), "fits": Value::Object(map) }),
            )
        }
        FormatArg::Csv => {
            let mut out = config_comment(config);
            out.push_str("method,alpha,param_name,param,mu,loglik,aic,bic,se_alpha,se_param\n");
            for (method, fit) in &fits {
                match fit {
                    Ok(f) => {
                        let se = f.std_errors.unwrap_or([f64::NAN, f64::NAN]);
                        let _ = writeln!(
                            out,
                            "{},{:.6},{},{:.6},{},{:.6},{:.6},{:.6},{},{}",
                            method,
                            f.alpha,
                            f.param_name,
                            f.param,
                            f.mu.map_or(String::new(), |m| format!("{m:.6}")),
                            f.loglik,
                            f.aic,
                            f.bic,
                            if se[0].is_nan() {
                                String::new()
                            } else {
                                format!("{:.6}", se[0])
                            },
                            if se[1].is_nan() {
                                String::new()
                            } else {
                                format!("{:.6}", se[1])
                            },
                        );
                    }
                    Err(msg) => {
                        let _ = writeln!(out, "{method},error: {msg},,,,,,,,");
                    }
                }
            }
            out
        }
        FormatArg::Table => {
            let mut out = config_comment(config);
            let _ = writeln!(
                out,
                "series: n = {}, mean = {:.4}, variance = {:.4}, acf1 = {:.4}",
                series.len(),
                series.mean(),
                series.variance(),
                series.autocorrelation(1)
            );
            let _ = writeln!(
                out,
                "{:<6} {:>10} {:>12} {:>12} {:>12} {:>12} {:>12}",
                "method", "alpha", "param", "loglik", "AIC", "BIC", "se(alpha)"
            );
            for (method, fit) in &fits {
                match fit {
                    Ok(f) => {
                        let se = f
                            .std_errors
                            .map_or(String::from("-"), |s| format!("{:.4}", s[0]));
                        let _ = writeln!(
                            out,
                            "{:<6} {:>10.4} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>12}",
                            method.to_string(),
                            f.alpha,
                            f.param,
                            f.loglik,
                            f.aic,
                            f.bic,
                            se
                        );
                    }
                    Err(msg) => {
                        let _ = writeln!(out, "{:<6} failed: {msg}", method.to_string());
                    }
                }
            }
            out
        }
    })
}

fn comparison_json(table: &ComparisonTable) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            json!({
                "model": row.tag.to_string(),
                "cls": fit_json(&row.cls),
                "yw": fit_json(&row.yw),
                "cmle": fit_json(&row.cmle),
            })
        })
        .collect();
    json!({
        "rows": rows,
        "aic_winner": table.aic_winner.map(|t| t.to_string()),
        "bic_winner": table.bic_winner.map(|t| t.to_string()),
    })
}

fn run_compare(config: &RunConfig, args: &CompareArgs) -> Result<String> {
    let series = ingest_series(&args.input)?;
    let table = compare_models(&series)?;

    Ok(match args.format {
        FormatArg::Json => envelope(
            config,
            json!({ "summary": summary_json(&series), "comparison": comparison_json(&table) }),
        ),
        FormatArg::Csv => {
            let mut out = config_comment(config);
            out.push_str(
                "model,cls_alpha,cls_param,yw_alpha,yw_param,mle_alpha,mle_param,aic,bic\n",
            );
            for row in &table.rows {
                let cell = |fit: &std::result::Result<FitResult, String>,
                            pick: fn(&FitResult) -> f64| {
                    fit.as_ref()
                        .map(|f| format!("{:.4}", pick(f)))
                        .unwrap_or_default()
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    row.tag,
                    cell(&row.cls, |f| f.alpha),
                    cell(&row.cls, |f| f.param),
                    cell(&row.yw, |f| f.alpha),
                    cell(&row.yw, |f| f.param),
                    cell(&row.cmle, |f| f.alpha),
                    cell(&row.cmle, |f| f.param),
                    cell(&row.cmle, |f| f.aic),
                    cell(&row.cmle, |f| f.bic),
                );
            }
            out
        }
        FormatArg::Table => {
            let mut out = config_comment(config);
            let _ = writeln!(
                out,
                "{:<12} {:>18} {:>18} {:>18} {:>10} {:>10}",
                "model", "CLS", "YW", "MLE", "AIC", "BIC"
            );
            for row in &table.rows {
                let fmt = |fit: &std::result::Result<FitResult, String>| match fit {
                    Ok(f) => format!("a={:.4} {}={:.4}", f.alpha, f.param_name, f.param),
                    Err(_) => String::from("failed"),
                };
                let crit = |fit: &std::result::Result<FitResult, String>,
                            pick: fn(&FitResult) -> f64| match fit {
                    Ok(f) => format!("{:.4}", pick(f)),
                    Err(_) => String::from("-"),
                };
                let _ = writeln!(
                    out,
                    "{:<12} {:>18} {:>18} {:>18} {:>10} {:>10}",
                    row.tag.to_string(),
                    fmt(&row.cls),
                    fmt(&row.yw),
                    fmt(&row.cmle),
                    crit(&row.cmle, |f| f.aic),
                    crit(&row.cmle, |f| f.bic),
                );
            }
            if let Some(winner) = table.aic_winner {
                let _ = writeln!(out, "AIC winner: {winner}");
            }
            if let Some(winner) = table.bic_winner {
                let _ = writeln!(out, "BIC winner: {winner}");
            }
            out
        }
    })
}

fn run_predict(config: &RunConfig, args: &PredictArgs) -> Result<String> {
    let series = ingest_series(&args.input)?;
    let family = args.family.to_family();

    // Explicit estimates short-circuit fitting.
    let (alpha, innovation_mean, fitted): (f64, f64, Value) = match (args.alpha, &args.param) {
        (Some(alpha), param)
            if param.theta.is_some() || param.lambda.is_some() || param.p.is_some() =>
        {
            let (kind, value) = param.resolve()?;
            let innovation = kind.with_param(value)?;
            (
                alpha,
                innovation.mean(),
                json!({ "source": "explicit", "alpha": alpha, kind.param_name(): value }),
            )
        }
        (None, param) if param.theta.is_none() && param.lambda.is_none() && param.p.is_none() => {
            let kind = args.innovation.to_kind();
            let method = match args.method {
                MethodArg::All => {
                    return Err(Error::Config(
                        "predict requires a single method (cls, yw or cmle)".into(),
                    ))
                }
                MethodArg::Cls => Method::Cls,
                MethodArg::Yw => Method::Yw,
                MethodArg::Cmle => Method::Cmle,
            };
            let fit = fit_by(&series, &family, kind, method)
                .map_err(|reason| Error::OptimizationFailed { reason, starts: 1 })?;
            let innovation = kind.with_param(fit.param)?;
            let fitted = serde_json::to_value(&fit).expect("fit serializes");
            (fit.alpha, innovation.mean(), fitted)
        }
        _ => {
            return Err(Error::Config(
                "give both --alpha and an innovation parameter, or neither".into(),
            ))
        }
    };

    let trace = predict_with(&series, alpha, innovation_mean, args.lag.to_policy())?;

    Ok(match args.format {
        FormatArg::Json => envelope(
            config,
            json!({
                "fitted": fitted,
                "alpha": trace.alpha,
                "intercept": trace.intercept(),
                "initial": trace.initial(),
                "predictions": prediction_rows_json(&series, &trace),
            }),
        ),
        FormatArg::Csv | FormatArg::Table => {
            let mut out = config_comment(config);
            out.push_str("t,observed,predicted,residual\n");
            for (i, (&obs, (&pred, &res))) in series
                .values()
                .iter()
                .zip(trace.predicted.iter().zip(trace.residuals.iter()))
                .enumerate()
            {
                let _ = writeln!(out, "{},{},{:.6},{:.6}", i + 1, obs, pred, res);
            }
            out
        }
    })
}

fn prediction_rows_json(series: &CountSeries, trace: &PredictionTrace) -> Value {
    let rows: Vec<Value> = series
        .values()
        .iter()
        .zip(trace.predicted.iter().zip(trace.residuals.iter()))
        .enumerate()
        .map(|(i, (&obs, (&pred, &res)))| {
            json!({ "t": i + 1, "observed": obs, "predicted": pred, "residual": res })
        })
        .collect();
    Value::Array(rows)
}

fn run_mc(config: &RunConfig, args: &McStudyArgs) -> Result<String> {
    let (kind, param) = args.innovation.resolve()?;
    let mut methods: Vec<Method> = Vec::new();
    for arg in &args.methods {
        for m in arg.methods() {
            if !methods.contains(&m) {
                methods.push(m);
            }
        }
    }
    let mc = McConfig {
        family: args.family.to_family(),
        innovation_kind: kind,
        alpha: args.alpha,
        param,
        sizes: args.sizes.clone(),
        replicates: args.replicates,
        seed: args.seed,
        burn_in: args.burn_in,
        methods,
    };
    let report = run_mc_study(&mc)?;

    Ok(match args.format {
        FormatArg::Json => envelope(
            config,
            json!({ "blocks": serde_json::to_value(&report.blocks).expect("serializes") }),
        ),
        FormatArg::Csv => {
            let mut out = config_comment(config);
            out.push_str("size,method,statistic,alpha,param,used,failed\n");
            for b in &report.blocks {
                for (stat, a, p) in [
                    ("AE", b.alpha.ae, b.param.ae),
                    ("ABias", b.alpha.abias, b.param.abias),
                    ("RMSE", b.alpha.rmse, b.param.rmse),
                ] {
                    let _ = writeln!(
                        out,
                        "{},{},{},{:.6},{:.6},{},{}",
                        b.size, b.method, stat, a, p, b.used, b.failed
                    );
                }
            }
            out
        }
        FormatArg::Table => render_mc_table(config, &report),
    })
}

// Table layout mirrors the published simulation tables: one block per
// sample size, AE/ABias/RMSE rows, (alpha, param) column pairs per method.
fn render_mc_table(config: &RunConfig, report: &McReport) -> String {
    let mut out = config_comment(config);
    let methods = &report.config.methods;
    let pname = report.config.innovation_kind.param_name();
    let _ = writeln!(
        out,
        "true values: alpha = {}, {} = {}",
        report.config.alpha, pname, report.config.param
    );
    let mut header = format!("{:<8}", "");
    for m in methods {
        header.push_str(&format!(
            "{:>12} {:>12}",
            format!("alpha_{m}"),
            format!("{pname}_{m}")
        ));
    }
    for &size in &report.config.sizes {
        let _ = writeln!(out, "T = {size}");
        let _ = writeln!(out, "{header}");
        for (stat, pick_a, pick_p) in [
            (
                "AE",
                (|c: &crate::analysis::McBlock| c.alpha.ae) as fn(&crate::analysis::McBlock) -> f64,
                (|c: &crate::analysis::McBlock| c.param.ae) as fn(&crate::analysis::McBlock) -> f64,
            ),
            ("ABias", |c| c.alpha.abias, |c| c.param.abias),
            ("RMSE", |c| c.alpha.rmse, |c| c.param.rmse),
        ] {
            let mut line = format!("{stat:<8}");
            for &m in methods {
                if let Some(b) = report.block(size, m) {
                    line.push_str(&format!("{:>12.4} {:>12.4}", pick_a(b), pick_p(b)));
                } else {
                    line.push_str(&format!("{:>12} {:>12}", "-", "-"));
                }
            }
            let _ = writeln!(out, "{line}");
        }
        let failures: Vec<String> = methods
            .iter()
            .filter_map(|&m| {
                report
                    .block(size, m)
                    .filter(|b| b.failed > 0)
                    .map(|b| format!("{m}: {}", b.failed))
            })
            .collect();
        if !failures.is_empty() {
            let _ = writeln!(out, "excluded replicates: {}", failures.join(", "));
        }
    }
    out
}

fn run_describe(config: &RunConfig, args: &DescribeArgs) -> Result<String> {
    let bytes = std::fs::read(&args.input)?;
    let sha256 = hex_digest(&bytes);
    let series = ingest_series(&args.input)?;

    Ok(match args.format {
        FormatArg::Json => {
            let mut summary = summary_json(&series);
            summary["sha256"] = Value::String(sha256);
            envelope(config, summary)
        }
        FormatArg::Csv | FormatArg::Table => {
            let mut out = config_comment(config);
            let _ = writeln!(out, "n        {}", series.len());
            let _ = writeln!(out, "mean     {:.4}", series.mean());
            let _ = writeln!(out, "variance {:.4}", series.variance());
            let _ = writeln!(out, "acf1     {:.4}", series.autocorrelation(1));
            let _ = writeln!(out, "sha256   {sha256}");
            out
        }
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file.flush().unwrap();
        file
    }

    #[test]
    fn ingest_plain_column() {
        let file = write_temp("1\n2\n3\n");
        let series = ingest_series(file.path()).unwrap();
        assert_eq!(series.values(), &[1, 2, 3]);
    }

    #[test]
    fn ingest_with_header_and_blank_lines() {
        let file = write_temp("count\n\n4\n5\n6\n7\n");
        let series = ingest_series(file.path()).unwrap();
        assert_eq!(series.values(), &[4, 5, 6, 7]);
    }

    #[test]
    fn ingest_whitespace_separated() {
        let file = write_temp("1 2 3\n4\t5\n");
        let series = ingest_series(file.path()).unwrap();
        assert_eq!(series.values(), &[1, 2, 3, 4, 5]);
    }

    #[test]
    fn ingest_rejects_negative_with_line_number() {
        let file = write_temp("1\n2\n-1\n4\n");
        match ingest_series(file.path()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("negative"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn ingest_rejects_non_integer() {
        let file = write_temp("1\n2.5\n3\n");
        match ingest_series(file.path()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("non-integer"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn ingest_rejects_missing_values() {
        let file = write_temp("1,,2\n3\n");
        assert!(matches!(
            ingest_series(file.path()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn ingest_rejects_short_series() {
        let file = write_temp("1\n2\n");
        assert!(matches!(
            ingest_series(file.path()),
            Err(Error::SeriesTooShort { need: 3, got: 2 })
        ));
    }

    #[test]
    fn ingest_garbage_midfile_is_an_error() {
        let file = write_temp("1\n2\nhello\n3\n");
        assert!(matches!(
            ingest_series(file.path()),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn simulate_is_deterministic_and_round_trips() {
        let args = SimulateArgs {
            family: FamilyArg::Bernoulli,
            alpha: 0.5,
            innovation: InnovationParam {
                theta: Some(1.0),
                lambda: None,
                p: None,
            },
            length: 100,
            burn_in: 500,
            seed: 7,
            format: FormatArg::Csv,
            output: None,
        };
        let config = RunConfig::Simulate(args);
        let first = run(&config).unwrap();
        let second = run(&config).unwrap();
        assert_eq!(first, second);

        // The CSV body parses back into a series of the requested length.
        let file = write_temp(&first);
        let series = ingest_series(file.path()).unwrap();
        assert_eq!(series.len(), 100);
    }

    #[test]
    fn simulate_requires_exactly_one_innovation_parameter() {
        let mut args = SimulateArgs {
            family: FamilyArg::Bernoulli,
            alpha: 0.5,
            innovation: InnovationParam {
                theta: None,
                lambda: None,
                p: None,
            },
            length: 10,
            burn_in: 0,
            seed: 1,
            format: FormatArg::Csv,
            output: None,
        };
        assert!(run(&RunConfig::Simulate(args.clone())).is_err());
        args.innovation.theta = Some(1.0);
        args.innovation.p = Some(0.3);
        assert!(run(&RunConfig::Simulate(args)).is_err());
    }

    #[test]
    fn json_reports_embed_config() {
        let file = write_temp("3\n1\n4\n1\n5\n9\n2\n6\n5\n3\n5\n8\n9\n7\n9\n3\n2\n3\n8\n4\n");
        let config = RunConfig::Fit(FitArgs {
            input: file.path().to_path_buf(),
            family: FamilyArg::Bernoulli,
            innovation: InnovationArg::PoissonLindley,
            method: MethodArg::Cls,
            format: FormatArg::Json,
            output: None,
        });
        let report = run(&config).unwrap();
        let doc: Value = serde_json::from_str(&report).unwrap();
        assert_eq!(doc["config"]["command"], "fit");
        assert_eq!(doc["config"]["method"], "cls");
        assert!(doc["result"]["fits"]["cls"]["alpha"].is_number());
    }

    #[test]
    fn predict_csv_has_exact_header() {
        let file = write_temp("2\n1\n3\n2\n4\n3\n");
        let config = RunConfig::Predict(PredictArgs {
            input: file.path().to_path_buf(),
            family: FamilyArg::Bernoulli,
            innovation: InnovationArg::PoissonLindley,
            method: MethodArg::Cls,
            alpha: Some(0.5),
            param: InnovationParam {
                theta: Some(1.0),
                lambda: None,
                p: None,
            },
            lag: LagArg::Observed,
            format: FormatArg::Csv,
            output: None,
        });
        let report = run(&config).unwrap();
        let first_data_line = report
            .lines()
            .find(|l| !l.starts_with('#'))
            .expect("has content");
        assert_eq!(first_data_line, "t,observed,predicted,residual");
        // x̂_1 = 1.5/0.5 = 3, then alpha * x_{t-1} + 1.5.
        let row1: Vec<&str> = report
            .lines()
            .filter(|l| !l.starts_with('#'))
            .nth(1)
            .unwrap()
            .split(',')
            .collect();
        assert_eq!(row1[0], "1");
        assert_eq!(row1[1], "2");
        assert_eq!(row1[2], "3.000000");
    }

    #[test]
    fn describe_reports_summary_and_checksum() {
        let file = write_temp("1\n2\n3\n4\n");
        let config = RunConfig::Describe(DescribeArgs {
            input: file.path().to_path_buf(),
            format: FormatArg::Json,
            output: None,
        });
        let report = run(&config).unwrap();
        let doc: Value = serde_json::from_str(&report).unwrap();
        assert_eq!(doc["result"]["n"], 4);
        assert_eq!(doc["result"]["mean"], 2.5);
        assert_eq!(
            doc["result"]["sha256"].as_str().unwrap().len(),
            64,
            "sha256 hex digest"
        );
    }

    #[test]
    fn missing_input_maps_to_input_error() {
        let config = RunConfig::Describe(DescribeArgs {
            input: PathBuf::from("/nonexistent/series.csv"),
            format: FormatArg::Table,
            output: None,
        });
        match run(&config) {
            Err(err) => assert_eq!(err.exit_code(), 2),
            Ok(_) => panic!("expected an error"),
        }
    }

    #[test]
    fn constant_series_maps_to_estimation_error() {
        let file = write_temp("5\n5\n5\n5\n5\n");
        let config = RunConfig::Fit(FitArgs {
            input: file.path().to_path_buf(),
            family: FamilyArg::Bernoulli,
            innovation: InnovationArg::PoissonLindley,
            method: MethodArg::Cls,
            format: FormatArg::Table,
            output: None,
        });
        match run(&config) {
            Err(err) => assert_eq!(err.exit_code(), 3),
            Ok(report) => panic!("expected an error, got: {report}"),
        }
    }
}
