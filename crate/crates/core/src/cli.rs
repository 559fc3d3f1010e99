//! Command-line front end for the `xsec` binary.
//!
//! Subcommands: `estimate`, `oracle`, `scan`, `counterexample`, `mixed-disc`
//! and `density-check`. Every command prints one table, as JSON (default) or
//! CSV, to standard output or `--output`. Each row carries the seed and the
//! sample count that produced it.
//!
//! Subspace files are JSON:
//!
//! ```json
//! { "n": 3, "given_as": "complement", "rows": [[1, 1, 1]] }
//! ```
//!
//! where `given_as` is `"H"` (rows span the subspace) or `"complement"`
//! (rows span its orthogonal complement).

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::analysis::{
    counterexample_curve, counterexample_violation, det_expansion_check, logconcavity_scan, mixed_discriminant, Verdict,
};
use crate::error::Error as CoreError;
use crate::estimators::{
    density_identity_check, estimate_codim, estimate_dim, Aggregation, MCConfig, Method, VolumeEstimate,
};
use crate::numkit::SymMatrix;
use crate::oracle::{full_volume, volume_k1, volume_k2, volume_mc, SectionBody};
use crate::section::{
    codim_profile, dim_profile, to_dilation, DilationVector, GivenAs, LogDilation, ProfileMode, SubspaceSpec,
};

pub const DEFAULT_SEED: u64 = 42;
/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "XSEC_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Help or version text requested.
    #[error("{0}")]
    Info(String),
    #[error("cannot read {path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error(transparent)]
    Compute(#[from] CoreError),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Input { .. } => 3,
            CliError::Compute(_) => 4,
            CliError::Output(_) => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Codim,
    Dim,
}

impl From<ModeArg> for ProfileMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Codim => ProfileMode::Codim,
            ModeArg::Dim => ProfileMode::Dim,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "xsec", version, about = "Volumes of sections of dilated cross-polytopes")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
    /// Output encoding.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: OutputFormat,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Monte Carlo estimate of a section volume.
    Estimate(EstimateArgs),
    /// Exact (dim H ≤ 2 or H = Rⁿ) or hit-or-miss reference volume.
    Oracle(OracleArgs),
    /// Random midpoint test of log-concavity in the log-dilation.
    Scan(ScanArgs),
    /// The parallelogram curve and its pinned non-concavity certificate.
    Counterexample(CounterexampleArgs),
    /// Mixed discriminant of k matrices, or the determinant expansion check.
    MixedDisc(MixedDiscArgs),
    /// Quadrature check of the exponential/Gaussian mixture identity.
    DensityCheck(DensityArgs),
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 100)]
    batches: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Aggregate batches by their median instead of their mean.
    #[arg(long)]
    median_of_means: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct DilationArgs {
    /// Positive scales a₁,…,aₙ.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<f64>>,
    /// Log-scales t₁,…,tₙ (aᵢ = e^tᵢ).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long)]
    subspace: PathBuf,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[command(flatten)]
    dilation: DilationArgs,
    #[command(flatten)]
    mc: McArgs,
    /// Orthonormalize the basis of H before the dimension formula.
    #[arg(long)]
    orthonormalize: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    subspace: PathBuf,
    #[command(flatten)]
    dilation: DilationArgs,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    subspace: PathBuf,
    #[arg(long = "box", default_value_t = 2.0)]
    box_half_width: f64,
    #[arg(long, default_value_t = 100)]
    triples: usize,
    #[arg(long, value_enum, default_value = "codim")]
    mode: ModeArg,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Debug, Args)]
struct CounterexampleArgs {
    /// Explicit list of t values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "grid")]
    ts: Option<Vec<f64>>,
    /// Uniform grid `start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct MixedDiscArgs {
    /// JSON file `{"matrices": [[[..], ..], ..]}` of symmetric matrices.
    #[arg(long)]
    matrices: PathBuf,
    /// Weights x₁,…,xₙ: run the expansion check instead.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1,3")]
    x: Vec<f64>,
    #[arg(long, default_value_t = 400)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Which parameterization of the dilation was supplied.
#[derive(Debug, Clone, PartialEq)]
pub enum DilationInput {
    Scales(DilationVector),
    Logs(LogDilation),
}

impl DilationInput {
    pub fn resolve(&self) -> Result<DilationVector, CoreError> {
        match self {
            DilationInput::Scales(a) => Ok(a.clone()),
            DilationInput::Logs(t) => to_dilation(t),
        }
    }
}

/// A validated command.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Estimate { subspace: PathBuf, mode: ProfileMode, dilation: DilationInput, mc: MCConfig, orthonormalize: bool },
    Oracle { subspace: PathBuf, dilation: DilationInput, mc: MCConfig },
    Scan { subspace: PathBuf, box_half_width: f64, triples: usize, mode: ProfileMode, mc: MCConfig },
    Counterexample { ts: Vec<f64>, seed: u64 },
    MixedDisc { matrices: PathBuf, x: Option<Vec<f64>>, seed: u64 },
    DensityCheck { x: Vec<f64>, points: usize, seed: u64 },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Estimate { .. } => "estimate",
            Command::Oracle { .. } => "oracle",
            Command::Scan { .. } => "scan",
            Command::Counterexample { .. } => "counterexample",
            Command::MixedDisc { .. } => "mixed-disc",
            Command::DensityCheck { .. } => "density-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn mc_config(mc: &McArgs) -> Result<MCConfig, CliError> {
    let cfg = MCConfig::new(mc.samples, mc.batches, mc.seed).map_err(|e| usage(e.to_string()))?;
    Ok(if mc.median_of_means { cfg.with_aggregation(Aggregation::MedianOfMeans) } else { cfg })
}

fn dilation_input(d: &DilationArgs) -> Result<DilationInput, CliError> {
    match (&d.a, &d.t) {
        (Some(a), None) => {
            if a.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                return Err(usage("dilation entries must be positive"));
            }
            Ok(DilationInput::Scales(DilationVector::new(a.clone()).map_err(|e| usage(e.to_string()))?))
        }
        (None, Some(t)) => Ok(DilationInput::Logs(LogDilation::new(t.clone()).map_err(|e| usage(e.to_string()))?)),
        _ => Err(usage("exactly one of --a and --t is required")),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || usage(format!("invalid --grid '{spec}', expected start:stop:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

/// Parses and validates a full argument vector (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Info(e.render().to_string())
        }
        _ => usage(e.render().to_string()),
    })?;
    let command = match &cli.command {
        CommandArgs::Estimate(a) => Command::Estimate {
            subspace: a.subspace.clone(),
            mode: a.mode.into(),
            dilation: dilation_input(&a.dilation)?,
            mc: mc_config(&a.mc)?,
            orthonormalize: a.orthonormalize,
        },
        CommandArgs::Oracle(a) => Command::Oracle {
            subspace: a.subspace.clone(),
            dilation: dilation_input(&a.dilation)?,
            mc: mc_config(&a.mc)?,
        },
        CommandArgs::Scan(a) => {
            if !(a.box_half_width > 0.0 && a.box_half_width.is_finite()) {
                return Err(usage("--box must be positive"));
            }
            Command::Scan {
                subspace: a.subspace.clone(),
                box_half_width: a.box_half_width,
                triples: a.triples,
                mode: a.mode.into(),
                mc: mc_config(&a.mc)?,
            }
        }
        CommandArgs::Counterexample(a) => {
            let ts = match (&a.ts, &a.grid) {
                (Some(ts), _) => ts.clone(),
                (None, Some(g)) => parse_grid(g)?,
                (None, None) => parse_grid("-20:20:41")?,
            };
            Command::Counterexample { ts, seed: a.seed }
        }
        CommandArgs::MixedDisc(a) => Command::MixedDisc { matrices: a.matrices.clone(), x: a.x.clone(), seed: a.seed },
        CommandArgs::DensityCheck(a) => {
            if a.points < crate::estimators::MIN_QUADRATURE_POINTS {
                return Err(usage(format!("--points must be at least {}", crate::estimators::MIN_QUADRATURE_POINTS)));
            }
            Command::DensityCheck { x: a.x.clone(), points: a.points, seed: a.seed }
        }
    };
    Ok(RunConfig { command, format: cli.format, output: cli.output })
}

/// On-disk form of a subspace.
#[derive(Debug, Clone, PartialEq, Deserialize, serde::Serialize)]
pub struct SubspaceFile {
    pub n: usize,
    pub given_as: GivenAs,
    pub rows: Vec<Vec<f64>>,
}

impl SubspaceFile {
    pub fn into_spec(self) -> Result<SubspaceSpec, CoreError> {
        SubspaceSpec::new(self.n, self.given_as, self.rows)
    }
}

#[derive(Debug, Deserialize)]
struct MatricesFile {
    matrices: Vec<Vec<Vec<f64>>>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let input_err = |message: String| CliError::Input { path: path.to_path_buf(), message };
    let text = std::fs::read_to_string(path).map_err(|e| input_err(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| input_err(e.to_string()))
}

pub fn load_subspace(path: &Path) -> Result<SubspaceSpec, CliError> {
    let file: SubspaceFile = read_json(path)?;
    file.into_spec().map_err(|e| CliError::Input { path: path.to_path_buf(), message: e.to_string() })
}

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    List(Vec<f64>),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Vec<f64>> for Cell {
    fn from(v: Vec<f64>) -> Self {
        Cell::List(v)
    }
}

/// Non-finite floats are written as `inf`, `-inf` or `nan` in both
/// encodings; finite ones with 17 significant digits in CSV.
fn float_text(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn float_json(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(float_text(x))
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => float_json(*v),
            Cell::List(v) => Value::Array(v.iter().map(|x| float_json(*x)).collect()),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::List(v) => v.iter().map(|x| float_text(*x)).collect::<Vec<_>>().join(";"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

/// A rectangular result table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self { command, columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut obj = Map::new();
                for (c, cell) in self.columns.iter().zip(r) {
                    obj.insert((*c).to_string(), cell.to_json());
                }
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command));
        top.insert("columns".into(), Value::from(self.columns.clone()));
        top.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| CliError::Output(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv)).map_err(|e| CliError::Output(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => Ok(self.to_json()),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

/// Result of [`execute`]: the table plus warnings for the diagnostics channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub warnings: Vec<String>,
}

fn estimate_row(est: &VolumeEstimate, seed: u64) -> Vec<Cell> {
    vec![
        est.method.name().into(),
        est.value.into(),
        est.stderr.into(),
        est.samples.into(),
        seed.into(),
        est.singular.into(),
        est.heavy_tail.into(),
    ]
}

const ESTIMATE_COLUMNS: [&str; 7] = ["method", "value", "stderr", "samples", "seed", "singular", "heavy_tail"];

fn tail_warning(est: &VolumeEstimate) -> Option<String> {
    let mut msg = String::new();
    if est.heavy_tail {
        let _ = write!(
            msg,
            "warning: {} integrand looks heavy tailed (top 0.1% of samples carry over 20% of the mass); stderr may be unreliable",
            est.method.name()
        );
    }
    if est.singular > 0 {
        if !msg.is_empty() {
            msg.push('\n');
        }
        let _ = write!(msg, "warning: {} singular samples counted as zero", est.singular);
    }
    (!msg.is_empty()).then_some(msg)
}

/// Computes the table for a validated command without writing anything.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut warnings = Vec::new();
    let table = match &cfg.command {
        Command::Estimate { subspace, mode, dilation, mc, orthonormalize } => {
            let s = load_subspace(subspace)?;
            let a = dilation.resolve()?;
            let est = match mode {
                ProfileMode::Codim => estimate_codim(&codim_profile(&s)?, &a, mc)?,
                ProfileMode::Dim => estimate_dim(&dim_profile(&s, *orthonormalize), &a, mc)?,
            };
            warnings.extend(tail_warning(&est));
            let mut t = Table::new("estimate", &ESTIMATE_COLUMNS);
            t.push(estimate_row(&est, mc.seed()));
            t
        }
        Command::Oracle { subspace, dilation, mc } => {
            let s = load_subspace(subspace)?;
            let a = dilation.resolve()?;
            let est = if s.dim() == s.ambient_dim() {
                if a.len() != s.ambient_dim() {
                    return Err(CoreError::DimensionMismatch { expected: s.ambient_dim(), found: a.len() }.into());
                }
                VolumeEstimate::exact(full_volume(&a), Method::ClosedForm)
            } else {
                let body = SectionBody::new(dim_profile(&s, false), a)?;
                match s.dim() {
                    1 => VolumeEstimate::exact(volume_k1(&body)?, Method::OracleK1),
                    2 => VolumeEstimate::exact(volume_k2(&body)?, Method::OracleK2),
                    _ => volume_mc(&body, mc)?,
                }
            };
            let mut t = Table::new("oracle", &ESTIMATE_COLUMNS);
            t.push(estimate_row(&est, mc.seed()));
            t
        }
        Command::Scan { subspace, box_half_width, triples, mode, mc } => {
            let s = load_subspace(subspace)?;
            let report = logconcavity_scan(&s, *triples, *box_half_width, mc, *mode)?;
            let mut t = Table::new(
                "scan",
                &["triple", "t0", "mid", "t1", "f0", "f_mid", "f1", "margin", "stderr", "verdict", "samples", "seed"],
            );
            for (i, r) in report.triples.iter().enumerate() {
                let verdict = match r.verdict {
                    Verdict::Consistent => "consistent",
                    Verdict::Violation => "violation",
                    Verdict::Inconclusive => "inconclusive",
                };
                t.push(vec![
                    (i as u64).into(),
                    r.t0.clone().into(),
                    r.mid.clone().into(),
                    r.t1.clone().into(),
                    r.log_values[0].into(),
                    r.log_values[1].into(),
                    r.log_values[2].into(),
                    r.margin.into(),
                    r.stderr.into(),
                    verdict.into(),
                    mc.samples().into(),
                    mc.seed().into(),
                ]);
            }
            if report.violations() > 0 {
                warnings.push(format!(
                    "warning: {} triples violate midpoint log-concavity at 3 sigma",
                    report.violations()
                ));
            }
            t
        }
        Command::Counterexample { ts, seed } => {
            let mut t = Table::new("counterexample", &["kind", "t", "f", "margin", "samples", "seed"]);
            for p in counterexample_curve(ts) {
                t.push(vec!["curve".into(), p.t.into(), p.f.into(), Cell::Empty, 0u64.into(), (*seed).into()]);
            }
            let cert = counterexample_violation();
            for (tv, fv) in cert.triple.iter().zip(cert.values) {
                t.push(vec![
                    "certificate".into(),
                    (*tv).into(),
                    fv.into(),
                    cert.margin.into(),
                    0u64.into(),
                    (*seed).into(),
                ]);
            }
            t
        }
        Command::MixedDisc { matrices, x, seed } => {
            let file: MatricesFile = read_json(matrices)?;
            let ms = file
                .matrices
                .iter()
                .map(|m| SymMatrix::from_upper(m))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Input { path: matrices.clone(), message: e.to_string() })?;
            match x {
                None => {
                    let d = mixed_discriminant(&ms)?;
                    let mut t = Table::new("mixed-disc", &["quantity", "value", "scale", "samples", "seed"]);
                    t.push(vec![
                        "mixed_discriminant".into(),
                        d.value.into(),
                        d.scale().into(),
                        0u64.into(),
                        (*seed).into(),
                    ]);
                    t
                }
                Some(x) => {
                    let r = det_expansion_check(&ms, x)?;
                    let mut t = Table::new("mixed-disc", &["quantity", "value", "scale", "samples", "seed"]);
                    t.push(vec!["expansion_residual".into(), r.into(), Cell::Empty, 0u64.into(), (*seed).into()]);
                    t
                }
            }
        }
        Command::DensityCheck { x, points, seed } => {
            let mut t = Table::new("density-check", &["x", "abs_error", "points", "samples", "seed"]);
            for &xi in x {
                let err = density_identity_check(xi, *points)?;
                t.push(vec![xi.into(), err.into(), (*points as u64).into(), 0u64.into(), (*seed).into()]);
            }
            t
        }
    };
    Ok(Outcome { table, warnings })
}

/// Runs a command, writing its table to the configured destination and
/// warnings to standard error.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let outcome = execute(cfg)?;
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    let text = outcome.table.render(cfg.format)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

/// Applies `XSEC_THREADS` to the global worker pool. Results never depend on
/// it.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize =
        value.trim().parse().map_err(|_| usage(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    if threads == 0 {
        return Err(usage(format!("{THREADS_ENV} must be a positive integer")));
    }
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Entry point used by the binary: returns the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = configure_threads().and_then(|()| parse_args(argv)).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => 0,
        Err(CliError::Info(msg)) => {
            print!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
