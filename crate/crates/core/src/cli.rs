//! Command-line front end: germ JSON in, generator / certificate / report
//! JSON and orbit CSV out.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::blowup::DivisorPoint;
use crate::coeffs::{set_float_tolerance, Backend, ClassifyConfig, Coefficient, ComplexFloat, GaussianRational, DEFAULT_MAX_DENOMINATOR};
use crate::dynamics::{verify_certificate, OrbitConfig, PolyMap, VerifyConfig};
use crate::germs::{characteristic_directions, exp_vf, log_diffeo, DiffeoGerm, GermError, VectorFieldGerm};
use crate::indices::{divisor_index_report, IndexError};
use crate::parser::{parse_diffeo, parse_vf, GermFile, ParseError, ParseWarning};
use crate::resolution::{certify_parabolic, resolve, ResolutionError, ResolveConfig, Status, DEFAULT_MAX_DEPTH, MIN_BLOWUP_TRUNC};

pub const DEFAULT_TRUNC: u32 = 12;

#[derive(Parser, Debug, Clone)]
#[command(name = "parabolic", version, about = "Generators, blow-ups and parabolic-curve certificates for germs of (C^2, 0)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Working truncation order (overrides the file).
    #[arg(long = "order", global = true)]
    pub order: Option<u32>,
    /// Coefficient backend (overrides the file).
    #[arg(long, global = true, value_parser = parse_backend)]
    pub backend: Option<Backend>,
    /// Maximal number of successive blow-ups.
    #[arg(long = "max-blowups", global = true, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_blowups: usize,
    /// Zero tolerance of the float backend and of float classification.
    #[arg(long, global = true, default_value_t = crate::coeffs::DEFAULT_TOL)]
    pub tol: f64,
    /// Orbit length for `verify`.
    #[arg(long = "n-max", global = true, default_value_t = 100_000)]
    pub n_max: usize,
    /// Seed radius at the reduced point for `verify`.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub radius: f64,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Infinitesimal generator of a map.
    Log { input: PathBuf },
    /// Time-one map of a vector field.
    Exp { input: PathBuf },
    /// Characteristic directions with residual indices.
    Chardirs { input: PathBuf },
    /// Reduction of the generator (or of a given field) to a reduced point.
    Resolve { input: PathBuf },
    /// Parabolic-curve certificate of a map.
    Certify { input: PathBuf },
    /// Certificate plus orbit verification.
    Verify {
        input: PathBuf,
        /// Seeds per petal.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        /// Directory for one orbit CSV per seed.
        #[arg(long = "csv-dir")]
        csv_dir: Option<PathBuf>,
        /// Minimal fraction of converging seeds.
        #[arg(long = "min-fraction", default_value_t = 1.0)]
        min_fraction: f64,
    },
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    match s {
        "exact" => Ok(Backend::Exact),
        "float" => Ok(Backend::Float),
        _ => Err(format!("unknown backend `{s}` (exact or float)")),
    }
}

/// Resolved settings of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub file: GermFile,
    pub trunc: u32,
    pub backend: Backend,
    pub max_depth: usize,
    pub tol: f64,
    pub n_max: usize,
    pub radius: f64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let input = match &cli.command {
            Command::Log { input }
            | Command::Exp { input }
            | Command::Chardirs { input }
            | Command::Resolve { input }
            | Command::Certify { input }
            | Command::Verify { input, .. } => input,
        };
        let text = read_input(input)?;
        let file = GermFile::from_json(&text)?;
        let trunc = cli.order.or(file.trunc).unwrap_or(DEFAULT_TRUNC);
        if trunc < MIN_BLOWUP_TRUNC {
            return Err(CliError::Usage(format!("truncation must be at least {MIN_BLOWUP_TRUNC}, got {trunc}")));
        }
        if !(cli.tol.is_finite() && cli.tol >= 0.0) {
            return Err(CliError::Usage(format!("tolerance must be finite and non-negative, got {}", cli.tol)));
        }
        Ok(RunConfig {
            command: cli.command.clone(),
            trunc,
            backend: cli.backend.or(file.backend).unwrap_or(Backend::Exact),
            file,
            max_depth: cli.max_blowups,
            tol: cli.tol,
            n_max: cli.n_max,
            radius: cli.radius,
            out: cli.out.clone(),
        })
    }

    fn resolve_config(&self) -> ResolveConfig {
        ResolveConfig {
            max_depth: self.max_depth,
            classify: ClassifyConfig { tol: self.tol, max_denominator: DEFAULT_MAX_DENOMINATOR },
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{detail}")]
    Precondition { kind: &'static str, detail: String },
    #[error("{0}")]
    Blocked(Status),
    #[error("{converged} of {total} seeds converged, below the required fraction {required}")]
    Verification { converged: usize, total: usize, required: f64 },
    #[error("{detail}")]
    Other { kind: &'static str, detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Precondition { .. } => 3,
            CliError::Blocked(_) => 4,
            CliError::Verification { .. } => 5,
            CliError::Io(_) | CliError::Other { .. } => 1,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Parse(ParseError::SyntaxError { .. }) => "SyntaxError".into(),
            CliError::Parse(ParseError::UnknownVariable(_)) => "UnknownVariable".into(),
            CliError::Parse(ParseError::NegativeExponent { .. }) => "NegativeExponent".into(),
            CliError::Parse(ParseError::InvalidFile(_)) => "InvalidFile".into(),
            CliError::Usage(_) => "Usage".into(),
            CliError::Io(_) => "Io".into(),
            CliError::Precondition { kind, .. } | CliError::Other { kind, .. } => (*kind).into(),
            CliError::Blocked(s) => s.to_string(),
            CliError::Verification { .. } => "VerificationBelowThreshold".into(),
        }
    }

    pub fn to_json_value(&self) -> Value {
        json!({"error": self.kind(), "detail": self.to_string()})
    }
}

impl From<GermError> for CliError {
    fn from(e: GermError) -> Self {
        let kind = match e {
            GermError::OrderTooLow(_) => "OrderTooLow",
            GermError::NotTangentToIdentity(_) => "NotTangentToIdentity",
            GermError::NotPolynomialInput => "NotPolynomialInput",
            GermError::SaturationUnavailable(_) => "SaturationUnavailable",
            GermError::Jet(_) => return CliError::Other { kind: "Jet", detail: e.to_string() },
        };
        CliError::Precondition { kind, detail: e.to_string() }
    }
}

impl From<ResolutionError> for CliError {
    fn from(e: ResolutionError) -> Self {
        match e {
            ResolutionError::NotIsolated => CliError::Precondition { kind: "NotIsolated", detail: e.to_string() },
            ResolutionError::NotPolynomialInput => CliError::Precondition { kind: "NotPolynomialInput", detail: e.to_string() },
            ResolutionError::Germ(g) => g.into(),
            ResolutionError::Index(i) => i.into(),
            ResolutionError::InsufficientPrecision { .. } => CliError::Other { kind: "InsufficientPrecision", detail: e.to_string() },
            ResolutionError::ShapeMismatch(_) => CliError::Other { kind: "ShapeMismatch", detail: e.to_string() },
            ResolutionError::Blowup(_) => CliError::Other { kind: "Blowup", detail: e.to_string() },
        }
    }
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        match e {
            IndexError::Germ(g) => g.into(),
            IndexError::InsufficientPrecision { .. } => CliError::Other { kind: "InsufficientPrecision", detail: e.to_string() },
            _ => CliError::Other { kind: "Index", detail: e.to_string() },
        }
    }
}

/// Successful output of a command: the JSON document and the exit status.
#[derive(Debug)]
pub struct Output {
    pub json: Value,
    /// Status failure reported after the document is written.
    pub failure: Option<CliError>,
    pub warnings: Vec<ParseWarning>,
}

impl Output {
    fn ok(json: Value) -> Self {
        Output { json, failure: None, warnings: Vec::new() }
    }
}

fn blocked(status: Status) -> Option<CliError> {
    (status != Status::Certified).then_some(CliError::Blocked(status))
}

/// Runs one command and returns the document to emit.
pub fn execute(cfg: &RunConfig) -> Result<Output, CliError> {
    set_float_tolerance(cfg.tol);
    match cfg.backend {
        Backend::Exact => execute_with::<GaussianRational>(cfg),
        Backend::Float => execute_with::<ComplexFloat>(cfg),
    }
}

fn map_input(cfg: &RunConfig) -> Result<crate::parser::ParsedDiffeo<GaussianRational>, CliError> {
    let m = cfg.file.map.as_ref().ok_or_else(|| CliError::Usage("this command needs a `map` input".into()))?;
    Ok(parse_diffeo::<GaussianRational>(&m.x, &m.y, cfg.trunc)?)
}

fn vf_input<C: Coefficient>(cfg: &RunConfig) -> Result<crate::parser::ParsedVf<C>, CliError> {
    let v = cfg.file.vf.as_ref().ok_or_else(|| CliError::Usage("this command needs a `vf` input".into()))?;
    Ok(parse_vf::<C>(&v.dx, &v.dy, cfg.trunc)?)
}

fn execute_with<C: Coefficient>(cfg: &RunConfig) -> Result<Output, CliError> {
    match &cfg.command {
        Command::Log { .. } => {
            let parsed = map_input(cfg)?;
            let f: DiffeoGerm<C> = parsed.germ.convert();
            let x = log_diffeo(&f)?;
            Ok(Output { warnings: parsed.warnings, ..Output::ok(x.to_json_value()) })
        }
        Command::Exp { .. } => {
            let parsed = vf_input::<C>(cfg)?;
            let f = exp_vf(&parsed.germ)?;
            Ok(Output { warnings: parsed.warnings, ..Output::ok(f.to_json_value()) })
        }
        Command::Chardirs { .. } => {
            let parsed = map_input(cfg)?;
            let f: DiffeoGerm<C> = parsed.germ.convert();
            let json = chardirs_json(&f, &cfg.resolve_config().classify)?;
            Ok(Output { warnings: parsed.warnings, ..Output::ok(json) })
        }
        Command::Resolve { .. } => {
            let (x, warnings): (VectorFieldGerm<C>, _) = if cfg.file.map.is_some() {
                let parsed = map_input(cfg)?;
                (log_diffeo(&parsed.germ.convert::<C>())?, parsed.warnings)
            } else {
                let parsed = vf_input::<C>(cfg)?;
                (parsed.germ, parsed.warnings)
            };
            let res = resolve(&x, &cfg.resolve_config())?;
            Ok(Output { json: res.to_json_value(), failure: blocked(res.status), warnings })
        }
        Command::Certify { .. } => {
            let parsed = map_input(cfg)?;
            let cert = certify_parabolic::<C>(&parsed.germ, &cfg.resolve_config())?;
            Ok(Output { json: cert.to_json_value(), failure: blocked(cert.status), warnings: parsed.warnings })
        }
        Command::Verify { samples, csv_dir, min_fraction, .. } => {
            let parsed = map_input(cfg)?;
            let cert = certify_parabolic::<C>(&parsed.germ, &cfg.resolve_config())?;
            if let Some(e) = blocked(cert.status) {
                let json = json!({"format": 1, "certificate": cert.to_json_value(), "verification": null});
                return Ok(Output { json, failure: Some(e), warnings: parsed.warnings });
            }
            let vcfg = VerifyConfig {
                samples_per_petal: *samples,
                radius: cfg.radius,
                orbit: OrbitConfig { n_max: cfg.n_max, ..OrbitConfig::default() },
                ..VerifyConfig::default()
            };
            let f = PolyMap::from_terms(&parsed.components);
            let report = verify_certificate(&f, &cert, &vcfg).map_err(|e| CliError::Other { kind: "NotCertified", detail: e.to_string() })?;
            if let Some(dir) = csv_dir {
                write_csvs(dir, &report)?;
            }
            let seeds: Vec<_> = report.attracting().collect();
            let converged = seeds.iter().filter(|s| s.success(vcfg.tangency_threshold)).count();
            let failure = report
                .fraction()
                .is_some_and(|fr| fr < *min_fraction)
                .then_some(CliError::Verification { converged, total: seeds.len(), required: *min_fraction });
            let json = json!({"format": 1, "certificate": cert.to_json_value(), "verification": report.to_json_value()});
            Ok(Output { json, failure, warnings: parsed.warnings })
        }
    }
}

fn write_csvs(dir: &Path, report: &crate::dynamics::VerificationReport) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for (i, petal) in report.petals.iter().enumerate() {
        let tag = if petal.repelling { "repelling" } else { "attracting" };
        for (j, seed) in petal.seeds.iter().enumerate() {
            let path = dir.join(format!("orbit_{tag}_{i}_{j}.csv"));
            std::fs::write(&path, seed.record.to_csv()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(())
}

/// Characteristic directions of `F` joined with the residual indices of
/// its generator at the corresponding divisor points.
pub fn chardirs_json<C: Coefficient>(f: &DiffeoGerm<C>, classify: &ClassifyConfig) -> Result<Value, CliError> {
    let dirs = characteristic_directions(f)?;
    let x = log_diffeo(f)?;
    let report = divisor_index_report(&x, classify)?;
    let directions: Vec<Value> = dirs
        .directions
        .iter()
        .map(|d| {
            let p = DivisorPoint::from_direction(d);
            let found = report.points().find(|(q, _, _)| q.chart == p.chart && (q.coord.clone() - p.coord.clone()).is_zero());
            let mut v = d.to_json_value();
            v["index"] = found.map_or(Value::Null, |(_, i, _)| i.to_json());
            v["class"] = found.map_or(Value::Null, |(_, _, c)| json!(c));
            v
        })
        .collect();
    Ok(json!({
        "format": 1,
        "backend": C::BACKEND,
        "order": dirs.order,
        "dicritical": dirs.dicritical,
        "directions": directions,
        "unresolved": dirs.unresolved.as_ref().map(|u| u.to_text("v")),
        "sum": report.sum.as_ref().map(|s| s.to_json()),
    }))
}

/// Parses arguments, runs, writes output and diagnostics; returns the exit
/// code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let err = json!({"error": "Usage", "detail": e.to_string().trim_end()});
                let _ = writeln!(stderr, "{err}");
            }
            return code;
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| execute(&cfg).map(|o| (cfg, o)));
    let (cfg, output) = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json_value());
            return e.exit_code();
        }
    };
    for w in &output.warnings {
        let _ = writeln!(stderr, "{}", json!({"warning": "TruncationLoss", "detail": w.to_string()}));
    }
    let mut text = serde_json::to_string_pretty(&output.json).expect("JSON values serialize");
    text.push('\n');
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "{}", e.to_json_value());
        return e.exit_code();
    }
    match output.failure {
        Some(e) => {
            let _ = writeln!(stderr, "{}", e.to_json_value());
            e.exit_code()
        }
        None => 0,
    }
}
