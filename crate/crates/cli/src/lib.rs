//! Command-line front end: argument model, problem loading and JSON rendering.
//!
//! [`run`] performs no I/O other than reading an `--input` file, so the whole
//! pipeline can be driven from tests; `main` only writes the rendered text.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatinv::invariants::{
    cayley_hamilton_residual, char_poly, eigen, minimal_integrity_basis_with_tol, BasisRepresentation,
};
use flatinv::minkowski::{em_audit, stress_energy_invariants, EMField, StressEnergyBlocks};
use flatinv::transform::{invariance_report, InvarianceOptions};
use flatinv::{Matrix, Metric, Tensor2, Variance};
use serde_json::{json, Map, Value};

mod selftest;

/// Exit status on success.
pub const EXIT_OK: i32 = 0;
/// Exit status when the input is well formed but a library operation rejects it.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status for malformed JSON, flags or files.
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Domain(#[from] flatinv::Error),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "ParseError",
            CliError::Domain(e) => e.name(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self.name(), "message": self.to_string() })
    }
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

/// Invariants of second-order tensors in flat pseudo-Riemannian spaces.
#[derive(Debug, Clone, Parser)]
#[command(name = "flatinv", version, about)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Classification tolerance (relative).
    #[arg(long, global = true, env = "FLATINV_TOL", default_value_t = flatinv::DEFAULT_CLASSIFY_TOL)]
    pub tol: f64,

    /// Write JSON here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Characteristic polynomial, trace powers, eigenvalues and Cayley–Hamilton residual.
    Invariants(ProblemArgs),
    /// Minimal integrity basis of the tensor's class.
    Basis {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value_t = Rep::TracePowers)]
        rep: Rep,
    },
    /// Eigenvalues, eigenvectors and multiplicities of the mixed form.
    Eigen(ProblemArgs),
    /// Sample random isometries of the metric and compare invariants before and after.
    CheckInvariance {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound on the generator entries.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Compose every sample with a reflection.
        #[arg(long)]
        improper: bool,
    },
    /// Electromagnetic field tensor: generic coefficients and closed-form audit.
    Em {
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        e: [f64; 3],
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        b: [f64; 3],
    },
    /// Symmetric Minkowski tensor in block form `[[d, pᵀ], [p, −T]]`.
    StressEnergy {
        #[arg(long, allow_hyphen_values = true)]
        d: f64,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        p: [f64; 3],
        /// Nine values, row-major.
        #[arg(long, value_parser = parse_mat3, allow_hyphen_values = true)]
        t: [[f64; 3]; 3],
        /// Audit the traceless expansions (the trace is checked).
        #[arg(long)]
        traceless: bool,
    },
    /// Run the invariant property suite on seeded random inputs.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// JSON file `{"metric": ..., "tensor": ...}`.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// `minkowski`, `euclidean:<n>` or `{"dim": n, "g": [[...]]}`; overrides the file.
    #[arg(long)]
    pub metric: Option<String>,
    /// `{"variance": "uu"|"dd"|"ud"|"du", "c": [[...]]}`; overrides the file.
    #[arg(long)]
    pub tensor: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rep {
    TracePowers,
    Coefficients,
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated values, got {}", v.len()));
    }
    Ok(v)
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let v = parse_floats(s, 3)?;
    Ok([v[0], v[1], v[2]])
}

fn parse_mat3(s: &str) -> Result<[[f64; 3]; 3], String> {
    let v = parse_floats(s, 9)?;
    Ok([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing key \"{key}\" in {ctx}")))
}

fn as_object<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| parse_err(format!("{ctx} must be a JSON object")))
}

fn parse_matrix(v: &Value, ctx: &str) -> Result<Matrix, CliError> {
    let rows = v.as_array().ok_or_else(|| parse_err(format!("{ctx} must be an array of rows")))?;
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| parse_err(format!("{ctx} row {i} must be an array")))?;
        if row.len() != n {
            return Err(parse_err(format!("{ctx} must be square: row {i} has {} entries, expected {n}", row.len())));
        }
        for x in row {
            data.push(x.as_f64().ok_or_else(|| parse_err(format!("{ctx} entries must be numbers")))?);
        }
    }
    Ok(Matrix::from_row_slice(n, n, &data))
}

fn parse_metric(v: &Value) -> Result<Metric, CliError> {
    if let Some(name) = v.as_str() {
        return match name.trim() {
            "minkowski" => Ok(Metric::minkowski()),
            other => match other.strip_prefix("euclidean:") {
                Some(n) => {
                    let n = n.parse::<usize>().map_err(|_| parse_err(format!("bad dimension in metric \"{other}\"")))?;
                    Ok(Metric::euclidean(n)?)
                }
                None => Err(parse_err(format!("unknown metric shortcut \"{other}\""))),
            },
        };
    }
    let obj = as_object(v, "metric")?;
    let g = parse_matrix(get(obj, "g", "metric")?, "metric \"g\"")?;
    if let Some(dim) = obj.get("dim") {
        let dim = dim.as_u64().ok_or_else(|| parse_err("metric \"dim\" must be a positive integer"))?;
        if dim as usize != g.nrows() {
            return Err(flatinv::Error::DimensionMismatch { expected: dim as usize, found: g.nrows() }.into());
        }
    }
    Ok(Metric::new(g)?)
}

fn parse_tensor(v: &Value) -> Result<Tensor2, CliError> {
    let obj = as_object(v, "tensor")?;
    let variance: Variance = serde_json::from_value(get(obj, "variance", "tensor")?.clone())
        .map_err(|_| parse_err("tensor \"variance\" must be one of \"uu\", \"dd\", \"ud\", \"du\""))?;
    let c = parse_matrix(get(obj, "c", "tensor")?, "tensor \"c\"")?;
    Ok(Tensor2::new(variance, c)?)
}

fn load_value(v: &Value) -> Result<(Metric, Tensor2), CliError> {
    let obj = as_object(v, "problem")?;
    let metric = parse_metric(get(obj, "metric", "problem")?)?;
    let tensor = parse_tensor(get(obj, "tensor", "problem")?)?;
    if tensor.dim() != metric.dim() {
        return Err(flatinv::Error::DimensionMismatch { expected: metric.dim(), found: tensor.dim() }.into());
    }
    Ok((metric, tensor))
}

/// Parse and validate `{"metric": {...}|"minkowski"|"euclidean:n", "tensor": {...}}`.
pub fn load_problem(text: &str) -> Result<(Metric, Tensor2), CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    load_value(&v)
}

impl ProblemArgs {
    /// File contents first, then inline flags on top.
    fn load(&self) -> Result<(Metric, Tensor2), CliError> {
        let mut obj = match &self.input {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
                let v: Value = serde_json::from_str(&text)
                    .map_err(|e| parse_err(format!("invalid JSON in {}: {e}", path.display())))?;
                as_object(&v, "problem")?.clone()
            }
            None => Map::new(),
        };
        if let Some(m) = &self.metric {
            // bare shortcuts are accepted without JSON quoting
            let v = serde_json::from_str(m).unwrap_or_else(|_| Value::String(m.clone()));
            obj.insert("metric".into(), v);
        }
        if let Some(t) = &self.tensor {
            let v = serde_json::from_str(t).map_err(|e| parse_err(format!("invalid tensor JSON: {e}")))?;
            obj.insert("tensor".into(), v);
        }
        load_value(&Value::Object(obj))
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn complex_pair(z: &flatinv::Complex) -> Value {
    json!([z.re, z.im])
}

/// `-0.0` prints as `-0.0`; invariants that vanish should read `0.0`.
fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.as_f64() == Some(0.0) && n.is_f64() {
                *v = json!(0.0);
            }
        }
        Value::Array(a) => a.iter_mut().for_each(normalize),
        Value::Object(o) => o.values_mut().for_each(normalize),
        _ => {}
    }
}

fn dispatch(config: &RunConfig) -> Result<Value, CliError> {
    let tol = config.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(parse_err(format!("tolerance must be positive, got {tol}")));
    }
    match &config.command {
        Command::Invariants(problem) => {
            let (m, t) = problem.load()?;
            let class = t.classify(&m, tol)?;
            let cp = char_poly(&t, &m)?;
            let eig = eigen(&t, &m)?;
            Ok(json!({
                "class": to_json(&class),
                "a": cp.a,
                "trace_powers": t.trace_powers(&m, t.dim())?,
                "eigenvalues": eig.values.iter().map(complex_pair).collect::<Vec<_>>(),
                "ch_residual": cayley_hamilton_residual(&t, &m)?,
            }))
        }
        Command::Basis { problem, rep } => {
            let (m, t) = problem.load()?;
            let rep = match rep {
                Rep::TracePowers => BasisRepresentation::TracePowers,
                Rep::Coefficients => BasisRepresentation::Coefficients,
            };
            Ok(to_json(&minimal_integrity_basis_with_tol(&t, &m, rep, tol)?))
        }
        Command::Eigen(problem) => {
            let (m, t) = problem.load()?;
            let eig = eigen(&t, &m)?;
            Ok(json!({
                "eigenvalues": eig.values.iter().map(complex_pair).collect::<Vec<_>>(),
                "multiplicities": eig.multiplicities,
                "eigenvectors": eig
                    .vectors
                    .iter()
                    .map(|v| v.iter().map(complex_pair).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }))
        }
        Command::CheckInvariance { problem, samples, seed, scale, improper } => {
            let (m, t) = problem.load()?;
            let opts = InvarianceOptions {
                samples: *samples,
                seed: *seed,
                scale: *scale,
                improper: *improper,
                ..Default::default()
            };
            Ok(to_json(&invariance_report(&t, &m, &opts)?))
        }
        Command::Em { e, b } => {
            let audit = em_audit(&EMField { e: *e, b: *b });
            Ok(json!({
                "a2": audit.generic[1],
                "a4": audit.generic[3],
                "generic": audit.generic,
                "closed_form": to_json(&audit.closed_form),
                "report": to_json(&audit.report),
            }))
        }
        Command::StressEnergy { d, p, t, traceless } => {
            let s = StressEnergyBlocks { d: *d, p: *p, t: *t };
            Ok(to_json(&stress_energy_invariants(&s, *traceless)?))
        }
        Command::Selftest { seed } => Ok(selftest::run(*seed)),
    }
}

/// Execute a configuration: exit status and the complete JSON document.
pub fn run(config: &RunConfig) -> (i32, String) {
    let (status, mut value) = match dispatch(config) {
        Ok(v) => {
            let failed = v.get("failed").and_then(Value::as_u64).unwrap_or(0);
            (if failed == 0 { EXIT_OK } else { EXIT_DOMAIN }, v)
        }
        Err(e) => (e.status(), e.to_json()),
    };
    normalize(&mut value);
    let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    (status, text + "\n")
}

/// What the binary should do for an argument vector.
pub enum Invocation {
    /// Help or version text requested; print as-is with this status.
    Text(i32, String),
    Run(Box<RunConfig>),
    /// Malformed flags, rendered as a JSON error document.
    Error(String),
}

pub fn parse_args<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::error::ErrorKind;
    match RunConfig::try_parse_from(args) {
        Ok(c) => Invocation::Run(Box::new(c)),
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Invocation::Text(EXIT_OK, e.to_string()),
            _ => {
                let msg = e.render().to_string();
                let mut text = serde_json::to_string_pretty(&parse_err(msg.trim_end()).to_json()).unwrap();
                text.push('\n');
                Invocation::Error(text)
            }
        },
    }
}
