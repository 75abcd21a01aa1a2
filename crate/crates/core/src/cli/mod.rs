//! Command-line driver: argument and config resolution, the six pipelines,
//! and exit codes (0 success, 1 a validation failure, 2 a usage or
//! configuration error).

mod artifacts;
mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

pub use artifacts::SCHEMA_VERSION;
pub use commands::{BootstrapArgs, DecayArgs, FieldArgs, GaugeArgs, QuotientArgs, VerifyArgs};

/// Overrides the output directory from flags and config files.
pub const OUTPUT_DIR_ENV: &str = "ZEROMODE_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "zeromode", version, about = "Zero-mode diagnostics for magnetic Dirac–Weyl operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads; results are reproducible at a fixed count.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Directory for artifacts.
    #[arg(long, global = true, default_value = "zeromode-out")]
    out: PathBuf,
    /// JSON file whose keys override the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decay envelope check and L^p norm of a field.
    Field(FieldArgs),
    /// Biot–Savart potential at probes, curl residuals and the decay envelope.
    Gauge(GaugeArgs),
    /// Minimal Rayleigh quotient on a grid.
    Quotient(QuotientArgs),
    /// Grid residual of a known zero mode.
    Verify(VerifyArgs),
    /// Partial-wave radial integration, sphere-norm fits and envelopes.
    Decay(DecayArgs),
    /// Exact exponent bootstrap table.
    Bootstrap(BootstrapArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Field(_) => "field",
            Command::Gauge(_) => "gauge",
            Command::Quotient(_) => "quotient",
            Command::Verify(_) => "verify",
            Command::Decay(_) => "decay",
            Command::Bootstrap(_) => "bootstrap",
        }
    }
}

/// Options shared by all commands after resolution.
#[derive(Clone, Debug, Serialize)]
pub struct Common {
    pub threads: usize,
    pub out: PathBuf,
}

/// Outcome of a pipeline: human-readable lines and whether every check passed.
pub struct Outcome {
    pub lines: Vec<String>,
    pub pass: bool,
}

pub(crate) struct UsageError(pub String);

fn merge<T: Serialize + DeserializeOwned>(
    command: &str,
    args: &T,
    cli: &Cli,
) -> Result<(Common, T, Value), UsageError> {
    let mut obj: Map<String, Value> = match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m,
        _ => return Err(UsageError("internal: arguments are not an object".into())),
    };
    obj.insert("threads".into(), cli.threads.into());
    obj.insert("out".into(), Value::String(cli.out.to_string_lossy().into_owned()));
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        let file: Map<String, Value> = serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("config {} is not a JSON object: {e}", path.display())))?;
        for (k, v) in file {
            if k == "command" {
                if v.as_str() != Some(command) {
                    return Err(UsageError(format!("config is for command {v}, not {command}")));
                }
                continue;
            }
            if !obj.contains_key(&k) {
                return Err(UsageError(format!("unknown config key '{k}' for command {command}")));
            }
            obj.insert(k, v);
        }
    }
    if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        if !dir.is_empty() {
            obj.insert("out".into(), Value::String(dir));
        }
    }
    let resolved = Value::Object(obj.clone());
    let threads = obj
        .remove("threads")
        .and_then(|v| v.as_u64())
        .filter(|&t| t >= 1)
        .ok_or_else(|| UsageError("threads must be a positive integer".into()))? as usize;
    let out = obj
        .remove("out")
        .and_then(|v| v.as_str().map(PathBuf::from))
        .ok_or_else(|| UsageError("out must be a path".into()))?;
    let params: T = serde_json::from_value(Value::Object(obj)).map_err(|e| UsageError(format!("invalid configuration: {e}")))?;
    Ok((Common { threads, out }, params, resolved))
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let name = cli.command.name();
    let result = match &cli.command {
        Command::Field(a) => merge(name, a, &cli).and_then(|(c, p, v)| commands::field(&c, &p, v)),
        Command::Gauge(a) => merge(name, a, &cli).and_then(|(c, p, v)| commands::gauge(&c, &p, v)),
        Command::Quotient(a) => merge(name, a, &cli).and_then(|(c, p, v)| commands::quotient(&c, &p, v)),
        Command::Verify(a) => merge(name, a, &cli).and_then(|(c, p, v)| commands::verify(&c, &p, v)),
        Command::Decay(a) => merge(name, a, &cli).and_then(|(c, p, v)| commands::decay(&c, &p, v)),
        Command::Bootstrap(a) => merge(name, a, &cli).and_then(|(c, p, v)| commands::bootstrap(&c, &p, v)),
    };
    match result {
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            if e.is_validation_failure() {
                EXIT_VALIDATION
            } else {
                EXIT_USAGE
            }
        }
        Ok(Ok(outcome)) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            if outcome.pass {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
    }
}
