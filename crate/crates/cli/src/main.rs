//! `kil`: seeded experiment runner over the `kil-core` library.

mod commands;
mod output;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kil_core::{Budget, Error};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Parser)]
#[command(
    name = "kil",
    version,
    about = "Exact incidence experiments over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Points, hyperplanes or lines of a projective space.
    Enumerate,
    /// Klein correspondence at a small prime, checked exhaustively.
    KleinCheck,
    /// Point-plane incidences against the collinearity bound.
    Incidence,
    /// Point-plane incidences to line-line incidences in a three-quadric.
    Reduce,
    /// Lines of the SL2 chart back to a point-plane arrangement.
    Convert,
    /// Union of seeded SL2 lines.
    Sl2Cover,
    /// Value sets and energies of the dot and wedge forms.
    Bilinear,
    /// Sizes of AA+AA and AA-AA for an interval.
    Sumprod,
    /// Distinct distances, pinned distances and distance energy in F_p^3.
    Distances,
    /// Dot-product energy of the coprime grid against N^3.
    Tightness,
    /// Lowest-degree surface through seeded lines.
    VanishingPoly,
    /// Rational points and lines of an affine cubic surface.
    Cubic,
    /// Summarizes CSV artifacts.
    Report { files: Vec<PathBuf> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate => "enumerate",
            Command::KleinCheck => "klein-check",
            Command::Incidence => "incidence",
            Command::Reduce => "reduce",
            Command::Convert => "convert",
            Command::Sl2Cover => "sl2-cover",
            Command::Bilinear => "bilinear",
            Command::Sumprod => "sumprod",
            Command::Distances => "distances",
            Command::Tightness => "tightness",
            Command::VanishingPoly => "vanishing-poly",
            Command::Cubic => "cubic",
            Command::Report { .. } => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Run configuration. Defaults that depend on the subcommand are filled in
/// before dispatch, and the filled-in values are echoed into artifacts.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Opts {
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub k_target: Option<usize>,
    #[arg(long, global = true)]
    pub size: Option<usize>,
    #[arg(long, global = true)]
    pub construction: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub budget_ops: Option<u64>,
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Arrangement JSON for `incidence`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
}

const BUDGET_ENV: &str = "KIL_BUDGET_OPS";

fn resolve_budget(opts: &mut Opts) -> Result<Budget, Error> {
    if let Ok(raw) = std::env::var(BUDGET_ENV) {
        let ops = raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{BUDGET_ENV}={raw:?} is not an integer")))?;
        opts.budget_ops = Some(ops);
    }
    Ok(opts.budget_ops.map(Budget::new).unwrap_or_default())
}

fn emit(opts: &Opts, bytes: &[u8]) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::InvalidInput(format!("cannot write output: {e}"));
    match &opts.out {
        Some(path) => output::write_atomic(path, bytes).map_err(io),
        None => std::io::stdout().write_all(bytes).map_err(io),
    }
}

fn execute(command: &Command, opts: &mut Opts) -> Result<(), Error> {
    let budget = resolve_budget(opts)?;
    if let Some(t) = opts.threads {
        if t == 0 {
            return Err(Error::InvalidInput("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    let bytes = match command {
        Command::Report { files } => report::run(files)?,
        _ => {
            let art = commands::run(command, opts, &budget)?;
            let name = command.name();
            match opts.format {
                Format::Csv => output::to_csv(&art, opts.seed, name),
                Format::Json => {
                    let config = serde_json::to_value(&*opts).expect("config serializes");
                    output::to_json(&art, opts.seed, name, &config)
                }
            }
        }
    };
    emit(opts, &bytes)
}

fn error_object(code: &str, message: String, subcommand: Option<&str>, config: Value) -> String {
    serde_json::json!({
        "code": code,
        "message": message,
        "subcommand": subcommand,
        "config": config,
    })
    .to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            eprintln!(
                "{}",
                error_object("InvalidInput", msg.trim().into(), None, Value::Null)
            );
            return ExitCode::from(1);
        }
    };
    let Cli { command, mut opts } = cli;
    match execute(&command, &mut opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let config = serde_json::to_value(&opts).unwrap_or(Value::Null);
            eprintln!(
                "{}",
                error_object(e.code(), e.to_string(), Some(command.name()), config)
            );
            ExitCode::from(if e.is_resource_limit() { 2 } else { 1 })
        }
    }
}
