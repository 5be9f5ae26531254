//! `renewal`: experiments on multidimensional renewal sets.
//!
//! Every command writes `<out>/<command>.csv` and `<out>/<command>.json`.
//! Exit codes: 0 pass, 2 config error, 3 statistical failure, 4 internal error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use commands::{CmdError, Report};
use output::Summary;

#[derive(Parser, Debug)]
#[command(name = "renewal", version, about = "Simulate and check limit theorems for multidimensional renewal sets")]
struct Cli {
    /// Flat TOML file with keys named like the command's flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = "RENEWAL_OUT_DIR", default_value = ".")]
    out: PathBuf,
    /// Record wall-clock runtime in the summary (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form oracle suite.
    Selftest(commands::SelftestFlags),
    /// Marcinkiewicz-Zygmund inclusions along a dyadic grid.
    Slln(commands::SllnFlags),
    /// Metric LIL ratios and envelope inclusions.
    Lil(commands::LilFlags),
    /// Running minima of sqrt(t) times the distances.
    Liminf(commands::LiminfFlags),
    /// Radial-function CLT with a KS test.
    Clt(commands::CltFlags),
    /// Sectorial versus full-orthant LIL of the multiple sums.
    Sector(commands::SectorFlags),
    /// Lattice deficiency N_t and divisor counts.
    Count(commands::CountFlags),
    /// Chentsov field covariance and zeta self-similarity.
    Chentsov(commands::ChentsovFlags),
}

const EXIT_CONFIG: u8 = 2;
const EXIT_STATISTICAL: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

fn error_exit(command: &str, kind: &str, message: &str, code: u8) -> ExitCode {
    let body = json!({ "command": command, "error": { "kind": kind, "message": message } });
    println!("{}", serde_json::to_string_pretty(&body).expect("error serializes"));
    ExitCode::from(code)
}

fn run<C: DeserializeOwned + Serialize>(
    cli: &Cli,
    name: &str,
    flags: &impl Serialize,
    body: impl FnOnce(&C) -> Result<Report, CmdError>,
) -> ExitCode {
    let start = Instant::now();
    let file = match &cli.config {
        Some(path) => match config::read_file(path) {
            Ok(map) => map,
            Err(e) => return error_exit(name, "config", &e.0, EXIT_CONFIG),
        },
        None => Default::default(),
    };
    let resolved: C = match config::resolve(file, flags) {
        Ok(c) => c,
        Err(e) => return error_exit(name, "config", &e.0, EXIT_CONFIG),
    };
    let report = match body(&resolved) {
        Ok(r) => r,
        Err(CmdError::Config(m)) => return error_exit(name, "config", &m, EXIT_CONFIG),
        Err(CmdError::Internal(m)) => return error_exit(name, "internal", &m, EXIT_INTERNAL),
    };
    let summary = Summary {
        command: name.into(),
        config_hash: config::config_hash(name, &resolved),
        seed: report.seed,
        config: serde_json::to_value(&resolved).expect("config serializes"),
        criteria: report.criteria,
        statistics: report.statistics,
        runtime_seconds: cli.timing.then(|| start.elapsed().as_secs_f64()),
    };
    if let Err(e) = output::write_outputs(&cli.out, name, &report.table, &summary) {
        return error_exit(name, "internal", &format!("writing outputs: {e}"), EXIT_INTERNAL);
    }
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    if summary.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_STATISTICAL)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Selftest(f) => run(&cli, "selftest", f, commands::selftest),
        Command::Slln(f) => run(&cli, "slln", f, commands::slln),
        Command::Lil(f) => run(&cli, "lil", f, commands::lil),
        Command::Liminf(f) => run(&cli, "liminf", f, commands::liminf),
        Command::Clt(f) => run(&cli, "clt", f, commands::clt),
        Command::Sector(f) => run(&cli, "sector", f, commands::sector),
        Command::Count(f) => run(&cli, "count", f, commands::count),
        Command::Chentsov(f) => run(&cli, "chentsov", f, commands::chentsov),
    }
}
