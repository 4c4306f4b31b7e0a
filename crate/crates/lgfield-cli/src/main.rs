//! `lgfield` — evaluate two-time quasi-probabilities of a coarse-grained
//! Gaussian field and scan parameter planes for Leggett-Garg violations.
//!
//! Subcommands: `compute` (one query, JSON to stdout), `scan` (CSV grid plus
//! JSON sidecar), `kernels` (dump the evaluated kernel set), `verify`
//! (self-check suite). Exit codes: 0 success, 1 verification failure,
//! 2 configuration error, 3 numeric failure.

use clap::{Parser, Subcommand, ValueEnum};
use lgfield_cli::config::{ConfigError, ConfigFile, ResolvedConfig};
use lgfield::quasiprob::{quasi_prob, Engine};
use lgfield::scanner::{find_min, scan_plane, violation_summary, ScanGrid};
use lgfield::verify;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lgfield", version, about)]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Cartesian,
    Polar,
    Auto,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Cartesian => Engine::Cartesian,
            EngineArg::Polar => Engine::Polar,
            EngineArg::Auto => Engine::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one quasi-probability query; JSON on stdout.
    Compute {
        /// Config file path, or `-` for stdin.
        #[arg(long)]
        config: String,
        #[arg(long)]
        engine: Option<EngineArg>,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a 2D parameter scan; CSV grid plus a JSON sidecar.
    Scan {
        /// Config file path (must contain a `scan` block), or `-` for stdin.
        #[arg(long)]
        config: String,
        #[arg(long)]
        engine: Option<EngineArg>,
        /// CSV output path; the sidecar lands next to it with `.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 0 even if some cells failed (they stay NaN in the CSV).
        #[arg(long)]
        allow_partial: bool,
    },
    /// Print the evaluated kernel set for the configured query times.
    Kernels {
        #[arg(long)]
        config: String,
    },
    /// Run the self-check suite; exit 0 iff all checks pass.
    Verify {
        #[arg(value_enum)]
        level: LevelArg,
        /// Seed for the randomised draws.
        #[arg(long, default_value_t = 0x1357_9bdf)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = lgfield::configure_threads(n) {
            eprintln!("warning: could not pin thread count: {e}");
        }
    }
    let code = match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    ExitCode::from(code)
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 3,
        }
    }
}

fn load(path: &str) -> Result<ConfigFile, ConfigError> {
    if path == "-" {
        ConfigFile::from_reader(std::io::stdin().lock())
    } else {
        ConfigFile::from_reader(fs::File::open(path)?)
    }
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Compute {
            config,
            engine,
            out,
        } => {
            let file = load(&config)?;
            let resolved = file.resolve(engine.map(Into::into))?;
            let b = &resolved.base;
            let res = quasi_prob(&b.model, &b.state, &b.scheme, &b.query, &b.quadrature)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            let text = serde_json::to_string_pretty(&res).expect("serializable result");
            emit(out.or_else(|| output_path(&resolved)).as_deref(), &text)?;
            Ok(0)
        }
        Cmd::Scan {
            config,
            engine,
            out,
            allow_partial,
        } => {
            let file = load(&config)?;
            let resolved = file.resolve(engine.map(Into::into))?;
            let axes = resolved.scan.ok_or_else(|| {
                ConfigError::Invalid("scan requires a `scan` block with x and y axes".into())
            })?;
            let grid = scan_plane(&resolved.base, axes.x, axes.y)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            let csv_path = out
                .or_else(|| output_path(&resolved))
                .ok_or_else(|| ConfigError::Invalid("scan needs --out or output.path".into()))?;
            fs::write(&csv_path, grid_csv(&grid))?;
            let sidecar = sidecar_json(&file, &resolved, &grid)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            fs::write(csv_path.with_extension("json"), sidecar)?;
            if grid.failed_cells > 0 {
                eprintln!(
                    "{} of {} cells failed",
                    grid.failed_cells,
                    grid.values.len()
                );
                if !allow_partial {
                    return Err(CliError::Numeric(format!(
                        "{} cells failed (re-run with --allow-partial to keep the grid)",
                        grid.failed_cells
                    )));
                }
            }
            Ok(0)
        }
        Cmd::Kernels { config } => {
            let file = load(&config)?;
            let resolved = file.resolve(None)?;
            let b = &resolved.base;
            let ks = lgfield::kernels::kernel_set(&b.model, &b.state, b.query.t1, b.query.t2);
            println!(
                "{}",
                serde_json::to_string_pretty(&ks).expect("serializable kernels")
            );
            Ok(0)
        }
        Cmd::Verify { level, seed } => {
            let level = match level {
                LevelArg::Quick => verify::Level::Quick,
                LevelArg::Full => verify::Level::Full,
            };
            let report = verify::run(level, seed);
            for c in &report.checks {
                println!(
                    "[{}] {:<45} {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if report.all_passed() {
                println!("all {} checks passed (seed {})", report.checks.len(), seed);
                Ok(0)
            } else {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name)
                    .collect();
                eprintln!("failed checks: {}", failed.join(", "));
                Ok(1)
            }
        }
    }
}

fn output_path(resolved: &ResolvedConfig) -> Option<PathBuf> {
    resolved
        .output
        .as_ref()
        .and_then(|o| o.path.as_ref())
        .map(PathBuf::from)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

/// 17 significant digits: lossless double round-trip.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn grid_csv(grid: &ScanGrid) -> String {
    let mut out = String::with_capacity(100 * grid.values.len() + 64);
    out.push_str("x_value,y_value,q,est_error,robust_negative\n");
    for ix in 0..grid.nx() {
        for iy in 0..grid.ny() {
            let robust = if grid.is_robust_negative(ix, iy) { 1 } else { 0 };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt17(grid.x.value(ix)),
                fmt17(grid.y.value(iy)),
                fmt17(grid.at(ix, iy)),
                fmt17(grid.error_at(ix, iy)),
                robust
            ));
        }
    }
    out
}

#[derive(Serialize)]
struct MinPoint {
    x: f64,
    y: f64,
    q: f64,
}

#[derive(Serialize)]
struct Sidecar {
    version: String,
    recipe: ConfigFile,
    grid_min: MinPoint,
    refined_min: MinPoint,
    fraction_neg: f64,
    threshold_crossings: Vec<(lgfield::scanner::AxisId, f64)>,
    failed_cells: usize,
}

fn sidecar_json(
    file: &ConfigFile,
    resolved: &ResolvedConfig,
    grid: &ScanGrid,
) -> Result<String, Box<dyn std::error::Error>> {
    let summary = violation_summary(grid)?;
    let refined = find_min(grid)?;
    let sidecar = Sidecar {
        version: env!("CARGO_PKG_VERSION").to_string(),
        recipe: file.canonical(resolved),
        grid_min: MinPoint {
            x: grid.min_point.0,
            y: grid.min_point.1,
            q: grid.min_point.2,
        },
        refined_min: MinPoint {
            x: refined.0,
            y: refined.1,
            q: refined.2,
        },
        fraction_neg: summary.fraction_neg,
        threshold_crossings: summary.threshold_crossings,
        failed_cells: grid.failed_cells,
    };
    Ok(serde_json::to_string_pretty(&sidecar)? + "\n")
}
