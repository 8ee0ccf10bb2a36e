mod config;
mod report;
mod scenarios;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{ConfigError, Scenario, ScenarioConfig};
use scenarios::Invariant;

const EXIT_ERROR: u8 = 1;
const EXIT_INVARIANT: u8 = 3;

/// Correlation witnesses for mediated A–M–B dynamics.
#[derive(Parser)]
#[command(name = "medwit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed (overrides `seed` in the config).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the scenario catalog.
    ListScenarios,
    /// Check a config and print it with all defaults filled in.
    Validate { config: PathBuf },
}

fn load(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut raw = config::parse_raw(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if seed.is_some() {
        raw.seed = seed;
    }
    raw.resolved().map_err(|e: ConfigError| format!("{}: {e}", path.display()))
}

fn run(path: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<bool, String> {
    let cfg = load(path, seed)?;
    let dir = out.or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("medwit-out"));
    let start = Instant::now();
    let outcome = scenarios::run(&cfg).map_err(|e| format!("scenario {} failed: {e}", cfg.scenario))?;
    let wall = start.elapsed().as_secs_f64();
    let written = report::write_outputs(&dir, &cfg, &outcome.rows, &outcome.invariants, wall)
        .map_err(|e| format!("cannot write to {}: {e}", dir.display()))?;
    println!(
        "{}: {} rows, status {}, {:.2}s",
        cfg.scenario,
        outcome.rows.len(),
        scenarios::overall_status(&outcome.rows).as_str(),
        wall
    );
    println!("wrote {} and {}", written.csv.display(), written.manifest.display());
    Ok(report_invariants(&outcome.invariants))
}

/// Prints failed invariants; true when all passed.
fn report_invariants(invariants: &[Invariant]) -> bool {
    let mut ok = true;
    for inv in invariants.iter().filter(|i| !i.passed) {
        ok = false;
        eprintln!("invariant failed: {} ({})", inv.name, inv.detail);
    }
    ok
}

fn exit_code(result: &Result<bool, String>) -> u8 {
    match result {
        Ok(true) => 0,
        Ok(false) => EXIT_INVARIANT,
        Err(_) => EXIT_ERROR,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::ListScenarios => {
            for s in Scenario::ALL {
                let seed = if s.randomized() { "seed required" } else { "deterministic" };
                println!("{:<18} {} [{seed}]", s.as_str(), s.summary());
            }
            Ok(true)
        }
        Command::Validate { config } => load(&config, None).map(|cfg| {
            println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
            true
        }),
        Command::Run { config, out, seed } => run(&config, out, seed),
    };
    if let Err(msg) = &result {
        eprintln!("error: {msg}");
    }
    ExitCode::from(exit_code(&result))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_invariant_maps_to_three() {
        let inv = |passed| Invariant { name: "synthetic".into(), passed, detail: String::new() };
        assert_eq!(exit_code(&Ok(report_invariants(&[inv(true), inv(true)]))), 0);
        assert_eq!(exit_code(&Ok(report_invariants(&[inv(true), inv(false)]))), 3);
        assert_eq!(exit_code(&Err("boom".into())), 1);
    }
}
