//! `results.csv` and `manifest.json`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::scenarios::{overall_status, Invariant, Row};

pub const CSV_HEADER: [&str; 10] =
    ["scenario", "paper_eq", "lhs", "capacity", "total_corr", "bound", "violation", "nd_lower_bound", "status", "seed"];

/// Twelve significant digits; empty when the column does not apply.
fn number(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.11e}")).unwrap_or_default()
}

pub fn csv_bytes(rows: &[Row], seed: u64) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.scenario.to_string(),
            r.paper_eq.to_string(),
            number(r.lhs),
            number(r.capacity),
            number(r.total_corr),
            number(r.bound),
            number(r.violation),
            number(r.nd_lower_bound),
            r.status.as_str().to_string(),
            seed.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    cli_version: &'static str,
    library_version: &'static str,
    config: &'a ScenarioConfig,
    status: &'static str,
    wall_time_seconds: f64,
    invariants: &'a [Invariant],
    rows: &'a [Row],
}

pub struct Written {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

pub fn write_outputs(
    dir: &Path,
    cfg: &ScenarioConfig,
    rows: &[Row],
    invariants: &[Invariant],
    wall_time: f64,
) -> std::io::Result<Written> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join("results.csv");
    let bytes = csv_bytes(rows, cfg.master_seed()).map_err(std::io::Error::other)?;
    fs::write(&csv_path, bytes)?;
    let manifest = Manifest {
        tool: "medwit",
        cli_version: env!("CARGO_PKG_VERSION"),
        library_version: medwit::VERSION,
        config: cfg,
        status: overall_status(rows).as_str(),
        wall_time_seconds: wall_time,
        invariants,
        rows,
    };
    let manifest_path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    fs::write(&manifest_path, text + "\n")?;
    Ok(Written { csv: csv_path, manifest: manifest_path })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_use_twelve_digits() {
        assert_eq!(number(Some(0.5849625007211562)), "5.84962500721e-1");
        assert_eq!(number(Some(0.0)), "0.00000000000e0");
        assert_eq!(number(None), "");
    }
}
