use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vecnet::{serialize_network, Network};

use crate::error::{CliError, Result};
use crate::experiment::ExperimentReport;

pub const CSV_COLUMNS: [&str; 10] = [
    "epsilon",
    "seminorm",
    "m_centers",
    "C",
    "delta",
    "width",
    "converged",
    "train_sup_error",
    "heldout_sup_error",
    "wall_ms",
];

/// One CSV line per `(ε, targeted seminorm)` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub epsilon: f64,
    pub seminorm: String,
    pub m_centers: usize,
    #[serde(rename = "C")]
    pub c: f64,
    pub delta: Option<f64>,
    pub width: usize,
    pub converged: bool,
    pub train_sup_error: f64,
    pub heldout_sup_error: Option<f64>,
    pub wall_ms: f64,
}

pub fn csv_rows(report: &ExperimentReport) -> Vec<CsvRow> {
    report
        .runs
        .iter()
        .map(|r| CsvRow {
            epsilon: r.epsilon,
            seminorm: r.seminorm.clone(),
            m_centers: r.m_centers,
            c: r.c_max,
            delta: r.delta,
            width: r.width,
            converged: r.converged,
            train_sup_error: r.train_sup_error,
            heldout_sup_error: r.heldout_sup_error,
            wall_ms: r.wall_ms,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub json: PathBuf,
    /// Directory for serialized networks; `None` skips them.
    pub networks: Option<PathBuf>,
}

impl OutputPaths {
    pub fn in_dir(dir: &Path, write_networks: bool) -> Self {
        Self {
            csv: dir.join("report.csv"),
            json: dir.join("report.json"),
            networks: write_networks.then(|| dir.join("networks")),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => fs::create_dir_all(p).map_err(io_err(p)),
        _ => Ok(()),
    }
}

pub fn write_csv<W: std::io::Write>(
    report: &ExperimentReport,
    out: W,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let rows = csv_rows(report);
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let csv_err = |source| CliError::Csv {
        path: path.to_owned(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err)
}

pub fn read_report(path: &Path) -> Result<ExperimentReport> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

/// Writes the CSV summary, the full JSON report and, if requested, one
/// network document per run (`run_000.json`, ...).
pub fn emit_report(
    report: &ExperimentReport,
    networks: &[Network],
    paths: &OutputPaths,
) -> Result<()> {
    ensure_parent(&paths.csv)?;
    let file = fs::File::create(&paths.csv).map_err(io_err(&paths.csv))?;
    write_csv(report, file).map_err(|source| CliError::Csv {
        path: paths.csv.clone(),
        source,
    })?;

    ensure_parent(&paths.json)?;
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    fs::write(&paths.json, json).map_err(io_err(&paths.json))?;

    if let Some(dir) = &paths.networks {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        for (i, net) in networks.iter().enumerate() {
            let path = dir.join(format!("run_{i:03}.json"));
            fs::write(&path, serialize_network(net)).map_err(io_err(&path))?;
        }
    }
    Ok(())
}
