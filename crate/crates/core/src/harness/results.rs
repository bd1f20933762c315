use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::RunStatus;

/// Outcome of one `(trial, k)` solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub k: usize,
    pub status: RunStatus,
    /// `None` when the trial aborted with an error.
    pub final_distance: Option<f64>,
    pub evals: usize,
    pub wall_time: f64,
    pub converged: bool,
    /// Solver diagnostic or the error that aborted the trial.
    pub error: Option<String>,
}

/// One `(variety, k)` line. Times are over successful and spurious runs
/// (those where the optimizer stopped on its own); `None` if there are none.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultsRow {
    pub variety: String,
    pub k: usize,
    pub trials: usize,
    pub successful: usize,
    pub unfinished: usize,
    pub spurious: usize,
    pub mean_time_s: Option<f64>,
    pub median_time_s: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultsTable {
    pub rows: Vec<ResultsRow>,
    #[serde(default)]
    pub trials: Vec<TrialResult>,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

impl ResultsTable {
    /// Groups trials by `k`, in the order of `k_values`.
    pub fn aggregate(variety: &str, k_values: &[usize], mut trials: Vec<TrialResult>) -> Self {
        trials.sort_by_key(|t| (t.k, t.trial));
        let rows = k_values
            .iter()
            .map(|&k| {
                let of_k: Vec<&TrialResult> = trials.iter().filter(|t| t.k == k).collect();
                let count = |s| of_k.iter().filter(|t| t.status == s).count();
                let times: Vec<f64> = of_k
                    .iter()
                    .filter(|t| t.status != RunStatus::Unfinished)
                    .map(|t| t.wall_time)
                    .collect();
                let mean =
                    (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64);
                ResultsRow {
                    variety: variety.to_string(),
                    k,
                    trials: of_k.len(),
                    successful: count(RunStatus::Successful),
                    unfinished: count(RunStatus::Unfinished),
                    spurious: count(RunStatus::Spurious),
                    mean_time_s: mean,
                    median_time_s: median(times),
                }
            })
            .collect();
        Self { rows, trials }
    }

    /// `(k, successful, unfinished, spurious)` per row.
    pub fn counts(&self) -> Vec<(usize, usize, usize, usize)> {
        self.rows
            .iter()
            .map(|r| (r.k, r.successful, r.unfinished, r.spurious))
            .collect()
    }

    pub fn row(&self, k: usize) -> Option<&ResultsRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_csv_reader<R: std::io::Read>(r: R) -> Result<Vec<ResultsRow>> {
        let mut rdr = csv::Reader::from_reader(r);
        rdr.deserialize()
            .map(|row| row.map_err(Error::from))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

/// CSV columns: variety, k, trials, successful, unfinished, spurious,
/// mean_time_s, median_time_s. JSON carries the same rows plus per-trial
/// records.
pub fn write_results<W: Write>(table: &ResultsTable, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if table.rows.is_empty() {
                w.write_record([
                    "variety",
                    "k",
                    "trials",
                    "successful",
                    "unfinished",
                    "spurious",
                    "mean_time_s",
                    "median_time_s",
                ])?;
            }
            for row in &table.rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, table)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn emit_results(table: &ResultsTable, format: OutputFormat, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_results(table, format, &mut w)?;
    w.flush()?;
    Ok(())
}
