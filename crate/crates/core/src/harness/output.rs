//! CSV artifacts. Floats are written in Rust's shortest round-trip
//! scientific form (`1.25e-3`), which is locale-independent and parses back
//! to the same bits.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::Evaluator;

use super::{BoundCheckReport, ConvergenceRow, Experiment, ScalingRow};

const CONVERGENCE_COLUMNS: [&str; 5] = [
    "n",
    "sup_error",
    "sup_relative_error",
    "predicted_k_over_n",
    "evaluator",
];
const TIMING_COLUMN: &str = "wall_time_ms";

fn float(v: f64) -> String {
    format!("{v:e}")
}

fn flush<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::Csv(e.into()))
}

/// Convergence rows as CSV. The wall-time column is only written when
/// `timings` is set, so that default output is reproducible byte for byte.
pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], out: W, timings: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CONVERGENCE_COLUMNS.to_vec();
    if timings {
        header.push(TIMING_COLUMN);
    }
    w.write_record(&header)?;
    for r in rows {
        let mut record = vec![
            r.n.to_string(),
            float(r.sup_error),
            float(r.sup_relative_error),
            r.predicted_k_over_n.map(float).unwrap_or_default(),
            r.evaluator.to_string(),
        ];
        if timings {
            record.push(float(r.wall_time_ms));
        }
        w.write_record(&record)?;
    }
    flush(w)
}

/// Writes convergence rows to `path`.
pub fn emit_csv(rows: &[ConvergenceRow], path: &Path, timings: bool) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_convergence_csv(rows, BufWriter::new(file), timings).map_err(|e| match e {
        Error::Csv(inner) => match inner.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            kind => Error::config(path.display().to_string(), format!("{kind:?}")),
        },
        other => other,
    })
}

/// Parses CSV written by [`write_convergence_csv`], with or without the
/// timing column.
pub fn read_convergence_csv<R: Read>(input: R) -> Result<Vec<ConvergenceRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    let timings = match headers.len() {
        5 => false,
        6 if &headers[5] == TIMING_COLUMN => true,
        _ => {
            return Err(Error::config(
                "convergence CSV",
                format!("unexpected header {headers:?}"),
            ))
        }
    };
    if headers.iter().take(5).ne(CONVERGENCE_COLUMNS) {
        return Err(Error::config("convergence CSV", format!("unexpected header {headers:?}")));
    }
    let bad = |what: &str, e: &dyn std::fmt::Display| Error::config("convergence CSV", format!("{what}: {e}"));
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let parse = |i: usize| record[i].parse::<f64>().map_err(|e| bad(CONVERGENCE_COLUMNS[i.min(4)], &e));
        rows.push(ConvergenceRow {
            n: record[0].parse().map_err(|e| bad("n", &e))?,
            sup_error: parse(1)?,
            sup_relative_error: parse(2)?,
            predicted_k_over_n: if record[3].is_empty() { None } else { Some(parse(3)?) },
            evaluator: record[4].parse::<Evaluator>()?,
            wall_time_ms: if timings {
                record[5].parse().map_err(|e| bad(TIMING_COLUMN, &e))?
            } else {
                0.0
            },
        });
    }
    Ok(rows)
}

pub fn write_bound_check_csv<W: Write>(report: &BoundCheckReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "observed_relative_error",
        "k",
        "predicted_k_over_n",
        "ratio",
        "violation",
    ])?;
    for r in &report.rows {
        w.write_record([
            r.n.to_string(),
            float(r.observed_relative_error),
            float(r.k),
            float(r.predicted_k_over_n),
            float(r.ratio),
            r.violation.to_string(),
        ])?;
    }
    flush(w)
}

pub fn write_scaling_csv<W: Write>(rows: &[ScalingRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "scale",
        "diameter",
        "direction",
        "direction_norm",
        "d_times_k",
        "n",
        "sup_relative_error",
    ])?;
    for r in rows {
        let direction = r.direction.iter().map(|v| float(*v)).collect::<Vec<_>>().join(" ");
        w.write_record([
            float(r.scale),
            float(r.diameter),
            direction,
            float(r.direction_norm),
            float(r.d_times_k),
            r.n.to_string(),
            float(r.sup_relative_error),
        ])?;
    }
    flush(w)
}

/// Sidecar description of a run, written next to the CSV.
#[derive(Debug, Serialize)]
pub struct RunMetadata {
    pub command: String,
    pub evaluator: Option<Evaluator>,
    pub grid_resolution: u32,
    pub grid_points: u128,
    pub seed: u64,
    pub simplex: crate::geometry::Simplex,
    pub function: String,
    pub note: &'static str,
}

impl RunMetadata {
    pub fn new(command: &str, experiment: &Experiment, evaluator: Option<Evaluator>) -> Self {
        RunMetadata {
            command: command.to_string(),
            evaluator,
            grid_resolution: experiment.grid,
            grid_points: crate::lattice::lattice_size(experiment.grid, experiment.simplex.dim()),
            seed: experiment.seed,
            simplex: experiment.simplex.clone(),
            function: format!("{:?}", experiment.function),
            note: "sup norms are maxima over a barycentric lattice grid and bound the true sup from below",
        }
    }

    /// Writes `<csv path>.meta.json`.
    pub fn write_next_to(&self, csv_path: &Path) -> Result<()> {
        let mut path = csv_path.as_os_str().to_owned();
        path.push(".meta.json");
        let path = std::path::PathBuf::from(path);
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    }
}
