use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bezier_simplex::harness::{self, ExperimentConfig, RunMetadata};
use bezier_simplex::lattice::control_points;
use bezier_simplex::operator::basis_values;
use bezier_simplex::{Error, Evaluator, Result};

#[derive(Parser)]
#[command(name = "bezier-simplex", version, about = "Bernstein-Bezier approximation experiments on simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sup error of B_n f for every n in the config.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "decasteljau")]
        evaluator: Evaluator,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add a wall_time_ms column (makes the output non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Observed relative error of a single exponential against K/n.
    BoundCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = harness::DEFAULT_BOUND_MARGIN)]
        margin: f64,
        #[arg(long, default_value = "decasteljau")]
        evaluator: Evaluator,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative error at the largest configured n across simplex scales and directions.
    Scaling {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        scales: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print every B_k^n(x).
    Basis {
        /// Simplex JSON, inline or a file path.
        #[arg(long)]
        simplex: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        point: Vec<f64>,
    },
    /// Control points of order n as CSV.
    ControlPoints {
        #[arg(long)]
        simplex: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Converge {
            config,
            evaluator,
            out,
            timings,
        } => {
            let experiment = ExperimentConfig::load(&config)?;
            let rows = harness::run_convergence(&experiment, evaluator)?;
            let out = out.or_else(|| experiment.out.clone());
            harness::write_convergence_csv(&rows, sink(out.as_deref())?, timings)?;
            if let Some(path) = &out {
                RunMetadata::new("converge", &experiment, Some(evaluator)).write_next_to(path)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::BoundCheck {
            config,
            margin,
            evaluator,
            out,
        } => {
            let experiment = ExperimentConfig::load(&config)?;
            let report = harness::run_bound_check(&experiment, margin, evaluator)?;
            let out = out.or_else(|| experiment.out.clone());
            harness::write_bound_check_csv(&report, sink(out.as_deref())?)?;
            if let Some(path) = &out {
                RunMetadata::new("bound-check", &experiment, Some(evaluator)).write_next_to(path)?;
            }
            if report.violated() {
                for r in report.rows.iter().filter(|r| r.violation) {
                    eprintln!(
                        "bound violated at n = {}: observed/(K/n) = {:.4} > {:.4}",
                        r.n,
                        r.ratio,
                        1.0 + margin
                    );
                }
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scaling { config, scales, out } => {
            let experiment = ExperimentConfig::load(&config)?;
            let directions = match (&experiment.directions, experiment.function.single_exponential()) {
                (Some(d), _) => d.clone(),
                (None, Some(term)) => vec![term.a.clone()],
                (None, None) => {
                    return Err(Error::Config {
                        field: "directions".into(),
                        message: "give `directions` or a single exponential function".into(),
                    })
                }
            };
            let n = *experiment.n_values.last().expect("validated non-empty");
            let rows = harness::run_scaling_study(&experiment.simplex, &scales, &directions, n, experiment.grid)?;
            let out = out.or_else(|| experiment.out.clone());
            harness::write_scaling_csv(&rows, sink(out.as_deref())?)?;
            if let Some(path) = &out {
                RunMetadata::new("scaling", &experiment, None).write_next_to(path)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Basis { simplex, n, point } => {
            let simplex = harness::load_simplex(&simplex)?;
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            let dim = simplex.dim();
            let header: Vec<String> = (0..=dim)
                .map(|j| format!("k_{j}"))
                .chain(std::iter::once("value".into()))
                .collect();
            w.write_record(&header)?;
            for (k, v) in basis_values(&simplex, n, &point)? {
                let record: Vec<String> = k
                    .entries()
                    .iter()
                    .map(u32::to_string)
                    .chain(std::iter::once(format!("{v:e}")))
                    .collect();
                w.write_record(&record)?;
            }
            w.flush().map_err(|e| Error::Csv(e.into()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ControlPoints { simplex, n, out } => {
            let simplex = harness::load_simplex(&simplex)?;
            control_points(&simplex, n)?.write_csv(sink(out.as_deref())?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
