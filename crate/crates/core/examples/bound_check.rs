//! Checks the observed relative error of a single exponential against K/n.
//!
//!     cargo run --release --example bound_check -- examples/configs/exp_triangle.json

use std::path::Path;

use bezier_simplex::harness::{self, ExperimentConfig, DEFAULT_BOUND_MARGIN};
use bezier_simplex::{Evaluator, Result};

fn main() -> Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/exp_triangle.json").into());
    let experiment = ExperimentConfig::load(Path::new(&path))?;
    let report = harness::run_bound_check(&experiment, DEFAULT_BOUND_MARGIN, Evaluator::DeCasteljau)?;
    for r in &report.rows {
        let flag = if r.violation { "  VIOLATION" } else { "" };
        println!(
            "n = {:4}  observed {:.4e}  K/n {:.4e}  ratio {:.4}{flag}",
            r.n, r.observed_relative_error, r.predicted_k_over_n, r.ratio
        );
    }
    println!("{}", if report.violated() { "bound violated" } else { "bound holds" });
    Ok(())
}
