//! Convergence of B_n f for several target functions, with fitted rates.
//!
//!     cargo run --release --example convergence_sweep
//!     cargo run --release --example convergence_sweep -- examples/configs/exp_triangle.json

use std::path::Path;

use bezier_simplex::harness::{self, fit_rate, ExperimentConfig};
use bezier_simplex::{Evaluator, Result};

fn report(label: &str, config: &ExperimentConfig) -> Result<()> {
    let experiment = config.resolve(Path::new("."))?;
    let rows = harness::run_convergence(&experiment, Evaluator::DeCasteljau)?;
    println!("{label}");
    for r in &rows {
        println!("  n = {:4}  sup error {:.3e}", r.n, r.sup_error);
    }
    match fit_rate(&rows) {
        Ok(fit) => println!("  rate n^{:.3} (r² = {:.4})", fit.slope, fit.r_squared),
        Err(e) => println!("  no rate: {e}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    if let Some(path) = std::env::args().nth(1) {
        let experiment = ExperimentConfig::load(Path::new(&path))?;
        let rows = harness::run_convergence(&experiment, Evaluator::DeCasteljau)?;
        return harness::write_convergence_csv(&rows, std::io::stdout().lock(), false);
    }
    let triangle = r#"{"vertices": [[0, 0], [1, 0], [0, 1]]}"#;
    for (label, function) in [
        ("exp(x + y)", r#"{"terms": [{"c": 1, "a": [1, 1]}]}"#),
        ("runge", r#""runge""#),
        ("|x - c| (kink)", r#""abs""#),
    ] {
        let config = ExperimentConfig::from_json(&format!(
            r#"{{"simplex": {triangle}, "function": {function}, "n_values": [5, 10, 20, 40], "grid": 30}}"#
        ))?;
        report(label, &config)?;
    }
    Ok(())
}
