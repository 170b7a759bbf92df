//! Relative error at fixed n as the simplex and the exponent grow.
//!
//!     cargo run --example scaling_study

use bezier_simplex::harness::{run_scaling_study, write_scaling_csv};
use bezier_simplex::{Result, Simplex};

fn main() -> Result<()> {
    let triangle = Simplex::standard(2)?;
    let directions = vec![vec![0.5, 0.5], vec![1.0, 1.0], vec![2.0, 2.0]];
    let rows = run_scaling_study(&triangle, &[0.5, 1.0, 2.0, 4.0], &directions, 80, 30)?;
    for r in &rows {
        println!(
            "d = {:.3}  |a| = {:.3}  d|a| = {:6.3}  sup relative error {:.4e}",
            r.diameter, r.direction_norm, r.d_times_k, r.sup_relative_error
        );
    }
    eprintln!("--- csv ---");
    write_scaling_csv(&rows, std::io::stderr().lock())
}
