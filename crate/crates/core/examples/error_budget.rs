//! Error constants for exp(a·x) on a triangle and how the observed relative
//! error compares with K/n.
//!
//!     cargo run --example error_budget

use bezier_simplex::expmodel::{error_budget, relative_error_report};
use bezier_simplex::operator::barycentric_grid;
use bezier_simplex::{Result, Simplex};

fn main() -> Result<()> {
    let triangle = Simplex::standard(2)?;
    let grid = barycentric_grid(&triangle, 40)?;
    for a in [[1.0, 1.0], [2.0, -1.0], [-3.0, 0.5]] {
        let b = error_budget(&triangle, &a, 1)?;
        println!("a = {a:?}: C = {:.4}, max a·x = {:.2}, K = {:.4}", b.c, b.max_linear, b.k);
        for n in [10, 100, 1000] {
            let r = relative_error_report(&triangle, &a, n, &grid)?;
            println!("  n = {n:4}  observed {:.3e}  K/n {:.3e}  ratio {:.3}", r.observed, r.predicted, r.ratio);
        }
    }
    Ok(())
}
