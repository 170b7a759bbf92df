//! Control points of a tetrahedron, written as CSV to stdout.
//!
//!     cargo run --example control_points -- 4

use bezier_simplex::lattice::control_points;
use bezier_simplex::{Result, Simplex};

fn main() -> Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let tetrahedron = Simplex::standard(3)?;
    let points = control_points(&tetrahedron, n)?;
    eprintln!("{} control points of order {n}", points.len());
    points.write_csv(std::io::stdout().lock())
}
