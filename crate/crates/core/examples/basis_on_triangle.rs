//! Bernstein basis of order 3 on a triangle, evaluated at one point.
//!
//!     cargo run --example basis_on_triangle

use bezier_simplex::operator::basis_values;
use bezier_simplex::{Result, Simplex};

fn main() -> Result<()> {
    let triangle = Simplex::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.5, 1.5]])?;
    let x = [0.8, 0.4];
    let t = triangle.barycentric(&x)?;
    println!("barycentric coordinates of {x:?}: {:?}", t.weights());

    let values = basis_values(&triangle, 3, &x)?;
    let mut total = 0.0;
    for (k, v) in &values {
        println!("B_{k}(x) = {v:.6}");
        total += v;
    }
    println!("{} basis functions, sum = {total:.15}", values.len());
    Ok(())
}
