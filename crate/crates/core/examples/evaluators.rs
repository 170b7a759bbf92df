//! Direct summation against de Casteljau on the same control net.
//!
//!     cargo run --release --example evaluators

use std::time::Instant;

use bezier_simplex::{BarycentricPoint, ControlNet, Evaluator, Result, Simplex};

fn main() -> Result<()> {
    let triangle = Simplex::standard(2)?;
    let f = |x: &[f64]| (3.0 * x[0]).sin() * (2.0 * x[1]).cos();
    let t = BarycentricPoint::new(vec![0.2, 0.5, 0.3])?;
    let x = triangle.point_from_barycentric(&t)?;

    for n in [5, 20, 80] {
        let net = ControlNet::sample(&triangle, n, f)?;
        let mut line = format!("n = {n:3}  |M_n| = {:5}", net.coeffs().len());
        let mut values = Vec::new();
        for ev in [Evaluator::Direct, Evaluator::DeCasteljau] {
            // The first de Casteljau call builds the net's index tables.
            net.eval(&x, ev)?;
            let start = Instant::now();
            let reps = 200;
            let mut v = 0.0;
            for _ in 0..reps {
                v = net.eval(&x, ev)?;
            }
            let micros = start.elapsed().as_secs_f64() * 1e6 / reps as f64;
            line += &format!("  {ev}: {v:.12} ({micros:.1} µs)");
            values.push(v);
        }
        println!("{line}  |diff| = {:.1e}", (values[0] - values[1]).abs());
    }
    println!("f(x) = {:.12}", f(&x));
    Ok(())
}
