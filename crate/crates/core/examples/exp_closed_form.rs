//! The Bernstein image of exp(a·x) in closed form, checked against the
//! operator applied to sampled values.
//!
//!     cargo run --example exp_closed_form

use bezier_simplex::expmodel::{bezier_exp_closed_form, bezier_of_exp_polynomial};
use bezier_simplex::{ControlNet, ExpPolynomial, ExpTerm, Result, Simplex};

fn main() -> Result<()> {
    let triangle = Simplex::standard(2)?;
    let a = [1.0f64, -0.5];
    let x = [0.3, 0.3];
    let exact = (a[0] * x[0] + a[1] * x[1]).exp();

    println!("{:>5} {:>18} {:>18} {:>12}", "n", "closed form", "operator", "rel. error");
    for n in [1, 2, 5, 10, 50, 1000] {
        let closed = bezier_exp_closed_form(&triangle, n, &a, &x)?;
        let operator = if n <= 50 {
            let net = ControlNet::sample(&triangle, n, |p| (a[0] * p[0] + a[1] * p[1]).exp())?;
            format!("{:18.12}", net.eval_direct(&x)?)
        } else {
            format!("{:>18}", "-")
        };
        println!("{n:5} {closed:18.12} {operator} {:12.3e}", (closed - exact).abs() / exact);
    }

    let p = ExpPolynomial::new(vec![ExpTerm::new(2.0, vec![1.0, 0.0]), ExpTerm::new(-1.0, vec![0.0, 2.0])])?;
    let v = bezier_of_exp_polynomial(&triangle, 20, &p, &x)?;
    println!("B_20 of 2e^x - e^(2y) at {x:?}: {v:.10} (exact {:.10})", p.eval(&x)?);
    Ok(())
}
