//! Bernstein–Bézier approximation on D-dimensional simplices.
//!
//! For a continuous `f` on a simplex `T` with vertices `x_0, ..., x_D`, the
//! Bernstein operator of order `n` is
//!
//! ```text
//! B_n(f; x) = Σ_{|k| = n} f(R(k / n)) · binom(n, k) · Π_j s_j(x)^{k_j}
//! ```
//!
//! where `s_j(x)` are the barycentric coordinates of `x` and `R(k / n)` the
//! lattice (control) points. The operator is positive, preserves constants
//! and has norm one; `B_n f -> f` uniformly, at rate `O(1/n)` for
//! exponentials `exp(a · x)`.
//!
//! Modules, bottom-up:
//!
//! * [`geometry`]: simplices and the barycentric maps.
//! * [`lattice`]: multi-index sets, multinomials, control points.
//! * [`operator`]: basis functions, control nets, direct and de Casteljau
//!   evaluation, sup-norm estimates on grids.
//! * [`expmodel`]: exponential polynomials, the closed-form image of
//!   `exp(a · x)` and its error constants.
//! * [`harness`]: convergence sweeps, rate fits, bound checks and scaling
//!   studies with CSV output.
//!
//! ```
//! use bezier_simplex::{ControlNet, Evaluator, Simplex};
//!
//! let triangle = Simplex::standard(2)?;
//! let net = ControlNet::sample(&triangle, 8, |x| (x[0] + x[1]).exp())?;
//! let approx = net.eval(&[0.25, 0.25], Evaluator::DeCasteljau)?;
//! assert!((approx - 0.5f64.exp()).abs() < 0.05);
//! # Ok::<(), bezier_simplex::Error>(())
//! ```

pub mod error;
pub mod expmodel;
pub mod geometry;
pub mod harness;
pub mod lattice;
pub mod operator;

pub use error::{Error, Result};
pub use expmodel::{ErrorBudget, ExpPolynomial, ExpTerm};
pub use geometry::{BarycentricPoint, Point, Simplex};
pub use lattice::{ControlPointSet, MultiIndex};
pub use operator::{ControlNet, Evaluator};
