//! Exponentials `exp(a · x)`, exponential polynomials, and the Bernstein
//! image of an exponential in closed form.
//!
//! Sampling `exp(a · x)` at the control points and applying the multinomial
//! theorem collapses the operator sum into
//!
//! ```text
//! e_{a,n}(x) = [ Σ_j s_j(x) exp(a · x_j / n) ]^n
//! ```
//!
//! with `j` running over all `D + 1` vertices. Writing the bracket as
//! `1 + a · x / n + r_n(x)` gives the residual `r_n`, bounded by
//! `K1 / n^2` where `K1 = ½ Σ_j (a · x_j)^2 exp(a · x_j / n)`. The
//! relative error of `e_{a,n}` is then of order `K / n` with
//! `K = C + ½ max_T (a · x)` and `C` an `n`-independent majorant of `K1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dot, Point, Simplex};

/// Largest exponent evaluated before reporting [`Error::Overflow`].
pub const EXPONENT_GUARD: f64 = 700.0;

fn guarded_exp(z: f64) -> Result<f64> {
    if z > EXPONENT_GUARD || z.is_nan() {
        return Err(Error::Overflow { exponent: z });
    }
    Ok(z.exp())
}

fn check_direction(simplex: &Simplex, a: &[f64]) -> Result<()> {
    if a.len() != simplex.dim() {
        return Err(Error::DimensionMismatch {
            what: "direction",
            expected: simplex.dim(),
            found: a.len(),
        });
    }
    if a.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("direction"));
    }
    Ok(())
}

/// `c · exp(a · x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTerm {
    pub c: f64,
    pub a: Vec<f64>,
}

impl ExpTerm {
    pub fn new(c: f64, a: Vec<f64>) -> Self {
        ExpTerm { c, a }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.a.len() {
            return Err(Error::DimensionMismatch {
                what: "point",
                expected: self.a.len(),
                found: x.len(),
            });
        }
        Ok(self.c * guarded_exp(dot(&self.a, x))?)
    }
}

/// `Σ_i c_i exp(a_i · x)` with at least one term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpPolynomialSpec", into = "ExpPolynomialSpec")]
pub struct ExpPolynomial {
    terms: Vec<ExpTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpPolynomialSpec {
    terms: Vec<ExpTerm>,
}

impl TryFrom<ExpPolynomialSpec> for ExpPolynomial {
    type Error = Error;

    fn try_from(spec: ExpPolynomialSpec) -> Result<Self> {
        ExpPolynomial::new(spec.terms)
    }
}

impl From<ExpPolynomial> for ExpPolynomialSpec {
    fn from(p: ExpPolynomial) -> Self {
        ExpPolynomialSpec { terms: p.terms }
    }
}

impl ExpPolynomial {
    pub fn new(terms: Vec<ExpTerm>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::config("terms", "an exponential polynomial needs at least one term"))?;
        let dim = first.a.len();
        if dim == 0 {
            return Err(Error::config("terms", "directions must be non-empty"));
        }
        for t in &terms {
            if t.a.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: "exp-term direction",
                    expected: dim,
                    found: t.a.len(),
                });
            }
            if !t.c.is_finite() || t.a.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("exp-term"));
            }
        }
        Ok(ExpPolynomial { terms })
    }

    pub fn single(c: f64, a: Vec<f64>) -> Result<Self> {
        ExpPolynomial::new(vec![ExpTerm::new(c, a)])
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.terms[0].a.len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }
}

/// `e_{a,n}(x) = [Σ_j s_j(x) exp(a · x_j / n)]^n`.
pub fn bezier_exp_closed_form(simplex: &Simplex, n: u32, a: &[f64], x: &[f64]) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    check_direction(simplex, a)?;
    let t = simplex.barycentric(x)?.clamped()?;
    let nf = n as f64;
    // Σ_j s_j exp(u_j/n) = 1 + Σ_j s_j expm1(u_j/n), since Σ s_j = 1.
    let mut excess = 0.0;
    for (w, v) in t.iter().zip(simplex.vertices()) {
        let u = dot(a, v);
        guarded_exp(u / nf)?;
        excess += w * (u / nf).exp_m1();
    }
    guarded_exp(nf * excess.ln_1p())
}

/// `r_n(x) = Σ_j s_j(x) exp(a · x_j / n) - 1 - a · x / n`.
///
/// Evaluated as `Σ_j s_j (expm1(u_j/n) - u_j/n)` with `u_j = a · x_j`, which
/// is the same quantity because `a · x = Σ_j s_j u_j`.
pub fn residual_rn(simplex: &Simplex, n: u32, a: &[f64], x: &[f64]) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    check_direction(simplex, a)?;
    let t = simplex.barycentric(x)?.clamped()?;
    let nf = n as f64;
    let mut r = 0.0;
    for (w, v) in t.iter().zip(simplex.vertices()) {
        let z = dot(a, v) / nf;
        guarded_exp(z)?;
        r += w * expm1_minus_linear(z);
    }
    Ok(r)
}

/// `exp(z) - 1 - z`, accurate for small `|z|`.
fn expm1_minus_linear(z: f64) -> f64 {
    if z.abs() < 1e-2 {
        // z^2/2 + z^3/6 + ... through z^8
        let mut term = z * z / 2.0;
        let mut sum = term;
        for k in 3..=8 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        z.exp_m1() - z
    }
}

/// The constants of the exponential error estimate at order `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub n: u32,
    /// `K1 = ½ Σ_j (a · x_j)^2 exp(a · x_j / n)`.
    pub k1: f64,
    /// `C = ½ Σ_j (a · x_j)^2 exp(max(0, a · x_j))`, at least `K1` for every `n >= 1`.
    pub c: f64,
    /// `max_T (a · x) = max_j a · x_j`.
    pub max_linear: f64,
    /// `K = C + ½ max_T (a · x)`.
    pub k: f64,
    /// `K / n`.
    pub predicted_relative_bound: f64,
}

pub fn error_budget(simplex: &Simplex, a: &[f64], n: u32) -> Result<ErrorBudget> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    check_direction(simplex, a)?;
    let nf = n as f64;
    let mut k1 = 0.0;
    let mut c = 0.0;
    let mut max_linear = f64::NEG_INFINITY;
    for v in simplex.vertices() {
        let u = dot(a, v);
        k1 += 0.5 * u * u * guarded_exp(u / nf)?;
        c += 0.5 * u * u * guarded_exp(u.max(0.0))?;
        max_linear = max_linear.max(u);
    }
    let k = c + 0.5 * max_linear;
    Ok(ErrorBudget {
        n,
        k1,
        c,
        max_linear,
        k,
        predicted_relative_bound: k / nf,
    })
}

/// Observed sup relative error of `e_{a,n}` on a grid against `K / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelativeErrorReport {
    pub n: u32,
    pub observed: f64,
    pub predicted: f64,
    /// `observed / predicted`; zero when nothing was observed.
    pub ratio: f64,
}

/// `observed / predicted` with `0 / 0 = 0`. A positive observation
/// against a non-positive prediction is an infinite ratio.
pub fn bound_ratio(observed: f64, predicted: f64) -> f64 {
    if observed == 0.0 {
        0.0
    } else if predicted > 0.0 {
        observed / predicted
    } else {
        f64::INFINITY
    }
}

pub fn relative_error_report(
    simplex: &Simplex,
    a: &[f64],
    n: u32,
    grid: &[Point],
) -> Result<RelativeErrorReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let budget = error_budget(simplex, a, n)?;
    let observed = grid
        .par_iter()
        .map(|x| {
            let exact = guarded_exp(dot(a, x))?;
            let approx = bezier_exp_closed_form(simplex, n, a, x)?;
            Ok::<_, Error>(((approx - exact) / exact).abs())
        })
        .try_reduce(|| 0.0, |p, q| Ok(p.max(q)))?;
    Ok(RelativeErrorReport {
        n,
        observed,
        predicted: budget.predicted_relative_bound,
        ratio: bound_ratio(observed, budget.predicted_relative_bound),
    })
}

/// `B_n P(x) = Σ_i c_i e_{a_i,n}(x)`, by linearity of the operator.
pub fn bezier_of_exp_polynomial(
    simplex: &Simplex,
    n: u32,
    p: &ExpPolynomial,
    x: &[f64],
) -> Result<f64> {
    p.terms()
        .iter()
        .map(|t| Ok(t.c * bezier_exp_closed_form(simplex, n, &t.a, x)?))
        .sum()
}
