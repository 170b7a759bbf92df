//! The Bernstein operator on a simplex.
//!
//! A [`ControlNet`] stores the samples `c_k = f(R(k/n))` of a function at
//! the control points. Two evaluators compute
//! `B_n(f; x) = Σ_k c_k B_k^n(x)`:
//!
//! * [`Evaluator::Direct`] sums the basis values in log space. It is the
//!   reference.
//! * [`Evaluator::DeCasteljau`] reduces the net by `n` rounds of convex
//!   combinations with the barycentric weights of `x`. Every intermediate
//!   value is a convex combination of coefficients, so it never overflows
//!   and it is the default.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BarycentricPoint, Point, Simplex};
use crate::lattice::{self, control_points, rank, Lattice, MultiIndex};

/// Which evaluator computes `B_n(f; x)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluator {
    Direct,
    #[default]
    DeCasteljau,
}

impl Evaluator {
    pub fn as_str(self) -> &'static str {
        match self {
            Evaluator::Direct => "direct",
            Evaluator::DeCasteljau => "decasteljau",
        }
    }
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Evaluator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Evaluator::Direct),
            "decasteljau" | "de-casteljau" | "de_casteljau" => Ok(Evaluator::DeCasteljau),
            other => Err(Error::config(
                "evaluator",
                format!("unknown evaluator `{other}` (expected direct or decasteljau)"),
            )),
        }
    }
}

/// `Π t_j^{k_j}` times the multinomial, from non-negative weights and their
/// logs. A zero weight with `k_j > 0` makes the value exactly zero.
fn basis_from_logs(k: &[u32], log_multinomial: f64, log_weights: &[f64]) -> f64 {
    let mut acc = log_multinomial;
    for (&kj, &lw) in k.iter().zip(log_weights) {
        if kj > 0 {
            if lw == f64::NEG_INFINITY {
                return 0.0;
            }
            acc += kj as f64 * lw;
        }
    }
    acc.exp()
}

fn log_weights(t: &[f64]) -> Vec<f64> {
    t.iter()
        .map(|&w| if w > 0.0 { w.ln() } else { f64::NEG_INFINITY })
        .collect()
}

/// `B_k^n(x) = binom(n, k) Π s_j(x)^{k_j}`.
pub fn basis_value(simplex: &Simplex, k: &MultiIndex, x: &[f64]) -> Result<f64> {
    if k.dim() != simplex.dim() {
        return Err(Error::DimensionMismatch {
            what: "multi-index",
            expected: simplex.dim() + 1,
            found: k.entries().len(),
        });
    }
    let t = simplex.barycentric(x)?.clamped()?;
    Ok(basis_from_logs(
        k.entries(),
        lattice::multinomial_log(k),
        &log_weights(&t),
    ))
}

/// Every `B_k^n(x)` for `k` in `M_n`, in lattice order.
pub fn basis_values(simplex: &Simplex, n: u32, x: &[f64]) -> Result<Vec<(MultiIndex, f64)>> {
    let lattice = Lattice::new(n, simplex.dim())?;
    let t = simplex.barycentric(x)?.clamped()?;
    let logs = log_weights(&t);
    Ok(lattice
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let value = basis_from_logs(k, lattice.log_multinomial(i), &logs);
            (MultiIndex::new(k.to_vec()).expect("lattice index"), value)
        })
        .collect())
}

/// Index tables for de Casteljau: for each level `r < n` and each `k` in
/// `M_r`, the positions of `k + e_0, ..., k + e_D` in `M_{r+1}`.
#[derive(Debug)]
struct DeCasteljauPlan {
    levels: Vec<Vec<u32>>,
}

impl DeCasteljauPlan {
    fn new(n: u32, dim: usize) -> Self {
        let levels = (0..n)
            .map(|r| {
                let mut table = Vec::with_capacity(lattice::lattice_size(r, dim) as usize * (dim + 1));
                for k in lattice::MultiIndices::new(r, dim) {
                    let mut up = k.entries().to_vec();
                    for j in 0..=dim {
                        up[j] += 1;
                        table.push(rank(&up) as u32);
                        up[j] -= 1;
                    }
                }
                table
            })
            .collect();
        DeCasteljauPlan { levels }
    }
}

/// Function samples at the control points of order `n`, in lattice order.
#[derive(Debug, Clone)]
pub struct ControlNet<'s> {
    simplex: &'s Simplex,
    lattice: Arc<Lattice>,
    coeffs: Vec<f64>,
    plan: Arc<OnceLock<DeCasteljauPlan>>,
}

impl<'s> ControlNet<'s> {
    /// Wraps coefficients given in lattice order.
    pub fn from_coeffs(simplex: &'s Simplex, n: u32, coeffs: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(n));
        }
        let lattice = Lattice::new(n, simplex.dim())?;
        if coeffs.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                what: "control net",
                expected: lattice.len(),
                found: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("control net coefficients"));
        }
        Ok(ControlNet {
            simplex,
            lattice: Arc::new(lattice),
            coeffs,
            plan: Arc::default(),
        })
    }

    /// Samples `f` at every control point.
    pub fn sample<F>(simplex: &'s Simplex, n: u32, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::try_sample(simplex, n, |x| Ok::<_, std::convert::Infallible>(f(x)))
    }

    /// Samples a fallible `f`; the first failure is reported with the
    /// offending control point. Non-finite samples are failures too.
    pub fn try_sample<F, E>(simplex: &'s Simplex, n: u32, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<f64, E>,
        E: fmt::Display,
    {
        let points = control_points(simplex, n)?;
        let coeffs = points
            .points()
            .map(|p| match f(p) {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(v) => Err(Error::FunctionEval {
                    point: p.to_vec(),
                    message: format!("non-finite value {v}"),
                }),
                Err(e) => Err(Error::FunctionEval {
                    point: p.to_vec(),
                    message: e.to_string(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(simplex, n, coeffs)
    }

    pub fn simplex(&self) -> &'s Simplex {
        self.simplex
    }

    pub fn order(&self) -> u32 {
        self.lattice.order()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Coefficient attached to `k`.
    pub fn coeff(&self, k: &MultiIndex) -> Option<f64> {
        self.lattice.position(k).map(|i| self.coeffs[i])
    }

    /// `max_k |c_k|`.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `Σ_k c_k B_k^n(x)` by direct summation.
    pub fn eval_direct(&self, x: &[f64]) -> Result<f64> {
        let t = self.simplex.barycentric(x)?.clamped()?;
        let logs = log_weights(&t);
        Ok(self
            .lattice
            .iter()
            .enumerate()
            .map(|(i, k)| self.coeffs[i] * basis_from_logs(k, self.lattice.log_multinomial(i), &logs))
            .sum())
    }

    /// De Casteljau reduction at barycentric weights `t`.
    pub fn eval_de_casteljau(&self, t: &BarycentricPoint) -> Result<f64> {
        let dim = self.simplex.dim();
        if t.dim() != dim {
            return Err(Error::DimensionMismatch {
                what: "barycentric weights",
                expected: dim + 1,
                found: t.weights().len(),
            });
        }
        let w = t.weights();
        let plan = self
            .plan
            .get_or_init(|| DeCasteljauPlan::new(self.order(), dim));
        let mut current = self.coeffs.clone();
        let mut next = Vec::with_capacity(current.len());
        for table in plan.levels.iter().rev() {
            next.clear();
            next.extend(table.chunks_exact(dim + 1).map(|up| {
                up.iter()
                    .zip(w)
                    .map(|(&i, &wj)| wj * current[i as usize])
                    .sum::<f64>()
            }));
            std::mem::swap(&mut current, &mut next);
        }
        Ok(current[0])
    }

    /// `B_n(f; x)` with the chosen evaluator.
    pub fn eval(&self, x: &[f64], evaluator: Evaluator) -> Result<f64> {
        match evaluator {
            Evaluator::Direct => self.eval_direct(x),
            Evaluator::DeCasteljau => {
                let t = BarycentricPoint::from_raw(self.simplex.barycentric(x)?.clamped()?);
                self.eval_de_casteljau(&t)
            }
        }
    }

    /// CSV with columns `k_0..k_D, c`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let dim = self.simplex.dim();
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = (0..=dim)
            .map(|j| format!("k_{j}"))
            .chain(std::iter::once("c".to_string()))
            .collect();
        w.write_record(&header)?;
        for (k, c) in self.lattice.iter().zip(&self.coeffs) {
            let record: Vec<String> = k
                .iter()
                .map(u32::to_string)
                .chain(std::iter::once(format!("{c:e}")))
                .collect();
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }

    /// Reads a net written by [`ControlNet::write_csv`]. Rows may come in any
    /// order; every index of `M_n` must appear exactly once.
    pub fn read_csv<R: Read>(simplex: &'s Simplex, input: R) -> Result<Self> {
        let dim = simplex.dim();
        let mut reader = csv::Reader::from_reader(input);
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            if record.len() != dim + 2 {
                return Err(Error::DimensionMismatch {
                    what: "control net CSV row",
                    expected: dim + 2,
                    found: record.len(),
                });
            }
            let k = (0..=dim)
                .map(|j| record[j].trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::config("control net CSV", e.to_string()))?;
            let c: f64 = record[dim + 1]
                .trim()
                .parse()
                .map_err(|e: std::num::ParseFloatError| Error::config("control net CSV", e.to_string()))?;
            rows.push((k, c));
        }
        let n = rows
            .first()
            .map(|(k, _)| k.iter().sum::<u32>())
            .ok_or_else(|| Error::config("control net CSV", "no rows"))?;
        let size = lattice::lattice_size(n, dim);
        if rows.len() as u128 != size {
            return Err(Error::DimensionMismatch {
                what: "control net",
                expected: size as usize,
                found: rows.len(),
            });
        }
        let mut coeffs = vec![f64::NAN; rows.len()];
        for (k, c) in rows {
            if k.iter().sum::<u32>() != n {
                return Err(Error::config("control net CSV", "rows mix different orders"));
            }
            let slot = &mut coeffs[rank(&k)];
            if !slot.is_nan() {
                return Err(Error::config("control net CSV", "duplicate multi-index"));
            }
            *slot = c;
        }
        Self::from_coeffs(simplex, n, coeffs)
    }
}

/// Barycentric lattice of resolution `m` (the control points of order `m`),
/// used as the grid for sup-norm estimates.
pub fn barycentric_grid(simplex: &Simplex, m: u32) -> Result<Vec<Point>> {
    Ok(control_points(simplex, m)?.into_points())
}

/// Default grid resolution by dimension: 50 up to `D = 2`, 15 for `D = 3`,
/// 8 beyond.
pub fn default_grid_resolution(dim: usize) -> u32 {
    match dim {
        0..=2 => 50,
        3 => 15,
        _ => 8,
    }
}

/// `max_x |B_n(f; x) - f(x)|` over `grid`. A lower bound on the true sup.
pub fn operator_sup_error<F>(
    net: &ControlNet<'_>,
    f: F,
    grid: &[Point],
    evaluator: Evaluator,
) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    grid.par_iter()
        .map(|x| Ok((net.eval(x, evaluator)? - f(x)?).abs()))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// `max_x |B_n(f; x)|` over `grid`.
pub fn sup_norm_on_grid(net: &ControlNet<'_>, grid: &[Point], evaluator: Evaluator) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    grid.par_iter()
        .map(|x| Ok(net.eval(x, evaluator)?.abs()))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}
