//! Convergence experiments over the Bernstein operator.
//!
//! Every sweep evaluates on a barycentric lattice grid; the maximum over the
//! grid is a lower bound on the true sup norm. Results are reduced by max
//! and ordered by `n`, so they do not depend on the thread schedule.

mod config;
mod functions;
mod output;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expmodel::{bound_ratio, error_budget, relative_error_report};
use crate::geometry::Simplex;
use crate::operator::{barycentric_grid, ControlNet, Evaluator};

pub use config::{load_simplex, Experiment, ExperimentConfig};
pub use functions::{FunctionSpec, TargetFunction};
pub use output::{
    emit_csv, read_convergence_csv, write_bound_check_csv, write_convergence_csv,
    write_scaling_csv, RunMetadata,
};

/// Errors below this are treated as exact reproduction and left out of
/// rate fits.
pub const NOISE_FLOOR: f64 = 1e-13;

/// Bound violations are only flagged from this order on.
pub const BOUND_CHECK_MIN_ORDER: u32 = 40;

pub const DEFAULT_BOUND_MARGIN: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u32,
    /// `max_x |B_n f(x) - f(x)|` over the grid.
    pub sup_error: f64,
    /// `max_x |B_n f(x) - f(x)| / |f(x)|` over grid points where `f(x) != 0`.
    pub sup_relative_error: f64,
    /// `K / n`, for a single exponential only.
    pub predicted_k_over_n: Option<f64>,
    pub evaluator: Evaluator,
    pub wall_time_ms: f64,
}

/// Least-squares fit of `ln(error) = slope · ln(n) + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn run_convergence(experiment: &Experiment, evaluator: Evaluator) -> Result<Vec<ConvergenceRow>> {
    let simplex = &experiment.simplex;
    let f = &experiment.function;
    let grid = barycentric_grid(simplex, experiment.grid)?;
    let exact = grid
        .iter()
        .map(|x| f.value(x))
        .collect::<Result<Vec<_>>>()?;
    let direction = f.single_exponential().map(|t| t.a.clone());

    experiment
        .n_values
        .iter()
        .map(|&n| {
            let start = Instant::now();
            let net = ControlNet::try_sample(simplex, n, |x| f.value(x))?;
            let (sup_error, sup_relative_error) = grid
                .par_iter()
                .zip(exact.par_iter())
                .map(|(x, &fx)| {
                    let err = (net.eval(x, evaluator)? - fx).abs();
                    let rel = if fx != 0.0 { err / fx.abs() } else { 0.0 };
                    Ok::<_, Error>((err, rel))
                })
                .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            let predicted_k_over_n = match &direction {
                Some(a) => Some(error_budget(simplex, a, n)?.predicted_relative_bound),
                None => None,
            };
            Ok(ConvergenceRow {
                n,
                sup_error,
                sup_relative_error,
                predicted_k_over_n,
                evaluator,
                wall_time_ms,
            })
        })
        .collect()
}

/// Fits the decay of `sup_error` against `n`.
pub fn fit_rate(rows: &[ConvergenceRow]) -> Result<RateFit> {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.sup_error)).collect();
    fit_power_law(&points)
}

/// Fits `error ≈ exp(intercept) · n^slope` to `(n, error)` pairs, ignoring
/// errors under [`NOISE_FLOOR`].
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(points.len()));
    }
    let kept: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, e)| e >= NOISE_FLOOR)
        .map(|&(n, e)| (n.ln(), e.ln()))
        .collect();
    if kept.is_empty() {
        return Err(Error::ZeroError);
    }
    if kept.len() < 3 {
        return Err(Error::InsufficientData(kept.len()));
    }
    let m = kept.len() as f64;
    let mean_x = kept.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = kept.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = kept.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(1));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckRow {
    pub n: u32,
    pub observed_relative_error: f64,
    pub k: f64,
    pub predicted_k_over_n: f64,
    pub ratio: f64,
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub margin: f64,
    pub rows: Vec<BoundCheckRow>,
}

impl BoundCheckReport {
    pub fn violated(&self) -> bool {
        self.rows.iter().any(|r| r.violation)
    }
}

/// Compares the operator's sup relative error on a single exponential with
/// `K / n`. Rows with `n >= 40` and `ratio > 1 + margin` are violations.
/// Errors under [`NOISE_FLOOR`] give a ratio of zero.
pub fn run_bound_check(
    experiment: &Experiment,
    margin: f64,
    evaluator: Evaluator,
) -> Result<BoundCheckReport> {
    if !(margin >= 0.0) {
        return Err(Error::config("margin", format!("must be >= 0, got {margin}")));
    }
    let term = experiment
        .function
        .single_exponential()
        .ok_or_else(|| Error::config("function", "bound-check needs a single exponential term"))?;
    let rows = run_convergence(experiment, evaluator)?
        .into_iter()
        .map(|row| {
            let budget = error_budget(&experiment.simplex, &term.a, row.n)?;
            // Rounding-level errors count as exact, which matters when K = 0.
            let observed = if row.sup_relative_error < NOISE_FLOOR { 0.0 } else { row.sup_relative_error };
            let ratio = bound_ratio(observed, budget.predicted_relative_bound);
            Ok(BoundCheckRow {
                n: row.n,
                observed_relative_error: row.sup_relative_error,
                k: budget.k,
                predicted_k_over_n: budget.predicted_relative_bound,
                ratio,
                violation: row.n >= BOUND_CHECK_MIN_ORDER && ratio > 1.0 + margin,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCheckReport { margin, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub scale: f64,
    pub diameter: f64,
    pub direction: Vec<f64>,
    pub direction_norm: f64,
    /// `diameter · |a|`.
    pub d_times_k: f64,
    pub n: u32,
    pub sup_relative_error: f64,
}

/// Sup relative error of the Bernstein image of `exp(a · x)` at order `n`
/// for every `(scale, a)` pair, with the simplex's vertices multiplied by
/// `scale`. Rows are scale-major.
pub fn run_scaling_study(
    base: &Simplex,
    scales: &[f64],
    directions: &[Vec<f64>],
    n: u32,
    grid: u32,
) -> Result<Vec<ScalingRow>> {
    if let Some(s) = scales.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
        return Err(Error::config("scales", format!("scale factors must be > 0, got {s}")));
    }
    if directions.is_empty() {
        return Err(Error::config("directions", "at least one direction is needed"));
    }
    let mut rows = Vec::with_capacity(scales.len() * directions.len());
    for &scale in scales {
        let simplex = base.scaled(scale)?;
        let points = barycentric_grid(&simplex, grid)?;
        for a in directions {
            let report = relative_error_report(&simplex, a, n, &points)?;
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            rows.push(ScalingRow {
                scale,
                diameter: simplex.diameter(),
                direction: a.clone(),
                direction_norm: norm,
                d_times_k: simplex.diameter() * norm,
                n,
                sup_relative_error: report.observed,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rows_from(errors: &[(u32, f64)]) -> Vec<ConvergenceRow> {
        errors
            .iter()
            .map(|&(n, e)| ConvergenceRow {
                n,
                sup_error: e,
                sup_relative_error: e,
                predicted_k_over_n: None,
                evaluator: Evaluator::Direct,
                wall_time_ms: 0.0,
            })
            .collect()
    }

    #[test]
    fn fit_exact_power_laws() {
        let ns = [10u32, 20, 40, 80, 160];
        let first: Vec<(u32, f64)> = ns.iter().map(|&n| (n, 3.0 / n as f64)).collect();
        let fit = fit_rate(&rows_from(&first)).unwrap();
        assert_abs_diff_eq!(fit.slope, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.intercept, 3f64.ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
        let second: Vec<(u32, f64)> = ns.iter().map(|&n| (n, 0.5 / (n * n) as f64)).collect();
        assert_abs_diff_eq!(fit_rate(&rows_from(&second)).unwrap().slope, -2.0, epsilon = 1e-9);
    }

    #[test]
    fn fit_needs_data() {
        assert!(matches!(
            fit_rate(&rows_from(&[(1, 0.1), (2, 0.05)])),
            Err(Error::InsufficientData(2))
        ));
        assert!(matches!(
            fit_rate(&rows_from(&[(1, 0.0), (2, 1e-15), (4, 0.0)])),
            Err(Error::ZeroError)
        ));
        assert!(matches!(
            fit_rate(&rows_from(&[(1, 0.1), (2, 1e-15), (4, 0.0)])),
            Err(Error::InsufficientData(1))
        ));
    }

    #[test]
    fn fit_skips_noise_floor() {
        let fit = fit_rate(&rows_from(&[(1, 1.0), (2, 0.5), (4, 0.25), (8, 1e-14)])).unwrap();
        assert_abs_diff_eq!(fit.slope, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn scaling_rejects_bad_scales() {
        let s = Simplex::standard(2).unwrap();
        let dirs = vec![vec![1.0, 1.0]];
        assert!(run_scaling_study(&s, &[1.0, 0.0], &dirs, 10, 5).is_err());
        assert!(run_scaling_study(&s, &[1.0, -2.0], &dirs, 10, 5).is_err());
        assert!(run_scaling_study(&s, &[1.0], &[], 10, 5).is_err());
    }

    #[test]
    fn shrinking_simplex_drives_error_to_zero() {
        let s = Simplex::standard(2).unwrap();
        let rows = run_scaling_study(&s, &[1.0, 0.1, 0.01, 0.001], &[vec![1.0, 1.0]], 20, 10).unwrap();
        let errs: Vec<f64> = rows.iter().map(|r| r.sup_relative_error).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        assert!(errs[3] < 1e-7);
    }
}
