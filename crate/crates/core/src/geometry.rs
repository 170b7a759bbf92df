//! Simplices in `R^D` and the barycentric coordinate maps.
//!
//! A [`Simplex`] owns `D + 1` vertices `x_0, ..., x_D`. The map
//! `S: x -> (s_0(x), ..., s_D(x))` solves `x = Σ s_i x_i` with `Σ s_i = 1`;
//! its inverse `R: t -> Σ t_i x_i` sends the standard simplex back onto the
//! geometric one. Both maps run over all `D + 1` vertices.

use std::fmt;
use std::ops::Deref;

use nalgebra::{DMatrix, DVector, Dyn, LU};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack on `Σ t_i = 1` when admitting a [`BarycentricPoint`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Absolute slack on `t_i >= 0` when admitting a [`BarycentricPoint`].
/// Lattice points generated in floating point land on faces only up to
/// rounding.
pub const COORDINATE_TOLERANCE: f64 = 1e-9;

/// Relative threshold on `|det| / diameter^D` below which a simplex is
/// rejected as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

// `contains` compares against `-tol - ROUNDING_SLACK` so that vertices and
// centroids pass at `tol = 0` despite the solve's last-bit noise.
const ROUNDING_SLACK: f64 = 64.0 * f64::EPSILON;

/// A point of `R^D` with finite coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Barycentric weights `(t_0, ..., t_D)` with `Σ t_i = 1`.
///
/// Built through [`BarycentricPoint::new`] the weights are also checked to be
/// non-negative (up to [`COORDINATE_TOLERANCE`]). [`Simplex::barycentric`]
/// returns signed weights for points outside the simplex; use
/// [`BarycentricPoint::is_inside`] to test containment.
#[derive(Clone, Debug, PartialEq)]
pub struct BarycentricPoint {
    weights: Vec<f64>,
}

impl BarycentricPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidBarycentric(format!(
                "need at least 2 weights, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("barycentric weights"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidBarycentric(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, &w)| w < -COORDINATE_TOLERANCE)
        {
            return Err(Error::NegativeWeight { index, value });
        }
        Ok(BarycentricPoint { weights })
    }

    pub(crate) fn from_raw(weights: Vec<f64>) -> Self {
        BarycentricPoint { weights }
    }

    /// The point `(1/(D+1), ..., 1/(D+1))`.
    pub fn centroid(dim: usize) -> Self {
        BarycentricPoint {
            weights: vec![1.0 / (dim + 1) as f64; dim + 1],
        }
    }

    /// The unit weight vector `e_j`, i.e. vertex `x_j`.
    pub fn vertex(dim: usize, j: usize) -> Self {
        let mut weights = vec![0.0; dim + 1];
        weights[j] = 1.0;
        BarycentricPoint { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn is_inside(&self, tol: f64) -> bool {
        self.weights.iter().all(|&w| w >= -tol - ROUNDING_SLACK)
    }

    /// First weight below `-tol`, if any.
    pub(crate) fn first_negative(&self, tol: f64) -> Option<(usize, f64)> {
        self.weights
            .iter()
            .copied()
            .enumerate()
            .find(|&(_, w)| w < -tol)
    }

    /// Weights with tolerated negatives clamped to zero and renormalized.
    /// Errors if some weight is below `-COORDINATE_TOLERANCE`.
    pub(crate) fn clamped(&self) -> Result<Vec<f64>> {
        if let Some((index, value)) = self.first_negative(COORDINATE_TOLERANCE) {
            return Err(Error::NegativeWeight { index, value });
        }
        if self.weights.iter().all(|&w| w >= 0.0) {
            return Ok(self.weights.clone());
        }
        let mut w: Vec<f64> = self.weights.iter().map(|&w| w.max(0.0)).collect();
        let sum: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= sum);
        Ok(w)
    }
}

/// A non-degenerate closed simplex in `R^D`.
///
/// Vertex order is fixed at construction: weight `t_j` and multi-index entry
/// `k_j` always refer to vertex `x_j`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "SimplexSpec", into = "SimplexSpec")]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
    // LU of the edge matrix [x_1 - x_0, ..., x_D - x_0]. Its determinant
    // equals (up to sign) that of the augmented matrix with rows (1, x_i).
    edges: LU<f64, Dyn, Dyn>,
    det: f64,
    diameter: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplexSpec {
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<SimplexSpec> for Simplex {
    type Error = Error;

    fn try_from(spec: SimplexSpec) -> Result<Self> {
        Simplex::new(spec.vertices)
    }
}

impl From<Simplex> for SimplexSpec {
    fn from(s: Simplex) -> Self {
        SimplexSpec {
            vertices: s.vertices,
        }
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Simplex")
            .field("vertices", &self.vertices)
            .field("det", &self.det)
            .finish()
    }
}

impl PartialEq for Simplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Simplex {
    /// Validates `D + 1` vertices of length `D` and factorizes the
    /// barycentric system once.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                what: "simplex vertex",
                expected: 1,
                found: 0,
            });
        }
        if vertices.len() != dim + 1 {
            return Err(Error::DimensionMismatch {
                what: "simplex vertex list",
                expected: dim + 1,
                found: vertices.len(),
            });
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                what: "simplex vertex",
                expected: dim,
                found: v.len(),
            });
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("simplex vertices"));
        }

        let mut diameter: f64 = 0.0;
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                diameter = diameter.max(distance(a, b));
            }
        }

        let origin = &vertices[0];
        let edges = DMatrix::from_fn(dim, dim, |r, c| vertices[c + 1][r] - origin[r]).lu();
        let det = edges.determinant();
        let threshold = DEGENERACY_TOLERANCE * diameter.powi(dim as i32);
        if !(det.abs() > threshold) {
            return Err(Error::DegenerateSimplex { det, threshold });
        }

        Ok(Simplex {
            vertices,
            edges,
            det,
            diameter,
        })
    }

    /// The standard simplex `{0, e_1, ..., e_D}` of `R^D`.
    pub fn standard(dim: usize) -> Result<Self> {
        let mut vertices = vec![vec![0.0; dim]];
        for i in 0..dim {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            vertices.push(v);
        }
        Simplex::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, j: usize) -> &[f64] {
        &self.vertices[j]
    }

    /// Determinant of the edge matrix `[x_1 - x_0, ..., x_D - x_0]`.
    pub fn determinant(&self) -> f64 {
        self.det
    }

    /// Largest Euclidean distance between two vertices.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn centroid(&self) -> Point {
        let w = 1.0 / self.vertices.len() as f64;
        let mut c = vec![0.0; self.dim()];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += w * vi;
            }
        }
        Point(c)
    }

    /// The simplex with every vertex multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Simplex::new(
            self.vertices
                .iter()
                .map(|v| v.iter().map(|c| c * factor).collect())
                .collect(),
        )
    }

    /// `S(x)`: barycentric coordinates of `x`. Weights are signed; points
    /// outside the simplex get negative entries.
    pub fn barycentric(&self, x: &[f64]) -> Result<BarycentricPoint> {
        self.check_point(x)?;
        let origin = &self.vertices[0];
        let rhs = DVector::from_iterator(self.dim(), x.iter().zip(origin).map(|(a, b)| a - b));
        let lambda = self
            .edges
            .solve(&rhs)
            .expect("edge matrix of a validated simplex is invertible");
        let mut weights = Vec::with_capacity(self.dim() + 1);
        weights.push(1.0 - lambda.iter().sum::<f64>());
        weights.extend(lambda.iter());
        Ok(BarycentricPoint::from_raw(weights))
    }

    /// `R(t) = Σ t_i x_i`.
    pub fn point_from_barycentric(&self, t: &BarycentricPoint) -> Result<Point> {
        self.point_from_weights(t.weights())
    }

    pub(crate) fn point_from_weights(&self, t: &[f64]) -> Result<Point> {
        if t.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch {
                what: "barycentric weights",
                expected: self.vertices.len(),
                found: t.len(),
            });
        }
        let mut x = vec![0.0; self.dim()];
        for (w, v) in t.iter().zip(&self.vertices) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += w * vi;
            }
        }
        Ok(Point(x))
    }

    /// True iff every barycentric weight of `x` is at least `-tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.barycentric(x)?.is_inside(tol))
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "point",
                expected: self.dim(),
                found: x.len(),
            });
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
