#![allow(dead_code)]

use bezier_simplex::{BarycentricPoint, Point, Simplex};
use rand::Rng;

/// Vertices uniform in `[-1, 1]^D`, redrawn until the simplex is reasonably
/// shaped (volume not tiny against the diameter).
pub fn random_simplex<R: Rng>(rng: &mut R, dim: usize) -> Simplex {
    loop {
        let vertices: Vec<Vec<f64>> = (0..=dim)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        if let Ok(s) = Simplex::new(vertices) {
            if s.determinant().abs() > 1e-2 * s.diameter().powi(dim as i32) {
                return s;
            }
        }
    }
}

/// Weights from normalized exponentials: uniform on the open simplex.
pub fn random_weights<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..=dim)
        .map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-12)
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

pub fn random_interior_point<R: Rng>(rng: &mut R, simplex: &Simplex) -> Point {
    let t = BarycentricPoint::new(random_weights(rng, simplex.dim())).unwrap();
    simplex.point_from_barycentric(&t).unwrap()
}

/// Uniform in the ball of radius `radius`.
pub fn random_direction<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if norm2 <= 1.0 && norm2 > 1e-6 {
            return v.into_iter().map(|x| x * radius).collect();
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
