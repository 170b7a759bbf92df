use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expmodel::{ExpPolynomial, ExpTerm};
use crate::geometry::{dot, Simplex};

/// How a config names its target function: a builtin name or an inline
/// exponential polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Builtin(String),
    Exp(ExpPolynomial),
}

/// A target function resolved against a simplex.
#[derive(Clone, Debug, PartialEq)]
pub enum TargetFunction {
    /// `f ≡ 1`.
    Const1,
    /// `f(x) = v · x + b`.
    Affine { v: Vec<f64>, b: f64 },
    Exp(ExpPolynomial),
    /// `f(x) = |(x - centroid) · u|`, `u = (1, ..., 1) / √D`.
    Abs { center: Vec<f64>, direction: Vec<f64> },
    /// `f(x) = 1 / (1 + 25 |x - centroid|^2)`.
    Runge { center: Vec<f64> },
}

impl TargetFunction {
    /// Builtins: `const1`, `affine:v_1,...,v_D,b`, `abs`, `runge`, and
    /// `random-exp:N` (N terms drawn from `seed`, `|c| <= 1`, `|a_i| <= 1`).
    pub fn resolve(spec: &FunctionSpec, simplex: &Simplex, seed: u64) -> Result<Self> {
        let dim = simplex.dim();
        let f = match spec {
            FunctionSpec::Exp(p) => {
                if p.dim() != dim {
                    return Err(Error::config(
                        "function",
                        format!("exp-polynomial has dimension {}, simplex has {dim}", p.dim()),
                    ));
                }
                TargetFunction::Exp(p.clone())
            }
            FunctionSpec::Builtin(name) => Self::builtin(name, simplex, seed)?,
        };
        Ok(f)
    }

    fn builtin(name: &str, simplex: &Simplex, seed: u64) -> Result<Self> {
        let dim = simplex.dim();
        let center = simplex.centroid().into_inner();
        let (head, args) = match name.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a)),
            None => (name.trim(), None),
        };
        match (head, args) {
            ("const1", None) => Ok(TargetFunction::Const1),
            ("abs", None) => Ok(TargetFunction::Abs {
                center,
                direction: vec![1.0 / (dim as f64).sqrt(); dim],
            }),
            ("runge", None) => Ok(TargetFunction::Runge { center }),
            ("affine", Some(args)) => {
                let values = args
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::config("function", format!("affine coefficients: {e}")))?;
                if values.len() != dim + 1 {
                    return Err(Error::config(
                        "function",
                        format!("affine needs {} numbers (v_1..v_D, b), got {}", dim + 1, values.len()),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::config("function", "affine coefficients must be finite"));
                }
                let (v, b) = values.split_at(dim);
                Ok(TargetFunction::Affine {
                    v: v.to_vec(),
                    b: b[0],
                })
            }
            ("random-exp", Some(count)) => {
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|e| Error::config("function", format!("random-exp term count: {e}")))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let terms = (0..count)
                    .map(|_| {
                        let c = rng.random_range(-1.0..=1.0);
                        let a = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
                        ExpTerm::new(c, a)
                    })
                    .collect();
                Ok(TargetFunction::Exp(ExpPolynomial::new(terms)?))
            }
            _ => Err(Error::config(
                "function",
                format!(
                    "unknown function `{name}` (expected const1, affine:v..,b, abs, runge, \
                     random-exp:N or an exp-polynomial object)"
                ),
            )),
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        match self {
            TargetFunction::Const1 => Ok(1.0),
            TargetFunction::Affine { v, b } => Ok(dot(v, x) + b),
            TargetFunction::Exp(p) => p.eval(x),
            TargetFunction::Abs { center, direction } => Ok(x
                .iter()
                .zip(center)
                .zip(direction)
                .map(|((xi, ci), ui)| (xi - ci) * ui)
                .sum::<f64>()
                .abs()),
            TargetFunction::Runge { center } => {
                let r2: f64 = x.iter().zip(center).map(|(xi, ci)| (xi - ci) * (xi - ci)).sum();
                Ok(1.0 / (1.0 + 25.0 * r2))
            }
        }
    }

    /// The single exponential term, when the function is one.
    pub fn single_exponential(&self) -> Option<&ExpTerm> {
        match self {
            TargetFunction::Exp(p) if p.terms().len() == 1 => p.terms().first(),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(name: &str) -> Result<TargetFunction> {
        TargetFunction::resolve(
            &FunctionSpec::Builtin(name.into()),
            &Simplex::standard(2).unwrap(),
            7,
        )
    }

    #[test]
    fn builtins_parse_and_evaluate() {
        assert_eq!(resolve("const1").unwrap().value(&[0.2, 0.1]).unwrap(), 1.0);
        let affine = resolve("affine:2,-1,0.5").unwrap();
        assert_eq!(affine.value(&[0.25, 0.5]).unwrap(), 0.5);
        let runge = resolve("runge").unwrap();
        assert_eq!(runge.value(&[1.0 / 3.0, 1.0 / 3.0]).unwrap(), 1.0);
        let abs = resolve("abs").unwrap();
        assert!(abs.value(&[1.0 / 3.0, 1.0 / 3.0]).unwrap() < 1e-15);
        assert!(abs.value(&[1.0, 0.0]).unwrap() > 0.0);
    }

    #[test]
    fn builtin_errors() {
        assert!(resolve("affine:1,2").is_err());
        assert!(resolve("affine:1,x,2").is_err());
        assert!(resolve("sine").is_err());
        assert!(resolve("const1:3").is_err());
        assert!(resolve("random-exp:x").is_err());
        assert!(resolve("random-exp:0").is_err());
    }

    #[test]
    fn random_exp_is_seeded() {
        let a = resolve("random-exp:3").unwrap();
        let b = resolve("random-exp:3").unwrap();
        assert_eq!(a, b);
        let other = TargetFunction::resolve(
            &FunctionSpec::Builtin("random-exp:3".into()),
            &Simplex::standard(2).unwrap(),
            8,
        )
        .unwrap();
        assert_ne!(a, other);
        assert!(a.single_exponential().is_none());
    }

    #[test]
    fn exp_dimension_must_match() {
        let p = ExpPolynomial::single(1.0, vec![1.0]).unwrap();
        let err = TargetFunction::resolve(&FunctionSpec::Exp(p), &Simplex::standard(2).unwrap(), 0);
        assert!(err.is_err());
    }
}
