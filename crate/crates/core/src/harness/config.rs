use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::expmodel::ExpPolynomial;
use crate::geometry::Simplex;
use crate::operator::default_grid_resolution;

use super::functions::{FunctionSpec, TargetFunction};

/// Experiment description as read from JSON.
///
/// ```json
/// {
///   "simplex": {"vertices": [[0, 0], [1, 0], [0, 1]]},
///   "function": {"terms": [{"c": 1.0, "a": [1.0, 1.0]}]},
///   "n_values": [10, 20, 40, 80, 160],
///   "grid": 50,
///   "seed": 0
/// }
/// ```
///
/// `simplex` may also be a path to a JSON file holding the simplex, relative
/// to the config file. `function` is a builtin name or an exp-polynomial
/// object. `directions` lists the exponential directions of a scaling study.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub simplex: Value,
    pub function: Value,
    pub n_values: Vec<u32>,
    #[serde(default)]
    pub grid: Option<u32>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub directions: Option<Vec<Vec<f64>>>,
}

/// A validated experiment.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub simplex: Simplex,
    pub function: TargetFunction,
    pub n_values: Vec<u32>,
    pub grid: u32,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub directions: Option<Vec<Vec<f64>>>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("<config>", e.to_string()))
    }

    /// Reads and resolves a config file; relative simplex paths are taken
    /// from the config's directory.
    pub fn load(path: &Path) -> Result<Experiment> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config = Self::from_json(&text).map_err(|e| match e {
            Error::Config { message, .. } => Error::config(path.display().to_string(), message),
            other => other,
        })?;
        config.resolve(path.parent().unwrap_or(Path::new(".")))
    }

    pub fn resolve(&self, base_dir: &Path) -> Result<Experiment> {
        let simplex = load_simplex_value(&self.simplex, base_dir)?;

        let spec = match &self.function {
            Value::String(name) => FunctionSpec::Builtin(name.clone()),
            v @ Value::Object(_) => FunctionSpec::Exp(
                ExpPolynomial::deserialize(v).map_err(|e| Error::config("function", e.to_string()))?,
            ),
            _ => {
                return Err(Error::config(
                    "function",
                    "expected a builtin name or an exp-polynomial object",
                ))
            }
        };
        let function = TargetFunction::resolve(&spec, &simplex, self.seed)?;

        if self.n_values.is_empty() {
            return Err(Error::config("n_values", "must not be empty"));
        }
        if self.n_values[0] == 0 {
            return Err(Error::config("n_values", "orders must be >= 1"));
        }
        if let Some(w) = self.n_values.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::config(
                "n_values",
                format!("must be strictly increasing ({} then {})", w[0], w[1]),
            ));
        }

        let grid = self.grid.unwrap_or_else(|| default_grid_resolution(simplex.dim()));
        if grid < 2 {
            return Err(Error::config("grid", format!("resolution must be >= 2, got {grid}")));
        }

        if let Some(dirs) = &self.directions {
            if let Some(d) = dirs.iter().find(|d| d.len() != simplex.dim()) {
                return Err(Error::config(
                    "directions",
                    format!("direction {d:?} does not have dimension {}", simplex.dim()),
                ));
            }
        }

        Ok(Experiment {
            simplex,
            function,
            n_values: self.n_values.clone(),
            grid,
            seed: self.seed,
            out: self.out.clone(),
            directions: self.directions.clone(),
        })
    }
}

/// Parses a simplex given inline as JSON text or as a path to a JSON file.
pub fn load_simplex(arg: &str) -> Result<Simplex> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| Error::config("simplex", e.to_string()));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::io(arg, e))?;
    serde_json::from_str(&text).map_err(|e| Error::config(format!("simplex ({arg})"), e.to_string()))
}

fn load_simplex_value(value: &Value, base_dir: &Path) -> Result<Simplex> {
    match value {
        Value::String(path) => {
            let path = base_dir.join(path);
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::config(format!("simplex ({})", path.display()), e.to_string()))
        }
        v @ Value::Object(_) => {
            Simplex::deserialize(v).map_err(|e| Error::config("simplex", e.to_string()))
        }
        _ => Err(Error::config(
            "simplex",
            "expected {\"vertices\": [...]} or a path to such a file",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str) -> Result<Experiment> {
        ExperimentConfig::from_json(text)?.resolve(Path::new("."))
    }

    #[test]
    fn minimal_config() {
        let e = resolve(
            r#"{"simplex": {"vertices": [[0],[1]]}, "function": "const1", "n_values": [1, 2, 4]}"#,
        )
        .unwrap();
        assert_eq!(e.grid, 50);
        assert_eq!(e.seed, 0);
        assert_eq!(e.function, TargetFunction::Const1);
    }

    #[test]
    fn default_grid_follows_dimension() {
        let e = resolve(
            r#"{"simplex": {"vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]]},
                "function": "runge", "n_values": [2]}"#,
        )
        .unwrap();
        assert_eq!(e.grid, 15);
    }

    #[test]
    fn field_errors_name_the_field() {
        let cases = [
            (r#"{"simplex": {"vertices": [[0],[1]]}, "function": "const1", "n_values": []}"#, "n_values"),
            (r#"{"simplex": {"vertices": [[0],[1]]}, "function": "const1", "n_values": [4, 2]}"#, "n_values"),
            (r#"{"simplex": {"vertices": [[0],[1]]}, "function": "const1", "n_values": [0]}"#, "n_values"),
            (r#"{"simplex": {"vertices": [[0],[1]]}, "function": "const1", "n_values": [2], "grid": 1}"#, "grid"),
            (r#"{"simplex": {"vertices": [[0,0],[1,0],[2,0]]}, "function": "const1", "n_values": [2]}"#, "simplex"),
            (r#"{"simplex": {"vertices": [[0],[1]]}, "function": 3, "n_values": [2]}"#, "function"),
            (r#"{"simplex": {"vertices": [[0],[1]]}, "function": {"terms": []}, "n_values": [2]}"#, "function"),
        ];
        for (text, field) in cases {
            match resolve(text) {
                Err(Error::Config { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = ExperimentConfig::from_json("{\n  \"simplex\": ,\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = ExperimentConfig::from_json(
            r#"{"simplex": {}, "function": "const1", "n_values": [1], "bogus": 1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn simplex_from_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("tri.json"), r#"{"vertices": [[0,0],[1,0],[0,1]]}"#).unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(
            &cfg,
            r#"{"simplex": "tri.json", "function": "abs", "n_values": [2, 3]}"#,
        )
        .unwrap();
        let e = ExperimentConfig::load(&cfg).unwrap();
        assert_eq!(e.simplex, Simplex::standard(2).unwrap());
        assert!(load_simplex(dir.path().join("tri.json").to_str().unwrap()).is_ok());
        assert!(load_simplex(r#"{"vertices": [[0],[2]]}"#).is_ok());
        assert!(matches!(load_simplex("/no/such/file.json"), Err(Error::Io { .. })));
    }
}
