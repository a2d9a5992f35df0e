//! Input files.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "model": "disc",
//!   "generators": [
//!     { "matrix": [2, 0, 0, 1] },
//!     { "axis": { "beta": 3.14159, "alpha": { "disc": [0.8, 0.6] } }, "tau": 41 }
//!   ]
//! }
//! ```
//!
//! Matrices always act on the upper half-plane. Bare numbers on an axis are
//! real boundary values in the `half-plane` model and disc angles (radians)
//! in the `disc` model; `"inf"` and `{"disc": [x, y]}` are accepted in both.

use semicert_core::{BoundaryPoint, MoebiusMap};
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    #[default]
    HalfPlane,
    Disc,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum BoundaryValue {
    Number(f64),
    Text(String),
    Disc { disc: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub beta: BoundaryValue,
    pub alpha: BoundaryValue,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Matrix { matrix: [f64; 4] },
    Axis { axis: AxisSpec, tau: f64 },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub schema: u32,
    #[serde(default)]
    pub model: Model,
    pub generators: Vec<GeneratorSpec>,
}

impl BoundaryValue {
    pub fn to_point(&self, model: Model) -> Result<BoundaryPoint, String> {
        match self {
            BoundaryValue::Number(v) if !v.is_finite() => Err(format!("boundary value {v} is not finite")),
            BoundaryValue::Number(v) => Ok(match model {
                Model::HalfPlane => BoundaryPoint::from_real(*v),
                Model::Disc => BoundaryPoint::from_disc_angle(*v),
            }),
            BoundaryValue::Text(s) if s == "inf" || s == "infinity" => Ok(BoundaryPoint::INFINITY),
            BoundaryValue::Text(s) => Err(format!("unrecognised boundary value {s:?}")),
            BoundaryValue::Disc { disc: [x, y] } => {
                if (x.hypot(*y) - 1.0).abs() > 1e-6 {
                    return Err(format!("disc point ({x}, {y}) is not on the unit circle"));
                }
                Ok(BoundaryPoint::from_disc_angle(y.atan2(*x)))
            }
        }
    }
}

impl GeneratorSpec {
    pub fn to_map(&self, model: Model) -> Result<MoebiusMap, String> {
        match self {
            GeneratorSpec::Matrix { matrix: [a, b, c, d] } => {
                MoebiusMap::normalize(*a, *b, *c, *d).map_err(|e| e.to_string())
            }
            GeneratorSpec::Axis { axis, tau } => {
                let beta = axis.beta.to_point(model)?;
                let alpha = axis.alpha.to_point(model)?;
                MoebiusMap::from_axis_and_length(beta, alpha, *tau).map_err(|e| e.to_string())
            }
        }
    }

    /// Raw entries for the cocycle test, which accepts determinant -1.
    pub fn raw_entries(&self, model: Model) -> Result<[f64; 4], String> {
        match self {
            GeneratorSpec::Matrix { matrix } => Ok(*matrix),
            GeneratorSpec::Axis { .. } => self.to_map(model).map(|m| m.entries()),
        }
    }
}

impl InputSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let spec: InputSpec = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if spec.schema != SCHEMA_VERSION {
            return Err(CliError::Input(format!("unsupported schema {} (expected {SCHEMA_VERSION})", spec.schema)));
        }
        if spec.generators.is_empty() {
            return Err(CliError::Input("at least one generator is required".into()));
        }
        Ok(spec)
    }

    pub fn maps(&self) -> Result<Vec<MoebiusMap>, CliError> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| g.to_map(self.model).map_err(|e| CliError::Input(format!("generators[{i}]: {e}"))))
            .collect()
    }

    pub fn raw_matrices(&self) -> Result<Vec<[f64; 4]>, CliError> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| g.raw_entries(self.model).map_err(|e| CliError::Input(format!("generators[{i}]: {e}"))))
            .collect()
    }
}
