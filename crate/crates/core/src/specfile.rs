//! JSON spec files: a filtration by polynomial frames, rational sample points,
//! optional tolerances and optional tubular data for the normal-cone checks.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "coords": ["x", "y", "z"],
//!   "layers": [{"weight": 1, "fields": [["1", "0", "-y/2"], ["0", "1", "x/2"]]},
//!              {"weight": 2, "fields": [["0", "0", "1"]]}],
//!   "samples": [[0, 0, 0], ["1/2", -3, 2]],
//!   "tolerances": {"rank": 1e-9},
//!   "tubular": {"dim": 3, "v": 1, "h": 1, "phi": ["x1 + y1*y2", "y1", "y2"]}
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::dnc::TubularData;
use crate::error::{Error, Result};
use crate::filtration::{FiltrationSpec, Layer, Tolerances};
use crate::scalar::{parse_rational, rational_from_f64, Rational};
use crate::symexpr::{Coordinates, VectorField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub dim: usize,
    pub coords: Vec<String>,
    pub layers: Vec<LayerFile>,
    pub samples: Vec<Vec<RationalText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tubular: Option<TubularFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerFile {
    pub weight: usize,
    pub fields: Vec<Vec<String>>,
}

/// Tubular coordinates `φ(x, y)` on `ℝ^dim` along `V = ℝᵛ × {0}`, with the first
/// `h` fiber coordinates spanning the weight-one directions. Variables are
/// `x1..xv, y1..y(dim−v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubularFile {
    pub dim: usize,
    pub v: usize,
    pub h: usize,
    pub phi: Vec<String>,
}

/// A rational given as a JSON integer, a decimal, or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Integer(i64),
    Decimal(f64),
    Text(String),
}

impl RationalText {
    pub fn value(&self) -> Result<Rational> {
        match self {
            RationalText::Integer(n) => Ok(Rational::from_integer((*n).into())),
            RationalText::Decimal(x) => rational_from_f64(*x).ok_or_else(|| Error::Spec(format!("non-finite number {x}"))),
            RationalText::Text(s) => parse_rational(s).ok_or_else(|| Error::Spec(format!("`{s}` is not a rational number"))),
        }
    }
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    /// Builds the filtration; expressions are parsed against `coords`.
    pub fn filtration(&self) -> Result<FiltrationSpec> {
        if self.coords.len() != self.dim {
            return Err(Error::Spec(format!("{} coordinate names for dim {}", self.coords.len(), self.dim)));
        }
        let coords = Coordinates::new(self.coords.clone())?;
        let mut layers = Vec::with_capacity(self.layers.len());
        for l in &self.layers {
            let fields = l.fields.iter().map(|f| VectorField::parse(&coords, f)).collect::<Result<Vec<_>>>()?;
            layers.push(Layer { weight: l.weight, fields });
        }
        let samples = self
            .samples
            .iter()
            .map(|p| p.iter().map(RationalText::value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiltrationSpec::new(coords, layers, samples, self.tolerances.unwrap_or_default())
    }

    pub fn tubular_data(&self) -> Result<Option<TubularData>> {
        self.tubular.as_ref().map(|t| TubularData::parse(t.dim, t.v, t.h, &t.phi)).transpose()
    }
}

/// Example specs shipped with the library, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("abelian", include_str!("../specs/abelian.json")),
    ("broken", include_str!("../specs/broken.json")),
    ("engel", include_str!("../specs/engel.json")),
    ("heisenberg", include_str!("../specs/heisenberg.json")),
    ("involutive", include_str!("../specs/involutive.json")),
    ("perturbed_heisenberg", include_str!("../specs/perturbed_heisenberg.json")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Parsed bundled spec; panics only if a shipped file is malformed.
pub fn bundled_filtration(name: &str) -> Option<FiltrationSpec> {
    bundled(name).map(|text| SpecFile::from_json(text).and_then(|s| s.filtration()).expect("bundled spec"))
}
