//! The JSON run configuration. Every field has a default; the resolved config is echoed
//! next to the outputs so a run can be repeated from the echo alone.

use std::path::{Path, PathBuf};

use ifs_spectra_core::lattice::{parse_rational, Rational};
use ifs_spectra_core::verify::VerifyConfig;
use ifs_spectra_core::{presets, HadamardTriple};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const EFFECTIVE_CONFIG: &str = "effective_config.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Named built-in system; mutually exclusive with `matrix`/`b`/`l`.
    pub preset: Option<String>,
    /// Rows of the integer matrix R.
    pub matrix: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub l: Vec<Vec<i64>>,
    /// Digit probabilities for the unequal-weights probe in `validate`.
    pub weights: Option<Vec<f64>>,
    /// Word length of the enumerated spectra.
    pub horizon: usize,
    /// Truncation error of each Fourier evaluation.
    pub eps: f64,
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Random points for the quadrature identity check.
    pub quadrature_points: usize,
    /// Paths per start point of the catalog completeness probe in `cycles`.
    pub probe_paths: usize,
    /// Start points for `simulate` and the partition check; empty means the defaults.
    pub start_points: Vec<Vec<f64>>,
    pub verify: VerifyOptions,
    pub image: ImageOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self {
            preset: None,
            matrix: Vec::new(),
            b: Vec::new(),
            l: Vec::new(),
            weights: None,
            horizon: v.horizon,
            eps: v.eps,
            paths: v.paths,
            steps: v.steps,
            seed: v.seed,
            out: PathBuf::from("out"),
            quadrature_points: 1000,
            probe_paths: 4000,
            start_points: Vec::new(),
            verify: VerifyOptions::default(),
            image: ImageOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyOptions {
    pub radii: Vec<i64>,
    pub grid_side: usize,
    pub random_points: usize,
    pub cross_check_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self {
            radii: v.radii,
            grid_side: v.grid_side,
            random_points: v.random_points,
            cross_check_points: v.cross_check_points,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attractor {
    /// Support of the measure, maps `R^-1 (x + b)`.
    Xb,
    /// Attractor of the dual maps `S^-1 (x + l)`.
    Xl,
}

impl Attractor {
    pub fn file_stem(self) -> &'static str {
        match self {
            Attractor::Xb => "x_b",
            Attractor::Xl => "x_l",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImageOptions {
    pub width: usize,
    pub height: usize,
    /// Chaos-game points per image.
    pub points: usize,
    pub which: Vec<Attractor>,
    /// `[[x_lo, x_hi], [y_lo, y_hi]]` as rational strings; `None` uses the exact invariant box.
    pub window_b: Option<Vec<[String; 2]>>,
    pub window_l: Option<Vec<[String; 2]>>,
    /// Also write a PNG of the same raster.
    pub png: bool,
}

impl Default for ImageOptions {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            points: 1_000_000,
            which: vec![Attractor::Xb, Attractor::Xl],
            window_b: None,
            window_l: None,
            png: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("config line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Replaces a preset by its explicit matrix and digits and checks the shape of the input.
    pub fn resolve(mut self) -> CliResult<Self> {
        if let Some(name) = self.preset.take() {
            if !self.matrix.is_empty() || !self.b.is_empty() || !self.l.is_empty() {
                return Err(CliError::Input("give either `preset` or `matrix`/`b`/`l`, not both".into()));
            }
            let t = presets::by_name(&name)
                .ok_or_else(|| CliError::Input(format!("unknown preset `{name}`; known: {}", presets::NAMES.join(", "))))?;
            self.matrix = t.r().to_rows_i64().expect("preset entries fit in i64");
            self.b = t.b().to_vec();
            self.l = t.l().to_vec();
        }
        if self.matrix.is_empty() {
            return Err(CliError::Input("config needs `matrix`, `b` and `l` (or a `preset`)".into()));
        }
        if !self.eps.is_finite() || self.eps <= 0.0 {
            return Err(CliError::Input(format!("`eps` must be positive, got {}", self.eps)));
        }
        if self.image.width == 0 || self.image.height == 0 {
            return Err(CliError::Input("image width and height must be positive".into()));
        }
        Ok(self)
    }

    pub fn triple(&self) -> CliResult<HadamardTriple> {
        Ok(HadamardTriple::from_rows(&self.matrix, self.b.clone(), self.l.clone())?)
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            horizon: self.horizon,
            radii: self.verify.radii.clone(),
            grid_side: self.verify.grid_side,
            random_points: self.verify.random_points,
            start_points: self.start_points.clone(),
            paths: self.paths,
            steps: self.steps,
            cross_check_points: self.verify.cross_check_points,
            eps: self.eps,
            seed: self.seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses a `[[lo, hi], ...]` window of rational strings.
pub fn parse_window(w: &[[String; 2]], dim: usize) -> CliResult<Vec<(Rational, Rational)>> {
    if w.len() != dim {
        return Err(CliError::Input(format!("window has {} axes, system has dimension {dim}", w.len())));
    }
    w.iter()
        .map(|[lo, hi]| {
            let lo = parse_rational(lo).map_err(|e| CliError::Input(e.to_string()))?;
            let hi = parse_rational(hi).map_err(|e| CliError::Input(e.to_string()))?;
            if lo >= hi {
                return Err(CliError::Input(format!("empty window axis [{lo}, {hi}]")));
            }
            Ok((lo, hi))
        })
        .collect()
}
