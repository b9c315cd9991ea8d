//! The full verification run and its report.

use serde::{Deserialize, Serialize};

use super::paths::{simulate_paths, SimulationReport, DEFAULT_STEPS};
use super::spectral::{default_test_points, orthogonality_check, parseval_sweep, OrthogonalityReport, ParsevalReport};
use crate::dynamics::{build_catalog, InvariantCatalog, LineFrame};
use crate::error::Result;
use crate::lattice::rational_eigen_lines;
use crate::measure::{FourierEvaluator, DEFAULT_EPS};
use crate::spectrum::{assemble_spectrum, product_spectrum, Horizon, Spectrum};
use crate::triple::HadamardTriple;

/// Knobs of a verification run; every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Word length for the orthogonality check.
    pub horizon: usize,
    /// Radius schedule for the Parseval sums; the last entry bounds the enumeration.
    pub radii: Vec<i64>,
    /// Grid points per axis in `[-1, 1]^d` for the Parseval sweep.
    pub grid_side: usize,
    pub random_points: usize,
    /// Start points of the random-walk partition check; empty means a default set.
    pub start_points: Vec<Vec<f64>>,
    pub paths: usize,
    pub steps: usize,
    pub cross_check_points: usize,
    pub eps: f64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            horizon: 4,
            radii: vec![16, 256, 4096],
            grid_side: 5,
            random_points: 20,
            start_points: Vec::new(),
            paths: 100_000,
            steps: DEFAULT_STEPS,
            cross_check_points: 10,
            eps: DEFAULT_EPS,
            seed: 2024,
        }
    }
}

/// Monte Carlo basin estimate against the Parseval series of one catalog set.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckRow {
    pub x: Vec<f64>,
    pub set: String,
    pub monte_carlo: f64,
    pub sigma: f64,
    pub series: f64,
    /// Mass missing from the truncated series over all sets.
    pub tail: f64,
    pub difference: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumChecks {
    pub name: String,
    pub orthogonality: OrthogonalityReport,
    pub parseval: ParsevalReport,
    pub non_integral: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub config: VerifyConfig,
    pub catalog: Vec<String>,
    pub spectra: Vec<SpectrumChecks>,
    pub partition: Vec<SimulationReport>,
    pub partition_pass: bool,
    pub cross_check: Vec<CrossCheckRow>,
    pub cross_check_pass: bool,
    pub pass: bool,
}

/// Compares Monte Carlo basin estimates with `sum_{lambda in Lambda(M)} |mu_hat(x + lambda)|^2`.
///
/// The spectrum must come from `assemble_spectrum`, whose sources follow the catalog order.
#[allow(clippy::too_many_arguments)]
pub fn harmonic_cross_check(
    t: &HadamardTriple,
    catalog: &InvariantCatalog,
    sp: &Spectrum,
    e: &FourierEvaluator,
    points: &[Vec<f64>],
    paths: usize,
    steps: usize,
    seed: u64,
) -> Vec<CrossCheckRow> {
    let radius = match sp.horizon {
        Horizon::Radius(r) => r,
        Horizon::Words(_) => i64::MAX,
    };
    let sweep = parseval_sweep(sp, e, points, &[radius]);
    let labels = catalog.labels();
    let mut rows = Vec::new();
    for (k, (x, row)) in points.iter().zip(&sweep.rows).enumerate() {
        let sim = simulate_paths(t, catalog, x, paths, steps, seed.wrapping_add(k as u64));
        let tail = (1.0 - row.final_sum()).max(0.0);
        for (set, label) in labels.iter().enumerate() {
            let mc = sim.sets[set].h;
            let sigma = sim.sets[set].sigma;
            let series = row.by_source[set];
            let difference = (mc - series).abs();
            rows.push(CrossCheckRow {
                x: x.clone(),
                set: label.clone(),
                monte_carlo: mc,
                sigma,
                series,
                tail,
                difference,
                // one path of slack keeps sigma = 0 estimates from failing on rounding
                pass: difference <= 3.0 * sigma + tail + 1.0 / paths as f64,
            });
        }
    }
    rows
}

fn spectrum_checks(name: &str, words: &Spectrum, radius: &Spectrum, e: &FourierEvaluator, points: &[Vec<f64>], radii: &[i64]) -> SpectrumChecks {
    SpectrumChecks {
        name: name.to_string(),
        orthogonality: orthogonality_check(&words.values(), e),
        parseval: parseval_sweep(radius, e, points, radii),
        non_integral: words.non_integral(),
    }
}

/// Random-walk start points used when none are configured.
pub fn default_start_points(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => [0.0, 2.0 / 3.0, 0.5, -0.7, 0.3].iter().map(|&x| vec![x]).collect(),
        2 => vec![vec![0.0, 0.0], vec![0.0, 2.0 / 3.0], vec![0.5, 0.25], vec![-0.7, 0.9], vec![0.3, -0.6]],
        _ => default_test_points(dim, 1, 4, 77),
    }
}

fn cross_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let grid = 3usize.pow(dim as u32);
    let mut pts = default_test_points(dim, 3, count.saturating_sub(grid), seed ^ 0xc0ffee);
    pts.truncate(count);
    pts
}

/// Catalog, spectra and every check, in one deterministic run.
pub fn run_verification(t: &HadamardTriple, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let catalog = build_catalog(t)?;
    let e = FourierEvaluator::new(t, cfg.eps)?;
    let d = t.dim();
    let rmax = *cfg.radii.iter().max().unwrap_or(&256);
    let points = default_test_points(d, cfg.grid_side, cfg.random_points, cfg.seed);

    let union_radius = assemble_spectrum(t, &catalog, Horizon::Radius(rmax))?;
    let mut spectra = vec![spectrum_checks(
        "union",
        &assemble_spectrum(t, &catalog, Horizon::Words(cfg.horizon))?,
        &union_radius,
        &e,
        &points,
        &cfg.radii,
    )];
    if d == 2 {
        for line in rational_eigen_lines(t.s())? {
            let Ok(frame) = LineFrame::new(t, &line) else { continue };
            if !frame.factored.fibers_constant() {
                continue;
            }
            let words = product_spectrum(&frame, Horizon::Words(cfg.horizon))?;
            let radius = product_spectrum(&frame, Horizon::Radius(rmax))?;
            let name = format!("product along ({}, {})", line.direction[0], line.direction[1]);
            spectra.push(spectrum_checks(&name, &words, &radius, &e, &points, &cfg.radii));
        }
    }

    let starts = if cfg.start_points.is_empty() {
        default_start_points(d)
    } else {
        cfg.start_points.clone()
    };
    let partition: Vec<SimulationReport> = starts
        .iter()
        .enumerate()
        .map(|(k, x)| simulate_paths(t, &catalog, x, cfg.paths, cfg.steps, cfg.seed.wrapping_add(1000 + k as u64)))
        .collect();
    let partition_pass = partition.iter().all(|r| !r.possibly_incomplete);

    let cpts = cross_points(d, cfg.cross_check_points, cfg.seed);
    let cross_check = harmonic_cross_check(t, &catalog, &union_radius, &e, &cpts, cfg.paths, cfg.steps, cfg.seed.wrapping_add(2000));
    let cross_check_pass = cross_check.iter().all(|r| r.pass);

    let pass = spectra.iter().all(|s| s.orthogonality.pass && s.parseval.pass) && partition_pass && cross_check_pass;
    Ok(VerificationReport {
        seed: cfg.seed,
        config: cfg.clone(),
        catalog: catalog.labels(),
        spectra,
        partition,
        partition_pass,
        cross_check,
        cross_check_pass,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            radii: vec![16, 256],
            grid_side: 3,
            random_points: 4,
            paths: 4000,
            steps: 40,
            cross_check_points: 4,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn reflected_cantor_passes() {
        let r = run_verification(&presets::three_quarter_cantor(), &quick()).unwrap();
        assert_eq!(r.catalog, ["cycle {0}", "cycle {2/3}"]);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.partition.len(), 5);
        assert!(r.partition[1].sets[1].h > 0.999);
    }

    #[test]
    fn non_hadamard_control_fails() {
        let r = run_verification(&presets::ternary_control(), &quick()).unwrap();
        assert!(!r.pass);
        assert!(!r.spectra[0].orthogonality.pass);
    }

    #[test]
    fn config_defaults_fill_missing_fields() {
        let c: VerifyConfig = serde_json::from_str(r#"{"paths": 10}"#).unwrap();
        assert_eq!(c.paths, 10);
        assert_eq!(c.radii, VerifyConfig::default().radii);
        assert!(serde_json::from_str::<VerifyConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
