//! The six subcommands. Each writes its files under the output directory and returns a
//! JSON report plus a pass flag; `main` turns the flag into the exit code.

use std::path::{Path, PathBuf};

use ifs_spectra_core::dynamics::{build_catalog, InvariantCatalog, LineFrame};
use ifs_spectra_core::lattice::{is_expansive, rational_eigen_lines, Expansiveness, IntMatrix, RationalVector};
use ifs_spectra_core::measure::{quadrature_check, unequal_weights_probe};
use ifs_spectra_core::spectrum::{assemble_spectrum, product_spectrum, Horizon, Spectrum};
use ifs_spectra_core::verify::{default_start_points, run_verification, simulate_paths, ParsevalReport, SimulationReport};
use ifs_spectra_core::{validate_hadamard, Error as CoreError, HadamardReport, HadamardTriple};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{RunConfig, EFFECTIVE_CONFIG};
use crate::error::{CliError, CliResult};
use crate::render;

/// Quadrature deviations below this count as the identity holding.
pub const QUADRATURE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Cycles,
    Spectrum,
    Verify,
    Render,
    Simulate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cycles => "cycles",
            Command::Spectrum => "spectrum",
            Command::Verify => "verify",
            Command::Render => "render",
            Command::Simulate => "simulate",
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub pass: bool,
    pub report: Value,
    /// Explanation printed to stderr on failure.
    pub message: Option<String>,
}

/// Runs `cmd` on an already resolved config.
pub fn run(cmd: Command, cfg: &RunConfig) -> CliResult<Outcome> {
    let out = prepare_out(cfg)?;
    match cmd {
        Command::Validate => validate(cfg, &out),
        Command::Cycles => cycles(cfg, &out),
        Command::Spectrum => spectrum(cfg, &out),
        Command::Verify => verify(cfg, &out),
        Command::Render => render_cmd(cfg, &out),
        Command::Simulate => simulate(cfg, &out),
    }
}

fn prepare_out(cfg: &RunConfig) -> CliResult<PathBuf> {
    let out = cfg.out.clone();
    std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
    write_text(&out.join(EFFECTIVE_CONFIG), &cfg.to_json())?;
    Ok(out)
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, v: &impl Serialize) -> CliResult<()> {
    write_text(path, &serde_json::to_string_pretty(v).expect("report serializes"))
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_err(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

#[derive(Serialize)]
struct QuadratureResult {
    points: usize,
    seed: u64,
    max_deviation: f64,
    pass: bool,
}

#[derive(Serialize)]
struct WeightsResult {
    p: Vec<f64>,
    equal: bool,
    max_deviation: f64,
    identity_holds: bool,
}

#[derive(Serialize)]
struct ValidateReport {
    dim: usize,
    digits: usize,
    hadamard: HadamardReport,
    expansive: Expansiveness,
    quadrature: Option<QuadratureResult>,
    weights: Option<WeightsResult>,
    pass: bool,
}

fn validate(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let r = IntMatrix::square(&cfg.matrix)?;
    let hadamard = validate_hadamard(&r, &cfg.b, &cfg.l)?;
    let expansive = is_expansive(&r)?;
    let mut quadrature = None;
    let mut weights = None;
    if expansive.is_expansive() {
        let t = cfg.triple()?;
        let dev = quadrature_check(&t, cfg.quadrature_points, cfg.seed);
        quadrature = Some(QuadratureResult {
            points: cfg.quadrature_points,
            seed: cfg.seed,
            max_deviation: dev,
            pass: dev < QUADRATURE_TOL,
        });
        if let Some(p) = &cfg.weights {
            let dev = unequal_weights_probe(&t, p, cfg.quadrature_points, cfg.seed)?;
            weights = Some(WeightsResult {
                p: p.clone(),
                equal: p.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-15),
                max_deviation: dev,
                identity_holds: dev < QUADRATURE_TOL,
            });
        }
    }
    let pass = hadamard.is_valid()
        && expansive.is_expansive()
        && quadrature.as_ref().is_some_and(|q| q.pass)
        && weights.as_ref().map_or(true, |w| w.identity_holds);
    let message = (!pass).then(|| validate_failure(&hadamard, &expansive, &quadrature, &weights));
    let report = ValidateReport {
        dim: r.dim(),
        digits: cfg.b.len(),
        hadamard,
        expansive,
        quadrature,
        weights,
        pass,
    };
    write_json(&out.join("validate.json"), &report)?;
    Ok(Outcome {
        pass,
        report: to_value(&report),
        message,
    })
}

fn validate_failure(h: &HadamardReport, e: &Expansiveness, q: &Option<QuadratureResult>, w: &Option<WeightsResult>) -> String {
    let mut why = Vec::new();
    if let Some((b1, b2)) = &h.witness {
        why.push(format!("rows for b = {b1:?} and b' = {b2:?} are not orthogonal (residual {:.3e})", h.max_residual));
    }
    if let Some((a, b)) = h.congruent_b.first() {
        why.push(format!("B digits {a:?} and {b:?} are congruent mod R"));
    }
    if let Some((a, b)) = h.congruent_l.first() {
        why.push(format!("L digits {a:?} and {b:?} are congruent mod R^T"));
    }
    if let Expansiveness::NotExpansive { eigenvalue_modulus } = e {
        why.push(format!("R is not expansive (eigenvalue modulus {eigenvalue_modulus:.6})"));
    }
    if let Some(q) = q.as_ref().filter(|q| !q.pass) {
        why.push(format!("quadrature identity deviates by {:.3e}", q.max_deviation));
    }
    if let Some(w) = w.as_ref().filter(|w| !w.identity_holds) {
        why.push(format!("weights {:?} break the quadrature identity (deviation {:.3e})", w.p, w.max_deviation));
    }
    why.join("; ")
}

#[derive(Serialize)]
struct ProbeRow {
    start: Vec<f64>,
    unclassified: f64,
    sigma: f64,
    possibly_incomplete: bool,
}

#[derive(Serialize)]
struct CyclesReport<'a> {
    sets: Vec<String>,
    catalog: &'a InvariantCatalog,
    probe: Vec<ProbeRow>,
    complete: bool,
    pass: bool,
}

fn starts(cfg: &RunConfig, dim: usize) -> Vec<Vec<f64>> {
    if cfg.start_points.is_empty() {
        default_start_points(dim)
    } else {
        cfg.start_points.clone()
    }
}

fn check_starts(points: &[Vec<f64>], dim: usize) -> CliResult<()> {
    match points.iter().find(|p| p.len() != dim) {
        Some(p) => Err(CliError::Input(format!("start point {p:?} does not have dimension {dim}"))),
        None => Ok(()),
    }
}

fn cycles(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let t = cfg.triple()?;
    let catalog = build_catalog(&t)?;
    let pts = starts(cfg, t.dim());
    check_starts(&pts, t.dim())?;
    let probe: Vec<ProbeRow> = pts
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let r = simulate_paths(&t, &catalog, x, cfg.probe_paths, cfg.steps, cfg.seed.wrapping_add(k as u64));
            ProbeRow {
                start: x.clone(),
                unclassified: r.unclassified,
                sigma: r.unclassified_sigma,
                possibly_incomplete: r.possibly_incomplete,
            }
        })
        .collect();
    let complete = probe.iter().all(|p| !p.possibly_incomplete);
    let pass = catalog.disjoint && complete;
    let message = if !complete {
        let worst = probe.iter().map(|p| p.unclassified).fold(0.0, f64::max);
        Some(CoreError::CatalogIncomplete(format!("up to {worst:.4} of the random-walk mass reaches no listed set")).to_string())
    } else if !catalog.disjoint {
        Some(CoreError::ReducibilityConditionUnmet.to_string())
    } else {
        None
    };
    let report = CyclesReport {
        sets: catalog.labels(),
        catalog: &catalog,
        probe,
        complete,
        pass,
    };
    write_json(&out.join("catalog.json"), &report)?;
    Ok(Outcome {
        pass,
        report: to_value(&report),
        message,
    })
}

/// Frame-adapted product spectra `Lambda_1 x Lambda_2`, one per eligible invariant line.
fn product_spectra(t: &HadamardTriple, horizon: Horizon) -> CliResult<Vec<(String, Spectrum)>> {
    let mut out = Vec::new();
    if t.dim() != 2 {
        return Ok(out);
    }
    for line in rational_eigen_lines(t.s())? {
        let Ok(frame) = LineFrame::new(t, &line) else { continue };
        if !frame.factored.fibers_constant() {
            continue;
        }
        let name = format!("product along ({}, {})", line.direction[0], line.direction[1]);
        out.push((name, product_spectrum(&frame, horizon)?));
    }
    Ok(out)
}

fn write_spectrum_csv(path: &Path, sp: &Spectrum, labels: &[String]) -> CliResult<()> {
    let d = sp.elements.first().map_or(0, |e| e.value.0.len());
    let mut w = csv_writer(path)?;
    let mut header = vec!["index".to_string(), "source".into(), "kind".into(), "point".into(), "word".into(), "value".into()];
    header.extend((0..d).map(|i| format!("x{i}")));
    header.extend(["first".into(), "second".into()]);
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    let opt = |v: &Option<RationalVector>| v.as_ref().map(|v| v.to_string()).unwrap_or_default();
    for (k, e) in sp.elements.iter().enumerate() {
        let p = &e.provenance;
        let word: Vec<String> = p.word.iter().map(|i| i.to_string()).collect();
        let mut row = vec![
            k.to_string(),
            labels.get(p.source).cloned().unwrap_or_else(|| p.source.to_string()),
            sp.sources[p.source].kind().to_string(),
            p.point.to_string(),
            word.join(" "),
            e.value.to_string(),
        ];
        row.extend(e.value.to_f64().iter().map(|x| format!("{x}")));
        row.push(opt(&p.first));
        row.push(opt(&p.second));
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct SpectrumSummary {
    name: String,
    file: String,
    elements: usize,
    non_integral: usize,
}

#[derive(Serialize)]
struct Comparison {
    product: String,
    common: usize,
    only_union: usize,
    only_product: usize,
    same_set: bool,
}

fn spectrum(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let t = cfg.triple()?;
    let catalog = build_catalog(&t)?;
    let horizon = Horizon::Words(cfg.horizon);
    let union = assemble_spectrum(&t, &catalog, horizon)?;
    let labels = catalog.labels();
    write_spectrum_csv(&out.join("spectrum.csv"), &union, &labels)?;
    let mut spectra = vec![SpectrumSummary {
        name: "union".into(),
        file: "spectrum.csv".into(),
        elements: union.len(),
        non_integral: union.non_integral(),
    }];
    let mut comparisons = Vec::new();
    let union_set: std::collections::BTreeSet<_> = union.values().into_iter().collect();
    for (k, (name, sp)) in product_spectra(&t, horizon)?.into_iter().enumerate() {
        let file = format!("product_{k}.csv");
        write_spectrum_csv(&out.join(&file), &sp, std::slice::from_ref(&name))?;
        let set: std::collections::BTreeSet<_> = sp.values().into_iter().collect();
        let common = union_set.intersection(&set).count();
        comparisons.push(Comparison {
            product: name.clone(),
            common,
            only_union: union_set.len() - common,
            only_product: set.len() - common,
            same_set: union_set == set,
        });
        spectra.push(SpectrumSummary {
            name,
            file,
            elements: sp.len(),
            non_integral: sp.non_integral(),
        });
    }
    let report = json!({
        "horizon": cfg.horizon,
        "sets": labels,
        "spectra": spectra,
        "comparisons": comparisons,
        "pass": true,
    });
    write_json(&out.join("spectrum.json"), &report)?;
    Ok(Outcome {
        pass: true,
        report,
        message: None,
    })
}

fn write_parseval_csv(path: &Path, p: &ParsevalReport) -> CliResult<()> {
    let d = p.rows.first().map_or(0, |r| r.x.len());
    let mut w = csv_writer(path)?;
    let mut header: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
    header.extend(["radius".into(), "partial_sum".into()]);
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for row in &p.rows {
        for (r, s) in &row.partial_sums {
            let mut rec: Vec<String> = row.x.iter().map(|x| format!("{x}")).collect();
            rec.push(r.to_string());
            rec.push(format!("{s}"));
            w.write_record(&rec).map_err(|e| csv_err(path, e))?;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn verify(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let t = cfg.triple()?;
    let vc = cfg.verify_config();
    check_starts(&vc.start_points, t.dim())?;
    let report = run_verification(&t, &vc)?;
    for (k, s) in report.spectra.iter().enumerate() {
        write_parseval_csv(&out.join(format!("parseval_{k}.csv")), &s.parseval)?;
    }
    write_json(&out.join("verify.json"), &report)?;
    let message = (!report.pass).then(|| {
        let mut why = Vec::new();
        for s in &report.spectra {
            if !s.orthogonality.pass {
                why.push(format!("{}: orthogonality max {:.3e}", s.name, s.orthogonality.max_value));
            }
            if !s.parseval.pass {
                why.push(format!("{}: Parseval sums in [{:.6}, {:.6}]", s.name, s.parseval.min_final, s.parseval.max_partial));
            }
        }
        if !report.partition_pass {
            why.push("random-walk mass escapes the catalog".into());
        }
        if !report.cross_check_pass {
            why.push("Monte Carlo basins disagree with the Parseval series".into());
        }
        why.join("; ")
    });
    Ok(Outcome {
        pass: report.pass,
        report: to_value(&report),
        message,
    })
}

fn render_cmd(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let t = cfg.triple()?;
    let mut summaries = Vec::new();
    for &which in &cfg.image.which {
        let canvas = render::render(&t, which, &cfg.image, cfg.seed)?;
        let stem = which.file_stem();
        let mut files = vec![format!("{stem}.ppm")];
        canvas.write_ppm(&out.join(&files[0]))?;
        if cfg.image.png {
            files.push(format!("{stem}.png"));
            canvas.write_png(&out.join(&files[1]))?;
        }
        summaries.push(render::summary(which, &canvas, cfg.image.points, files));
    }
    let report = json!({ "images": summaries, "pass": true });
    write_json(&out.join("render.json"), &report)?;
    Ok(Outcome {
        pass: true,
        report,
        message: None,
    })
}

fn simulate(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let t = cfg.triple()?;
    let catalog = build_catalog(&t)?;
    let pts = starts(cfg, t.dim());
    check_starts(&pts, t.dim())?;
    let runs: Vec<SimulationReport> = pts
        .iter()
        .enumerate()
        .map(|(k, x)| simulate_paths(&t, &catalog, x, cfg.paths, cfg.steps, cfg.seed.wrapping_add(k as u64)))
        .collect();
    let path = out.join("simulate.csv");
    let mut w = csv_writer(&path)?;
    let mut header: Vec<String> = (0..t.dim()).map(|i| format!("x{i}")).collect();
    header.extend(["set".into(), "h".into(), "sigma".into()]);
    w.write_record(&header).map_err(|e| csv_err(&path, e))?;
    for r in &runs {
        let rows = r
            .sets
            .iter()
            .map(|b| (b.set.as_str(), b.h, b.sigma))
            .chain(std::iter::once(("unclassified", r.unclassified, r.unclassified_sigma)));
        for (set, h, sigma) in rows {
            let mut rec: Vec<String> = r.start.iter().map(|x| format!("{x}")).collect();
            rec.extend([set.to_string(), format!("{h}"), format!("{sigma}")]);
            w.write_record(&rec).map_err(|e| csv_err(&path, e))?;
        }
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    let report = json!({ "sets": catalog.labels(), "runs": runs, "pass": true });
    write_json(&out.join("simulate.json"), &report)?;
    Ok(Outcome {
        pass: true,
        report,
        message: None,
    })
}
