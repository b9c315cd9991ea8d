use ifs_spectra_core::dynamics::build_catalog;
use ifs_spectra_core::measure::{FourierEvaluator, Grid, GridFunction, DEFAULT_EPS};
use ifs_spectra_core::presets;
use ifs_spectra_core::spectrum::{assemble_spectrum, Horizon};
use ifs_spectra_core::verify::{estimate_on_grid, harmonicity_residual, parseval_sweep};

#[test]
fn line_basin_is_harmonic_on_a_grid() {
    let t = presets::planar_example();
    let cat = build_catalog(&t).unwrap();
    // the invariant box of X_L: every tau_l maps it into itself, so R_W h only reads the grid
    let grid = Grid::new(vec![-2.0 / 9.0, 0.0], vec![2.0 / 3.0, 2.0 / 3.0], vec![11, 11]).unwrap();

    // h from the series over the line spectrum carries no sampling noise, so its residual
    // is the interpolation error of the grid alone
    let sp = assemble_spectrum(&t, &cat, Horizon::Radius(4096)).unwrap();
    let e = FourierEvaluator::new(&t, DEFAULT_EPS).unwrap();
    let sweep = parseval_sweep(&sp, &e, &grid.nodes(), &[4096]);
    let series = GridFunction {
        grid: grid.clone(),
        values: sweep.rows.iter().map(|r| r.by_source[1]).collect(),
    };
    let floor = harmonicity_residual(&t, &series);

    let (h, sigma) = estimate_on_grid(&t, &cat, 1, grid.clone(), 10_000, 64, 99);
    let residual = harmonicity_residual(&t, &h);
    eprintln!("residual {residual:.4e} interpolation floor {floor:.4e} pooled sigma {sigma:.4e}");
    assert!(floor < 2.0 * sigma, "grid too coarse: floor {floor}");
    assert!(residual <= floor + 3.0 * sigma, "residual {residual} > {floor} + 3 x {sigma}");
    // the estimate itself tracks the series node by node
    let worst = h.values.iter().zip(&series.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst <= 5.0 * sigma, "node deviation {worst}");

    // negative control: the first coordinate is far from harmonic
    let coord = GridFunction::from_fn(grid, |x| x[0]);
    assert!(harmonicity_residual(&t, &coord) > 10.0 * (floor + 3.0 * sigma));
}
