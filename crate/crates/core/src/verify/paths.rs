//! Monte Carlo random walks on the dual system and the harmonic functions they estimate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::InvariantCatalog;
use crate::measure::{Grid, GridFunction, WeightFunction};
use crate::triple::HadamardTriple;

/// Default number of steps before a path is classified.
pub const DEFAULT_STEPS: usize = 64;

/// Paths simulated per RNG stream.
const CHUNK: usize = 4096;

/// One simulated trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct PathSample {
    pub start: Vec<f64>,
    /// Indices into `L` of the digits drawn.
    pub digits: Vec<usize>,
    /// Running product of the transition weights along the path.
    pub probability: f64,
    pub end: Vec<f64>,
}

/// Draws a path of `steps` transitions, digit `l` taken with probability `W_B(tau_l y)`.
pub fn sample_path(t: &HadamardTriple, w: &WeightFunction, x: &[f64], steps: usize, rng: &mut impl Rng) -> PathSample {
    let mut y = x.to_vec();
    let mut digits = Vec::with_capacity(steps);
    let mut probability = 1.0;
    let mut next: Vec<Vec<f64>> = vec![Vec::new(); t.n()];
    let mut weights = vec![0.0; t.n()];
    for _ in 0..steps {
        for (k, l) in t.l().iter().enumerate() {
            next[k] = t.tau_f64(l, &y);
            weights[k] = w.eval(&next[k]);
        }
        let total: f64 = weights.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut pick = t.n() - 1;
        for (k, &wk) in weights.iter().enumerate() {
            if u < wk {
                pick = k;
                break;
            }
            u -= wk;
        }
        // the last positive weight absorbs rounding at the top of the range
        while weights[pick] == 0.0 && pick > 0 {
            pick -= 1;
        }
        probability *= weights[pick];
        digits.push(pick);
        y = std::mem::take(&mut next[pick]);
    }
    PathSample {
        start: x.to_vec(),
        digits,
        probability,
        end: y,
    }
}

/// `P_x(w_1 = l_1, ..., w_n = l_n)`: the product of the weights along the cylinder.
pub fn cylinder_probability(t: &HadamardTriple, x: &[f64], digits: &[usize]) -> f64 {
    let w = WeightFunction::uniform(t.b());
    let mut y = x.to_vec();
    let mut p = 1.0;
    for &k in digits {
        y = t.tau_f64(&t.l()[k], &y);
        p *= w.eval(&y);
    }
    p
}

#[derive(Clone, Debug, Serialize)]
pub struct BasinEstimate {
    pub set: String,
    pub h: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    pub start: Vec<f64>,
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
    pub sets: Vec<BasinEstimate>,
    pub unclassified: f64,
    pub unclassified_sigma: f64,
    /// Sum of the set estimates and the unclassified mass; 1 by construction.
    pub total: f64,
    /// Unclassified mass above `3 sigma + 0.01`.
    pub possibly_incomplete: bool,
}

impl SimulationReport {
    /// Combined standard error of the classified mass.
    pub fn classified_sigma(&self) -> f64 {
        let p = 1.0 - self.unclassified;
        (p * (1.0 - p) / self.paths as f64).sqrt()
    }
}

fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Per-set counts of `paths` walks from `x`; the last slot counts unclassified paths.
fn basin_counts(t: &HadamardTriple, catalog: &InvariantCatalog, x: &[f64], paths: usize, steps: usize, seed: u64) -> Vec<u64> {
    let w = WeightFunction::uniform(t.b());
    let slots = catalog.len() + 1;
    let chunks = paths.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut counts = vec![0u64; slots];
            let n = CHUNK.min(paths - c * CHUNK);
            for _ in 0..n {
                let p = sample_path(t, &w, x, steps, &mut rng);
                counts[catalog.classify(&p.end).unwrap_or(slots - 1)] += 1;
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; slots];
    for c in per_chunk {
        for (a, b) in total.iter_mut().zip(c) {
            *a += b;
        }
    }
    total
}

/// Estimates `h_F(x) = P_x(path ends near F)` for every catalog set `F`.
pub fn simulate_paths(
    t: &HadamardTriple,
    catalog: &InvariantCatalog,
    x: &[f64],
    paths: usize,
    steps: usize,
    seed: u64,
) -> SimulationReport {
    let counts = basin_counts(t, catalog, x, paths, steps, seed);
    let n = paths.max(1);
    let sets: Vec<BasinEstimate> = catalog
        .labels()
        .into_iter()
        .zip(&counts)
        .map(|(set, &c)| {
            let h = c as f64 / n as f64;
            BasinEstimate {
                set,
                h,
                sigma: binomial_sigma(h, n),
            }
        })
        .collect();
    let unclassified = counts[catalog.len()] as f64 / n as f64;
    let unclassified_sigma = binomial_sigma(unclassified, n);
    let total = sets.iter().map(|s| s.h).sum::<f64>() + unclassified;
    SimulationReport {
        start: x.to_vec(),
        paths,
        steps,
        seed,
        possibly_incomplete: unclassified > 3.0 * unclassified_sigma + 0.01,
        sets,
        unclassified,
        unclassified_sigma,
        total,
    }
}

/// Monte Carlo estimate of `h_F` at every grid node, with the pooled standard error.
pub fn estimate_on_grid(
    t: &HadamardTriple,
    catalog: &InvariantCatalog,
    set: usize,
    grid: Grid,
    paths: usize,
    steps: usize,
    seed: u64,
) -> (GridFunction, f64) {
    let nodes = grid.nodes();
    let values: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let counts = basin_counts(t, catalog, x, paths, steps, seed.wrapping_add(k as u64));
            counts[set] as f64 / paths as f64
        })
        .collect();
    let var: f64 = values.iter().map(|h| h * (1.0 - h) / paths as f64).sum();
    let pooled = (var / values.len() as f64).sqrt().max(1.0 / paths as f64);
    (GridFunction { grid, values }, pooled)
}

/// `max |R_W h - h|` over interior grid nodes.
pub fn harmonicity_residual(t: &HadamardTriple, h: &GridFunction) -> f64 {
    let w = WeightFunction::uniform(t.b());
    (0..h.grid.len())
        .filter(|&k| !h.grid.is_boundary(k))
        .map(|k| {
            let x = h.grid.node(k);
            let rh = crate::measure::transfer::transfer_at(t, &w, |y| h.eval(y), &x);
            (rh - h.values[k]).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest `|P_x(U) - P_y(U)| / |x - y|` for the cylinder `U` fixed by `digits`.
pub fn lipschitz_probe(t: &HadamardTriple, digits: &[usize], pairs: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    pairs
        .iter()
        .filter_map(|(x, y)| {
            let d = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            (d > 0.0).then(|| (cylinder_probability(t, x, digits) - cylinder_probability(t, y, digits)).abs() / d)
        })
        .fold(0.0, f64::max)
}

/// Random pairs at distance `scale` inside `[-1, 1]^d`.
pub fn random_pairs(dim: usize, count: usize, scale: f64, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let dir: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            let y = x.iter().zip(&dir).map(|(a, b)| a + scale * b / n).collect();
            (x, y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::build_catalog;
    use crate::presets;

    #[test]
    fn path_probability_matches_cylinder_formula() {
        let t = presets::planar_example();
        let w = WeightFunction::uniform(t.b());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let p = sample_path(&t, &w, &x, 12, &mut rng);
            assert!(p.probability > 0.0);
            let exact = cylinder_probability(&t, &x, &p.digits);
            assert!((p.probability - exact).abs() <= 1e-12 * exact.max(1e-300), "{} {}", p.probability, exact);
        }
    }

    #[test]
    fn cylinder_probabilities_sum_to_one() {
        let t = presets::planar_example();
        let x = [0.3, -0.2];
        let mut total = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                total += cylinder_probability(&t, &x, &[a, b]);
            }
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seeded_simulation_is_thread_independent() {
        let t = presets::planar_example();
        let c = build_catalog(&t).unwrap();
        let a = simulate_paths(&t, &c, &[0.2, 0.1], 10_000, 64, 9);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| simulate_paths(&t, &c, &[0.2, 0.1], 10_000, 64, 9));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!((a.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn start_on_the_line_stays_there() {
        let t = presets::planar_example();
        let c = build_catalog(&t).unwrap();
        let r = simulate_paths(&t, &c, &[0.0, 2.0 / 3.0], 5_000, 64, 1);
        assert_eq!(r.sets[1].h, 1.0);
        let r = simulate_paths(&presets::quarter_cantor(), &build_catalog(&presets::quarter_cantor()).unwrap(), &[0.7], 5_000, 64, 1);
        assert_eq!(r.sets[0].h, 1.0);
    }

    #[test]
    fn constant_function_is_harmonic_and_a_coordinate_is_not() {
        let t = presets::planar_example();
        let g = Grid::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![11, 11]).unwrap();
        let one = GridFunction::from_fn(g.clone(), |_| 1.0);
        assert!(harmonicity_residual(&t, &one) < 1e-12);
        let coord = GridFunction::from_fn(g, |x| x[0]);
        assert!(harmonicity_residual(&t, &coord) > 0.1);
    }

    #[test]
    fn lipschitz_ratios_stay_bounded() {
        let t = presets::planar_example();
        // |grad W| <= 2 |m| |grad m| <= 4 pi sum ||b|| / N, and ||S^-1||_2 < 0.3
        let bound = 4.0 * std::f64::consts::PI * (3.0 + 1.0 + 10f64.sqrt()) / 4.0 * 0.3;
        for scale in [1e-1, 1e-2, 1e-3] {
            let pairs = random_pairs(2, 100, scale, 5);
            assert!(lipschitz_probe(&t, &[0], &pairs) <= bound * 1.05);
            assert!(lipschitz_probe(&t, &[0, 2, 1], &pairs) < 10.0);
        }
        assert_eq!(lipschitz_probe(&t, &[0], &[(vec![0.1, 0.2], vec![0.1, 0.2])]), 0.0);
    }
}
