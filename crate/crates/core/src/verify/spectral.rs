//! Orthogonality and Parseval checks for a finite piece of a candidate spectrum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::lattice::RationalVector;
use crate::measure::FourierEvaluator;
use crate::spectrum::Spectrum;

/// Orthogonality passes when every off-diagonal transform is below this.
pub const ORTHOGONALITY_TOL: f64 = 1e-7;

/// Parseval passes when the final partial sum reaches this...
pub const PARSEVAL_FLOOR: f64 = 0.99;

/// ...and no partial sum exceeds `1 + PARSEVAL_SLACK`.
pub const PARSEVAL_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub elements: usize,
    pub pairs: usize,
    /// Largest `|mu_hat(lambda - lambda')|` over distinct pairs.
    pub max_value: f64,
    pub argmax: Option<(RationalVector, RationalVector)>,
    /// Largest truncation bound among the evaluations.
    pub max_error_bound: f64,
    pub pass: bool,
}

/// `max |mu_hat(lambda - lambda')|` over all distinct pairs, differences taken exactly.
pub fn orthogonality_check(values: &[RationalVector], e: &FourierEvaluator) -> OrthogonalityReport {
    let n = values.len();
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (0.0f64, 0.0f64, usize::MAX, usize::MAX);
            for j in i + 1..n {
                let d = (&values[i] - &values[j]).to_f64();
                let v = e.mu_hat(&d);
                let m = v.value.norm();
                best.1 = best.1.max(v.error_bound);
                if m > best.0 || best.2 == usize::MAX {
                    best = (m, best.1, i, j);
                }
            }
            best
        })
        .reduce(
            || (0.0, 0.0, usize::MAX, usize::MAX),
            |a, b| {
                let bound = a.1.max(b.1);
                let pick = if b.2 != usize::MAX && (a.2 == usize::MAX || b.0 > a.0 || (b.0 == a.0 && (b.2, b.3) < (a.2, a.3))) {
                    b
                } else {
                    a
                };
                (pick.0, bound, pick.2, pick.3)
            },
        );
    let pairs = n * n.saturating_sub(1) / 2;
    OrthogonalityReport {
        elements: n,
        pairs,
        max_value: best.0,
        argmax: (best.2 != usize::MAX).then(|| (values[best.2].clone(), values[best.3].clone())),
        max_error_bound: best.1,
        pass: best.0 + best.1 < ORTHOGONALITY_TOL,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParsevalRow {
    pub x: Vec<f64>,
    /// `(R, S_R(x))` for each radius of the schedule.
    pub partial_sums: Vec<(i64, f64)>,
    /// Contribution of each spectrum source at the largest radius.
    pub by_source: Vec<f64>,
    pub monotone: bool,
    pub pass: bool,
}

impl ParsevalRow {
    pub fn final_sum(&self) -> f64 {
        self.partial_sums.last().map_or(0.0, |p| p.1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParsevalReport {
    pub elements: usize,
    pub radii: Vec<i64>,
    pub rows: Vec<ParsevalRow>,
    pub min_final: f64,
    pub max_partial: f64,
    pub pass: bool,
}

/// `5^d` grid points of `[-1, 1]^d` followed by `random` uniform points.
pub fn default_test_points(dim: usize, side: usize, random: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    let total = side.pow(dim as u32);
    for k in 0..total {
        let mut idx = k;
        let p = (0..dim)
            .map(|_| {
                let i = idx % side;
                idx /= side;
                if side == 1 {
                    0.0
                } else {
                    -1.0 + 2.0 * i as f64 / (side - 1) as f64
                }
            })
            .collect();
        pts.push(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        pts.push((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }
    pts
}

/// Partial sums `S_R(x) = sum_{|lambda|_inf <= R} |mu_hat(x + lambda)|^2` over a radius schedule.
///
/// The spectrum must have been enumerated to at least the largest radius.
pub fn parseval_sweep(sp: &Spectrum, e: &FourierEvaluator, points: &[Vec<f64>], radii: &[i64]) -> ParsevalReport {
    let mut sorted = sp.clone();
    sorted.sort_by_norm();
    let vals = sorted.values_f64();
    let norms: Vec<f64> = vals.iter().map(|v| v.iter().fold(0.0f64, |m, c| m.max(c.abs()))).collect();
    let sources: Vec<usize> = sorted.elements.iter().map(|e| e.provenance.source).collect();
    let nsrc = sp.sources.len();
    let rows: Vec<ParsevalRow> = points
        .par_iter()
        .map(|x| {
            let mut partial = Vec::with_capacity(radii.len());
            let mut by_source = vec![0.0; nsrc];
            let mut sum = 0.0;
            let mut monotone = true;
            let mut idx = 0;
            let mut y = vec![0.0; x.len()];
            for &r in radii {
                while idx < vals.len() && norms[idx] <= r as f64 {
                    for (k, v) in y.iter_mut().enumerate() {
                        *v = x[k] + vals[idx][k];
                    }
                    let term = e.mu_hat(&y).value.norm_sqr();
                    by_source[sources[idx]] += term;
                    let next = sum + term;
                    monotone &= next >= sum;
                    sum = next;
                    idx += 1;
                }
                partial.push((r, sum));
            }
            let max_partial = partial.iter().map(|p| p.1).fold(0.0, f64::max);
            ParsevalRow {
                x: x.clone(),
                pass: monotone && sum >= PARSEVAL_FLOOR && max_partial <= 1.0 + PARSEVAL_SLACK,
                partial_sums: partial,
                by_source,
                monotone,
            }
        })
        .collect();
    let min_final = rows.iter().map(ParsevalRow::final_sum).fold(f64::INFINITY, f64::min);
    let max_partial = rows
        .iter()
        .flat_map(|r| r.partial_sums.iter().map(|p| p.1))
        .fold(0.0, f64::max);
    ParsevalReport {
        elements: vals.len(),
        radii: radii.to_vec(),
        pass: rows.iter().all(|r| r.pass),
        rows,
        min_final,
        max_partial,
    }
}
