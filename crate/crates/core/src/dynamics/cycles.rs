//! Periodic orbits of `x -> A (x + l)` on which a trigonometric weight is identically one.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::lattice::{dual_lattice_points, invariant_box, Digit, RationalBox, RationalMatrix, RationalVector};
use crate::measure::{FiberWeight, WeightFunction};
use crate::triple::{FactoredTriple, HadamardTriple};

/// Upper bound on the number of simple cycles collected from one candidate graph.
pub const MAX_CYCLES: usize = 10_000;

/// A periodic orbit `points[k + 1] = A (points[k] + word[k])`, indices mod the period.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cycle {
    pub word: Vec<Digit>,
    /// Positions of the word digits in the digit list of the system.
    pub word_index: Vec<usize>,
    pub points: Vec<RationalVector>,
    /// Weight at each point; 1 up to rounding for an extreme cycle.
    pub weights: Vec<f64>,
}

impl Cycle {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.points.contains(x)
    }

    /// Checks `A (points[k] + word[k]) = points[k + 1]` exactly along the whole orbit.
    pub fn closes_under(&self, a: &RationalMatrix) -> bool {
        let m = self.period();
        (0..m).all(|k| a.apply(&self.points[k].add_int(&self.word[k])) == self.points[(k + 1) % m])
    }

    /// Whether `g . x` is an integer for every generator and every point.
    pub fn integral_against(&self, gens: &[Digit]) -> bool {
        self.points
            .iter()
            .all(|p| gens.iter().all(|g| p.dot_int(g).is_integer()))
    }

    pub fn points_f64(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(RationalVector::to_f64).collect()
    }

    /// Rotates so that the word index sequence is lexicographically least.
    fn canonical(mut self) -> Self {
        let m = self.period();
        let best = (0..m)
            .min_by(|&a, &b| {
                let ra = self.word_index[a..].iter().chain(&self.word_index[..a]);
                let rb = self.word_index[b..].iter().chain(&self.word_index[..b]);
                ra.cmp(rb)
            })
            .unwrap_or(0);
        self.word.rotate_left(best);
        self.word_index.rotate_left(best);
        self.points.rotate_left(best);
        self.weights.rotate_left(best);
        self
    }
}

/// The candidate graph together with the cycles found in it.
#[derive(Clone, Debug, Serialize)]
pub struct CycleSearch {
    pub bounds: RationalBox,
    pub candidates: usize,
    pub edges: usize,
    pub cycles: Vec<Cycle>,
}

/// All cycles of `x -> A (x + l)` through points `x` with `g . x` integral for all `g`.
///
/// Candidates are the dual-lattice points of `gens` inside a box containing the attractor;
/// every point of such a cycle is a candidate, so the search is exhaustive.
pub fn lattice_cycles(
    a: &RationalMatrix,
    digits: &[Digit],
    gens: &[Digit],
    weight: impl Fn(&[f64]) -> f64,
) -> Result<CycleSearch> {
    let bounds = invariant_box(a, digits)?.bounds;
    let cand = dual_lattice_points(gens, &bounds)?;
    let pts = &cand.points;
    let n = pts.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut edges = 0;
    for (i, x) in pts.iter().enumerate() {
        for (k, l) in digits.iter().enumerate() {
            let y = a.apply(&x.add_int(l));
            if let Ok(j) = pts.binary_search(&y) {
                adj[i].push((k, j));
                edges += 1;
            }
        }
    }
    let mut cycles = Vec::new();
    // each simple cycle is found once, from its smallest node
    for s in 0..n {
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut on_path = BTreeSet::new();
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        on_path.insert(s);
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next >= adj[node].len() {
                stack.pop();
                on_path.remove(&node);
                path.pop();
                continue;
            }
            let (k, j) = adj[node][*next];
            *next += 1;
            if j == s {
                let mut full = path.clone();
                full.push((node, k));
                cycles.push(build(pts, digits, &full, &weight));
                if cycles.len() >= MAX_CYCLES {
                    break;
                }
            } else if j > s && !on_path.contains(&j) {
                path.push((node, k));
                on_path.insert(j);
                stack.push((j, 0));
            }
        }
        if cycles.len() >= MAX_CYCLES {
            break;
        }
    }
    let mut cycles: Vec<Cycle> = cycles.into_iter().map(Cycle::canonical).collect();
    cycles.sort_by(|a, b| (a.period(), &a.points).cmp(&(b.period(), &b.points)));
    Ok(CycleSearch {
        bounds,
        candidates: n,
        edges,
        cycles,
    })
}

fn build(pts: &[RationalVector], digits: &[Digit], steps: &[(usize, usize)], weight: &impl Fn(&[f64]) -> f64) -> Cycle {
    let points: Vec<RationalVector> = steps.iter().map(|&(i, _)| pts[i].clone()).collect();
    Cycle {
        word: steps.iter().map(|&(_, k)| digits[k].clone()).collect(),
        word_index: steps.iter().map(|&(_, k)| k).collect(),
        weights: points.iter().map(|p| weight(&p.to_f64())).collect(),
        points,
    }
}

/// Cycles of the dual maps `tau_l` on which `W_B = 1`.
pub fn extreme_cycles(t: &HadamardTriple) -> Result<Vec<Cycle>> {
    Ok(extreme_cycle_search(t)?.cycles)
}

pub fn extreme_cycle_search(t: &HadamardTriple) -> Result<CycleSearch> {
    let w = WeightFunction::uniform(t.b());
    lattice_cycles(t.s_inv(), t.l(), t.b(), |x| w.eval(x))
}

/// Cycles of `y -> S2^-1 (y + s_j)` on which the fiber-averaged weight equals one.
pub fn wtilde_cycles(f: &FactoredTriple) -> Result<Vec<Cycle>> {
    let w = FiberWeight::new(f);
    let s2_inv = f.s2.inverse()?;
    Ok(lattice_cycles(&s2_inv, &f.second, &w.difference_set(), |y| w.eval(y))?.cycles)
}
