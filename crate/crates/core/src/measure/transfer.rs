//! The transfer operator `(R_W f)(x) = sum_l W_B(tau_l x) f(tau_l x)` on grid functions.

use super::weight::WeightFunction;
use crate::error::{Error, Result};
use crate::triple::HadamardTriple;

/// Regular tensor grid on a box; `n[i]` nodes along axis `i` including both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub n: Vec<usize>,
}

impl Grid {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, n: Vec<usize>) -> Result<Self> {
        if n.is_empty() || n.contains(&0) {
            return Err(Error::EmptyGrid);
        }
        Ok(Self { lo, hi, n })
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn step(&self, i: usize) -> f64 {
        if self.n[i] > 1 {
            (self.hi[i] - self.lo[i]) / (self.n[i] - 1) as f64
        } else {
            0.0
        }
    }

    /// Multi-index of a flat node index, first axis fastest.
    pub fn index(&self, mut k: usize) -> Vec<usize> {
        self.n
            .iter()
            .map(|&m| {
                let r = k % m;
                k /= m;
                r
            })
            .collect()
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.n).rev().fold(0, |acc, (&i, &m)| acc * m + i)
    }

    pub fn node(&self, k: usize) -> Vec<f64> {
        self.index(k)
            .iter()
            .enumerate()
            .map(|(i, &j)| self.lo[i] + j as f64 * self.step(i))
            .collect()
    }

    pub fn nodes(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.node(k)).collect()
    }

    /// Whether the node touches the boundary of the grid box.
    pub fn is_boundary(&self, k: usize) -> bool {
        self.index(k).iter().zip(&self.n).any(|(&j, &m)| m > 1 && (j == 0 || j == m - 1))
    }
}

/// Values on the nodes of a grid, extended by multilinear interpolation and clamping.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len()).map(|k| f(&grid.node(k))).collect();
        Self { grid, values }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let g = &self.grid;
        let d = g.dim();
        let mut base = vec![0usize; d];
        let mut frac = vec![0.0; d];
        for i in 0..d {
            if g.n[i] == 1 {
                continue;
            }
            let s = ((x[i] - g.lo[i]) / g.step(i)).clamp(0.0, (g.n[i] - 1) as f64);
            let j = (s.floor() as usize).min(g.n[i] - 2);
            base[i] = j;
            frac[i] = s - j as f64;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut idx = base.clone();
            for i in 0..d {
                let up = corner >> i & 1 == 1;
                if g.n[i] == 1 {
                    if up {
                        w = 0.0;
                    }
                    continue;
                }
                if up {
                    idx[i] += 1;
                    w *= frac[i];
                } else {
                    w *= 1.0 - frac[i];
                }
            }
            if w != 0.0 {
                acc += w * self.values[g.flat(&idx)];
            }
        }
        acc
    }
}

/// `(R_W f)(x)` for an arbitrary function `f`.
pub fn transfer_at(t: &HadamardTriple, w: &WeightFunction, f: impl Fn(&[f64]) -> f64, x: &[f64]) -> f64 {
    t.l()
        .iter()
        .map(|l| {
            let y = t.tau_f64(l, x);
            w.eval(&y) * f(&y)
        })
        .sum()
}

/// Applies `R_W` at every node, reading `f` off the grid by interpolation.
pub fn transfer_apply(t: &HadamardTriple, f: &GridFunction) -> Result<GridFunction> {
    if f.grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let w = WeightFunction::uniform(t.b());
    let values = (0..f.grid.len())
        .map(|k| transfer_at(t, &w, |y| f.eval(y), &f.grid.node(k)))
        .collect();
    Ok(GridFunction {
        grid: f.grid.clone(),
        values,
    })
}
