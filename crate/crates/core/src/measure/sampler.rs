//! Point clouds on attractors of `x -> A (x + t)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::weight::dot;
use crate::error::{Error, Result};
use crate::triple::HadamardTriple;

/// Largest point count produced by the digit expansion.
pub const MAX_DIGIT_POINTS: u128 = 10_000_000;

/// Default number of discarded chaos-game steps.
pub const DEFAULT_BURN_IN: usize = 50;

/// Affine contractions `x -> A (x + t)` sharing the matrix `A`.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    dim: usize,
    a: Vec<f64>,
    shifts: Vec<Vec<f64>>,
}

impl AffineSystem {
    pub fn new(dim: usize, a: Vec<f64>, shifts: Vec<Vec<f64>>) -> Self {
        assert_eq!(a.len(), dim * dim);
        Self { dim, a, shifts }
    }

    /// The maps `R^-1 (x + b)` whose attractor `X_B` carries the invariant measure.
    pub fn measure(t: &HadamardTriple) -> Self {
        Self::new(t.dim(), t.r_inv_f64().to_vec(), to_f64(t.b()))
    }

    /// The dual maps `S^-1 (x + l)` with attractor `X_L`.
    pub fn dual(t: &HadamardTriple) -> Self {
        Self::new(t.dim(), t.s_inv_f64().to_vec(), to_f64(t.l()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn apply(&self, k: usize, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let t = &self.shifts[k];
        for i in 0..d {
            let row = &self.a[i * d..(i + 1) * d];
            out[i] = row.iter().zip(x.iter().zip(t)).map(|(r, (xv, tv))| r * (xv + tv)).sum();
        }
    }
}

fn to_f64(v: &[Vec<i64>]) -> Vec<Vec<f64>> {
    v.iter().map(|b| b.iter().map(|&x| x as f64).collect()).collect()
}

/// Seeded sampler of the uniform-weight invariant measure.
#[derive(Clone, Debug)]
pub struct MeasureSampler {
    system: AffineSystem,
    seed: u64,
    burn_in: usize,
}

impl MeasureSampler {
    pub fn new(system: AffineSystem, seed: u64) -> Self {
        Self {
            system,
            seed,
            burn_in: DEFAULT_BURN_IN,
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn system(&self) -> &AffineSystem {
        &self.system
    }

    /// `count` chaos-game points after the burn-in, digits drawn uniformly.
    pub fn chaos_game(&self, count: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(count);
        self.chaos_game_each(count, |p| out.push(p.to_vec()));
        out
    }

    /// Streams the chaos-game points to `f` without storing them.
    pub fn chaos_game_each(&self, count: usize, mut f: impl FnMut(&[f64])) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let d = self.system.dim;
        let n = self.system.len();
        let mut x = vec![0.0; d];
        let mut y = vec![0.0; d];
        for step in 0..self.burn_in + count {
            self.system.apply(rng.gen_range(0..n), &x, &mut y);
            std::mem::swap(&mut x, &mut y);
            if step >= self.burn_in {
                f(&x);
            }
        }
    }

    /// All points `sum_{k=1}^n A^k t_k` over words of length `n`.
    pub fn digit_expansion(&self, depth: u32) -> Result<Vec<Vec<f64>>> {
        let n = self.system.len() as u128;
        let total = n.checked_pow(depth).unwrap_or(u128::MAX);
        if total > MAX_DIGIT_POINTS {
            return Err(Error::TooManyPoints {
                requested: total,
                limit: MAX_DIGIT_POINTS,
            });
        }
        let d = self.system.dim;
        let mut pts = vec![vec![0.0; d]];
        let mut buf = vec![0.0; d];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(pts.len() * n as usize);
            for p in &pts {
                for k in 0..n as usize {
                    self.system.apply(k, p, &mut buf);
                    next.push(buf.clone());
                }
            }
            pts = next;
        }
        Ok(pts)
    }
}

/// Componentwise minimum and maximum of a point cloud.
pub fn bounding_box(points: &[Vec<f64>]) -> Option<(Vec<f64>, Vec<f64>)> {
    let first = points.first()?;
    let mut lo = first.clone();
    let mut hi = first.clone();
    for p in points {
        for i in 0..p.len() {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    Some((lo, hi))
}

/// Estimate of `int e^{2 pi i u.x} dmu` from sample points.
pub fn empirical_transform(points: &[Vec<f64>], u: &[f64]) -> num_complex::Complex64 {
    points.iter().map(|p| super::weight::unit(dot(u, p))).sum::<num_complex::Complex64>() / points.len() as f64
}
