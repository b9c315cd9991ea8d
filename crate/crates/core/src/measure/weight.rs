//! Trigonometric weights `|sum_b p_b e^{2 pi i b.x}|^2` and the quadrature identity.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::cyclotomic::root_sum_vanishes;
use crate::lattice::{Digit, Rational, RationalVector};
use crate::triple::{frac, FactoredTriple, HadamardTriple};

/// `e^{2 pi i t}` with the argument reduced mod 1 first.
#[inline]
pub fn unit(t: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * (t - t.round())).sin_cos();
    Complex64::new(c, s)
}

#[inline]
pub(crate) fn dot(a: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(u, v)| u * v).sum()
}

/// `W(x) = |m(x)|^2` with mask `m(x) = sum_b p_b e^{2 pi i b.x}`.
#[derive(Clone, Debug)]
pub struct WeightFunction {
    digits: Vec<Digit>,
    digits_f: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

impl WeightFunction {
    /// Equal weights `1/N`.
    pub fn uniform(digits: &[Digit]) -> Self {
        let n = digits.len() as f64;
        Self::build(digits, vec![1.0 / n; digits.len()])
    }

    pub fn weighted(digits: &[Digit], probs: &[f64]) -> Result<Self> {
        if probs.len() != digits.len() {
            return Err(Error::BadWeights(format!(
                "{} weights for {} digits",
                probs.len(),
                digits.len()
            )));
        }
        if probs.iter().any(|&p| !p.is_finite() || p <= 0.0) {
            return Err(Error::BadWeights("weights must be positive".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(Self::build(digits, probs.to_vec()))
    }

    fn build(digits: &[Digit], probs: Vec<f64>) -> Self {
        Self {
            digits: digits.to_vec(),
            digits_f: digits
                .iter()
                .map(|v| v.iter().map(|&x| x as f64).collect())
                .collect(),
            probs,
        }
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn mask(&self, x: &[f64]) -> Complex64 {
        self.digits_f
            .iter()
            .zip(&self.probs)
            .map(|(b, &p)| unit(dot(b, x)) * p)
            .sum()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.mask(x).norm_sqr()
    }

    /// Exact decision of `W(x) = 0` for rational `x` with equal weights; `None` when the
    /// denominators are too large for the exact test.
    pub fn vanishes_exact(&self, x: &RationalVector) -> Option<bool> {
        let phases: Vec<(Rational, i64)> = self.digits.iter().map(|b| (frac(&x.dot_int(b)), 1)).collect();
        root_sum_vanishes(&phases)
    }

    /// `W(x) = 1` exactly, i.e. every `b.x` is an integer (equal weights, `0` among the digits).
    pub fn is_one_exact(&self, x: &RationalVector) -> bool {
        self.digits.iter().all(|b| x.dot_int(b).is_integer())
    }
}

/// `W~(y) = (1/N1) sum_i W_i(y)`, the fiber-averaged weight of a factored triple.
#[derive(Clone, Debug)]
pub struct FiberWeight {
    fibers: Vec<WeightFunction>,
}

impl FiberWeight {
    pub fn new(f: &FactoredTriple) -> Self {
        Self {
            fibers: f.eta.iter().map(|e| WeightFunction::uniform(e)).collect(),
        }
    }

    /// `W_i`.
    pub fn fiber(&self, i: usize) -> &WeightFunction {
        &self.fibers[i]
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.fibers.iter().map(|w| w.eval(y)).sum::<f64>() / self.fibers.len() as f64
    }

    /// Exact zero test: `W~` vanishes iff every `W_i` does.
    pub fn vanishes_exact(&self, y: &RationalVector) -> Option<bool> {
        let mut all = true;
        for w in &self.fibers {
            all &= w.vanishes_exact(y)?;
        }
        Some(all)
    }

    /// Differences `eta_ij - eta_ij'`; `W~(y) = 1` iff all of them pair integrally with `y`.
    pub fn difference_set(&self) -> Vec<Digit> {
        let mut out = Vec::new();
        for w in &self.fibers {
            for a in w.digits() {
                for b in w.digits() {
                    let d: Digit = a.iter().zip(b).map(|(x, y)| x - y).collect();
                    if d.iter().any(|&v| v != 0) && !out.contains(&d) {
                        out.push(d);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

fn random_points(d: usize, count: usize, half_width: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..d).map(|_| rng.gen_range(-half_width..half_width)).collect())
        .collect()
}

/// Largest `|sum_l W(tau_l x) - 1|` over `count` random points of `[-2, 2]^d`.
pub fn quadrature_check_with(t: &HadamardTriple, w: &WeightFunction, count: usize, seed: u64) -> f64 {
    random_points(t.dim(), count, 2.0, seed)
        .iter()
        .map(|x| {
            let s: f64 = t.l().iter().map(|l| w.eval(&t.tau_f64(l, x))).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Deviation from `sum_l W_B(tau_l x) = 1` for equal weights.
pub fn quadrature_check(t: &HadamardTriple, count: usize, seed: u64) -> f64 {
    quadrature_check_with(t, &WeightFunction::uniform(t.b()), count, seed)
}

/// Deviation from the quadrature identity when `W_B` uses the weights `p`.
pub fn unequal_weights_probe(t: &HadamardTriple, p: &[f64], count: usize, seed: u64) -> Result<f64> {
    let w = WeightFunction::weighted(t.b(), p)?;
    Ok(quadrature_check_with(t, &w, count, seed))
}
