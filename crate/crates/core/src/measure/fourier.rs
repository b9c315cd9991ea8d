//! Truncated infinite products for the Fourier transform of the invariant measure.

use num_complex::Complex64;
use serde::Serialize;

use super::weight::{dot, unit};
use crate::error::{Error, Result};
use crate::lattice::{contraction_certificate, rat_to_f64, Digit, RationalMatrix, MAX_CERT_POWER};
use crate::triple::{FactoredTriple, HadamardTriple};

/// Default absolute tolerance for `mu_hat`.
pub const DEFAULT_EPS: f64 = 1e-10;

/// Hard cap on the number of factors.
const MAX_DEPTH: usize = 4000;

/// A transform value together with its certified truncation bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FourierValue {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// Bound on `|mu_hat(x) - value|` from the discarded factors (plus rounding).
    pub error_bound: f64,
    pub depth: usize,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Evaluates `prod_{k>=1} m(A^k x)` with `m(z) = (1/N) sum_b e^{2 pi i b.z}` and `A = S^-1`.
///
/// With `||A^k x||_inf <= C c^k ||x||_inf` and `|m(z) - 1| <= 2 pi beta ||z||_inf`
/// (`beta = max ||b||_1`), the factors beyond `K` change the product by at most
/// `|P_K| expm1(T_K)` where `T_K = 2 pi beta C ||x|| c^{K+1} / (1 - c)`.
#[derive(Clone, Debug)]
pub struct FourierEvaluator {
    dim: usize,
    a: Vec<f64>,
    digits: Vec<Vec<f64>>,
    inv_n: f64,
    beta: f64,
    big_c: f64,
    c: f64,
    eps: f64,
}

impl FourierEvaluator {
    pub fn new(t: &HadamardTriple, eps: f64) -> Result<Self> {
        Self::from_parts(t.s_inv(), t.b(), eps)
    }

    /// Evaluator for the measure of the maps `x -> R^-1 (x + b)`, given `a = S^-1 = R^-T`.
    pub fn from_parts(a: &RationalMatrix, digits: &[Digit], eps: f64) -> Result<Self> {
        let d = a.rows();
        let (k0, q) = contraction_certificate(a, MAX_CERT_POWER).ok_or(Error::Undecided {
            max_power: MAX_CERT_POWER,
            min_modulus: f64::NAN,
        })?;
        // round the rate up so the bound stays valid in floating point
        let c = (rat_to_f64(&q).powf(1.0 / k0 as f64) * (1.0 + 1e-12)).min(1.0 - 1e-15);
        let mut big_c: f64 = 1.0;
        let mut p = RationalMatrix::identity(d);
        for j in 1..k0 {
            p = p.mul(a);
            big_c = big_c.max(rat_to_f64(&p.inf_norm()) / c.powi(j as i32));
        }
        let beta = digits
            .iter()
            .map(|b| b.iter().map(|v| v.unsigned_abs() as f64).sum::<f64>())
            .fold(0.0, f64::max);
        Ok(Self {
            dim: d,
            a: a.to_f64(),
            digits: digits
                .iter()
                .map(|b| b.iter().map(|&v| v as f64).collect())
                .collect(),
            inv_n: 1.0 / digits.len() as f64,
            beta,
            big_c: big_c * (1.0 + 1e-12),
            c,
            eps,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Contraction data `(C, c)`.
    pub fn contraction(&self) -> (f64, f64) {
        (self.big_c, self.c)
    }

    fn mask(&self, z: &[f64]) -> Complex64 {
        self.digits.iter().map(|b| unit(dot(b, z))).sum::<Complex64>() * self.inv_n
    }

    fn tail(&self, norm: f64, k: usize) -> f64 {
        let t = std::f64::consts::TAU * self.beta * self.big_c * norm * self.c.powi(k as i32 + 1) / (1.0 - self.c);
        t.exp_m1()
    }

    /// The transform at `x`, truncated once the remaining factors are certified below `eps`.
    pub fn mu_hat(&self, x: &[f64]) -> FourierValue {
        self.mu_hat_with(x, self.eps)
    }

    pub fn mu_hat_with(&self, x: &[f64], eps: f64) -> FourierValue {
        let norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if norm == 0.0 {
            return FourierValue {
                value: Complex64::new(1.0, 0.0),
                error_bound: 0.0,
                depth: 0,
            };
        }
        let d = self.dim;
        let mut z = x.to_vec();
        let mut next = vec![0.0; d];
        let mut prod = Complex64::new(1.0, 0.0);
        let mut k = 0;
        loop {
            k += 1;
            for i in 0..d {
                next[i] = dot(&self.a[i * d..(i + 1) * d], &z);
            }
            std::mem::swap(&mut z, &mut next);
            prod *= self.mask(&z);
            let bound = prod.norm() * self.tail(norm, k);
            if bound < eps || k >= MAX_DEPTH {
                return FourierValue {
                    value: prod,
                    error_bound: bound + k as f64 * 4.0 * f64::EPSILON,
                    depth: k,
                };
            }
        }
    }

    /// Product with a fixed number of factors.
    pub fn mu_hat_depth(&self, x: &[f64], depth: usize) -> Complex64 {
        let d = self.dim;
        let mut z = x.to_vec();
        let mut next = vec![0.0; d];
        let mut prod = Complex64::new(1.0, 0.0);
        for _ in 0..depth {
            for i in 0..d {
                next[i] = dot(&self.a[i * d..(i + 1) * d], &z);
            }
            std::mem::swap(&mut z, &mut next);
            prod *= self.mask(&z);
        }
        prod
    }
}

/// `prod_{k=1}^{depth} m(S2^-k y, i_k)` with `m(y, i) = (1/N2) sum_j e^{2 pi i eta_ij . y}`.
pub fn fiber_transform(f: &FactoredTriple, prefix: &[usize], y: &[f64], depth: usize) -> Result<Complex64> {
    if prefix.len() < depth {
        return Err(Error::InvalidInput(format!(
            "prefix of length {} shorter than depth {depth}",
            prefix.len()
        )));
    }
    let a = f.s2.inverse()?.to_f64();
    let d = y.len();
    let mut z = y.to_vec();
    let mut prod = Complex64::new(1.0, 0.0);
    for &i in &prefix[..depth] {
        z = (0..d).map(|r| dot(&a[r * d..(r + 1) * d], &z)).collect();
        let fiber = &f.eta[i];
        let m: Complex64 = fiber
            .iter()
            .map(|e| unit(e.iter().zip(&z).map(|(&u, v)| u as f64 * v).sum()))
            .sum::<Complex64>()
            / fiber.len() as f64;
        prod *= m;
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::sampler::{AffineSystem, MeasureSampler};
    use crate::presets;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn origin_is_exactly_one() {
        let e = FourierEvaluator::new(&presets::planar_example(), DEFAULT_EPS).unwrap();
        let v = e.mu_hat(&[0.0, 0.0]);
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
        assert_eq!(v.depth, 0);
    }

    #[test]
    fn forced_zero() {
        let e = FourierEvaluator::new(&presets::quarter_cantor(), DEFAULT_EPS).unwrap();
        let v = e.mu_hat(&[2.0]);
        assert!(v.value.norm() < 1e-15);
    }

    #[test]
    fn spectrum_point_is_orthogonal_and_matches_deep_product() {
        let e = FourierEvaluator::new(&presets::planar_example(), DEFAULT_EPS).unwrap();
        let v = e.mu_hat(&[2.0, 0.0]);
        assert!(v.value.norm() < 1e-8);
        assert!((e.mu_hat_depth(&[2.0, 0.0], 60) - v.value).norm() < 1e-10);
    }

    #[test]
    fn truncation_bound_holds_against_deep_product() {
        let e = FourierEvaluator::new(&presets::planar_example(), 1e-8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = [rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)];
            let v = e.mu_hat(&x);
            let deep = e.mu_hat_depth(&x, 80);
            assert!((v.value - deep).norm() <= v.error_bound + 1e-13);
            assert!(v.error_bound < 1e-8 + 1e-12);
        }
    }

    #[test]
    fn refinement_identity() {
        let t = presets::planar_example();
        let e = FourierEvaluator::new(&t, DEFAULT_EPS).unwrap();
        let a = t.s_inv_f64();
        let w = crate::measure::WeightFunction::uniform(t.b());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let x = [rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)];
            let y = [a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]];
            let rhs = w.mask(&y) * e.mu_hat(&y).value;
            assert!((e.mu_hat(&x).value - rhs).norm() < 3e-10);
        }
    }

    #[test]
    fn conjugation_preserves_transform() {
        let t = presets::planar_example();
        let m = crate::triple::ConjugationMatrix::new(crate::lattice::IntMatrix::square(&[vec![1, 1], vec![0, 1]]).unwrap()).unwrap();
        let t2 = crate::triple::conjugate(&t, &m).unwrap();
        let e1 = FourierEvaluator::new(&t, DEFAULT_EPS).unwrap();
        let e2 = FourierEvaluator::new(&t2, DEFAULT_EPS).unwrap();
        let w1 = crate::measure::WeightFunction::uniform(t.b());
        let w2 = crate::measure::WeightFunction::uniform(t2.b());
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let x = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            // M^T x with M = [[1,1],[0,1]]
            let mtx = [x[0], x[0] + x[1]];
            assert!((w2.eval(&x) - w1.eval(&mtx)).abs() < 1e-12);
            assert!((e2.mu_hat(&x).value.norm() - e1.mu_hat(&mtx).value.norm()).abs() < 3e-10);
        }
    }

    #[test]
    fn chaos_game_moments() {
        let t = presets::planar_example();
        let e = FourierEvaluator::new(&t, DEFAULT_EPS).unwrap();
        let samples = 200_000;
        let pts = MeasureSampler::new(AffineSystem::measure(&t), 21).chaos_game(samples);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let u = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let mc: Complex64 = pts.iter().map(|p| unit(dot(&u, p))).sum::<Complex64>() / samples as f64;
            assert!((mc - e.mu_hat(&u).value).norm() < 4.0 / (samples as f64).sqrt());
        }
    }

    #[test]
    fn fiber_transform_matches_second_component_measure() {
        let f = crate::triple::factor_along(&presets::planar_example(), 1).unwrap();
        let mu2 = FourierEvaluator::new(&presets::three_quarter_cantor(), DEFAULT_EPS).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let y: f64 = rng.gen_range(-30.0..30.0);
            let prefix: Vec<usize> = (0..40).map(|_| rng.gen_range(0..2)).collect();
            let v = fiber_transform(&f, &prefix, &[y], 40).unwrap();
            assert!((v - mu2.mu_hat(&[y]).value).norm() < 1e-10);
        }
        assert_eq!(fiber_transform(&f, &[1], &[0.0], 1).unwrap(), Complex64::new(1.0, 0.0));
        let y = 0.7;
        let single = fiber_transform(&f, &[0], &[y], 1).unwrap();
        assert!((single - (unit(0.0) + unit(3.0 * y / 4.0)) / 2.0).norm() < 1e-15);
    }
}
