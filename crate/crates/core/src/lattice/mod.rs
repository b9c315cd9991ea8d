//! Exact integer and rational linear algebra.

pub mod boxes;
pub mod cyclotomic;
pub mod dual;
pub mod eigen;
pub mod matrix;

use nalgebra::DMatrix;
use num_traits::One;
use serde::Serialize;

pub use boxes::{invariant_box, AdaptedNorm, InvariantBox};
pub use dual::{dual_lattice_points, DualLatticePointSet};
pub use eigen::{rational_eigen_lines, EigenLine};
pub use matrix::{parse_rational, rat, rat_int, rat_to_f64, rat_to_string, Digit, IntMatrix, Rational, RationalBox, RationalMatrix, RationalVector};

use crate::error::{Error, Result};

/// Largest power tried when certifying `||M^-k||_inf < 1`.
pub const MAX_CERT_POWER: u32 = 64;

/// Outcome of the expansiveness test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Expansiveness {
    /// `||M^-power||_inf = norm < 1`, computed exactly.
    Certified {
        power: u32,
        #[serde(serialize_with = "ser_rational")]
        norm: Rational,
    },
    /// A numerically computed eigenvalue with modulus at most `1 + 1e-9`.
    NotExpansive { eigenvalue_modulus: f64 },
}

impl Expansiveness {
    pub fn is_expansive(&self) -> bool {
        matches!(self, Expansiveness::Certified { .. })
    }
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_string(q))
}

/// Smallest `k <= max_power` with `||a^k||_inf < 1`, together with that norm.
pub fn contraction_certificate(a: &RationalMatrix, max_power: u32) -> Option<(u32, Rational)> {
    let mut p = a.clone();
    for k in 1..=max_power {
        let n = p.inf_norm();
        if n < Rational::one() {
            return Some((k, n));
        }
        p = p.mul(a);
    }
    None
}

/// Moduli of the eigenvalues of `m`, computed in floating point.
pub fn eigenvalue_moduli(m: &IntMatrix) -> Vec<f64> {
    let d = m.dim();
    let f = DMatrix::from_row_slice(d, d, &m.to_f64());
    f.complex_eigenvalues().iter().map(|z| z.norm()).collect()
}

/// Decides whether every eigenvalue of `m` has modulus greater than one.
pub fn is_expansive(m: &IntMatrix) -> Result<Expansiveness> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let inv = m.inverse()?;
    if let Some((power, norm)) = contraction_certificate(&inv, MAX_CERT_POWER) {
        return Ok(Expansiveness::Certified { power, norm });
    }
    let min_modulus = eigenvalue_moduli(m).into_iter().fold(f64::INFINITY, f64::min);
    if min_modulus <= 1.0 + 1e-9 {
        Ok(Expansiveness::NotExpansive {
            eigenvalue_modulus: min_modulus,
        })
    } else {
        Err(Error::Undecided {
            max_power: MAX_CERT_POWER,
            min_modulus,
        })
    }
}

/// Whether `u - v` lies in `M Z^d`.
pub fn congruent_mod(m: &IntMatrix, u: &[i64], v: &[i64]) -> Result<bool> {
    let d = m.dim();
    for w in [u, v] {
        if w.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: w.len(),
            });
        }
    }
    let diff: Vec<i64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    Ok(m.inverse()?.apply_int(&diff).is_integral())
}

/// The fixed point `(S^m - I)^{-1} w` of a length-`m` word of the maps `x -> S^-1 (x + l)`.
pub fn cycle_resolvent_apply(s: &IntMatrix, m: u32, w: &RationalVector) -> Result<RationalVector> {
    let d = s.dim();
    if w.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: w.dim(),
        });
    }
    let shifted = s.to_rational().pow(m).sub(&RationalMatrix::identity(d));
    Ok(shifted.inverse()?.apply(w))
}
