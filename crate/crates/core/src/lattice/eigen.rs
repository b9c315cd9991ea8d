//! Invariant lines of a 2x2 integer matrix with rational direction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// An invariant line `R v` with primitive integer direction `v` and integer eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenLine {
    pub direction: Vec<i64>,
    pub eigenvalue: i64,
}

fn primitive(v: [BigInt; 2]) -> Vec<i64> {
    let g = v[0].gcd(&v[1]);
    let mut out: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
    if out[0].is_negative() || (out[0].is_zero() && out[1].is_negative()) {
        out = out.into_iter().map(|x| -x).collect();
    }
    out.iter().map(|x| i64::try_from(x).expect("direction fits in i64")).collect()
}

fn kernel_direction(m: &IntMatrix, lambda: &BigInt) -> Vec<i64> {
    let a = m.get(0, 0) - lambda;
    let b = m.get(0, 1).clone();
    let c = m.get(1, 0).clone();
    let d = m.get(1, 1) - lambda;
    // the nonzero row (p, q) of M - lambda I is orthogonal to the kernel (-q, p)
    if !a.is_zero() || !b.is_zero() {
        primitive([-b, a])
    } else {
        primitive([-d, c])
    }
}

/// Lines through the origin with rational direction invariant under `m`, eigenvalue descending.
///
/// In dimension one there is no proper nonzero subspace and the result is empty. A scalar
/// matrix leaves every line invariant; the two coordinate axes are returned.
pub fn rational_eigen_lines(m: &IntMatrix) -> Result<Vec<EigenLine>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    match m.dim() {
        1 => return Ok(Vec::new()),
        2 => {}
        d => return Err(Error::UnsupportedDimension(d)),
    }
    let tr = m.get(0, 0) + m.get(1, 1);
    let det = m.det();
    let disc = &tr * &tr - BigInt::from(4) * &det;
    if disc.is_negative() {
        return Ok(Vec::new());
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return Ok(Vec::new());
    }
    let to_i64 = |x: &BigInt| i64::try_from(x).expect("eigenvalue fits in i64");
    // tr and root have equal parity, so both roots are integers
    let hi = (&tr + &root) / 2;
    let lo = (&tr - &root) / 2;
    if root.is_zero() {
        let scalar = m.get(0, 1).is_zero() && m.get(1, 0).is_zero() && m.get(0, 0) == m.get(1, 1);
        if scalar {
            let e = to_i64(&hi);
            return Ok(vec![
                EigenLine {
                    direction: vec![1, 0],
                    eigenvalue: e,
                },
                EigenLine {
                    direction: vec![0, 1],
                    eigenvalue: e,
                },
            ]);
        }
        return Ok(vec![EigenLine {
            direction: kernel_direction(m, &hi),
            eigenvalue: to_i64(&hi),
        }]);
    }
    Ok([hi, lo]
        .iter()
        .map(|l| EigenLine {
            direction: kernel_direction(m, l),
            eigenvalue: to_i64(l),
        })
        .collect())
}
