//! Enumeration of dual-lattice points `{x : g.x in Z for all g in G}` inside a box.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{ceil_to_int, floor_to_int, Digit, IntMatrix, Rational, RationalBox, RationalVector};
use crate::error::{Error, Result};

/// Hard cap on the number of integer coefficient vectors scanned.
pub const MAX_SCAN: u128 = 20_000_000;

/// Candidate points for the extreme-cycle search.
#[derive(Clone, Debug)]
pub struct DualLatticePointSet {
    pub generators: Vec<Digit>,
    pub bounds: RationalBox,
    pub points: Vec<RationalVector>,
}

impl DualLatticePointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.points.binary_search(x).is_ok()
    }
}

/// Row-echelon basis of the Z-span of the given integer vectors.
///
/// Returns the nonzero rows after unimodular row reduction; their number is the rank.
pub fn lattice_basis(gens: &[Digit], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut pivot_row = 0;
    for col in 0..dim {
        loop {
            // Smallest nonzero |entry| in this column among the remaining rows.
            let best = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                for j in 0..dim {
                    let t = &q * &rows[pivot_row][j];
                    rows[r][j] -= t;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_row += 1;
                break;
            }
        }
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    rows
}

/// All `x` in `bounds` with `g . x` integral for every `g` in `gens`.
///
/// The generators must span R^d; otherwise the solution set is unbounded in some
/// direction modulo the lattice and the search refuses.
pub fn dual_lattice_points(gens: &[Digit], bounds: &RationalBox) -> Result<DualLatticePointSet> {
    let dim = bounds.dim();
    if let Some(g) = gens.iter().find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: g.len(),
        });
    }
    let basis = lattice_basis(gens, dim);
    if basis.len() < dim {
        return Err(Error::DegenerateDigitSpan {
            dim,
            rank: basis.len(),
        });
    }
    let h = IntMatrix::new(dim, dim, basis.into_iter().flatten().collect());
    let h_inv = h.inverse()?;

    // k = H x ranges over integers in the image of the box.
    let mut ranges = Vec::with_capacity(dim);
    let mut total: u128 = 1;
    for i in 0..dim {
        let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
        for j in 0..dim {
            let hij = Rational::from_integer(h.get(i, j).clone());
            let a = &hij * &bounds.lo[j];
            let b = &hij * &bounds.hi[j];
            if a <= b {
                lo += a;
                hi += b;
            } else {
                lo += b;
                hi += a;
            }
        }
        let (lo, hi) = (ceil_to_int(&lo), floor_to_int(&hi));
        if lo > hi {
            return Ok(DualLatticePointSet {
                generators: gens.to_vec(),
                bounds: bounds.clone(),
                points: Vec::new(),
            });
        }
        let width: u128 = (&hi - &lo + 1u32).try_into().unwrap_or(u128::MAX);
        total = total.saturating_mul(width);
        ranges.push((lo, hi));
    }
    if total > MAX_SCAN {
        return Err(Error::TooManyPoints {
            requested: total,
            limit: MAX_SCAN,
        });
    }

    let mut found = BTreeSet::new();
    let mut k: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    'scan: loop {
        let x = h_inv.apply(&RationalVector::from_bigints(&k));
        if bounds.contains(&x) {
            found.insert(x);
        }
        // odometer increment
        for i in 0..dim {
            if k[i] < ranges[i].1 {
                k[i] += 1;
                continue 'scan;
            }
            k[i] = ranges[i].0.clone();
        }
        break;
    }
    Ok(DualLatticePointSet {
        generators: gens.to_vec(),
        bounds: bounds.clone(),
        points: found.into_iter().collect(),
    })
}
