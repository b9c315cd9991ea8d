//! Exact vanishing test for sums of roots of unity with rational arguments.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::matrix::Rational;

/// Largest common denominator handled exactly.
pub const MAX_EXACT_DENOMINATOR: u64 = 360;

/// Cyclotomic polynomial Phi_n, coefficients from degree 0 upward.
pub fn cyclotomic(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}
    let x_pow_minus_one = |d: u64| {
        let mut p = vec![0i64; d as usize + 1];
        p[0] = -1;
        p[d as usize] = 1;
        p
    };
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut num = vec![1i64];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            num = mul(&num, &x_pow_minus_one(d));
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            num = div_exact(&num, &x_pow_minus_one(d));
        }
    }
    num
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1, "monic divisor");
    let mut q = vec![0i64; rem.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact division");
    q
}

fn reduce_mod(p: &mut Vec<i64>, m: &[i64]) {
    let dm = m.len() - 1;
    while p.len() > dm {
        let c = p.pop().unwrap_or(0);
        if c != 0 {
            let k = p.len() - dm;
            for (j, &mj) in m.iter().enumerate().take(dm) {
                p[k + j] -= c * mj;
            }
        }
    }
}

/// Decides exactly whether `sum_j weight_j * exp(2 pi i q_j)` is zero.
///
/// Returns `None` when the common denominator of the `q_j` exceeds
/// [`MAX_EXACT_DENOMINATOR`], so the caller falls back to floating point.
pub fn root_sum_vanishes(phases: &[(Rational, i64)]) -> Option<bool> {
    let n = phases
        .iter()
        .fold(BigInt::one(), |acc, (q, _)| acc.lcm(q.denom()));
    let n = n.to_u64().filter(|&n| n <= MAX_EXACT_DENOMINATOR)?;
    let mut poly = vec![0i64; n as usize];
    for (q, w) in phases {
        let k = (q * BigInt::from(n)).to_integer().mod_floor(&BigInt::from(n));
        poly[k.to_usize()?] += *w;
    }
    let phi = cyclotomic(n);
    reduce_mod(&mut poly, &phi);
    Some(poly.iter().all(|&c| c == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::rat;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient of magnitude 2.
        assert!(cyclotomic(105).contains(&-2));
    }

    #[test]
    fn vanishing_sums() {
        // 1 + (-1)
        assert_eq!(root_sum_vanishes(&[(rat(0, 1), 1), (rat(1, 2), 1)]), Some(true));
        // cube roots of unity
        let cube = [(rat(0, 1), 1), (rat(1, 3), 1), (rat(2, 3), 1)];
        assert_eq!(root_sum_vanishes(&cube), Some(true));
        // 1 + e^{2 pi i/3}
        assert_eq!(root_sum_vanishes(&cube[..2]), Some(false));
        // 1 + i - 1 - i
        let quad = [(rat(0, 1), 1), (rat(1, 4), 1), (rat(1, 2), 1), (rat(3, 4), 1)];
        assert_eq!(root_sum_vanishes(&quad), Some(true));
        // 2 * 1 + 1 * (-1) is not zero
        assert_eq!(root_sum_vanishes(&[(rat(0, 1), 2), (rat(1, 2), 1)]), Some(false));
        // negative phases wrap around
        assert_eq!(root_sum_vanishes(&[(rat(-1, 2), 1), (rat(3, 1), 1)]), Some(true));
    }

    #[test]
    fn large_denominator_defers() {
        assert_eq!(root_sum_vanishes(&[(rat(1, 361), 1)]), None);
    }
}
