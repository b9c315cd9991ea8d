//! Dense exact matrices and vectors over Z and Q.

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An integer digit vector.
pub type Digit = Vec<i64>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    // Quotient of the big integers keeps precision for huge numerators.
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = q.denom().bits().max(q.numer().bits()) as i64 - 1000;
            let scaled = if shift > 0 {
                Rational::new(q.numer() >> shift as usize, q.denom() >> shift as usize)
            } else {
                q.clone()
            };
            scaled.numer().to_f64().unwrap_or(f64::NAN) / scaled.denom().to_f64().unwrap_or(f64::NAN)
        }
    }
}

pub fn rat_to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Self { rows, cols, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                got: bad.len(),
            });
        }
        let entries = rows.iter().flatten().map(|&v| BigInt::from(v)).collect();
        Ok(Self::new(r, c, entries))
    }

    /// Square matrix from rows; errors if not square or empty.
    pub fn square(rows: &[Vec<i64>]) -> Result<Self> {
        let m = Self::from_rows(rows)?;
        if m.rows != m.cols || m.rows == 0 {
            return Err(Error::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        Ok(m)
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.entries[i * d + i] = BigInt::one();
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * BigInt::from(v[j]))
                    .sum()
            })
            .collect()
    }

    /// Sub-block `[r0, r1) x [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn det(&self) -> BigInt {
        self.to_rational().det().to_integer()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::new(
            self.rows,
            self.cols,
            self.entries.iter().cloned().map(Rational::from_integer).collect(),
        )
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| e.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn to_rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        self.to_rational().inverse()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.entries[i * d + i] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc += a * other.get(k, j);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|a| -a).collect(),
        )
    }

    pub fn pow(&self, mut k: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn apply(&self, v: &RationalVector) -> RationalVector {
        assert_eq!(v.dim(), self.cols);
        RationalVector(
            (0..self.rows)
                .map(|i| {
                    let mut acc = Rational::zero();
                    for j in 0..self.cols {
                        acc += self.get(i, j) * &v.0[j];
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn apply_int(&self, v: &[i64]) -> RationalVector {
        self.apply(&RationalVector::from_ints(v))
    }

    /// Row-sum (infinity) operator norm.
    pub fn inf_norm(&self) -> Rational {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).abs())
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = a[col * n + col].clone();
            det *= &pivot;
            for r in col + 1..n {
                let f = &a[r * n + col] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let t = &f * &a[col * n + j];
                    a[r * n + j] -= t;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if p != col {
                for j in 0..n {
                    a.entries.swap(p * n + j, col * n + j);
                    inv.entries.swap(p * n + j, col * n + j);
                }
            }
            let pivot = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j) / &pivot;
                a.set(col, j, v);
                let w = inv.get(col, j) / &pivot;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                    let w = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, w);
                }
            }
        }
        Ok(inv)
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rational::is_integer)
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| {
            IntMatrix::new(
                self.rows,
                self.cols,
                self.entries.iter().map(Rational::to_integer).collect(),
            )
        })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(rat_to_f64).collect()
    }
}

/// Exact point of Q^d. Coordinates are kept in lowest terms by `BigRational`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zeros(d: usize) -> Self {
        Self(vec![Rational::zero(); d])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| rat_int(x)).collect())
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        Self(v.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    pub fn to_i64(&self) -> Option<Digit> {
        self.0
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer().to_i64()).flatten())
            .collect()
    }

    pub fn dot_int(&self, g: &[i64]) -> Rational {
        self.0
            .iter()
            .zip(g)
            .fold(Rational::zero(), |acc, (x, &gi)| acc + x * BigInt::from(gi))
    }

    pub fn add_int(&self, v: &[i64]) -> Self {
        Self(
            self.0
                .iter()
                .zip(v)
                .map(|(x, &vi)| x + BigInt::from(vi))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rat_to_f64).collect()
    }

    pub fn inf_norm(&self) -> Rational {
        self.0
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rat_to_string).collect()
    }

    pub fn parse(parts: &[String]) -> Result<Self> {
        parts
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", rat_to_string(&self.0[0]));
        }
        write!(f, "(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", rat_to_string(q))?;
        }
        write!(f, ")")
    }
}

// Serialized as exact strings, e.g. ["0", "2/3"].
impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        Self::parse(&parts).map_err(serde::de::Error::custom)
    }
}

/// Axis-aligned box with rational corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl RationalBox {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn cube(d: usize, radius: Rational) -> Self {
        Self::new(vec![-radius.clone(); d], vec![radius; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        x.0.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| l <= v && v <= h)
    }

    pub fn contains_f64(&self, x: &[f64], slack: f64) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (l, h))| rat_to_f64(l) - slack <= v && v <= rat_to_f64(h) + slack)
    }

    pub fn contains_box(&self, other: &Self) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self::new(
            self.lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
            self.hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        )
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self::new(
            self.lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
            self.hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        )
    }

    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.lo.iter().map(rat_to_f64).collect(),
            self.hi.iter().map(rat_to_f64).collect(),
        )
    }
}

impl fmt::Display for RationalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(
                f,
                "[{}, {}]",
                rat_to_string(&self.lo[i]),
                rat_to_string(&self.hi[i])
            )?;
        }
        Ok(())
    }
}

pub(crate) fn ceil_to_int(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

pub(crate) fn floor_to_int(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_worked_matrix() {
        let r = IntMatrix::square(&[vec![4, 0], vec![1, 4]]).unwrap();
        let inv = r.inverse().unwrap();
        assert_eq!(inv.get(0, 0), &rat(1, 4));
        assert_eq!(inv.get(1, 0), &rat(-1, 16));
        assert_eq!(inv.get(1, 1), &rat(1, 4));
        assert_eq!(r.to_rational().mul(&inv), RationalMatrix::identity(2));
        assert_eq!(r.det(), BigInt::from(16));
    }

    #[test]
    fn singular_inverse_errors() {
        let m = IntMatrix::square(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
        assert!(m.det().is_zero());
    }

    #[test]
    fn powers_of_transpose_have_closed_form() {
        // S^n = [[4^n, n 4^(n-1)], [0, 4^n]]
        let s = IntMatrix::square(&[vec![4, 1], vec![0, 4]]).unwrap().to_rational();
        for n in 1..8u32 {
            let p = s.pow(n);
            let four = rat_int(4).pow(n as i32);
            assert_eq!(p.get(0, 0), &four);
            assert_eq!(p.get(0, 1), &(rat_int(n as i64) * rat_int(4).pow(n as i32 - 1)));
            assert!(p.get(1, 0).is_zero());
        }
    }

    #[test]
    fn rational_strings_round_trip() {
        let v = RationalVector(vec![rat(2, 3), rat_int(-4), rat(-1, 16)]);
        assert_eq!(v.to_strings(), vec!["2/3", "-4", "-1/16"]);
        assert_eq!(RationalVector::parse(&v.to_strings()).unwrap(), v);
        assert!(parse_rational("1/0").is_err());
        assert_eq!(v.to_string(), "(2/3, -4, -1/16)");
    }

    #[test]
    fn huge_rationals_convert_to_float() {
        let big = BigInt::from(3).pow(900);
        let q = Rational::new(big.clone() * 2, big);
        assert!((rat_to_f64(&q) - 2.0).abs() < 1e-12);
    }
}
