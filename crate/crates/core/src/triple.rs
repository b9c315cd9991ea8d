//! Hadamard triples `(R, B, L)`: validation, conjugation and block factorization.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::cyclotomic::root_sum_vanishes;
use crate::lattice::{congruent_mod, is_expansive, Digit, Expansiveness, IntMatrix, Rational, RationalMatrix, RationalVector};

/// Tolerance on `|sum_l e^{2 pi i R^-1 (b - b') . l}| / N` when the exact test is unavailable.
pub const UNITARITY_TOL: f64 = 1e-10;

/// An expansive integer matrix with two digit sets of equal size, both containing 0.
#[derive(Clone, Debug)]
pub struct HadamardTriple {
    r: IntMatrix,
    s: IntMatrix,
    b: Vec<Digit>,
    l: Vec<Digit>,
    s_inv: RationalMatrix,
    r_inv: RationalMatrix,
    s_inv_f: Vec<f64>,
    r_inv_f: Vec<f64>,
    certificate: Expansiveness,
    report: HadamardReport,
}

/// Outcome of the unitarity and incongruence checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HadamardReport {
    pub unitary: bool,
    /// Largest normalized off-diagonal entry of the N x N matrix `(e^{2 pi i R^-1 b . l})`.
    pub max_residual: f64,
    /// Whether every pair was decided by the exact root-of-unity test.
    pub exact: bool,
    /// First pair `(b, b')` whose rows are not orthogonal.
    pub witness: Option<(Digit, Digit)>,
    pub congruent_b: Vec<(Digit, Digit)>,
    pub congruent_l: Vec<(Digit, Digit)>,
}

impl HadamardReport {
    pub fn is_valid(&self) -> bool {
        self.unitary && self.congruent_b.is_empty() && self.congruent_l.is_empty()
    }
}

fn check_digits(d: usize, digits: &[Digit], name: &'static str) -> Result<()> {
    if let Some(v) = digits.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: v.len(),
        });
    }
    if !digits.iter().any(|v| v.iter().all(|&x| x == 0)) {
        return Err(Error::MissingZeroDigit(name));
    }
    Ok(())
}

fn congruent_pairs(m: &IntMatrix, digits: &[Digit]) -> Result<Vec<(Digit, Digit)>> {
    let mut out = Vec::new();
    for i in 0..digits.len() {
        for j in i + 1..digits.len() {
            if congruent_mod(m, &digits[i], &digits[j])? {
                out.push((digits[i].clone(), digits[j].clone()));
            }
        }
    }
    Ok(out)
}

/// Checks that `(1/sqrt N) (e^{2 pi i R^-1 b . l})` is unitary, plus pairwise incongruence
/// of `B` mod `R Z^d` and of `L` mod `R^T Z^d`.
pub fn validate_hadamard(r: &IntMatrix, b: &[Digit], l: &[Digit]) -> Result<HadamardReport> {
    if b.len() != l.len() {
        return Err(Error::SizeMismatch {
            b: b.len(),
            l: l.len(),
        });
    }
    let r_inv = r.inverse()?;
    let n = b.len() as f64;
    let mut max_residual = 0.0f64;
    let mut exact = true;
    let mut witness = None;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let diff: Vec<i64> = b[i].iter().zip(&b[j]).map(|(x, y)| x - y).collect();
            let u = r_inv.apply_int(&diff);
            let phases: Vec<(Rational, i64)> = l.iter().map(|lv| (frac(&u.dot_int(lv)), 1)).collect();
            let (re, im) = phases.iter().fold((0.0, 0.0), |(re, im), (q, _)| {
                let t = TAU * crate::lattice::rat_to_f64(q);
                (re + t.cos(), im + t.sin())
            });
            let residual = re.hypot(im) / n;
            max_residual = max_residual.max(residual);
            let orthogonal = match root_sum_vanishes(&phases) {
                Some(v) => v,
                None => {
                    exact = false;
                    residual < UNITARITY_TOL
                }
            };
            if !orthogonal && witness.is_none() {
                witness = Some((b[i].clone(), b[j].clone()));
            }
        }
    }
    Ok(HadamardReport {
        unitary: witness.is_none(),
        max_residual,
        exact,
        witness,
        congruent_b: congruent_pairs(r, b)?,
        congruent_l: congruent_pairs(&r.transpose(), l)?,
    })
}

/// Fractional part in `[0, 1)`.
pub(crate) fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Whether `B` is a complete set of representatives of `Z^d / R Z^d`.
pub fn is_complete_residue_system(r: &IntMatrix, b: &[Digit]) -> Result<bool> {
    let det = r.det().abs();
    if det.to_usize() != Some(b.len()) {
        return Ok(false);
    }
    Ok(congruent_pairs(r, b)?.is_empty())
}

impl HadamardTriple {
    pub fn new(r: IntMatrix, b: Vec<Digit>, l: Vec<Digit>) -> Result<Self> {
        if !r.is_square() {
            return Err(Error::NotSquare {
                rows: r.rows(),
                cols: r.cols(),
            });
        }
        let d = r.dim();
        check_digits(d, &b, "B")?;
        check_digits(d, &l, "L")?;
        let certificate = is_expansive(&r)?;
        if let Expansiveness::NotExpansive { eigenvalue_modulus } = certificate {
            return Err(Error::NotExpansive {
                modulus: eigenvalue_modulus,
            });
        }
        let report = validate_hadamard(&r, &b, &l)?;
        let s = r.transpose();
        let r_inv = r.inverse()?;
        let s_inv = s.inverse()?;
        Ok(Self {
            s_inv_f: s_inv.to_f64(),
            r_inv_f: r_inv.to_f64(),
            r,
            s,
            b,
            l,
            s_inv,
            r_inv,
            certificate,
            report,
        })
    }

    pub fn from_rows(r: &[Vec<i64>], b: Vec<Digit>, l: Vec<Digit>) -> Result<Self> {
        Self::new(IntMatrix::square(r)?, b, l)
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn r(&self) -> &IntMatrix {
        &self.r
    }

    pub fn s(&self) -> &IntMatrix {
        &self.s
    }

    pub fn b(&self) -> &[Digit] {
        &self.b
    }

    pub fn l(&self) -> &[Digit] {
        &self.l
    }

    pub fn r_inv(&self) -> &RationalMatrix {
        &self.r_inv
    }

    pub fn s_inv(&self) -> &RationalMatrix {
        &self.s_inv
    }

    /// `S^-1` as a row-major float matrix.
    pub fn s_inv_f64(&self) -> &[f64] {
        &self.s_inv_f
    }

    pub fn r_inv_f64(&self) -> &[f64] {
        &self.r_inv_f
    }

    pub fn certificate(&self) -> &Expansiveness {
        &self.certificate
    }

    pub fn report(&self) -> &HadamardReport {
        &self.report
    }

    pub fn is_valid(&self) -> bool {
        self.report.is_valid()
    }

    /// `tau_l(x) = S^-1 (x + l)`, exactly.
    pub fn tau(&self, l: &[i64], x: &RationalVector) -> RationalVector {
        self.s_inv.apply(&x.add_int(l))
    }

    /// `tau_l(x)` in floating point.
    pub fn tau_f64(&self, l: &[i64], x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let y: Vec<f64> = x.iter().zip(l).map(|(a, &b)| a + b as f64).collect();
        (0..d)
            .map(|i| (0..d).map(|j| self.s_inv_f[i * d + j] * y[j]).sum())
            .collect()
    }

    /// `R^-1 (x + b)`, one map of the IFS carrying the measure.
    pub fn sigma_f64(&self, b: &[i64], x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let y: Vec<f64> = x.iter().zip(b).map(|(a, &v)| a + v as f64).collect();
        (0..d)
            .map(|i| (0..d).map(|j| self.r_inv_f[i * d + j] * y[j]).sum())
            .collect()
    }
}

/// A matrix in `GL_d(Z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugationMatrix(IntMatrix);

impl ConjugationMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() || m.det().abs() != num_bigint::BigInt::from(1) {
            return Err(Error::NotUnimodular);
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }
}

fn to_digit(v: &RationalVector) -> Result<Digit> {
    v.to_i64().ok_or_else(|| Error::NonIntegerDigits(v.to_string()))
}

/// The triple `(M R M^-1, M B, (M^T)^-1 L)`.
pub fn conjugate(t: &HadamardTriple, m: &ConjugationMatrix) -> Result<HadamardTriple> {
    let mr = m.0.to_rational();
    let m_inv = mr.inverse()?;
    let r2 = mr.mul(&t.r.to_rational()).mul(&m_inv).to_int().ok_or(Error::NotUnimodular)?;
    let b2 = t
        .b
        .iter()
        .map(|b| to_digit(&mr.apply_int(b)))
        .collect::<Result<Vec<_>>>()?;
    let mt_inv = m.0.transpose().inverse()?;
    let l2 = t
        .l
        .iter()
        .map(|l| to_digit(&mt_inv.apply_int(l)))
        .collect::<Result<Vec<_>>>()?;
    HadamardTriple::new(r2, b2, l2)
}

/// A triple split along the invariant coordinate subspace `R^r x {0}` of `S = R^T`.
///
/// `B = {(first[i], eta[i][j])}` and `L = {(gamma[j][k], second[j])}`.
#[derive(Clone, Debug, Serialize)]
pub struct FactoredTriple {
    pub split: usize,
    #[serde(skip)]
    pub a1: IntMatrix,
    #[serde(skip)]
    pub a2: IntMatrix,
    #[serde(skip)]
    pub c_star: IntMatrix,
    #[serde(skip)]
    pub s1: IntMatrix,
    #[serde(skip)]
    pub s2: IntMatrix,
    #[serde(skip)]
    pub c: IntMatrix,
    pub first: Vec<Digit>,
    pub eta: Vec<Vec<Digit>>,
    pub second: Vec<Digit>,
    pub gamma: Vec<Vec<Digit>>,
}

impl FactoredTriple {
    pub fn n1(&self) -> usize {
        self.first.len()
    }

    pub fn n2(&self) -> usize {
        self.second.len()
    }

    /// The digit sets rebuilt from the factored data.
    pub fn reassemble(&self) -> (Vec<Digit>, Vec<Digit>) {
        let mut b = Vec::new();
        for (r, fiber) in self.first.iter().zip(&self.eta) {
            for e in fiber {
                b.push([r.as_slice(), e.as_slice()].concat());
            }
        }
        let mut l = Vec::new();
        for (s, fiber) in self.second.iter().zip(&self.gamma) {
            for g in fiber {
                l.push([g.as_slice(), s.as_slice()].concat());
            }
        }
        (b, l)
    }

    /// Whether the second-component digits of `B` are the same for every first component.
    pub fn fibers_constant(&self) -> bool {
        let sorted = |v: &Vec<Digit>| {
            let mut v = v.clone();
            v.sort();
            v
        };
        let first = sorted(&self.eta[0]);
        self.eta.iter().all(|f| sorted(f) == first)
    }

    /// The first-component triple `(A1, {r_i}, gamma[0])`.
    pub fn first_triple(&self) -> Result<HadamardTriple> {
        HadamardTriple::new(self.a1.clone(), self.first.clone(), self.gamma[0].clone())
    }

    /// The second-component triple `(A2, eta[i], {s_j})`.
    pub fn second_triple(&self, i: usize) -> Result<HadamardTriple> {
        HadamardTriple::new(self.a2.clone(), self.eta[i].clone(), self.second.clone())
    }

    /// `D_k`, the lower-left block of `R^-k`.
    pub fn d_block(&self, k: u32) -> RationalMatrix {
        let a1_inv = self.a1.inverse().expect("expansive block");
        let a2_inv = self.a2.inverse().expect("expansive block");
        let cs = self.c_star.to_rational();
        let mut acc = RationalMatrix::zeros(self.a2.rows(), self.a1.rows());
        for l in 0..k {
            let term = a2_inv.pow(l + 1).mul(&cs).mul(&a1_inv.pow(k - l));
            acc = acc.sub(&term);
        }
        acc
    }
}

fn group_by_prefix(digits: &[Digit], split: usize, key_first: bool) -> BTreeMap<Digit, Vec<Digit>> {
    let mut map: BTreeMap<Digit, Vec<Digit>> = BTreeMap::new();
    for v in digits {
        let (a, b) = v.split_at(split);
        let (k, rest) = if key_first { (a, b) } else { (b, a) };
        map.entry(k.to_vec()).or_default().push(rest.to_vec());
    }
    map
}

/// Splits a triple along `R^r x {0}`, which must be invariant for `S = R^T`.
pub fn factor_along(t: &HadamardTriple, split: usize) -> Result<FactoredTriple> {
    let d = t.dim();
    if split == 0 || split >= d {
        return Err(Error::InvalidInput(format!("split dimension {split} must lie in 1..{d}")));
    }
    let s = t.s();
    if !s.block(split, d, 0, split).is_zero() {
        return Err(Error::NotInvariant { split });
    }
    let r = t.r();
    let by_first = group_by_prefix(t.b(), split, true);
    let by_second = group_by_prefix(t.l(), split, false);
    let n2 = by_first.values().next().map_or(0, Vec::len);
    if let Some((k, v)) = by_first.iter().find(|(_, v)| v.len() != n2) {
        return Err(Error::FiberCountMismatch(format!(
            "B fiber over {k:?} has {} elements, expected {n2}",
            v.len()
        )));
    }
    let n1 = by_second.values().next().map_or(0, Vec::len);
    if let Some((k, v)) = by_second.iter().find(|(_, v)| v.len() != n1) {
        return Err(Error::FiberCountMismatch(format!(
            "L fiber over {k:?} has {} elements, expected {n1}",
            v.len()
        )));
    }
    if by_first.len() != n1 || by_second.len() != n2 {
        return Err(Error::FiberCountMismatch(format!(
            "{} first components of B and {} second components of L, fibers of sizes {n2} and {n1}",
            by_first.len(),
            by_second.len()
        )));
    }
    let (first, eta): (Vec<_>, Vec<_>) = by_first.into_iter().unzip();
    let (second, gamma): (Vec<_>, Vec<_>) = by_second.into_iter().unzip();
    let f = FactoredTriple {
        split,
        a1: r.block(0, split, 0, split),
        a2: r.block(split, d, split, d),
        c_star: r.block(split, d, 0, split),
        s1: s.block(0, split, 0, split),
        s2: s.block(split, d, split, d),
        c: s.block(0, split, split, d),
        first,
        eta,
        second,
        gamma,
    };
    for (j, g) in f.gamma.iter().enumerate() {
        if !validate_hadamard(&f.a1, &f.first, g)?.unitary {
            return Err(Error::SubTripleNotHadamard { kind: "first", index: j });
        }
    }
    for (i, e) in f.eta.iter().enumerate() {
        if !validate_hadamard(&f.a2, e, &f.second)?.unitary {
            return Err(Error::SubTripleNotHadamard { kind: "second", index: i });
        }
    }
    Ok(f)
}

/// `g(w) = sum_k D_k r_{i_k}` for a finite word of first-component digit indices.
pub fn g_function(f: &FactoredTriple, word: &[usize]) -> RationalVector {
    let mut acc = RationalVector::zeros(f.a2.rows());
    for (k, &i) in word.iter().enumerate() {
        acc = &acc + &f.d_block(k as u32 + 1).apply_int(&f.first[i]);
    }
    acc
}

impl PartialEq for FactoredTriple {
    fn eq(&self, o: &Self) -> bool {
        self.split == o.split
            && self.a1 == o.a1
            && self.a2 == o.a2
            && self.c_star == o.c_star
            && self.first == o.first
            && self.eta == o.eta
            && self.second == o.second
            && self.gamma == o.gamma
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use proptest::prelude::*;

    fn worked() -> HadamardTriple {
        HadamardTriple::from_rows(
            &[vec![4, 0], vec![1, 4]],
            vec![vec![0, 0], vec![0, 3], vec![1, 0], vec![1, 3]],
            vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]],
        )
        .unwrap()
    }

    fn one_dim(r: i64, b: &[i64], l: &[i64]) -> Result<HadamardTriple> {
        HadamardTriple::from_rows(
            &[vec![r]],
            b.iter().map(|&x| vec![x]).collect(),
            l.iter().map(|&x| vec![x]).collect(),
        )
    }

    #[test]
    fn worked_triple_is_hadamard() {
        let t = worked();
        assert!(t.is_valid());
        assert!(t.report().exact);
        assert!(t.report().max_residual < 1e-10);
    }

    #[test]
    fn one_dimensional_cases() {
        assert!(one_dim(4, &[0, 1], &[0, 2]).unwrap().is_valid());
        assert!(one_dim(2, &[0, 1], &[0, 1]).unwrap().is_valid());
        let cantor = one_dim(3, &[0, 2], &[0, 1]).unwrap();
        assert!(!cantor.is_valid());
        assert_eq!(cantor.report().witness, Some((vec![0], vec![2])));
    }

    // Independent oracle: |1 + e^{2 pi i 2 k / 3}| for every k != 0 mod 3.
    #[test]
    fn ternary_control_never_cancels() {
        for k in 1..3 {
            let t = TAU * 2.0 * k as f64 / 3.0;
            assert!((1.0 + t.cos()).hypot(t.sin()) > 0.5);
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            one_dim(4, &[0, 1], &[0]).unwrap_err(),
            Error::SizeMismatch { b: 2, l: 1 }
        );
        assert_eq!(one_dim(4, &[1, 2], &[0, 2]).unwrap_err(), Error::MissingZeroDigit("B"));
        assert!(matches!(one_dim(1, &[0, 1], &[0, 1]), Err(Error::NotExpansive { .. })));
    }

    #[test]
    fn residue_systems() {
        let two = IntMatrix::square(&[vec![2]]).unwrap();
        assert!(is_complete_residue_system(&two, &[vec![0], vec![1]]).unwrap());
        let t = worked();
        assert!(!is_complete_residue_system(t.r(), t.b()).unwrap());
        let three = IntMatrix::square(&[vec![3]]).unwrap();
        assert!(is_complete_residue_system(&three, &[vec![0], vec![1], vec![5]]).unwrap());
        assert!(!is_complete_residue_system(&three, &[vec![0], vec![1], vec![4]]).unwrap());
    }

    #[test]
    fn conjugation() {
        let t = worked();
        let id = ConjugationMatrix::new(IntMatrix::identity(2)).unwrap();
        let same = conjugate(&t, &id).unwrap();
        assert_eq!(same.r(), t.r());
        assert_eq!(same.b(), t.b());
        assert_eq!(same.l(), t.l());
        let shear = ConjugationMatrix::new(IntMatrix::square(&[vec![1, 1], vec![0, 1]]).unwrap()).unwrap();
        assert!(conjugate(&t, &shear).unwrap().is_valid());
        let flip = ConjugationMatrix::new(IntMatrix::square(&[vec![-1]]).unwrap()).unwrap();
        let c = conjugate(&one_dim(4, &[0, 1], &[0, 2]).unwrap(), &flip).unwrap();
        assert_eq!(c.b(), &[vec![0], vec![-1]]);
        assert_eq!(c.l(), &[vec![0], vec![-2]]);
        assert!(c.is_valid());
        assert_eq!(
            ConjugationMatrix::new(IntMatrix::square(&[vec![2, 0], vec![0, 1]]).unwrap()),
            Err(Error::NotUnimodular)
        );
    }

    #[test]
    fn worked_factorization() {
        let f = factor_along(&worked(), 1).unwrap();
        assert_eq!(f.first, vec![vec![0], vec![1]]);
        assert_eq!(f.eta, vec![vec![vec![0], vec![3]], vec![vec![0], vec![3]]]);
        assert_eq!(f.second, vec![vec![0], vec![2]]);
        assert_eq!(f.gamma, vec![vec![vec![0], vec![2]], vec![vec![0], vec![2]]]);
        assert_eq!(f.s1.to_rows_i64().unwrap(), vec![vec![4]]);
        assert_eq!(f.s2.to_rows_i64().unwrap(), vec![vec![4]]);
        assert_eq!(f.c.to_rows_i64().unwrap(), vec![vec![1]]);
        assert!(f.fibers_constant());
        let (mut b, mut l) = f.reassemble();
        let (mut b0, mut l0) = (worked().b().to_vec(), worked().l().to_vec());
        b.sort();
        l.sort();
        b0.sort();
        l0.sort();
        assert_eq!((b, l), (b0, l0));
    }

    #[test]
    fn product_factorization_and_wrong_subspace() {
        let t = HadamardTriple::from_rows(
            &[vec![4, 0], vec![0, 4]],
            vec![vec![0, 0], vec![0, 3], vec![1, 0], vec![1, 3]],
            vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]],
        )
        .unwrap();
        let f = factor_along(&t, 1).unwrap();
        assert!(f.c.is_zero());
        // swapping coordinates turns the worked example's invariant line into {0} x R
        let swap = ConjugationMatrix::new(IntMatrix::square(&[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
        let swapped = conjugate(&worked(), &swap).unwrap();
        assert_eq!(factor_along(&swapped, 1).unwrap_err(), Error::NotInvariant { split: 1 });
    }

    #[test]
    fn d_blocks_and_g() {
        let f = factor_along(&worked(), 1).unwrap();
        assert_eq!(f.d_block(1).get(0, 0), &rat(-1, 16));
        // D_k is the lower-left block of R^-k
        let r_inv = worked().r_inv().clone();
        for k in 1..6 {
            assert_eq!(f.d_block(k).get(0, 0), r_inv.pow(k).get(1, 0));
        }
        assert!(g_function(&f, &[0, 0, 0]).is_zero());
        assert_eq!(g_function(&f, &[1]).0[0], rat(-1, 16));
    }

    proptest! {
        // g(i w) = D_1 (x(w) + r_i) + A2^-1 g(w), with x(w) the first-component point of w
        #[test]
        fn g_recursion(word in proptest::collection::vec(0usize..2, 1..12), i in 0usize..2) {
            let f = factor_along(&worked(), 1).unwrap();
            let a1_inv = f.a1.inverse().unwrap();
            let a2_inv = f.a2.inverse().unwrap();
            let x_of = |w: &[usize]| {
                let mut x = RationalVector::zeros(1);
                for &k in w.iter().rev() {
                    x = a1_inv.apply(&x.add_int(&f.first[k]));
                }
                x
            };
            let mut iw = vec![i];
            iw.extend(&word);
            let lhs = g_function(&f, &iw);
            let rhs = &f.d_block(1).apply(&x_of(&word).add_int(&f.first[i])) + &a2_inv.apply(&g_function(&f, &word));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
