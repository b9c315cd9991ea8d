//! Finite unions of parallel lines carried by a quotient cycle.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cycles::{wtilde_cycles, Cycle};
use crate::error::{Error, Result};
use crate::lattice::{Digit, EigenLine, IntMatrix, Rational, RationalMatrix, RationalVector};
use crate::measure::{FiberWeight, WeightFunction};
use crate::triple::{conjugate, factor_along, ConjugationMatrix, FactoredTriple, HadamardTriple};

/// Threshold for a numerically vanishing fiber weight.
pub const VANISH_TOL: f64 = 1e-12;

/// Threshold for the full weight at sampled fiber points.
pub const SPOT_TOL: f64 = 1e-10;

/// Random first-coordinate samples per off-cycle transition.
pub const SPOT_SAMPLES: usize = 20;

/// Coordinates in which an eigen-line of `S` becomes the first axis.
///
/// Points and frequencies transform by the unimodular `P` with `P v = e_1`; the triple is
/// conjugated to `(M R M^-1, M B, P L)` with `M = P^-T`, then split along the first axis.
#[derive(Clone, Debug)]
pub struct LineFrame {
    pub line: EigenLine,
    pub p: IntMatrix,
    pub p_inv: RationalMatrix,
    pub triple: HadamardTriple,
    pub factored: FactoredTriple,
}

impl LineFrame {
    pub fn new(t: &HadamardTriple, line: &EigenLine) -> Result<Self> {
        if t.dim() != 2 || line.direction.len() != 2 {
            return Err(Error::UnsupportedDimension(t.dim()));
        }
        let (a, b) = (line.direction[0], line.direction[1]);
        let e = a.extended_gcd(&b);
        if e.gcd.abs() != 1 {
            return Err(Error::InvalidInput(format!("direction ({a}, {b}) is not primitive")));
        }
        let (p, q) = (e.x * e.gcd, e.y * e.gcd);
        let pm = IntMatrix::square(&[vec![p, q], vec![-b, a]])?;
        let m = pm.inverse()?.to_int().ok_or(Error::NotUnimodular)?.transpose();
        let triple = conjugate(t, &ConjugationMatrix::new(m)?)?;
        let factored = factor_along(&triple, 1)?;
        Ok(Self {
            line: line.clone(),
            p_inv: pm.inverse()?,
            p: pm,
            triple,
            factored,
        })
    }

    pub fn to_original(&self, z: &RationalVector) -> RationalVector {
        self.p_inv.apply(z)
    }

    pub fn from_original(&self, x: &RationalVector) -> RationalVector {
        self.p.to_rational().apply(x)
    }

    /// Point on the translate through quotient coordinate `y`, in original coordinates.
    pub fn base_point(&self, y: &RationalVector) -> RationalVector {
        let mut z = vec![Rational::from_integer(0.into()); self.factored.split];
        z.extend(y.0.iter().cloned());
        self.to_original(&RationalVector(z))
    }
}

/// `{translates[q] + t v}` over the points `y_q` of a quotient cycle.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantLineSet {
    pub direction: Digit,
    pub eigenvalue: i64,
    /// Cycle of the second-coordinate system in the line frame.
    pub quotient: Cycle,
    pub translates: Vec<RationalVector>,
    /// Largest fiber weight over transitions leaving the cycle.
    pub offcycle_max: f64,
    /// Whether every off-cycle vanishing was decided exactly.
    pub offcycle_exact: bool,
    pub spot_check_max: f64,
    #[serde(skip)]
    pub frame: LineFrame,
}

impl InvariantLineSet {
    pub fn period(&self) -> usize {
        self.translates.len()
    }

    /// Exact membership of a point in one of the translates.
    pub fn contains(&self, x: &RationalVector) -> bool {
        self.translates.iter().any(|b| on_line(b, &self.direction, x))
    }

    /// Euclidean distance from `x` to the nearest translate.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let v: Vec<f64> = self.direction.iter().map(|&c| c as f64).collect();
        self.translates
            .iter()
            .map(|b| line_distance(&b.to_f64(), &v, x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .translates
            .iter()
            .map(|b| format!("{b} + t{}", RationalVector::from_ints(&self.direction)))
            .collect();
        format!("lines {{{}}}", parts.join(", "))
    }
}

pub(crate) fn on_line(base: &RationalVector, v: &[i64], x: &RationalVector) -> bool {
    let diff = x - base;
    let Some(i) = v.iter().position(|&c| c != 0) else {
        return diff.is_zero();
    };
    let t = &diff.0[i] / Rational::from_integer(v[i].into());
    diff.0
        .iter()
        .zip(v)
        .all(|(d, &c)| *d == &t * Rational::from_integer(c.into()))
}

pub(crate) fn line_distance(base: &[f64], v: &[f64], x: &[f64]) -> f64 {
    let diff: Vec<f64> = x.iter().zip(base).map(|(a, b)| a - b).collect();
    let vv: f64 = v.iter().map(|c| c * c).sum();
    let t = diff.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / vv;
    diff.iter()
        .zip(v)
        .map(|(d, c)| (d - t * c).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Why a candidate line set is not listed in the catalog.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rejection {
    /// A transition off the cycle has positive weight.
    Leak {
        point: usize,
        digit: Digit,
        weight: f64,
    },
    /// The set contains an extreme cycle of the full system, which is listed instead.
    Superseded {
        cycle: usize,
        point: RationalVector,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct RejectedLineSet {
    pub set: InvariantLineSet,
    pub reason: Rejection,
}

/// Line sets over every quotient cycle of the frame, split into accepted and rejected.
pub fn invariant_line_sets(
    frame: &LineFrame,
    extreme: &[Cycle],
    seed: u64,
) -> Result<(Vec<InvariantLineSet>, Vec<RejectedLineSet>)> {
    let f = &frame.factored;
    let fw = FiberWeight::new(f);
    let s2_inv = f.s2.inverse()?;
    let w_full = WeightFunction::uniform(frame.triple.b());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for quotient in wtilde_cycles(f)? {
        let mut offcycle_max = 0.0f64;
        let mut offcycle_exact = true;
        let mut leak: Option<Rejection> = None;
        let mut spot_max = 0.0f64;
        for (q, y) in quotient.points.iter().enumerate() {
            for (j, s) in f.second.iter().enumerate() {
                if j == quotient.word_index[q] {
                    continue;
                }
                let next = s2_inv.apply(&y.add_int(s));
                let value = fw.eval(&next.to_f64());
                offcycle_max = offcycle_max.max(value);
                let vanishes = match fw.vanishes_exact(&next) {
                    Some(v) => v,
                    None => {
                        offcycle_exact = false;
                        value < VANISH_TOL
                    }
                };
                let mut spot = 0.0f64;
                let yf = y.to_f64();
                for g in &f.gamma[j] {
                    let l: Digit = [g.as_slice(), s.as_slice()].concat();
                    for _ in 0..SPOT_SAMPLES {
                        let mut z: Vec<f64> = (0..f.split).map(|_| rng.gen_range(-1.0..1.0)).collect();
                        z.extend(&yf);
                        spot = spot.max(w_full.eval(&frame.triple.tau_f64(&l, &z)));
                    }
                }
                spot_max = spot_max.max(spot);
                if leak.is_none() && (!vanishes || spot >= SPOT_TOL) {
                    leak = Some(Rejection::Leak {
                        point: q,
                        digit: s.clone(),
                        weight: value.max(spot),
                    });
                }
            }
        }
        let set = InvariantLineSet {
            direction: frame.line.direction.clone(),
            eigenvalue: frame.line.eigenvalue,
            translates: quotient.points.iter().map(|y| frame.base_point(y)).collect(),
            quotient,
            offcycle_max,
            offcycle_exact,
            spot_check_max: spot_max,
            frame: frame.clone(),
        };
        let superseded = extreme.iter().enumerate().find_map(|(ci, c)| {
            c.points.iter().find(|p| set.contains(p)).map(|p| Rejection::Superseded {
                cycle: ci,
                point: p.clone(),
            })
        });
        match leak.or(superseded) {
            Some(reason) => rejected.push(RejectedLineSet { set, reason }),
            None => accepted.push(set),
        }
    }
    Ok((accepted, rejected))
}
