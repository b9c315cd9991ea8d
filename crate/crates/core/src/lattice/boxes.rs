//! Bounding boxes for the attractor of `x -> A (x + t)`, `t` in a digit set.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::contraction_certificate;
use super::matrix::{rat_int, rat_to_string, Digit, Rational, RationalBox, RationalMatrix, RationalVector};
use super::MAX_CERT_POWER;
use crate::error::{Error, Result};

/// Iterations of the hull map used when the direct solve does not give an invariant box.
const HULL_ITERATIONS: usize = 24;

/// Boxes known to contain every attractor point (and so every periodic point).
#[derive(Clone, Debug, Serialize)]
pub struct InvariantBox {
    /// Power `k` with `||A^k||_inf < 1`.
    pub power: u32,
    /// Radius of the cube `[-rho, rho]^d` derived from the contraction norm.
    #[serde(serialize_with = "ser_rational")]
    pub rho: Rational,
    /// Smallest box found, contained in the rho cube.
    pub bounds: RationalBox,
    /// Whether `bounds` is mapped into itself by every map.
    pub self_mapped: bool,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_string(q))
}

impl Serialize for RationalBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| [rat_to_string(l), rat_to_string(h)])
            .collect();
        pairs.serialize(s)
    }
}

/// A norm `nu(x) = max_{j<k} ||A^j x||_inf theta^-j` with `nu(A x) <= theta nu(x)`, `theta < 1`.
#[derive(Clone, Debug)]
pub struct AdaptedNorm {
    pub power: u32,
    pub theta: Rational,
    powers: Vec<RationalMatrix>,
}

impl AdaptedNorm {
    pub fn new(a: &RationalMatrix) -> Result<Self> {
        let (power, q) = contraction_certificate(a, MAX_CERT_POWER).ok_or_else(|| {
            Error::BoxConstruction(format!(
                "no k <= {MAX_CERT_POWER} with ||A^k||_inf < 1 (||A||_inf = {})",
                rat_to_string(&a.inf_norm())
            ))
        })?;
        // (1 - e)^k >= 1 - k e, so theta^k >= (1 + q) / 2 >= q
        let theta = Rational::one() - (Rational::one() - &q) / rat_int(2 * power as i64);
        let mut powers = vec![RationalMatrix::identity(a.rows())];
        for _ in 1..power {
            let next = powers.last().unwrap().mul(a);
            powers.push(next);
        }
        Ok(Self { power, theta, powers })
    }

    pub fn nu(&self, x: &RationalVector) -> Rational {
        let mut best = Rational::zero();
        let mut scale = Rational::one();
        for p in &self.powers {
            let v = p.apply(x).inf_norm() * &scale;
            if v > best {
                best = v;
            }
            scale = &scale / &self.theta;
        }
        best
    }

    /// `C` with `||x||_inf <= nu(x) <= C ||x||_inf`.
    pub fn equivalence_constant(&self) -> Rational {
        let mut best = Rational::zero();
        let mut scale = Rational::one();
        for p in &self.powers {
            let v = p.inf_norm() * &scale;
            if v > best {
                best = v;
            }
            scale = &scale / &self.theta;
        }
        best
    }

    /// Radius of a nu-ball mapped into itself by every `x -> A (x + t)`.
    pub fn absorbing_radius(&self, digits: &[Digit]) -> Rational {
        let nu_max = digits
            .iter()
            .map(|l| self.nu(&RationalVector::from_ints(l)))
            .max()
            .unwrap_or_else(Rational::zero);
        &self.theta * nu_max / (Rational::one() - &self.theta)
    }
}

/// Box hull of the images of `b` under all maps.
pub fn hull_image(a: &RationalMatrix, shifts: &[RationalVector], b: &RationalBox) -> RationalBox {
    let d = b.dim();
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        let (mut box_lo, mut box_hi) = (Rational::zero(), Rational::zero());
        for j in 0..d {
            let aij = a.get(i, j);
            if aij.is_negative() {
                box_lo += aij * &b.hi[j];
                box_hi += aij * &b.lo[j];
            } else {
                box_lo += aij * &b.lo[j];
                box_hi += aij * &b.hi[j];
            }
        }
        let t_min = shifts.iter().map(|t| &t.0[i]).min().expect("nonempty digits");
        let t_max = shifts.iter().map(|t| &t.0[i]).max().expect("nonempty digits");
        lo.push(box_lo + t_min);
        hi.push(box_hi + t_max);
    }
    RationalBox::new(lo, hi)
}

/// Solves for the fixed point of the hull map, which is affine in the corner coordinates.
fn hull_fixed_point(a: &RationalMatrix, shifts: &[RationalVector]) -> Option<RationalBox> {
    let d = a.rows();
    // unknowns z = (lo_0..lo_{d-1}, hi_0..hi_{d-1}); equation z = T z + c
    let mut t = RationalMatrix::zeros(2 * d, 2 * d);
    let mut c = Vec::with_capacity(2 * d);
    for i in 0..d {
        c.push(shifts.iter().map(|s| s.0[i].clone()).min()?);
    }
    for i in 0..d {
        c.push(shifts.iter().map(|s| s.0[i].clone()).max()?);
    }
    for i in 0..d {
        for j in 0..d {
            let aij = a.get(i, j).clone();
            if aij.is_negative() {
                t.set(i, d + j, aij.clone());
                t.set(d + i, j, aij);
            } else {
                t.set(i, j, aij.clone());
                t.set(d + i, d + j, aij);
            }
        }
    }
    let sys = RationalMatrix::identity(2 * d).sub(&t);
    let z = sys.inverse().ok()?.apply(&RationalVector(c));
    let b = RationalBox::new(z.0[..d].to_vec(), z.0[d..].to_vec());
    (!b.is_empty()).then_some(b)
}

/// Builds a box containing the attractor of the maps `x -> A (x + t)`, `t` in `digits`.
///
/// First a cube from an adapted norm in which `A` contracts, then either the exact fixed
/// point of the box hull map (when it is self-mapped) or a run of hull iterations
/// intersected with the cube.
pub fn invariant_box(a: &RationalMatrix, digits: &[Digit]) -> Result<InvariantBox> {
    let d = a.rows();
    if digits.is_empty() {
        return Err(Error::BoxConstruction("empty digit set".into()));
    }
    let norm = AdaptedNorm::new(a)?;
    let power = norm.power;
    let rho = norm.absorbing_radius(digits);
    let cube = RationalBox::cube(d, rho.clone());

    let shifts: Vec<RationalVector> = digits.iter().map(|l| a.apply_int(l)).collect();
    if let Some(fixed) = hull_fixed_point(a, &shifts) {
        if fixed.contains_box(&hull_image(a, &shifts, &fixed)) {
            return Ok(InvariantBox {
                power,
                rho,
                bounds: cube.intersect(&fixed),
                self_mapped: cube.contains_box(&fixed),
            });
        }
    }
    let mut b = cube.clone();
    for _ in 0..HULL_ITERATIONS {
        let next = b.intersect(&hull_image(a, &shifts, &b));
        if next == b {
            break;
        }
        b = next;
    }
    let self_mapped = b.contains_box(&hull_image(a, &shifts, &b));
    Ok(InvariantBox {
        power,
        rho,
        bounds: b,
        self_mapped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::{rat, IntMatrix};

    fn inverse_of(rows: &[Vec<i64>]) -> RationalMatrix {
        IntMatrix::square(rows).unwrap().inverse().unwrap()
    }

    #[test]
    fn worked_dual_system_box() {
        // maps x -> S^-1 (x + l) with S = [[4,1],[0,4]]
        let a = inverse_of(&[vec![4, 1], vec![0, 4]]);
        let l = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]];
        let b = invariant_box(&a, &l).unwrap();
        assert!(b.self_mapped);
        assert_eq!(b.bounds, RationalBox::new(vec![rat(-2, 9), rat(0, 1)], vec![rat(2, 3), rat(2, 3)]));
        // contained in the rectangle [-1/4, 2/3] x [0, 2/3]
        let rect = RationalBox::new(vec![rat(-1, 4), rat(0, 1)], vec![rat(2, 3), rat(2, 3)]);
        assert!(rect.contains_box(&b.bounds));
        assert!(rect.contains_box(&hull_image(&a, &l.iter().map(|v| a.apply_int(v)).collect::<Vec<_>>(), &rect)));
    }

    #[test]
    fn one_dimensional_interval() {
        let a = inverse_of(&[vec![4]]);
        let b = invariant_box(&a, &[vec![0], vec![2]]).unwrap();
        assert_eq!(b.bounds, RationalBox::new(vec![rat(0, 1)], vec![rat(2, 3)]));
        let b = invariant_box(&inverse_of(&[vec![-3]]), &[vec![0], vec![1]]).unwrap();
        // x -> -(x + t)/3: fixed interval [-3/8, 1/8]
        assert_eq!(b.bounds, RationalBox::new(vec![rat(-3, 8)], vec![rat(1, 8)]));
        assert!(b.self_mapped);
    }

    #[test]
    fn rotation_like_matrix_still_bounded() {
        // R^2 = -2I, so A^2 = -I/2 while ||A||_inf = 1
        let a = inverse_of(&[vec![0, -1], vec![2, 0]]);
        let l = vec![vec![0, 0], vec![1, 0]];
        let b = invariant_box(&a, &l).unwrap();
        assert_eq!(b.power, 2);
        // every orbit point of random compositions stays inside
        let maps: Vec<_> = l.iter().map(|v| a.apply_int(v)).collect();
        let mut x = RationalVector::zeros(2);
        for k in 0..40 {
            x = &a.apply(&x) + &maps[k % 2];
            assert!(b.bounds.contains(&x));
        }
    }
}
