//! Frequencies `w_0 + S w_1 + ... + S^{n-1} w_{n-1} - S^n y_q` attached to a cycle.

use num_traits::Signed;

use crate::dynamics::Cycle;
use crate::error::{Error, Result};
use crate::lattice::{rat_int, AdaptedNorm, Digit, IntMatrix, Rational, RationalMatrix, RationalVector};

/// How far to enumerate a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Horizon {
    /// Words of length at most this.
    Words(usize),
    /// All elements with sup-norm at most this; complete.
    Radius(i64),
}

/// `sum_i S^i w_i - S^n start` for `word = (w_0, ..., w_{n-1})`.
pub fn word_value(s: &RationalMatrix, word: &[Digit], start: &RationalVector) -> RationalVector {
    let mut v = start.scale(&rat_int(-1));
    for w in word.iter().rev() {
        v = s.apply(&v).add_int(w);
    }
    v
}

/// `k_C(w) = w_0 + S w_1 + ... + S^{km-1} w_{km-1} - S^{km} y_0` for a word whose length is
/// a multiple of the cycle period.
pub fn k_offset(cycle: &Cycle, s: &IntMatrix, word: &[Digit]) -> Result<RationalVector> {
    if word.len() % cycle.period() != 0 {
        return Err(Error::InvalidInput(format!(
            "word length {} is not a multiple of the cycle period {}",
            word.len(),
            cycle.period()
        )));
    }
    Ok(word_value(&s.to_rational(), word, &cycle.points[0]))
}

/// One frequency of a cycle spectrum with the data that produced it.
#[derive(Clone, Debug)]
pub(crate) struct TreeNode {
    pub value: RationalVector,
    pub point: usize,
    pub word: Vec<usize>,
}

/// All values over minimal words: the empty word, or words whose innermost digit differs
/// from the cycle digit leading into `y_q`. Each frequency then arises exactly once.
pub(crate) fn enumerate_cycle(
    s: &IntMatrix,
    digits: &[Digit],
    cycle: &Cycle,
    horizon: Horizon,
) -> Result<Vec<TreeNode>> {
    let sr = s.to_rational();
    let m = cycle.period();
    let prune = match horizon {
        Horizon::Words(_) => None,
        Horizon::Radius(r) => {
            let norm = AdaptedNorm::new(&s.inverse()?)?;
            let neg: Vec<Digit> = digits.iter().map(|l| l.iter().map(|c| -c).collect()).collect();
            let reach = (norm.equivalence_constant() * rat_int(r)).max(norm.absorbing_radius(&neg));
            Some((norm, reach, rat_int(r)))
        }
    };
    let max_len = match horizon {
        Horizon::Words(n) => n,
        Horizon::Radius(_) => usize::MAX,
    };
    // a node whose nu exceeds the reach has no descendant inside the radius
    let keep = |v: &RationalVector| prune.as_ref().map_or(true, |(n, reach, _)| &n.nu(v) <= reach);
    let emit = |v: &RationalVector| prune.as_ref().map_or(true, |(_, _, r)| v.0.iter().all(|c| c.abs() <= *r));
    let mut out = Vec::new();
    let mut stack: Vec<TreeNode> = Vec::new();
    for (q, y) in cycle.points.iter().enumerate() {
        let root = TreeNode {
            value: y.scale(&rat_int(-1)),
            point: q,
            word: Vec::new(),
        };
        if !keep(&root.value) {
            continue;
        }
        let entering = cycle.word_index[(q + m - 1) % m];
        if max_len > 0 {
            for (k, l) in digits.iter().enumerate() {
                if k == entering {
                    continue;
                }
                let v = sr.apply(&root.value).add_int(l);
                if keep(&v) {
                    stack.push(TreeNode {
                        value: v,
                        point: q,
                        word: vec![k],
                    });
                }
            }
        }
        if emit(&root.value) {
            out.push(root);
        }
        while let Some(node) = stack.pop() {
            if node.word.len() < max_len {
                let base = sr.apply(&node.value);
                for (k, l) in digits.iter().enumerate() {
                    let v = base.add_int(l);
                    if keep(&v) {
                        let mut word = Vec::with_capacity(node.word.len() + 1);
                        word.push(k);
                        word.extend_from_slice(&node.word);
                        stack.push(TreeNode { value: v, point: q, word });
                    }
                }
            }
            if emit(&node.value) {
                out.push(node);
            }
        }
    }
    Ok(out)
}

pub(crate) fn sup_norm(v: &RationalVector) -> Rational {
    v.inf_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::extreme_cycles;
    use crate::lattice::rat;
    use crate::presets;
    use std::collections::BTreeSet;

    fn quarter_oracle(len: u32) -> BTreeSet<i64> {
        // sums of 4^k a_k, a_k in {0, 2}, k < len
        (0..1i64 << len)
            .map(|mask| (0..len).filter(|k| mask >> k & 1 == 1).map(|k| 2 * 4i64.pow(k)).sum())
            .collect()
    }

    #[test]
    fn offsets() {
        let t = presets::three_quarter_cantor();
        let c = extreme_cycles(&t).unwrap();
        let s = t.s();
        assert_eq!(k_offset(&c[0], s, &[vec![2], vec![0]]).unwrap(), RationalVector::from_ints(&[2]));
        assert_eq!(k_offset(&c[1], s, &[vec![2]]).unwrap(), RationalVector(vec![rat(-2, 3)]));
        assert_eq!(k_offset(&c[1], s, &[vec![0]]).unwrap(), RationalVector(vec![rat(-8, 3)]));
        assert_eq!(k_offset(&c[1], s, &[]).unwrap(), RationalVector(vec![rat(-2, 3)]));
    }

    #[test]
    fn zero_cycle_words_match_closed_form() {
        let t = presets::quarter_cantor();
        let c = &extreme_cycles(&t).unwrap()[0];
        for len in 0..6 {
            let got: BTreeSet<i64> = enumerate_cycle(t.s(), t.l(), c, Horizon::Words(len))
                .unwrap()
                .iter()
                .map(|n| n.value.to_i64().unwrap()[0])
                .collect();
            assert_eq!(got, quarter_oracle(len as u32));
        }
    }

    #[test]
    fn radius_enumeration_is_complete() {
        let t = presets::quarter_cantor();
        let c = &extreme_cycles(&t).unwrap()[0];
        let got: BTreeSet<i64> = enumerate_cycle(t.s(), t.l(), c, Horizon::Radius(1000))
            .unwrap()
            .iter()
            .map(|n| n.value.to_i64().unwrap()[0])
            .collect();
        let want: BTreeSet<i64> = quarter_oracle(8).into_iter().filter(|v| *v <= 1000).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn nonzero_cycle_reflects() {
        // Lambda(2/3) = -2/3 - Lambda_1
        let t = presets::three_quarter_cantor();
        let c = &extreme_cycles(&t).unwrap()[1];
        let got: BTreeSet<RationalVector> = enumerate_cycle(t.s(), t.l(), c, Horizon::Words(4))
            .unwrap()
            .into_iter()
            .map(|n| n.value)
            .collect();
        let want: BTreeSet<RationalVector> = quarter_oracle(4)
            .into_iter()
            .map(|v| RationalVector(vec![rat(-2, 3) - rat_int(v)]))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn word_value_agrees_with_nodes() {
        let t = presets::planar_example();
        let c = &extreme_cycles(&t).unwrap()[0];
        let sr = t.s().to_rational();
        for n in enumerate_cycle(t.s(), t.l(), c, Horizon::Words(3)).unwrap() {
            let word: Vec<Digit> = n.word.iter().map(|&k| t.l()[k].clone()).collect();
            assert_eq!(word_value(&sr, &word, &c.points[n.point]), n.value);
        }
        // (0,2) + S (2,0) = (8,2)
        let v = word_value(&sr, &[vec![0, 2], vec![2, 0]], &c.points[0]);
        assert_eq!(v, RationalVector::from_ints(&[8, 2]));
    }
}
