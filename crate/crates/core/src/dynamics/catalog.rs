//! The list of minimal invariant sets: extreme cycles plus invariant line sets.

use serde::Serialize;

use super::cycles::{extreme_cycle_search, Cycle};
use super::lines::{invariant_line_sets, line_distance, on_line, InvariantLineSet, LineFrame, RejectedLineSet};
use crate::error::Result;
use crate::lattice::{rational_eigen_lines, Digit, RationalBox, RationalVector};
use crate::triple::HadamardTriple;

/// Separation used when the catalog has fewer than two sets.
pub const LONE_SET_SEPARATION: f64 = 1.0;

/// Seed of the line-set spot check.
pub const SPOT_CHECK_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, Serialize)]
pub struct SkippedLine {
    pub direction: Digit,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantCatalog {
    pub cycles: Vec<Cycle>,
    pub line_sets: Vec<InvariantLineSet>,
    pub rejected: Vec<RejectedLineSet>,
    pub skipped_lines: Vec<SkippedLine>,
    /// Whether all listed sets are pairwise disjoint (decided exactly).
    pub disjoint: bool,
    /// Smallest Euclidean distance between two listed sets.
    pub separation: f64,
    pub search_box: RationalBox,
    pub candidates: usize,
}

/// A listed set; cycles come first in the catalog numbering.
#[derive(Clone, Copy, Debug)]
pub enum CatalogSet<'a> {
    Cycle(&'a Cycle),
    Lines(&'a InvariantLineSet),
}

impl CatalogSet<'_> {
    pub fn label(&self) -> String {
        match self {
            CatalogSet::Cycle(c) => {
                let pts: Vec<String> = c.points.iter().map(|p| p.to_string()).collect();
                format!("cycle {{{}}}", pts.join(", "))
            }
            CatalogSet::Lines(l) => l.label(),
        }
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        match self {
            CatalogSet::Cycle(c) => c
                .points
                .iter()
                .map(|p| euclid(&p.to_f64(), x))
                .fold(f64::INFINITY, f64::min),
            CatalogSet::Lines(l) => l.distance(x),
        }
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        match self {
            CatalogSet::Cycle(c) => c.contains(x),
            CatalogSet::Lines(l) => l.contains(x),
        }
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt()
}

fn parallel(u: &[i64], v: &[i64]) -> bool {
    // integer vectors in the plane
    u[0] * v[1] - u[1] * v[0] == 0
}

/// Exact disjointness of two listed sets.
pub fn sets_disjoint(a: CatalogSet, b: CatalogSet) -> bool {
    match (a, b) {
        (CatalogSet::Cycle(c), other) | (other, CatalogSet::Cycle(c)) => !c.points.iter().any(|p| other.contains(p)),
        (CatalogSet::Lines(l), CatalogSet::Lines(m)) => {
            if !parallel(&l.direction, &m.direction) {
                return false;
            }
            !l.translates
                .iter()
                .any(|b| m.translates.iter().any(|c| on_line(c, &m.direction, b)))
        }
    }
}

/// Euclidean distance between two listed sets.
pub fn set_distance(a: CatalogSet, b: CatalogSet) -> f64 {
    match (a, b) {
        (CatalogSet::Cycle(c), other) | (other, CatalogSet::Cycle(c)) => c
            .points
            .iter()
            .map(|p| other.distance(&p.to_f64()))
            .fold(f64::INFINITY, f64::min),
        (CatalogSet::Lines(l), CatalogSet::Lines(m)) => {
            if !parallel(&l.direction, &m.direction) {
                return 0.0;
            }
            let v: Vec<f64> = m.direction.iter().map(|&c| c as f64).collect();
            l.translates
                .iter()
                .flat_map(|b| m.translates.iter().map(move |c| (b, c)))
                .map(|(b, c)| line_distance(&c.to_f64(), &v, &b.to_f64()))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

impl InvariantCatalog {
    pub fn len(&self) -> usize {
        self.cycles.len() + self.line_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn set(&self, k: usize) -> CatalogSet<'_> {
        if k < self.cycles.len() {
            CatalogSet::Cycle(&self.cycles[k])
        } else {
            CatalogSet::Lines(&self.line_sets[k - self.cycles.len()])
        }
    }

    pub fn sets(&self) -> impl Iterator<Item = CatalogSet<'_>> {
        (0..self.len()).map(|k| self.set(k))
    }

    pub fn labels(&self) -> Vec<String> {
        self.sets().map(|s| s.label()).collect()
    }

    /// Index of the set within `separation / 2` of `x`, if any.
    pub fn classify(&self, x: &[f64]) -> Option<usize> {
        let (k, d) = self
            .sets()
            .enumerate()
            .map(|(k, s)| (k, s.distance(x)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        (d < self.separation / 2.0).then_some(k)
    }
}

/// Extreme cycles plus the accepted line sets over every rational eigen-line of `S`.
pub fn build_catalog(t: &HadamardTriple) -> Result<InvariantCatalog> {
    let search = extreme_cycle_search(t)?;
    let cycles = search.cycles;
    let mut line_sets = Vec::new();
    let mut rejected = Vec::new();
    let mut skipped_lines = Vec::new();
    if t.dim() == 2 {
        for line in rational_eigen_lines(t.s())? {
            let frame = match LineFrame::new(t, &line) {
                Ok(f) => f,
                Err(e) => {
                    skipped_lines.push(SkippedLine {
                        direction: line.direction.clone(),
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            match invariant_line_sets(&frame, &cycles, SPOT_CHECK_SEED) {
                Ok((acc, rej)) => {
                    line_sets.extend(acc);
                    rejected.extend(rej);
                }
                Err(e) => skipped_lines.push(SkippedLine {
                    direction: line.direction.clone(),
                    reason: e.to_string(),
                }),
            }
        }
    }
    let mut cat = InvariantCatalog {
        cycles,
        line_sets,
        rejected,
        skipped_lines,
        disjoint: true,
        separation: LONE_SET_SEPARATION,
        search_box: search.bounds,
        candidates: search.candidates,
    };
    let mut sep = f64::INFINITY;
    for i in 0..cat.len() {
        for j in i + 1..cat.len() {
            cat.disjoint &= sets_disjoint(cat.set(i), cat.set(j));
            sep = sep.min(set_distance(cat.set(i), cat.set(j)));
        }
    }
    if sep.is_finite() {
        cat.separation = sep;
    }
    Ok(cat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use crate::presets;

    #[test]
    fn worked_catalog() {
        let c = build_catalog(&presets::planar_example()).unwrap();
        assert_eq!(c.cycles.len(), 1);
        assert_eq!(c.line_sets.len(), 1);
        assert!(c.disjoint);
        assert!((c.separation - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.labels(), vec!["cycle {(0, 0)}".to_string(), "lines {(0, 2/3) + t(1, 0)}".to_string()]);
        assert_eq!(c.classify(&[5.0, 0.6]), Some(1));
        assert_eq!(c.classify(&[0.01, 0.01]), Some(0));
        assert_eq!(c.classify(&[0.5, 0.33]), None);
    }

    #[test]
    fn one_dimensional_catalogs() {
        let c = build_catalog(&presets::quarter_cantor()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.separation, LONE_SET_SEPARATION);
        let c = build_catalog(&presets::three_quarter_cantor()).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.disjoint);
        assert!((c.separation - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn product_catalog_falls_back_to_cycles() {
        let c = build_catalog(&presets::product_system()).unwrap();
        assert_eq!(c.cycles.len(), 2);
        assert!(c.line_sets.is_empty());
        assert_eq!(c.rejected.len(), 3);
        assert!(c.disjoint);
    }

    #[test]
    fn disjointness_decisions() {
        let t = presets::planar_example();
        let c = build_catalog(&t).unwrap();
        let line = &c.line_sets[0];
        let mut moved = line.clone();
        moved.translates = vec![RationalVector(vec![rat(0, 1), rat(0, 1)])];
        assert!(!sets_disjoint(c.set(0), CatalogSet::Lines(&moved)));
        assert!(sets_disjoint(CatalogSet::Lines(line), c.set(0)));
        let mut tilted = line.clone();
        tilted.direction = vec![1, 1];
        assert!(!sets_disjoint(CatalogSet::Lines(line), CatalogSet::Lines(&tilted)));
        assert_eq!(set_distance(CatalogSet::Lines(line), CatalogSet::Lines(&tilted)), 0.0);
        let mut shifted = line.clone();
        shifted.translates = vec![RationalVector(vec![rat(7, 1), rat(1, 6)])];
        assert!(sets_disjoint(CatalogSet::Lines(line), CatalogSet::Lines(&shifted)));
        assert!((set_distance(CatalogSet::Lines(line), CatalogSet::Lines(&shifted)) - 0.5).abs() < 1e-15);
    }
}
