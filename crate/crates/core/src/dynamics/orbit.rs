//! Forward orbits of the random walk `x -> tau_l x` taken with probability `W_B(tau_l x)`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::catalog::InvariantCatalog;
use crate::lattice::RationalVector;
use crate::measure::WeightFunction;
use crate::triple::HadamardTriple;

/// Transitions with smaller weight are treated as impossible.
pub const BRANCH_TOL: f64 = 1e-12;

/// Largest number of points kept in one generation.
pub const MAX_ORBIT_NODES: usize = 1_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct OrbitLevel {
    /// Distinct points reached after this many steps, with the total probability of reaching them.
    pub points: Vec<(RationalVector, f64)>,
    /// Largest distance from a point of this level to the nearest catalog set.
    pub max_distance: f64,
    /// Probability-weighted mean of the same distance.
    pub mean_distance: f64,
    /// Probability of being within half the catalog separation of a set.
    pub mass_near: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub levels: Vec<OrbitLevel>,
    pub truncated: bool,
    /// Whether all but `1e-6` of the last level's mass is near a catalog set.
    pub enters_catalog: bool,
}

impl Orbit {
    pub fn last(&self) -> &OrbitLevel {
        self.levels.last().expect("orbit has the start level")
    }
}

/// Breadth-first expansion of all positive-probability trajectories from `x`.
pub fn orbit(t: &HadamardTriple, catalog: &InvariantCatalog, x: &RationalVector, depth: usize) -> Orbit {
    let w = WeightFunction::uniform(t.b());
    let dist = |p: &RationalVector| {
        let f = p.to_f64();
        catalog.sets().map(|s| s.distance(&f)).fold(f64::INFINITY, f64::min)
    };
    let level = |m: &BTreeMap<RationalVector, f64>| {
        let mut lvl = OrbitLevel {
            points: Vec::with_capacity(m.len()),
            max_distance: 0.0,
            mean_distance: 0.0,
            mass_near: 0.0,
        };
        for (p, &mass) in m {
            let d = dist(p);
            lvl.max_distance = lvl.max_distance.max(d);
            lvl.mean_distance += mass * d;
            if d < catalog.separation / 2.0 {
                lvl.mass_near += mass;
            }
            lvl.points.push((p.clone(), mass));
        }
        lvl
    };
    let mut current: BTreeMap<RationalVector, f64> = BTreeMap::from([(x.clone(), 1.0)]);
    let mut levels = vec![level(&current)];
    let mut truncated = false;
    for _ in 0..depth.max(1) {
        let mut next: BTreeMap<RationalVector, f64> = BTreeMap::new();
        'outer: for (p, mass) in &current {
            for l in t.l() {
                let y = t.tau(l, p);
                let wy = w.eval(&y.to_f64());
                if wy > BRANCH_TOL {
                    *next.entry(y).or_insert(0.0) += mass * wy;
                    if next.len() >= MAX_ORBIT_NODES {
                        truncated = true;
                        break 'outer;
                    }
                }
            }
        }
        levels.push(level(&next));
        current = next;
        if truncated {
            break;
        }
    }
    let enters_catalog = levels.last().unwrap().mass_near > 1.0 - 1e-6;
    Orbit {
        levels,
        truncated,
        enters_catalog,
    }
}
