//! Candidate spectra assembled from the invariant catalog.

pub mod tree;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dynamics::{build_catalog, Cycle, InvariantCatalog, InvariantLineSet, LineFrame};
use crate::error::{Error, Result};
use crate::lattice::{rat_int, Digit, IntMatrix, RationalVector};
use crate::triple::HadamardTriple;
pub use tree::{k_offset, word_value, Horizon};
use tree::{enumerate_cycle, sup_norm};

/// Where a frequency came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    /// Index into `Spectrum::sources`.
    pub source: usize,
    /// Cycle point the word is attached to.
    pub point: usize,
    /// Digit indices `w_0, ..., w_{n-1}`, outermost first.
    pub word: Vec<usize>,
    /// First-coordinate frequency in the line frame, for line sets and products.
    pub first: Option<RationalVector>,
    /// Second-coordinate frequency in the line frame, for products.
    pub second: Option<RationalVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumElement {
    pub value: RationalVector,
    pub provenance: Provenance,
}

/// Generator of one block of frequencies.
#[derive(Clone, Debug)]
pub enum SpectrumSource {
    Cycle { s: IntMatrix, digits: Vec<Digit>, cycle: Cycle },
    Lines { frame: LineFrame, quotient: Cycle },
    Product { frame: LineFrame },
}

impl SpectrumSource {
    pub fn kind(&self) -> &'static str {
        match self {
            SpectrumSource::Cycle { .. } => "cycle",
            SpectrumSource::Lines { .. } => "lines",
            SpectrumSource::Product { .. } => "product",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub elements: Vec<SpectrumElement>,
    pub sources: Vec<SpectrumSource>,
    pub horizon: Horizon,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn values(&self) -> Vec<RationalVector> {
        self.elements.iter().map(|e| e.value.clone()).collect()
    }

    pub fn values_f64(&self) -> Vec<Vec<f64>> {
        self.elements.iter().map(|e| e.value.to_f64()).collect()
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        self.elements.iter().any(|e| &e.value == v)
    }

    /// Elements coming from source `k`.
    pub fn from_source(&self, k: usize) -> impl Iterator<Item = &SpectrumElement> {
        self.elements.iter().filter(move |e| e.provenance.source == k)
    }

    pub fn non_integral(&self) -> usize {
        self.elements.iter().filter(|e| !e.value.is_integral()).count()
    }

    /// Sorts by sup-norm, then by value.
    pub fn sort_by_norm(&mut self) {
        self.elements
            .sort_by(|a, b| (sup_norm(&a.value), &a.value).cmp(&(sup_norm(&b.value), &b.value)));
    }

    /// Recomputes a value from its provenance alone.
    pub fn reconstruct(&self, e: &SpectrumElement) -> RationalVector {
        let p = &e.provenance;
        match &self.sources[p.source] {
            SpectrumSource::Cycle { s, digits, cycle } => {
                let word: Vec<Digit> = p.word.iter().map(|&k| digits[k].clone()).collect();
                word_value(&s.to_rational(), &word, &cycle.points[p.point])
            }
            SpectrumSource::Lines { frame, quotient } => {
                let f = &frame.factored;
                let word: Vec<Digit> = p.word.iter().map(|&k| f.second[k].clone()).collect();
                let k = word_value(&f.s2.to_rational(), &word, &quotient.points[p.point]);
                frame.to_original(&concat(p.first.as_ref().expect("line provenance"), &k))
            }
            SpectrumSource::Product { frame } => frame.to_original(&concat(
                p.first.as_ref().expect("product provenance"),
                p.second.as_ref().expect("product provenance"),
            )),
        }
    }

    /// Appends another spectrum, checking that no frequency repeats.
    fn absorb(&mut self, other: Spectrum, seen: &mut BTreeMap<RationalVector, usize>) -> Result<()> {
        let offset = self.sources.len();
        self.sources.extend(other.sources);
        for mut e in other.elements {
            e.provenance.source += offset;
            insert_distinct(&mut self.elements, seen, e)?;
        }
        Ok(())
    }
}

fn concat(a: &RationalVector, b: &RationalVector) -> RationalVector {
    RationalVector(a.0.iter().chain(&b.0).cloned().collect())
}

fn describe(p: &Provenance) -> String {
    format!("source {} point {} word {:?}", p.source, p.point, p.word)
}

fn insert_distinct(
    out: &mut Vec<SpectrumElement>,
    seen: &mut BTreeMap<RationalVector, usize>,
    e: SpectrumElement,
) -> Result<()> {
    if let Some(&i) = seen.get(&e.value) {
        return Err(Error::DistinctnessViolation {
            value: e.value.to_string(),
            first: describe(&out[i].provenance),
            second: describe(&e.provenance),
        });
    }
    seen.insert(e.value.clone(), out.len());
    out.push(e);
    Ok(())
}

fn within(v: &RationalVector, horizon: Horizon) -> bool {
    match horizon {
        Horizon::Words(_) => true,
        Horizon::Radius(r) => sup_norm(v) <= rat_int(r),
    }
}

/// Radius to use in the line frame so that the original-frame ball is covered.
fn frame_horizon(frame: &LineFrame, horizon: Horizon) -> Horizon {
    match horizon {
        Horizon::Words(n) => Horizon::Words(n),
        Horizon::Radius(r) => {
            let norm = frame.p.to_rational().inf_norm();
            let scaled = norm * rat_int(r);
            Horizon::Radius(scaled.ceil().to_integer().try_into().unwrap_or(i64::MAX))
        }
    }
}

/// `Lambda(C) = {w_0 + S w_1 + ... - S^n x_q}` over minimal words.
pub fn lambda_of_cycle(t: &HadamardTriple, cycle: &Cycle, horizon: Horizon) -> Result<Spectrum> {
    let nodes = enumerate_cycle(t.s(), t.l(), cycle, horizon)?;
    let mut sp = Spectrum {
        elements: Vec::with_capacity(nodes.len()),
        sources: vec![SpectrumSource::Cycle {
            s: t.s().clone(),
            digits: t.l().to_vec(),
            cycle: cycle.clone(),
        }],
        horizon,
    };
    let mut seen = BTreeMap::new();
    for n in nodes {
        let e = SpectrumElement {
            value: n.value,
            provenance: Provenance {
                source: 0,
                point: n.point,
                word: n.word,
                first: None,
                second: None,
            },
        };
        insert_distinct(&mut sp.elements, &mut seen, e)?;
    }
    Ok(sp)
}

/// `Lambda(R) = Lambda_1 x {k_C(w)}` in the line frame, mapped back to original coordinates.
pub fn lambda_of_line_set(ls: &InvariantLineSet, first: &Spectrum, horizon: Horizon) -> Result<Spectrum> {
    let frame = &ls.frame;
    let f = &frame.factored;
    let inner = frame_horizon(frame, horizon);
    let ks = enumerate_cycle(&f.s2, &f.second, &ls.quotient, inner)?;
    let mut sp = Spectrum {
        elements: Vec::new(),
        sources: vec![SpectrumSource::Lines {
            frame: frame.clone(),
            quotient: ls.quotient.clone(),
        }],
        horizon,
    };
    let mut seen = BTreeMap::new();
    for a in &first.elements {
        for k in &ks {
            let value = frame.to_original(&concat(&a.value, &k.value));
            if !within(&value, horizon) {
                continue;
            }
            let e = SpectrumElement {
                value,
                provenance: Provenance {
                    source: 0,
                    point: k.point,
                    word: k.word.clone(),
                    first: Some(a.value.clone()),
                    second: None,
                },
            };
            insert_distinct(&mut sp.elements, &mut seen, e)?;
        }
    }
    Ok(sp)
}

/// Union of the spectra of all catalog sets; frequencies must be globally distinct.
pub fn assemble_spectrum(t: &HadamardTriple, catalog: &InvariantCatalog, horizon: Horizon) -> Result<Spectrum> {
    if !catalog.disjoint {
        return Err(Error::ReducibilityConditionUnmet);
    }
    let mut out = Spectrum {
        elements: Vec::new(),
        sources: Vec::new(),
        horizon,
    };
    let mut seen = BTreeMap::new();
    for c in &catalog.cycles {
        out.absorb(lambda_of_cycle(t, c, horizon)?, &mut seen)?;
    }
    for ls in &catalog.line_sets {
        let first = spectrum_of(&ls.frame.factored.first_triple()?, frame_horizon(&ls.frame, horizon))?;
        out.absorb(lambda_of_line_set(ls, &first, horizon)?, &mut seen)?;
    }
    Ok(out)
}

/// Catalog and spectrum of a triple in one call.
pub fn spectrum_of(t: &HadamardTriple, horizon: Horizon) -> Result<Spectrum> {
    assemble_spectrum(t, &build_catalog(t)?, horizon)
}

/// `Lambda_1 x Lambda_2` for a triple whose second-component digits do not depend on the
/// first component, split along the given frame.
pub fn product_spectrum(frame: &LineFrame, horizon: Horizon) -> Result<Spectrum> {
    let f = &frame.factored;
    if !f.fibers_constant() {
        return Err(Error::FiberNotConstant);
    }
    let inner = frame_horizon(frame, horizon);
    let l1 = spectrum_of(&f.first_triple()?, inner)?;
    let l2 = spectrum_of(&f.second_triple(0)?, inner)?;
    let mut sp = Spectrum {
        elements: Vec::new(),
        sources: vec![SpectrumSource::Product { frame: frame.clone() }],
        horizon,
    };
    let mut seen = BTreeMap::new();
    for a in &l1.elements {
        for b in &l2.elements {
            let value = frame.to_original(&concat(&a.value, &b.value));
            if !within(&value, horizon) {
                continue;
            }
            let e = SpectrumElement {
                value,
                provenance: Provenance {
                    source: 0,
                    point: 0,
                    word: Vec::new(),
                    first: Some(a.value.clone()),
                    second: Some(b.value.clone()),
                },
            };
            insert_distinct(&mut sp.elements, &mut seen, e)?;
        }
    }
    Ok(sp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat, rational_eigen_lines};
    use crate::presets;
    use std::collections::BTreeSet;

    fn set(s: &Spectrum) -> BTreeSet<RationalVector> {
        s.values().into_iter().collect()
    }

    #[test]
    fn worked_union_structure() {
        let t = presets::planar_example();
        let cat = build_catalog(&t).unwrap();
        let sp = assemble_spectrum(&t, &cat, Horizon::Words(4)).unwrap();
        assert_eq!(sp.sources.len(), 2);
        assert_eq!(sp.from_source(0).count(), 1 + 3 + 12 + 48 + 192);
        assert_eq!(sp.from_source(1).count(), 16 * 16);
        assert!(sp.contains(&RationalVector(vec![rat(0, 1), rat(-2, 3)])));
        assert!(sp.contains(&RationalVector::from_ints(&[8, 2])));
        // Lambda(2/3) has non-integral second coordinates
        assert_eq!(sp.non_integral(), 256);
        for e in &sp.elements {
            assert_eq!(sp.reconstruct(e), e.value);
        }
    }

    #[test]
    fn one_dimensional_unions() {
        let t = presets::three_quarter_cantor();
        let sp = spectrum_of(&t, Horizon::Words(3)).unwrap();
        let l1: BTreeSet<RationalVector> = set(&spectrum_of(&presets::quarter_cantor(), Horizon::Words(3)).unwrap());
        let want: BTreeSet<RationalVector> = l1
            .iter()
            .cloned()
            .chain(l1.iter().map(|v| RationalVector(vec![rat(-2, 3) - &v.0[0]])))
            .collect();
        assert_eq!(set(&sp), want);
    }

    #[test]
    fn product_spectrum_differs_from_union() {
        let t = presets::planar_example();
        let line = &rational_eigen_lines(t.s()).unwrap()[0];
        let frame = LineFrame::new(&t, line).unwrap();
        let prod = product_spectrum(&frame, Horizon::Words(3)).unwrap();
        let uni = spectrum_of(&t, Horizon::Words(3)).unwrap();
        assert!(prod.contains(&RationalVector::from_ints(&[0, 0])));
        assert!(prod.contains(&RationalVector(vec![rat(0, 1), rat(-2, 3)])));
        assert_ne!(set(&prod), set(&uni));
        for e in &prod.elements {
            assert_eq!(prod.reconstruct(e), e.value);
        }
    }

    #[test]
    fn radius_horizon_filters_by_norm() {
        let t = presets::planar_example();
        let sp = spectrum_of(&t, Horizon::Radius(40)).unwrap();
        assert!(sp.elements.iter().all(|e| sup_norm(&e.value) <= rat_int(40)));
        let words = spectrum_of(&t, Horizon::Words(4)).unwrap();
        for v in words.values() {
            if sup_norm(&v) <= rat_int(40) {
                assert!(sp.contains(&v), "{v}");
            }
        }
    }

    #[test]
    fn duplicates_are_reported() {
        let mut out = Vec::new();
        let mut seen = BTreeMap::new();
        let e = SpectrumElement {
            value: RationalVector::from_ints(&[1]),
            provenance: Provenance {
                source: 0,
                point: 0,
                word: vec![1],
                first: None,
                second: None,
            },
        };
        insert_distinct(&mut out, &mut seen, e.clone()).unwrap();
        assert!(matches!(
            insert_distinct(&mut out, &mut seen, e),
            Err(Error::DistinctnessViolation { .. })
        ));
    }

    #[test]
    fn non_disjoint_catalog_is_refused() {
        let t = presets::planar_example();
        let mut cat = build_catalog(&t).unwrap();
        cat.disjoint = false;
        assert!(matches!(
            assemble_spectrum(&t, &cat, Horizon::Words(1)),
            Err(Error::ReducibilityConditionUnmet)
        ));
    }
}
