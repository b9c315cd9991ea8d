//! Shared inputs for the criterion benchmarks.

use ifs_spectra_core::dynamics::{build_catalog, InvariantCatalog};
use ifs_spectra_core::measure::FourierEvaluator;
use ifs_spectra_core::{presets, HadamardTriple};

pub struct Fixture {
    pub triple: HadamardTriple,
    pub catalog: InvariantCatalog,
    pub evaluator: FourierEvaluator,
}

/// The planar example with its catalog and a `1e-10` Fourier evaluator.
pub fn planar() -> Fixture {
    let triple = presets::planar_example();
    Fixture {
        catalog: build_catalog(&triple).expect("planar catalog"),
        evaluator: FourierEvaluator::new(&triple, 1e-10).expect("planar evaluator"),
        triple,
    }
}
