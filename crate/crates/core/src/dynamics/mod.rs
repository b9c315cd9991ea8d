//! Extreme cycles, invariant line sets and the catalog of minimal invariant sets.

pub mod catalog;
pub mod cycles;
pub mod lines;
pub mod orbit;

pub use catalog::{build_catalog, set_distance, sets_disjoint, CatalogSet, InvariantCatalog, SkippedLine};
pub use cycles::{extreme_cycle_search, extreme_cycles, lattice_cycles, wtilde_cycles, Cycle, CycleSearch};
pub use lines::{invariant_line_sets, InvariantLineSet, LineFrame, RejectedLineSet, Rejection};
pub use orbit::{orbit, Orbit, OrbitLevel};
