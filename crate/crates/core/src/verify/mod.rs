//! Numerical evidence that a candidate spectrum is one: orthogonality, Parseval sums,
//! random-walk basins and the harmonic-function identities.

pub mod paths;
pub mod report;
pub mod spectral;

pub use paths::{
    cylinder_probability, estimate_on_grid, harmonicity_residual, lipschitz_probe, random_pairs, sample_path,
    simulate_paths, BasinEstimate, PathSample, SimulationReport, DEFAULT_STEPS,
};
pub use report::{default_start_points, harmonic_cross_check, run_verification, CrossCheckRow, VerificationReport, VerifyConfig};
pub use spectral::{
    default_test_points, orthogonality_check, parseval_sweep, OrthogonalityReport, ParsevalReport, ParsevalRow,
    ORTHOGONALITY_TOL, PARSEVAL_FLOOR, PARSEVAL_SLACK,
};
