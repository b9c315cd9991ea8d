//! Weights, Fourier transforms, the transfer operator and samplers.

pub mod fourier;
pub mod sampler;
pub mod transfer;
pub mod weight;

pub use fourier::{fiber_transform, FourierEvaluator, FourierValue, DEFAULT_EPS};
pub use sampler::{AffineSystem, MeasureSampler};
pub use transfer::{transfer_apply, Grid, GridFunction};
pub use weight::{quadrature_check, unequal_weights_probe, FiberWeight, WeightFunction};
