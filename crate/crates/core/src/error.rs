use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("expansiveness undecided after {max_power} exact powers (smallest eigenvalue modulus ~ {min_modulus:.6})")]
    Undecided { max_power: u32, min_modulus: f64 },

    #[error("matrix is not expansive (eigenvalue modulus {modulus:.6} <= 1)")]
    NotExpansive { modulus: f64 },

    #[error("digit set does not span R^{dim} (rank {rank})")]
    DegenerateDigitSpan { dim: usize, rank: usize },

    #[error("exact eigen-line extraction supports d <= 2, got d = {0}")]
    UnsupportedDimension(usize),

    #[error("|B| = {b} but |L| = {l}")]
    SizeMismatch { b: usize, l: usize },

    #[error("digit set {0} must contain the zero vector")]
    MissingZeroDigit(&'static str),

    #[error("conjugating matrix is not in GL_d(Z)")]
    NotUnimodular,

    #[error("conjugated digit {0} is not an integer vector")]
    NonIntegerDigits(String),

    #[error("coordinate subspace of dimension {split} is not invariant for R^T")]
    NotInvariant { split: usize },

    #[error("fiber counts are not uniform: {0}")]
    FiberCountMismatch(String),

    #[error("sub-triple {kind} #{index} is not a Hadamard triple")]
    SubTripleNotHadamard { kind: &'static str, index: usize },

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("requested {requested} points, limit is {limit}")]
    TooManyPoints { requested: u128, limit: u128 },

    #[error("grid has no nodes")]
    EmptyGrid,

    #[error("spectrum element {value} appears twice ({first} and {second})")]
    DistinctnessViolation {
        value: String,
        first: String,
        second: String,
    },

    #[error("invariant catalog sets are not pairwise disjoint")]
    ReducibilityConditionUnmet,

    #[error("second-component digits depend on the first-component index")]
    FiberNotConstant,

    #[error("catalog appears incomplete: {0}")]
    CatalogIncomplete(String),

    #[error("invariant box construction failed: {0}")]
    BoxConstruction(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
