use thiserror::Error;

/// Errors produced by cell handling, reduction and the polytope machinery.
#[derive(Debug, Error)]
pub enum NiggliError {
    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("metric tensor is not positive definite (det = {det})")]
    NotPositiveDefinite { det: f64 },

    #[error("reduction did not converge after {iterations} iterations; last steps: {last_steps:?}")]
    NonConvergence {
        iterations: usize,
        last_steps: Vec<String>,
    },

    #[error("no Niggli-reduced candidate found within entry bound {bound}")]
    NoCandidateFound { bound: i64 },

    #[error("unknown boundary case id '{0}'")]
    UnknownCase(char),

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("no clear singular-value gap (ratio {ratio:.3} < 10)")]
    RankAmbiguity { ratio: f64 },

    #[error("projector intersection did not converge after {0} squarings")]
    IntersectionDiverged(usize),

    #[error("projector dimension inconsistent: {eig_count} unit eigenvalues but trace {trace}")]
    DimensionInconsistency { eig_count: usize, trace: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cell generator starvation: {rejected} of {attempts} candidates rejected")]
    GeneratorStarvation { rejected: u64, attempts: u64 },

    #[error("boundary projection invalidates nearly all cells: {rejected} of {attempts} rejected")]
    ProjectionInvalidatesAll { rejected: u64, attempts: u64 },

    #[error("input is not Niggli reduced; failed conditions: {0:?}")]
    NotReduced(Vec<String>),

    #[error("retained population head has zero variance; Z-scores undefined")]
    DegenerateVariance,

    #[error("census is empty")]
    EmptyCensus,
}

pub type Result<T> = std::result::Result<T, NiggliError>;
