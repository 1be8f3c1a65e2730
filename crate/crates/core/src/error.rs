use thiserror::Error;

/// Errors raised by the numerical laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: u128, cap: u128 },

    #[error("unknown site label {0}")]
    UnknownSite(usize),

    #[error("duplicate site label {0}")]
    DuplicateSite(usize),

    #[error("region must not be empty")]
    EmptyRegion,

    #[error("regions overlap at site {0}")]
    OverlappingRegions(usize),

    #[error("matrix is not Hermitian (anti-Hermitian part {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("inverse temperature must be nonnegative, got {0}")]
    NegativeBeta(f64),

    #[error("free energy is undefined at beta = 0")]
    ZeroBeta,

    #[error("malformed region split: {0}")]
    MalformedSplit(String),

    #[error("malformed geometry: {0}")]
    MalformedGeometry(String),

    #[error("interaction {term} couples interior site {site} of A directly to B")]
    MarkovPremise { term: usize, site: usize },

    #[error("separating region does not separate A from B (path through site {0})")]
    SeparationViolated(usize),

    #[error("invalid Hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("channel is not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error(
        "transfer operator has {count} eigenvalues of modulus one; the generic condition \
         requires exactly one"
    )]
    DegeneratePeripheralSpectrum { count: usize },

    #[error("operation requires a pure generator (single Kraus operator), found {kraus} terms")]
    MixedGenerator { kraus: usize },

    #[error(
        "interaction terms do not commute (commutator norm {norm:e}); the Gibbs tensor \
         construction requires mutually commuting terms"
    )]
    NonCommuting { norm: f64 },

    #[error("{rows}x{cols} patch exceeds the exact contraction limit of {max_sites} sites")]
    PatchTooLarge { rows: usize, cols: usize, max_sites: usize },

    #[error("insufficient grid: need at least {needed} points, got {got}")]
    InsufficientGrid { needed: usize, got: usize },

    #[error("curve is empty")]
    EmptyCurve,

    #[error("regions overlap at chain site {0}")]
    OverlappingChainSites(i64),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
