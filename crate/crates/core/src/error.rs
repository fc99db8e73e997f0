use thiserror::Error;

use crate::lattice::IntVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector {0} is not primitive")]
    NonPrimitive(IntVector),
    #[error("zero vector is not allowed here")]
    ZeroVector,
    #[error("lattice generators are linearly dependent")]
    RankDeficient,
    #[error("operation requires a two-dimensional input")]
    NotTwoDimensional,
    #[error("empty shape")]
    EmptyShape,
    #[error("empty sample")]
    EmptySample,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has non-integer coefficients")]
    NonIntegerCoefficients,
    #[error("radicand {0} is not squarefree")]
    NonSquarefreeRadicand(u64),
    #[error("invalid quadratic number: {0}")]
    InvalidQuadratic(String),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("vector {0} is not in the support of the polynomial")]
    V0NotInSupport(IntVector),
    #[error("annihilator found on the sample fails on the verification window at {witness}")]
    VerificationFailed { witness: IntVector },
    #[error("polynomial does not annihilate the configuration (witness {witness})")]
    NotAnnihilated { witness: IntVector },
    #[error("window too small: shrinking by the search vectors empties it")]
    WindowTooSmall,
    #[error("no window decomposition exists: equation at {cell} is inconsistent")]
    Infeasible { cell: IntVector },
    #[error("halo does not contain the core expanded by the period boxes")]
    HaloTooSmall,
    #[error("difference domain is empty")]
    EmptyResult,
    #[error("degenerate direction (0,0)")]
    DegenerateDirection,
    #[error("parallelogram area is zero")]
    ZeroArea,
    #[error("directions are parallel")]
    ParallelDirections,
    #[error("zero denominator in two-direction bound")]
    ZeroDenominator,
    #[error("block {block_m}x{block_n} is smaller than the annihilator box {m}x{n}")]
    BlockTooSmall {
        block_m: u64,
        block_n: u64,
        m: u64,
        n: u64,
    },
    #[error("tile size {0} is not prime")]
    NotPrime(usize),
    #[error("empty tile")]
    EmptyTile,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("{0}")]
    Unsupported(&'static str),
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
