use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit {0} carries more than one Pauli letter")]
    DuplicateQubit(usize),

    #[error("qubit map is not injective: qubits {0} and {1} both map to {2}")]
    NonInjectiveMap(usize, usize, usize),

    #[error("qubit map is undefined on support qubit {0}")]
    UnmappedQubit(usize),

    #[error("operator acts on {support} qubits, above the cap of {cap}")]
    CapExceeded { support: usize, cap: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("iterative eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generator is not anti-Hermitian (residual {0:e})")]
    NotAntiHermitian(f64),

    #[error("term of weight {weight} cannot be factorized: {reason}")]
    NotFactorizable { weight: usize, reason: String },

    #[error("invalid interaction: {0}")]
    InvalidInteraction(String),

    #[error("precision parameter {0} must lie strictly between 0 and 1")]
    EpsilonOutOfRange(f64),

    #[error("gap must be positive, found {0}")]
    InvalidGap(f64),

    #[error("term {term} is neither 2-local nor gadgetizable by {kind}")]
    NotGadgetizable { term: String, kind: String },

    #[error("operator has a block-diagonal component ({0})")]
    BlockDiagonalPart(String),

    #[error("degenerate energy denominator ({0})")]
    DegenerateDenominator(String),

    #[error("unperturbed operator is not diagonal: term {0}")]
    NotDiagonal(String),

    #[error("split must contain exactly one mediator for symbolic block decomposition, found {0}")]
    UnsupportedSplit(usize),

    #[error("spectral gap closes at the P/Q cut (eigenvalues {0:e} and {1:e})")]
    GapClosure(f64, f64),

    #[error("direct rotation undefined: |P - P~| = {0} is not below 1")]
    RotationUndefined(f64),

    #[error("nested commutator order {0} exceeds the cap of {1}")]
    OrderCap(usize, usize),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
