use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    DuplicateQubit(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("{0} qubits exceeds the simulator limit of {max}", max = crate::MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("zero vector cannot be normalized")]
    ZeroNorm,
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("expected a {expected}-qubit gate, got a {actual}-qubit gate")]
    GateArity { expected: usize, actual: usize },
    #[error("invalid sampler weights: {0}")]
    InvalidWeights(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("auxiliary amplitude vanishes at basis state {0} where the target is nonzero")]
    SupportViolation(usize),
    #[error("estimate undefined: every trial had b = 0")]
    InsufficientData,
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
