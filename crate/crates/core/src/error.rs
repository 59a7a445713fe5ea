use thiserror::Error;

/// Errors produced by the simulator and its file formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty Pauli string")]
    EmptyPauliString,
    #[error("invalid Pauli label {ch:?} at position {position}")]
    InvalidPauliLabel { ch: char, position: usize },
    #[error("Pauli string length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("weight for {string} is not finite")]
    NonFiniteWeight { string: String },
    #[error("qubit count must be at least 1")]
    ZeroQubits,
    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },
    #[error("state vector is zero")]
    ZeroVector,
    #[error("state dimension {found} is not a power of two")]
    BadDimension { found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{qubits} qubits exceeds the dense-diagonalization bound of {max}")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("group cannot be realized as one measurement setting: {0}")]
    UnrealizableGroup(String),
    #[error("Hamiltonian string {0} is not covered by any measurement setting")]
    UncoveredString(String),
    #[error("invalid outcome distribution: {0}")]
    InvalidDistribution(String),
    #[error("{shots} shots cannot be split over {settings} settings")]
    InsufficientShots { shots: u64, settings: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::InvalidPauliLabel { .. }
                | Error::EmptyPauliString
                | Error::LengthMismatch { .. }
                | Error::NonFiniteWeight { .. }
        )
    }
}
