use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit {qubit} out of range for {n} qubit(s)")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("invalid noise probabilities ({px}, {py}, {pz}): each must be >= 0 and sum <= 1")]
    InvalidProbability { px: f64, py: f64, pz: f64 },

    #[error("invalid channel eigenvalue table: {0}")]
    InvalidEigenvalue(String),

    #[error("two-qubit gate or factor needs distinct qubits, got {0} twice")]
    RepeatedQubit(usize),

    #[error("parameter slots are not contiguous: slot {missing} is never used (dimension {dim})")]
    NonContiguousSlots { missing: usize, dim: usize },

    #[error("slot {slot} out of range for parameter dimension {dim}")]
    SlotOutOfRange { slot: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parameter map is not injective; {0} requires independent parameters")]
    NonInjective(&'static str),

    #[error("bound vacuous: need p' > 0 or p'_z > 0")]
    BoundVacuous,

    #[error("path budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("dense simulation supports at most {max} qubits, got {n}")]
    TooManyQubits { n: usize, max: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by malformed textual input.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
