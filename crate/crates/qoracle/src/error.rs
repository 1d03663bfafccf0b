use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("register of {requested} qubits is outside the supported range 1..={max}")]
    ResourceLimit { requested: usize, max: usize },

    #[error("result register of {requested} qubits is outside the supported range 1..={max}")]
    ResultRegisterLimit { requested: usize, max: usize },

    #[error("qubit index {index} is out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {index} appears as both target and control of one gate")]
    QubitCollision { index: usize },

    #[error("cannot combine circuits over {left} and {right} qubits")]
    RegisterMismatch { left: usize, right: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error(
        "value register of {value_qubits} qubits cannot hold values in [{min}, {max}] without aliasing"
    )]
    Aliasing {
        value_qubits: usize,
        min: i64,
        max: i64,
    },

    #[error("searching for zero solutions is undefined")]
    ZeroSolutions,

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
