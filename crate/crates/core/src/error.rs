use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {0} is out of range (1..=62)")]
    QubitCount(u32),

    #[error("qubit index {q} out of range for {n} qubits")]
    QubitIndex { q: u32, n: u32 },

    #[error("period {r} out of range [1, {max}]")]
    Period { r: u64, max: u64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid oracle: {0}")]
    InvalidOracle(String),

    #[error("{what} needs {n} qubits but is limited to {max}")]
    Capacity { what: &'static str, n: u32, max: u32 },

    #[error("post-selection failed: value {0} is not in the image of f")]
    PostSelection(u64),

    #[error("degenerate profile: no qubit has a_z > {eps}")]
    DegenerateProfile { eps: f64 },

    #[error("no candidate periods for l = {l}, q' = {qprime} below 2^{n}")]
    NoCandidates { l: u32, qprime: u32, n: u32 },

    #[error("no usable signal on qubit {q}: a_z = {az}")]
    NoSignal { q: u32, az: f64 },

    #[error("secant iteration left the admissible range at {value}")]
    NoConvergence { value: f64 },

    #[error("period {r} is not of the form 2^{qprime} * odd with odd part below {limit}")]
    NotCandidate { r: u64, qprime: u32, limit: u64 },
}
