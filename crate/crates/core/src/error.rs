use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph6: byte {byte} at offset {offset} is outside 63..=126")]
    Graph6ByteRange { offset: usize, byte: u8 },
    #[error("graph6: record truncated (expected {expected} bytes, found {found})")]
    Graph6Truncated { expected: usize, found: usize },
    #[error("graph6: record has {extra} trailing bytes")]
    Graph6TrailingBytes { extra: usize },
    #[error("graph6: nonzero padding bits in final byte")]
    Graph6Padding,
    #[error("graph6: long-form header (n > 62) is not supported")]
    Graph6LongHeader,
    #[error("graph6: empty record")]
    Graph6Empty,

    #[error("graph is not cubic: {0}")]
    NotCubic(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unsupported size {n} for {family}: {reason}")]
    Domain {
        family: &'static str,
        n: usize,
        reason: &'static str,
    },

    #[error("phase vector has length {found}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vertex sequence is not a cycle of the graph")]
    NotACycle,
    #[error("field residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("reduced Jacobian is singular")]
    SingularJacobian,
    #[error("Newton iteration left the capture radius (residual {residual:e})")]
    NewtonDiverged { residual: f64 },
    #[error("Newton iteration did not converge in {iterations} steps (residual {residual:e})")]
    NewtonMaxIterations { iterations: usize, residual: f64 },
    #[error("root bracket [{lo}, {hi}] does not change sign")]
    BadBracket { lo: f64, hi: f64 },

    #[error("duplicate graph id {0}")]
    DuplicateGraphId(String),
    #[error("homotopy endpoints disagree: {0}")]
    HomotopyMismatch(String),
    #[error("continuation corrector failed at p = {p}")]
    CorrectorFailed { p: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
