use alloc::string::String;

/// Errors raised by curve construction, diagram extraction and sweeping.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("bead of scale {scale} does not fit in the tube around the host knot (limit {limit})")]
    ScaleTooLarge { scale: f64, limit: f64 },
    #[error("flat frame undefined at t = {t}: projected tangent vanishes")]
    FrameDegenerate { t: f64 },
    #[error("unknown catalog knot `{0}`")]
    UnknownName(String),
    #[error("unknown cycle kind `{0}`")]
    UnknownKind(String),
    #[error("invalid knot: {0}")]
    InvalidKnot(String),
    #[error("non-generic diagram: {0}")]
    Nongeneric(String),
    #[error("genericity failure persisted after {retries} perturbation retries: {last}")]
    NongenericPersistent { retries: u32, last: String },
    #[error("degenerate triple point near s = {s}")]
    DegenerateTriple { s: f64 },
    #[error("degenerate right-tangent event near s = {s}")]
    DegenerateTangent { s: f64 },
    #[error("rightward direction lies on the tangent cone boundary near s = {s}")]
    ConeBoundary { s: f64 },
    #[error("family does not close: endpoint distance {distance}")]
    NotClosed { distance: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
