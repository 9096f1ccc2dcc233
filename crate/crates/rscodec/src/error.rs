use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("zero or non-monic polynomial divisor")]
    BadPolyDivisor,
    #[error("invalid coding parameters: k={k}, m={m} (need k >= 1, m >= 1, k + m <= {max})")]
    InvalidParams { k: usize, m: usize, max: usize },
    #[error("bad stripe geometry: {0}")]
    BadStripeGeometry(String),
    #[error("region length mismatch: src {src} vs dst {dst}")]
    LengthMismatch { src: usize, dst: usize },
    #[error("too many erasures: {got} > m = {max}")]
    TooManyErasures { got: usize, max: usize },
    #[error("invalid erasure pattern: {0}")]
    InvalidErasures(String),
    #[error("invalid Cauchy sets: {0}")]
    InvalidCauchySets(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("block length not packet-aligned: {len} is not a multiple of {align}")]
    NotPacketAligned { len: usize, align: usize },
    #[error("decode verification failed: {0}")]
    VerifyFailed(String),
    #[error("no benchmark records to write")]
    NoRecords,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
