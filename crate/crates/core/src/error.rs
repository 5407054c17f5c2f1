use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed PGM data. `offset` is the byte position where parsing failed.
    #[error("pgm format error at byte {offset} ({field}): {message}")]
    Format {
        offset: usize,
        field: &'static str,
        message: String,
    },

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("no edge pixels")]
    NoEdgePixels,

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("pixel ({x}, {y}) outside {width}x{height} raster")]
    OutOfBounds {
        x: i64,
        y: i64,
        width: usize,
        height: usize,
    },

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("empty MOS table")]
    EmptyMos,

    #[error("MOS rating {rating} for `{id}` outside 1..=10")]
    RatingOutOfRange { id: String, rating: i64 },

    #[error("response references unknown trial {0}")]
    UnknownTrial(u32),

    #[error("duplicate response for trial {0}")]
    DuplicateResponse(u32),

    #[error("distance with zero responses: {0} px")]
    NoResponses(u32),

    #[error("curve does not bracket threshold {threshold}")]
    NotBracketed { threshold: f64 },

    #[error("response log line {line}: {message}")]
    ResponseLog { line: usize, message: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
