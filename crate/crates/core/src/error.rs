use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unreadable file {path}: {reason}")]
    UnreadableFile { path: PathBuf, reason: String },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("zero-dimension image ({width}x{height})")]
    ZeroDimension { width: usize, height: usize },

    #[error("pixel buffer has {actual} entries, expected {expected}")]
    BufferSize { expected: usize, actual: usize },

    #[error("rectangle ({x0},{y0},{w},{h}) is out of bounds for a {width}x{height} image")]
    OutOfBounds {
        x0: usize,
        y0: usize,
        w: usize,
        h: usize,
        width: usize,
        height: usize,
    },

    #[error("seed ({x},{y}) lies outside a {width}x{height} image")]
    SeedOutOfBounds {
        x: i64,
        y: i64,
        width: usize,
        height: usize,
    },

    #[error("seed ({x},{y}) carries conflicting labels")]
    ConflictingSeed { x: usize, y: usize },

    #[error("seed label must be foreground or background")]
    UnlabeledSeed,

    #[error("at least one foreground seed is required")]
    NoForegroundSeed,

    #[error("background seeds are not accepted by this method")]
    BackgroundSeed,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} outside the domain [0, {max}]")]
    OutOfRange { value: f64, max: f64 },

    #[error("empty mask")]
    EmptyMask,

    #[error("empty region")]
    EmptyRegion,

    #[error("region covers the whole frame")]
    RegionFillsFrame,

    #[error("no mass candidate found")]
    NoMassCandidate,

    #[error("dice coefficient undefined: both masks are empty")]
    UndefinedDice,

    #[error("reference metric is zero")]
    ZeroReference,

    #[error("ROI of {width}x{height} is smaller than 2x2")]
    DegenerateRoi { width: usize, height: usize },

    #[error("malformed seed file: {0}")]
    SeedFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
