use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// The result type returned by functions in this library.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the pipeline.
///
/// The first group covers domain violations (bad indices, keys, moduli),
/// the second covers shape problems, and the rest belongs to the file
/// codec. Front ends that need to distinguish "unreadable input" from
/// "readable but invalid" can match on the variants.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence index {index} outside the supported range 1..={max}")]
    SequenceIndex { index: u32, max: u32 },

    #[error("map index {index} outside the supported range 1..={max}")]
    MapIndex { index: u32, max: u32 },

    #[error("modulus {modulus} is too small; the torus needs at least 2")]
    Modulus { modulus: u32 },

    #[error("point ({x}, {y}) lies outside the {modulus}x{modulus} torus")]
    PointOutOfRange { x: u32, y: u32, modulus: u32 },

    #[error("image side {actual} does not match the expected side {expected}")]
    SideMismatch { expected: usize, actual: usize },

    #[error("raster is {width}x{height}; the pipeline works on square images only")]
    NonSquare { width: usize, height: usize },

    #[error("image side {side} is too small; the minimum is 2")]
    SideTooSmall { side: usize },

    #[error("pixel buffer holds {actual} values where {expected} were expected")]
    BufferSize { expected: usize, actual: usize },

    #[error("bit plane {plane} outside the valid range 1..=8")]
    PlaneIndex { plane: u8 },

    #[error("{count} planes requested; the valid range is 1..=8")]
    PlaneCount { count: usize },

    #[error("key {key} outside the valid range 1..={} for period {period}", period - 1)]
    KeyOutOfRange { key: u64, period: u64 },

    #[error("map has period 1, which leaves no valid key range")]
    DegeneratePeriod,

    #[error("{keys} keys supplied for {secrets} secrets; the counts must match")]
    KeyCountMismatch { keys: usize, secrets: usize },

    #[error("period search exceeded {cap} iterations; the map is not a valid torus bijection")]
    PeriodCapExceeded { cap: u64 },

    #[error("{0}")]
    Parse(String),

    #[error("maxval {maxval} is unsupported; only 8-bit rasters with maxval 255 are accepted")]
    UnsupportedMaxval { maxval: u32 },

    #[error("raster data truncated: expected {expected} samples, found {actual}")]
    Truncated { expected: usize, actual: usize },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl Error {
    /// True for errors produced while reading or decoding a file, as
    /// opposed to semantic validation of otherwise well-formed input.
    pub fn is_file_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::UnsupportedMaxval { .. }
                | Error::Truncated { .. }
                | Error::Io { .. }
        )
    }
}
