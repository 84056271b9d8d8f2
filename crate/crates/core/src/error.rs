use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("image must have nonzero width and height")]
    EmptyImage,
    #[error("requested {requested} superpixels but the image has only {pixels} pixels")]
    TooManySuperpixels { requested: usize, pixels: usize },
    #[error("grid interval {interval_x}x{interval_y} leaves no full cell in a {width}x{height} image")]
    IntervalTooLarge {
        width: usize,
        height: usize,
        interval_x: usize,
        interval_y: usize,
    },
    #[error("raster data has {actual} bytes, expected {expected}")]
    RasterSize { expected: usize, actual: usize },
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    Channels(usize),
    #[error("invalid EM configuration: {0}")]
    Config(&'static str),
    #[error("dimension mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    DimensionMismatch {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },
    #[error("internal fault: {0}")]
    Internal(&'static str),
}

impl Error {
    /// Dimension mismatch between two `(width, height)` pairs.
    pub fn mismatch(left: (usize, usize), right: (usize, usize)) -> Self {
        Error::DimensionMismatch {
            left_w: left.0,
            left_h: left.1,
            right_w: right.0,
            right_h: right.1,
        }
    }
}
