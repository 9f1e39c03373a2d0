use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Shapes, dimensions or grids of the operands do not agree.
    #[error("structural mismatch: {0}")]
    Structural(String),
    /// A parameter lies outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The grid does not resolve the requested dyadic level(s).
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("level {level} outside the resolvable range 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    /// An amplitude, phase or derivative produced a non-finite value.
    #[error("non-finite {what} at x = {x:?}, xi = {xi:?}")]
    Evaluation { what: &'static str, x: [f64; 2], xi: [f64; 2] },
    #[error("insufficient dynamic range: {0}")]
    InsufficientRange(String),
}

pub type Result<T> = core::result::Result<T, Error>;
