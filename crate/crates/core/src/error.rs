use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("path reached the x-boundary of the window at (x={x}, t={t})")]
    BoundaryTouch { x: i64, t: i64 },

    #[error("site ({x}, {t}) is not a valid {kind} site of the window")]
    InvalidSite { x: i64, t: i64, kind: &'static str },

    #[error("hop at t={t} between path {from} and path {to} is not an intersection time")]
    NotIntersection { t: i64, from: usize, to: usize },

    #[error("hop at t={t} onto path {to} happens at a starting time")]
    HopAtStartingTime { t: i64, to: usize },

    #[error("incompatible sampling grids: {0}")]
    IncompatibleGrids(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("sample too small: need at least {needed}, got {got}")]
    SampleTooSmall { needed: usize, got: usize },

    #[error("contingency table too sparse: smallest expected cell {0:.3} < 5")]
    SparseTable(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
