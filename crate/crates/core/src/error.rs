use thiserror::Error;

use crate::expr::Marker;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("specification is empty")]
    EmptySpec,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid JSON specification: {0}")]
    Json(String),

    #[error("symbol `{name}` is used in the equation for `{user}` but never defined")]
    UndefinedSymbol { name: String, user: String },

    #[error("symbol `{0}` is defined more than once")]
    DuplicateLhs(String),

    #[error("`{0}` is reserved for `SZ = E + SZ Z` and cannot be redefined")]
    ReservedSymbol(String),

    #[error("equation for `{symbol}`: a {marker} marker appears inside Seq(...)")]
    RestrictedInSeq { symbol: String, marker: Marker },

    #[error("equation for `{symbol}`: inconsistent {marker} tracking: {detail}")]
    Tracking {
        symbol: String,
        marker: Marker,
        detail: String,
    },

    #[error("root class `{0}` is empty")]
    EmptyRoot(String),

    #[error("no symbol named `{0}`")]
    UnknownSymbol(String),

    #[error("expansion requested for no symbols")]
    NothingToExpand,

    #[error("juxtaposition on the {side} requires the root `{root}` to track the {marker} entry")]
    MissingTracking {
        root: String,
        side: &'static str,
        marker: Marker,
    },

    #[error("invalid grid pattern `{pattern}`: {reason}")]
    GridPattern { pattern: String, reason: String },

    #[error("Seq argument in the equation for `{0}` has a nonzero constant term")]
    SeqConstantTerm(String),

    #[error("system does not stabilise at order {order} (involving `{symbol}`)")]
    NonProductive { symbol: String, order: usize },
}
