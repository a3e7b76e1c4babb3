use thiserror::Error;

use crate::lattice::Vertex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("dimension {0} not supported (2..=6)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinates {0:?} do not share one parity")]
    ParityMismatch(Vec<i64>),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackbendError {
    #[error("backbend sequence needs a nonempty cyclic tail")]
    EmptyTail,
    #[error("cannot parse backbend spec `{0}`")]
    Parse(String),
    #[error("path is empty")]
    EmptyPath,
    #[error("path mixes dimensions")]
    MixedDimensions,
    #[error("prefix ends at {prefix_end:?} but suffix starts at {suffix_start:?}")]
    JunctionMismatch { prefix_end: Vertex, suffix_start: Vertex },
    #[error("prefix is not oriented at step {0}")]
    NotOriented(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReachError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("source {0:?} lies outside region or window")]
    SourceOutside(Vertex),
    #[error("source {0:?} lies below level 0")]
    SourceBelowZero(Vertex),
    #[error("no sources given")]
    NoSources,
    #[error("window has {0} points; the dense search supports at most 2^28")]
    WindowTooLarge(u128),
    #[error("oracle guard: {count} region vertices in window exceed limit {limit} (use force)")]
    GuardExceeded { count: usize, limit: usize },
    #[error("exhaustive oracle cannot handle more than 64 vertices, got {0}")]
    OracleTooLarge(usize),
    #[error("block geometry: {0}")]
    BlockGeometry(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error(transparent)]
    Reach(#[from] ReachError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("p grid must be ascending")]
    UnsortedGrid,
    #[error(
        "initial interval [{lo}, {hi}] does not bracket target {target}: measured {lo_value:.4} and {hi_value:.4}"
    )]
    NonBracketing {
        lo: f64,
        hi: f64,
        target: f64,
        lo_value: f64,
        hi_value: f64,
    },
}
