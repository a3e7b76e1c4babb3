//! Bond percolation along backbend paths on the body-centered cubic lattice.
//!
//! * [`lattice`]: vertices, edges, regions, windows and boundary sets.
//! * [`backbend`]: backbend sequences, classification, path validation.
//! * [`config`]: reproducible, monotonically coupled edge configurations.
//! * [`reach`]: cluster search over (vertex, record level) states, the exact
//!   self-avoiding oracle, and block events.
//! * [`estimate`]: Monte Carlo estimators and critical-point bisection.

pub mod backbend;
pub mod config;
pub mod error;
pub mod lattice;
pub mod reach;
pub mod stats;
pub mod estimate;

pub use backbend::{
    record_levels, validate_path, Backbend, BackbendSpec, Clause, Floor, Path, PathVerdict, SequenceClass,
};
pub use config::{edge_uniform, EdgeConfig, EdgeStates, RngKey, PRF_NAME, PRF_VERSION};
pub use error::{BackbendError, ConfigError, EstimateError, LatticeError, ReachError};
pub use lattice::{linf_distance, EdgeKey, Interval, Region, SignStep, Vertex, Window};
pub use reach::{reach_saw_oracle, reach_walk, ClusterQuery, ClusterResult, OracleGuard, RecordState};
