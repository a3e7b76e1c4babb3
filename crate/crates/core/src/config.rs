//! Reproducible random edge configurations.
//!
//! Every edge carries one uniform in `[0, 1)` derived from
//! `(master_seed, trial, edge identity)` by a counter-based hash, and is open
//! at level `p` iff its uniform is below `p`. A single configuration therefore
//! realizes every `p` at once, with open sets nested in `p`.
//!
//! Edges are keyed by their canonical geometry (lower endpoint + up signs), not
//! by a window-local index, so nested windows see identical edge states.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::lattice::{EdgeIndexer, EdgeKey, Vertex, Window};

/// Identifier of the edge hash, recorded in every output.
pub const PRF_NAME: &str = "splitmix64-sponge";
pub const PRF_VERSION: u32 = 1;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline(always)]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline(always)]
fn absorb(state: u64, word: u64) -> u64 {
    mix(state.wrapping_add(GOLDEN) ^ word)
}

/// Seed material for one trial.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RngKey {
    pub master_seed: u64,
    pub trial: u64,
}

impl RngKey {
    pub fn new(master_seed: u64, trial: u64) -> Self {
        Self { master_seed, trial }
    }

    #[inline]
    fn state(&self) -> u64 {
        absorb(mix(self.master_seed ^ 0x6A09_E667_F3BC_C908), self.trial)
    }
}

#[inline(always)]
fn uniform_from_state(trial_state: u64, edge: &EdgeKey, offset: &[i64; crate::lattice::MAX_DIM]) -> f64 {
    let d = edge.lower.dim();
    let mut h = trial_state;
    let c = edge.lower.coords();
    for i in 0..d {
        h = absorb(h, (c[i] - offset[i]) as u64);
    }
    h = absorb(h, (edge.up_signs as u64) | ((d as u64) << 32));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The uniform attached to `edge` under `key` (53-bit resolution).
pub fn edge_uniform(key: RngKey, edge: &EdgeKey) -> f64 {
    uniform_from_state(key.state(), edge, &[0; crate::lattice::MAX_DIM])
}

/// `u < p`, rejecting `p` outside `[0, 1]`.
pub fn is_open(u: f64, p: f64) -> Result<bool, ConfigError> {
    check_probability(p)?;
    Ok(u < p)
}

pub fn check_probability(p: f64) -> Result<f64, ConfigError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(ConfigError::InvalidProbability(p))
    }
}

/// One trial's edge configuration.
///
/// `offset` shifts the keying: the edge whose lower endpoint is `x` receives
/// the uniform that an unshifted configuration gives to `x − offset`.
#[derive(Clone, Copy, Debug)]
pub struct EdgeConfig {
    key: RngKey,
    state: u64,
    window: Window,
    offset: [i64; crate::lattice::MAX_DIM],
}

impl EdgeConfig {
    pub fn new(key: RngKey, window: Window) -> Self {
        Self {
            key,
            state: key.state(),
            window,
            offset: [0; crate::lattice::MAX_DIM],
        }
    }

    /// Same uniforms, re-keyed so that everything is translated by `by`.
    pub fn translated(&self, by: &Vertex) -> Self {
        let mut offset = self.offset;
        for (o, b) in offset.iter_mut().zip(by.coords()) {
            *o += b;
        }
        Self {
            window: self.window.translate(by),
            offset,
            ..*self
        }
    }

    pub fn key(&self) -> RngKey {
        self.key
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    #[inline]
    pub fn uniform(&self, edge: &EdgeKey) -> f64 {
        uniform_from_state(self.state, edge, &self.offset)
    }

    /// Open edges (both endpoints in the window) at level `p`.
    pub fn open_edge_count(&self, p: f64) -> Result<usize, ConfigError> {
        check_probability(p)?;
        let ix = EdgeIndexer::new(&self.window);
        Ok(ix.edges().iter().filter(|e| self.uniform(e) < p).count())
    }

    pub fn at(&self, p: f64) -> Result<Thresholded<'_>, ConfigError> {
        Ok(Thresholded {
            config: self,
            p: check_probability(p)?,
        })
    }
}

/// Open/closed state of edges, as seen by the cluster search.
pub trait EdgeStates {
    fn is_open(&self, edge: &EdgeKey) -> bool;
}

impl<F: Fn(&EdgeKey) -> bool> EdgeStates for F {
    fn is_open(&self, edge: &EdgeKey) -> bool {
        self(edge)
    }
}

/// A configuration read at a fixed level `p`.
#[derive(Clone, Copy, Debug)]
pub struct Thresholded<'a> {
    config: &'a EdgeConfig,
    p: f64,
}

impl Thresholded<'_> {
    pub fn p(&self) -> f64 {
        self.p
    }
}

impl EdgeStates for Thresholded<'_> {
    #[inline]
    fn is_open(&self, edge: &EdgeKey) -> bool {
        self.config.uniform(edge) < self.p
    }
}

/// Explicit open set over a window's dense edge numbering (bit `i` of the
/// mask is edge `i`). Used for exhaustive enumeration over small windows.
#[derive(Clone, Debug)]
pub struct MaskedEdges<'a> {
    indexer: &'a EdgeIndexer,
    mask: u64,
}

impl<'a> MaskedEdges<'a> {
    pub fn new(indexer: &'a EdgeIndexer, mask: u64) -> Self {
        Self { indexer, mask }
    }
}

impl EdgeStates for MaskedEdges<'_> {
    fn is_open(&self, edge: &EdgeKey) -> bool {
        self.indexer
            .index_of(edge)
            .is_some_and(|i| i < 64 && (self.mask >> i) & 1 == 1)
    }
}
