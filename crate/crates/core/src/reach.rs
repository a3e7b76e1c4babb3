//! Backbend clusters.
//!
//! The default engine searches over `(vertex, record level)` states: from
//! `(v, h)` an open edge to `w` leads to `(w, max(h, w_d))` whenever `w` lies in
//! the region and window and clears the floor at the new record. This finds
//! every vertex reachable by an open *walk* obeying the backbend rule. When
//! the floor `h − β_h` is nondecreasing, loop-erasing such a walk only lowers
//! records, so walk reachability and self-avoiding path reachability agree
//! and results are flagged `exact`. For other sequences the walk cluster may
//! be larger; [`reach_saw_oracle`] enumerates self-avoiding paths on small
//! windows to measure the difference.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::backbend::{BackbendSpec, Floor};
use crate::config::{EdgeConfig, EdgeStates};
use crate::error::ReachError;
use crate::lattice::{seed_block, EdgeKey, Region, SignStep, Vertex, Window, MAX_DIM};

const MAX_DENSE_POINTS: u128 = 1 << 28;

/// A search state: a vertex together with the record level of the walk that
/// reached it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct RecordState {
    pub vertex: Vertex,
    pub record: i64,
}

/// Region, window, backbend sequence and source set of a cluster computation.
#[derive(Clone, Debug)]
pub struct ClusterQuery {
    pub region: Region,
    pub window: Window,
    pub spec: BackbendSpec,
    pub sources: Vec<Vertex>,
}

impl ClusterQuery {
    pub fn new(region: Region, window: Window, spec: BackbendSpec, sources: Vec<Vertex>) -> Result<Self, ReachError> {
        let q = Self {
            region,
            window,
            spec,
            sources,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), ReachError> {
        let d = self.window.dim();
        self.region.validate(d)?;
        if self.sources.is_empty() {
            return Err(ReachError::NoSources);
        }
        for s in &self.sources {
            if s.dim() != d {
                return Err(crate::error::LatticeError::DimensionMismatch {
                    expected: d,
                    found: s.dim(),
                }
                .into());
            }
            if !self.region.contains(s) || !self.window.contains(s) {
                return Err(ReachError::SourceOutside(*s));
            }
            if s.level() < 0 {
                return Err(ReachError::SourceBelowZero(*s));
            }
        }
        Ok(())
    }
}

/// Reached vertices with their record-level bookkeeping.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ClusterResult {
    pub reached: BTreeSet<Vertex>,
    /// For monotone-floor sequences only the minimal record per vertex is
    /// kept (it dominates every higher one); otherwise every distinct record.
    pub reached_states: BTreeSet<RecordState>,
    pub max_level: i64,
    pub source: Vec<Vertex>,
    /// True when the set equals self-avoiding path reachability.
    pub exact: bool,
}

impl ClusterResult {
    pub fn contains(&self, v: &Vertex) -> bool {
        self.reached.contains(v)
    }

    pub fn len(&self) -> usize {
        self.reached.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reached.is_empty()
    }
}

/// Finite stand-in for an infinite cluster: the cluster reaches `level`.
pub fn survives(result: &ClusterResult, level: i64) -> bool {
    result.max_level >= level
}

pub fn count_in_set(result: &ClusterResult, target: &[Vertex]) -> usize {
    target.iter().filter(|v| result.reached.contains(v)).count()
}

/// When an exploration may stop early.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StopRule {
    Never,
    /// Some reached vertex has level ≥ the given value.
    AtLevel(i64),
    /// Some reached vertex has `coords[axis] >= value`.
    AtFace { axis: usize, value: i64 },
    /// At least this many vertices reached.
    AtSize(usize),
}

/// Summary of one exploration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Exploration {
    pub max_level: i64,
    pub reached: usize,
    /// The stop rule fired.
    pub stopped: bool,
}

/// Reusable search engine for one query geometry. Scratch buffers are
/// generation-stamped, so repeated explorations do not clear memory.
#[derive(Clone, Debug)]
pub struct Explorer {
    query: ClusterQuery,
    d: usize,
    lo: [i64; MAX_DIM],
    hi: [i64; MAX_DIM],
    strides: [usize; MAX_DIM],
    floors: Vec<Floor>,
    monotone: bool,
    steps: Vec<SignStep>,
    generation: u32,
    stamp: Vec<u32>,
    best: Vec<i64>,
    buckets: Vec<Vec<Vertex>>,
    fifo: VecDeque<RecordState>,
    seen: HashSet<(usize, i64)>,
    reached: Vec<Vertex>,
}

impl Explorer {
    pub fn new(query: ClusterQuery) -> Result<Self, ReachError> {
        query.validate()?;
        let w = query.window;
        let points = w.point_count();
        if points > MAX_DENSE_POINTS {
            return Err(ReachError::WindowTooLarge(points));
        }
        let d = w.dim();
        let mut lo = [0; MAX_DIM];
        let mut hi = [0; MAX_DIM];
        lo[..d].copy_from_slice(w.lo());
        hi[..d].copy_from_slice(w.hi());
        let mut strides = [0usize; MAX_DIM];
        let mut acc = 1usize;
        for i in (0..d).rev() {
            strides[i] = acc;
            acc *= (hi[i] - lo[i] + 1) as usize;
        }
        // records are levels of reached vertices: within [0, top]
        let top = w.top().max(0);
        let floors = (0..=top as u64).map(|h| query.spec.floor_at(h)).collect();
        let monotone = query.spec.has_monotone_floor();
        Ok(Self {
            d,
            lo,
            hi,
            strides,
            floors,
            monotone,
            steps: SignStep::all(d).collect(),
            generation: 0,
            stamp: vec![0; acc],
            best: vec![0; acc],
            buckets: vec![Vec::new(); top as usize + 1],
            fifo: VecDeque::new(),
            seen: HashSet::new(),
            reached: Vec::new(),
            query,
        })
    }

    pub fn query(&self) -> &ClusterQuery {
        &self.query
    }

    pub fn is_exact(&self) -> bool {
        self.monotone
    }

    #[inline]
    fn index(&self, v: &Vertex) -> usize {
        let c = v.raw();
        let mut idx = 0;
        for i in 0..self.d {
            idx += (c[i] - self.lo[i]) as usize * self.strides[i];
        }
        idx
    }

    #[inline]
    fn in_window(&self, v: &Vertex) -> bool {
        let c = v.raw();
        (0..self.d).all(|i| c[i] >= self.lo[i] && c[i] <= self.hi[i])
    }

    /// Vertices reached by the last exploration, in discovery order.
    pub fn reached(&self) -> &[Vertex] {
        &self.reached
    }

    pub fn is_reached(&self, v: &Vertex) -> bool {
        self.in_window(v) && self.stamp[self.index(v)] == self.generation
    }

    fn begin(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.reached.clear();
        self.buckets.iter_mut().for_each(Vec::clear);
        self.fifo.clear();
        self.seen.clear();
    }

    #[inline]
    fn hits(stop: StopRule, v: &Vertex, reached: usize) -> bool {
        match stop {
            StopRule::Never => false,
            StopRule::AtLevel(l) => v.level() >= l,
            StopRule::AtFace { axis, value } => v.raw()[axis] >= value,
            StopRule::AtSize(n) => reached >= n,
        }
    }

    /// Runs one search with the query's sources.
    pub fn explore<E: EdgeStates + ?Sized>(&mut self, edges: &E, stop: StopRule) -> Exploration {
        let sources = std::mem::take(&mut self.query.sources);
        let out = self.explore_from(&sources, edges, stop);
        self.query.sources = sources;
        out
    }

    /// Runs one search from `sources`, which must satisfy the same
    /// constraints as query sources.
    pub fn explore_from<E: EdgeStates + ?Sized>(&mut self, sources: &[Vertex], edges: &E, stop: StopRule) -> Exploration {
        self.begin();
        let mut max_level = i64::MIN;
        for s in sources {
            let idx = self.index(s);
            let h = s.level();
            if self.stamp[idx] != self.generation {
                self.stamp[idx] = self.generation;
                self.best[idx] = h;
                self.reached.push(*s);
                max_level = max_level.max(h);
                if Self::hits(stop, s, self.reached.len()) {
                    return Exploration {
                        max_level,
                        reached: self.reached.len(),
                        stopped: true,
                    };
                }
            } else if h < self.best[idx] {
                self.best[idx] = h;
            } else if self.monotone {
                continue;
            }
            if self.monotone {
                self.buckets[h as usize].push(*s);
            } else if self.seen.insert((idx, h)) {
                self.fifo.push_back(RecordState { vertex: *s, record: h });
            }
        }
        let stopped = if self.monotone {
            self.run_monotone(edges, stop, &mut max_level)
        } else {
            self.run_general(edges, stop, &mut max_level)
        };
        Exploration {
            max_level,
            reached: self.reached.len(),
            stopped,
        }
    }

    /// Candidate move from `v` at record `h` along step `s`: the target and
    /// its new record, if geometry and floor allow it.
    #[inline(always)]
    fn candidate(&self, v: &Vertex, h: i64, s: SignStep) -> Option<(Vertex, usize, i64)> {
        let w = v.step(s);
        if !self.in_window(&w) || !self.query.region.contains(&w) {
            return None;
        }
        let wl = w.level();
        let nh = h.max(wl);
        if !self.floors[nh as usize].admits(wl) {
            return None;
        }
        Some((w, self.index(&w), nh))
    }

    #[inline(always)]
    fn edge_open<E: EdgeStates + ?Sized>(edges: &E, v: &Vertex, w: &Vertex) -> bool {
        let key = if v.level() < w.level() {
            EdgeKey::from_lower_upper(v, w)
        } else {
            EdgeKey::from_lower_upper(w, v)
        };
        edges.is_open(&key)
    }

    fn run_monotone<E: EdgeStates + ?Sized>(&mut self, edges: &E, stop: StopRule, max_level: &mut i64) -> bool {
        let gen = self.generation;
        for h in 0..self.buckets.len() {
            let mut i = 0;
            while i < self.buckets[h].len() {
                let v = self.buckets[h][i];
                i += 1;
                let hv = h as i64;
                if self.best[self.index(&v)] < hv {
                    continue;
                }
                for k in 0..self.steps.len() {
                    let Some((w, widx, nh)) = self.candidate(&v, hv, self.steps[k]) else {
                        continue;
                    };
                    let fresh = self.stamp[widx] != gen;
                    if !fresh && self.best[widx] <= nh {
                        continue;
                    }
                    if !Self::edge_open(edges, &v, &w) {
                        continue;
                    }
                    self.best[widx] = nh;
                    if fresh {
                        self.stamp[widx] = gen;
                        self.reached.push(w);
                        *max_level = (*max_level).max(w.level());
                        if Self::hits(stop, &w, self.reached.len()) {
                            return true;
                        }
                    }
                    self.buckets[nh as usize].push(w);
                }
            }
        }
        false
    }

    fn run_general<E: EdgeStates + ?Sized>(&mut self, edges: &E, stop: StopRule, max_level: &mut i64) -> bool {
        let gen = self.generation;
        while let Some(RecordState { vertex: v, record: h }) = self.fifo.pop_front() {
            for k in 0..self.steps.len() {
                let Some((w, widx, nh)) = self.candidate(&v, h, self.steps[k]) else {
                    continue;
                };
                if self.seen.contains(&(widx, nh)) || !Self::edge_open(edges, &v, &w) {
                    continue;
                }
                self.seen.insert((widx, nh));
                if self.stamp[widx] != gen {
                    self.stamp[widx] = gen;
                    self.reached.push(w);
                    *max_level = (*max_level).max(w.level());
                    if Self::hits(stop, &w, self.reached.len()) {
                        return true;
                    }
                }
                self.fifo.push_back(RecordState { vertex: w, record: nh });
            }
        }
        false
    }

    /// Materializes the last exploration (meaningful after a full run).
    pub fn result(&self) -> ClusterResult {
        let reached: BTreeSet<Vertex> = self.reached.iter().copied().collect();
        let reached_states = if self.monotone {
            self.reached
                .iter()
                .map(|v| RecordState {
                    vertex: *v,
                    record: self.best[self.index(v)],
                })
                .collect()
        } else {
            let by_index: HashMap<usize, Vertex> = self.reached.iter().map(|v| (self.index(v), *v)).collect();
            self.seen
                .iter()
                .map(|(i, h)| RecordState {
                    vertex: by_index[i],
                    record: *h,
                })
                .collect()
        };
        ClusterResult {
            max_level: reached.iter().map(Vertex::level).max().unwrap_or(i64::MIN),
            reached,
            reached_states,
            source: self.query.sources.clone(),
            exact: self.monotone,
        }
    }
}

/// The walk cluster of `query` under arbitrary edge states.
pub fn reach_walk_with<E: EdgeStates + ?Sized>(query: &ClusterQuery, edges: &E) -> Result<ClusterResult, ReachError> {
    let mut ex = Explorer::new(query.clone())?;
    ex.explore(edges, StopRule::Never);
    Ok(ex.result())
}

/// The walk cluster of `query` under `config` at level `p`.
pub fn reach_walk(query: &ClusterQuery, config: &EdgeConfig, p: f64) -> Result<ClusterResult, ReachError> {
    reach_walk_with(query, &config.at(p)?)
}

/// Size limit for [`reach_saw_oracle`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OracleGuard {
    pub max_vertices: usize,
    pub force: bool,
}

impl Default for OracleGuard {
    fn default() -> Self {
        Self {
            max_vertices: 30,
            force: false,
        }
    }
}

/// Exhaustive enumeration of open self-avoiding backbend paths. Exponential;
/// refuses windows with more than `guard.max_vertices` region vertices unless
/// forced, and never handles more than 64.
pub fn reach_saw_oracle_with<E: EdgeStates + ?Sized>(
    query: &ClusterQuery,
    edges: &E,
    guard: OracleGuard,
) -> Result<ClusterResult, ReachError> {
    query.validate()?;
    let verts: Vec<Vertex> = query
        .window
        .vertices()
        .into_iter()
        .filter(|v| query.region.contains(v))
        .collect();
    let n = verts.len();
    if n > 64 {
        return Err(ReachError::OracleTooLarge(n));
    }
    if n > guard.max_vertices && !guard.force {
        return Err(ReachError::GuardExceeded {
            count: n,
            limit: guard.max_vertices,
        });
    }
    let local: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let adjacency: Vec<Vec<usize>> = verts
        .iter()
        .map(|v| {
            v.neighbors()
                .filter_map(|w| {
                    let j = *local.get(&w)?;
                    let key = EdgeKey::between(v, &w)?;
                    edges.is_open(&key).then_some(j)
                })
                .collect()
        })
        .collect();

    struct Search<'a> {
        verts: &'a [Vertex],
        adjacency: &'a [Vec<usize>],
        spec: &'a BackbendSpec,
        memo: HashSet<(usize, i64, u64)>,
        reached: u64,
    }

    impl Search<'_> {
        fn dfs(&mut self, v: usize, record: i64, visited: u64) {
            if !self.memo.insert((v, record, visited)) {
                return;
            }
            self.reached |= 1 << v;
            let adjacency = self.adjacency;
            for &w in &adjacency[v] {
                if visited >> w & 1 == 1 {
                    continue;
                }
                let level = self.verts[w].level();
                let nr = record.max(level);
                if self.spec.floor_at(nr as u64).admits(level) {
                    self.dfs(w, nr, visited | 1 << w);
                }
            }
        }
    }

    let mut search = Search {
        verts: &verts,
        adjacency: &adjacency,
        spec: &query.spec,
        memo: HashSet::new(),
        reached: 0,
    };
    for s in &query.sources {
        let i = local[s];
        search.dfs(i, s.level(), 1 << i);
    }
    let reached: BTreeSet<Vertex> = (0..n).filter(|i| search.reached >> i & 1 == 1).map(|i| verts[i]).collect();
    let reached_states = search
        .memo
        .iter()
        .map(|(v, r, _)| RecordState {
            vertex: verts[*v],
            record: *r,
        })
        .collect();
    Ok(ClusterResult {
        max_level: reached.iter().map(Vertex::level).max().unwrap_or(i64::MIN),
        reached,
        reached_states,
        source: query.sources.clone(),
        exact: true,
    })
}

pub fn reach_saw_oracle(
    query: &ClusterQuery,
    config: &EdgeConfig,
    p: f64,
    guard: OracleGuard,
) -> Result<ClusterResult, ReachError> {
    reach_saw_oracle_with(query, &config.at(p)?, guard)
}

/// Seed-block propagation: every vertex of `D* + z` is reached from
/// `D* + x`, where `D* = B([-r, r]^{d-1} × 0)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, serde::Deserialize)]
pub struct BlockEvent {
    pub r: i64,
    pub x: Vertex,
    pub z: Vertex,
}

impl BlockEvent {
    /// Source block and target block, after checking the geometry against
    /// the region and window.
    pub fn blocks(&self, region: &Region, window: &Window) -> Result<(Vec<Vertex>, Vec<Vertex>), ReachError> {
        let d = window.dim();
        if self.x.dim() != d || self.z.dim() != d {
            return Err(ReachError::BlockGeometry("x and z must match the window dimension".into()));
        }
        if self.z.level() < self.x.level() {
            return Err(ReachError::BlockGeometry(format!(
                "target level {} below source level {}",
                self.z.level(),
                self.x.level()
            )));
        }
        let base = seed_block(d, self.r)?;
        let src: Vec<Vertex> = base.iter().map(|v| *v + self.x).collect();
        let dst: Vec<Vertex> = base.iter().map(|v| *v + self.z).collect();
        for (name, set) in [("D* + x", &src), ("D* + z", &dst)] {
            if let Some(v) = set.iter().find(|v| !region.contains(v) || !window.contains(v)) {
                return Err(ReachError::BlockGeometry(format!("{name} vertex {v:?} outside region or window")));
            }
        }
        if src.iter().any(|v| v.level() < 0) {
            return Err(ReachError::BlockGeometry("D* + x lies below level 0".into()));
        }
        Ok((src, dst))
    }
}

pub fn block_event_with<E: EdgeStates + ?Sized>(
    region: &Region,
    window: &Window,
    spec: &BackbendSpec,
    event: &BlockEvent,
    edges: &E,
) -> Result<bool, ReachError> {
    let (src, dst) = event.blocks(region, window)?;
    let query = ClusterQuery::new(region.clone(), *window, spec.clone(), src)?;
    let mut ex = Explorer::new(query)?;
    ex.explore(edges, StopRule::Never);
    Ok(dst.iter().all(|v| ex.is_reached(v)))
}

pub fn block_event(
    config: &EdgeConfig,
    p: f64,
    spec: &BackbendSpec,
    event: &BlockEvent,
    region: &Region,
    window: &Window,
) -> Result<bool, ReachError> {
    block_event_with(region, window, spec, event, &config.at(p)?)
}
