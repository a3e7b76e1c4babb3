//! Backbend sequences and the path-level semantics built on them.
//!
//! A backbend sequence assigns to every record level `h ≥ 0` an allowed
//! retreat depth `β_h ∈ Z+ ∪ {∞}`. A path is admissible when every vertex
//! satisfies `x_d ≥ h − β_h`, where `h` is the running maximum level
//! (the *record*) along the path so far.
//!
//! Sequences are represented as eventually cyclic: a finite prefix followed
//! by a nonempty tail that repeats forever.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::BackbendError;
use crate::lattice::{Region, Vertex};

/// One entry of a backbend sequence. Ordered with every finite value below
/// `Infinite`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Backbend {
    Finite(u64),
    Infinite,
}

impl Backbend {
    pub fn is_finite(&self) -> bool {
        matches!(self, Backbend::Finite(_))
    }
}

impl fmt::Display for Backbend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backbend::Finite(b) => write!(f, "{b}"),
            Backbend::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Backbend {
    type Err = BackbendError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" => Ok(Backbend::Infinite),
            t => t
                .parse::<u64>()
                .map(Backbend::Finite)
                .map_err(|_| BackbendError::Parse(s.to_string())),
        }
    }
}

/// Lowest admissible level at a given record: `h − β_h`, or unbounded below
/// when `β_h = ∞`. `Unbounded` orders below every `At`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Floor {
    Unbounded,
    At(i64),
}

impl Floor {
    #[inline]
    pub fn admits(&self, level: i64) -> bool {
        match self {
            Floor::Unbounded => true,
            Floor::At(f) => level >= *f,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BackbendSpec {
    prefix: Vec<Backbend>,
    tail: Vec<Backbend>,
}

impl BackbendSpec {
    pub fn new(prefix: Vec<Backbend>, tail: Vec<Backbend>) -> Result<Self, BackbendError> {
        if tail.is_empty() {
            return Err(BackbendError::EmptyTail);
        }
        Ok(Self { prefix, tail })
    }

    pub fn constant(b: Backbend) -> Self {
        Self {
            prefix: vec![],
            tail: vec![b],
        }
    }

    pub fn oriented() -> Self {
        Self::constant(Backbend::Finite(0))
    }

    pub fn unoriented() -> Self {
        Self::constant(Backbend::Infinite)
    }

    pub fn cyclic(tail: Vec<Backbend>) -> Result<Self, BackbendError> {
        Self::new(vec![], tail)
    }

    pub fn prefix(&self) -> &[Backbend] {
        &self.prefix
    }

    pub fn tail(&self) -> &[Backbend] {
        &self.tail
    }

    /// `|prefix| + 2·|tail|`: enough terms to see every adjacent pair of the
    /// sequence, including the tail wrap-around.
    pub fn horizon(&self) -> u64 {
        (self.prefix.len() + 2 * self.tail.len()) as u64
    }

    pub fn beta_at(&self, h: u64) -> Backbend {
        let p = self.prefix.len() as u64;
        if h < p {
            self.prefix[h as usize]
        } else {
            self.tail[((h - p) % self.tail.len() as u64) as usize]
        }
    }

    pub fn floor_at(&self, h: u64) -> Floor {
        match self.beta_at(h) {
            Backbend::Finite(b) => Floor::At(h as i64 - b as i64),
            Backbend::Infinite => Floor::Unbounded,
        }
    }

    /// True iff `h ↦ h − β_h` never decreases, i.e. `β_{h+1} ≤ β_h + 1`
    /// everywhere (equivalently `β_l − β_m ≤ l − m` for `l ≥ m`).
    pub fn has_monotone_floor(&self) -> bool {
        (0..self.horizon()).all(|h| self.floor_at(h + 1) >= self.floor_at(h))
    }

    /// Minimal equivalent representation: shortest tail period, then the
    /// shortest prefix.
    pub fn canonical(&self) -> BackbendSpec {
        let k = self.tail.len();
        let period = (1..=k)
            .find(|p| k.is_multiple_of(*p) && (0..k).all(|i| self.tail[i] == self.tail[i % p]))
            .unwrap_or(k);
        let mut tail: Vec<Backbend> = self.tail[..period].to_vec();
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            if *last != tail[tail.len() - 1] {
                break;
            }
            prefix.pop();
            tail.rotate_right(1);
        }
        BackbendSpec { prefix, tail }
    }

    /// True iff `self` is pointwise ≤ `other` on both horizons.
    pub fn dominated_by(&self, other: &BackbendSpec) -> bool {
        let h = self.horizon().max(other.horizon()) + lcm(self.tail.len(), other.tail.len()) as u64;
        (0..=h).all(|i| self.beta_at(i) <= other.beta_at(i))
    }

    pub fn classify(&self) -> SequenceClass {
        let c = self.canonical();
        let k = c.tail.len();
        if c.prefix.is_empty() && k == 1 {
            return match c.tail[0] {
                Backbend::Finite(0) => SequenceClass::Oriented,
                Backbend::Finite(b) => SequenceClass::BBackbend(b),
                Backbend::Infinite => SequenceClass::Unoriented,
            };
        }
        if !c.tail.iter().all(Backbend::is_finite) {
            return SequenceClass::General;
        }
        if c.prefix.is_empty() {
            return SequenceClass::KCyclic(k);
        }
        // limit value at absolute index h is tail[(h - |prefix|) mod k]
        let p = c.prefix.len() as i64;
        let from_below = c
            .prefix
            .iter()
            .enumerate()
            .all(|(h, b)| *b <= c.tail[(h as i64 - p).rem_euclid(k as i64) as usize]);
        if from_below {
            SequenceClass::CyclicLimitFromBelow(k)
        } else {
            SequenceClass::CyclicLimit(k)
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn join(values: &[Backbend]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// `const:<n>` | `inf` | `cyclic:<v0>,...` | `prefix:<a0>,...;<tail>`
impl fmt::Display for BackbendSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "prefix:{};", join(&self.prefix))?;
        }
        match self.tail.as_slice() {
            [Backbend::Infinite] => write!(f, "inf"),
            [b] => write!(f, "const:{b}"),
            t => write!(f, "cyclic:{}", join(t)),
        }
    }
}

fn parse_values(s: &str, whole: &str) -> Result<Vec<Backbend>, BackbendError> {
    s.split(',')
        .map(|t| t.parse().map_err(|_| BackbendError::Parse(whole.to_string())))
        .collect()
}

fn parse_tail(s: &str, whole: &str) -> Result<Vec<Backbend>, BackbendError> {
    let s = s.trim();
    if s == "inf" {
        Ok(vec![Backbend::Infinite])
    } else if let Some(v) = s.strip_prefix("const:") {
        Ok(vec![v.parse().map_err(|_| BackbendError::Parse(whole.to_string()))?])
    } else if let Some(v) = s.strip_prefix("cyclic:") {
        parse_values(v, whole)
    } else {
        Err(BackbendError::Parse(whole.to_string()))
    }
}

impl FromStr for BackbendSpec {
    type Err = BackbendError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("prefix:") {
            let (pre, tail) = rest
                .split_once(';')
                .ok_or_else(|| BackbendError::Parse(s.to_string()))?;
            BackbendSpec::new(parse_values(pre, s)?, parse_tail(tail, s)?)
        } else {
            BackbendSpec::new(vec![], parse_tail(s, s)?)
        }
    }
}

impl Serialize for BackbendSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BackbendSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "class", content = "k", rename_all = "snake_case")]
pub enum SequenceClass {
    /// `β ≡ 0`.
    Oriented,
    /// `β ≡ b` for some `b ≥ 1`.
    BBackbend(u64),
    /// `β ≡ ∞`.
    Unoriented,
    /// Purely periodic with finite entries and minimal period `k ≥ 2`.
    KCyclic(usize),
    /// Finite prefix that never exceeds the phase-aligned periodic limit.
    CyclicLimitFromBelow(usize),
    /// Converges to a finite periodic sequence, but not from below.
    CyclicLimit(usize),
    General,
}

impl fmt::Display for SequenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceClass::Oriented => write!(f, "oriented"),
            SequenceClass::BBackbend(b) => write!(f, "b_backbend({b})"),
            SequenceClass::Unoriented => write!(f, "unoriented"),
            SequenceClass::KCyclic(k) => write!(f, "k_cyclic({k})"),
            SequenceClass::CyclicLimitFromBelow(k) => write!(f, "cyclic_limit_from_below({k})"),
            SequenceClass::CyclicLimit(k) => write!(f, "cyclic_limit({k})"),
            SequenceClass::General => write!(f, "general"),
        }
    }
}

/// A finite vertex sequence; admissibility is decided by [`validate_path`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, BackbendError> {
        let first = vertices.first().ok_or(BackbendError::EmptyPath)?;
        if vertices.iter().any(|v| v.dim() != first.dim()) {
            return Err(BackbendError::MixedDimensions);
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn start(&self) -> &Vertex {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Vertex {
        &self.vertices[self.vertices.len() - 1]
    }

    /// Every step raises the level by one.
    pub fn is_oriented(&self) -> bool {
        self.vertices.windows(2).all(|w| w[1].level() == w[0].level() + 1)
    }
}

/// Running maximum of the level along the path.
pub fn record_levels(path: &Path) -> Vec<i64> {
    let mut best = i64::MIN;
    path.vertices
        .iter()
        .map(|v| {
            best = best.max(v.level());
            best
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// A vertex repeats an earlier one.
    Repeated,
    /// Consecutive vertices are not lattice neighbors.
    NotAdjacent,
    OutsideRegion,
    /// The start vertex lies below level 0.
    StartBelowZero,
    /// The vertex retreated below `h − β_h`.
    Retreat,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::Repeated => "repeated vertex",
            Clause::NotAdjacent => "not adjacent to previous vertex",
            Clause::OutsideRegion => "outside region",
            Clause::StartBelowZero => "start below level 0",
            Clause::Retreat => "retreat below record floor",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PathVerdict {
    Valid,
    Violation { index: usize, clause: Clause },
}

impl PathVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PathVerdict::Valid)
    }
}

/// Checks the path against the backbend rule inside `region`, reporting the
/// first failing index (and, at that index, the first failing clause in the
/// order repeated, adjacency, region, start level, retreat).
pub fn validate_path(spec: &BackbendSpec, path: &Path, region: &Region) -> PathVerdict {
    let mut seen = HashSet::with_capacity(path.len());
    let mut record = i64::MIN;
    for (i, v) in path.vertices.iter().enumerate() {
        let clause = if !seen.insert(*v) {
            Some(Clause::Repeated)
        } else if i > 0 && !path.vertices[i - 1].is_adjacent(v) {
            Some(Clause::NotAdjacent)
        } else if !region.contains(v) {
            Some(Clause::OutsideRegion)
        } else if i == 0 && v.level() < 0 {
            Some(Clause::StartBelowZero)
        } else {
            record = record.max(v.level());
            // record >= start level >= 0 here
            if spec.floor_at(record as u64).admits(v.level()) {
                None
            } else {
                Some(Clause::Retreat)
            }
        };
        if let Some(clause) = clause {
            return PathVerdict::Violation { index: i, clause };
        }
    }
    PathVerdict::Valid
}

/// Joins an oriented prefix and a suffix at their shared vertex, cutting at
/// the first prefix vertex that the suffix revisits, and reports whether the
/// result is admissible (checked in the full space).
pub fn concatenation_preserves(
    spec: &BackbendSpec,
    oriented_prefix: &Path,
    suffix: &Path,
) -> Result<bool, BackbendError> {
    if oriented_prefix.end() != suffix.start() {
        return Err(BackbendError::JunctionMismatch {
            prefix_end: *oriented_prefix.end(),
            suffix_start: *suffix.start(),
        });
    }
    if let Some(i) = oriented_prefix
        .vertices
        .windows(2)
        .position(|w| w[1].level() != w[0].level() + 1)
    {
        return Err(BackbendError::NotOriented(i + 1));
    }
    Ok(validate_path(spec, &loop_erased_join(oriented_prefix, suffix), &Region::FullSpace).is_valid())
}

pub(crate) fn loop_erased_join(prefix: &Path, suffix: &Path) -> Path {
    let in_suffix: HashSet<&Vertex> = suffix.vertices.iter().collect();
    let cut = prefix
        .vertices
        .iter()
        .position(|v| in_suffix.contains(v))
        .expect("junction is shared");
    let z = prefix.vertices[cut];
    let from = suffix.vertices.iter().position(|v| *v == z).expect("shared vertex");
    let mut vertices = prefix.vertices[..cut].to_vec();
    vertices.extend_from_slice(&suffix.vertices[from..]);
    Path { vertices }
}
