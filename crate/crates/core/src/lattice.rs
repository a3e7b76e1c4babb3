//! Geometry of the d-dimensional body-centered cubic lattice.
//!
//! Vertices are integer points whose coordinates all share one parity; two
//! vertices are adjacent when they differ by exactly one in every coordinate,
//! so each vertex has `2^d` neighbors. The last coordinate is the *level*.
//!
//! Infinite regions are only ever described by predicates ([`Region`]); every
//! computation is confined to a finite [`Window`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LatticeError;

/// Largest supported dimension.
pub const MAX_DIM: usize = 6;
/// Smallest supported dimension.
pub const MIN_DIM: usize = 2;

fn check_dim(d: usize) -> Result<(), LatticeError> {
    if (MIN_DIM..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(LatticeError::UnsupportedDimension(d))
    }
}

/// True iff `coords` is a lattice vertex of dimension `d`.
pub fn is_vertex(d: usize, coords: &[i64]) -> Result<bool, LatticeError> {
    check_dim(d)?;
    if coords.len() != d {
        return Err(LatticeError::DimensionMismatch {
            expected: d,
            found: coords.len(),
        });
    }
    let parity = coords[0].rem_euclid(2);
    Ok(coords.iter().all(|c| c.rem_euclid(2) == parity))
}

/// A lattice vertex. Fixed-capacity storage keeps it `Copy`; coordinates past
/// `dim` are always zero so derived ordering is lexicographic on coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    dim: u8,
    coords: [i64; MAX_DIM],
}

impl Vertex {
    pub fn new(coords: &[i64]) -> Result<Self, LatticeError> {
        let d = coords.len();
        if !is_vertex(d, coords)? {
            return Err(LatticeError::ParityMismatch(coords.to_vec()));
        }
        Ok(Self::from_slice_unchecked(coords))
    }

    pub fn origin(d: usize) -> Result<Self, LatticeError> {
        check_dim(d)?;
        Ok(Self {
            dim: d as u8,
            coords: [0; MAX_DIM],
        })
    }

    pub(crate) fn from_slice_unchecked(coords: &[i64]) -> Self {
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Self {
            dim: coords.len() as u8,
            coords: c,
        }
    }

    pub(crate) fn from_array_unchecked(dim: usize, coords: [i64; MAX_DIM]) -> Self {
        Self {
            dim: dim as u8,
            coords,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim()]
    }

    #[inline]
    pub(crate) fn raw(&self) -> &[i64; MAX_DIM] {
        &self.coords
    }

    /// The d-th coordinate.
    #[inline]
    pub fn level(&self) -> i64 {
        self.coords[self.dim() - 1]
    }

    /// The `2^d` neighbors in lexicographic order.
    pub fn neighbors(&self) -> impl Iterator<Item = Vertex> + '_ {
        SignStep::all(self.dim()).map(move |s| self.step(s))
    }

    #[inline]
    pub fn step(&self, s: SignStep) -> Vertex {
        debug_assert_eq!(s.dim(), self.dim());
        let mut c = self.coords;
        for (i, ci) in c.iter_mut().enumerate().take(self.dim()) {
            *ci += s.sign(i);
        }
        Vertex::from_array_unchecked(self.dim(), c)
    }

    pub fn is_adjacent(&self, other: &Vertex) -> bool {
        self.dim == other.dim
            && self
                .coords()
                .iter()
                .zip(other.coords())
                .all(|(a, b)| (a - b).abs() == 1)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Comma-separated coordinates, e.g. `0,0,0`.
impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(i64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Vertex {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| LatticeError::Parse(format!("bad vertex literal `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Vertex::new(&coords)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coords = Vec::<i64>::deserialize(deserializer)?;
        Vertex::new(&coords).map_err(serde::de::Error::custom)
    }
}

/// Translation by a lattice vertex; parity is preserved.
impl Add for Vertex {
    type Output = Vertex;

    fn add(self, rhs: Vertex) -> Vertex {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut c = self.coords;
        for (a, b) in c.iter_mut().zip(rhs.coords.iter()) {
            *a += b;
        }
        Vertex::from_array_unchecked(self.dim(), c)
    }
}

impl Sub for Vertex {
    type Output = Vertex;

    fn sub(self, rhs: Vertex) -> Vertex {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut c = self.coords;
        for (a, b) in c.iter_mut().zip(rhs.coords.iter()) {
            *a -= b;
        }
        Vertex::from_array_unchecked(self.dim(), c)
    }
}

/// One of the `2^d` unit moves. Bit `d-1-i` of `mask` is set when coordinate
/// `i` moves by `+1`, so masks in increasing order are in lexicographic order
/// of the step vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SignStep {
    dim: u8,
    mask: u32,
}

impl SignStep {
    pub fn from_signs(signs: &[i64]) -> Result<Self, LatticeError> {
        let d = signs.len();
        check_dim(d)?;
        let mut mask = 0;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => mask |= 1 << (d - 1 - i),
                -1 => {}
                _ => return Err(LatticeError::Parse(format!("sign {s} is not ±1"))),
            }
        }
        Ok(Self { dim: d as u8, mask })
    }

    pub(crate) fn from_mask(dim: usize, mask: u32) -> Self {
        Self {
            dim: dim as u8,
            mask,
        }
    }

    pub fn all(d: usize) -> impl Iterator<Item = SignStep> {
        (0..1u32 << d).map(move |m| SignStep::from_mask(d, m))
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn sign(&self, i: usize) -> i64 {
        if (self.mask >> (self.dim() - 1 - i)) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.sign(i)).collect()
    }
}

/// Canonical identity of an undirected edge: its lower endpoint (smaller
/// level) and the signs of the first `d-1` coordinates of the step to the
/// upper endpoint, packed most-significant-first with `-1 -> 0`, `+1 -> 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeKey {
    pub lower: Vertex,
    pub up_signs: u32,
}

impl EdgeKey {
    /// Canonical key of the edge `{a, b}`, or `None` when not adjacent.
    pub fn between(a: &Vertex, b: &Vertex) -> Option<EdgeKey> {
        if !a.is_adjacent(b) {
            return None;
        }
        let (lo, hi) = if a.level() < b.level() { (a, b) } else { (b, a) };
        Some(Self::from_lower_upper(lo, hi))
    }

    #[inline]
    pub(crate) fn from_lower_upper(lo: &Vertex, hi: &Vertex) -> EdgeKey {
        let d = lo.dim();
        let mut up = 0u32;
        for i in 0..d - 1 {
            if hi.raw()[i] > lo.raw()[i] {
                up |= 1 << (d - 2 - i);
            }
        }
        EdgeKey {
            lower: *lo,
            up_signs: up,
        }
    }

    pub fn upper(&self) -> Vertex {
        let d = self.lower.dim();
        let mut c = *self.lower.raw();
        for (i, ci) in c.iter_mut().enumerate().take(d - 1) {
            *ci += if (self.up_signs >> (d - 2 - i)) & 1 == 1 { 1 } else { -1 };
        }
        c[d - 1] += 1;
        Vertex::from_array_unchecked(d, c)
    }

    pub fn translate(&self, by: &Vertex) -> EdgeKey {
        EdgeKey {
            lower: self.lower + *by,
            up_signs: self.up_signs,
        }
    }
}

/// Chebyshev distance.
pub fn linf_distance(x: &Vertex, y: &Vertex) -> Result<i64, LatticeError> {
    if x.dim() != y.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(x.coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or(0))
}

pub fn translate_set(set: &[Vertex], by: &Vertex) -> Vec<Vertex> {
    set.iter().map(|v| *v + *by).collect()
}

/// Closed integer interval; `None` bounds are unbounded.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub fn closed(lo: i64, hi: i64) -> Self {
        Self {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn unbounded() -> Self {
        Self { lo: None, hi: None }
    }

    pub fn at_least(lo: i64) -> Self {
        Self { lo: Some(lo), hi: None }
    }

    #[inline]
    pub fn contains(&self, x: i64) -> bool {
        self.lo.is_none_or(|l| x >= l) && self.hi.is_none_or(|h| x <= h)
    }

    fn shift(&self, by: i64) -> Self {
        Self {
            lo: self.lo.map(|l| l + by),
            hi: self.hi.map(|h| h + by),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo {
            Some(l) => write!(f, "{l}")?,
            None => write!(f, "-inf")?,
        }
        write!(f, "..")?;
        match self.hi {
            Some(h) => write!(f, "{h}"),
            None => write!(f, "inf"),
        }
    }
}

/// The vertex sets the estimators run on.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// Every vertex.
    FullSpace,
    /// Level ≥ 0.
    HalfSpace,
    /// First `d-e` coordinates in `[-l, l]`, level ≥ 0.
    HalfSlab { l: i64, e: usize },
    /// `0 ≤ level ≤ t`.
    Slab { t: i64 },
    /// Componentwise intervals.
    Box { intervals: Vec<Interval> },
}

impl Region {
    pub fn validate(&self, d: usize) -> Result<(), LatticeError> {
        check_dim(d)?;
        match self {
            Region::FullSpace | Region::HalfSpace => Ok(()),
            Region::HalfSlab { l, e } => {
                if *l < 1 || *e < 2 || *e > d {
                    Err(LatticeError::InvalidRegion(format!(
                        "half-slab needs l >= 1 and 2 <= e <= {d}, got l={l}, e={e}"
                    )))
                } else {
                    Ok(())
                }
            }
            Region::Slab { t } => {
                if *t < 1 {
                    Err(LatticeError::InvalidRegion(format!("slab needs t >= 1, got {t}")))
                } else {
                    Ok(())
                }
            }
            Region::Box { intervals } => {
                if intervals.len() != d {
                    return Err(LatticeError::DimensionMismatch {
                        expected: d,
                        found: intervals.len(),
                    });
                }
                for iv in intervals {
                    if let (Some(l), Some(h)) = (iv.lo, iv.hi) {
                        if l > h {
                            return Err(LatticeError::InvalidRegion(format!("empty interval {iv}")));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Membership of a vertex (parity is guaranteed by the `Vertex` type).
    #[inline]
    pub fn contains(&self, v: &Vertex) -> bool {
        let d = v.dim();
        let c = v.raw();
        match self {
            Region::FullSpace => true,
            Region::HalfSpace => c[d - 1] >= 0,
            Region::HalfSlab { l, e } => {
                c[d - 1] >= 0 && c[..d.saturating_sub(*e)].iter().all(|x| x.abs() <= *l)
            }
            Region::Slab { t } => (0..=*t).contains(&c[d - 1]),
            Region::Box { intervals } => intervals.iter().zip(c.iter()).all(|(iv, x)| iv.contains(*x)),
        }
    }

    /// `self + x` expressed as a box (every region kind is an axis-aligned
    /// product of intervals).
    pub fn translate(&self, x: &Vertex) -> Region {
        let d = x.dim();
        let c = x.coords();
        let intervals = match self {
            Region::Box { intervals } => intervals.iter().zip(c).map(|(iv, s)| iv.shift(*s)).collect(),
            _ => (0..d)
                .map(|i| {
                    let base = match self {
                        Region::FullSpace => Interval::unbounded(),
                        Region::HalfSpace => {
                            if i == d - 1 {
                                Interval::at_least(0)
                            } else {
                                Interval::unbounded()
                            }
                        }
                        Region::HalfSlab { l, e } => {
                            if i == d - 1 {
                                Interval::at_least(0)
                            } else if i < d.saturating_sub(*e) {
                                Interval::closed(-l, *l)
                            } else {
                                Interval::unbounded()
                            }
                        }
                        Region::Slab { t } => {
                            if i == d - 1 {
                                Interval::closed(0, *t)
                            } else {
                                Interval::unbounded()
                            }
                        }
                        Region::Box { .. } => unreachable!(),
                    };
                    base.shift(c[i])
                })
                .collect(),
        };
        Region::Box { intervals }
    }
}

/// `H` | `V` | `slab:<t>` | `halfslab:<l>,<e>` | `box:<lo..hi>x<lo..hi>...`
impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::FullSpace => write!(f, "V"),
            Region::HalfSpace => write!(f, "H"),
            Region::HalfSlab { l, e } => write!(f, "halfslab:{l},{e}"),
            Region::Slab { t } => write!(f, "slab:{t}"),
            Region::Box { intervals } => {
                let parts: Vec<String> = intervals.iter().map(|iv| iv.to_string()).collect();
                write!(f, "box:{}", parts.join("x"))
            }
        }
    }
}

fn parse_bound(s: &str, lower: bool) -> Result<Option<i64>, LatticeError> {
    match s.trim() {
        "" => Ok(None),
        "inf" | "+inf" if !lower => Ok(None),
        "-inf" if lower => Ok(None),
        t => t
            .parse::<i64>()
            .map(Some)
            .map_err(|_| LatticeError::Parse(format!("bad interval bound `{s}`"))),
    }
}

fn parse_intervals(s: &str) -> Result<Vec<Interval>, LatticeError> {
    s.split('x')
        .map(|part| {
            let (lo, hi) = part
                .split_once("..")
                .ok_or_else(|| LatticeError::Parse(format!("interval `{part}` lacks `..`")))?;
            Ok(Interval {
                lo: parse_bound(lo, true)?,
                hi: parse_bound(hi, false)?,
            })
        })
        .collect()
}

impl FromStr for Region {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad_int = |t: &str| LatticeError::Parse(format!("bad integer `{t}` in region `{s}`"));
        match s {
            "H" => return Ok(Region::HalfSpace),
            "V" => return Ok(Region::FullSpace),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("slab:") {
            let t = rest.trim().parse().map_err(|_| bad_int(rest))?;
            return Ok(Region::Slab { t });
        }
        if let Some(rest) = s.strip_prefix("halfslab:") {
            let (l, e) = rest
                .split_once(',')
                .ok_or_else(|| LatticeError::Parse(format!("half-slab `{s}` needs `l,e`")))?;
            return Ok(Region::HalfSlab {
                l: l.trim().parse().map_err(|_| bad_int(l))?,
                e: e.trim().parse().map_err(|_| bad_int(e))?,
            });
        }
        if let Some(rest) = s.strip_prefix("box:") {
            return Ok(Region::Box {
                intervals: parse_intervals(rest)?,
            });
        }
        Err(LatticeError::Parse(format!("unknown region `{s}`")))
    }
}

/// Finite box that bounds every computation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Window {
    dim: u8,
    lo: [i64; MAX_DIM],
    hi: [i64; MAX_DIM],
}

impl Window {
    pub fn new(lo: &[i64], hi: &[i64]) -> Result<Self, LatticeError> {
        let d = lo.len();
        check_dim(d)?;
        if hi.len() != d {
            return Err(LatticeError::DimensionMismatch {
                expected: d,
                found: hi.len(),
            });
        }
        if lo.iter().zip(hi).any(|(l, h)| l > h) {
            return Err(LatticeError::InvalidWindow(format!("lo {lo:?} exceeds hi {hi:?}")));
        }
        let mut l = [0; MAX_DIM];
        let mut h = [0; MAX_DIM];
        l[..d].copy_from_slice(lo);
        h[..d].copy_from_slice(hi);
        Ok(Self {
            dim: d as u8,
            lo: l,
            hi: h,
        })
    }

    /// `[-half_width, half_width]^{d-1} × [0, height]`.
    pub fn centered(d: usize, half_width: i64, height: i64) -> Result<Self, LatticeError> {
        let mut lo = vec![-half_width; d];
        let mut hi = vec![half_width; d];
        lo[d - 1] = 0;
        hi[d - 1] = height;
        Self::new(&lo, &hi)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo[..self.dim()]
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi[..self.dim()]
    }

    pub fn top(&self) -> i64 {
        self.hi[self.dim() - 1]
    }

    pub fn bottom(&self) -> i64 {
        self.lo[self.dim() - 1]
    }

    #[inline]
    pub fn contains(&self, v: &Vertex) -> bool {
        let c = v.raw();
        (0..self.dim()).all(|i| c[i] >= self.lo[i] && c[i] <= self.hi[i])
    }

    /// Number of integer points (not only lattice vertices) in the box.
    pub fn point_count(&self) -> u128 {
        (0..self.dim())
            .map(|i| (self.hi[i] - self.lo[i] + 1) as u128)
            .product()
    }

    pub fn translate(&self, by: &Vertex) -> Window {
        let mut w = *self;
        for i in 0..self.dim() {
            w.lo[i] += by.raw()[i];
            w.hi[i] += by.raw()[i];
        }
        w
    }

    /// Lattice vertices in lexicographic order.
    pub fn vertices(&self) -> Vec<Vertex> {
        let d = self.dim();
        let mut out = Vec::new();
        for first in self.lo[0]..=self.hi[0] {
            let parity = first.rem_euclid(2);
            let mut starts = [0i64; MAX_DIM];
            let mut ok = true;
            for i in 1..d {
                let s = if self.lo[i].rem_euclid(2) == parity {
                    self.lo[i]
                } else {
                    self.lo[i] + 1
                };
                if s > self.hi[i] {
                    ok = false;
                }
                starts[i] = s;
            }
            if !ok {
                continue;
            }
            let mut cur = starts;
            cur[0] = first;
            loop {
                out.push(Vertex::from_array_unchecked(d, cur));
                // odometer over coordinates 1..d, last fastest
                let mut i = d - 1;
                loop {
                    if i == 0 {
                        break;
                    }
                    cur[i] += 2;
                    if cur[i] <= self.hi[i] {
                        break;
                    }
                    cur[i] = starts[i];
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
            }
        }
        out
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim())
            .map(|i| format!("{}..{}", self.lo[i], self.hi[i]))
            .collect();
        f.write_str(&parts.join("x"))
    }
}

/// `<lo..hi>x<lo..hi>...` with finite bounds.
impl FromStr for Window {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let intervals = parse_intervals(s.trim())?;
        let mut lo = Vec::with_capacity(intervals.len());
        let mut hi = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match (iv.lo, iv.hi) {
                (Some(l), Some(h)) => {
                    lo.push(l);
                    hi.push(h);
                }
                _ => return Err(LatticeError::InvalidWindow(format!("window `{s}` must be finite"))),
            }
        }
        Window::new(&lo, &hi)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowRepr {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WindowRepr {
            lo: self.lo().to_vec(),
            hi: self.hi().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = WindowRepr::deserialize(deserializer)?;
        Window::new(&r.lo, &r.hi).map_err(serde::de::Error::custom)
    }
}

/// The boundary sets used by the block construction, all inside
/// `B([-l, l]^{d-1} × [0, t])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BoundaryKind {
    /// `T(l,t)`: level equals `t`.
    Top,
    /// `F(l,t)`: `|x_i| = l` for some `i < d`.
    Side,
    /// `F_{(d-1)+}(l,t)`: side vertices with `x_{d-1} = l`.
    SidePlus,
    /// `T^u(l,t)`: top vertices with `0 ≤ x_i u_i ≤ l`, `u ∈ {±1}^{d-1}`.
    TopOrthant(Vec<i64>),
    /// `F^v_{(d-1)+}(l,t)`: `F_{(d-1)+}` with `0 ≤ x_i v_i ≤ l`, `v ∈ {±1}^{d-2}`.
    SidePlusOrthant(Vec<i64>),
}

pub fn boundary_set(d: usize, kind: &BoundaryKind, l: i64, t: i64) -> Result<Vec<Vertex>, LatticeError> {
    check_dim(d)?;
    if l < 1 || t < 0 {
        return Err(LatticeError::InvalidRegion(format!(
            "boundary set needs l >= 1 and t >= 0, got l={l}, t={t}"
        )));
    }
    let orthant_ok = |signs: &Vec<i64>, len: usize| {
        signs.len() == len && signs.iter().all(|s| *s == 1 || *s == -1)
    };
    match kind {
        BoundaryKind::TopOrthant(u) if !orthant_ok(u, d - 1) => {
            return Err(LatticeError::InvalidRegion(format!("orthant u must be ±1 of length {}", d - 1)))
        }
        BoundaryKind::SidePlusOrthant(v) if !orthant_ok(v, d - 2) => {
            return Err(LatticeError::InvalidRegion(format!("orthant v must be ±1 of length {}", d - 2)))
        }
        _ => {}
    }
    let window = Window::centered(d, l, t)?;
    let side = |c: &[i64]| c[..d - 1].iter().any(|x| x.abs() == l);
    let within = |c: &[i64], signs: &[i64]| {
        signs.iter().zip(c).all(|(s, x)| (0..=l).contains(&(x * s)))
    };
    Ok(window
        .vertices()
        .into_iter()
        .filter(|v| {
            let c = v.coords();
            match kind {
                BoundaryKind::Top => c[d - 1] == t,
                BoundaryKind::Side => side(c),
                BoundaryKind::SidePlus => side(c) && c[d - 2] == l,
                BoundaryKind::TopOrthant(u) => c[d - 1] == t && within(c, u),
                BoundaryKind::SidePlusOrthant(v) => side(c) && c[d - 2] == l && within(c, v),
            }
        })
        .collect())
}

/// Seed block `B([-r, r]^{d-1} × 0)`.
pub fn seed_block(d: usize, r: i64) -> Result<Vec<Vertex>, LatticeError> {
    if r < 0 {
        return Err(LatticeError::InvalidRegion(format!("seed radius must be >= 0, got {r}")));
    }
    Ok(Window::centered(d, r, 0)?.vertices())
}

/// Dense lexicographic numbering of the edges with both endpoints in a window.
#[derive(Clone, Debug)]
pub struct EdgeIndexer {
    window: Window,
    edges: Vec<EdgeKey>,
    rank: HashMap<EdgeKey, usize>,
}

impl EdgeIndexer {
    pub fn new(window: &Window) -> Self {
        let d = window.dim();
        let mut edges = Vec::new();
        for v in window.vertices() {
            for up in 0..1u32 << (d - 1) {
                let key = EdgeKey {
                    lower: v,
                    up_signs: up,
                };
                if window.contains(&key.upper()) {
                    edges.push(key);
                }
            }
        }
        let rank = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        Self {
            window: *window,
            edges,
            rank,
        }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn index_of(&self, edge: &EdgeKey) -> Option<usize> {
        self.rank.get(edge).copied()
    }

    pub fn edge_at(&self, index: usize) -> Option<&EdgeKey> {
        self.edges.get(index)
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }
}
