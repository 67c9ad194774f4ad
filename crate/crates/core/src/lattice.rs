//! Lattice-path combinatorics on Z^2: slopes, convexity, areas,
//! convexifications and minimal paths.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("zero segment")]
    ZeroSegment,
    #[error("segments {0} and {1} are collinear")]
    CollinearPair(Segment, Segment),
    #[error("segment {0} lies outside region {1:?}")]
    SegmentOutsideRegion(Segment, Region),
    #[error("pair ({0}, {1}) is already convex")]
    AlreadyConvex(Segment, Segment),
    #[error("empty degree window")]
    EmptyWindow,
    #[error("no minimal path for {0}")]
    NoMinimalPath(Segment),
}

/// A nonzero lattice vector `(p, q)`: rank `p`, degree `q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i64; 2]", try_from = "[i64; 2]")]
pub struct Segment {
    pub p: i64,
    pub q: i64,
}

impl From<Segment> for [i64; 2] {
    fn from(s: Segment) -> Self {
        [s.p, s.q]
    }
}

impl TryFrom<[i64; 2]> for Segment {
    type Error = LatticeError;
    fn try_from(v: [i64; 2]) -> Result<Self, LatticeError> {
        Segment::new(v[0], v[1])
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Segment {
    pub fn new(p: i64, q: i64) -> Result<Self, LatticeError> {
        if p == 0 && q == 0 {
            Err(LatticeError::ZeroSegment)
        } else {
            Ok(Self { p, q })
        }
    }

    /// Panics on the zero vector; for literals known to be nonzero.
    pub fn of(p: i64, q: i64) -> Self {
        Self::new(p, q).expect("nonzero segment")
    }

    pub fn plus(self, o: Segment) -> Result<Segment, LatticeError> {
        Segment::new(self.p + o.p, self.q + o.q)
    }

    pub fn minus(self, o: Segment) -> Result<Segment, LatticeError> {
        Segment::new(self.p - o.p, self.q - o.q)
    }

    pub fn deg(self) -> i64 {
        self.p.gcd(&self.q)
    }

    /// The primitive vector on the same ray.
    pub fn primitive(self) -> Segment {
        let g = self.deg();
        Segment {
            p: self.p / g,
            q: self.q / g,
        }
    }

    pub fn scaled(self, k: i64) -> Result<Segment, LatticeError> {
        Segment::new(self.p * k, self.q * k)
    }

    /// Quadrant class along the branch (-pi/2, 3pi/2].
    fn half(self) -> u8 {
        match (self.p.signum(), self.q.signum()) {
            (1, _) => 0,
            (0, 1) => 1,
            (-1, _) => 2,
            _ => 3,
        }
    }
}

pub fn det(x: Segment, y: Segment) -> i64 {
    x.p * y.q - x.q * y.p
}

/// Compare direction angles in (-pi/2, 3pi/2] exactly.
pub fn slope_cmp(x: Segment, y: Segment) -> Ordering {
    let (hx, hy) = (x.half(), y.half());
    if hx != hy {
        return hx.cmp(&hy);
    }
    match hx {
        // within an open half-plane the angle grows with det
        0 | 2 => 0.cmp(&det(x, y)),
        _ => Ordering::Equal,
    }
}

pub fn deg(x: Segment) -> i64 {
    x.deg()
}

/// sign(det(x, y)) for non-collinear x, y.
pub fn epsilon(x: Segment, y: Segment) -> Result<i64, LatticeError> {
    match det(x, y).signum() {
        0 => Err(LatticeError::CollinearPair(x, y)),
        s => Ok(s),
    }
}

/// Lattice points strictly inside the triangle (0, x, x+y), by Pick's formula.
pub fn interior_count(x: Segment, y: Segment) -> Result<u64, LatticeError> {
    let twice_area = det(x, y).abs();
    if twice_area == 0 {
        return Err(LatticeError::CollinearPair(x, y));
    }
    let boundary = x.deg() + y.deg() + (x.p + y.p).gcd(&(x.q + y.q));
    Ok(((twice_area - boundary + 2) / 2) as u64)
}

/// The five regions of Z^2 used to index subalgebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Gt,
    Lt,
    Plus,
    Minus,
    All,
}

impl Region {
    pub fn contains(self, x: Segment) -> bool {
        match self {
            Region::Gt => x.p > 0,
            Region::Lt => x.p < 0,
            Region::Plus => x.p > 0 || (x.p == 0 && x.q > 0),
            Region::Minus => x.p < 0 || (x.p == 0 && x.q < 0),
            Region::All => true,
        }
    }

    /// Whether the slope of `x` lies in the region's convexity window.
    fn slope_admissible(self, x: Segment) -> bool {
        match self {
            Region::Gt => x.half() == 0,
            Region::Lt => x.half() == 2,
            Region::Plus => x.half() <= 1,
            Region::Minus => x.half() >= 2,
            Region::All => true,
        }
    }
}

/// Inclusive bounds on the degree component of each segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self, LatticeError> {
        if lo > hi {
            Err(LatticeError::EmptyWindow)
        } else {
            Ok(Self { lo, hi })
        }
    }

    pub fn admits(self, x: Segment) -> bool {
        self.lo <= x.q && x.q <= self.hi
    }

    pub fn contains(self, d: i64) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn iter(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// A path, stored as its canonical sequence: inside each maximal run of
/// equal slope the segments are sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    segments: Vec<Segment>,
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Path {
    pub fn new(segments: Vec<Segment>) -> Self {
        let mut segments = segments;
        let mut i = 0;
        while i < segments.len() {
            let mut j = i + 1;
            while j < segments.len() && slope_cmp(segments[j - 1], segments[j]) == Ordering::Equal {
                j += 1;
            }
            segments[i..j].sort();
            i = j;
        }
        Self { segments }
    }

    pub fn single(x: Segment) -> Self {
        Self { segments: vec![x] }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// |p|, the sum of the segments; `None` for the empty path or zero sum.
    pub fn weight(&self) -> (i64, i64) {
        self.segments.iter().fold((0, 0), |(a, b), s| (a + s.p, b + s.q))
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut v = self.segments.clone();
        v.extend_from_slice(&other.segments);
        Path::new(v)
    }

    /// Replace segments `i, i+1` by `q`.
    pub fn splice(&self, i: usize, q: &Path) -> Path {
        let mut v = self.segments[..i].to_vec();
        v.extend_from_slice(q.segments());
        v.extend_from_slice(&self.segments[i + 2..]);
        Path::new(v)
    }

    /// The convex rearrangement p#.
    pub fn convex_rearrangement(&self) -> Path {
        let mut v = self.segments.clone();
        v.sort_by(|a, b| slope_cmp(*a, *b).then(a.cmp(b)));
        Path { segments: v }
    }

    pub fn in_region(&self, region: Region) -> bool {
        self.segments.iter().all(|s| region.contains(*s))
    }

    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let mut v = vec![(0, 0)];
        let mut cur = (0, 0);
        for s in &self.segments {
            cur = (cur.0 + s.p, cur.1 + s.q);
            v.push(cur);
        }
        v
    }
}

/// Convexity with respect to the slope window of `region`.
pub fn is_convex(p: &Path, region: Region) -> Result<bool, LatticeError> {
    for s in p.segments() {
        if !region.contains(*s) {
            return Err(LatticeError::SegmentOutsideRegion(*s, region));
        }
    }
    let monotone = p
        .segments()
        .windows(2)
        .all(|w| slope_cmp(w[0], w[1]) != Ordering::Greater);
    Ok(monotone && p.segments().iter().all(|s| region.slope_admissible(*s)))
}

/// Area between `p` and its convex rearrangement, as the sum of |det| over
/// inverted pairs.
pub fn area(p: &Path) -> Result<Ratio<i64>, LatticeError> {
    for s in p.segments() {
        if !Region::Plus.contains(*s) {
            return Err(LatticeError::SegmentOutsideRegion(*s, Region::Plus));
        }
    }
    let segs = p.segments();
    let mut total = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if slope_cmp(segs[i], segs[j]) == Ordering::Greater {
                total += det(segs[i], segs[j]).abs();
            }
        }
    }
    Ok(Ratio::from_integer(total))
}

/// Lattice points of the triangle (a, b, c), closed or open.
pub fn triangle_points(a: (i64, i64), b: (i64, i64), c: (i64, i64), closed: bool) -> Vec<(i64, i64)> {
    let orient = |u: (i64, i64), v: (i64, i64), w: (i64, i64)| (v.0 - u.0) * (w.1 - u.1) - (v.1 - u.1) * (w.0 - u.0);
    let total = orient(a, b, c);
    if total == 0 {
        return Vec::new();
    }
    let sg = total.signum();
    let (x0, x1) = (a.0.min(b.0).min(c.0), a.0.max(b.0).max(c.0));
    let (y0, y1) = (a.1.min(b.1).min(c.1), a.1.max(b.1).max(c.1));
    let mut out = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            let pt = (x, y);
            let o = [orient(a, b, pt) * sg, orient(b, c, pt) * sg, orient(c, a, pt) * sg];
            let inside = if closed { o.iter().all(|&v| v >= 0) } else { o.iter().all(|&v| v > 0) };
            if inside {
                out.push(pt);
            }
        }
    }
    out
}

/// All convex chains from the origin to `target` through `points`.
fn convex_chains(points: &[(i64, i64)], target: (i64, i64), admit: &dyn Fn(Segment) -> bool) -> BTreeSet<Path> {
    fn go(
        cur: (i64, i64),
        last: Option<Segment>,
        acc: &mut Vec<Segment>,
        points: &[(i64, i64)],
        target: (i64, i64),
        admit: &dyn Fn(Segment) -> bool,
        out: &mut BTreeSet<Path>,
    ) {
        if cur == target {
            out.insert(Path::new(acc.clone()));
            return;
        }
        for &pt in points {
            let Ok(s) = Segment::new(pt.0 - cur.0, pt.1 - cur.1) else { continue };
            if !admit(s) {
                continue;
            }
            if let Some(l) = last {
                if slope_cmp(l, s) == Ordering::Greater {
                    continue;
                }
            }
            // progress towards the target along the first coordinate or, for
            // vertical moves, along the second
            if s.p < 0 || (s.p == 0 && (target.1 - cur.1) * s.q <= 0) {
                continue;
            }
            acc.push(s);
            go(pt, Some(s), acc, points, target, admit, out);
            acc.pop();
        }
    }
    let mut out = BTreeSet::new();
    go((0, 0), None, &mut Vec::new(), points, target, admit, &mut out);
    out
}

/// Convex paths replacing the nonconvex pair (x, y): all convex chains from
/// the origin to x+y inside the closed triangle (0, y, x+y).
pub fn local_convexifications(x: Segment, y: Segment, window: Option<Window>) -> Result<Vec<Path>, LatticeError> {
    for s in [x, y] {
        if !Region::Plus.contains(s) {
            return Err(LatticeError::SegmentOutsideRegion(s, Region::Plus));
        }
    }
    if slope_cmp(x, y) != Ordering::Greater {
        return Err(LatticeError::AlreadyConvex(x, y));
    }
    let w = (x.p + y.p, x.q + y.q);
    let pts = triangle_points((0, 0), (y.p, y.q), w, true);
    let admit = |s: Segment| Region::Plus.contains(s) && window.is_none_or(|win| win.admits(s));
    let mut out: Vec<Path> = convex_chains(&pts, w, &admit).into_iter().collect();
    let whole = Path::single(Segment::of(w.0, w.1));
    if !out.contains(&whole) {
        out.push(whole);
        out.sort();
    }
    Ok(out)
}

/// Convex paths of the given weight with segments in `region` and degree
/// components in `window`, in lexicographic order of canonical sequences.
pub fn enumerate_convex(weight: Segment, region: Region, window: Window) -> Result<Vec<Path>, LatticeError> {
    if !region.contains(weight) {
        return Err(LatticeError::SegmentOutsideRegion(weight, region));
    }
    let max_len = (weight.p.abs() + weight.q.abs()) as usize + 2 * (window.hi - window.lo + 1) as usize;
    // candidate segments in (slope, lex) order
    let pmax = weight.p.abs().max(1);
    let mut cands: Vec<Segment> = Vec::new();
    for p in -pmax..=pmax {
        for q in window.lo..=window.hi {
            if let Ok(s) = Segment::new(p, q) {
                if region.contains(s) && region.slope_admissible(s) {
                    cands.push(s);
                }
            }
        }
    }
    cands.sort_by(|a, b| slope_cmp(*a, *b).then(a.cmp(b)));
    let mut out = Vec::new();
    let mut acc = Vec::new();
    fn go(
        start: usize,
        rem: (i64, i64),
        cands: &[Segment],
        acc: &mut Vec<Segment>,
        out: &mut Vec<Path>,
        max_len: usize,
        region: Region,
    ) {
        if rem == (0, 0) && !acc.is_empty() {
            out.push(Path::new(acc.clone()));
            return;
        }
        if acc.len() >= max_len {
            return;
        }
        for (i, &s) in cands.iter().enumerate().skip(start) {
            let next = (rem.0 - s.p, rem.1 - s.q);
            // ranks of the remaining segments share the sign of the region
            let ok = match region {
                Region::Gt | Region::Plus => next.0 >= 0,
                Region::Lt | Region::Minus => next.0 <= 0,
                Region::All => true,
            };
            if !ok {
                continue;
            }
            acc.push(s);
            go(i, next, cands, acc, out, max_len, region);
            acc.pop();
        }
    }
    go(0, (weight.p, weight.q), &cands, &mut acc, &mut out, max_len, region);
    out.sort();
    out.dedup();
    Ok(out)
}

/// Points of L', the closest lattice line above the line through 0 and z,
/// strictly between the vertical lines through 0 and z.
fn lprime_points(z: Segment) -> Vec<Segment> {
    let w = z.primitive();
    // solve w.p * y2 - w.q * y1 = 1
    let e = i64::extended_gcd(&w.p, &(-w.q));
    let (mut a, mut b) = (e.x, e.y);
    if e.gcd < 0 {
        a = -a;
        b = -b;
    }
    // base point: y2 = a, y1 = b
    let (base1, base2) = (b, a);
    let mut out = Vec::new();
    // y = base + k w, need 0 < y1 < z.p
    let k_lo = num_integer::div_floor(-base1, w.p) - 1;
    let k_hi = num_integer::div_floor(z.p - base1, w.p) + 1;
    for k in k_lo..=k_hi {
        let y1 = base1 + k * w.p;
        let y2 = base2 + k * w.q;
        if 0 < y1 && y1 < z.p {
            out.push(Segment::of(y1, y2));
        }
    }
    out
}

/// The minimal paths (x, z - x) of weight z, sorted by x.
pub fn minimal_paths(z: Segment) -> Result<Vec<(Segment, Segment)>, LatticeError> {
    if !Region::Gt.contains(z) {
        return Err(LatticeError::SegmentOutsideRegion(z, Region::Gt));
    }
    let mut out: Vec<(Segment, Segment)> = lprime_points(z)
        .into_iter()
        .map(|x| (x, z.minus(x).expect("x is strictly inside the strip")))
        .collect();
    out.sort();
    if out.is_empty() {
        return Err(LatticeError::NoMinimalPath(z));
    }
    Ok(out)
}

/// The minimal-path predicate: x above the line through z, strictly inside
/// the vertical strip, both legs primitive and the triangle empty.
pub fn is_minimal_pair(x: Segment, z: Segment) -> bool {
    if !(0 < x.p && x.p < z.p) || det(z, x) <= 0 {
        return false;
    }
    let y = Segment::of(z.p - x.p, z.q - x.q);
    x.deg() == 1 && y.deg() == 1 && interior_count(x, y) == Ok(0)
}
