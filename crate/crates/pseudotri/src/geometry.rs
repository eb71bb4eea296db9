//! The punctured 2n-gon: chords, crossings, pseudotriangulations, faces and flips.
//!
//! Vertices are numbered 0..2n counterclockwise, vertex `p` sits at angle `pi*p/n`
//! and `p + n` is its antipode. A central chord leaves a vertex and touches the small
//! central disk; `Side::L` touches at `angle(p) + (90deg - eps)`, `Side::R` at
//! `angle(p) - (90deg - eps)`. Everything below is purely combinatorial.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("rank must be at least 3 (got n = {0})")]
    RankTooSmall(usize),
    #[error("vertex {vertex} is out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not a chord of the configuration: {0}")]
    InvalidChord(String),
    #[error("not a pseudotriangulation: {0}")]
    InvalidPseudotriangulation(String),
    #[error("pair {0} is not in the pseudotriangulation")]
    PairNotPresent(String),
    #[error("flip of {pair} has {count} candidate replacements")]
    FlipNotUnique { pair: String, count: usize },
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// Which way a central chord wraps around the disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// A chord in canonical form. Straight chords store the endpoint from which the
/// short arc runs counterclockwise, so `(q - p) mod 2n` lies in `2..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Chord {
    Straight { p: usize, q: usize },
    Central { p: usize, side: Side },
}

impl Chord {
    pub fn is_central(&self) -> bool {
        matches!(self, Chord::Central { .. })
    }

    /// Polygon endpoints (one for a central chord).
    pub fn endpoints(&self) -> Vec<usize> {
        match *self {
            Chord::Straight { p, q } => vec![p, q],
            Chord::Central { p, .. } => vec![p],
        }
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Chord::Straight { p, q } => write!(f, "[{},{}]", p, q),
            Chord::Central { p, side } => write!(f, "{}{:?}", p, side),
        }
    }
}

/// Parses `[p,q]`, `p,q`, `pL`, `pR` and `p^L` style names. The result still has
/// to be canonicalised by [`Dn::canonical`].
impl FromStr for Chord {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Chord> {
        let t = s.trim();
        let bad = || GeometryError::InvalidChord(s.to_string());
        if let Some(last) = t.chars().last() {
            if last == 'L' || last == 'R' {
                let side = if last == 'L' { Side::L } else { Side::R };
                let num = t[..t.len() - 1].trim_end_matches('^').trim();
                let p = num.parse::<usize>().map_err(|_| bad())?;
                return Ok(Chord::Central { p, side });
            }
        }
        let inner = t.trim_start_matches('[').trim_end_matches(']');
        let mut it = inner.split(',').map(|x| x.trim().parse::<usize>());
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(p)), Some(Ok(q)), None) => Ok(Chord::Straight { p, q }),
            _ => Err(bad()),
        }
    }
}

/// A chord together with its image under the central symmetry. `rep < partner`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CsPair {
    pub rep: Chord,
    pub partner: Chord,
}

impl CsPair {
    pub fn chords(&self) -> [Chord; 2] {
        [self.rep, self.partner]
    }

    pub fn is_central(&self) -> bool {
        self.rep.is_central()
    }
}

impl fmt::Display for CsPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// A maximal centrally symmetric noncrossing set: `n` pairs, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pseudotriangulation {
    pub n: usize,
    pub pairs: Vec<CsPair>,
}

impl Pseudotriangulation {
    pub fn chords(&self) -> Vec<Chord> {
        self.pairs.iter().flat_map(|p| p.chords()).collect()
    }

    pub fn contains(&self, pair: &CsPair) -> bool {
        self.pairs.binary_search(pair).is_ok()
    }

    pub fn central_chords(&self) -> Vec<Chord> {
        self.chords().into_iter().filter(|c| c.is_central()).collect()
    }
}

impl fmt::Display for Pseudotriangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.pairs.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Classification {
    /// Both chiralities appear, all four central chords sit at `p` and its antipode.
    Central { p: usize },
    TypeLeft,
    TypeRight,
}

impl Classification {
    /// The side a pseudotriangulation of type left or right is opened along.
    pub fn side(&self) -> Option<Side> {
        match self {
            Classification::TypeLeft => Some(Side::L),
            Classification::TypeRight => Some(Side::R),
            Classification::Central { .. } => None,
        }
    }
}

/// Where a face boundary passes: a polygon vertex or the tangency point of a central chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Site {
    Vertex(usize),
    Touch(Chord),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Piece {
    Chord(Chord),
    /// Boundary edge from `p` to `p + 1`.
    Edge(usize),
    /// A stretch of the disk boundary.
    Arc,
}

/// One step of a face boundary, traversed with the face on the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub piece: Piece,
    pub from: Site,
    pub to: Site,
    /// Whether `from` is a convex corner of the face.
    pub corner: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceKind {
    DegenerateCentral,
    Central,
    Internal,
    Ordinary,
}

/// A bounded face of a noncrossing chord set, other than the disk itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub steps: Vec<Step>,
    pub kind: FaceKind,
}

impl Face {
    pub fn corners(&self) -> Vec<Site> {
        self.steps.iter().filter(|s| s.corner).map(|s| s.from).collect()
    }

    /// Boundary pieces between consecutive corners, in traversal order.
    pub fn sides(&self) -> Vec<Vec<Piece>> {
        let idx: Vec<usize> = (0..self.steps.len()).filter(|&i| self.steps[i].corner).collect();
        let m = self.steps.len();
        idx.iter()
            .enumerate()
            .map(|(j, &a)| {
                let b = idx[(j + 1) % idx.len()];
                let mut out = vec![];
                let mut i = a;
                loop {
                    out.push(self.steps[i].piece);
                    i = (i + 1) % m;
                    if i == b {
                        break;
                    }
                }
                out
            })
            .collect()
    }

    pub fn chords(&self) -> Vec<Chord> {
        self.steps
            .iter()
            .filter_map(|s| match s.piece {
                Piece::Chord(c) => Some(c),
                _ => None,
            })
            .collect()
    }

    pub fn has_cusp(&self) -> bool {
        self.steps.iter().any(|s| s.corner && matches!(s.from, Site::Touch(_)))
    }

    pub fn touches_disk(&self) -> bool {
        self.steps.iter().any(|s| s.piece == Piece::Arc)
    }

    /// Faces with a corner on the disk, including the degenerate ones.
    pub fn is_central(&self) -> bool {
        matches!(self.kind, FaceKind::Central | FaceKind::DegenerateCentral)
    }
}

/// The configuration for a fixed rank `n`, with the pair table and pair compatibility cached.
#[derive(Clone, Debug)]
pub struct Dn {
    n: usize,
    pairs: Vec<CsPair>,
    index: HashMap<Chord, usize>,
    compatible: Vec<Vec<bool>>,
}

impl Dn {
    pub fn new(n: usize) -> Result<Dn> {
        if n < 3 {
            return Err(GeometryError::RankTooSmall(n));
        }
        let mut dn = Dn { n, pairs: vec![], index: HashMap::new(), compatible: vec![] };
        let mut pairs: BTreeSet<CsPair> = BTreeSet::new();
        for c in dn.all_chords() {
            pairs.insert(dn.pair_of(c));
        }
        dn.pairs = pairs.into_iter().collect();
        for (i, p) in dn.pairs.iter().enumerate() {
            dn.index.insert(p.rep, i);
            dn.index.insert(p.partner, i);
        }
        let m = dn.pairs.len();
        let mut compatible = vec![vec![true; m]; m];
        for i in 0..m {
            for j in 0..m {
                compatible[i][j] = !dn.pairs_cross(&dn.pairs[i], &dn.pairs[j]);
            }
        }
        dn.compatible = compatible;
        Ok(dn)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn antipode(&self, p: usize) -> usize {
        (p + self.n) % (2 * self.n)
    }

    /// All centrally symmetric pairs in canonical order; there are `n^2` of them.
    pub fn all_cs_pairs(&self) -> &[CsPair] {
        &self.pairs
    }

    pub fn all_chords(&self) -> Vec<Chord> {
        let m = 2 * self.n;
        let mut out = vec![];
        for p in 0..m {
            for d in 2..self.n {
                out.push(Chord::Straight { p, q: (p + d) % m });
            }
        }
        for p in 0..m {
            out.push(Chord::Central { p, side: Side::L });
            out.push(Chord::Central { p, side: Side::R });
        }
        out
    }

    /// Canonical straight chord between two vertices, in either order.
    pub fn straight(&self, p: usize, q: usize) -> Result<Chord> {
        let m = 2 * self.n;
        let (p, q) = (p % m, q % m);
        let d = (q + m - p) % m;
        let (p, q, d) = if d > self.n { (q, p, m - d) } else { (p, q, d) };
        if d < 2 || d >= self.n {
            return Err(GeometryError::InvalidChord(format!("[{},{}]", p, q)));
        }
        Ok(Chord::Straight { p, q })
    }

    pub fn central(&self, p: usize, side: Side) -> Chord {
        Chord::Central { p: p % (2 * self.n), side }
    }

    /// Validates vertex ranges and normalises the orientation of straight chords.
    pub fn canonical(&self, c: Chord) -> Result<Chord> {
        let m = 2 * self.n;
        for v in c.endpoints() {
            if v >= m {
                return Err(GeometryError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        match c {
            Chord::Straight { p, q } => self.straight(p, q),
            c => Ok(c),
        }
    }

    pub fn partner(&self, c: Chord) -> Chord {
        match c {
            Chord::Straight { p, q } => Chord::Straight { p: self.antipode(p), q: self.antipode(q) },
            Chord::Central { p, side } => Chord::Central { p: self.antipode(p), side },
        }
    }

    pub fn pair_of(&self, c: Chord) -> CsPair {
        let d = self.partner(c);
        if c < d {
            CsPair { rep: c, partner: d }
        } else {
            CsPair { rep: d, partner: c }
        }
    }

    pub fn pair_index(&self, pair: &CsPair) -> usize {
        self.index[&pair.rep]
    }

    pub fn pair_at(&self, i: usize) -> CsPair {
        self.pairs[i]
    }

    pub fn compatible(&self, i: usize, j: usize) -> bool {
        self.compatible[i][j]
    }

    /// Rotation by `pi/n`, which also exchanges the two chiralities.
    pub fn rotate(&self, c: Chord) -> Chord {
        let m = 2 * self.n;
        match c {
            Chord::Straight { p, q } => Chord::Straight { p: (p + 1) % m, q: (q + 1) % m },
            Chord::Central { p, side } => Chord::Central { p: (p + 1) % m, side: side.other() },
        }
    }

    fn strictly_inside_short_arc(&self, p: usize, q: usize, r: usize) -> bool {
        let m = 2 * self.n;
        let d = (q + m - p) % m;
        let e = (r + m - p) % m;
        0 < e && e < d
    }

    /// The crossing predicate on individual chords.
    pub fn crosses(&self, a: Chord, b: Chord) -> bool {
        if a == b {
            return false;
        }
        let m = 2 * self.n;
        match (a, b) {
            (Chord::Straight { p, q }, Chord::Straight { p: r, q: s }) => {
                if p == r || p == s || q == r || q == s {
                    return false;
                }
                self.strictly_inside_short_arc(p, q, r) != self.strictly_inside_short_arc(p, q, s)
            }
            (Chord::Straight { p, q }, Chord::Central { p: r, .. })
            | (Chord::Central { p: r, .. }, Chord::Straight { p, q }) => self.strictly_inside_short_arc(p, q, r),
            (Chord::Central { p, side: s1 }, Chord::Central { p: q, side: s2 }) => {
                if s1 == s2 {
                    return false;
                }
                let (l, r) = if s1 == Side::L { (p, q) } else { (q, p) };
                let d = (r + m - l) % m;
                1 <= d && d < self.n
            }
        }
    }

    pub fn pairs_cross(&self, a: &CsPair, b: &CsPair) -> bool {
        a.chords().iter().any(|&x| b.chords().iter().any(|&y| self.crosses(x, y)))
    }

    /// Number of chords of `theta` crossed by one representative of `delta`.
    pub fn crossing_number(&self, theta: &CsPair, delta: &CsPair) -> usize {
        theta.chords().iter().filter(|&&t| self.crosses(t, delta.rep)).count()
    }

    /// Builds a pseudotriangulation from pairs in any order, checking size and noncrossing.
    pub fn pseudotriangulation(&self, pairs: &[CsPair]) -> Result<Pseudotriangulation> {
        let mut ps: Vec<CsPair> = pairs
            .iter()
            .map(|p| self.canonical(p.rep).map(|c| self.pair_of(c)))
            .collect::<Result<_>>()?;
        ps.sort();
        ps.dedup();
        if ps.len() != self.n {
            return Err(GeometryError::InvalidPseudotriangulation(format!(
                "expected {} distinct pairs, got {}",
                self.n,
                ps.len()
            )));
        }
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                if self.pairs_cross(&ps[i], &ps[j]) {
                    return Err(GeometryError::InvalidPseudotriangulation(format!(
                        "{} crosses {}",
                        ps[i], ps[j]
                    )));
                }
            }
        }
        Ok(Pseudotriangulation { n: self.n, pairs: ps })
    }

    pub fn from_chords(&self, chords: &[Chord]) -> Result<Pseudotriangulation> {
        let pairs: Vec<CsPair> = chords
            .iter()
            .map(|&c| self.canonical(c).map(|c| self.pair_of(c)))
            .collect::<Result<_>>()?;
        self.pseudotriangulation(&pairs)
    }

    pub fn is_pseudotriangulation(&self, pairs: &[CsPair]) -> bool {
        let mut ps = pairs.to_vec();
        ps.sort();
        ps.dedup();
        ps.len() == self.n
            && ps.len() == pairs.len()
            && (0..ps.len()).all(|i| (i + 1..ps.len()).all(|j| !self.pairs_cross(&ps[i], &ps[j])))
    }

    /// All central chords on one side.
    pub fn star(&self, side: Side) -> Pseudotriangulation {
        let pairs: Vec<CsPair> = (0..self.n).map(|p| self.pair_of(self.central(p, side))).collect();
        self.pseudotriangulation(&pairs).expect("star is a pseudotriangulation")
    }

    /// Both central pairs at `p` plus the fan of straight chords from `p`.
    pub fn central_at(&self, p: usize) -> Pseudotriangulation {
        let mut pairs = vec![self.pair_of(self.central(p, Side::L)), self.pair_of(self.central(p, Side::R))];
        for d in 2..self.n {
            pairs.push(self.pair_of(self.straight(p, p + d).unwrap()));
        }
        self.pseudotriangulation(&pairs).expect("central fan is a pseudotriangulation")
    }

    pub fn classify(&self, t: &Pseudotriangulation) -> Classification {
        let cent = t.central_chords();
        let has = |s: Side| cent.iter().any(|c| matches!(c, Chord::Central { side, .. } if *side == s));
        match (has(Side::L), has(Side::R)) {
            (true, true) => {
                let p = match cent[0] {
                    Chord::Central { p, .. } => p % self.n,
                    _ => unreachable!(),
                };
                Classification::Central { p }
            }
            (true, false) => Classification::TypeLeft,
            _ => Classification::TypeRight,
        }
    }

    /// Replaces `chi` by the unique other pair compatible with the rest.
    pub fn flip(&self, t: &Pseudotriangulation, chi: &CsPair) -> Result<(Pseudotriangulation, CsPair)> {
        if !t.contains(chi) {
            return Err(GeometryError::PairNotPresent(chi.to_string()));
        }
        let rest: Vec<usize> = t.pairs.iter().filter(|p| *p != chi).map(|p| self.pair_index(p)).collect();
        let own: Vec<usize> = t.pairs.iter().map(|p| self.pair_index(p)).collect();
        let cands: Vec<usize> = (0..self.pairs.len())
            .filter(|i| !own.contains(i) && rest.iter().all(|&j| self.compatible[*i][j]))
            .collect();
        if cands.len() != 1 {
            return Err(GeometryError::FlipNotUnique { pair: chi.to_string(), count: cands.len() });
        }
        let new = self.pairs[cands[0]];
        let mut pairs: Vec<CsPair> = t.pairs.iter().filter(|p| *p != chi).copied().collect();
        pairs.push(new);
        pairs.sort();
        Ok((Pseudotriangulation { n: self.n, pairs }, new))
    }

    /// Position of a tangency point on the disk, in units of `pi/(2n)`, with ties
    /// broken so that `pL` comes just before the coincident `(p+n)R`.
    pub fn touch_key(&self, c: Chord) -> (usize, u8) {
        let m = 4 * self.n;
        match c {
            Chord::Central { p, side: Side::L } => ((2 * p + self.n) % m, 0),
            Chord::Central { p, side: Side::R } => ((2 * p + m - self.n) % m, 1),
            Chord::Straight { .. } => panic!("straight chords do not touch the disk"),
        }
    }

    /// Faces of the pseudotriangulation: exactly `2n` pseudotriangles.
    pub fn faces(&self, t: &Pseudotriangulation) -> Vec<Face> {
        let faces = self.trace_faces(&t.chords());
        debug_assert_eq!(faces.len(), 2 * self.n);
        faces
    }

    /// Traces the bounded faces of any noncrossing set of chords, skipping the disk.
    pub fn trace_faces(&self, chords: &[Chord]) -> Vec<Face> {
        let n = self.n;
        let m = 2 * n;
        let mut edges: Vec<(Site, Site, Piece)> = vec![];
        for p in 0..m {
            edges.push((Site::Vertex(p), Site::Vertex((p + 1) % m), Piece::Edge(p)));
        }
        for &c in chords {
            match c {
                Chord::Straight { p, q } => edges.push((Site::Vertex(p), Site::Vertex(q), Piece::Chord(c))),
                Chord::Central { p, .. } => edges.push((Site::Vertex(p), Site::Touch(c), Piece::Chord(c))),
            }
        }
        let mut cent: Vec<Chord> = chords.iter().copied().filter(|c| c.is_central()).collect();
        cent.sort_by_key(|&c| self.touch_key(c));
        for i in 0..cent.len() {
            let (a, b) = (cent[i], cent[(i + 1) % cent.len()]);
            edges.push((Site::Touch(a), Site::Touch(b), Piece::Arc));
        }
        // dart 2e runs along edge e, dart 2e+1 against it; arc darts 2e go counterclockwise
        let tail = |d: usize| if d % 2 == 0 { edges[d / 2].0 } else { edges[d / 2].1 };
        let head = |d: usize| if d % 2 == 0 { edges[d / 2].1 } else { edges[d / 2].0 };
        let key_at = |d: usize| -> usize {
            match (tail(d), head(d), edges[d / 2].2) {
                (Site::Vertex(p), Site::Vertex(q), _) => 4 * ((q + m - p) % m),
                (Site::Vertex(_), Site::Touch(Chord::Central { side, .. }), _) => {
                    if side == Side::L {
                        4 * n - 1
                    } else {
                        4 * n + 1
                    }
                }
                // at a tangency point the counterclockwise order is chord, arc-ccw, arc-cw
                (Site::Touch(_), _, Piece::Arc) => {
                    if d % 2 == 0 {
                        1
                    } else {
                        2
                    }
                }
                _ => 0,
            }
        };
        let mut rot: BTreeMap<Site, Vec<usize>> = BTreeMap::new();
        for d in 0..2 * edges.len() {
            rot.entry(tail(d)).or_default().push(d);
        }
        for ds in rot.values_mut() {
            ds.sort_by_key(|&d| key_at(d));
        }
        let next = |d: usize| -> usize {
            let r = d ^ 1;
            let lst = &rot[&head(d)];
            let i = lst.iter().position(|&x| x == r).unwrap();
            lst[(i + lst.len() - 1) % lst.len()]
        };
        let mut seen = vec![false; 2 * edges.len()];
        let mut out = vec![];
        for d0 in 0..2 * edges.len() {
            if seen[d0] {
                continue;
            }
            let mut cyc = vec![];
            let mut d = d0;
            while !seen[d] {
                seen[d] = true;
                cyc.push(d);
                d = next(d);
            }
            let pieces: Vec<Piece> = cyc.iter().map(|&d| edges[d / 2].2).collect();
            if pieces.iter().all(|p| matches!(p, Piece::Edge(_))) && cyc[0] % 2 == 1 {
                continue; // outer face, traversed clockwise
            }
            if pieces.iter().all(|p| *p == Piece::Arc) {
                continue; // the disk
            }
            let arc_dir = |d: usize| -> u8 {
                if edges[d / 2].2 != Piece::Arc {
                    0
                } else if d % 2 == 0 {
                    1 // counterclockwise
                } else {
                    2
                }
            };
            let steps: Vec<Step> = (0..cyc.len())
                .map(|i| {
                    let d = cyc[i];
                    let prev = cyc[(i + cyc.len() - 1) % cyc.len()];
                    let corner = match tail(d) {
                        Site::Vertex(_) => true,
                        Site::Touch(Chord::Central { side, .. }) => {
                            let (kd, kr) = (arc_dir(d), arc_dir(prev ^ 1));
                            // the cusp sits between the chord and the arc it is tangent to
                            match side {
                                Side::L => kd == 2 && kr == 0,
                                Side::R => kd == 0 && kr == 1,
                            }
                        }
                        Site::Touch(_) => unreachable!(),
                    };
                    Step { piece: edges[d / 2].2, from: tail(d), to: head(d), corner }
                })
                .collect();
            let kind = face_kind(&steps);
            out.push(Face { steps, kind });
        }
        out
    }

    /// Breadth-first closure of the flip graph from the left star.
    pub fn enumerate(&self, jobs: usize) -> FlipGraph {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
        let start = self.star(Side::L);
        let mut seen: BTreeSet<Pseudotriangulation> = BTreeSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let found: Vec<Vec<Pseudotriangulation>> = pool.install(|| {
                frontier
                    .par_iter()
                    .map(|t| t.pairs.iter().map(|chi| self.flip(t, chi).expect("flip").0).collect())
                    .collect()
            });
            let mut next = vec![];
            for t in found.into_iter().flatten() {
                if seen.insert(t.clone()) {
                    next.push(t);
                }
            }
            frontier = next;
        }
        let nodes: Vec<Pseudotriangulation> = seen.into_iter().collect();
        let lookup: HashMap<&Pseudotriangulation, usize> = nodes.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut edges = vec![];
        for (i, t) in nodes.iter().enumerate() {
            for chi in &t.pairs {
                let (t2, new) = self.flip(t, chi).expect("flip");
                edges.push(FlipEdge { from: i, to: lookup[&t2], removed: *chi, added: new });
            }
        }
        FlipGraph { n: self.n, nodes, edges }
    }
}

fn face_kind(steps: &[Step]) -> FaceKind {
    let chords: Vec<Chord> = steps
        .iter()
        .filter_map(|s| match s.piece {
            Piece::Chord(c) => Some(c),
            _ => None,
        })
        .collect();
    let only_disk = steps.iter().all(|s| matches!(s.piece, Piece::Chord(Chord::Central { .. }) | Piece::Arc));
    if only_disk && chords.len() == 2 {
        if let (Chord::Central { p: a, .. }, Chord::Central { p: b, .. }) = (chords[0], chords[1]) {
            if a == b {
                return FaceKind::DegenerateCentral;
            }
        }
    }
    if steps.iter().any(|s| s.corner && matches!(s.from, Site::Touch(_))) {
        FaceKind::Central
    } else if steps.iter().all(|s| !matches!(s.piece, Piece::Edge(_))) {
        FaceKind::Internal
    } else {
        FaceKind::Ordinary
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipEdge {
    pub from: usize,
    pub to: usize,
    pub removed: CsPair,
    pub added: CsPair,
}

/// Nodes are numbered by the sorted order of their canonical pair lists. Every
/// flip appears once from each side.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlipGraph {
    pub n: usize,
    pub nodes: Vec<Pseudotriangulation>,
    pub edges: Vec<FlipEdge>,
}

impl FlipGraph {
    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.from == i).count()
    }

    pub fn key(t: &Pseudotriangulation) -> String {
        t.pairs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("graph flips_D{} {{\n", self.n);
        for (i, t) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  {} [label=\"{}\"];\n", i, Self::key(t)));
        }
        for e in self.edges.iter().filter(|e| e.from < e.to) {
            s.push_str(&format!("  {} -- {} [label=\"{} / {}\"];\n", e.from, e.to, e.removed, e.added));
        }
        s.push_str("}\n");
        s
    }

    /// JSON adjacency: canonical keys plus neighbour index lists.
    pub fn to_json(&self) -> serde_json::Value {
        let adjacency: Vec<Vec<usize>> = (0..self.nodes.len())
            .map(|i| self.edges.iter().filter(|e| e.from == i).map(|e| e.to).collect())
            .collect();
        serde_json::json!({
            "n": self.n,
            "nodes": self.nodes.iter().map(Self::key).collect::<Vec<_>>(),
            "pseudotriangulations": self.nodes,
            "adjacency": adjacency,
        })
    }
}
