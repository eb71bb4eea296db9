//! Cluster variables as weighted perfect matching sums.
//!
//! Collapsing the disk to a point and unrolling the polygon around it turns a
//! pseudotriangulation into a periodic triangulation of a fan. Cutting that fan at a
//! central pseudotriangle gives a triangulated convex polygon, the opening. Vertices
//! of the opening are the collapsed centre and integer lifts `k` of polygon vertices
//! (`k mod 2n`). Central chords of the opening's side become radii from the centre;
//! a central chord of the other side at `p` becomes the segment `[k, k+n]` and is
//! weighted by the product of both central variables at `p`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::cluster::Seed;
use crate::geometry::{Chord, Classification, CsPair, Dn, GeometryError, Pseudotriangulation, Side};
use crate::laurent::{LaurentError, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("{0} crosses the cut of this opening")]
    InvalidOpening(String),
    #[error("no opening avoids {0}")]
    NoValidOpening(String),
    #[error("malformed opening: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, MatchingError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OVertex {
    Center,
    Lift(i64),
}

/// A triangulated convex polygon with weighted sides and diagonals.
#[derive(Clone, Debug, Serialize)]
pub struct Opening {
    pub n: usize,
    /// Central chords of this side are radii.
    pub side: Side,
    /// First and last lift on the polygon; the polygon is `Center, lo, ..., hi`.
    pub lo: i64,
    pub hi: i64,
    pub vertices: Vec<OVertex>,
    pub triangles: Vec<[usize; 3]>,
    /// Polygon sides and diagonals, keyed by sorted vertex indices.
    pub weights: BTreeMap<(usize, usize), LaurentPoly>,
    pub diagonals: Vec<(usize, usize)>,
    /// The central chords bounding the central pseudotriangle that was cut open.
    pub sigma: Vec<Chord>,
}

/// Vertex-triangle incidence graph; an edge is weighted by the side of the triangle opposite the vertex.
#[derive(Clone, Debug, Serialize)]
pub struct MatchingGraph {
    pub black: Vec<OVertex>,
    pub white: Vec<[usize; 3]>,
    pub edges: Vec<(usize, usize, LaurentPoly)>,
}

type ChordWeight<'a> = &'a dyn Fn(Chord) -> LaurentPoly;
type EdgeWeight<'a> = &'a dyn Fn(usize) -> LaurentPoly;

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Opening {
    fn index(&self, v: OVertex) -> Option<usize> {
        match v {
            OVertex::Center => Some(0),
            OVertex::Lift(k) if (self.lo..=self.hi).contains(&k) => Some((k - self.lo) as usize + 1),
            _ => None,
        }
    }

    fn build(
        dn: &Dn,
        t: &Pseudotriangulation,
        side: Side,
        lo: i64,
        hi: i64,
        sigma: Vec<Chord>,
        chord_w: ChordWeight,
        edge_w: EdgeWeight,
    ) -> Result<Opening> {
        let n = dn.n();
        let m = 2 * n as i64;
        let modv = |k: i64| k.rem_euclid(m) as usize;
        let mut vertices = vec![OVertex::Center];
        vertices.extend((lo..=hi).map(OVertex::Lift));
        let mut o = Opening {
            n,
            side,
            lo,
            hi,
            vertices,
            triangles: vec![],
            weights: BTreeMap::new(),
            diagonals: vec![],
            sigma,
        };
        let ix = |k: i64| (k - lo) as usize + 1;
        let chords = t.chords();
        let mut diag: BTreeMap<(usize, usize), LaurentPoly> = BTreeMap::new();
        for k in lo..=hi {
            for &c in &chords {
                match c {
                    Chord::Straight { p, q } => {
                        let len = (q + 2 * n - p) % (2 * n);
                        if modv(k) == p && k + len as i64 <= hi {
                            diag.insert(key(ix(k), ix(k + len as i64)), chord_w(c));
                        }
                    }
                    Chord::Central { p, side: s } if p == modv(k) => {
                        if s == side {
                            diag.insert(key(0, ix(k)), chord_w(c));
                        } else if k + n as i64 <= hi {
                            let same = chord_w(Chord::Central { p, side });
                            diag.insert(key(ix(k), ix(k + n as i64)), &chord_w(c) * &same);
                        }
                    }
                    _ => {}
                }
            }
        }
        for k in lo..hi {
            o.weights.insert(key(ix(k), ix(k + 1)), edge_w(modv(k)));
        }
        for end in [ix(lo), ix(hi)] {
            let w = diag
                .remove(&key(0, end))
                .ok_or_else(|| MatchingError::Malformed("cut is not along a radius".into()))?;
            o.weights.insert(key(0, end), w);
        }
        let v = o.vertices.len();
        if diag.len() + 3 != v {
            return Err(MatchingError::Malformed(format!("{} diagonals in a {}-gon", diag.len(), v)));
        }
        o.diagonals = diag.keys().copied().collect();
        o.weights.extend(diag);
        for a in 0..v {
            for b in a + 1..v {
                for c in b + 1..v {
                    let w = &o.weights;
                    if w.contains_key(&(a, b)) && w.contains_key(&(a, c)) && w.contains_key(&(b, c)) {
                        o.triangles.push([a, b, c]);
                    }
                }
            }
        }
        if o.triangles.len() + 2 != v {
            return Err(MatchingError::Malformed(format!("{} triangles in a {}-gon", o.triangles.len(), v)));
        }
        Ok(o)
    }

    pub fn weight(&self, a: usize, b: usize) -> &LaurentPoly {
        &self.weights[&key(a, b)]
    }

    /// Product of the weights of all internal diagonals.
    pub fn diagonal_product(&self) -> LaurentPoly {
        let nv = self.weights.values().next().map(|w| w.nvars()).unwrap_or(0);
        self.diagonals.iter().fold(LaurentPoly::one(nv), |acc, &(a, b)| &acc * self.weight(a, b))
    }

    pub fn incidence_graph(&self) -> MatchingGraph {
        let mut edges = vec![];
        for (w, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                let (b, o1, o2) = (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]);
                edges.push((b, w, self.weight(o1, o2).clone()));
            }
        }
        MatchingGraph { black: self.vertices.clone(), white: self.triangles.clone(), edges }
    }

    /// The two black vertices removed for a chord, or `None` when no lift of the
    /// chord fits inside the opening.
    pub fn deletion_vertices(&self, c: Chord) -> Option<(usize, usize)> {
        let n = self.n as i64;
        let m = 2 * n;
        for k in self.lo..=self.hi {
            let at = |p: usize| k.rem_euclid(m) == p as i64;
            let pair = match c {
                Chord::Straight { p, q } if at(p) => {
                    let len = (q as i64 - p as i64).rem_euclid(m);
                    Some((OVertex::Lift(k), OVertex::Lift(k + len)))
                }
                Chord::Central { p, side } if side == self.side && at(p) => Some((OVertex::Lift(k), OVertex::Center)),
                Chord::Central { p, side } if side != self.side && k.rem_euclid(n) == (p as i64) % n => {
                    Some((OVertex::Lift(k), OVertex::Lift(k + n)))
                }
                _ => None,
            };
            if let Some((a, b)) = pair {
                if let (Some(a), Some(b)) = (self.index(a), self.index(b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Matching sum of the graph with two black vertices removed.
    pub fn w_value(&self, a: usize, b: usize) -> LaurentPoly {
        self.incidence_graph().matching_sum(&[a, b])
    }

    /// `w` divided by the product of internal diagonal weights.
    pub fn m_value_at(&self, a: usize, b: usize) -> Result<LaurentPoly> {
        let d = self.diagonal_product();
        debug_assert!(d.is_monomial() || d.len() > 1);
        Ok(self.w_value(a, b).div_exact(&d)?)
    }

    pub fn m_value(&self, c: Chord) -> Result<LaurentPoly> {
        let (a, b) = self.deletion_vertices(c).ok_or_else(|| MatchingError::InvalidOpening(c.to_string()))?;
        self.m_value_at(a, b)
    }

    pub fn to_dot(&self) -> String {
        let g = self.incidence_graph();
        let names = crate::laurent::default_names(self.weights.values().next().map(|w| w.nvars()).unwrap_or(0));
        let label = |v: &OVertex| match v {
            OVertex::Center => "O".to_string(),
            OVertex::Lift(k) => k.to_string(),
        };
        let mut s = String::from("graph opening {\n");
        for (i, v) in g.black.iter().enumerate() {
            s.push_str(&format!("  b{} [label=\"{}\", style=filled, fillcolor=black, fontcolor=white];\n", i, label(v)));
        }
        for (i, tri) in g.white.iter().enumerate() {
            let l: Vec<String> = tri.iter().map(|&j| label(&g.black[j])).collect();
            s.push_str(&format!("  w{} [label=\"{}\", shape=box];\n", i, l.join(",")));
        }
        for (b, w, x) in &g.edges {
            s.push_str(&format!("  b{} -- w{} [label=\"{}\"];\n", b, w, x.to_string_with(&names)));
        }
        s.push_str("}\n");
        s
    }
}

impl MatchingGraph {
    /// Sum over perfect matchings after deleting the given black vertices: branch on
    /// a remaining black vertex of least degree, memoised on the remaining vertex sets.
    pub fn matching_sum(&self, deleted: &[usize]) -> LaurentPoly {
        let nv = self.edges.first().map(|e| e.2.nvars()).unwrap_or(0);
        let mut adj: Vec<Vec<(usize, &LaurentPoly)>> = vec![vec![]; self.black.len()];
        for (b, w, x) in &self.edges {
            adj[*b].push((*w, x));
        }
        let mut black: u64 = (1u64 << self.black.len()) - 1;
        for &d in deleted {
            black &= !(1u64 << d);
        }
        let white: u64 = (1u64 << self.white.len()) - 1;
        let mut memo: HashMap<(u64, u64), LaurentPoly> = HashMap::new();
        fn rec(
            black: u64,
            white: u64,
            adj: &[Vec<(usize, &LaurentPoly)>],
            nv: usize,
            memo: &mut HashMap<(u64, u64), LaurentPoly>,
        ) -> LaurentPoly {
            if black.count_ones() != white.count_ones() {
                return LaurentPoly::zero(nv);
            }
            if black == 0 {
                return LaurentPoly::one(nv);
            }
            if let Some(v) = memo.get(&(black, white)) {
                return v.clone();
            }
            let pick = (0..adj.len())
                .filter(|&b| black >> b & 1 == 1)
                .min_by_key(|&b| adj[b].iter().filter(|(w, _)| white >> w & 1 == 1).count())
                .unwrap();
            let mut total = LaurentPoly::zero(nv);
            for &(w, x) in &adj[pick] {
                if white >> w & 1 == 1 {
                    let sub = rec(black & !(1 << pick), white & !(1 << w), adj, nv, memo);
                    if !sub.is_zero() {
                        total = &total + &(x * &sub);
                    }
                }
            }
            memo.insert((black, white), total.clone());
            total
        }
        rec(black, white, &adj, nv, &mut memo)
    }
}

/// One opening per central pseudotriangle; a central pseudotriangulation is opened
/// along each of its two central chords at each degenerate face.
pub fn openings_weighted(dn: &Dn, t: &Pseudotriangulation, chord_w: ChordWeight, edge_w: EdgeWeight) -> Result<Vec<Opening>> {
    let n = dn.n() as i64;
    let m = 2 * n;
    let mut out = vec![];
    match dn.classify(t) {
        Classification::Central { p } => {
            for side in [Side::L, Side::R] {
                for base in [p as i64, p as i64 + n] {
                    let b = base as usize % (2 * dn.n());
                    let sigma = vec![dn.central(b, Side::L), dn.central(b, Side::R)];
                    out.push(Opening::build(dn, t, side, base, base + m, sigma, chord_w, edge_w)?);
                }
            }
        }
        cls => {
            let side = cls.side().unwrap();
            let mut ps: Vec<i64> = t
                .central_chords()
                .iter()
                .map(|c| match c {
                    Chord::Central { p, .. } => *p as i64,
                    _ => unreachable!(),
                })
                .collect();
            ps.sort();
            for i in 0..ps.len() {
                let a = ps[i];
                let mut b = ps[(i + 1) % ps.len()];
                if b <= a {
                    b += m;
                }
                let sigma = vec![dn.central(a as usize, side), dn.central((b % m) as usize, side)];
                out.push(Opening::build(dn, t, side, b, a + m, sigma, chord_w, edge_w)?);
            }
        }
    }
    Ok(out)
}

/// Openings weighted by the seed variables, boundary edges weighted 1.
pub fn openings(dn: &Dn, seed: &Seed) -> Result<Vec<Opening>> {
    let nv = seed.t.n;
    let cw = |c: Chord| seed.vars[&dn.pair_of(c)].clone();
    let ew = |_: usize| LaurentPoly::one(nv);
    openings_weighted(dn, &seed.t, &cw, &ew)
}

/// How a variable was obtained from an opening.
#[derive(Clone, Debug, Serialize)]
pub struct MatchingResult {
    pub opening: usize,
    pub chord: Chord,
    pub deleted: (usize, usize),
    /// Matching sum.
    pub w: LaurentPoly,
    /// `w` over the diagonal product.
    pub m: LaurentPoly,
    /// The cluster variable itself.
    pub x: LaurentPoly,
}

/// The first opening, in canonical order, that some representative of `delta` fits into.
pub fn variable_via_matching_in(dn: &Dn, ops: &[Opening], delta: &CsPair) -> Result<MatchingResult> {
    for (i, o) in ops.iter().enumerate() {
        for c in delta.chords() {
            let Some((a, b)) = o.deletion_vertices(c) else { continue };
            let w = o.w_value(a, b);
            let m = w.div_exact(&o.diagonal_product())?;
            let x = match c {
                Chord::Central { p, side } if side != o.side => {
                    let same = o.m_value(dn.central(p, o.side))?;
                    m.div_exact(&same)?
                }
                _ => m.clone(),
            };
            return Ok(MatchingResult { opening: i, chord: c, deleted: (a, b), w, m, x });
        }
    }
    Err(MatchingError::NoValidOpening(delta.to_string()))
}

pub fn variable_via_matching(dn: &Dn, seed: &Seed, delta: &CsPair) -> Result<MatchingResult> {
    variable_via_matching_in(dn, &openings(dn, seed)?, delta)
}
