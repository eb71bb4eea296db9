//! Quivers, seeds and mutation.
//!
//! Mutation follows the quiver rule. The geometric exchange relation of a flip
//! (geodesics and concave chains of the pseudoquadrangle) is computed separately by
//! [`exchange_relation`] and only used to cross-check.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Chord, CsPair, Dn, Face, FaceKind, GeometryError, Piece, Pseudotriangulation, Side, Site};
use crate::laurent::{default_names, LaurentError, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusterError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("Laurent phenomenon violated: {0}")]
    Laurent(#[from] LaurentError),
    #[error("unknown quiver node {0}")]
    UnknownNode(String),
    #[error("pair {0} received two different variables")]
    Inconsistent(String),
    #[error("d-vector of {pair} is {denominator:?} but crossing numbers give {crossings:?}")]
    DVectorMismatch { pair: String, denominator: Vec<u32>, crossings: Vec<u32> },
    #[error("no pseudoquadrangle found for the flip of {0}")]
    NoPseudoquadrangle(String),
}

pub type Result<T> = std::result::Result<T, ClusterError>;

/// Arcs between individual chords, before folding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleQuiver {
    pub nodes: Vec<Chord>,
    pub arcs: Vec<(Chord, Chord)>,
}

/// Arcs between pairs, with multiplicities. No loops, no 2-cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub nodes: Vec<CsPair>,
    pub arcs: BTreeMap<(CsPair, CsPair), u32>,
}

fn face_sides_chords(f: &Face) -> Vec<Vec<Chord>> {
    f.sides()
        .iter()
        .map(|s| {
            s.iter()
                .filter_map(|p| match p {
                    Piece::Chord(c) => Some(*c),
                    _ => None,
                })
                .collect()
        })
        .collect()
}

/// Every face sends all chords of one side to all chords of the next side clockwise;
/// the two degenerate faces are replaced by a clockwise 4-cycle on the central chords.
pub fn double_quiver(dn: &Dn, t: &Pseudotriangulation) -> DoubleQuiver {
    let mut arcs = vec![];
    let mut degenerate = false;
    for f in dn.faces(t) {
        if f.kind == FaceKind::DegenerateCentral {
            degenerate = true;
            continue;
        }
        let sides = face_sides_chords(&f);
        let k = sides.len();
        for i in 0..k {
            for &a in &sides[i] {
                for &b in &sides[(i + k - 1) % k] {
                    arcs.push((a, b));
                }
            }
        }
    }
    if degenerate {
        let mut cent = t.central_chords();
        cent.sort_by_key(|&c| dn.touch_key(c));
        cent.reverse();
        for i in 0..cent.len() {
            arcs.push((cent[i], cent[(i + 1) % cent.len()]));
        }
    }
    DoubleQuiver { nodes: t.chords(), arcs }
}

/// Folds by the central symmetry: duplicates collapse, opposite arcs cancel.
pub fn fold(dn: &Dn, dq: &DoubleQuiver) -> Quiver {
    let mut set = BTreeSet::new();
    for &(a, b) in &dq.arcs {
        let (pa, pb) = (dn.pair_of(a), dn.pair_of(b));
        if pa != pb {
            set.insert((pa, pb));
        }
    }
    let arcs = set.iter().filter(|(a, b)| !set.contains(&(*b, *a))).map(|&k| (k, 1)).collect();
    let mut nodes: Vec<CsPair> = dq.nodes.iter().map(|&c| dn.pair_of(c)).collect();
    nodes.sort();
    nodes.dedup();
    Quiver { nodes, arcs }
}

pub fn quiver(dn: &Dn, t: &Pseudotriangulation) -> Quiver {
    fold(dn, &double_quiver(dn, t))
}

impl Quiver {
    pub fn multiplicity(&self, a: &CsPair, b: &CsPair) -> u32 {
        self.arcs.get(&(*a, *b)).copied().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.arcs.values().all(|&m| m == 1)
    }

    pub fn in_arcs(&self, k: &CsPair) -> Vec<(CsPair, u32)> {
        self.arcs.iter().filter(|((_, b), _)| b == k).map(|((a, _), &m)| (*a, m)).collect()
    }

    pub fn out_arcs(&self, k: &CsPair) -> Vec<(CsPair, u32)> {
        self.arcs.iter().filter(|((a, _), _)| a == k).map(|((_, b), &m)| (*b, m)).collect()
    }

    /// Standard mutation at `k`.
    pub fn mutate(&self, k: &CsPair) -> Result<Quiver> {
        if !self.nodes.contains(k) {
            return Err(ClusterError::UnknownNode(k.to_string()));
        }
        let mut raw: BTreeMap<(CsPair, CsPair), i64> = BTreeMap::new();
        for (&(a, b), &m) in &self.arcs {
            let key = if a == *k || b == *k { (b, a) } else { (a, b) };
            *raw.entry(key).or_default() += m as i64;
        }
        for (i, mi) in self.in_arcs(k) {
            for (j, mj) in self.out_arcs(k) {
                if i != j {
                    *raw.entry((i, j)).or_default() += (mi * mj) as i64;
                }
            }
        }
        let mut arcs = BTreeMap::new();
        for (&(a, b), &m) in &raw {
            let net = m - raw.get(&(b, a)).copied().unwrap_or(0);
            if net > 0 {
                arcs.insert((a, b), net as u32);
            }
        }
        Ok(Quiver { nodes: self.nodes.clone(), arcs })
    }

    pub fn relabel(&self, old: &CsPair, new: &CsPair) -> Quiver {
        let f = |p: CsPair| if p == *old { *new } else { p };
        let mut nodes: Vec<CsPair> = self.nodes.iter().map(|&p| f(p)).collect();
        nodes.sort();
        Quiver { nodes, arcs: self.arcs.iter().map(|(&(a, b), &m)| ((f(a), f(b)), m)).collect() }
    }

    /// Arcs as index pairs into `nodes`, repeated by multiplicity.
    pub fn index_arcs(&self) -> Vec<(usize, usize)> {
        let pos = |p: &CsPair| self.nodes.iter().position(|x| x == p).unwrap();
        self.arcs
            .iter()
            .flat_map(|((a, b), &m)| std::iter::repeat_n((pos(a), pos(b)), m as usize))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nodes": self.nodes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "pairs": self.nodes,
            "arcs": self.index_arcs(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for (i, p) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  {} [label=\"{}\"];\n", i, p));
        }
        for (a, b) in self.index_arcs() {
            s.push_str(&format!("  {} -> {};\n", a, b));
        }
        s.push_str("}\n");
        s
    }
}

/// A cluster: pseudotriangulation, one Laurent polynomial per pair, and the quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub t: Pseudotriangulation,
    pub vars: BTreeMap<CsPair, LaurentPoly>,
    pub quiver: Quiver,
    pub names: Vec<String>,
}

impl Seed {
    /// Variables `x1..xn` attached to the pairs in canonical order.
    pub fn initial(dn: &Dn, t: &Pseudotriangulation) -> Seed {
        Self::initial_named(dn, t, default_names(t.n))
    }

    pub fn initial_named(dn: &Dn, t: &Pseudotriangulation, names: Vec<String>) -> Seed {
        let n = t.n;
        let vars = t.pairs.iter().enumerate().map(|(i, &p)| (p, LaurentPoly::var(n, i))).collect();
        Seed { t: t.clone(), vars, quiver: quiver(dn, t), names }
    }

    /// Initial seed with caller-chosen variables, e.g. to match a printed labelling.
    pub fn with_assignment(dn: &Dn, t: &Pseudotriangulation, order: &[CsPair], names: Vec<String>) -> Result<Seed> {
        let n = t.n;
        let mut vars = BTreeMap::new();
        for (i, p) in order.iter().enumerate() {
            if !t.contains(p) {
                return Err(GeometryError::PairNotPresent(p.to_string()).into());
            }
            vars.insert(*p, LaurentPoly::var(n, i));
        }
        if vars.len() != n {
            return Err(GeometryError::InvalidPseudotriangulation("assignment must cover every pair once".into()).into());
        }
        Ok(Seed { t: t.clone(), vars, quiver: quiver(dn, t), names })
    }

    pub fn var(&self, p: &CsPair) -> &LaurentPoly {
        &self.vars[p]
    }

    /// Variables keyed by pair name, in text, fraction and structured form.
    pub fn variables_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.vars
                .iter()
                .map(|(p, x)| {
                    serde_json::json!({
                        "pair": p,
                        "name": p.to_string(),
                        "text": x.to_string_with(&self.names),
                        "fraction": x.to_fraction_string(&self.names),
                        "json": x.to_json(&self.names),
                    })
                })
                .collect(),
        )
    }

    /// Seed dump: pseudotriangulation, variables, quiver with arcs as index pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pseudotriangulation": self.t,
            "names": self.names,
            "vars": self.variables_json(),
            "quiver": self.quiver.to_json(),
        })
    }

    /// The exchange binomial for `chi`: product over incoming arcs plus product over outgoing arcs.
    pub fn exchange_binomial(&self, chi: &CsPair) -> LaurentPoly {
        let n = self.t.n;
        let prod = |arcs: Vec<(CsPair, u32)>| {
            arcs.iter().fold(LaurentPoly::one(n), |acc, (p, m)| &acc * &self.vars[p].pow(*m))
        };
        &prod(self.quiver.in_arcs(chi)) + &prod(self.quiver.out_arcs(chi))
    }

    /// Flip `chi` and apply the exchange relation.
    pub fn mutate(&self, dn: &Dn, chi: &CsPair) -> Result<(Seed, CsPair)> {
        let (t2, new) = dn.flip(&self.t, chi)?;
        let x = self.exchange_binomial(chi).div_exact(&self.vars[chi])?;
        let mut vars = self.vars.clone();
        vars.remove(chi);
        vars.insert(new, x);
        let quiver = self.quiver.mutate(chi)?.relabel(chi, &new);
        Ok((Seed { t: t2, vars, quiver, names: self.names.clone() }, new))
    }
}

/// Every seed reachable by flips, in canonical order of the pseudotriangulations.
/// Variables reached along different paths must agree.
pub fn all_seeds(dn: &Dn, s0: &Seed) -> Result<Vec<Seed>> {
    let mut seen: BTreeMap<Pseudotriangulation, Seed> = BTreeMap::new();
    let mut table: HashMap<CsPair, LaurentPoly> = HashMap::new();
    for (p, x) in &s0.vars {
        table.insert(*p, x.clone());
    }
    seen.insert(s0.t.clone(), s0.clone());
    let mut queue = VecDeque::from([s0.clone()]);
    while let Some(s) = queue.pop_front() {
        for chi in &s.t.pairs {
            let (s2, new) = s.mutate(dn, chi)?;
            match table.get(&new) {
                Some(x) if *x != s2.vars[&new] => return Err(ClusterError::Inconsistent(new.to_string())),
                Some(_) => {}
                None => {
                    table.insert(new, s2.vars[&new].clone());
                }
            }
            if let Some(prev) = seen.get(&s2.t) {
                if prev.vars != s2.vars || prev.quiver != s2.quiver {
                    return Err(ClusterError::Inconsistent(s2.t.to_string()));
                }
            } else {
                seen.insert(s2.t.clone(), s2.clone());
                queue.push_back(s2);
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// One Laurent polynomial per pair of the configuration.
pub fn all_cluster_variables(dn: &Dn, s0: &Seed) -> Result<BTreeMap<CsPair, LaurentPoly>> {
    let mut out = BTreeMap::new();
    for s in all_seeds(dn, s0)? {
        for (p, x) in s.vars {
            out.entry(p).or_insert(x);
        }
    }
    Ok(out)
}

/// Crossing numbers against the seed pairs, checked against the actual denominator.
pub fn d_vector(dn: &Dn, s0: &Seed, delta: &CsPair, x: &LaurentPoly) -> Result<Vec<u32>> {
    let order = variable_order(s0);
    let crossings: Vec<u32> = order.iter().map(|th| dn.crossing_number(th, delta) as u32).collect();
    let denominator = x.denominator_vector()?;
    if denominator != crossings {
        return Err(ClusterError::DVectorMismatch { pair: delta.to_string(), denominator, crossings });
    }
    Ok(crossings)
}

/// Seed pairs listed by the index of the variable they carry.
pub fn variable_order(s0: &Seed) -> Vec<CsPair> {
    let mut order: Vec<(usize, CsPair)> = s0
        .vars
        .iter()
        .map(|(p, x)| {
            let (m, _) = x.terms().next().expect("seed variable");
            (m.iter().position(|&e| e == 1).expect("seed variable is a single variable"), *p)
        })
        .collect();
    order.sort();
    order.into_iter().map(|(_, p)| p).collect()
}

/// Which of the four exchange templates a flip instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FlipShape {
    /// Both geodesics and all chains are single straight chords or boundary.
    StraightStraight,
    /// A central chord is involved but nothing wraps around the disk.
    StraightCentral,
    /// One concave chain runs along the disk through two central chords.
    BentSide,
    /// A geodesic runs along the disk; the relation carries a common factor.
    DoubleCentral,
}

/// The relation `P(p,r) P(q,s) = P(p,q) P(r,s) + P(p,s) P(q,r)` of one flip, read
/// off the pseudoquadrangle.
#[derive(Clone, Debug, Serialize)]
pub struct ExchangeRelation {
    pub removed: Chord,
    pub added: Chord,
    /// Corners of the pseudoquadrangle in boundary order.
    pub corners: Vec<Site>,
    /// Chords on the geodesic through the removed chord, then through the added one.
    pub geodesics: [Vec<Chord>; 2],
    /// Concave chains between consecutive corners: chords and boundary edges.
    pub chains: Vec<Vec<Piece>>,
    pub shape: FlipShape,
}

fn touch_between(dn: &Dn, c: Chord, from: Site, to: Site) -> bool {
    // an arc step runs clockwise from `from` to `to`, covering the ccw interval (to, from)
    let (Site::Touch(a), Site::Touch(b)) = (from, to) else { return false };
    if a == b {
        return true;
    }
    let (k, lo, hi) = (dn.touch_key(c), dn.touch_key(b), dn.touch_key(a));
    if lo < hi {
        lo < k && k < hi
    } else {
        k > lo || k < hi
    }
}

/// Geodesic from the polygon end of `c` through `c`, continuing tangentially along
/// the disk until the next corner. `None` if `c` does not sit inside `quad`.
fn geodesic(dn: &Dn, quad: &Face, c: Chord) -> Option<(Site, Site, Vec<Chord>)> {
    match c {
        Chord::Straight { p, q } => Some((Site::Vertex(p), Site::Vertex(q), vec![c])),
        Chord::Central { p, side } => {
            let m = quad.steps.len();
            let k = (0..m).find(|&i| {
                let s = &quad.steps[i];
                s.piece == Piece::Arc && touch_between(dn, c, s.from, s.to)
            })?;
            let mut walked = vec![c];
            let end = match side {
                Side::L => {
                    let mut i = k;
                    while !quad.steps[i].corner {
                        i = (i + m - 1) % m;
                        if let Piece::Chord(x) = quad.steps[i].piece {
                            walked.push(x);
                        }
                    }
                    quad.steps[i].from
                }
                Side::R => {
                    let mut i = (k + 1) % m;
                    while !quad.steps[i].corner {
                        if let Piece::Chord(x) = quad.steps[i].piece {
                            walked.push(x);
                        }
                        i = (i + 1) % m;
                    }
                    quad.steps[i].from
                }
            };
            Some((Site::Vertex(p), end, walked))
        }
    }
}

/// Reads the exchange relation of flipping `chi` in `t` off the pseudoquadrangle
/// obtained by deleting one representative of `chi`.
pub fn exchange_relation(dn: &Dn, t: &Pseudotriangulation, chi: &CsPair) -> Result<ExchangeRelation> {
    let (_, new) = dn.flip(t, chi)?;
    let e = chi.rep;
    let faces = dn.faces(t);
    let beside = faces
        .iter()
        .find(|f| f.chords().contains(&e))
        .ok_or_else(|| ClusterError::NoPseudoquadrangle(chi.to_string()))?;
    let anchor = *beside
        .steps
        .iter()
        .find(|s| s.piece != Piece::Arc && s.piece != Piece::Chord(e))
        .ok_or_else(|| ClusterError::NoPseudoquadrangle(chi.to_string()))?;
    let rest: Vec<Chord> = t.chords().into_iter().filter(|&c| c != e).collect();
    let quad = dn
        .trace_faces(&rest)
        .into_iter()
        .find(|f| f.steps.iter().any(|s| s.piece == anchor.piece && s.from == anchor.from && s.to == anchor.to))
        .ok_or_else(|| ClusterError::NoPseudoquadrangle(chi.to_string()))?;
    let corners = quad.corners();
    let no_quad = || ClusterError::NoPseudoquadrangle(chi.to_string());
    if corners.len() != 4 {
        return Err(no_quad());
    }
    let opposite = |a: Site, b: Site| -> Option<(usize, usize)> {
        let i = corners.iter().position(|&x| x == a)?;
        let j = corners.iter().position(|&x| x == b)?;
        ((j + 4 - i) % 4 == 2).then_some((i, j))
    };
    let (ge_a, ge_b, ge) = geodesic(dn, &quad, e).ok_or_else(no_quad)?;
    let (ei, ej) = opposite(ge_a, ge_b).ok_or_else(no_quad)?;
    let mut found = None;
    for f in new.chords() {
        if let Some((a, b, g)) = geodesic(dn, &quad, f) {
            if let Some((fi, fj)) = opposite(a, b) {
                if ![ei, ej].contains(&fi) && ![ei, ej].contains(&fj) {
                    found = Some((f, g));
                }
            }
        }
    }
    let (f, gf) = found.ok_or_else(no_quad)?;
    let idx: Vec<usize> = (0..quad.steps.len()).filter(|&i| quad.steps[i].corner).collect();
    let m = quad.steps.len();
    let chains: Vec<Vec<Piece>> = (0..4)
        .map(|a| {
            let (mut i, stop) = (idx[a], idx[(a + 1) % 4]);
            let mut out = vec![];
            while i != stop {
                if quad.steps[i].piece != Piece::Arc {
                    out.push(quad.steps[i].piece);
                }
                i = (i + 1) % m;
            }
            out
        })
        .collect();
    let central_in_chain = chains
        .iter()
        .any(|ch| ch.iter().filter(|p| matches!(p, Piece::Chord(Chord::Central { .. }))).count() >= 2);
    let shape = if ge.len() + gf.len() > 2 {
        FlipShape::DoubleCentral
    } else if central_in_chain {
        FlipShape::BentSide
    } else if e.is_central() || f.is_central() {
        FlipShape::StraightCentral
    } else {
        FlipShape::StraightStraight
    };
    Ok(ExchangeRelation { removed: e, added: f, corners, geodesics: [ge, gf], chains, shape })
}

impl ExchangeRelation {
    fn product(pieces: impl Iterator<Item = Piece>, weight: &dyn Fn(Piece) -> LaurentPoly, nvars: usize) -> LaurentPoly {
        pieces.fold(LaurentPoly::one(nvars), |acc, p| &acc * &weight(p))
    }

    /// Product over the two geodesics.
    pub fn lhs(&self, nvars: usize, weight: &dyn Fn(Piece) -> LaurentPoly) -> LaurentPoly {
        let pieces = self.geodesics.iter().flatten().map(|&c| Piece::Chord(c));
        Self::product(pieces, weight, nvars)
    }

    /// Sum over the two ways of pairing opposite chains.
    pub fn rhs(&self, nvars: usize, weight: &dyn Fn(Piece) -> LaurentPoly) -> LaurentPoly {
        let c = |k: usize| Self::product(self.chains[k].iter().copied(), weight, nvars);
        &(&c(0) * &c(2)) + &(&c(1) * &c(3))
    }

    /// Solves the relation for the added chord, which must not be weighted yet.
    pub fn solve_added(&self, nvars: usize, weight: &dyn Fn(Piece) -> LaurentPoly) -> Result<LaurentPoly> {
        let known = self.geodesics[0].iter().chain(self.geodesics[1].iter().skip(1)).map(|&c| Piece::Chord(c));
        let known = Self::product(known, weight, nvars);
        Ok(self.rhs(nvars, weight).div_exact(&known)?)
    }
}

/// Weighting by pair variables with boundary edges set to 1.
pub fn pair_weights<'a>(dn: &'a Dn, vars: &'a BTreeMap<CsPair, LaurentPoly>, nvars: usize) -> impl Fn(Piece) -> LaurentPoly + 'a {
    move |p| match p {
        Piece::Chord(c) => vars[&dn.pair_of(c)].clone(),
        _ => LaurentPoly::one(nvars),
    }
}
