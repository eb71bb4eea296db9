//! Subword complexes of type D and their dictionary with pseudotriangulations.
//!
//! The Coxeter group of type D_n acts on `{±1, ..., ±n}` by signed permutations
//! with an even number of sign changes. Generator `0` sends the first two entries
//! `(a, b)` to `(-b, -a)`; generator `i >= 1` swaps entries `i` and `i + 1`. Both
//! `0` and `1` are joined to `2` in the Dynkin diagram.
//!
//! Word positions are 1-based throughout, as in the usual pictures of the sorting network.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Chord, CsPair, Dn, GeometryError, Pseudotriangulation, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0:?} is not a Coxeter element of rank {1}")]
    NotCoxeterElement(Vec<usize>, usize),
    #[error("position {0} out of range")]
    PositionOutOfRange(usize),
    #[error("rotation disagrees with the chord at position {0}")]
    Inconsistent(usize),
}

pub type Result<T> = std::result::Result<T, CoxeterError>;

/// A signed permutation in one-line notation: entry `i` is the image of `i + 1`.
pub type SignedPerm = Vec<i32>;

pub fn identity(n: usize) -> SignedPerm {
    (1..=n as i32).collect()
}

/// Right multiplication by a generator.
pub fn apply_generator(w: &SignedPerm, i: usize) -> SignedPerm {
    let mut w = w.clone();
    if i == 0 {
        let (a, b) = (w[0], w[1]);
        w[0] = -b;
        w[1] = -a;
    } else {
        w.swap(i - 1, i);
    }
    w
}

/// Coxeter length: inversions plus pairs with negative sum.
pub fn length(w: &SignedPerm) -> usize {
    let n = w.len();
    let mut l = 0;
    for i in 0..n {
        for j in i + 1..n {
            l += (w[i] > w[j]) as usize + (w[i] + w[j] < 0) as usize;
        }
    }
    l
}

pub fn word_product(n: usize, word: &[usize]) -> SignedPerm {
    word.iter().fold(identity(n), |w, &a| apply_generator(&w, a))
}

pub fn is_reduced(n: usize, word: &[usize]) -> bool {
    let mut w = identity(n);
    for (l, &a) in word.iter().enumerate() {
        w = apply_generator(&w, a);
        if length(&w) != l + 1 {
            return false;
        }
    }
    true
}

/// `-id` for even rank; for odd rank the first sign survives.
pub fn longest_element(n: usize) -> SignedPerm {
    if n % 2 == 1 {
        std::iter::once(1).chain((2..=n as i32).map(|i| -i)).collect()
    } else {
        (1..=n as i32).map(|i| -i).collect()
    }
}

/// Reduced expression of the longest element.
pub fn is_longest_word(n: usize, word: &[usize]) -> bool {
    is_reduced(n, word) && word_product(n, word) == longest_element(n)
}

fn compose(u: &SignedPerm, v: &SignedPerm) -> SignedPerm {
    let ev = |w: &SignedPerm, i: i32| if i > 0 { w[i as usize - 1] } else { -w[(-i) as usize - 1] };
    v.iter().map(|&i| ev(u, i)).collect()
}

/// The generator `w0 s w0`.
pub fn conjugate_by_longest(n: usize, s: usize) -> usize {
    let w0 = longest_element(n);
    let g = compose(&compose(&w0, &apply_generator(&identity(n), s)), &w0);
    (0..n).find(|&j| apply_generator(&identity(n), j) == g).expect("conjugate of a generator is a generator")
}

pub fn commutes(i: usize, j: usize) -> bool {
    let (a, b) = (i.min(j), i.max(j));
    match (a, b) {
        _ if a == b => true,
        (0, b) => b != 2,
        _ => b != a + 1,
    }
}

/// Whether `0` and `1` can be brought next to each other by commutations.
pub fn zero_one_adjacent(c: &[usize]) -> bool {
    let mut seen: HashSet<Vec<usize>> = HashSet::from([c.to_vec()]);
    let mut stack = vec![c.to_vec()];
    while let Some(w) = stack.pop() {
        for k in 0..w.len().saturating_sub(1) {
            if (w[k] == 0 && w[k + 1] == 1) || (w[k] == 1 && w[k + 1] == 0) {
                return true;
            }
            if commutes(w[k], w[k + 1]) {
                let mut v = w.clone();
                v.swap(k, k + 1);
                if seen.insert(v.clone()) {
                    stack.push(v);
                }
            }
        }
    }
    false
}

/// `c` followed by the c-sorting word of the longest element. For even rank this is
/// `c^n`; for odd rank the last copy of one of the letters `0, 1` is replaced by the
/// other when they are not adjacent in `c` up to commutations.
pub fn coxeter_word(c: &[usize]) -> Result<Vec<usize>> {
    let n = c.len();
    let mut sorted = c.to_vec();
    sorted.sort();
    if n < 3 || sorted != (0..n).collect::<Vec<_>>() {
        return Err(CoxeterError::NotCoxeterElement(c.to_vec(), n));
    }
    let mut tail: Vec<usize> = c.iter().copied().cycle().take(n * (n - 1)).collect();
    if n % 2 == 1 && !zero_one_adjacent(c) {
        let (i0, i1) = (c.iter().position(|&a| a == 0).unwrap(), c.iter().position(|&a| a == 1).unwrap());
        let (from, to) = if i0 > i1 { (0, 1) } else { (1, 0) };
        let k = tail.iter().rposition(|&a| a == from).unwrap();
        tail[k] = to;
    }
    debug_assert!(is_longest_word(n, &tail));
    Ok(c.iter().copied().chain(tail).collect())
}

/// The subword complex of `c w0(c)` with each position labelled by a pair.
#[derive(Clone, Debug, Serialize)]
pub struct SubwordComplex {
    pub n: usize,
    pub c: Vec<usize>,
    pub word: Vec<usize>,
    /// `rotation[i - 1]` is the image of position `i`.
    pub rotation: Vec<usize>,
    /// `pairs[i - 1]` is the pair at position `i`.
    pub pairs: Vec<CsPair>,
}

fn rotation(n: usize, word: &[usize]) -> Vec<usize> {
    let m = word.len();
    (0..m)
        .map(|i| {
            let s = word[i];
            match (i + 1..m).find(|&j| word[j] == s) {
                Some(j) => j + 1,
                None => {
                    let t = conjugate_by_longest(n, s);
                    word.iter().position(|&a| a == t).unwrap() + 1
                }
            }
        })
        .collect()
}

impl SubwordComplex {
    /// Labels the letters of `c` by the accordion chords and propagates labels
    /// along the rotation, which turns chords by one step.
    pub fn new(dn: &Dn, c: &[usize]) -> Result<SubwordComplex> {
        let n = dn.n();
        if c.len() != n {
            return Err(CoxeterError::NotCoxeterElement(c.to_vec(), n));
        }
        let word = coxeter_word(c)?;
        let rot = rotation(n, &word);
        let pos = |t: usize| c.iter().position(|&a| a == t).unwrap() + 1;
        let mut chord_at: Vec<Option<Chord>> = vec![None; word.len()];
        chord_at[pos(0) - 1] = Some(if pos(0) > pos(2) { dn.central(0, Side::L) } else { dn.central(n - 1, Side::R) });
        chord_at[pos(1) - 1] = Some(if pos(1) > pos(2) { dn.central(0, Side::R) } else { dn.central(n - 1, Side::L) });
        for i in 2..n {
            let p = (2..i).filter(|&j| pos(j) < pos(j + 1)).count();
            let q = n - 1 - (2..i).filter(|&j| pos(j) > pos(j + 1)).count();
            chord_at[pos(i) - 1] = Some(dn.straight(p, q)?);
        }
        let mut frontier: Vec<usize> = (1..=word.len()).filter(|&i| chord_at[i - 1].is_some()).collect();
        while let Some(i) = frontier.pop() {
            let j = rot[i - 1];
            let img = dn.rotate(chord_at[i - 1].unwrap());
            match chord_at[j - 1] {
                Some(x) if dn.pair_of(x) != dn.pair_of(img) => return Err(CoxeterError::Inconsistent(j)),
                Some(_) => {}
                None => {
                    chord_at[j - 1] = Some(img);
                    frontier.push(j);
                }
            }
        }
        let pairs = chord_at
            .iter()
            .enumerate()
            .map(|(i, x)| x.map(|x| dn.pair_of(x)).ok_or(CoxeterError::Inconsistent(i + 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubwordComplex { n, c: c.to_vec(), word, rotation: rot, pairs })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn pair_at(&self, position: usize) -> Result<CsPair> {
        self.pairs.get(position.wrapping_sub(1)).copied().ok_or(CoxeterError::PositionOutOfRange(position))
    }

    pub fn position_of(&self, pair: &CsPair) -> Option<usize> {
        self.pairs.iter().position(|p| p == pair).map(|i| i + 1)
    }

    /// A set of positions is a facet when the remaining letters spell a reduced word for the longest element.
    pub fn is_facet(&self, positions: &BTreeSet<usize>) -> bool {
        let rest: Vec<usize> = (1..=self.len()).filter(|i| !positions.contains(i)).map(|i| self.word[i - 1]).collect();
        positions.len() == self.n && is_longest_word(self.n, &rest)
    }

    pub fn facet_to_pseudotriangulation(&self, dn: &Dn, positions: &BTreeSet<usize>) -> Result<Pseudotriangulation> {
        let pairs = positions.iter().map(|&i| self.pair_at(i)).collect::<Result<Vec<_>>>()?;
        Ok(dn.pseudotriangulation(&pairs)?)
    }

    pub fn pseudotriangulation_to_facet(&self, t: &Pseudotriangulation) -> BTreeSet<usize> {
        t.pairs.iter().filter_map(|p| self.position_of(p)).collect()
    }

    /// The accordion: pairs at the letters of `c`.
    pub fn accordion(&self) -> Vec<CsPair> {
        self.pairs[..self.n].to_vec()
    }

    /// Almost positive root of a pair in simple-root coordinates: an accordion pair is
    /// minus its simple root, any other pair sums the simple roots of the accordion pairs it crosses.
    pub fn root_of(&self, dn: &Dn, delta: &CsPair) -> Vec<i64> {
        let mut v = vec![0i64; self.n];
        let acc = self.accordion();
        if let Some(i) = acc.iter().position(|p| p == delta) {
            v[self.c[i]] = -1;
            return v;
        }
        for (i, th) in acc.iter().enumerate() {
            v[self.c[i]] += dn.crossing_number(th, delta) as i64;
        }
        v
    }

    /// Dynkin orientation read off the word: an arc `s -> t` when `s` precedes `t` in `c`
    /// and the two letters do not commute.
    pub fn dynkin_arcs(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !commutes(self.c[i], self.c[j]) {
                    out.push((self.c[i], self.c[j]));
                }
            }
        }
        out.sort();
        out
    }
}

/// Positive roots in simple-root coordinates, generated from the simple roots by reflections.
pub fn positive_roots(n: usize) -> Vec<Vec<i64>> {
    let cartan = |i: usize, j: usize| -> i64 {
        if i == j {
            2
        } else if commutes(i, j) {
            0
        } else {
            -1
        }
    };
    let simple: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut seen: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut stack = simple;
    while let Some(r) = stack.pop() {
        for s in 0..n {
            let pairing: i64 = (0..n).map(|j| r[j] * cartan(j, s)).sum();
            let mut img = r.clone();
            img[s] -= pairing;
            if img.iter().all(|&x| x >= 0) && img.iter().any(|&x| x > 0) && seen.insert(img.clone()) {
                stack.push(img);
            }
        }
    }
    seen.into_iter().collect()
}

/// Coxeter elements as words: every permutation of the generators, in lexicographic order.
pub fn coxeter_elements(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(cur.clone());
            return;
        }
        for k in 0..left.len() {
            let a = left.remove(k);
            cur.push(a);
            rec(cur, left, out);
            cur.pop();
            left.insert(k, a);
        }
    }
    let mut out = vec![];
    rec(&mut vec![], &mut (0..n).collect(), &mut out);
    out
}

/// Accordion pseudotriangulation of a Coxeter element.
pub fn accordion(dn: &Dn, c: &[usize]) -> Result<Pseudotriangulation> {
    let sc = SubwordComplex::new(dn, c)?;
    Ok(dn.pseudotriangulation(&sc.accordion())?)
}
