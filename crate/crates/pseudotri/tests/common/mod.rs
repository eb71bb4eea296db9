//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use pseudotri::geometry::{Chord, CsPair, Dn, Side};

/// Float geometry: unit-circle vertices, disk of radius 0.05, tangency at `angle +- acos(r)`.
pub mod geo {
    use super::*;

    pub const DISK: f64 = 0.05;

    fn vertex(n: usize, p: usize) -> (f64, f64) {
        let t = std::f64::consts::PI * p as f64 / n as f64;
        (t.cos(), t.sin())
    }

    pub fn segment(n: usize, c: Chord) -> ((f64, f64), (f64, f64)) {
        match c {
            Chord::Straight { p, q } => (vertex(n, p), vertex(n, q)),
            Chord::Central { p, side } => {
                let phi = std::f64::consts::PI * p as f64 / n as f64;
                let off = DISK.acos();
                let a = if side == Side::L { phi + off } else { phi - off };
                (vertex(n, p), (DISK * a.cos(), DISK * a.sin()))
            }
        }
    }

    fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
        (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
    }

    pub fn crosses(n: usize, a: Chord, b: Chord) -> bool {
        if a == b {
            return false;
        }
        let ((p1, p2), (q1, q2)) = (segment(n, a), segment(n, b));
        let same = |u: (f64, f64), v: (f64, f64)| (u.0 - v.0).abs() < 1e-12 && (u.1 - v.1).abs() < 1e-12;
        if same(p1, q1) || same(p1, q2) || same(p2, q1) || same(p2, q2) {
            return false;
        }
        let (o1, o2) = (orient(p1, p2, q1), orient(p1, p2, q2));
        let (o3, o4) = (orient(q1, q2, p1), orient(q1, q2, p2));
        assert!(o1.abs() > 1e-9 && o2.abs() > 1e-9 && o3.abs() > 1e-9 && o4.abs() > 1e-9, "degenerate position");
        (o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0)
    }
}

/// All sets of `k` pairwise noncrossing pairs, by plain backtracking over pair indices.
pub fn noncrossing_sets(dn: &Dn, k: usize) -> Vec<Vec<CsPair>> {
    let pairs = dn.all_cs_pairs().to_vec();
    let mut out = vec![];
    fn rec(dn: &Dn, pairs: &[CsPair], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<CsPair>>) {
        if cur.len() == k {
            out.push(cur.iter().map(|&i| pairs[i]).collect());
            return;
        }
        for i in start..pairs.len() {
            if cur.iter().all(|&j| !dn.pairs_cross(&pairs[i], &pairs[j])) {
                cur.push(i);
                rec(dn, pairs, k, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(dn, &pairs, k, 0, &mut vec![], &mut out);
    out
}

/// Type D Catalan number `(3n - 2)/n * binom(2n - 2, n - 1)`.
pub fn catalan_d(n: u64) -> u64 {
    let mut b: u64 = 1;
    for i in 0..(n - 1) {
        b = b * (2 * n - 2 - i) / (i + 1);
    }
    (3 * n - 2) * b / n
}
