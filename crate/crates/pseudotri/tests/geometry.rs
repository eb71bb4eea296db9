mod common;

use pseudotri::geometry::{Chord, Classification, CsPair, Dn, FaceKind, GeometryError, Side};
use proptest::prelude::*;

fn s(p: usize, q: usize) -> Chord {
    Chord::Straight { p, q }
}

fn c(p: usize, side: Side) -> Chord {
    Chord::Central { p, side }
}

#[test]
fn pair_counts() {
    assert_eq!(Dn::new(3).unwrap().all_cs_pairs().len(), 9);
    for n in 3..=8 {
        let dn = Dn::new(n).unwrap();
        // n(n-2) straight pairs and 2n central pairs, against exhaustive chord generation
        let mut from_chords: Vec<CsPair> = dn.all_chords().into_iter().map(|c| dn.pair_of(c)).collect();
        from_chords.sort();
        from_chords.dedup();
        assert_eq!(from_chords.len(), n * (n - 2) + 2 * n);
        assert_eq!(dn.all_cs_pairs().len(), n * n);
    }
}

#[test]
fn no_long_diagonals() {
    let dn = Dn::new(3).unwrap();
    assert!(dn.straight(0, 3).is_err());
    assert!(dn.all_cs_pairs().iter().all(|p| p.rep != s(0, 3)));
}

#[test]
fn rank_two_is_rejected() {
    assert_eq!(Dn::new(2).unwrap_err(), GeometryError::RankTooSmall(2));
}

#[test]
fn crossing_rules_match_float_geometry() {
    for n in 3..=8 {
        let dn = Dn::new(n).unwrap();
        let chords = dn.all_chords();
        let mut bad = 0;
        for &a in &chords {
            for &b in &chords {
                if dn.crosses(a, b) != common::geo::crosses(n, a, b) {
                    bad += 1;
                }
            }
        }
        assert_eq!(bad, 0, "n = {}", n);
    }
}

#[test]
fn crossing_examples() {
    let d4 = Dn::new(4).unwrap();
    assert!(d4.crosses(s(0, 2), s(1, 3)));
    let d3 = Dn::new(3).unwrap();
    // left at 0 and right at the antipode coexist in central pseudotriangulations
    assert!(!d3.crosses(c(0, Side::L), c(3, Side::R)));
    let left0 = d3.pair_of(c(0, Side::L));
    let right2 = d3.pair_of(c(2, Side::R));
    for rep in right2.chords() {
        assert_eq!(left0.chords().iter().filter(|&&x| d3.crosses(x, rep)).count(), 1);
    }
    assert_eq!(d3.crossing_number(&left0, &right2), 1);
    let th = d4.pair_of(s(0, 3));
    let de = d4.pair_of(s(2, 5));
    assert_eq!(d4.crossing_number(&th, &de), 2);
    assert_eq!(d4.crossing_number(&th, &th), 0);
}

#[test]
fn maximality_is_automatic() {
    for n in 3..=5 {
        let dn = Dn::new(n).unwrap();
        assert!(common::noncrossing_sets(&dn, n + 1).is_empty(), "n = {}", n);
    }
}

#[test]
fn validity_checks() {
    let dn = Dn::new(3).unwrap();
    let t = dn.central_at(0);
    assert_eq!(t.pairs.len(), 3);
    assert!(dn.is_pseudotriangulation(&t.pairs));
    assert!(!dn.is_pseudotriangulation(&t.pairs[..2]));
    let crossing = [dn.pair_of(s(0, 2)), dn.pair_of(s(1, 3)), dn.pair_of(c(0, Side::L))];
    assert!(!dn.is_pseudotriangulation(&crossing));
}

#[test]
fn face_structure_on_every_pseudotriangulation() {
    for n in 3..=5 {
        let dn = Dn::new(n).unwrap();
        for t in common::noncrossing_sets(&dn, n) {
            let t = dn.pseudotriangulation(&t).unwrap();
            let faces = dn.faces(&t);
            assert_eq!(faces.len(), 2 * n);
            assert!(faces.iter().all(|f| f.corners().len() == 3), "{}", t);
            let deg = faces.iter().filter(|f| f.kind == FaceKind::DegenerateCentral).count();
            match dn.classify(&t) {
                Classification::Central { .. } => assert_eq!(deg, 2),
                _ => assert_eq!(deg, 0),
            }
            // chords bound exactly two faces each, boundary edges one
            for ch in t.chords() {
                let k = faces.iter().filter(|f| f.chords().contains(&ch)).count();
                assert_eq!(k, 2, "{} in {}", ch, t);
            }
            assert!(faces.iter().any(|f| f.is_central()));
        }
    }
}

#[test]
fn central_and_star_faces() {
    let dn = Dn::new(3).unwrap();
    let faces = dn.faces(&dn.central_at(0));
    assert_eq!(faces.iter().filter(|f| f.kind == FaceKind::DegenerateCentral).count(), 2);
    assert_eq!(faces.len(), 6);
    let star = dn.star(Side::L);
    assert_eq!(dn.classify(&star), Classification::TypeLeft);
    let faces = dn.faces(&star);
    // every face touches the disk, each with one cusp
    assert!(faces.iter().all(|f| f.touches_disk() && f.kind == FaceKind::Central));
    assert_eq!(dn.classify(&dn.star(Side::R)), Classification::TypeRight);
}

#[test]
fn classification_of_printed_pseudotriangulations() {
    let dn = Dn::new(3).unwrap();
    assert_eq!(dn.classify(&dn.central_at(0)), Classification::Central { p: 0 });
    let t = dn.from_chords(&[c(2, Side::L), c(1, Side::L), s(1, 5)]).unwrap();
    assert_eq!(dn.classify(&t), Classification::TypeLeft);
}

#[test]
fn flips_are_unique_and_involutive() {
    for n in 3..=4 {
        let dn = Dn::new(n).unwrap();
        for t in common::noncrossing_sets(&dn, n) {
            let t = dn.pseudotriangulation(&t).unwrap();
            let mut targets = vec![];
            for chi in &t.pairs {
                let (t2, new) = dn.flip(&t, chi).unwrap();
                assert!(dn.is_pseudotriangulation(&t2.pairs));
                assert_eq!(dn.flip(&t2, &new).unwrap(), (t.clone(), *chi));
                targets.push(t2);
            }
            targets.sort();
            targets.dedup();
            assert_eq!(targets.len(), n);
        }
    }
}

#[test]
fn central_flips_switch_chirality() {
    let dn = Dn::new(3).unwrap();
    let t = dn.central_at(0);
    let (_, new) = dn.flip(&t, &dn.pair_of(c(0, Side::L))).unwrap();
    assert_eq!(new, dn.pair_of(c(2, Side::R)));
    let (_, new) = dn.flip(&t, &dn.pair_of(c(0, Side::R))).unwrap();
    assert_eq!(new, dn.pair_of(c(2, Side::L)));
}

#[test]
fn flip_of_absent_pair_is_an_error() {
    let dn = Dn::new(3).unwrap();
    let t = dn.central_at(0);
    assert!(matches!(dn.flip(&t, &dn.pair_of(s(1, 3))), Err(GeometryError::PairNotPresent(_))));
}

#[test]
fn enumeration_matches_catalan_and_brute_force() {
    for n in 3..=6u64 {
        let dn = Dn::new(n as usize).unwrap();
        let g = dn.enumerate(2);
        assert_eq!(g.nodes.len() as u64, common::catalan_d(n));
        assert!((0..g.nodes.len()).all(|i| g.degree(i) == n as usize));
        if n <= 5 {
            assert_eq!(g.nodes.len(), common::noncrossing_sets(&dn, n as usize).len());
        }
    }
    assert_eq!(common::catalan_d(3), 14);
    assert_eq!(common::catalan_d(4), 50);
}

#[test]
fn enumeration_is_independent_of_worker_count() {
    let dn = Dn::new(5).unwrap();
    let a = dn.enumerate(1);
    let b = dn.enumerate(4);
    assert_eq!(a.nodes, b.nodes);
    assert_eq!(a.edges, b.edges);
    assert_eq!(a.to_dot(), b.to_dot());
}

#[test]
fn chord_json_shape() {
    let v = serde_json::to_value(s(0, 2)).unwrap();
    assert_eq!(v, serde_json::json!({"kind": "straight", "p": 0, "q": 2}));
    let v = serde_json::to_value(c(0, Side::L)).unwrap();
    assert_eq!(v, serde_json::json!({"kind": "central", "p": 0, "side": "L"}));
    let dn = Dn::new(3).unwrap();
    let t = dn.central_at(0);
    let v = serde_json::to_value(&t).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    let back: pseudotri::Pseudotriangulation = serde_json::from_value(v).unwrap();
    assert_eq!(back, t);
}

#[test]
fn chord_names_parse() {
    assert_eq!("0L".parse::<Chord>().unwrap(), c(0, Side::L));
    assert_eq!("2^R".parse::<Chord>().unwrap(), c(2, Side::R));
    assert_eq!("[1,3]".parse::<Chord>().unwrap(), s(1, 3));
    assert!("[1,3".parse::<Chord>().is_ok());
    assert!("x".parse::<Chord>().is_err());
}

fn chord_strategy(n: usize) -> impl Strategy<Value = Chord> {
    let dn = Dn::new(n).unwrap();
    let chords = dn.all_chords();
    (0..chords.len()).prop_map(move |i| chords[i])
}

proptest! {
    #[test]
    fn crossing_is_symmetric_irreflexive_equivariant((n, a, b) in (3usize..9).prop_flat_map(|n| (Just(n), chord_strategy(n), chord_strategy(n)))) {
        let dn = Dn::new(n).unwrap();
        prop_assert_eq!(dn.crosses(a, b), dn.crosses(b, a));
        prop_assert!(!dn.crosses(a, a));
        prop_assert_eq!(dn.crosses(a, b), dn.crosses(dn.partner(a), dn.partner(b)));
        // plain rotation by pi/n keeps chirality and is a symmetry of the configuration
        let turn = |x: Chord| match x {
            Chord::Central { p, side } => Chord::Central { p: (p + 1) % (2 * n), side },
            other => dn.rotate(other),
        };
        prop_assert_eq!(dn.crosses(a, b), dn.crosses(turn(a), turn(b)));
        if a.endpoints().iter().any(|v| b.endpoints().contains(v)) {
            prop_assert!(!dn.crosses(a, b));
        }
    }

    #[test]
    fn crossing_number_is_representative_free((n, a, b) in (3usize..9).prop_flat_map(|n| (Just(n), chord_strategy(n), chord_strategy(n)))) {
        let dn = Dn::new(n).unwrap();
        let (th, de) = (dn.pair_of(a), dn.pair_of(b));
        let by_partner = th.chords().iter().filter(|&&t| dn.crosses(t, de.partner)).count();
        prop_assert_eq!(dn.crossing_number(&th, &de), by_partner);
        prop_assert_eq!(dn.crossing_number(&th, &de) == 0, !dn.pairs_cross(&th, &de));
    }

    #[test]
    fn random_flip_walks_stay_valid(n in 3usize..8, steps in proptest::collection::vec(0usize..8, 1..40)) {
        let dn = Dn::new(n).unwrap();
        let mut t = dn.star(Side::L);
        for k in steps {
            let chi = t.pairs[k % n];
            let faces_before = dn.faces(&t);
            let (t2, _) = dn.flip(&t, &chi).unwrap();
            prop_assert!(dn.is_pseudotriangulation(&t2.pairs));
            // the faces away from the flipped pair survive untouched
            let faces_after = dn.faces(&t2);
            let untouched = faces_before.iter().filter(|f| !f.chords().iter().any(|x| dn.pair_of(*x) == chi)).count();
            prop_assert_eq!(untouched, 2 * n - 4);
            prop_assert_eq!(faces_after.iter().filter(|f| faces_before.contains(f)).count(), untouched);
            t = t2;
        }
    }
}
