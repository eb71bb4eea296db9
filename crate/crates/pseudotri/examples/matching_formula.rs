//! Cluster variables as perfect matching sums over the openings of a seed.

use pseudotri::cluster::Seed;
use pseudotri::matching::{openings, variable_via_matching_in};
use pseudotri::{Chord, Dn, Side};

fn main() {
    let dn = Dn::new(3).unwrap();
    let chords = [Chord::Central { p: 1, side: Side::R }, Chord::Central { p: 1, side: Side::L }, Chord::Straight { p: 1, q: 3 }];
    let t = dn.from_chords(&chords).unwrap();
    let order: Vec<_> = chords.iter().map(|&c| dn.pair_of(c)).collect();
    let names = vec!["x".to_string(), "y".into(), "z".into()];
    let sd = Seed::with_assignment(&dn, &t, &order, names.clone()).unwrap();
    let ops = openings(&dn, &sd).unwrap();
    for (i, o) in ops.iter().enumerate() {
        println!("opening {}: side {:?}, polygon O,{}..{}, {} triangles", i, o.side, o.lo, o.hi, o.triangles.len());
    }
    for pair in dn.all_cs_pairs() {
        let r = variable_via_matching_in(&dn, &ops, pair).unwrap();
        println!("{:6} via opening {}: w = {}, x = {}", pair.to_string(), r.opening, r.w.to_string_with(&names), r.x.to_fraction_string(&names));
    }
    println!("\n{}", ops[0].to_dot());
}
