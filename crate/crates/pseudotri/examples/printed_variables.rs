//! All nine cluster variables of rank 3 from the seed {1R, 0R, [1,3]} labelled x, y, z.

use pseudotri::cluster::{all_cluster_variables, d_vector, Seed};
use pseudotri::{Chord, Dn, Side};

fn main() {
    let dn = Dn::new(3).unwrap();
    let chords = [Chord::Central { p: 1, side: Side::R }, Chord::Central { p: 0, side: Side::R }, Chord::Straight { p: 1, q: 3 }];
    let t = dn.from_chords(&chords).unwrap();
    let order: Vec<_> = chords.iter().map(|&c| dn.pair_of(c)).collect();
    let names = vec!["x".to_string(), "y".into(), "z".into()];
    let s0 = Seed::with_assignment(&dn, &t, &order, names.clone()).unwrap();
    for (pair, x) in all_cluster_variables(&dn, &s0).unwrap() {
        let d = if t.contains(&pair) { vec![0; 3] } else { d_vector(&dn, &s0, &pair, &x).unwrap() };
        println!("{:6} {:32} d = {:?}", pair.to_string(), x.to_fraction_string(&names), d);
    }
}
