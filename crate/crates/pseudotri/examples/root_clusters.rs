//! Almost positive roots attached to pairs through the accordion of a Coxeter element.

use pseudotri::coxeter::{positive_roots, SubwordComplex};
use pseudotri::{Chord, Dn, Side};

fn show(r: &[i64]) -> String {
    let terms: Vec<String> = r.iter().enumerate().filter(|(_, &a)| a != 0).map(|(i, &a)| match a {
        1 => format!("a{}", i),
        -1 => format!("-a{}", i),
        _ => format!("{}a{}", a, i),
    }).collect();
    terms.join(" + ")
}

fn main() {
    let dn = Dn::new(3).unwrap();
    let sc = SubwordComplex::new(&dn, &[1, 2, 0]).unwrap();
    println!("{} positive roots", positive_roots(3).len());
    for p in dn.all_cs_pairs() {
        println!("{:6} {}", p.to_string(), show(&sc.root_of(&dn, p)));
    }
    let t = dn
        .from_chords(&[Chord::Central { p: 2, side: Side::L }, Chord::Central { p: 1, side: Side::L }, Chord::Straight { p: 1, q: 5 }])
        .unwrap();
    let cluster: Vec<String> = t.pairs.iter().map(|p| show(&sc.root_of(&dn, p))).collect();
    println!("cluster of {}: {{{}}}", t, cluster.join(", "));
}
