//! The word c w0(c) for c = 1 2 0, its chord labels, and a facet.

use std::collections::BTreeSet;

use pseudotri::coxeter::SubwordComplex;
use pseudotri::Dn;

fn main() {
    let dn = Dn::new(3).unwrap();
    let sc = SubwordComplex::new(&dn, &[1, 2, 0]).unwrap();
    println!("pos letter pair          rotation");
    for i in 1..=sc.len() {
        let p = sc.pair_at(i).unwrap();
        println!("{:3} {:6} {{{}, {}}} {:>8}", i, sc.word[i - 1], p.rep, p.partner, sc.rotation[i - 1]);
    }
    let facet: BTreeSet<usize> = [1, 7, 8].into();
    println!("{{1,7,8}} is a facet: {}", sc.is_facet(&facet));
    println!("its pseudotriangulation: {}", sc.facet_to_pseudotriangulation(&dn, &facet).unwrap());
}
