//! Quivers read off pseudotriangulations follow quiver mutation along a flip walk.

use pseudotri::cluster::{quiver, Seed};
use pseudotri::{Dn, Side};

fn main() {
    let dn = Dn::new(5).unwrap();
    let mut sd = Seed::initial(&dn, &dn.star(Side::L));
    println!("star quiver:\n{}", sd.quiver.to_dot());
    for step in 0..8 {
        let chi = sd.t.pairs[(3 * step + 1) % 5];
        let (next, new) = sd.mutate(&dn, &chi).unwrap();
        assert_eq!(next.quiver, quiver(&dn, &next.t));
        println!("flip {} -> {}: {} arcs, geometry and mutation agree", chi, new, next.quiver.arcs.len());
        sd = next;
    }
}
