//! The flip of a central chord at a degenerate pseudotriangle, both as quiver
//! mutation and as the relation read off the pseudoquadrangle.

use pseudotri::cluster::{exchange_relation, pair_weights, Seed};
use pseudotri::{Chord, Dn, Side};

fn main() {
    let dn = Dn::new(3).unwrap();
    let t = dn.central_at(0);
    let order = [
        dn.pair_of(Chord::Central { p: 0, side: Side::L }),
        dn.pair_of(Chord::Central { p: 0, side: Side::R }),
        dn.pair_of(Chord::Straight { p: 0, q: 2 }),
    ];
    let names = vec!["a".to_string(), "b".into(), "d".into()];
    let s0 = Seed::with_assignment(&dn, &t, &order, names.clone()).unwrap();
    let chi = order[0];
    let (s1, new) = s0.mutate(&dn, &chi).unwrap();
    println!("flip {} -> {}", chi, new);
    println!("x[{}] = {}", new, s1.var(&new).to_fraction_string(&names));

    let rel = exchange_relation(&dn, &t, &chi).unwrap();
    let mut vars = s0.vars.clone();
    vars.insert(new, s1.var(&new).clone());
    let w = pair_weights(&dn, &vars, 3);
    println!("template {:?}", rel.shape);
    println!("  geodesics {:?} and {:?}", rel.geodesics[0].iter().map(|c| c.to_string()).collect::<Vec<_>>(), rel.geodesics[1].iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("  {} = {}", rel.lhs(3, &w).to_string_with(&names), rel.rhs(3, &w).to_string_with(&names));
    println!("  after cancelling x[{}]: x[{}] * x[{}] = {}", order[1], chi, new, (s0.var(&chi) * s1.var(&new)).to_string_with(&names));
}
