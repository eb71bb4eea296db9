//! Enumerates every pseudotriangulation for small ranks and prints the flip graph sizes.
//!
//! cargo run --example flip_graph -- 5

use pseudotri::Dn;

fn main() {
    let top: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    for n in 3..=top {
        let dn = Dn::new(n).expect("rank at least 3");
        let g = dn.enumerate(4);
        let central = g.nodes.iter().filter(|t| matches!(dn.classify(t), pseudotri::Classification::Central { .. })).count();
        println!("n = {}: {} pseudotriangulations ({} central), {} flips", n, g.nodes.len(), central, g.edges.len() / 2);
    }
}
