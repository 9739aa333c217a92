//! The poset of symmetric Newton polygons of height 8, as DOT, followed by
//! stratum reports for its nodes.
//!
//! `cargo run --example polygon_poset -- 5` uses another genus.

use newton_strata::poset::{build_poset, stratum_report};

fn main() {
    let g: usize = std::env::args()
        .nth(1)
        .map_or(4, |s| s.parse().expect("genus"));
    let poset = build_poset(g).expect("genus within the enumeration cap");
    print!("{}", poset.to_dot());
    println!();
    println!(
        "{} polygons, {} covers, graded: {}",
        poset.nodes.len(),
        poset.covers.len(),
        poset.graded
    );
    for node in &poset.nodes {
        let r = stratum_report(g, node).expect("node of this poset");
        println!(
            "{:<28} codim {}  p-rank {}  decomposable {:?}",
            node.to_string(),
            r.codim.expect("small genus"),
            r.p_rank,
            r.decomposable
        );
    }
}
