//! Dominance order, joins, and the generic polygons of a given p-rank.

use newton_strata::polygon::{dominates, nu, sigma, NewtonPolygon};

fn main() {
    let g = 4;
    let a: NewtonPolygon = "4*(1/4)+4*(3/4)".parse().expect("polygon text");
    let b: NewtonPolygon = "1*(0)+6*(1/2)+1*(1)".parse().expect("polygon text");
    println!("{a} vs {b}: {:?}", dominates(&a, &b));
    println!("{a} vs sigma_{g}: {:?}", dominates(&a, &sigma(g)));

    for f in 0..=g {
        let generic = nu(g, f).expect("f <= g");
        println!("nu_{g}^{f} = {generic}");
    }

    let e1: NewtonPolygon = "1*(0)+1*(1)".parse().expect("polygon text");
    let e2: NewtonPolygon = "3*(1/3)+3*(2/3)".parse().expect("polygon text");
    let joined = e1.join(&e2);
    println!("{e1} (+) {e2} = {joined}, p-rank {}", joined.p_rank());
    print!("{}", joined.break_points().to_tsv());
}
