//! A genus-11 Artin-Schreier curve over F_2 whose slopes have denominator 11.

use std::time::Instant;

use newton_strata::curves::{self, BLACHE_G11_P2};
use newton_strata::poset::stratum_report;
use newton_strata::search::analyze;

fn main() {
    let named = curves::lookup(BLACHE_G11_P2).expect("catalog entry");
    println!("{}: {}", named.name, named.model);

    let start = Instant::now();
    let a = analyze(&named.model).expect("pipeline succeeds");
    println!("counts over F_2^k, k = 1..11: {:?}", a.counts.counts);
    println!("L(T) = {}", a.l);
    println!("slopes: {}  ({:.2?})", a.polygon, start.elapsed());

    let report = stratum_report(11, &a.polygon).expect("height 22");
    println!("codim in the poset: {:?}", report.codim);
    println!("decomposable: {:?}", report.decomposable);
    println!("denominators: {:?}", report.denominators);
}
