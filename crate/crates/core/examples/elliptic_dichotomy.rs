//! Every nonsingular cubic over F_3 and F_5 is either ordinary or
//! supersingular, and the trace `a = q + 1 - N_1` decides which.

use std::collections::BTreeMap;

use newton_strata::curves::{count_points, CurveModel};
use newton_strata::search::analyze;

fn main() {
    for p in [3u64, 5] {
        let mut tally: BTreeMap<(String, bool), usize> = BTreeMap::new();
        for index in 0..p.pow(3) {
            let f = [index % p, index / p % p, index / (p * p), 1];
            let Ok(model) = CurveModel::hyperelliptic(p, &f) else {
                continue;
            };
            let a = p as i64 + 1 - count_points(&model, 1).expect("prime field") as i64;
            let np = analyze(&model).expect("pipeline succeeds").polygon;
            *tally
                .entry((np.to_string(), a % p as i64 == 0))
                .or_default() += 1;
        }
        println!("p = {p}");
        for ((np, p_divides_a), n) in tally {
            println!("  {np:<12} p | a: {p_divides_a:<5}  curves: {n}");
        }
    }
}
