//! Point counts, L-polynomial, zeta truncation and Newton polygon of a
//! genus-4 curve over F_3.
//!
//! Run with a curve literal to analyse another curve:
//! `cargo run --example zeta_function -- "hyp p:5 f:[1,0,2,0,0,1]"`

use newton_strata::curves::{self, CurveModel};
use newton_strata::polygon::np_from_l;
use newton_strata::zeta::{l_from_counts, predicted_counts, zeta_series};

fn main() {
    let model: CurveModel = match std::env::args().nth(1) {
        Some(text) => text.parse().expect("curve literal"),
        None => {
            curves::lookup(curves::AP_G4_P3)
                .expect("catalog entry")
                .model
        }
    };
    let g = model.genus();
    println!("{model}  (genus {g})");

    let counts = curves::count_profile(&model, g).expect("fields within the cap");
    println!("N_1..N_{g} = {:?}", counts.counts);

    let l = l_from_counts(&counts, g).expect("counts come from a curve");
    println!("L(T) = {l}");
    println!(
        "zeta truncation: {:?}",
        zeta_series(&l, g).expect("no overflow")
    );
    for k in g + 1..=2 * g {
        println!(
            "predicted N_{k} = {}",
            predicted_counts(&l, k).expect("no overflow")
        );
    }

    let np = np_from_l(&l).expect("L of a curve has an admissible polygon");
    println!("slopes: {np}");
    println!("break points: {:?}", np.break_points().points());
    println!("p-rank: {}", np.p_rank());
    if model.kind() == curves::CurveKind::Hyperelliptic {
        let hw = curves::hasse_witt_p_rank(&model).expect("hyperelliptic");
        println!("Hasse-Witt rank: {hw}");
    }
}
