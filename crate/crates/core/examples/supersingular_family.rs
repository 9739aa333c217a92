//! Curves `y^p - y = x R(x)` with `R` additive are supersingular.
//!
//! Draws random additive polynomials of degree `p^d` and checks that every
//! slope of the resulting curve is 1/2.

use newton_strata::curves::vdgvdv;
use newton_strata::search::analyze;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, d) in [(2u64, 1usize), (2, 2), (3, 1)] {
        for _ in 0..3 {
            let mut r: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
            r.push(rng.gen_range(1..p));
            let named = vdgvdv(p, &r).expect("valid additive polynomial");
            let a = analyze(&named.model).expect("pipeline succeeds");
            println!(
                "{:<22} genus {:>2}  slopes {:<8} supersingular: {}",
                named.name,
                named.model.genus(),
                a.polygon.to_string(),
                a.polygon.is_supersingular()
            );
        }
    }
}
