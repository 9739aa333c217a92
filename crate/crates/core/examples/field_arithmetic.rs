//! Arithmetic in F_81 with the canonical modulus, plus the trace map.

use newton_strata::gf::FieldSpec;

fn main() {
    let f81 = FieldSpec::new(3, 4).expect("81 is a small prime power");
    println!("F_{} = F_3[t]/({:?})", f81.order(), f81.modulus());

    let t = f81.generator();
    let u = f81.element(&[1, 2, 0, 1]).expect("coefficients below 3");
    println!("t = {t}, u = {u}");
    println!("t * u = {}", &t * &u);
    println!("u^-1 = {}", u.inv().expect("u is nonzero"));
    println!("u^80 = {}", u.pow(80));
    println!("frobenius(u) = {}", u.frobenius());

    let squares = f81
        .elements()
        .filter(|x| !x.is_zero() && x.is_square())
        .count();
    println!("nonzero squares: {squares}");
    let traceless = f81.elements().filter(|x| x.trace_to_prime() == 0).count();
    println!("elements of trace 0: {traceless}");
}
