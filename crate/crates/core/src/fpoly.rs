//! Dense polynomials over a prime field F_p.
//!
//! Coefficients are stored constant term first and are always reduced into
//! `[0, p)`. A normalized polynomial has no trailing zero coefficients, so the
//! zero polynomial is the empty vector.

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn normalize(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Degree of a normalized polynomial, `None` for zero.
pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    normalize(&mut out);
    out
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            sub_mod(x, y, p)
        })
        .collect();
    normalize(&mut out);
    out
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = degree(m).expect("division by the zero polynomial");
    let mut r = a.to_vec();
    normalize(&mut r);
    let lead_inv = inv_mod(m[dm], p);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - dm;
        for (i, &mc) in m[..=dm].iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(c, mc, p), p);
        }
        normalize(&mut r);
    }
    r
}

pub(crate) fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

/// Monic greatest common divisor.
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    normalize(&mut x);
    normalize(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let inv = inv_mod(x[d], p);
        for c in x.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    x
}

pub(crate) fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    normalize(&mut out);
    out
}

/// `a` is squarefree over the algebraic closure of F_p.
///
/// Over a perfect field this is `gcd(a, a') = 1`, with the caveat that a
/// vanishing derivative means `a` is a p-th power.
pub(crate) fn is_squarefree(a: &[u64], p: u64) -> bool {
    let d = derivative(a, p);
    if d.is_empty() {
        return degree(a) == Some(0);
    }
    degree(&gcd(a, &d, p)) == Some(0)
}

pub(crate) fn pow(a: &[u64], mut exp: u64, p: u64) -> Vec<u64> {
    let mut acc = vec![1 % p];
    normalize(&mut acc);
    let mut base = a.to_vec();
    normalize(&mut base);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(&acc, &base, p);
        }
        exp >>= 1;
        if exp > 0 {
            base = mul(&base, &base, p);
        }
    }
    acc
}

fn pow_rem(a: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut base = rem(a, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &base, m, p);
        }
        exp >>= 1;
        if exp > 0 {
            base = mul_rem(&base, &base, m, p);
        }
    }
    acc
}

/// Ben-Or irreducibility test for a polynomial of degree at least one.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let Some(k) = degree(m) else {
        return false;
    };
    if k == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut frob = rem(&x, m, p);
    for _ in 1..=k / 2 {
        frob = pow_rem(&frob, p, m, p);
        let g = gcd(m, &sub(&frob, &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Evaluate at a residue of the prime field.
pub(crate) fn eval_prime(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0u64, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime(1 << 20));
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x+1)^2 (x+2) over F_3
        let f = mul(&mul(&[1, 1], &[1, 1], 3), &[2, 1], 3);
        assert!(!is_squarefree(&f, 3));
        // x^3 - x = x(x-1)(x+1) over F_3 squarefree
        assert!(is_squarefree(&[0, 2, 0, 1], 3));
        // x^3 over F_3 has zero derivative
        assert!(!is_squarefree(&[0, 0, 0, 1], 3));
        assert_eq!(gcd(&[0, 2, 0, 1], &[0, 1], 3), vec![0, 1]);
    }

    #[test]
    fn irreducibility_small() {
        // x^2 + 1 irreducible over F_3, reducible over F_5
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // count monic irreducible quartics over F_2: (2^4 - 2^2) / 4 = 3
        let count = (0..16u64)
            .filter(|n| {
                let m: Vec<u64> = (0..4).map(|i| (n >> i) & 1).chain([1]).collect();
                is_irreducible(&m, 2)
            })
            .count();
        assert_eq!(count, 3);
    }
}
