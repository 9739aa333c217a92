//! Exact arithmetic in small finite fields F_{p^k}.
//!
//! Elements use the polynomial basis `1, t, ..., t^{k-1}` modulo a monic
//! irreducible polynomial of degree `k`. All fields handled here are small
//! enough to enumerate, so nothing is table-driven.
//!
//! The canonical modulus for `(p, k)` is the least monic irreducible
//! polynomial of degree `k`, where coefficient vectors are compared
//! lexicographically from the `t^{k-1}` coefficient down to the constant
//! term (the constant term is the last, least significant position). For
//! `k = 1` the modulus is `t`, and the field is the prime field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::fpoly::{self, add_mod, mul_mod, sub_mod};

/// Largest field cardinality accepted unless a caller overrides it.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} exceeds the cap of {cap} elements")]
    FieldTooLarge { p: u64, k: u32, cap: u64 },
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid modulus: {0}")]
    InvalidModulus(&'static str),
    #[error("element coefficients do not describe an element of F_{p}^{k}")]
    InvalidElement { p: u64, k: u32 },
}

/// Returns `p^k` if it does not exceed `cap`.
pub fn checked_order(p: u64, k: u32, cap: u64) -> Result<u64, GfError> {
    let too_large = GfError::FieldTooLarge { p, k, cap };
    let q = p.checked_pow(k).ok_or(too_large.clone())?;
    if q > cap {
        return Err(too_large);
    }
    Ok(q)
}

/// A finite field F_{p^k} together with its defining modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    k: u32,
    /// Monic, constant term first, length `k + 1`.
    modulus: Vec<u64>,
    q: u64,
}

/// Canonical field of order `p^k` under the default cap.
pub fn make_field(p: u64, k: u32) -> Result<FieldSpec, GfError> {
    FieldSpec::new(p, k)
}

impl FieldSpec {
    pub fn new(p: u64, k: u32) -> Result<Self, GfError> {
        Self::with_cap(p, k, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u64, k: u32, cap: u64) -> Result<Self, GfError> {
        if !fpoly::is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = checked_order(p, k, cap)?;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            canonical_modulus(p, k as usize)
        };
        Ok(Self { p, k, modulus, q })
    }

    /// Field with an explicitly chosen modulus (constant term first, monic).
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, GfError> {
        if !fpoly::is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        let k = match fpoly::degree(modulus) {
            Some(0) | None => return Err(GfError::ZeroDegree),
            Some(d) => d,
        };
        if modulus.len() != k + 1 || modulus[k] != 1 {
            return Err(GfError::InvalidModulus("modulus must be monic"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(GfError::InvalidModulus(
                "coefficients must be reduced mod p",
            ));
        }
        if !fpoly::is_irreducible(modulus, p) {
            return Err(GfError::InvalidModulus("modulus is reducible"));
        }
        let k = u32::try_from(k).map_err(|_| GfError::InvalidModulus("degree too large"))?;
        let q = checked_order(p, k, DEFAULT_FIELD_CAP)?;
        Ok(Self {
            p,
            k,
            modulus: modulus.to_vec(),
            q,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement<'_> {
        FieldElement {
            field: self,
            coeffs: vec![0; self.k as usize],
        }
    }

    pub fn one(&self) -> FieldElement<'_> {
        self.from_prime(1)
    }

    /// Image of an integer under `Z -> F_p -> F_{p^k}`.
    pub fn from_prime(&self, c: u64) -> FieldElement<'_> {
        let mut coeffs = vec![0; self.k as usize];
        coeffs[0] = c % self.p;
        FieldElement {
            field: self,
            coeffs,
        }
    }

    /// Element with the given coordinates, constant term first.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement<'_>, GfError> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::InvalidElement {
                p: self.p,
                k: self.k,
            });
        }
        let mut v = coeffs.to_vec();
        v.resize(self.k as usize, 0);
        Ok(FieldElement {
            field: self,
            coeffs: v,
        })
    }

    /// The element whose base-`p` digits (constant term least significant)
    /// spell `index`.
    pub fn from_index(&self, mut index: u64) -> FieldElement<'_> {
        debug_assert!(index < self.q);
        let coeffs = (0..self.k)
            .map(|_| {
                let d = index % self.p;
                index /= self.p;
                d
            })
            .collect();
        FieldElement {
            field: self,
            coeffs,
        }
    }

    /// The class of `t` modulo the defining polynomial.
    pub fn generator(&self) -> FieldElement<'_> {
        if self.k == 1 {
            // t = 0 for the degenerate modulus of the prime field
            return self.zero();
        }
        let mut coeffs = vec![0; self.k as usize];
        coeffs[1] = 1;
        FieldElement {
            field: self,
            coeffs,
        }
    }

    /// Every element exactly once, ordered by [`FieldElement::index`].
    pub fn elements(&self) -> impl Iterator<Item = FieldElement<'_>> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    fn reduce(&self, mut wide: Vec<u64>) -> Vec<u64> {
        let k = self.k as usize;
        let p = self.p;
        for top in (k..wide.len()).rev() {
            let c = wide[top];
            if c == 0 {
                continue;
            }
            // t^k = -(m_0 + ... + m_{k-1} t^{k-1})
            for i in 0..k {
                let shift = top - k + i;
                wide[shift] = sub_mod(wide[shift], mul_mod(c, self.modulus[i], p), p);
            }
            wide[top] = 0;
        }
        wide.truncate(k);
        wide.resize(k, 0);
        wide
    }
}

fn canonical_modulus(p: u64, k: usize) -> Vec<u64> {
    // Index n spells (m_{k-1}, ..., m_0) in base p with m_0 least significant,
    // so increasing n is the documented lexicographic order.
    let mut n: u64 = 0;
    loop {
        let mut m: Vec<u64> = Vec::with_capacity(k + 1);
        let mut rest = n;
        for _ in 0..k {
            m.push(rest % p);
            rest /= p;
        }
        m.push(1);
        if m[0] != 0 && fpoly::is_irreducible(&m, p) {
            return m;
        }
        n += 1;
    }
}

/// An element of a [`FieldSpec`], in the polynomial basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement<'f> {
    field: &'f FieldSpec,
    coeffs: Vec<u64>,
}

impl<'f> FieldElement<'f> {
    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Position of this element in [`FieldSpec::elements`].
    pub fn index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.field.p + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn same_field(&self, other: &Self) -> Result<(), GfError> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(GfError::MixedFields)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add_mod(a, b, p))
            .collect();
        Ok(Self {
            field: self.field,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| sub_mod(a, b, p))
            .collect();
        Ok(Self {
            field: self.field,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        let p = self.field.p;
        let k = self.field.k as usize;
        if k == 1 {
            return Ok(Self {
                field: self.field,
                coeffs: vec![mul_mod(self.coeffs[0], other.coeffs[0], p)],
            });
        }
        let mut wide = vec![0u64; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                wide[i + j] = add_mod(wide[i + j], mul_mod(a, b, p), p);
            }
        }
        Ok(Self {
            field: self.field,
            coeffs: self.field.reduce(wide),
        })
    }

    /// Multiply by an integer through the prime subfield.
    pub fn scale(&self, c: u64) -> Self {
        let p = self.field.p;
        let c = c % p;
        Self {
            field: self.field,
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn inv(&self) -> Result<Self, GfError> {
        if self.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(self.field.q - 2))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p)
    }

    /// Trace to the prime field, `a + a^p + ... + a^{p^{k-1}}`, as a residue.
    pub fn trace_to_prime(&self) -> u64 {
        let mut sum = self.clone();
        let mut conj = self.clone();
        for _ in 1..self.field.k {
            conj = conj.frobenius();
            sum = &sum + &conj;
        }
        debug_assert!(sum.coeffs[1..].iter().all(|&c| c == 0));
        sum.coeffs[0]
    }

    /// Euler's criterion. Zero counts as a square.
    pub fn is_square(&self) -> bool {
        if self.is_zero() || self.field.p == 2 {
            return true;
        }
        self.pow((self.field.q - 1) / 2).is_one()
    }
}

/// Convenience wrapper matching [`FieldElement::trace_to_prime`].
pub fn trace_to_prime(a: &FieldElement<'_>) -> u64 {
    a.trace_to_prime()
}

/// All elements of `spec` in canonical order.
pub fn enumerate_elements(spec: &FieldSpec) -> impl Iterator<Item = FieldElement<'_>> + '_ {
    spec.elements()
}

// The operator impls panic on operands from different fields; use the
// `checked_*` methods to get an error instead.
impl<'a, 'f> Add<&'a FieldElement<'f>> for &'a FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn add(self, rhs: &'a FieldElement<'f>) -> FieldElement<'f> {
        self.checked_add(rhs).expect("mixed fields")
    }
}

impl<'a, 'f> Sub<&'a FieldElement<'f>> for &'a FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn sub(self, rhs: &'a FieldElement<'f>) -> FieldElement<'f> {
        self.checked_sub(rhs).expect("mixed fields")
    }
}

impl<'a, 'f> Mul<&'a FieldElement<'f>> for &'a FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn mul(self, rhs: &'a FieldElement<'f>) -> FieldElement<'f> {
        self.checked_mul(rhs).expect("mixed fields")
    }
}

impl<'f> Neg for &FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn neg(self) -> FieldElement<'f> {
        let p = self.field.p;
        FieldElement {
            field: self.field,
            coeffs: self.coeffs.iter().map(|&a| sub_mod(0, a, p)).collect(),
        }
    }
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}){:?}", self.field.p, self.field.k, self.coeffs)
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("t")?,
                (1, _) => write!(f, "{c}*t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn field_orders() {
        assert_eq!(make_field(3, 1).unwrap().order(), 3);
        assert_eq!(make_field(3, 4).unwrap().order(), 81);
        assert_eq!(make_field(2, 11).unwrap().order(), 2048);
        assert_eq!(make_field(3, 1).unwrap().modulus(), &[0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1), Err(GfError::NotPrime(4)));
        assert_eq!(make_field(1, 3), Err(GfError::NotPrime(1)));
        assert_eq!(make_field(3, 0), Err(GfError::ZeroDegree));
        assert!(matches!(
            make_field(2, 41),
            Err(GfError::FieldTooLarge { .. })
        ));
        assert!(matches!(
            make_field(3, 100),
            Err(GfError::FieldTooLarge { .. })
        ));
        assert!(make_field(2, 40).is_ok());
        assert!(matches!(
            FieldSpec::with_cap(3, 4, 80),
            Err(GfError::FieldTooLarge { cap: 80, .. })
        ));
        assert!(matches!(
            FieldSpec::with_modulus(2, &[1, 0, 1]),
            Err(GfError::InvalidModulus(_))
        ));
    }

    #[test]
    fn canonical_moduli() {
        // F_4: x^2 + x + 1 is the only irreducible quadratic over F_2
        assert_eq!(make_field(2, 2).unwrap().modulus(), &[1, 1, 1]);
        // F_9: x^2 + 1 comes first in (m_1, m_0) order
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // F_8: x^3 + x + 1 precedes x^3 + x^2 + 1
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        // F_81: x^4 + x + 2 is the first irreducible in order (m_3, m_2, m_1, m_0)
        let f81 = make_field(3, 4).unwrap();
        assert_eq!(f81.modulus(), &[2, 1, 0, 0, 1]);
        assert_eq!(make_field(3, 4).unwrap(), f81);
    }

    #[test]
    fn f4_by_hand() {
        let f4 = make_field(2, 2).unwrap();
        let w = f4.generator();
        let w2 = w.square();
        // w^2 = w + 1
        assert_eq!(w2.coeffs(), &[1, 1]);
        assert!((&w * &w2).is_one());
        assert_eq!(w.trace_to_prime(), 1);
        assert!(f4.one().inv().unwrap().is_one());
    }

    #[test]
    fn traces() {
        for k in 1..=6 {
            let f = make_field(2, k).unwrap();
            assert_eq!(f.zero().trace_to_prime(), 0);
            assert_eq!(f.one().trace_to_prime(), (k % 2) as u64);
        }
        // trace is onto F_p: each residue hit p^{k-1} times
        let f = make_field(3, 3).unwrap();
        let mut hist = [0usize; 3];
        for a in f.elements() {
            hist[a.trace_to_prime() as usize] += 1;
        }
        assert_eq!(hist, [9, 9, 9]);
    }

    #[test]
    fn enumeration_lengths() {
        for (p, k, n) in [(3, 1, 3usize), (3, 4, 81), (2, 11, 2048)] {
            let f = make_field(p, k).unwrap();
            let all: Vec<u64> = enumerate_elements(&f).map(|e| e.index()).collect();
            assert_eq!(all.len(), n);
            assert!(all.iter().enumerate().all(|(i, &x)| i as u64 == x));
        }
    }

    #[test]
    fn deterministic_orderings() {
        let a: Vec<Vec<u64>> = make_field(5, 3)
            .unwrap()
            .elements()
            .map(|e| e.coeffs().to_vec())
            .collect();
        let b: Vec<Vec<u64>> = make_field(5, 3)
            .unwrap()
            .elements()
            .map(|e| e.coeffs().to_vec())
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn error_paths() {
        let f9 = make_field(3, 2).unwrap();
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f9.zero().inv(), Err(GfError::DivisionByZero));
        assert_eq!(f9.one().checked_mul(&f4.one()), Err(GfError::MixedFields));
        assert_eq!(
            f9.one().checked_div(&f9.zero()),
            Err(GfError::DivisionByZero)
        );
        assert!(f9.element(&[3]).is_err());
        assert!(f9.element(&[1, 1, 1]).is_err());
    }

    #[test]
    fn every_element_fixed_by_q_power() {
        for (p, k) in [(2, 1), (2, 4), (3, 3), (5, 2), (7, 1)] {
            let f = make_field(p, k).unwrap();
            for a in f.elements() {
                assert_eq!(a.pow(f.order()), a);
                if !a.is_zero() {
                    assert!(a.pow(f.order() - 1).is_one());
                    assert!((&a * &a.inv().unwrap()).is_one());
                }
            }
        }
    }

    fn field_strategy() -> impl Strategy<Value = (u64, u32)> {
        prop_oneof![
            Just((2, 5)),
            Just((3, 4)),
            Just((5, 3)),
            Just((7, 2)),
            Just((2, 11))
        ]
    }

    proptest! {
        #[test]
        fn field_axioms((p, k) in field_strategy(), x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
            let f = make_field(p, k).unwrap();
            let q = f.order();
            let (a, b, c) = (f.from_index(x % q), f.from_index(y % q), f.from_index(z % q));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert!((&a + &-&a).is_zero());
            prop_assert_eq!(a.pow(q), a.clone());
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!((&a * &b).inv().unwrap(), &a.inv().unwrap() * &b.inv().unwrap());
            }
        }

        #[test]
        fn trace_is_additive_and_frobenius_stable((p, k) in field_strategy(), x in any::<u64>(), y in any::<u64>()) {
            let f = make_field(p, k).unwrap();
            let q = f.order();
            let (a, b) = (f.from_index(x % q), f.from_index(y % q));
            prop_assert_eq!((&a + &b).trace_to_prime(), (a.trace_to_prime() + b.trace_to_prime()) % p);
            prop_assert_eq!(a.frobenius().trace_to_prime(), a.trace_to_prime());
        }
    }
}
