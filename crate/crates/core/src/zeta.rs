//! L-polynomials from point counts.
//!
//! The zeta function of a genus-g curve over F_q is
//! `Z(T) = L(T) / ((1 - T)(1 - qT))` with `L(T) = prod (1 - α_j T)` of degree
//! `2g`. Writing `p_k = Σ α_j^k = q^k + 1 - N_k`, Newton's identities give the
//! first `g` coefficients of `L` from `N_1..N_g`, and the functional equation
//! `a_{2g-i} = q^{g-i} a_i` fills in the rest.
//!
//! Coefficients are `i128`; any overflow is reported instead of wrapping.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::curves::{within_weil_bound, PointCounts};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("no point counts given")]
    EmptyCounts,
    #[error("need N_1..N_{need} but only {have} counts were given")]
    InsufficientCounts { have: usize, need: usize },
    #[error("Newton identity for a_{index} does not divide exactly; counts are corrupt")]
    NonIntegralCoefficient { index: usize },
    #[error(
        "surplus count N_{k} = {found} disagrees with the reconstructed prediction {expected}"
    )]
    SurplusMismatch {
        k: usize,
        expected: i128,
        found: u64,
    },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("q = {0} is not a prime power")]
    InvalidFieldSize(u64),
    #[error("L-polynomial must have odd length 2g + 1 with constant term 1")]
    BadShape,
    #[error("functional equation a_(2g-i) = q^(g-i) a_i fails at i = {index}")]
    FunctionalEquation { index: usize },
    #[error("implied count N_{k} violates the Weil bound")]
    WeilBound { k: usize },
}

/// `L(T) = 1 + a_1 T + ... + a_{2g} T^{2g}` for a curve over F_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LPolynomial {
    q: u64,
    g: usize,
    coeffs: Vec<i128>,
}

/// `(p, n)` with `q = p^n`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            p = d;
            break;
        }
        d += 1;
    }
    let mut n = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

fn checked_pow(base: i128, exp: usize) -> Result<i128, ZetaError> {
    base.checked_pow(exp as u32).ok_or(ZetaError::Overflow)
}

impl LPolynomial {
    /// Build from `a_0..a_{2g}` and verify the functional equation.
    pub fn from_coeffs(q: u64, coeffs: Vec<i128>) -> Result<Self, ZetaError> {
        if prime_power(q).is_none() {
            return Err(ZetaError::InvalidFieldSize(q));
        }
        if coeffs.len().is_multiple_of(2) || coeffs[0] != 1 {
            return Err(ZetaError::BadShape);
        }
        let l = Self {
            q,
            g: coeffs.len() / 2,
            coeffs,
        };
        l.check_functional_equation()?;
        Ok(l)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        2 * self.g
    }

    pub fn check_functional_equation(&self) -> Result<(), ZetaError> {
        let q = self.q as i128;
        for i in 0..=self.g {
            let scaled = checked_pow(q, self.g - i)?
                .checked_mul(self.coeffs[i])
                .ok_or(ZetaError::Overflow)?;
            if self.coeffs[2 * self.g - i] != scaled {
                return Err(ZetaError::FunctionalEquation { index: i });
            }
        }
        Ok(())
    }

    /// Check that every implied `N_k`, `k <= 2g`, is nonnegative and within
    /// the Weil bound. This is the exact shadow of `|α_j| = sqrt(q)`.
    pub fn check_weil_bounds(&self) -> Result<(), ZetaError> {
        let sums = self.power_sums_to(2 * self.g)?;
        for (i, s) in sums.into_iter().enumerate() {
            let k = i + 1;
            let n = checked_pow(self.q as i128, k)?
                .checked_add(1 - s)
                .ok_or(ZetaError::Overflow)?;
            if !within_weil_bound(self.q, self.g, k as u32, n) {
                return Err(ZetaError::WeilBound { k });
            }
        }
        Ok(())
    }

    /// Product of two L-polynomials over the same field.
    pub fn product(&self, other: &Self) -> Result<Self, ZetaError> {
        if self.q != other.q {
            return Err(ZetaError::InvalidFieldSize(other.q));
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = a.checked_mul(b).ok_or(ZetaError::Overflow)?;
                out[i + j] = out[i + j].checked_add(t).ok_or(ZetaError::Overflow)?;
            }
        }
        Self::from_coeffs(self.q, out)
    }

    /// Elementary symmetric functions of the reciprocal roots:
    /// `e_i = (-1)^i a_i`.
    fn elementary(&self, i: usize) -> i128 {
        match self.coeffs.get(i) {
            Some(&a) if i.is_multiple_of(2) => a,
            Some(&a) => -a,
            None => 0,
        }
    }

    /// `p_1..p_n` from the coefficients via Newton's identities.
    fn power_sums_to(&self, n: usize) -> Result<Vec<i128>, ZetaError> {
        let mut sums: Vec<i128> = Vec::with_capacity(n);
        for k in 1..=n {
            // k e_k = Σ_{j=1}^{k} (-1)^{j-1} e_{k-j} p_j, solved for p_k
            let mut acc = (k as i128)
                .checked_mul(self.elementary(k))
                .ok_or(ZetaError::Overflow)?;
            for j in 1..k {
                let term = self
                    .elementary(k - j)
                    .checked_mul(sums[j - 1])
                    .ok_or(ZetaError::Overflow)?;
                acc = if j % 2 == 1 {
                    acc.checked_sub(term)
                } else {
                    acc.checked_add(term)
                }
                .ok_or(ZetaError::Overflow)?;
            }
            sums.push(if k % 2 == 1 {
                acc
            } else {
                acc.checked_neg().ok_or(ZetaError::Overflow)?
            });
        }
        Ok(sums)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Lowest degree first, e.g. `1 + 6*T^4 + 81*T^8`.
impl fmt::Display for LPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            first = false;
            match (i, mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, 1) => f.write_str("T")?,
                (1, _) => write!(f, "{mag}*T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{mag}*T^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LRecord {
    q: u64,
    g: usize,
    coeffs: Vec<String>,
}

impl Serialize for LPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LRecord {
            q: self.q,
            g: self.g,
            coeffs: self.coeffs.iter().map(i128::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rec = LRecord::deserialize(d)?;
        let coeffs = rec
            .coeffs
            .iter()
            .map(|c| c.parse::<i128>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != 2 * rec.g + 1 {
            return Err(D::Error::custom("coeffs must have length 2g + 1"));
        }
        LPolynomial::from_coeffs(rec.q, coeffs).map_err(D::Error::custom)
    }
}

/// `p_k = q^k + 1 - N_k`.
pub fn power_sums(counts: &PointCounts) -> Result<Vec<i128>, ZetaError> {
    if counts.counts.is_empty() {
        return Err(ZetaError::EmptyCounts);
    }
    counts
        .counts
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let qk = checked_pow(counts.q as i128, i + 1)?;
            Ok(qk + 1 - n as i128)
        })
        .collect()
}

/// Reconstruct `L` from `N_1..N_m`, `m >= g`. Counts beyond `N_g` are used
/// only to check the reconstruction.
pub fn l_from_counts(counts: &PointCounts, g: usize) -> Result<LPolynomial, ZetaError> {
    if counts.counts.len() < g {
        return Err(ZetaError::InsufficientCounts {
            have: counts.counts.len(),
            need: g,
        });
    }
    let q = counts.q as i128;
    let mut coeffs = vec![0i128; 2 * g + 1];
    coeffs[0] = 1;
    if g > 0 {
        let sums = power_sums(counts)?;
        let mut e = vec![1i128];
        for i in 1..=g {
            let mut acc = 0i128;
            for j in 1..=i {
                let term = e[i - j]
                    .checked_mul(sums[j - 1])
                    .ok_or(ZetaError::Overflow)?;
                acc = if j % 2 == 1 {
                    acc.checked_add(term)
                } else {
                    acc.checked_sub(term)
                }
                .ok_or(ZetaError::Overflow)?;
            }
            if acc % i as i128 != 0 {
                return Err(ZetaError::NonIntegralCoefficient { index: i });
            }
            e.push(acc / i as i128);
        }
        for i in 1..=g {
            coeffs[i] = if i % 2 == 0 { e[i] } else { -e[i] };
        }
        for i in 0..g {
            coeffs[2 * g - i] = checked_pow(q, g - i)?
                .checked_mul(coeffs[i])
                .ok_or(ZetaError::Overflow)?;
        }
    }
    let l = LPolynomial::from_coeffs(counts.q, coeffs)?;
    for (i, &found) in counts.counts.iter().enumerate().skip(g) {
        let expected = predicted_counts(&l, i + 1)?;
        if expected != found as i128 {
            return Err(ZetaError::SurplusMismatch {
                k: i + 1,
                expected,
                found,
            });
        }
    }
    l.check_weil_bounds()?;
    Ok(l)
}

/// Taylor coefficients `c_0..c_n` of `L(T) / ((1 - T)(1 - qT))`.
pub fn zeta_series(l: &LPolynomial, n: usize) -> Result<Vec<i128>, ZetaError> {
    let q = l.q as i128;
    let mut out = Vec::with_capacity(n + 1);
    let mut prefix = 0i128;
    let mut prev = 0i128;
    for i in 0..=n {
        // divide by (1 - T): prefix sums; then by (1 - qT): c_i = b_i + q c_{i-1}
        prefix = prefix
            .checked_add(l.coeffs.get(i).copied().unwrap_or(0))
            .ok_or(ZetaError::Overflow)?;
        let c = q
            .checked_mul(prev)
            .and_then(|t| t.checked_add(prefix))
            .ok_or(ZetaError::Overflow)?;
        out.push(c);
        prev = c;
    }
    Ok(out)
}

/// `N_k` over F_{q^k} implied by `L`.
pub fn predicted_counts(l: &LPolynomial, k: usize) -> Result<i128, ZetaError> {
    assert!(k >= 1, "extension degree starts at 1");
    let sums = l.power_sums_to(k)?;
    checked_pow(l.q as i128, k)?
        .checked_add(1)
        .and_then(|v| v.checked_sub(sums[k - 1]))
        .ok_or(ZetaError::Overflow)
}
