//! Curve models over prime fields and exact point counting.
//!
//! Two families are supported:
//!
//! * hyperelliptic `y^2 = f(x)` with `p` odd and `f` squarefree of degree
//!   at least 3, genus `ceil(deg f / 2) - 1`;
//! * Artin-Schreier `y^p - y = h(x)` with `deg h` prime to `p`, genus
//!   `(p - 1)(deg h - 1) / 2`.
//!
//! Counts are for the smooth projective model. The text form used by the
//! CLI and by survey output is `hyp p:3 f:[c_0,c_1,...]` or
//! `as p:2 h:[c_0,c_1,...]`, coefficients listed from the constant term up.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use thiserror::Error;

use crate::fpoly;
use crate::gf::{self, FieldElement, FieldSpec, GfError, DEFAULT_FIELD_CAP};
use crate::polygon::{NewtonPolygon, Slope};
use crate::zeta::LPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {value} at degree {index} is not reduced modulo {p}")]
    CoefficientOutOfRange { index: usize, value: u64, p: u64 },
    #[error("f is not squarefree; the model is singular")]
    NotSquarefree,
    #[error("hyperelliptic models y^2 = f(x) need odd characteristic")]
    EvenCharHyperelliptic,
    #[error("deg h = {degree} is divisible by p = {p}")]
    PoleOrderDivisibleByP { degree: usize, p: u64 },
    #[error("defining polynomial has degree {degree}, need at least {min}")]
    DegreeTooSmall { degree: usize, min: usize },
    #[error("p-rank via the Cartier-Manin matrix needs a hyperelliptic model")]
    UnsupportedKind,
    #[error("N_{k} = {count} violates the Hasse-Weil bound (implementation bug)")]
    WeilBoundViolated { k: u32, count: u64 },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown curve name {0:?}")]
    UnknownName(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    /// `y^2 = f(x)`
    Hyperelliptic,
    /// `y^p - y = h(x)`
    ArtinSchreier,
}

impl CurveKind {
    fn tag(self) -> &'static str {
        match self {
            CurveKind::Hyperelliptic => "hyp",
            CurveKind::ArtinSchreier => "as",
        }
    }

    fn poly_name(self) -> &'static str {
        match self {
            CurveKind::Hyperelliptic => "f",
            CurveKind::ArtinSchreier => "h",
        }
    }
}

/// A validated curve over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveModel {
    kind: CurveKind,
    p: u64,
    poly: Vec<u64>,
    genus: usize,
}

/// Validate a model and compute its genus.
pub fn make_curve(
    kind: CurveKind,
    p: u64,
    defining_poly: &[u64],
) -> Result<CurveModel, CurveError> {
    CurveModel::new(kind, p, defining_poly)
}

impl CurveModel {
    pub fn new(kind: CurveKind, p: u64, defining_poly: &[u64]) -> Result<Self, CurveError> {
        if !fpoly::is_prime(p) {
            return Err(CurveError::NotPrime(p));
        }
        if let Some((index, &value)) = defining_poly.iter().enumerate().find(|(_, &c)| c >= p) {
            return Err(CurveError::CoefficientOutOfRange { index, value, p });
        }
        let mut poly = defining_poly.to_vec();
        fpoly::normalize(&mut poly);
        let degree = fpoly::degree(&poly).unwrap_or(0);
        let genus = match kind {
            CurveKind::Hyperelliptic => {
                if p == 2 {
                    return Err(CurveError::EvenCharHyperelliptic);
                }
                if degree < 3 {
                    return Err(CurveError::DegreeTooSmall { degree, min: 3 });
                }
                if !fpoly::is_squarefree(&poly, p) {
                    return Err(CurveError::NotSquarefree);
                }
                degree.div_ceil(2) - 1
            }
            CurveKind::ArtinSchreier => {
                if degree < 2 {
                    return Err(CurveError::DegreeTooSmall { degree, min: 2 });
                }
                if (degree as u64).is_multiple_of(p) {
                    return Err(CurveError::PoleOrderDivisibleByP { degree, p });
                }
                (p as usize - 1) * (degree - 1) / 2
            }
        };
        Ok(Self {
            kind,
            p,
            poly,
            genus,
        })
    }

    pub fn hyperelliptic(p: u64, f: &[u64]) -> Result<Self, CurveError> {
        Self::new(CurveKind::Hyperelliptic, p, f)
    }

    pub fn artin_schreier(p: u64, h: &[u64]) -> Result<Self, CurveError> {
        Self::new(CurveKind::ArtinSchreier, p, h)
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Defining polynomial, constant term first, no trailing zeros.
    pub fn defining_poly(&self) -> &[u64] {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    fn eval<'f>(&self, x: &FieldElement<'f>) -> FieldElement<'f> {
        let field = x.field();
        let mut acc = field.zero();
        for &c in self.poly.iter().rev() {
            acc = &(&acc * x) + &field.from_prime(c);
        }
        acc
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} p:{} {}:[",
            self.kind.tag(),
            self.p,
            self.kind.poly_name()
        )?;
        for (i, c) in self.poly.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for CurveModel {
    type Err = CurveError;

    /// Parses the canonical text form. Only canonical input is accepted
    /// (single spaces, reduced coefficients, nonzero leading coefficient),
    /// so printing a parsed curve reproduces the input byte for byte.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos: usize, message: &str| CurveError::Parse {
            pos,
            message: message.to_string(),
        };
        let (kind, rest) = if let Some(r) = s.strip_prefix("hyp ") {
            (CurveKind::Hyperelliptic, r)
        } else if let Some(r) = s.strip_prefix("as ") {
            (CurveKind::ArtinSchreier, r)
        } else {
            return Err(err(0, "expected `hyp ` or `as `"));
        };
        let mut pos = s.len() - rest.len();
        let rest = rest
            .strip_prefix("p:")
            .ok_or_else(|| err(pos, "expected `p:`"))?;
        pos += 2;
        let space = rest
            .find(' ')
            .ok_or_else(|| err(pos, "expected a space after p"))?;
        let p: u64 = rest[..space]
            .parse()
            .map_err(|_| err(pos, "invalid characteristic"))?;
        pos += space + 1;
        let rest = &rest[space + 1..];
        let prefix = format!("{}:[", kind.poly_name());
        let rest = rest
            .strip_prefix(prefix.as_str())
            .ok_or_else(|| err(pos, &format!("expected `{prefix}`")))?;
        pos += prefix.len();
        let body = rest
            .strip_suffix(']')
            .ok_or_else(|| err(s.len(), "expected closing `]`"))?;
        let mut coeffs = Vec::new();
        for item in body.split(',') {
            let c: u64 = item.parse().map_err(|_| err(pos, "invalid coefficient"))?;
            if item.len() > 1 && item.starts_with('0') {
                return Err(err(pos, "leading zeros are not canonical"));
            }
            if c >= p {
                return Err(err(pos, "coefficient not reduced modulo p"));
            }
            coeffs.push(c);
            pos += item.len() + 1;
        }
        if coeffs.last() == Some(&0) {
            return Err(err(s.len() - 1, "leading coefficient must be nonzero"));
        }
        Self::new(kind, p, &coeffs)
    }
}

/// Point counts `N_1, ..., N_m` over `F_{q^k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCounts {
    pub q: u64,
    pub genus: usize,
    pub counts: Vec<u64>,
}

impl PointCounts {
    /// Check `|N_k - (q^k + 1)| <= 2g sqrt(q^k)` by squaring both sides.
    pub fn check_hasse_weil(&self) -> Result<(), CurveError> {
        for (i, &n) in self.counts.iter().enumerate() {
            let k = i as u32 + 1;
            if !within_weil_bound(self.q, self.genus, k, n as i128) {
                return Err(CurveError::WeilBoundViolated { k, count: n });
            }
        }
        Ok(())
    }
}

/// `|n - (q^k + 1)|^2 <= 4 g^2 q^k`, `false` if the numbers overflow.
pub(crate) fn within_weil_bound(q: u64, genus: usize, k: u32, n: i128) -> bool {
    let Some(qk) = (q as i128).checked_pow(k) else {
        return false;
    };
    let dev = n - qk - 1;
    let g = genus as i128;
    match (dev.checked_mul(dev), (4 * g * g).checked_mul(qk)) {
        (Some(lhs), Some(rhs)) => n >= 0 && lhs <= rhs,
        _ => false,
    }
}

/// Number of points over `F_{p^k}` with the canonical field.
pub fn count_points(model: &CurveModel, k: u32) -> Result<u64, CurveError> {
    count_points_with_cap(model, k, DEFAULT_FIELD_CAP)
}

pub fn count_points_with_cap(model: &CurveModel, k: u32, cap: u64) -> Result<u64, CurveError> {
    if k == 1 {
        gf::checked_order(model.p, 1, cap)?;
        return Ok(count_prime_field(model));
    }
    let q = gf::checked_order(model.p, k, cap)?;
    if q > TABLE_LIMIT {
        let field = FieldSpec::with_cap(model.p, k, cap)?;
        return Ok(count_points_in(model, &field));
    }
    let tables = field_tables(model.kind, model.p, k)?;
    let affine: u64 = (0..q as usize)
        .map(|x| tables.fiber[tables.eval(&model.poly, x)] as u64)
        .sum();
    Ok(affine + points_at_infinity(model, k))
}

/// Fields up to this size get cached lookup tables.
const TABLE_LIMIT: u64 = 1 << 20;

/// Lookup tables for the canonical field of order `p^k`, with elements
/// named by their index.
struct FieldTables {
    p: usize,
    /// `exp[i]` is the index of `g^i` for a fixed primitive element `g`.
    exp: Vec<u32>,
    /// Inverse of `exp` on nonzero elements.
    log: Vec<u32>,
    /// Number of `y` solving `y^2 = v` or `y^p - y = v`, by index of `v`.
    fiber: Vec<u32>,
}

impl FieldTables {
    fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.exp.len();
        self.exp[(self.log[a] as usize + self.log[b] as usize) % n] as usize
    }

    /// Horner evaluation of a polynomial over F_p at the element with index `x`.
    /// Adding a prime-field constant only changes the lowest base-`p` digit.
    fn eval(&self, poly: &[u64], x: usize) -> usize {
        let mut acc = 0usize;
        for &c in poly.iter().rev() {
            acc = self.mul(acc, x);
            let d0 = acc % self.p;
            acc = acc - d0 + (d0 + c as usize) % self.p;
        }
        acc
    }
}

thread_local! {
    static TABLES: RefCell<HashMap<(CurveKind, u64, u32), Rc<FieldTables>>> = RefCell::default();
}

fn primitive_element(field: &FieldSpec) -> FieldElement<'_> {
    let n = field.order() - 1;
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    field
        .elements()
        .skip(1)
        .find(|g| primes.iter().all(|&r| !g.pow(n / r).is_one()))
        .expect("the multiplicative group is cyclic")
}

fn field_tables(kind: CurveKind, p: u64, k: u32) -> Result<Rc<FieldTables>, CurveError> {
    if let Some(t) = TABLES.with(|c| c.borrow().get(&(kind, p, k)).cloned()) {
        return Ok(t);
    }
    let field = FieldSpec::new(p, k)?;
    let q = field.order() as usize;
    let g = primitive_element(&field);
    let mut exp = Vec::with_capacity(q - 1);
    let mut log = vec![0u32; q];
    let mut power = field.one();
    for i in 0..q - 1 {
        let idx = power.index() as usize;
        exp.push(idx as u32);
        log[idx] = i as u32;
        power = &power * &g;
    }
    let mut fiber = vec![0u32; q];
    for y in field.elements() {
        let v = match kind {
            CurveKind::Hyperelliptic => y.square(),
            CurveKind::ArtinSchreier => &y.frobenius() - &y,
        };
        fiber[v.index() as usize] += 1;
    }
    let t = Rc::new(FieldTables {
        p: p as usize,
        exp,
        log,
        fiber,
    });
    TABLES.with(|c| c.borrow_mut().insert((kind, p, k), t.clone()));
    Ok(t)
}

/// Count over an explicitly constructed field, which may use any modulus.
pub fn count_points_in(model: &CurveModel, field: &FieldSpec) -> u64 {
    assert_eq!(
        field.characteristic(),
        model.p,
        "field characteristic mismatch"
    );
    let q = field.order();
    let p = model.p;
    let affine: u64 = match model.kind {
        CurveKind::Hyperelliptic => {
            let half = (q - 1) / 2;
            field
                .elements()
                .map(|x| {
                    let v = model.eval(&x);
                    if v.is_zero() {
                        1
                    } else if v.pow(half).is_one() {
                        2
                    } else {
                        0
                    }
                })
                .sum()
        }
        CurveKind::ArtinSchreier => {
            let hits = field
                .elements()
                .filter(|x| model.eval(x).trace_to_prime() == 0)
                .count() as u64;
            hits * p
        }
    };
    affine + points_at_infinity(model, field.degree())
}

fn points_at_infinity(model: &CurveModel, k: u32) -> u64 {
    match model.kind {
        CurveKind::ArtinSchreier => 1,
        CurveKind::Hyperelliptic if model.degree() % 2 == 1 => 1,
        CurveKind::Hyperelliptic => {
            let lead = *model.poly.last().unwrap();
            // every element of F_p is a square in F_{p^2}
            let square =
                k.is_multiple_of(2) || fpoly::pow_mod(lead, (model.p - 1) / 2, model.p) == 1;
            if square {
                2
            } else {
                0
            }
        }
    }
}

fn count_prime_field(model: &CurveModel) -> u64 {
    let p = model.p;
    let affine: u64 = match model.kind {
        CurveKind::Hyperelliptic => (0..p)
            .map(|x| {
                let v = fpoly::eval_prime(&model.poly, x, p);
                if v == 0 {
                    1
                } else if fpoly::pow_mod(v, (p - 1) / 2, p) == 1 {
                    2
                } else {
                    0
                }
            })
            .sum(),
        CurveKind::ArtinSchreier => {
            (0..p)
                .filter(|&x| fpoly::eval_prime(&model.poly, x, p) == 0)
                .count() as u64
                * p
        }
    };
    affine + points_at_infinity(model, 1)
}

/// `N_1, ..., N_m`, each checked against the Hasse-Weil bound.
pub fn count_profile(model: &CurveModel, m: usize) -> Result<PointCounts, CurveError> {
    count_profile_with_cap(model, m, DEFAULT_FIELD_CAP)
}

pub fn count_profile_with_cap(
    model: &CurveModel,
    m: usize,
    cap: u64,
) -> Result<PointCounts, CurveError> {
    let counts = (1..=m as u32)
        .map(|k| count_points_with_cap(model, k, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let pc = PointCounts {
        q: model.p,
        genus: model.genus,
        counts,
    };
    pc.check_hasse_weil()?;
    Ok(pc)
}

/// The g x g Cartier-Manin matrix: entry `(i, j)` is the coefficient of
/// `x^{ip - j}` in `f^{(p-1)/2}`, for `1 <= i, j <= g`.
pub fn cartier_manin_matrix(model: &CurveModel) -> Result<Vec<Vec<u64>>, CurveError> {
    if model.kind != CurveKind::Hyperelliptic {
        return Err(CurveError::UnsupportedKind);
    }
    let p = model.p;
    let g = model.genus;
    let power = fpoly::pow(&model.poly, (p - 1) / 2, p);
    // exponents below zero (possible when g >= p) contribute nothing
    let coeff = |i: usize, j: usize| {
        (i * p as usize)
            .checked_sub(j)
            .and_then(|e| power.get(e).copied())
            .unwrap_or(0)
    };
    Ok((1..=g)
        .map(|i| (1..=g).map(|j| coeff(i, j)).collect())
        .collect())
}

/// p-rank of a hyperelliptic Jacobian from the stable rank of the
/// Cartier-Manin matrix.
///
/// The product `M M^(σ) ... M^(σ^{g-1})` twists entries by Frobenius; since
/// the model is defined over F_p the twist is trivial and the product is
/// `M^g`.
pub fn hasse_witt_p_rank(model: &CurveModel) -> Result<usize, CurveError> {
    let m = cartier_manin_matrix(model)?;
    let p = model.p;
    let g = model.genus;
    let mut prod = m.clone();
    for _ in 1..g {
        prod = mat_mul(&prod, &m, p);
    }
    Ok(rank_mod_p(prod, p))
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(0, |acc, l| {
                        fpoly::add_mod(acc, fpoly::mul_mod(a[i][l], b[l][j], p), p)
                    })
                })
                .collect()
        })
        .collect()
}

pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = fpoly::inv_mod(rows[rank][col], p);
        for r in 0..nrows {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let factor = fpoly::mul_mod(rows[r][col], inv, p);
            let pivot_row = rows[rank].clone();
            for (x, &y) in rows[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x = fpoly::sub_mod(*x, fpoly::mul_mod(factor, y, p), p);
            }
        }
        rank += 1;
    }
    rank
}

/// Data a named curve is expected to reproduce.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expected {
    pub l_poly: Option<LPolynomial>,
    pub polygon: Option<NewtonPolygon>,
    pub p_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCurve {
    pub name: String,
    pub model: CurveModel,
    pub expected: Expected,
}

/// Degree-9 curve over F_3 of genus 4 with 3-rank 0 and slopes 1/4, 3/4.
pub const AP_G4_P3: &str = "ap-g4-p3";
/// Genus-11 Artin-Schreier curve over F_2 with slopes 5/11, 6/11.
pub const BLACHE_G11_P2: &str = "blache-g11-p2";

/// The supersingular curve `y^p - y = x R(x)` for the additive polynomial
/// `R(x) = a_0 x + a_1 x^p + ... + a_d x^{p^d}`.
///
/// `xR(x)` has degree `p^d + 1`, so the Artin-Schreier genus formula gives
/// `(p - 1) p^d / 2`.
pub fn vdgvdv(p: u64, additive: &[u64]) -> Result<NamedCurve, CurveError> {
    if !fpoly::is_prime(p) {
        return Err(CurveError::NotPrime(p));
    }
    let d = match additive.iter().rposition(|&a| a != 0) {
        Some(d) => d,
        None => return Err(CurveError::DegreeTooSmall { degree: 0, min: 2 }),
    };
    let additive = &additive[..=d];
    let top = (p as usize).pow(d as u32) + 1;
    let mut h = vec![0u64; top + 1];
    for (i, &a) in additive.iter().enumerate() {
        if a >= p {
            return Err(CurveError::CoefficientOutOfRange {
                index: i,
                value: a,
                p,
            });
        }
        h[(p as usize).pow(i as u32) + 1] = a;
    }
    let model = CurveModel::artin_schreier(p, &h)?;
    let name = format!(
        "vdgvdv-p{p}-R[{}]",
        additive
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    let g = model.genus();
    Ok(NamedCurve {
        name,
        model,
        expected: Expected {
            polygon: Some(crate::polygon::sigma(g)),
            p_rank: Some(0),
            ..Expected::default()
        },
    })
}

fn parse_vdgvdv(name: &str) -> Option<(u64, Vec<u64>)> {
    let rest = name.strip_prefix("vdgvdv-p")?;
    let (p, rest) = rest.split_once("-R[")?;
    let body = rest.strip_suffix(']')?;
    let p = p.parse().ok()?;
    let coeffs = body
        .split(',')
        .map(|c| c.parse().ok())
        .collect::<Option<Vec<u64>>>()?;
    Some((p, coeffs))
}

/// Named curves with known expected invariants.
pub fn catalog() -> Vec<NamedCurve> {
    let ap = CurveModel::hyperelliptic(3, &[0, 1, 1, 2, 1, 2, 1, 1, 0, 1]).expect("valid model");
    let mut blache_h = vec![0u64; 24];
    for e in [5, 7, 17, 21, 23] {
        blache_h[e] = 1;
    }
    let blache = CurveModel::artin_schreier(2, &blache_h).expect("valid model");
    let quarter = |a| Slope::new(a, 4).unwrap();
    let elevenths = |a| Slope::new(a, 11).unwrap();
    let mut out = vec![
        NamedCurve {
            name: AP_G4_P3.to_string(),
            model: ap,
            expected: Expected {
                l_poly: Some(
                    LPolynomial::from_coeffs(3, vec![1, 0, 0, 0, 6, 0, 0, 0, 81]).expect("valid L"),
                ),
                polygon: Some(
                    NewtonPolygon::from_entries([(quarter(1), 4), (quarter(3), 4)])
                        .expect("admissible"),
                ),
                p_rank: Some(0),
            },
        },
        NamedCurve {
            name: BLACHE_G11_P2.to_string(),
            model: blache,
            expected: Expected {
                polygon: Some(
                    NewtonPolygon::from_entries([(elevenths(5), 11), (elevenths(6), 11)])
                        .expect("admissible"),
                ),
                p_rank: Some(0),
                ..Expected::default()
            },
        },
    ];
    for (p, r) in [
        (2u64, vec![0u64, 1]),
        (2, vec![1, 1]),
        (2, vec![0, 0, 1]),
        (3, vec![0, 1]),
        (3, vec![2, 1]),
    ] {
        out.push(vdgvdv(p, &r).expect("valid family member"));
    }
    out
}

/// Find a catalog entry, or build a `vdgvdv-p{p}-R[a_0,...,a_d]` instance.
pub fn lookup(name: &str) -> Result<NamedCurve, CurveError> {
    if let Some(found) = catalog().into_iter().find(|c| c.name == name) {
        return Ok(found);
    }
    match parse_vdgvdv(name) {
        Some((p, coeffs)) => vdgvdv(p, &coeffs),
        None => Err(CurveError::UnknownName(name.to_string())),
    }
}
