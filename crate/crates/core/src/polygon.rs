//! Newton polygons as multisets of rational slopes.
//!
//! A polygon is stored as its slope multiset `λ -> e(λ)`, where `e(λ)` is the
//! horizontal length of the slope-`λ` part. The vertex path is derived on
//! demand by [`NewtonPolygon::break_points`]. Every `NewtonPolygon` value is
//! admissible and symmetric:
//!
//! * `λ = a/b` in lowest terms with `0 <= λ <= 1`;
//! * `b | e(λ)`, so `e(λ) λ` is an integer and vertices are lattice points;
//! * `e(λ) = e(1 - λ)`.
//!
//! All arithmetic is on integers; there is no floating point here.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::zeta::{prime_power, LPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("slope {a}/{b} is not a reduced fraction in [0, 1]")]
    InvalidSlope { a: u32, b: u32 },
    #[error("multiplicity {e} of slope {slope} is not divisible by its denominator")]
    NotIntegral { slope: Slope, e: u32 },
    #[error("slope {slope} has multiplicity {e} but its mirror has {mirror}")]
    NotSymmetric { slope: Slope, e: u32, mirror: u32 },
    #[error("lower hull is not an admissible symmetric polygon: {0}")]
    NotAdmissible(String),
    #[error("p-rank {f} is outside 0..={g} (or g = 0)")]
    InvalidPRank { g: usize, f: usize },
    #[error("genus must be at least 1")]
    InvalidGenus,
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A slope `a/b` in lowest terms with `0 <= a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    a: u32,
    b: u32,
}

impl Slope {
    pub const ZERO: Slope = Slope { a: 0, b: 1 };
    pub const HALF: Slope = Slope { a: 1, b: 2 };
    pub const ONE: Slope = Slope { a: 1, b: 1 };

    /// Reduces `a/b`; fails outside `[0, 1]`.
    pub fn new(a: u32, b: u32) -> Result<Self, PolygonError> {
        if b == 0 || a > b {
            return Err(PolygonError::InvalidSlope { a, b });
        }
        let d = gcd(a as u64, b as u64) as u32;
        Ok(Self { a: a / d, b: b / d })
    }

    pub fn numer(self) -> u32 {
        self.a
    }

    pub fn denom(self) -> u32 {
        self.b
    }

    /// `b - a`, the codimension of the associated Manin group.
    pub fn codim(self) -> u32 {
        self.b - self.a
    }

    /// `1 - λ`.
    pub fn dual(self) -> Self {
        Self {
            a: self.b - self.a,
            b: self.b,
        }
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a as u64 * other.b as u64).cmp(&(other.a as u64 * self.b as u64))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 1 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.b)
        }
    }
}

/// An admissible symmetric Newton polygon.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NewtonPolygon {
    entries: BTreeMap<Slope, u32>,
}

impl NewtonPolygon {
    /// The polygon of height 0.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Collect `(slope, e)` pairs, merging repeats and dropping zero
    /// multiplicities, then check admissibility and symmetry.
    pub fn from_entries<I: IntoIterator<Item = (Slope, u32)>>(
        iter: I,
    ) -> Result<Self, PolygonError> {
        let mut entries = BTreeMap::new();
        for (s, e) in iter {
            if e > 0 {
                *entries.entry(s).or_insert(0) += e;
            }
        }
        let np = Self { entries };
        np.validate()?;
        Ok(np)
    }

    fn validate(&self) -> Result<(), PolygonError> {
        for (&slope, &e) in &self.entries {
            if e % slope.b != 0 {
                return Err(PolygonError::NotIntegral { slope, e });
            }
            let mirror = self.multiplicity(slope.dual());
            if mirror != e {
                return Err(PolygonError::NotSymmetric { slope, e, mirror });
            }
        }
        Ok(())
    }

    /// `e(λ)`, zero when absent.
    pub fn multiplicity(&self, slope: Slope) -> u32 {
        self.entries.get(&slope).copied().unwrap_or(0)
    }

    /// `m(λ) = e(λ) / b_λ`, the number of Manin-group summands.
    pub fn summands(&self, slope: Slope) -> u32 {
        self.multiplicity(slope) / slope.b
    }

    /// `(λ, e(λ))` in increasing slope order.
    pub fn entries(&self) -> impl Iterator<Item = (Slope, u32)> + '_ {
        self.entries.iter().map(|(&s, &e)| (s, e))
    }

    /// Distinct slopes in increasing order.
    pub fn slopes(&self) -> impl Iterator<Item = Slope> + '_ {
        self.entries.keys().copied()
    }

    /// `Σ e(λ) = 2g`.
    pub fn height(&self) -> u32 {
        self.entries.values().sum()
    }

    pub fn genus(&self) -> usize {
        self.height() as usize / 2
    }

    /// Multiplicity of slope 0.
    pub fn p_rank(&self) -> usize {
        self.multiplicity(Slope::ZERO) as usize
    }

    pub fn is_supersingular(&self) -> bool {
        self.entries.keys().all(|&s| s == Slope::HALF)
    }

    pub fn is_ordinary(&self) -> bool {
        self.entries
            .keys()
            .all(|&s| s == Slope::ZERO || s == Slope::ONE)
    }

    /// Multiset union; the polygon of a product or a direct sum.
    pub fn join(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        for (&s, &e) in &other.entries {
            *entries.entry(s).or_insert(0) += e;
        }
        Self { entries }
    }

    /// Sorted distinct slope denominators.
    pub fn denominators(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.entries.keys().map(|s| s.b).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Vertices from `(0, 0)` to `(2g, g)` in `(Σ e, Σ e λ)` coordinates.
    pub fn break_points(&self) -> BreakPointPath {
        let mut pts = vec![(0u32, 0u32)];
        let (mut x, mut y) = (0, 0);
        for (s, e) in self.entries() {
            x += e;
            y += e / s.b * s.a;
            pts.push((x, y));
        }
        BreakPointPath(pts)
    }

    /// `scale * y(x)` for `x = 0..=height`, where `scale` is a multiple of
    /// every slope denominator so that all values are integers.
    fn scaled_profile(&self, scale: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.height() as usize + 1);
        let mut y = 0u64;
        out.push(0);
        for (s, e) in self.entries() {
            let step = scale / s.b as u64 * s.a as u64;
            for _ in 0..e {
                y += step;
                out.push(y);
            }
        }
        out
    }

    fn denominator_lcm(&self) -> u64 {
        self.entries.keys().fold(1, |acc, s| lcm(acc, s.b as u64))
    }

    /// Sum of `y(x)` over integer `x`, scaled by `scale`. Strictly decreasing
    /// along `≺`, so sorting by it is a linear extension of dominance.
    pub(crate) fn scaled_area(&self, scale: u64) -> u64 {
        self.scaled_profile(scale).iter().sum()
    }

    pub(crate) fn scale_for(polys: &[NewtonPolygon]) -> u64 {
        polys.iter().fold(1, |acc, p| lcm(acc, p.denominator_lcm()))
    }

    /// Plain-text TSV of the vertex path with a header row.
    pub fn to_tsv(&self) -> String {
        self.break_points().to_tsv()
    }
}

/// Result of comparing two polygons under `⪯`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dominance {
    /// First polygon lies on or above the second, and they differ.
    LessOrEqual,
    /// First polygon lies on or below the second, and they differ.
    GreaterOrEqual,
    Equal,
    Incomparable,
}

/// `μ ⪯ ν` when both have the same endpoints and `μ` lies on or above `ν`.
///
/// Vertices of admissible polygons are lattice points, so comparing the
/// height functions at integer abscissae decides the order.
pub fn dominates(mu: &NewtonPolygon, nu: &NewtonPolygon) -> Dominance {
    match mu.partial_cmp(nu) {
        Some(Ordering::Less) => Dominance::LessOrEqual,
        Some(Ordering::Greater) => Dominance::GreaterOrEqual,
        Some(Ordering::Equal) => Dominance::Equal,
        None => Dominance::Incomparable,
    }
}

impl PartialOrd for NewtonPolygon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.height() != other.height() {
            return None;
        }
        if self == other {
            return Some(Ordering::Equal);
        }
        let scale = lcm(self.denominator_lcm(), other.denominator_lcm());
        let (a, b) = (self.scaled_profile(scale), other.scaled_profile(scale));
        let above = a.iter().zip(&b).all(|(x, y)| x >= y);
        let below = a.iter().zip(&b).all(|(x, y)| x <= y);
        match (above, below) {
            (true, _) => Some(Ordering::Less),
            (_, true) => Some(Ordering::Greater),
            _ => None,
        }
    }
}

/// Vertex path of a Newton polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakPointPath(pub Vec<(u32, u32)>);

impl BreakPointPath {
    pub fn points(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("x\ty\n");
        for (x, y) in &self.0 {
            out.push_str(&format!("{x}\t{y}\n"));
        }
        out
    }
}

/// `σ_g`: slope 1/2 with multiplicity `2g`.
pub fn sigma(g: usize) -> NewtonPolygon {
    NewtonPolygon::from_entries([(Slope::HALF, 2 * g as u32)])
        .expect("supersingular polygon is admissible")
}

/// The most generic polygon of height `2g` and p-rank `f`.
///
/// `ν_g^g = {0^g, 1^g}`; `ν_g^0` is `σ_g` for `g <= 2` and `{1/g, (g-1)/g}`
/// (each with multiplicity `g`) for `g >= 3`; otherwise
/// `ν_g^f = ν_f^f ⊕ ν_{g-f}^0`.
pub fn nu(g: usize, f: usize) -> Result<NewtonPolygon, PolygonError> {
    if g == 0 {
        return Err(PolygonError::InvalidGenus);
    }
    if f > g {
        return Err(PolygonError::InvalidPRank { g, f });
    }
    let g32 = g as u32;
    Ok(if f == g {
        NewtonPolygon::from_entries([(Slope::ZERO, g32), (Slope::ONE, g32)])?
    } else if f == 0 {
        if g <= 2 {
            sigma(g)
        } else {
            NewtonPolygon::from_entries([
                (Slope::new(1, g32)?, g32),
                (Slope::new(g32 - 1, g32)?, g32),
            ])?
        }
    } else {
        nu(f, f)?.join(&nu(g - f, 0)?)
    })
}

pub fn join(x: &NewtonPolygon, y: &NewtonPolygon) -> NewtonPolygon {
    x.join(y)
}

pub fn p_rank(np: &NewtonPolygon) -> usize {
    np.p_rank()
}

fn valuation(mut x: i128, p: u64) -> u32 {
    debug_assert!(x != 0);
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Lower convex hull of lattice points sorted by `x`, collinear points
/// dropped. Returns the hull vertices.
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &c in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) as i128 * (c.1 - b.1) as i128
                - (b.1 - a.1) as i128 * (c.0 - b.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(c);
    }
    hull
}

/// Newton polygon of an L-polynomial with `v(q) = 1`.
pub fn np_from_l(l: &LPolynomial) -> Result<NewtonPolygon, PolygonError> {
    let (p, n) = prime_power(l.q()).expect("LPolynomial q is a prime power");
    // Integer y-coordinates v_p(a_i); true valuations are these over n.
    let points: Vec<(i64, i64)> = l
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| (i as i64, valuation(a, p) as i64))
        .collect();
    let hull = lower_hull(&points);
    let mut entries = Vec::new();
    for w in hull.windows(2) {
        let dx = (w[1].0 - w[0].0) as u32;
        let dy = w[1].1 - w[0].1;
        if dy < 0 || dy as u64 > dx as u64 * n as u64 {
            return Err(PolygonError::NotAdmissible(format!(
                "segment slope {dy}/{} outside [0, 1]",
                dx as u64 * n as u64
            )));
        }
        let slope = Slope::new(dy as u32, dx * n)?;
        entries.push((slope, dx));
    }
    NewtonPolygon::from_entries(entries).map_err(|e| PolygonError::NotAdmissible(e.to_string()))
}

/// Text form, e.g. `4*(1/4)+4*(3/4)`; the height-0 polygon is `empty`.
impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("empty");
        }
        for (i, (s, e)) in self.entries().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{e}*({s})")?;
        }
        Ok(())
    }
}

impl FromStr for NewtonPolygon {
    type Err = PolygonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos: usize, message: &str| PolygonError::Parse {
            pos,
            message: message.to_string(),
        };
        let trimmed = s.trim();
        if trimmed == "empty" {
            return Ok(Self::empty());
        }
        let offset = s.len() - s.trim_start().len();
        let mut pos = offset;
        let mut entries = Vec::new();
        for term in trimmed.split('+') {
            let term_clean = term.trim();
            let lead = term.len() - term.trim_start().len();
            let at = pos + lead;
            let (e, rest) = term_clean
                .split_once('*')
                .ok_or_else(|| err(at, "expected `e*(a/b)`"))?;
            let e: u32 = e
                .trim()
                .parse()
                .map_err(|_| err(at, "invalid multiplicity"))?;
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| err(at, "slope must be parenthesized"))?;
            let (a, b) = match inner.split_once('/') {
                Some((a, b)) => (a.trim().parse(), b.trim().parse()),
                None => (inner.trim().parse(), Ok(1)),
            };
            let (a, b) = match (a, b) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return Err(err(at, "invalid slope")),
            };
            entries.push((Slope::new(a, b)?, e));
            pos += term.len() + 1;
        }
        Self::from_entries(entries)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    a: u32,
    b: u32,
    e: u32,
}

#[derive(Serialize, Deserialize)]
struct PolygonRecord {
    height: u32,
    entries: Vec<EntryRecord>,
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolygonRecord {
            height: self.height(),
            entries: self
                .entries()
                .map(|(sl, e)| EntryRecord {
                    a: sl.a,
                    b: sl.b,
                    e,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NewtonPolygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rec = PolygonRecord::deserialize(d)?;
        let entries = rec
            .entries
            .iter()
            .map(|r| Ok((Slope::new(r.a, r.b).map_err(D::Error::custom)?, r.e)))
            .collect::<Result<Vec<_>, D::Error>>()?;
        let np = NewtonPolygon::from_entries(entries).map_err(D::Error::custom)?;
        if np.height() != rec.height {
            return Err(D::Error::custom("height does not match entries"));
        }
        Ok(np)
    }
}
