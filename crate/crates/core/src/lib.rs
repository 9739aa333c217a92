//! Zeta functions, L-polynomials, p-ranks and Newton polygons of
//! hyperelliptic and Artin-Schreier curves over small finite fields, and
//! the combinatorics of admissible symmetric Newton polygons.
//!
//! Everything is exact: finite-field arithmetic in [`gf`], integer
//! L-polynomials in [`zeta`], rational slopes in [`polygon`]. [`poset`]
//! enumerates symmetric polygons and their dominance order, [`search`] runs
//! deterministic parallel surveys of curve families, and [`cli`] backs the
//! `newton-strata` binary.
//!
//! ```
//! use newton_strata::{curves, zeta, polygon};
//!
//! let curve = curves::lookup("ap-g4-p3").unwrap().model;
//! let counts = curves::count_profile(&curve, curve.genus()).unwrap();
//! let l = zeta::l_from_counts(&counts, curve.genus()).unwrap();
//! assert_eq!(l.to_string(), "1 + 6*T^4 + 81*T^8");
//! let np = polygon::np_from_l(&l).unwrap();
//! assert_eq!(np.to_string(), "4*(1/4)+4*(3/4)");
//! ```

pub mod cli;
pub mod curves;
mod fpoly;
pub mod gf;
pub mod polygon;
pub mod poset;
pub mod search;
pub mod zeta;

pub use curves::{CurveKind, CurveModel, NamedCurve, PointCounts};
pub use gf::{FieldElement, FieldSpec};
pub use polygon::{NewtonPolygon, Slope};
pub use poset::{PolygonPoset, StratumReport};
pub use search::{SearchSpec, SurveyResult};
pub use zeta::LPolynomial;
