//! The poset of admissible symmetric Newton polygons of height `2g`.
//!
//! Nodes are kept in canonical order: increasing area under the polygon
//! (a linear extension of `⪯` read from the top), ties broken by the slope
//! multiset. The ordinary polygon `ν_g^g` is node 0. An edge `i -> j` of the
//! Hasse diagram means `node_i ≺ node_j` with nothing strictly between.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::curves;
use crate::polygon::{nu, sigma, NewtonPolygon, Slope};

/// Default largest genus for which the full poset is built.
pub const DEFAULT_GENUS_CAP: usize = 8;
/// Largest genus for which stratum reports compute codimensions.
pub const REPORT_GENUS_CAP: usize = 12;
/// Largest height for which decomposability is searched.
pub const DECOMPOSABLE_HEIGHT_CAP: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("genus {g} exceeds the cap of {cap}")]
    GenusTooLarge { g: usize, cap: usize },
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("polygon {0} is not a node of the poset")]
    NodeNotFound(String),
    #[error("polygon has height {height}, expected {expected}")]
    HeightMismatch { height: u32, expected: u32 },
}

fn check_genus(g: usize, cap: usize) -> Result<(), PosetError> {
    if g == 0 {
        return Err(PosetError::ZeroGenus);
    }
    if g > cap {
        return Err(PosetError::GenusTooLarge { g, cap });
    }
    Ok(())
}

/// Reduced fractions `a/b` with `0 <= a/b < 1/2` and `b <= max_den`.
fn lower_half_slopes(max_den: u32) -> Vec<Slope> {
    let mut out: Vec<Slope> = (1..=max_den)
        .flat_map(|b| (0..b).filter(move |&a| 2 * a < b).map(move |a| (a, b)))
        .filter_map(|(a, b)| Slope::new(a, b).ok().filter(|s| s.denom() == b))
        .collect();
    out.sort();
    out
}

/// Multisets over `types[from..]` where a copy of type `t` weighs
/// `denom(t)`, with total weight `rest`.
fn partitions(
    types: &[Slope],
    from: usize,
    rest: u32,
    current: &mut Vec<(Slope, u32)>,
    out: &mut Vec<Vec<(Slope, u32)>>,
) {
    if rest == 0 {
        out.push(current.clone());
        return;
    }
    for i in from..types.len() {
        let b = types[i].denom();
        let mut m = 1;
        while m * b <= rest {
            current.push((types[i], m));
            partitions(types, i + 1, rest - m * b, current, out);
            current.pop();
            m += 1;
        }
    }
}

fn canonical_sort(nodes: &mut [NewtonPolygon]) {
    let scale = NewtonPolygon::scale_for(nodes);
    nodes.sort_by_cached_key(|n| (n.scaled_area(scale), n.entries().collect::<Vec<_>>()));
}

/// All admissible symmetric polygons of height `2g`, in canonical order.
pub fn enumerate_symmetric(g: usize) -> Result<Vec<NewtonPolygon>, PosetError> {
    enumerate_symmetric_capped(g, DEFAULT_GENUS_CAP)
}

pub fn enumerate_symmetric_capped(g: usize, cap: usize) -> Result<Vec<NewtonPolygon>, PosetError> {
    check_genus(g, cap)?;
    let mut nodes = Vec::new();
    // e(1/2) = 2s; the remaining height 2(g - s) splits into pairs {λ, 1-λ}
    for s in 0..=g as u32 {
        let rest = g as u32 - s;
        let types = lower_half_slopes(rest);
        let mut parts = Vec::new();
        partitions(&types, 0, rest, &mut Vec::new(), &mut parts);
        for part in parts {
            let mut entries = vec![(Slope::HALF, 2 * s)];
            for (slope, m) in part {
                let e = m * slope.denom();
                entries.push((slope, e));
                entries.push((slope.dual(), e));
            }
            nodes.push(
                NewtonPolygon::from_entries(entries).expect("enumerated polygon is admissible"),
            );
        }
    }
    canonical_sort(&mut nodes);
    Ok(nodes)
}

/// Hasse diagram of `⪯` on a set of polygons of equal height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonPoset {
    pub g: usize,
    pub nodes: Vec<NewtonPolygon>,
    /// `(i, j)`: `nodes[i] ≺ nodes[j]` is a covering relation.
    pub covers: Vec<(usize, usize)>,
    /// Longest chain length from the top element.
    pub codim: Vec<usize>,
    /// Every cover drops codim by exactly one, i.e. all maximal chains
    /// between comparable nodes have the same length.
    pub graded: bool,
}

/// The full poset for genus `g`.
pub fn build_poset(g: usize) -> Result<PolygonPoset, PosetError> {
    build_poset_capped(g, DEFAULT_GENUS_CAP)
}

pub fn build_poset_capped(g: usize, cap: usize) -> Result<PolygonPoset, PosetError> {
    let nodes = enumerate_symmetric_capped(g, cap)?;
    Ok(PolygonPoset::from_nodes(g, nodes))
}

impl PolygonPoset {
    /// Build the Hasse diagram of an upward-closed or full set of polygons.
    /// Codimension is measured from the unique maximal node when the set
    /// has one.
    pub fn from_nodes(g: usize, mut nodes: Vec<NewtonPolygon>) -> Self {
        canonical_sort(&mut nodes);
        let n = nodes.len();
        let less: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| nodes[i] < nodes[j]).collect())
            .collect();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if less[i][j] && !(0..n).any(|k| less[i][k] && less[k][j]) {
                    covers.push((i, j));
                }
            }
        }
        // Canonical order lists larger polygons first, so every upper cover
        // of node i has a smaller index.
        let mut codim = vec![0usize; n];
        for i in 0..n {
            codim[i] = covers
                .iter()
                .filter(|&&(a, _)| a == i)
                .map(|&(_, j)| codim[j] + 1)
                .max()
                .unwrap_or(0);
        }
        let graded = covers.iter().all(|&(i, j)| codim[i] == codim[j] + 1);
        Self {
            g,
            nodes,
            covers,
            codim,
            graded,
        }
    }

    pub fn index_of(&self, np: &NewtonPolygon) -> Option<usize> {
        self.nodes.iter().position(|n| n == np)
    }

    pub fn codim_of(&self, np: &NewtonPolygon) -> Result<usize, PosetError> {
        self.index_of(np)
            .map(|i| self.codim[i])
            .ok_or_else(|| PosetError::NodeNotFound(np.to_string()))
    }

    /// Nodes with no upper cover.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| !self.covers.iter().any(|&(a, _)| a == i))
            .collect()
    }

    /// Nodes with no lower cover.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&j| !self.covers.iter().any(|&(_, b)| b == j))
            .collect()
    }

    /// Deterministic Graphviz rendering; arrows point from smaller to larger
    /// polygons.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph newton_polygons_g{} {{", self.g);
        out.push_str("  rankdir=LR;\n  node [shape=box];\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{node}\\ncodim {}\"];", self.codim[i]);
        }
        let mut edges = self.covers.clone();
        edges.sort_unstable();
        for (i, j) in edges {
            let _ = writeln!(out, "  n{i} -> n{j};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "g": self.g,
            "nodes": self.nodes,
            "covers": self.covers.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "codim": self.codim,
        })
    }
}

pub fn codim(poset: &PolygonPoset, node: &NewtonPolygon) -> Result<usize, PosetError> {
    poset.codim_of(node)
}

pub fn to_dot(poset: &PolygonPoset) -> String {
    poset.to_dot()
}

/// Whether `np` has an admissible symmetric summand other than `0` and
/// itself. Searches every sub-multiset that keeps integrality and symmetry:
/// for `λ < 1/2` any number of blocks `{λ^b, (1-λ)^b}`, and any number of
/// `σ_1` blocks. `None` above [`DECOMPOSABLE_HEIGHT_CAP`].
pub fn is_decomposable(np: &NewtonPolygon) -> Option<bool> {
    if np.height() > DECOMPOSABLE_HEIGHT_CAP {
        return None;
    }
    // (block, number of blocks available)
    let blocks: Vec<(Slope, u32)> = np
        .entries()
        .filter(|(s, _)| *s <= Slope::HALF)
        .map(|(s, e)| {
            if s == Slope::HALF {
                (s, e / 2)
            } else {
                (s, e / s.denom())
            }
        })
        .collect();
    let total: Vec<u32> = blocks.iter().map(|&(_, m)| m).collect();
    let mut choice = vec![0u32; blocks.len()];
    loop {
        // advance the mixed-radix counter
        let mut i = 0;
        while i < choice.len() && choice[i] == total[i] {
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            return Some(false);
        }
        choice[i] += 1;
        if choice != total {
            let mut entries = Vec::new();
            for (&(s, _), &c) in blocks.iter().zip(&choice) {
                if s == Slope::HALF {
                    entries.push((s, 2 * c));
                } else {
                    entries.push((s, c * s.denom()));
                    entries.push((s.dual(), c * s.denom()));
                }
            }
            let part = NewtonPolygon::from_entries(entries).expect("blocks are admissible");
            if part.height() > 0 && part.height() < np.height() {
                return Some(true);
            }
        }
    }
}

/// Invariants of one Newton stratum together with reference dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub polygon: NewtonPolygon,
    pub g: usize,
    pub p_rank: usize,
    /// Longest chain from `ν_g^g`; `None` above [`REPORT_GENUS_CAP`].
    pub codim: Option<usize>,
    /// `g(g+1)/2`
    pub dim_ag: usize,
    /// `⌊g²/4⌋`
    pub dim_ss: usize,
    /// `codim >= 3g - 3`
    pub oort_flag_codim: Option<bool>,
    /// Codimension `g - f` of the p-rank-`f` stratum of `A_g`.
    pub prank_stratum_codim: usize,
    pub denominators: Vec<u32>,
    pub decomposable: Option<bool>,
    pub supersingular: bool,
    pub ordinary: bool,
    /// Whether the interval above this polygon is graded.
    pub graded_above: Option<bool>,
    /// Catalog curves expected to have this polygon.
    pub realized_by: Vec<String>,
    pub notes: Vec<String>,
}

pub fn stratum_report(g: usize, polygon: &NewtonPolygon) -> Result<StratumReport, PosetError> {
    if g == 0 {
        return Err(PosetError::ZeroGenus);
    }
    let expected = 2 * g as u32;
    if polygon.height() != expected {
        return Err(PosetError::HeightMismatch {
            height: polygon.height(),
            expected,
        });
    }
    let (codim, graded_above) = if g <= REPORT_GENUS_CAP {
        // Every chain from the top down to `polygon` stays in its up-set.
        let up: Vec<NewtonPolygon> = enumerate_symmetric_capped(g, REPORT_GENUS_CAP)?
            .into_iter()
            .filter(|n| polygon <= n)
            .collect();
        let sub = PolygonPoset::from_nodes(g, up);
        (Some(sub.codim_of(polygon)?), Some(sub.graded))
    } else {
        (None, None)
    };
    let p_rank = polygon.p_rank();
    let realized_by = curves::catalog()
        .into_iter()
        .filter(|c| c.model.genus() == g && c.expected.polygon.as_ref() == Some(polygon))
        .map(|c| c.name)
        .collect();
    let mut notes = Vec::new();
    if polygon == &sigma(g) && g >= 2 {
        notes.push(format!(
            "join of {g} copies of sigma_1: a tree of supersingular elliptic curves"
        ));
    }
    if nu(g, p_rank).ok().as_ref() == Some(polygon) {
        notes.push(format!(
            "most generic polygon with p-rank {p_rank} (nu_{g}^{p_rank})"
        ));
    }
    if polygon.denominators().iter().any(|&b| b as usize >= g) && g > 1 {
        notes.push("has a slope denominator of at least g".to_string());
    }
    Ok(StratumReport {
        polygon: polygon.clone(),
        g,
        p_rank,
        codim,
        dim_ag: g * (g + 1) / 2,
        dim_ss: g * g / 4,
        oort_flag_codim: codim.map(|c| c + 3 >= 3 * g),
        prank_stratum_codim: g - p_rank,
        denominators: polygon.denominators(),
        decomposable: is_decomposable(polygon),
        supersingular: polygon.is_supersingular(),
        ordinary: polygon.is_ordinary(),
        graded_above,
        realized_by,
        notes,
    })
}
