//! Edge-deletion budgets, cut certificates and the attacks that search for
//! them.
//!
//! An attack is a set `H` of edges whose removal destroys connectivity (or
//! k-connectivity) while respecting a per-vertex [`BudgetRule`]. Every budget
//! here is monotone, so an attack exists iff some cut `(S, A, B)` has its
//! crossing edges `E(A, B)` within budget. All attacks therefore return a
//! [`Cut`], and [`verify_certificate`] replays one end to end.

mod attacks;
mod budget;
mod exact;
mod local_search;

pub use attacks::{
    cherry_attack, greedy_partition_attack, heavy_crossing_vertices, verify_star_condition, Cherry, GreedyDiagnostics,
    GreedyOutcome,
};
pub use budget::{budget_allows, piecewise_classification, BudgetRule};
pub use exact::{
    connectivity_resilience_threshold, connectivity_resilience_threshold_with, find_disconnecting_attack,
    find_disconnecting_attack_with, find_k_conn_attack, find_k_conn_attack_with, ExactLimits,
};
pub use local_search::LocalSearch;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::classify::VertexClassification;
use crate::error::{invalid, Error, Result};
use crate::graph::{component_labels, Edge, Graph, Vertex, VertexSet};

/// Exact budget fraction or per-vertex ratio.
pub type Alpha = Ratio<u64>;

/// Parses `"p/q"` or a bare integer into a fraction in `[0, 1]`.
pub fn parse_alpha(text: &str) -> Result<Alpha> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let bad = || invalid(format!("expected a fraction p/q, got {text:?}"));
    let num: u64 = num.parse().map_err(|_| bad())?;
    let den: u64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(invalid(format!("zero denominator in {text:?}")));
    }
    if num > den {
        return Err(invalid(format!("fraction {text} exceeds 1")));
    }
    Ok(Alpha::new(num, den))
}

/// Always `"p/q"`, including `"0/1"` and `"1/1"`.
pub fn format_ratio(r: &Alpha) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) mod ratio_string {
    use super::{format_ratio, parse_alpha, Alpha};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Alpha, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Alpha, D::Error> {
        let text = String::deserialize(d)?;
        parse_alpha(&text).map_err(serde::de::Error::custom)
    }
}

/// `deg_H(v) / deg_G(v)` in lowest terms; isolated vertices count as 0.
pub fn vertex_ratio(cut_degree: usize, degree: usize) -> Alpha {
    if degree == 0 {
        Alpha::new(0, 1)
    } else {
        Alpha::new(cut_degree as u64, degree as u64)
    }
}

/// Separator `S` and the two sides of `V \ S`, each sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    #[serde(rename = "S")]
    pub separator: Vec<Vertex>,
    #[serde(rename = "A")]
    pub side_a: Vec<Vertex>,
    #[serde(rename = "B")]
    pub side_b: Vec<Vertex>,
}

impl Cut {
    pub fn bipartition(mut side_a: Vec<Vertex>, mut side_b: Vec<Vertex>) -> Self {
        side_a.sort_unstable();
        side_b.sort_unstable();
        Self {
            separator: Vec::new(),
            side_a,
            side_b,
        }
    }

    /// Side `A` = members of `a`, side `B` = everything else.
    pub fn from_side(n: usize, a: &VertexSet) -> Self {
        let side_a = a.to_vec();
        let side_b = (0..n).filter(|&v| !a.contains(v)).collect();
        Self {
            separator: Vec::new(),
            side_a,
            side_b,
        }
    }

    /// Checks the partition is well formed on `0..n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.side_a.is_empty() || self.side_b.is_empty() {
            return Err(invalid("both sides of a cut must be nonempty"));
        }
        let mut seen = vec![false; n];
        for &v in self.separator.iter().chain(&self.side_a).chain(&self.side_b) {
            if v >= n {
                return Err(invalid(format!("cut vertex {v} outside 0..{n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(invalid(format!("vertex {v} appears twice in the cut")));
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(invalid(format!("vertex {v} missing from the cut")));
        }
        Ok(())
    }

    /// Side labels: 0 = separator, 1 = A, 2 = B.
    fn labels(&self, n: usize) -> Vec<u8> {
        let mut side = vec![0u8; n];
        for &v in &self.side_a {
            side[v] = 1;
        }
        for &v in &self.side_b {
            side[v] = 2;
        }
        side
    }

    /// `E_G(A, B)`, lexicographic.
    pub fn crossing_edges(&self, g: &Graph) -> Vec<Edge> {
        let side = self.labels(g.n());
        g.edges()
            .filter(|&(u, v)| side[u] != 0 && side[v] != 0 && side[u] != side[v])
            .collect()
    }

    /// Crossing degree of every vertex (0 on the separator).
    pub fn cut_degrees(&self, g: &Graph) -> Vec<usize> {
        let side = self.labels(g.n());
        (0..g.n())
            .map(|v| {
                if side[v] == 0 {
                    return 0;
                }
                g.neighbours(v)
                    .iter()
                    .filter(|&&u| side[u] != 0 && side[u] != side[v])
                    .count()
            })
            .collect()
    }

    /// Maps local labels of a subgraph back to its parent.
    pub fn relabel(&self, original: &[Vertex]) -> Cut {
        let map = |list: &[Vertex]| {
            let mut out: Vec<Vertex> = list.iter().map(|&v| original[v]).collect();
            out.sort_unstable();
            out
        };
        Cut {
            separator: map(&self.separator),
            side_a: map(&self.side_a),
            side_b: map(&self.side_b),
        }
    }
}

/// A cut together with the edges it asks the adversary to delete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackOutcome {
    pub cut: Cut,
    pub h_edges: Vec<Edge>,
    /// `deg_H(v) / deg_G(v)` per vertex.
    pub ratios: Vec<Alpha>,
    pub max_ratio: Alpha,
    pub satisfied: bool,
}

impl AttackOutcome {
    /// `satisfied` is supplied by the caller, since its meaning depends on
    /// the attack.
    pub fn new(g: &Graph, cut: Cut, satisfied: bool) -> Self {
        let h_edges = cut.crossing_edges(g);
        let ratios: Vec<Alpha> = cut
            .cut_degrees(g)
            .into_iter()
            .enumerate()
            .map(|(v, c)| vertex_ratio(c, g.degree(v)))
            .collect();
        let max_ratio = ratios.iter().copied().max().unwrap_or_else(|| Alpha::new(0, 1));
        Self {
            cut,
            h_edges,
            ratios,
            max_ratio,
            satisfied,
        }
    }
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    #[serde(rename = "S")]
    separator: &'a [Vertex],
    #[serde(rename = "A")]
    side_a: &'a [Vertex],
    #[serde(rename = "B")]
    side_b: &'a [Vertex],
    #[serde(rename = "H")]
    h_edges: Vec<[Vertex; 2]>,
    max_ratio: String,
    satisfied: bool,
}

impl Serialize for AttackOutcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OutcomeJson {
            separator: &self.cut.separator,
            side_a: &self.cut.side_a,
            side_b: &self.cut.side_b,
            h_edges: self.h_edges.iter().map(|&(u, v)| [u, v]).collect(),
            max_ratio: format_ratio(&self.max_ratio),
            satisfied: self.satisfied,
        }
        .serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMethod {
    Exact,
    LocalSearchUpperBound,
}

/// `α*`: the graph is `Fraction(α)`-resilient for connectivity iff `α < α*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResilienceReport {
    #[serde(with = "ratio_string")]
    pub threshold: Alpha,
    pub witness: Cut,
    pub method: ThresholdMethod,
}

/// Replays a cut: `H = E(A, B)` must be admitted by `rule`, `|S| <= k - 1`,
/// and `(G - H) - S` must be disconnected.
pub fn verify_certificate(
    g: &Graph,
    cut: &Cut,
    rule: &BudgetRule,
    cls: Option<&VertexClassification>,
    k: usize,
) -> Result<bool> {
    cut.validate(g.n())?;
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if cut.separator.len() > k - 1 {
        return Ok(false);
    }
    let h = cut.crossing_edges(g);
    if !budget_allows(g, &h, rule, cls)? {
        return Ok(false);
    }
    let remaining = g.without_edges(&h);
    let keep = VertexSet::from_vertices(g.n(), cut.side_a.iter().chain(&cut.side_b).copied())?;
    let sub = remaining.induced(&keep);
    let (_, count) = component_labels(&sub.graph);
    Ok(count > 1)
}

pub(crate) fn require_connected(g: &Graph) -> Result<()> {
    if crate::graph::is_connected(g) {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}
