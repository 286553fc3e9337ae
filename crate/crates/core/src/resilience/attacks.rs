use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{AttackOutcome, Cut};
use crate::classify::VertexClassification;
use crate::error::{invalid, Error, Result};
use crate::graph::{normalize, Edge, Graph, Vertex, VertexSet};
use crate::rng::rng_from_seed;

/// A degree-3 vertex with two pendant neighbours and one more, `anchor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cherry {
    pub center: Vertex,
    pub leaves: [Vertex; 2],
    pub anchor: Vertex,
}

impl Cherry {
    /// The edge whose removal cuts the cherry off.
    pub fn edge(&self) -> Edge {
        normalize(self.center, self.anchor)
    }

    /// `A` = centre and leaves, `B` = everything else.
    pub fn cut(&self, n: usize) -> Cut {
        let mut a = vec![self.center, self.leaves[0], self.leaves[1]];
        a.sort_unstable();
        let b = (0..n).filter(|v| !a.contains(v)).collect();
        Cut::bipartition(a, b)
    }
}

/// Smallest centre first, so the anchor is determined. Needs `n >= 4`.
pub fn cherry_attack(g: &Graph) -> Option<Cherry> {
    if g.n() < 4 {
        return None;
    }
    (0..g.n()).find_map(|c| {
        let nb = g.neighbours(c);
        if nb.len() != 3 {
            return None;
        }
        let leaves: Vec<Vertex> = nb.iter().copied().filter(|&u| g.degree(u) == 1).collect();
        if leaves.len() != 2 {
            return None;
        }
        let anchor = *nb.iter().find(|u| !leaves.contains(u))?;
        Some(Cherry {
            center: c,
            leaves: [leaves[0], leaves[1]],
            anchor,
        })
    })
}

/// `deg_{G[A,B]}(v) <= (1/2 + ε) deg_G(v)` for every vertex.
pub fn verify_star_condition(g: &Graph, cut: &Cut, epsilon: f64) -> Result<bool> {
    if !cut.separator.is_empty() {
        return Err(invalid("the star condition is defined for bipartitions only"));
    }
    cut.validate(g.n())?;
    let limit = 0.5 + epsilon;
    Ok(cut
        .cut_degrees(g)
        .into_iter()
        .enumerate()
        .all(|(v, c)| c as f64 <= limit * g.degree(v) as f64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyDiagnostics {
    /// `|D|`: vertices whose crossing degree in the initial equipartition
    /// exceeded the threshold.
    pub d_size: usize,
    /// `max_v |N(v) ∩ D|`.
    pub max_d_neighbours: usize,
    /// Vertices reinserted by the majority rule.
    pub reinserted: usize,
    /// Moves made by the rearrangement pass.
    pub moves: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub outcome: AttackOutcome,
    pub diagnostics: GreedyDiagnostics,
}

/// Builds a bipartition in which every vertex sends roughly half its edges
/// across:
///
/// 1. a seeded random equipartition `A' | B'`;
/// 2. `D` = vertices with more than `d_threshold` crossing edges;
/// 3. `ATYP ∪ TINY ∪ D` is taken out of both sides;
/// 4. those vertices go back one at a time, non-tiny ones before tiny ones,
///    each by ascending index, joining `A` if it has at least as many
///    neighbours already in `A` as in `B`, else `B`;
/// 5. any tiny vertex with more than half its edges crossing switches side,
///    until none is left (at most `n` moves).
///
/// `satisfied` reports [`verify_star_condition`] at `epsilon`.
pub fn greedy_partition_attack(
    g: &Graph,
    cls: &VertexClassification,
    d_threshold: f64,
    epsilon: f64,
    seed: u64,
) -> Result<GreedyOutcome> {
    let n = g.n();
    if cls.universe != n {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: cls.universe,
        });
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(invalid(format!("epsilon = {epsilon} outside (0, 1/2)")));
    }
    if n < 2 {
        return Err(invalid("a bipartition needs at least two vertices"));
    }

    // 1. and 2.
    let (initial, d_set) = heavy_crossing_vertices(g, d_threshold, seed);
    // Some(true) = A, Some(false) = B, None = not placed
    let mut side: Vec<Option<bool>> = initial.into_iter().map(Some).collect();
    let max_d_neighbours = (0..n).map(|v| g.degree_into(v, &d_set)).max().unwrap_or(0);

    // 3.
    let mut removed = d_set.clone();
    removed.union_with(&cls.atyp);
    removed.union_with(&cls.tiny);
    for v in removed.iter() {
        side[v] = None;
    }

    // 4.
    let mut in_a = vec![0usize; n];
    let mut in_b = vec![0usize; n];
    for v in 0..n {
        if let Some(s) = side[v] {
            for &u in g.neighbours(v) {
                if s {
                    in_a[u] += 1;
                } else {
                    in_b[u] += 1;
                }
            }
        }
    }
    let late: Vec<Vertex> = removed
        .iter()
        .filter(|&v| !cls.tiny.contains(v))
        .chain(removed.iter().filter(|&v| cls.tiny.contains(v)))
        .collect();
    for &v in &late {
        let s = in_a[v] >= in_b[v];
        side[v] = Some(s);
        for &u in g.neighbours(v) {
            if s {
                in_a[u] += 1;
            } else {
                in_b[u] += 1;
            }
        }
    }
    let mut side: Vec<bool> = side.into_iter().map(|s| s.expect("every vertex placed")).collect();

    // 5.
    let cross_of = |side: &[bool], v: Vertex| g.neighbours(v).iter().filter(|&&u| side[u] != side[v]).count();
    let mut moves = 0;
    loop {
        let offender = cls.tiny.iter().find(|&v| 2 * cross_of(&side, v) > g.degree(v));
        let Some(v) = offender else { break };
        if moves == n {
            return Err(Error::RearrangementCap {
                cap: n,
                partial: Box::new(side_cut(&side)),
            });
        }
        side[v] = !side[v];
        moves += 1;
    }

    if side.iter().all(|&s| s) || side.iter().all(|&s| !s) {
        return Err(invalid("greedy partition left one side empty"));
    }
    let cut = side_cut(&side);
    let satisfied = verify_star_condition(g, &cut, epsilon)?;
    Ok(GreedyOutcome {
        outcome: AttackOutcome::new(g, cut, satisfied),
        diagnostics: GreedyDiagnostics {
            d_size: d_set.len(),
            max_d_neighbours,
            reinserted: late.len(),
            moves,
        },
    })
}

/// The seeded equipartition the greedy attack starts from (`true` = `A`,
/// which gets the extra vertex when `n` is odd) and the set `D` of vertices
/// with more than `d_threshold` neighbours across it.
pub fn heavy_crossing_vertices(g: &Graph, d_threshold: f64, seed: u64) -> (Vec<bool>, VertexSet) {
    let n = g.n();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let mut in_a = vec![false; n];
    for &v in &order[..n.div_ceil(2)] {
        in_a[v] = true;
    }
    let mut d_set = VertexSet::new(n);
    for v in 0..n {
        let cross = g.neighbours(v).iter().filter(|&&u| in_a[u] != in_a[v]).count();
        if cross as f64 > d_threshold {
            d_set.insert(v);
        }
    }
    (in_a, d_set)
}

fn side_cut(in_a: &[bool]) -> Cut {
    let a = (0..in_a.len()).filter(|&v| in_a[v]).collect();
    let b = (0..in_a.len()).filter(|&v| !in_a[v]).collect();
    Cut::bipartition(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_vertices;
    use crate::graph::connected_components;
    use crate::resilience::{budget_allows, Alpha, BudgetRule};

    fn gadget() -> Graph {
        Graph::new(6, [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

    fn bare(n: usize) -> VertexClassification {
        VertexClassification {
            reference: 0,
            universe: n,
            n,
            p: 0.5,
            delta: 0.1,
            tiny: VertexSet::new(n),
            atyp: VertexSet::new(n),
        }
    }

    #[test]
    fn gadget_cherry() {
        let g = gadget();
        let cherry = cherry_attack(&g).unwrap();
        assert_eq!(cherry.edge(), (2, 3));
        assert_eq!(cherry.leaves, [0, 1]);
        let cut = cherry.cut(6);
        assert_eq!(cut.crossing_edges(&g), vec![(2, 3)]);
        let rule = BudgetRule::fraction(Alpha::new(1, 3));
        assert!(budget_allows(&g, &[cherry.edge()], &rule, None).unwrap());
        assert_eq!(connected_components(&g.without_edges(&[cherry.edge()])).len(), 2);
    }

    #[test]
    fn no_cherry() {
        assert_eq!(cherry_attack(&Graph::cycle(5)), None);
        assert_eq!(cherry_attack(&Graph::path(3)), None);
    }

    #[test]
    fn cherry_tie_break() {
        // cherries centred at 2 (leaves 0, 1) and 7 (leaves 5, 6), joined 2-3-4-7
        let g = Graph::new(8, [(0, 2), (1, 2), (2, 3), (3, 4), (4, 7), (5, 7), (6, 7)]).unwrap();
        let cherry = cherry_attack(&g).unwrap();
        assert_eq!(cherry.center, 2);
        assert_eq!(cherry.edge(), (2, 3));
    }

    #[test]
    fn star_condition_examples() {
        let c6 = Graph::cycle(6);
        let contiguous = Cut::bipartition(vec![0, 1, 2], vec![3, 4, 5]);
        assert!(verify_star_condition(&c6, &contiguous, 0.0).unwrap());
        let k4 = Graph::complete(4);
        assert!(!verify_star_condition(&k4, &Cut::bipartition(vec![0], vec![1, 2, 3]), 0.1).unwrap());
        assert!(verify_star_condition(&k4, &Cut::bipartition(vec![0, 1], vec![2, 3]), 0.2).unwrap());
        let with_sep = Cut {
            separator: vec![0],
            side_a: vec![1],
            side_b: vec![2, 3],
        };
        assert!(verify_star_condition(&k4, &with_sep, 0.2).is_err());
        // isolated vertices pass vacuously
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert!(!verify_star_condition(&g, &Cut::bipartition(vec![0, 2], vec![1]), 0.1).unwrap());
        assert!(verify_star_condition(&g, &Cut::bipartition(vec![0, 1], vec![2]), 0.0).unwrap());
    }

    #[test]
    fn complete_graph_keeps_equipartition() {
        let g = Graph::complete(100);
        let res = greedy_partition_attack(&g, &bare(100), f64::INFINITY, 0.006, 11).unwrap();
        let out = &res.outcome;
        assert_eq!((out.cut.side_a.len(), out.cut.side_b.len()), (50, 50));
        assert!(out.ratios.iter().all(|&r| r == Alpha::new(50, 99)));
        assert!(out.satisfied);
        assert_eq!(res.diagnostics.d_size, 0);
        assert_eq!(res.diagnostics.moves, 0);
    }

    #[test]
    fn gadget_rearrangement_fixpoint() {
        let g = gadget();
        let mut cls = bare(6);
        for leaf in [0, 1] {
            cls.tiny.insert(leaf);
            cls.atyp.insert(leaf);
        }
        for seed in 0..20 {
            let res = greedy_partition_attack(&g, &cls, f64::INFINITY, 0.25, seed).unwrap();
            let degs = res.outcome.cut.cut_degrees(&g);
            for t in cls.tiny.iter() {
                assert!(2 * degs[t] <= g.degree(t), "seed {seed}");
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = crate::process::sample_gnm(300, 1500, 8).unwrap();
        let cls = classify_vertices(&g, 1500.0 / 44850.0, 0.2, None).unwrap();
        let a = greedy_partition_attack(&g, &cls, 6.0, 0.1, 3).unwrap();
        let b = greedy_partition_attack(&g, &cls, 6.0, 0.1, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parameter_checks() {
        let g = Graph::complete(4);
        assert!(greedy_partition_attack(&g, &bare(5), 1.0, 0.1, 0).is_err());
        assert!(greedy_partition_attack(&g, &bare(4), 1.0, 0.5, 0).is_err());
        assert!(greedy_partition_attack(&g, &bare(4), 1.0, 0.0, 0).is_err());
    }
}
