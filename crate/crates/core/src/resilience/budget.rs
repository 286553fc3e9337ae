use serde::{Deserialize, Serialize};

use super::{ratio_string, Alpha};
use crate::classify::{classify_vertices, VertexClassification};
use crate::error::{invalid, Error, Result};
use crate::graph::{normalize, Edge, Graph};

/// Per-vertex limit on `deg_H(v)` for the adversary's subgraph `H ⊆ G`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum BudgetRule {
    /// `deg_H(v) <= α deg_G(v)`.
    Fraction {
        #[serde(with = "ratio_string")]
        alpha: Alpha,
    },
    /// As `Fraction`, and additionally `deg_{G-H}(v) >= k`.
    FractionKeepDegree {
        #[serde(with = "ratio_string")]
        alpha: Alpha,
        k: usize,
    },
    /// `deg_G(v) - K_t` on tiny vertices, `deg_G(v) - K_a` on the remaining
    /// atypical ones, `α deg_G(v)` elsewhere. Negative limits clamp to 0.
    /// The classes come from the classification passed alongside the rule;
    /// [`piecewise_classification`] builds the matching one.
    Piecewise {
        #[serde(with = "ratio_string")]
        alpha: Alpha,
        delta_t: f64,
        k_t: usize,
        delta_a: f64,
        k_a: usize,
        p: f64,
    },
}

impl BudgetRule {
    pub fn fraction(alpha: Alpha) -> Self {
        BudgetRule::Fraction { alpha }
    }

    pub fn keep_degree(alpha: Alpha, k: usize) -> Self {
        BudgetRule::FractionKeepDegree { alpha, k }
    }

    pub fn alpha(&self) -> Alpha {
        match *self {
            BudgetRule::Fraction { alpha }
            | BudgetRule::FractionKeepDegree { alpha, .. }
            | BudgetRule::Piecewise { alpha, .. } => alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha() > Alpha::new(1, 1) {
            return Err(invalid(format!("alpha = {} exceeds 1", self.alpha())));
        }
        match *self {
            BudgetRule::Fraction { .. } => Ok(()),
            BudgetRule::FractionKeepDegree { k: 0, .. } => Err(invalid("k must be at least 1")),
            BudgetRule::FractionKeepDegree { .. } => Ok(()),
            BudgetRule::Piecewise {
                delta_t,
                delta_a,
                k_t,
                k_a,
                p,
                ..
            } => {
                if k_t == 0 || k_a == 0 {
                    return Err(invalid("K_t and K_a must be at least 1"));
                }
                if !(0.0..=1.0).contains(&delta_t) || !(0.0..=1.0).contains(&delta_a) {
                    return Err(invalid("delta_t and delta_a must lie in [0, 1]"));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(invalid(format!("p = {p} outside [0, 1]")));
                }
                Ok(())
            }
        }
    }

    /// Largest admissible `deg_H(v)` per vertex; negative means even the
    /// empty `H` is rejected at `v`.
    pub fn capacities(&self, g: &Graph, cls: Option<&VertexClassification>) -> Result<Vec<i64>> {
        self.validate()?;
        let alpha = self.alpha();
        let frac = |d: usize| (*alpha.numer() as u128 * d as u128 / *alpha.denom() as u128) as i64;
        let degrees = g.degrees();
        match *self {
            BudgetRule::Fraction { .. } => Ok(degrees.iter().map(|&d| frac(d)).collect()),
            BudgetRule::FractionKeepDegree { k, .. } => {
                Ok(degrees.iter().map(|&d| frac(d).min(d as i64 - k as i64)).collect())
            }
            BudgetRule::Piecewise { k_t, k_a, .. } => {
                let cls = cls.ok_or(Error::MissingClassification)?;
                if cls.universe != g.n() {
                    return Err(Error::UniverseMismatch {
                        expected: g.n(),
                        found: cls.universe,
                    });
                }
                Ok(degrees
                    .iter()
                    .enumerate()
                    .map(|(v, &d)| {
                        let limit = if cls.tiny.contains(v) {
                            d as i64 - k_t as i64
                        } else if cls.atyp.contains(v) {
                            d as i64 - k_a as i64
                        } else {
                            frac(d)
                        };
                        limit.max(0)
                    })
                    .collect())
            }
        }
    }
}

/// Classification for a piecewise rule on `g`: tiny vertices use `delta_t`,
/// atypical ones `delta_a`, both against the rule's `p`.
pub fn piecewise_classification(g: &Graph, rule: &BudgetRule) -> Result<VertexClassification> {
    let BudgetRule::Piecewise {
        delta_t, delta_a, p, ..
    } = *rule
    else {
        return Err(invalid("not a piecewise rule"));
    };
    let tiny = classify_vertices(g, p, delta_t, None)?;
    let mut cls = classify_vertices(g, p, delta_a, None)?;
    cls.tiny = tiny.tiny;
    Ok(cls)
}

/// Whether `H` (a subset of `g`'s edges) is admitted by `rule` at every vertex.
pub fn budget_allows(
    g: &Graph,
    h_edges: &[Edge],
    rule: &BudgetRule,
    cls: Option<&VertexClassification>,
) -> Result<bool> {
    let caps = rule.capacities(g, cls)?;
    let mut h: Vec<Edge> = h_edges.iter().map(|&(u, v)| normalize(u, v)).collect();
    h.sort_unstable();
    h.dedup();
    let mut deg_h = vec![0i64; g.n()];
    for &(u, v) in &h {
        if !g.has_edge(u, v) {
            return Err(invalid(format!("edge ({u}, {v}) is not in the graph")));
        }
        deg_h[u] += 1;
        deg_h[v] += 1;
    }
    Ok(deg_h.iter().zip(&caps).all(|(d, c)| d <= c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;

    fn gadget() -> Graph {
        // a=0, b=1, c=2, d=3, e=4, f=5
        Graph::new(6, [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

    #[test]
    fn empty_h_allowed() {
        let g = Graph::complete(4);
        for rule in [
            BudgetRule::fraction(Alpha::new(0, 1)),
            BudgetRule::keep_degree(Alpha::new(1, 2), 3),
        ] {
            assert!(budget_allows(&g, &[], &rule, None).unwrap());
        }
    }

    #[test]
    fn star_of_k4_exceeds_half() {
        let g = Graph::complete(4);
        let h = [(0, 1), (0, 2), (0, 3)];
        assert!(!budget_allows(&g, &h, &BudgetRule::fraction(Alpha::new(1, 2)), None).unwrap());
        assert!(budget_allows(&g, &h, &BudgetRule::fraction(Alpha::new(1, 1)), None).unwrap());
    }

    #[test]
    fn cherry_edge_within_third() {
        let g = gadget();
        let rule = BudgetRule::fraction(Alpha::new(1, 3));
        assert!(budget_allows(&g, &[(2, 3)], &rule, None).unwrap());
        assert!(!budget_allows(&g, &[(0, 2)], &rule, None).unwrap());
    }

    #[test]
    fn boundary_is_inclusive() {
        let c6 = Graph::cycle(6);
        let h = [(2, 3), (0, 5)];
        assert!(budget_allows(&c6, &h, &BudgetRule::fraction(Alpha::new(1, 2)), None).unwrap());
        assert!(!budget_allows(&c6, &h, &BudgetRule::fraction(Alpha::new(49, 100)), None).unwrap());
    }

    #[test]
    fn keep_degree_is_literal() {
        let k4 = Graph::complete(4);
        let rule = BudgetRule::keep_degree(Alpha::new(1, 1), 2);
        assert!(budget_allows(&k4, &[(0, 1)], &rule, None).unwrap());
        assert!(!budget_allows(&k4, &[(0, 1), (0, 2)], &rule, None).unwrap());
        // a vertex of degree below k rejects every H
        let p3 = Graph::path(3);
        let rule = BudgetRule::keep_degree(Alpha::new(1, 1), 2);
        assert!(!budget_allows(&p3, &[], &rule, None).unwrap());
    }

    #[test]
    fn piecewise_needs_classification() {
        let g = gadget();
        let rule = BudgetRule::Piecewise {
            alpha: Alpha::new(1, 2),
            delta_t: 0.4,
            k_t: 1,
            delta_a: 0.2,
            k_a: 1,
            p: 0.4,
        };
        assert!(matches!(
            budget_allows(&g, &[], &rule, None),
            Err(Error::MissingClassification)
        ));
        // np = 2.4: tiny is deg < 0.96, atypical is outside [1.92, 2.88]
        let cls = piecewise_classification(&g, &rule).unwrap();
        assert!(cls.tiny.is_empty());
        assert_eq!(cls.atyp.to_vec(), vec![0, 1, 2, 3]);
        let caps = rule.capacities(&g, Some(&cls)).unwrap();
        assert_eq!(caps, vec![0, 0, 2, 2, 1, 1]);
        assert!(budget_allows(&g, &[(2, 3), (3, 4)], &rule, Some(&cls)).unwrap());
        assert!(!budget_allows(&g, &[(4, 5), (3, 4)], &rule, Some(&cls)).unwrap());
    }

    #[test]
    fn piecewise_tiny_clamps_at_zero() {
        let g = gadget();
        let rule = BudgetRule::Piecewise {
            alpha: Alpha::new(1, 2),
            delta_t: 0.5,
            k_t: 5,
            delta_a: 0.5,
            k_a: 5,
            p: 0.4,
        };
        let mut cls = piecewise_classification(&g, &rule).unwrap();
        cls.tiny = VertexSet::full(6);
        assert_eq!(rule.capacities(&g, Some(&cls)).unwrap(), vec![0; 6]);
    }

    #[test]
    fn foreign_edges_rejected() {
        let g = Graph::path(3);
        let rule = BudgetRule::fraction(Alpha::new(1, 1));
        assert!(budget_allows(&g, &[(0, 2)], &rule, None).is_err());
    }

    #[test]
    fn rule_json() {
        let rule = BudgetRule::keep_degree(Alpha::new(1, 3), 2);
        let json = serde_json::to_string(&rule).unwrap();
        assert_eq!(json, r#"{"rule":"fraction-keep-degree","alpha":"1/3","k":2}"#);
        assert_eq!(serde_json::from_str::<BudgetRule>(&json).unwrap(), rule);
    }
}
