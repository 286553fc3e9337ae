mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

use common::{all_graphs, connected_within, k_connected, peel, random_connected, Bits};
use resilience_core::graph::{
    ball, connected_components, giant_component, is_connected, is_k_connected, k_core, parse_graph, write_graph,
};
use resilience_core::{Graph, VertexSet};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::new(n, edges).unwrap()
        })
    })
}

#[test]
fn connected_class_counts() {
    let counts: Vec<usize> = (1..=6)
        .map(|n| {
            all_graphs(n)
                .iter()
                .filter(|g| connected_within(&g.adj, g.full()))
                .count()
        })
        .collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
}

#[test]
fn k_connectivity_matches_exhaustive_small() {
    for n in 1..=6 {
        for g in all_graphs(n) {
            let graph = g.to_graph();
            for k in 1..=5 {
                assert_eq!(
                    is_k_connected(&graph, k),
                    k_connected(&g.adj, n, k),
                    "{:?} k={k}",
                    g.edges()
                );
            }
        }
    }
}

#[test]
fn k_connectivity_matches_exhaustive_random() {
    for i in 0..600u64 {
        let n = 2 + (i % 9) as usize;
        let max = n * (n - 1) / 2;
        let m = n - 1 + (i as usize * 7919) % (max + 2 - n);
        let g = random_connected(n, m, i);
        let graph = g.to_graph();
        for k in 1..=4 {
            assert_eq!(
                is_k_connected(&graph, k),
                k_connected(&g.adj, n, k),
                "{:?} k={k}",
                g.edges()
            );
        }
    }
}

#[test]
fn kcore_examples() {
    let mut edges: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    edges.push((4, 5));
    let g = Graph::new(6, edges).unwrap();
    let core = k_core(&g, 3);
    assert_eq!(core.original, vec![0, 1, 2, 3, 4]);
    assert_eq!(core.graph, Graph::complete(5));
    assert_eq!(k_core(&Graph::path(6), 2).graph.n(), 0);
}

#[test]
fn giant_tie_break_prefers_smallest_vertex() {
    let g = Graph::new(6, [(3, 4), (1, 5), (0, 2)]).unwrap();
    assert_eq!(giant_component(&g).unwrap().original, vec![0, 2]);
}

#[test]
fn ball_examples() {
    let b = ball(&Graph::cycle(6), 0, 3);
    assert_eq!(b.to_vec(), vec![1, 2, 3, 4, 5]);
    let star = Graph::new(5, (1..5).map(|v| (0, v))).unwrap();
    assert_eq!(ball(&star, 0, 1).to_vec(), vec![1, 2, 3, 4]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kcore_is_peeling_fixed_point(g in arb_graph(12), k in 1usize..5, seed in any::<u64>()) {
        let core = k_core(&g, k);
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.shuffle(&mut SplitMix64::seed_from_u64(seed));
        prop_assert_eq!(&core.original, &peel(&g, k, &order));
        prop_assert!(core.graph.min_degree().is_none_or(|d| d >= k));
    }

    #[test]
    fn one_connected_means_one_component(g in arb_graph(10)) {
        let single = connected_components(&g).len() == 1 && g.n() >= 2;
        prop_assert_eq!(is_k_connected(&g, 1), single);
        prop_assert_eq!(is_connected(&g) && g.n() >= 2, single);
    }

    #[test]
    fn k_connectivity_is_monotone(g in arb_graph(9)) {
        for k in 2..=5 {
            if is_k_connected(&g, k) {
                for j in 1..k {
                    prop_assert!(is_k_connected(&g, j));
                }
            }
        }
    }

    #[test]
    fn balls_nest_and_exclude_centre(g in arb_graph(12), v in 0usize..12, l in 0usize..5) {
        let v = v % g.n();
        let inner = ball(&g, v, l);
        let outer = ball(&g, v, l + 1);
        prop_assert!(inner.is_subset(&outer));
        prop_assert!(!outer.contains(v));
    }

    #[test]
    fn components_partition_vertices(g in arb_graph(12)) {
        let parts = connected_components(&g);
        let mut seen = VertexSet::new(g.n());
        for p in &parts {
            prop_assert!(p.is_disjoint(&seen));
            seen.union_with(p);
            let bits = Bits::from_graph(&g);
            let mask = p.iter().fold(0u64, |m, x| m | 1 << x);
            prop_assert!(connected_within(&bits.adj, mask));
        }
        prop_assert_eq!(seen.len(), g.n());
    }

    #[test]
    fn text_format_round_trips(g in arb_graph(15)) {
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }
}
