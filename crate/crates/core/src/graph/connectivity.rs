use std::collections::VecDeque;

use super::{Graph, Subgraph, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Component index of every vertex, numbered in order of smallest member.
pub fn component_labels(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbours(v) {
                if label[u] == usize::MAX {
                    label[u] = count;
                    queue.push_back(u);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Components ordered by decreasing size, ties by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    let (label, count) = component_labels(g);
    let mut sets = vec![VertexSet::new(g.n()); count];
    for (v, &c) in label.iter().enumerate() {
        sets[c].insert(v);
    }
    // Labels already follow smallest member, so a stable sort by size suffices.
    let mut sized: Vec<(usize, VertexSet)> = sets.into_iter().map(|s| (s.len(), s)).collect();
    sized.sort_by_key(|s| std::cmp::Reverse(s.0));
    sized.into_iter().map(|(_, s)| s).collect()
}

/// A graph with at least one vertex and a single component.
pub fn is_connected(g: &Graph) -> bool {
    g.n() > 0 && component_labels(g).1 == 1
}

/// Largest component as an induced subgraph; ties go to the component
/// holding the smallest vertex.
pub fn giant_component(g: &Graph) -> Result<Subgraph> {
    if g.edge_count() == 0 {
        return Err(Error::NoGiant);
    }
    let comps = connected_components(g);
    Ok(g.induced(&comps[0]))
}

/// Maximal induced subgraph of minimum degree at least `k`.
pub fn k_core(g: &Graph, k: usize) -> Subgraph {
    let n = g.n();
    let mut deg = g.degrees();
    let mut removed = vec![false; n];
    let mut stack: Vec<Vertex> = (0..n).filter(|&v| deg[v] < k).collect();
    for &v in &stack {
        removed[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in g.neighbours(v) {
            if !removed[u] {
                deg[u] -= 1;
                if deg[u] < k {
                    removed[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    let keep = VertexSet::from_vertices(n, (0..n).filter(|&v| !removed[v])).expect("in range");
    g.induced(&keep)
}

/// `N^radius(v)`: vertices other than `v` within distance `radius`.
pub fn ball(g: &Graph, v: Vertex, radius: usize) -> VertexSet {
    let mut dist = vec![usize::MAX; g.n()];
    let mut out = VertexSet::new(g.n());
    let mut queue = VecDeque::from([v]);
    dist[v] = 0;
    while let Some(x) = queue.pop_front() {
        if dist[x] == radius {
            continue;
        }
        for &u in g.neighbours(x) {
            if dist[u] == usize::MAX {
                dist[u] = dist[x] + 1;
                out.insert(u);
                queue.push_back(u);
            }
        }
    }
    out
}

/// Whether removing any `k - 1` vertices leaves the graph connected.
///
/// Graphs on at most `k` vertices are never `k`-connected, so `K_{k+1}` is
/// the smallest `k`-connected graph. `k = 1` is plain connectivity, `k = 2`
/// uses articulation points, and larger `k` counts vertex-disjoint paths
/// from each of `k` fixed vertices: a separator of size below `k` misses one
/// of them and so separates it from some non-neighbour.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    assert!(k >= 1, "k must be positive");
    let n = g.n();
    if n < k + 1 {
        return false;
    }
    if g.min_degree().unwrap_or(0) < k {
        return false;
    }
    match k {
        1 => is_connected(g),
        2 => is_connected(g) && !has_articulation_point(g),
        _ => {
            let mut net = SplitNetwork::new(g);
            for s in 0..k {
                for t in 0..n {
                    if t == s || g.has_edge(s, t) {
                        continue;
                    }
                    if net.disjoint_paths(s, t, k) < k {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Number of internally vertex-disjoint `s`-`t` paths, counted up to `cap`.
///
/// `s` and `t` must be distinct and non-adjacent.
pub fn local_vertex_connectivity(g: &Graph, s: Vertex, t: Vertex, cap: usize) -> usize {
    assert!(
        s != t && !g.has_edge(s, t),
        "endpoints must be distinct and non-adjacent"
    );
    SplitNetwork::new(g).disjoint_paths(s, t, cap)
}

fn has_articulation_point(g: &Graph) -> bool {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbour index)
        let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if let Some(&u) = g.neighbours(v).get(*idx) {
                *idx += 1;
                if disc[u] == usize::MAX {
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((u, v, 0));
                } else if u != parent {
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        return true;
                    }
                }
            }
        }
        if root_children > 1 {
            return true;
        }
    }
    false
}

/// Unit-capacity flow network with every vertex split into an in/out pair.
struct SplitNetwork {
    arcs: Vec<Vec<Arc>>,
}

struct Arc {
    to: usize,
    rev: usize,
    base: u32,
    cap: u32,
}

impl SplitNetwork {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        // node 2v = in(v), 2v + 1 = out(v)
        let mut net = Self {
            arcs: (0..2 * n).map(|_| Vec::new()).collect(),
        };
        for v in 0..n {
            net.add(2 * v, 2 * v + 1);
        }
        for (u, v) in g.edges() {
            net.add(2 * u + 1, 2 * v);
            net.add(2 * v + 1, 2 * u);
        }
        net
    }

    fn add(&mut self, a: usize, b: usize) {
        let ra = self.arcs[b].len();
        let rb = self.arcs[a].len();
        self.arcs[a].push(Arc {
            to: b,
            rev: ra,
            base: 1,
            cap: 1,
        });
        self.arcs[b].push(Arc {
            to: a,
            rev: rb,
            base: 0,
            cap: 0,
        });
    }

    fn disjoint_paths(&mut self, s: Vertex, t: Vertex, limit: usize) -> usize {
        for list in &mut self.arcs {
            for arc in list {
                arc.cap = arc.base;
            }
        }
        let source = 2 * s + 1;
        let sink = 2 * t;
        let nodes = self.arcs.len();
        let mut parent: Vec<(usize, usize)> = vec![(usize::MAX, 0); nodes];
        let mut flow = 0;
        while flow < limit {
            parent.iter_mut().for_each(|p| p.0 = usize::MAX);
            let mut queue = VecDeque::from([source]);
            let mut found = false;
            'bfs: while let Some(a) = queue.pop_front() {
                for (i, arc) in self.arcs[a].iter().enumerate() {
                    let b = arc.to;
                    if arc.cap > 0 && b != source && parent[b].0 == usize::MAX {
                        parent[b] = (a, i);
                        if b == sink {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(b);
                    }
                }
            }
            if !found {
                break;
            }
            let mut b = sink;
            while b != source {
                let (a, i) = parent[b];
                self.arcs[a][i].cap -= 1;
                let rev = self.arcs[a][i].rev;
                self.arcs[b][rev].cap += 1;
                b = a;
            }
            flow += 1;
        }
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn components_of_basic_graphs() {
        let c5 = Graph::cycle(5);
        assert_eq!(connected_components(&c5).len(), 1);
        let e4 = Graph::empty(4);
        let comps = connected_components(&e4);
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|c| c.len() == 1));
        let tt = connected_components(&two_triangles());
        assert_eq!(tt[0].to_vec(), vec![0, 1, 2]);
        assert_eq!(tt[1].to_vec(), vec![3, 4, 5]);
    }

    #[test]
    fn components_sorted_by_size() {
        let g = Graph::new(6, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let sizes: Vec<usize> = connected_components(&g).iter().map(VertexSet::len).collect();
        assert_eq!(sizes, vec![3, 2, 1]);
    }

    #[test]
    fn giant_cases() {
        let g = Graph::new(4, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let giant = giant_component(&g).unwrap();
        assert_eq!(giant.original, vec![1, 2, 3]);
        assert_eq!(giant.graph.edge_count(), 3);

        let tt = giant_component(&two_triangles()).unwrap();
        assert_eq!(tt.original, vec![0, 1, 2]);

        let c5 = Graph::cycle(5);
        let same = giant_component(&c5).unwrap();
        assert_eq!(same.graph, c5);
        assert_eq!(same.original, vec![0, 1, 2, 3, 4]);

        assert!(matches!(giant_component(&Graph::empty(3)), Err(Error::NoGiant)));
    }

    #[test]
    fn k_core_cases() {
        let tree = Graph::new(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        assert_eq!(k_core(&tree, 2).graph.n(), 0);
        let c6 = Graph::cycle(6);
        assert_eq!(k_core(&c6, 2).graph, c6);
        let mut edges: Vec<_> = Graph::complete(5).edges().collect();
        edges.push((4, 5));
        let g = Graph::new(6, edges).unwrap();
        let core = k_core(&g, 3);
        assert_eq!(core.original, vec![0, 1, 2, 3, 4]);
        assert_eq!(core.graph, Graph::complete(5));
    }

    #[test]
    fn k_connectivity_cases() {
        assert!(is_k_connected(&Graph::complete(4), 3));
        assert!(!is_k_connected(&Graph::complete(4), 4));
        assert!(!is_k_connected(&Graph::path(3), 2));
        assert!(is_k_connected(&Graph::cycle(5), 2));
        assert!(!is_k_connected(&Graph::cycle(5), 3));
        assert!(is_k_connected(&Graph::path(2), 1));
        assert!(!is_k_connected(&Graph::empty(1), 1));
        // K_{3,3} is 3-connected but not 4-connected.
        let k33 = Graph::new(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b)))).unwrap();
        assert!(is_k_connected(&k33, 3));
        assert!(!is_k_connected(&k33, 4));
    }

    #[test]
    fn articulation_point_detection() {
        // Bowtie: two triangles sharing vertex 2.
        let bowtie = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(is_connected(&bowtie));
        assert!(!is_k_connected(&bowtie, 2));
        assert!(is_k_connected(&Graph::cycle(7), 2));
    }

    #[test]
    fn local_connectivity_of_cycle() {
        let c6 = Graph::cycle(6);
        assert_eq!(local_vertex_connectivity(&c6, 0, 3, 10), 2);
        assert_eq!(local_vertex_connectivity(&c6, 0, 3, 1), 1);
    }

    #[test]
    fn ball_cases() {
        let c6 = Graph::cycle(6);
        assert_eq!(ball(&c6, 0, 1).to_vec(), vec![1, 5]);
        assert_eq!(ball(&c6, 0, 3).to_vec(), vec![1, 2, 3, 4, 5]);
        let star = Graph::new(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(ball(&star, 0, 1).to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(ball(&star, 1, 1).to_vec(), vec![0]);
    }
}
