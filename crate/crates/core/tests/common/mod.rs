//! Brute-force oracles for the integration tests. These work on bitmask
//! adjacency and never call the library's search code.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use resilience_core::{Cut, Graph};

/// Adjacency as one bitmask per vertex (n <= 32).
#[derive(Clone, Debug)]
pub struct Bits {
    pub n: usize,
    pub adj: Vec<u64>,
}

impl Bits {
    pub fn from_graph(g: &Graph) -> Self {
        assert!(g.n() <= 32);
        let mut adj = vec![0u64; g.n()];
        for (u, v) in g.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Self { n: g.n(), adj }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u] >> v & 1 == 1 {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn to_graph(&self) -> Graph {
        Graph::new(self.n, self.edges()).unwrap()
    }
}

/// Whether the vertices in `alive` induce a connected graph (vacuous for <= 1).
pub fn connected_within(adj: &[u64], alive: u64) -> bool {
    if alive.count_ones() <= 1 {
        return true;
    }
    let start = alive.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & alive & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == alive
}

/// n >= k + 1 and no set of at most k - 1 vertices disconnects the rest.
pub fn k_connected(adj: &[u64], n: usize, k: usize) -> bool {
    if n < k + 1 {
        return false;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    fn removals_ok(adj: &[u64], alive: u64, from: usize, left: usize) -> bool {
        if !connected_within(adj, alive) {
            return false;
        }
        left == 0 || (from..adj.len()).all(|v| removals_ok(adj, alive & !(1 << v), v + 1, left - 1))
    }
    removals_ok(adj, full, 0, k - 1)
}

/// `floor(num * d / den)` per vertex, then `min(.., d - keep)` if given.
pub fn capacities(g: &Bits, num: u64, den: u64, keep: Option<usize>) -> Vec<i64> {
    (0..g.n)
        .map(|v| {
            let d = g.degree(v) as i64;
            let frac = (num as i64 * d).div_euclid(den as i64);
            match keep {
                Some(k) => frac.min(d - k as i64),
                None => frac,
            }
        })
        .collect()
}

/// Is there an edge set `H` with `deg_H(v) <= caps[v]` for all `v` such that
/// `G - H` is not k-connected? Depth-first over edges, include before
/// exclude. A branch is cut when even deleting every still-deletable edge
/// leaves a k-connected graph, or when degree counting rules out any side.
pub fn naive_attack_exists(g: &Bits, caps: &[i64], k: usize) -> bool {
    if caps.iter().any(|&c| c < 0) {
        return false;
    }
    let edges = g.edges();
    let mut cur = g.adj.clone();
    let mut rem = caps.to_vec();
    dfs(g.n, k, &edges, 0, &mut cur, &mut rem)
}

fn dfs(n: usize, k: usize, edges: &[(usize, usize)], i: usize, cur: &mut [u64], rem: &mut [i64]) -> bool {
    if !k_connected(cur, n, k) {
        return true;
    }
    // Every completion keeps at least floor[v] edges at v. Separating a side
    // X of size s with |S| = j needs s vertices whose degree can fall to
    // s - 1 + j; if no (s, j) admits that, no completion works.
    let mut undecided = vec![0i64; n];
    for &(u, v) in &edges[i..] {
        undecided[u] += 1;
        undecided[v] += 1;
    }
    let mut floor: Vec<i64> = (0..n)
        .map(|v| cur[v].count_ones() as i64 - rem[v].min(undecided[v]))
        .collect();
    floor.sort_unstable();
    let feasible = (0..k).any(|j| (1..=(n.saturating_sub(j)) / 2).any(|s| floor[s - 1] <= (s - 1 + j) as i64));
    if n > k && !feasible {
        return false;
    }
    let mut opt = cur.to_vec();
    for &(u, v) in &edges[i..] {
        if rem[u] > 0 && rem[v] > 0 {
            opt[u] &= !(1 << v);
            opt[v] &= !(1 << u);
        }
    }
    if k_connected(&opt, n, k) {
        return false;
    }
    let (u, v) = edges[i];
    if rem[u] > 0 && rem[v] > 0 {
        cur[u] &= !(1 << v);
        cur[v] &= !(1 << u);
        rem[u] -= 1;
        rem[v] -= 1;
        let found = dfs(n, k, edges, i + 1, cur, rem);
        cur[u] |= 1 << v;
        cur[v] |= 1 << u;
        rem[u] += 1;
        rem[v] += 1;
        if found {
            return true;
        }
    }
    dfs(n, k, edges, i + 1, cur, rem)
}

/// Independent replay of a certificate: H = E(A, B) fits `caps`, |S| <= k-1,
/// and `(G - H) - S` is disconnected.
pub fn certificate_holds(g: &Bits, cut: &Cut, caps: &[i64], k: usize) -> bool {
    let mask = |vs: &[usize]| vs.iter().fold(0u64, |m, &v| m | 1 << v);
    let (s, a, b) = (mask(&cut.separator), mask(&cut.side_a), mask(&cut.side_b));
    if a == 0 || b == 0 || a & b != 0 || (a | b) & s != 0 || (a | b | s) != g.full() {
        return false;
    }
    if cut.separator.len() + 1 > k {
        return false;
    }
    let mut cur = g.adj.clone();
    for v in 0..g.n {
        let other = if a >> v & 1 == 1 {
            b
        } else if b >> v & 1 == 1 {
            a
        } else {
            0
        };
        let cross = g.adj[v] & other;
        if cross.count_ones() as i64 > caps[v] {
            return false;
        }
        cur[v] &= !cross;
    }
    !connected_within(&cur, a | b)
}

/// Smallest `max_v cut(v)/deg(v)` over all bipartitions, as `(num, den)`
/// reduced by cross-multiplication. Brute force over every subset.
pub fn brute_threshold(g: &Bits) -> (u64, u64) {
    let mut best = (1u64, 0u64); // sentinel: infinity
    let full = g.full();
    for a in 1..full {
        if a & 1 == 0 {
            continue; // vertex 0 always in A; halves the work
        }
        let mut worst = (0u64, 1u64);
        for v in 0..g.n {
            let d = g.degree(v) as u64;
            let other = if a >> v & 1 == 1 { full & !a } else { a };
            let c = (g.adj[v] & other).count_ones() as u64;
            if d > 0 && c * worst.1 > worst.0 * d {
                worst = (c, d);
            }
        }
        if best.1 == 0 || worst.0 * best.1 < best.0 * worst.1 {
            best = worst;
        }
    }
    let gcd = num_gcd(best.0, best.1);
    (best.0 / gcd, best.1 / gcd)
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        num_gcd(b, a % b)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn code(adj: &[u64], perm: &[usize]) -> u64 {
    let n = adj.len();
    let mut c = 0u64;
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj[perm[i]] >> perm[j] & 1 == 1 {
                c |= 1 << bit;
            }
            bit += 1;
        }
    }
    c
}

fn canonical(adj: &[u64], perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|p| code(adj, p)).max().unwrap()
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// built by attaching a new vertex to every class on `n - 1` vertices.
pub fn all_graphs(n: usize) -> Vec<Bits> {
    let mut level = vec![Bits { n: 1, adj: vec![0] }];
    for size in 2..=n {
        let perms = permutations(size);
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for nb in 0u64..1 << (size - 1) {
                let mut adj = g.adj.clone();
                adj.push(nb);
                for (v, a) in adj.iter_mut().enumerate().take(size - 1) {
                    if nb >> v & 1 == 1 {
                        *a |= 1 << (size - 1);
                    }
                }
                if seen.insert(canonical(&adj, &perms)) {
                    next.push(Bits { n: size, adj });
                }
            }
        }
        level = next;
    }
    level
}

/// Isomorphism classes of connected graphs on `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Bits> {
    all_graphs(n)
        .into_iter()
        .filter(|g| connected_within(&g.adj, g.full()))
        .collect()
}

/// Seeded random connected graph on `n` vertices with about `m` edges: a
/// random spanning tree plus uniform extra edges.
pub fn random_connected(n: usize, m: usize, seed: u64) -> Bits {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut adj = vec![0u64; n];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let max = n * (n - 1) / 2;
    let mut count = n - 1;
    while count < m.min(max) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && adj[u] >> v & 1 == 0 {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            count += 1;
        }
    }
    Bits { n, adj }
}

/// Vertices surviving single-vertex peeling in the given order, repeated
/// until nothing changes.
pub fn peel(g: &Graph, k: usize, order: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for &v in order {
            if alive[v] && g.neighbours(v).iter().filter(|&&u| alive[u]).count() < k {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// Pearson statistic for observed counts against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}
