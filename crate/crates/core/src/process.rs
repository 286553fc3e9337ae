//! Seeded samplers for the random graph process and the binomial models.
//!
//! A [`ProcessTrace`] is stored implicitly as `(n, seed)`. Its edge order is
//! streamed: while fewer than half of the `N = n(n-1)/2` pairs have arrived,
//! each step draws a uniformly random pair and rejects those already present,
//! which is exactly "add a uniformly random missing edge". Once half the
//! pairs are in, the remaining pairs are listed and finished with an
//! incremental Fisher–Yates shuffle. Memory stays `O(n + m)` for the sparse
//! prefixes that hitting-time scans consume.

use std::collections::HashSet;

use rand::Rng;
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{is_k_connected, Edge, Graph};
use crate::rng::{derive_seed, rng_from_seed, GENERATOR_ID};

/// Number of vertex pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProcessTrace {
    n: usize,
    seed: u64,
}

/// JSON form of a trace: `{"n": .., "seed": .., "generator": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDescriptor {
    pub n: usize,
    pub seed: u64,
    pub generator: String,
}

impl ProcessTrace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn pair_count(&self) -> usize {
        pair_count(self.n)
    }

    /// Streams the edge arrival order.
    pub fn edges(&self) -> EdgeStream {
        EdgeStream::new(self.n, self.seed)
    }

    /// The whole permutation of pairs. `O(N)` memory.
    pub fn order(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    pub fn descriptor(&self) -> TraceDescriptor {
        TraceDescriptor {
            n: self.n,
            seed: self.seed,
            generator: GENERATOR_ID.to_string(),
        }
    }

    pub fn from_descriptor(d: &TraceDescriptor) -> Result<Self> {
        if d.generator != GENERATOR_ID {
            return Err(invalid(format!(
                "trace generated by {:?}, this build uses {GENERATOR_ID:?}",
                d.generator
            )));
        }
        sample_process(d.n, d.seed)
    }
}

pub fn sample_process(n: usize, seed: u64) -> Result<ProcessTrace> {
    if n < 2 {
        return Err(invalid("a process needs at least 2 vertices"));
    }
    Ok(ProcessTrace { n, seed })
}

/// Iterator over the pairs of a trace in arrival order.
pub struct EdgeStream {
    n: usize,
    total: usize,
    emitted: usize,
    rng: SplitMix64,
    seen: HashSet<u64>,
    rest: Option<Vec<Edge>>,
}

impl EdgeStream {
    fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            total: pair_count(n),
            emitted: 0,
            rng: rng_from_seed(seed),
            seen: HashSet::new(),
            rest: None,
        }
    }

    fn key(&self, (u, v): Edge) -> u64 {
        (u as u64) * (self.n as u64) + v as u64
    }

    fn switch_to_dense(&mut self) {
        let mut rest = Vec::with_capacity(self.total - self.emitted);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.seen.contains(&self.key((u, v))) {
                    rest.push((u, v));
                }
            }
        }
        self.seen = HashSet::new();
        self.rest = Some(rest);
    }
}

impl Iterator for EdgeStream {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        if self.emitted == self.total {
            return None;
        }
        if self.rest.is_none() && 2 * self.emitted >= self.total {
            self.switch_to_dense();
        }
        let edge = if let Some(rest) = &mut self.rest {
            // Incremental Fisher–Yates over the unseen pairs.
            let offset = self.emitted - (self.total - rest.len());
            let remaining = rest.len() - offset;
            let j = offset + self.rng.gen_range(0..remaining);
            rest.swap(offset, j);
            rest[offset]
        } else {
            loop {
                let u = self.rng.gen_range(0..self.n);
                let v = self.rng.gen_range(0..self.n);
                if u == v {
                    continue;
                }
                let e = if u < v { (u, v) } else { (v, u) };
                let key = self.key(e);
                if self.seen.insert(key) {
                    break e;
                }
            }
        };
        self.emitted += 1;
        Some(edge)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.emitted;
        (left, Some(left))
    }
}

impl ExactSizeIterator for EdgeStream {}

/// `G_m`: the graph on the first `m` arrivals.
pub fn graph_at(trace: &ProcessTrace, m: usize) -> Result<Graph> {
    if m > trace.pair_count() {
        return Err(invalid(format!(
            "m = {m} exceeds the {} pairs on {} vertices",
            trace.pair_count(),
            trace.n
        )));
    }
    let mut edges: Vec<Edge> = trace.edges().take(m).collect();
    edges.sort_unstable();
    Ok(Graph::from_sorted_edges(trace.n, &edges))
}

/// `tau_k`: first step at which every vertex has degree at least `k`.
pub fn hitting_time_min_degree(trace: &ProcessTrace, k: usize) -> Result<usize> {
    check_k(trace, k)?;
    Ok(min_degree_hitting_time(trace.n, trace.edges(), k).expect("the complete graph has minimum degree n - 1"))
}

/// `tau_{k-conn}`: first step at which `G_m` is `k`-connected.
pub fn hitting_time_k_connectivity(trace: &ProcessTrace, k: usize) -> Result<usize> {
    check_k(trace, k)?;
    Ok(k_connectivity_hitting_time(trace.n, trace.edges(), k).expect("the complete graph is (n-1)-connected"))
}

/// Minimum-degree hitting time along an explicit arrival order, in one pass
/// over degree counters. `None` if the order never reaches it.
pub fn min_degree_hitting_time(n: usize, order: impl IntoIterator<Item = Edge>, k: usize) -> Option<usize> {
    if k == 0 {
        return Some(0);
    }
    let mut deg = vec![0usize; n];
    let mut short = n;
    for (i, (u, v)) in order.into_iter().enumerate() {
        for x in [u, v] {
            deg[x] += 1;
            if deg[x] == k {
                short -= 1;
            }
        }
        if short == 0 {
            return Some(i + 1);
        }
    }
    None
}

/// k-connectivity hitting time along an explicit arrival order.
///
/// `k = 1` tracks components with a union-find. For larger `k` the answer is
/// located by galloping and then bisecting upward from the minimum-degree
/// hitting time, which relies on k-connectivity surviving edge additions.
pub fn k_connectivity_hitting_time(n: usize, order: impl IntoIterator<Item = Edge>, k: usize) -> Option<usize> {
    if k == 0 {
        return Some(0);
    }
    let mut stream = order.into_iter();
    if k == 1 {
        if n == 1 {
            return None;
        }
        let mut uf = UnionFind::new(n);
        let mut parts = n;
        for (i, (u, v)) in stream.enumerate() {
            if uf.union(u, v) {
                parts -= 1;
                if parts == 1 {
                    return Some(i + 1);
                }
            }
        }
        return None;
    }

    let mut prefix: Vec<Edge> = Vec::new();
    let holds = |m: usize, prefix: &[Edge]| -> bool {
        let mut edges = prefix[..m].to_vec();
        edges.sort_unstable();
        edges.dedup();
        is_k_connected(&Graph::from_sorted_edges(n, &edges), k)
    };

    let mut deg = vec![0usize; n];
    let mut short = n;
    // Walk to the minimum-degree hitting time, keeping the prefix.
    while short > 0 {
        let (u, v) = stream.next()?;
        prefix.push((u, v));
        for x in [u, v] {
            deg[x] += 1;
            if deg[x] == k {
                short -= 1;
            }
        }
    }
    let lower = prefix.len();

    // Fills the prefix to length m; false if the order is shorter.
    let mut extend = |m: usize, prefix: &mut Vec<Edge>| -> bool {
        while prefix.len() < m {
            match stream.next() {
                Some(e) => prefix.push(e),
                None => return false,
            }
        }
        true
    };

    // Invariant: the predicate fails at `fail` (or fail < lower) and holds at `hi`.
    let mut fail = lower - 1;
    let mut hi = lower;
    let mut step = 1;
    loop {
        if !extend(hi, &mut prefix) {
            // Ran past the end: clamp to the full order and try once more.
            hi = prefix.len();
            if hi == fail || !holds(hi, &prefix) {
                return None;
            }
            break;
        }
        if holds(hi, &prefix) {
            break;
        }
        fail = hi;
        hi += step;
        step *= 2;
    }
    while hi - fail > 1 {
        let mid = fail + (hi - fail) / 2;
        if holds(mid, &prefix) {
            hi = mid;
        } else {
            fail = mid;
        }
    }
    Some(hi)
}

fn check_k(trace: &ProcessTrace, k: usize) -> Result<()> {
    if k > trace.n - 1 {
        return Err(invalid(format!("k = {k} exceeds n - 1 = {}", trace.n - 1)));
    }
    Ok(())
}

/// Uniform graph with exactly `m` edges: the first `m` arrivals of the
/// process seeded with `seed`.
pub fn sample_gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m > pair_count(n) {
        return Err(invalid(format!("m = {m} exceeds the {} pairs", pair_count(n))));
    }
    if n < 2 {
        return Ok(Graph::empty(n));
    }
    graph_at(&sample_process(n, seed)?, m)
}

/// Binomial random graph, sampled by geometric skipping over the pairs
/// (Batagelj and Brandes) so the cost is proportional to the output.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p, "p")?;
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = rng_from_seed(seed);
    let log_q = (1.0 - p).ln();
    let cap = pair_count(n) as f64;
    let mut edges = Vec::new();
    let mut v = 1usize;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor().min(cap);
        w += 1 + skip as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_edges(n, &edges))
}

/// A pair `G- ~ G(n, p0)` and `G+ = G- ∪ G(n, p')` with independent layers.
#[derive(Clone, Debug)]
pub struct CoupledSample {
    pub g_minus: Graph,
    pub g_plus: Graph,
    pub p0: f64,
    pub p_prime: f64,
    /// `1 - (1 - p0)(1 - p')`, the edge probability of `g_plus`.
    pub p1: f64,
}

/// `1 - (1 - p0)(1 - p')`, evaluated as `p0 + p' - p0 p'` so that either
/// probability being zero returns the other one unrounded.
pub fn coupled_probability(p0: f64, p_prime: f64) -> f64 {
    p0 + p_prime - p0 * p_prime
}

pub fn sample_coupled(n: usize, p0: f64, p_prime: f64, seed: u64) -> Result<CoupledSample> {
    check_probability(p0, "p0")?;
    check_probability(p_prime, "p_prime")?;
    let g_minus = sample_gnp(n, p0, derive_seed(seed, &[0]))?;
    let extra = sample_gnp(n, p_prime, derive_seed(seed, &[1]))?;
    let g_plus = g_minus.union(&extra)?;
    Ok(CoupledSample {
        g_minus,
        g_plus,
        p0,
        p_prime,
        p1: coupled_probability(p0, p_prime),
    })
}

fn check_probability(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} = {p} outside [0, 1]")));
    }
    Ok(())
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns whether they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
