//! Degree-based vertex classes and audits of the structural properties that
//! make the attacks fail on random graphs.
//!
//! A vertex is *tiny* when its degree in a reference graph is below `δnp`
//! and *atypical* when its degree lies outside `[(1-δ)np, (1+δ)np]`. The
//! audits check, on a concrete sample, that these vertices do not cluster
//! and that edge counts of vertex subsets stay near their expectation.
//! Every audit returns an [`AuditReport`] whose witnesses can be re-checked
//! with [`recheck_witness`].

use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{ball, connected_components, Graph, Subgraph, Vertex, VertexSet};
use crate::rng::rng_from_seed;

pub const TINY_BALL: &str = "tiny-ball";
pub const ATYP_NEIGHBOURS: &str = "atyp-neighbours";
pub const TINY_TRIANGLE: &str = "tiny-triangle";
pub const ATYP_SIZE: &str = "atyp-size";
pub const EDGE_DENSITY: &str = "edge-density";

/// Radius of the neighbourhood in which tiny vertices are counted.
pub const TINY_BALL_RADIUS: usize = 3;
/// Largest number of tiny vertices a radius-3 ball (centre included) may hold.
pub const TINY_BALL_LIMIT: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct VertexClassification {
    /// Fingerprint of the graph whose degrees define the classes.
    pub reference: u64,
    /// Size of the vertex universe the sets live in.
    pub universe: usize,
    /// `n` in the thresholds `δnp`, `(1 ± δ)np`.
    pub n: usize,
    pub p: f64,
    pub delta: f64,
    pub tiny: VertexSet,
    pub atyp: VertexSet,
}

impl VertexClassification {
    /// Re-expresses the classes in the local labels of an induced subgraph.
    pub fn localize(&self, sub: &Subgraph) -> Result<VertexClassification> {
        if sub.original.last().is_some_and(|&v| v >= self.universe) {
            return Err(Error::UniverseMismatch {
                expected: self.universe,
                found: sub.original.last().copied().unwrap_or(0) + 1,
            });
        }
        Ok(VertexClassification {
            universe: sub.graph.n(),
            tiny: sub.localize(&self.tiny),
            atyp: sub.localize(&self.atyp),
            ..self.clone()
        })
    }
}

/// Chernoff tail bounds for `Bin(n, p)` with `μ = np`:
/// `(e^{-δ²μ/3}, e^{-δ²μ/2})` for the upper and lower tail.
pub fn chernoff_tail_bounds(n: usize, p: f64, delta: f64) -> Result<(f64, f64)> {
    check_delta(delta)?;
    let mu = n as f64 * p;
    Ok(((-delta * delta * mu / 3.0).exp(), (-delta * delta * mu / 2.0).exp()))
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta = {delta} outside (0, 1)")));
    }
    Ok(())
}

/// Classifies every vertex of `g_ref`, optionally keeping only members of
/// `restrict_to`. The sets stay in `g_ref`'s universe.
pub fn classify_vertices(
    g_ref: &Graph,
    p: f64,
    delta: f64,
    restrict_to: Option<&VertexSet>,
) -> Result<VertexClassification> {
    check_delta(delta)?;
    let n = g_ref.n();
    if let Some(r) = restrict_to {
        if r.universe() != n {
            return Err(Error::UniverseMismatch {
                expected: n,
                found: r.universe(),
            });
        }
    }
    let np = n as f64 * p;
    let mut tiny = VertexSet::new(n);
    let mut atyp = VertexSet::new(n);
    for v in 0..n {
        if restrict_to.is_some_and(|r| !r.contains(v)) {
            continue;
        }
        let d = g_ref.degree(v) as f64;
        if d < delta * np {
            tiny.insert(v);
        }
        if d < (1.0 - delta) * np || d > (1.0 + delta) * np {
            atyp.insert(v);
        }
    }
    Ok(VertexClassification {
        reference: g_ref.fingerprint(),
        universe: n,
        n,
        p,
        delta,
        tiny,
        atyp,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Subject first (vertex, triangle or subset), then the offending members
    /// where the property counts members.
    pub vertices: Vec<Vertex>,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub property: String,
    pub holds: bool,
    pub max_observed: f64,
    pub bound: f64,
    pub violations: Vec<Witness>,
    pub params: BTreeMap<String, f64>,
}

impl AuditReport {
    fn new(property: &str, max_observed: f64, bound: f64, violations: Vec<Witness>) -> Self {
        Self {
            property: property.to_string(),
            holds: violations.is_empty(),
            max_observed,
            bound,
            violations,
            params: BTreeMap::new(),
        }
    }

    fn with_params(mut self, params: &[(&str, f64)]) -> Self {
        self.params = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        self
    }
}

/// `|ATYP| <= n / ln n`.
pub fn audit_atyp_size(cls: &VertexClassification) -> Result<AuditReport> {
    if cls.n < 2 {
        return Err(invalid("atypical-size bound needs n >= 2"));
    }
    let bound = cls.n as f64 / (cls.n as f64).ln();
    let size = cls.atyp.len() as f64;
    let violations = if size > bound {
        vec![Witness {
            vertices: cls.atyp.to_vec(),
            measured: size,
            bound,
        }]
    } else {
        Vec::new()
    };
    Ok(AuditReport::new(ATYP_SIZE, size, bound, violations).with_params(&[
        ("p", cls.p),
        ("delta", cls.delta),
        ("n", cls.n as f64),
    ]))
}

/// The three clustering audits on `g_plus` with classes taken from the
/// coupled `G-`: radius-3 balls hold at most two tiny vertices, every vertex
/// has at most `l` atypical neighbours, and no triangle holds two tiny
/// vertices. Reports come back in that order.
pub fn audit_neighbourhoods(g_plus: &Graph, cls: &VertexClassification, l: usize) -> Result<Vec<AuditReport>> {
    let n = g_plus.n();
    if cls.universe != n {
        return Err(Error::UniverseMismatch {
            expected: cls.universe,
            found: n,
        });
    }
    let params = [("p", cls.p), ("delta", cls.delta), ("L", l as f64)];

    // Distances are symmetric, so a search from each tiny vertex counts it
    // in the ball of everything it reaches. The ball here includes its centre.
    let mut tiny_in_ball = vec![0usize; n];
    for t in cls.tiny.iter() {
        tiny_in_ball[t] += 1;
        for u in ball(g_plus, t, TINY_BALL_RADIUS).iter() {
            tiny_in_ball[u] += 1;
        }
    }
    let mut ball_violations = Vec::new();
    for v in 0..n {
        if tiny_in_ball[v] > TINY_BALL_LIMIT {
            let mut vertices = vec![v];
            let mut members = ball(g_plus, v, TINY_BALL_RADIUS);
            members.insert(v);
            members.intersect_with(&cls.tiny);
            vertices.extend(members.iter());
            ball_violations.push(Witness {
                vertices,
                measured: tiny_in_ball[v] as f64,
                bound: TINY_BALL_LIMIT as f64,
            });
        }
    }
    let max_ball = tiny_in_ball.iter().copied().max().unwrap_or(0);
    let ball_report =
        AuditReport::new(TINY_BALL, max_ball as f64, TINY_BALL_LIMIT as f64, ball_violations).with_params(&params);

    let mut atyp_nb = vec![0usize; n];
    for a in cls.atyp.iter() {
        for &u in g_plus.neighbours(a) {
            atyp_nb[u] += 1;
        }
    }
    let mut nb_violations = Vec::new();
    for v in 0..n {
        if atyp_nb[v] > l {
            let mut vertices = vec![v];
            vertices.extend(g_plus.neighbours(v).iter().filter(|&&u| cls.atyp.contains(u)));
            nb_violations.push(Witness {
                vertices,
                measured: atyp_nb[v] as f64,
                bound: l as f64,
            });
        }
    }
    let max_nb = atyp_nb.iter().copied().max().unwrap_or(0);
    let nb_report = AuditReport::new(ATYP_NEIGHBOURS, max_nb as f64, l as f64, nb_violations).with_params(&params);

    // A triangle with two tiny vertices contains a tiny-tiny edge.
    let mut bad: Vec<[Vertex; 3]> = Vec::new();
    for t in cls.tiny.iter() {
        for &u in g_plus.neighbours(t) {
            if u <= t || !cls.tiny.contains(u) {
                continue;
            }
            for w in common_neighbours(g_plus, t, u) {
                let mut tri = [t, u, w];
                tri.sort_unstable();
                bad.push(tri);
            }
        }
    }
    bad.sort_unstable();
    bad.dedup();
    let tiny_count = |tri: &[Vertex; 3]| tri.iter().filter(|&&x| cls.tiny.contains(x)).count();
    let max_tri = match bad.iter().map(tiny_count).max() {
        Some(m) => m,
        None if cls.tiny.iter().any(|t| in_triangle(g_plus, t)) => 1,
        None => 0,
    };
    let tri_violations = bad
        .iter()
        .map(|tri| Witness {
            vertices: tri.to_vec(),
            measured: tiny_count(tri) as f64,
            bound: 1.0,
        })
        .collect();
    let tri_report = AuditReport::new(TINY_TRIANGLE, max_tri as f64, 1.0, tri_violations).with_params(&params);

    Ok(vec![ball_report, nb_report, tri_report])
}

fn common_neighbours<'a>(g: &'a Graph, a: Vertex, b: Vertex) -> impl Iterator<Item = Vertex> + 'a {
    let (na, nb) = (g.neighbours(a), g.neighbours(b));
    let mut j = 0;
    na.iter().copied().filter(move |&x| {
        while j < nb.len() && nb[j] < x {
            j += 1;
        }
        j < nb.len() && nb[j] == x
    })
}

fn in_triangle(g: &Graph, v: Vertex) -> bool {
    g.neighbours(v)
        .iter()
        .any(|&u| common_neighbours(g, v, u).next().is_some())
}

/// Sum over `s <= 4` of `C(n, s)` below which small subsets are enumerated
/// exhaustively.
const EXHAUSTIVE_SMALL_LIMIT: u128 = 200_000;
/// Vertices of largest degree whose neighbourhoods are checked.
const TOP_DEGREE_SAMPLES: usize = 16;

/// Two-sided edge-count check `|e(X) - C(|X|,2)p| <= c|X|sqrt(np)`.
///
/// Checking every subset is infeasible, so this is sound but incomplete:
/// it covers every subset of size at most 4 (exhaustively on small graphs,
/// otherwise every connected one plus an independent set per size, skipping
/// sizes for which the bound cannot fail), `subset_trials` uniformly random
/// subsets of uniformly random size, each component, and the open and closed
/// neighbourhoods of the highest-degree vertices. `max_observed` is the
/// largest `|e(X) - C(|X|,2)p| / (|X| sqrt(np))` seen, i.e. the smallest `c`
/// that would pass on the subsets examined.
pub fn audit_edge_counts(g: &Graph, p: f64, c: f64, subset_trials: usize, seed: u64) -> Result<AuditReport> {
    if !(c > 0.0) {
        return Err(invalid(format!("c = {c} must be positive")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("p = {p} outside (0, 1]")));
    }
    let n = g.n();
    let mut checker = DensityChecker::new(g, p, c);

    // Small subsets.
    let total_small: u128 = (1..=4).map(|s| binomial(n as u128, s)).sum();
    if total_small <= EXHAUSTIVE_SMALL_LIMIT {
        let mut buf = Vec::with_capacity(4);
        for s in 1..=4.min(n) {
            for_each_combination(n, s, &mut buf, &mut |set| checker.check_slice(set));
        }
    } else {
        let max_size = (1..=4).rev().find(|&s| !checker.upper_safe(s)).unwrap_or(3).max(3);
        for_each_connected_set(g, max_size, &mut |set| checker.check_slice(set));
        for s in 1..=4 {
            if !checker.lower_safe(s) {
                if let Some(ind) = greedy_independent_set(g, s) {
                    checker.check_slice(&ind);
                }
            }
        }
    }

    // Random subsets.
    if n > 0 {
        let mut rng = rng_from_seed(seed);
        for _ in 0..subset_trials {
            let size = rng.gen_range(1..=n);
            let mut set = index::sample(&mut rng, n, size).into_vec();
            set.sort_unstable();
            checker.check_slice(&set);
        }
    }

    // Structured extremes.
    for comp in connected_components(g) {
        checker.check_slice(&comp.to_vec());
    }
    let mut by_degree: Vec<Vertex> = (0..n).collect();
    by_degree.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    for &v in by_degree.iter().take(TOP_DEGREE_SAMPLES) {
        let open = g.neighbours(v).to_vec();
        if !open.is_empty() {
            checker.check_slice(&open);
        }
        let mut closed = open;
        let pos = closed.partition_point(|&u| u < v);
        closed.insert(pos, v);
        checker.check_slice(&closed);
    }

    let DensityChecker {
        max_dev,
        max_excess,
        max_deficit,
        checked,
        mut violations,
        ..
    } = checker;
    violations.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    violations.dedup_by(|a, b| a.vertices == b.vertices);
    Ok(AuditReport::new(EDGE_DENSITY, max_dev, c, violations).with_params(&[
        ("p", p),
        ("c", c),
        ("subset_trials", subset_trials as f64),
        ("subsets_checked", checked as f64),
        ("max_excess", max_excess),
        ("max_deficit", max_deficit),
    ]))
}

struct DensityChecker<'a> {
    g: &'a Graph,
    p: f64,
    c: f64,
    scale: f64,
    mark: Vec<bool>,
    max_dev: f64,
    max_excess: f64,
    max_deficit: f64,
    checked: usize,
    violations: Vec<Witness>,
}

impl<'a> DensityChecker<'a> {
    fn new(g: &'a Graph, p: f64, c: f64) -> Self {
        Self {
            g,
            p,
            c,
            scale: (g.n() as f64 * p).sqrt(),
            mark: vec![false; g.n()],
            max_dev: 0.0,
            max_excess: 0.0,
            max_deficit: 0.0,
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn mean(&self, s: usize) -> f64 {
        (s * s.saturating_sub(1) / 2) as f64 * self.p
    }

    fn slack(&self, s: usize) -> f64 {
        self.c * s as f64 * self.scale
    }

    /// No set of size `s` can exceed the upper bound.
    fn upper_safe(&self, s: usize) -> bool {
        (s * (s - 1) / 2) as f64 <= self.mean(s) + self.slack(s)
    }

    /// No set of size `s` can fall below the lower bound.
    fn lower_safe(&self, s: usize) -> bool {
        self.mean(s) - self.slack(s) <= 0.0
    }

    /// `set` must be sorted and duplicate-free.
    fn check_slice(&mut self, set: &[Vertex]) {
        let s = set.len();
        if s == 0 {
            return;
        }
        for &v in set {
            self.mark[v] = true;
        }
        let twice: usize = set
            .iter()
            .map(|&v| self.g.neighbours(v).iter().filter(|&&u| self.mark[u]).count())
            .sum();
        for &v in set {
            self.mark[v] = false;
        }
        let e = (twice / 2) as f64;
        let mean = self.mean(s);
        let slack = self.slack(s);
        let norm = s as f64 * self.scale;
        let dev = if norm > 0.0 { (e - mean) / norm } else { 0.0 };
        self.checked += 1;
        self.max_excess = self.max_excess.max(dev);
        self.max_deficit = self.max_deficit.max(-dev);
        self.max_dev = self.max_dev.max(dev.abs());
        if e > mean + slack || e < mean - slack {
            self.violations.push(Witness {
                vertices: set.to_vec(),
                measured: e,
                bound: if e > mean + slack { mean + slack } else { mean - slack },
            });
        }
    }
}

fn binomial(n: u128, k: usize) -> u128 {
    let k = k as u128;
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn for_each_combination(n: usize, k: usize, buf: &mut Vec<Vertex>, f: &mut impl FnMut(&[Vertex])) {
    fn rec(start: usize, n: usize, k: usize, buf: &mut Vec<Vertex>, f: &mut impl FnMut(&[Vertex])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for v in start..n {
            if n - v < k - buf.len() {
                break;
            }
            buf.push(v);
            rec(v + 1, n, k, buf, f);
            buf.pop();
        }
    }
    buf.clear();
    rec(0, n, k, buf, f);
}

/// Every vertex set of size `1..=max_size` inducing a connected subgraph,
/// each exactly once (Wernicke's ESU enumeration). Sets are passed sorted.
fn for_each_connected_set(g: &Graph, max_size: usize, f: &mut impl FnMut(&[Vertex])) {
    fn extend(
        g: &Graph,
        root: Vertex,
        sub: &mut Vec<Vertex>,
        ext: Vec<Vertex>,
        max_size: usize,
        f: &mut impl FnMut(&[Vertex]),
    ) {
        let mut sorted = sub.clone();
        sorted.sort_unstable();
        f(&sorted);
        if sub.len() == max_size {
            return;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in g.neighbours(w) {
                if u <= root || sub.contains(&u) || next.contains(&u) {
                    continue;
                }
                // exclusive: not adjacent to the current subgraph
                if sub.iter().any(|&x| g.has_edge(x, u)) {
                    continue;
                }
                next.push(u);
            }
            sub.push(w);
            extend(g, root, sub, next, max_size, f);
            sub.pop();
        }
    }
    for v in 0..g.n() {
        let ext: Vec<Vertex> = g.neighbours(v).iter().copied().filter(|&u| u > v).collect();
        let mut sub = vec![v];
        extend(g, v, &mut sub, ext, max_size, f);
    }
}

fn greedy_independent_set(g: &Graph, size: usize) -> Option<Vec<Vertex>> {
    let mut chosen: Vec<Vertex> = Vec::with_capacity(size);
    for v in 0..g.n() {
        if chosen.len() == size {
            break;
        }
        if chosen.iter().all(|&u| !g.has_edge(u, v)) {
            chosen.push(v);
        }
    }
    (chosen.len() == size).then_some(chosen)
}

/// Re-derives one witness from scratch: the subject must really violate the
/// named property on `g` under `cls` (or, for the edge-count property, under
/// the report's `p` and `c`).
pub fn recheck_witness(g: &Graph, cls: &VertexClassification, report: &AuditReport, witness: &Witness) -> bool {
    let Some(&subject) = witness.vertices.first() else {
        return false;
    };
    match report.property.as_str() {
        TINY_BALL => {
            let members = &witness.vertices[1..];
            let dist = bfs_distances(g, subject);
            let mut distinct = members.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            distinct.len() == members.len()
                && members.len() > TINY_BALL_LIMIT
                && members
                    .iter()
                    .all(|&t| cls.tiny.contains(t) && dist[t] <= TINY_BALL_RADIUS)
        }
        ATYP_NEIGHBOURS => {
            let members = &witness.vertices[1..];
            let l = report.params.get("L").copied().unwrap_or(report.bound);
            members.len() as f64 > l && members.iter().all(|&u| g.has_edge(subject, u) && cls.atyp.contains(u))
        }
        TINY_TRIANGLE => {
            let v = &witness.vertices;
            v.len() == 3
                && g.has_edge(v[0], v[1])
                && g.has_edge(v[1], v[2])
                && g.has_edge(v[0], v[2])
                && v.iter().filter(|&&x| cls.tiny.contains(x)).count() >= 2
        }
        ATYP_SIZE => {
            let bound = cls.n as f64 / (cls.n as f64).ln();
            witness.vertices.len() as f64 > bound && witness.vertices.iter().all(|&v| cls.atyp.contains(v))
        }
        EDGE_DENSITY => {
            let (Some(&p), Some(&c)) = (report.params.get("p"), report.params.get("c")) else {
                return false;
            };
            let set = &witness.vertices;
            let s = set.len();
            let mut e = 0usize;
            for (i, &a) in set.iter().enumerate() {
                for &b in &set[i + 1..] {
                    if g.has_edge(a, b) {
                        e += 1;
                    }
                }
            }
            let mean = (s * (s - 1) / 2) as f64 * p;
            let slack = c * s as f64 * (g.n() as f64 * p).sqrt();
            (e as f64) > mean + slack || (e as f64) < mean - slack
        }
        _ => false,
    }
}

fn bfs_distances(g: &Graph, s: Vertex) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &u in g.neighbours(x) {
            if dist[u] == usize::MAX {
                dist[u] = dist[x] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls_with(g: &Graph, tiny: &[Vertex], atyp: &[Vertex]) -> VertexClassification {
        VertexClassification {
            reference: g.fingerprint(),
            universe: g.n(),
            n: g.n(),
            p: 0.5,
            delta: 0.1,
            tiny: VertexSet::from_vertices(g.n(), tiny.iter().copied()).unwrap(),
            atyp: VertexSet::from_vertices(g.n(), atyp.iter().copied()).unwrap(),
        }
    }

    #[test]
    fn chernoff_formula() {
        let (up, low) = chernoff_tail_bounds(300, 0.1, 0.5).unwrap();
        assert!((up - (-2.5f64).exp()).abs() < 1e-15);
        assert!((up - 0.0821).abs() < 1e-4);
        assert!((low - (-3.75f64).exp()).abs() < 1e-15);
        let (up, low) = chernoff_tail_bounds(300, 0.1, 1e-9).unwrap();
        assert!(up > 1.0 - 1e-12 && low > 1.0 - 1e-12);
        assert!(chernoff_tail_bounds(10, 0.5, 0.0).is_err());
        assert!(chernoff_tail_bounds(10, 0.5, 1.0).is_err());
    }

    #[test]
    fn star_classification() {
        let star = Graph::new(6, (1..6).map(|i| (0, i))).unwrap();
        let cls = classify_vertices(&star, 0.5, 0.5, None).unwrap();
        assert_eq!(cls.tiny.to_vec(), vec![1, 2, 3, 4, 5]);
        assert_eq!(cls.atyp.to_vec(), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn regular_graph_has_no_outliers() {
        let k4 = Graph::complete(4);
        let cls = classify_vertices(&k4, 0.75, 0.1, None).unwrap();
        assert!(cls.tiny.is_empty() && cls.atyp.is_empty());
    }

    #[test]
    fn restriction_and_localize() {
        let star = Graph::new(6, (1..6).map(|i| (0, i))).unwrap();
        let keep = VertexSet::from_vertices(6, [0, 2, 4]).unwrap();
        let cls = classify_vertices(&star, 0.5, 0.5, Some(&keep)).unwrap();
        assert_eq!(cls.tiny.to_vec(), vec![2, 4]);
        assert_eq!(cls.atyp.to_vec(), vec![0, 2, 4]);
        let sub = star.induced(&keep);
        let local = cls.localize(&sub).unwrap();
        assert_eq!(local.universe, 3);
        assert_eq!(local.tiny.to_vec(), vec![1, 2]);
        assert_eq!(local.n, 6);
    }

    #[test]
    fn atyp_size_audit() {
        let g = Graph::empty(8);
        let empty = cls_with(&g, &[], &[]);
        assert!(audit_atyp_size(&empty).unwrap().holds);
        let all = cls_with(&g, &[], &[0, 1, 2, 3, 4, 5, 6, 7]);
        let report = audit_atyp_size(&all).unwrap();
        assert!(!report.holds);
        assert!((report.bound - 8.0 / 8f64.ln()).abs() < 1e-12);
        assert_eq!(report.violations[0].vertices.len(), 8);
        assert!(recheck_witness(&g, &all, &report, &report.violations[0]));
        let one = cls_with(&Graph::empty(1), &[], &[]);
        assert!(audit_atyp_size(&one).is_err());
    }

    #[test]
    fn neighbourhood_audits_vacuous() {
        let g = Graph::cycle(7);
        let reports = audit_neighbourhoods(&g, &cls_with(&g, &[], &[]), 3).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn tiny_ball_boundary() {
        // a - c - b with a, b tiny: c sees exactly two.
        let g = Graph::new(3, [(0, 2), (1, 2)]).unwrap();
        let cls = cls_with(&g, &[0, 1], &[]);
        let r = &audit_neighbourhoods(&g, &cls, 30).unwrap()[0];
        assert!(r.holds);
        assert_eq!(r.max_observed, 2.0);

        // a third tiny pendant on c breaks it, at c and at each leaf
        let g = Graph::new(4, [(0, 2), (1, 2), (3, 2)]).unwrap();
        let cls = cls_with(&g, &[0, 1, 3], &[]);
        let r = &audit_neighbourhoods(&g, &cls, 30).unwrap()[0];
        assert!(!r.holds);
        assert_eq!(r.violations.len(), 4);
        assert_eq!(r.violations[2].vertices, vec![2, 0, 1, 3]);
        assert_eq!(r.violations[0].vertices, vec![0, 0, 1, 3]);

        // an isolated all-tiny path of length two is caught at its middle
        let g = Graph::path(3);
        let cls = cls_with(&g, &[0, 1, 2], &[]);
        let r = &audit_neighbourhoods(&g, &cls, 30).unwrap()[0];
        assert!(!r.holds);
        for w in &r.violations {
            assert!(recheck_witness(&g, &cls, r, w));
        }
    }

    #[test]
    fn tiny_triangle_detected() {
        let g = Graph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let cls = cls_with(&g, &[0, 1], &[]);
        let r = &audit_neighbourhoods(&g, &cls, 30).unwrap()[2];
        assert!(!r.holds);
        assert_eq!(r.violations[0].vertices, vec![0, 1, 2]);
        assert_eq!(r.max_observed, 2.0);
        assert!(recheck_witness(&g, &cls, r, &r.violations[0]));

        let cls = cls_with(&g, &[0], &[]);
        let r = &audit_neighbourhoods(&g, &cls, 30).unwrap()[2];
        assert!(r.holds);
        assert_eq!(r.max_observed, 1.0);
    }

    #[test]
    fn atyp_neighbour_limit() {
        let star = Graph::new(5, (1..5).map(|i| (0, i))).unwrap();
        let cls = cls_with(&star, &[], &[1, 2, 3, 4]);
        let r = &audit_neighbourhoods(&star, &cls, 3).unwrap()[1];
        assert!(!r.holds);
        assert_eq!(r.max_observed, 4.0);
        assert_eq!(r.violations[0].vertices, vec![0, 1, 2, 3, 4]);
        assert!(recheck_witness(&star, &cls, r, &r.violations[0]));
        assert!(audit_neighbourhoods(&star, &cls, 4).unwrap()[1].holds);
    }

    #[test]
    fn universe_mismatch_rejected() {
        let g = Graph::cycle(5);
        let other = Graph::cycle(6);
        assert!(matches!(
            audit_neighbourhoods(&g, &cls_with(&other, &[], &[]), 3),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn edge_counts_singletons_and_saturation() {
        let g = Graph::complete(12);
        let p = 1.0 - 1e-9;
        let r = audit_edge_counts(&g, p, 0.01, 50, 3).unwrap();
        assert!(r.holds);
        assert!(r.max_observed < 1e-6);

        let g = Graph::empty(5);
        let r = audit_edge_counts(&g, 0.5, 1e-6, 0, 0).unwrap();
        // size-1 sets are always fine; larger empty sets fall below the mean
        assert!(r.violations.iter().all(|w| w.vertices.len() > 1));
        for w in &r.violations {
            assert!(recheck_witness(&g, &cls_with(&g, &[], &[]), &r, w));
        }
    }

    #[test]
    fn edge_count_parameters_checked() {
        let g = Graph::cycle(5);
        assert!(audit_edge_counts(&g, 0.5, 0.0, 1, 1).is_err());
        assert!(audit_edge_counts(&g, 0.0, 1.0, 1, 1).is_err());
    }

    #[test]
    fn connected_set_enumeration_counts() {
        // P4 has 4 + 3 + 2 + 1 connected subsets of sizes 1..4.
        let mut count = 0;
        for_each_connected_set(&Graph::path(4), 4, &mut |_| count += 1);
        assert_eq!(count, 10);
        // K4: every subset is connected, 2^4 - 1 of them.
        let mut count = 0;
        for_each_connected_set(&Graph::complete(4), 4, &mut |_| count += 1);
        assert_eq!(count, 15);
    }

    #[test]
    fn edge_audit_seed_deterministic() {
        let g = crate::process::sample_gnp(200, 0.05, 9).unwrap();
        let a = audit_edge_counts(&g, 0.05, 0.5, 300, 17).unwrap();
        let b = audit_edge_counts(&g, 0.05, 0.5, 300, 17).unwrap();
        assert_eq!(a, b);
    }
}
