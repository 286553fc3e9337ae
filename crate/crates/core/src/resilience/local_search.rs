use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{vertex_ratio, Alpha, Cut};
use crate::error::{invalid, Result};
use crate::graph::{Graph, Vertex};
use crate::rng::child_rng;

/// Seeded hill climbing over single-vertex moves.
///
/// Restart `r` starts from a random equipartition (`r % 3 == 0`), a BFS ball
/// of half the vertices (`r % 3 == 1`) or a BFS ball of random size up to
/// half (`r % 3 == 2`). A move is taken when it lowers the ratio profile,
/// the `(ratio, count)` levels read from the top, lexicographically; only
/// vertices at the max and their neighbours are tried. Each local optimum is
/// kicked a few times by flipping random vertices at the max.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSearch {
    pub restarts: usize,
    pub seed: u64,
}

pub(crate) fn local_search_threshold(g: &Graph, params: &LocalSearch) -> Result<(Alpha, Cut)> {
    if params.restarts == 0 {
        return Err(invalid("local search needs at least one restart"));
    }
    let (ratio, _, side) = (0..params.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = child_rng(params.seed, &[r as u64]);
            let (ratio, side) = search(g, initial_side(g, &mut rng, r), &mut rng);
            (ratio, r, side)
        })
        .min_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)))
        .expect("at least one restart");
    let a: Vec<Vertex> = (0..g.n()).filter(|&v| !side[v]).collect();
    let b: Vec<Vertex> = (0..g.n()).filter(|&v| side[v]).collect();
    Ok((ratio, Cut::bipartition(a, b)))
}

/// `true` marks side `B`. Both sides are nonempty for `n >= 2`.
fn initial_side(g: &Graph, rng: &mut impl Rng, restart: usize) -> Vec<bool> {
    let n = g.n();
    let half = match restart % 3 {
        2 => rng.gen_range(1..=(n / 2).max(1)),
        _ => n / 2,
    };
    let mut side = vec![false; n];
    if restart % 3 == 0 {
        let mut order: Vec<Vertex> = (0..n).collect();
        order.shuffle(rng);
        for &v in &order[..half] {
            side[v] = true;
        }
    } else {
        let centre = rng.gen_range(0..n);
        let mut queue = VecDeque::from([centre]);
        side[centre] = true;
        let mut taken = 1;
        while let Some(x) = queue.pop_front() {
            for &u in g.neighbours(x) {
                if taken == half {
                    break;
                }
                if !side[u] {
                    side[u] = true;
                    taken += 1;
                    queue.push_back(u);
                }
            }
        }
    }
    side
}

struct State<'a> {
    g: &'a Graph,
    side: Vec<bool>,
    cross: Vec<usize>,
    size_b: usize,
    levels: BTreeMap<Alpha, usize>,
}

impl<'a> State<'a> {
    fn new(g: &'a Graph, side: Vec<bool>) -> Self {
        let cross: Vec<usize> = (0..g.n())
            .map(|v| g.neighbours(v).iter().filter(|&&u| side[u] != side[v]).count())
            .collect();
        let mut levels = BTreeMap::new();
        for v in 0..g.n() {
            *levels.entry(vertex_ratio(cross[v], g.degree(v))).or_insert(0) += 1;
        }
        let size_b = side.iter().filter(|&&s| s).count();
        Self {
            g,
            side,
            cross,
            size_b,
            levels,
        }
    }

    fn max_ratio(&self) -> Alpha {
        *self.levels.keys().next_back().expect("nonempty graph")
    }

    /// Negative when `self` has the lower profile.
    fn profile_cmp(&self, other: &[(Alpha, usize)]) -> Ordering {
        for (mine, theirs) in self.levels.iter().rev().zip(other) {
            let ord = mine.0.cmp(&theirs.0).then(mine.1.cmp(&theirs.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }

    fn profile(&self) -> Vec<(Alpha, usize)> {
        self.levels.iter().rev().map(|(&r, &c)| (r, c)).collect()
    }

    fn set_cross(&mut self, v: Vertex, value: usize) {
        let deg = self.g.degree(v);
        let old = vertex_ratio(self.cross[v], deg);
        match self.levels.get_mut(&old) {
            Some(c) if *c > 1 => *c -= 1,
            _ => {
                self.levels.remove(&old);
            }
        }
        *self.levels.entry(vertex_ratio(value, deg)).or_insert(0) += 1;
        self.cross[v] = value;
    }

    fn movable(&self, v: Vertex) -> bool {
        let n = self.g.n();
        if self.side[v] {
            self.size_b > 1
        } else {
            n - self.size_b > 1
        }
    }

    fn flip(&mut self, v: Vertex) {
        let was_b = self.side[v];
        for i in 0..self.g.neighbours(v).len() {
            let u = self.g.neighbours(v)[i];
            let c = self.cross[u];
            // u was across from v iff its side differs from v's old side
            let next = if self.side[u] != was_b { c - 1 } else { c + 1 };
            self.set_cross(u, next);
        }
        self.set_cross(v, self.g.degree(v) - self.cross[v]);
        self.side[v] = !was_b;
        if was_b {
            self.size_b -= 1;
        } else {
            self.size_b += 1;
        }
    }
}

const KICKS: usize = 8;

fn search(g: &Graph, side: Vec<bool>, rng: &mut impl Rng) -> (Alpha, Vec<bool>) {
    let mut st = State::new(g, side);
    climb(&mut st);
    let mut best = (st.max_ratio(), st.side.clone());
    for _ in 0..KICKS {
        let top = st.max_ratio();
        let mut at_max: Vec<Vertex> = (0..g.n())
            .filter(|&v| vertex_ratio(st.cross[v], g.degree(v)) == top)
            .collect();
        at_max.shuffle(rng);
        let flips = rng.gen_range(1..=at_max.len().clamp(1, 3));
        for &v in at_max.iter().take(flips) {
            if st.movable(v) {
                st.flip(v);
            }
        }
        climb(&mut st);
        if st.max_ratio() < best.0 {
            best = (st.max_ratio(), st.side.clone());
        }
    }
    best
}

fn climb(st: &mut State<'_>) {
    let g = st.g;
    let cap = 20 * g.n() + 100;
    for _ in 0..cap {
        let top = st.max_ratio();
        let current = st.profile();
        let mut candidates: Vec<Vertex> = Vec::new();
        for v in 0..g.n() {
            if vertex_ratio(st.cross[v], g.degree(v)) == top {
                candidates.push(v);
                candidates.extend_from_slice(g.neighbours(v));
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        let mut best: Option<(Vec<(Alpha, usize)>, Vertex)> = None;
        for &v in &candidates {
            if !st.movable(v) {
                continue;
            }
            st.flip(v);
            let better = st.profile_cmp(&current) == Ordering::Less
                && best.as_ref().is_none_or(|(b, _)| st.profile_cmp(b) == Ordering::Less);
            if better {
                best = Some((st.profile(), v));
            }
            st.flip(v);
        }
        match best {
            Some((_, v)) => st.flip(v),
            None => break,
        }
    }
}
