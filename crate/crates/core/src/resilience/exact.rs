use rayon::prelude::*;

use super::local_search::{local_search_threshold, LocalSearch};
use super::{require_connected, Alpha, BudgetRule, Cut, ResilienceReport, ThresholdMethod};
use crate::classify::VertexClassification;
use crate::error::{invalid, Error, Result};
use crate::graph::{is_k_connected, Graph, Vertex};

/// Largest graphs the exhaustive searches accept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    /// Cap on `n` when enumerating the `2^(n-1) - 1` bipartitions.
    pub bipartitions: usize,
    /// Cap on `n` when also enumerating separators.
    pub separators: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        Self {
            bipartitions: 24,
            separators: 16,
        }
    }
}

/// Bitmask encoding never goes past this many vertices, whatever the limits say.
const MASK_BITS: usize = 62;

fn check_size(n: usize, cap: usize) -> Result<()> {
    if n > cap || n > MASK_BITS {
        return Err(Error::TooLarge {
            n,
            cap: cap.min(MASK_BITS),
        });
    }
    Ok(())
}

fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbours(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

fn members(mask: u64) -> Vec<Vertex> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Spreads the low bits of `code` over the set bits of `positions`.
fn scatter(mut code: u64, positions: &[Vertex]) -> u64 {
    let mut out = 0u64;
    for &v in positions {
        if code == 0 {
            break;
        }
        out |= (code & 1) << v;
        code >>= 1;
    }
    out
}

/// Whether splitting `rest` into `b` and `rest \ b` keeps every crossing
/// degree within `caps`, with separator vertices left untouched.
#[inline]
fn split_allowed(adj: &[u64], caps: &[i64], rest: u64, b: u64) -> bool {
    let a = rest & !b;
    let mut todo = rest;
    while todo != 0 {
        let v = todo.trailing_zeros() as usize;
        todo &= todo - 1;
        let other = if b >> v & 1 == 1 { a } else { b };
        if (adj[v] & other).count_ones() as i64 > caps[v] {
            return false;
        }
    }
    true
}

/// A bipartition `(A, B)` whose crossing edges the rule admits, so that
/// deleting them disconnects `g`; `None` proves `g` resilient under `rule`.
///
/// Bipartitions are coded by the members of `B` among vertices `0..n-1`
/// (vertex `n - 1` is always in `A`). The most balanced admissible split
/// wins, and among equally balanced ones the smallest code.
pub fn find_disconnecting_attack(
    g: &Graph,
    rule: &BudgetRule,
    cls: Option<&VertexClassification>,
) -> Result<Option<Cut>> {
    find_disconnecting_attack_with(g, rule, cls, ExactLimits::default())
}

pub fn find_disconnecting_attack_with(
    g: &Graph,
    rule: &BudgetRule,
    cls: Option<&VertexClassification>,
    limits: ExactLimits,
) -> Result<Option<Cut>> {
    let n = g.n();
    let caps = rule.capacities(g, cls)?;
    if n < 2 {
        return Ok(None);
    }
    require_connected(g)?;
    check_size(n, limits.bipartitions)?;
    let adj = masks(g);
    let full = (1u64 << n) - 1;
    let found = balanced_sizes(n).into_iter().find_map(|size| {
        (1u64..1 << (n - 1))
            .into_par_iter()
            .filter(|b| b.count_ones() as usize == size)
            .find_first(|&b| split_allowed(&adj, &caps, full, b))
    });
    Ok(found.map(|b| Cut::bipartition(members(full & !b), members(b))))
}

/// Like [`find_disconnecting_attack`] for k-connectivity: a separator `S`
/// with `|S| <= k - 1` and a split of `V \ S` whose crossing edges the rule
/// admits. Separators are tried by size, then lexicographically.
pub fn find_k_conn_attack(
    g: &Graph,
    rule: &BudgetRule,
    cls: Option<&VertexClassification>,
    k: usize,
) -> Result<Option<Cut>> {
    find_k_conn_attack_with(g, rule, cls, k, ExactLimits::default())
}

pub fn find_k_conn_attack_with(
    g: &Graph,
    rule: &BudgetRule,
    cls: Option<&VertexClassification>,
    k: usize,
    limits: ExactLimits,
) -> Result<Option<Cut>> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let caps = rule.capacities(g, cls)?;
    if !is_k_connected(g, k) {
        return Err(Error::NotKConnected(k));
    }
    let n = g.n();
    check_size(n, limits.separators)?;
    let adj = masks(g);
    let full = (1u64 << n) - 1;

    let mut separators = Vec::new();
    for size in 0..k {
        combinations(n, size, &mut |s| separators.push(s));
    }
    let found = separators.par_iter().find_map_first(|&s| {
        if members(s).iter().any(|&v| caps[v] < 0) {
            return None;
        }
        let rest = full & !s;
        let order = members(rest);
        let (&top, free) = order.split_last()?;
        debug_assert!(rest >> top & 1 == 1);
        (1u64..1 << free.len())
            .map(|code| scatter(code, free))
            .find(|&b| split_allowed(&adj, &caps, rest, b))
            .map(|b| Cut {
                separator: members(s),
                side_a: members(rest & !b),
                side_b: members(b),
            })
    });
    Ok(found)
}

/// `|B|` from `1..n`, closest to `n / 2` first, smaller first on ties.
fn balanced_sizes(n: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = (1..n).collect();
    sizes.sort_by_key(|&s| ((2 * s).abs_diff(n), s));
    sizes
}

fn combinations(n: usize, size: usize, f: &mut impl FnMut(u64)) {
    fn rec(start: usize, n: usize, left: usize, acc: u64, f: &mut impl FnMut(u64)) {
        if left == 0 {
            f(acc);
            return;
        }
        for v in start..=n - left {
            rec(v + 1, n, left - 1, acc | 1 << v, f);
        }
    }
    if size <= n {
        rec(0, n, size, 0, f);
    }
}

/// `α*` and a bipartition attaining it (exact), or an upper bound found by
/// local search.
pub fn connectivity_resilience_threshold(g: &Graph, mode: Option<LocalSearch>) -> Result<ResilienceReport> {
    connectivity_resilience_threshold_with(g, mode, ExactLimits::default())
}

pub fn connectivity_resilience_threshold_with(
    g: &Graph,
    mode: Option<LocalSearch>,
    limits: ExactLimits,
) -> Result<ResilienceReport> {
    let n = g.n();
    if n < 2 {
        return Err(invalid("a threshold needs at least two vertices"));
    }
    require_connected(g)?;
    if let Some(search) = mode {
        let (threshold, witness) = local_search_threshold(g, &search)?;
        return Ok(ResilienceReport {
            threshold,
            witness,
            method: ThresholdMethod::LocalSearchUpperBound,
        });
    }
    check_size(n, limits.bipartitions)?;
    let adj = masks(g);
    let deg: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    let full = (1u64 << n) - 1;
    let (threshold, b) = (1u64..1 << (n - 1))
        .into_par_iter()
        .map(|b| {
            let a = full & !b;
            // max of cross/deg, compared by cross-multiplication
            let (mut num, mut den) = (0u64, 1u64);
            for v in 0..n {
                let other = if b >> v & 1 == 1 { a } else { b };
                let c = (adj[v] & other).count_ones() as u64;
                if c * den > num * deg[v] {
                    num = c;
                    den = deg[v];
                }
            }
            (Alpha::new(num, den), b)
        })
        .min()
        .expect("n >= 2 gives at least one bipartition");
    Ok(ResilienceReport {
        threshold,
        witness: Cut::bipartition(members(full & !b), members(b)),
        method: ThresholdMethod::Exact,
    })
}
