use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::record::TrialRecord;
use crate::error::Result;
use crate::resilience::parse_alpha;

/// One aggregate: a metric over the trials sharing `(study, n, m, p)`.
/// Boolean metrics also carry the success count and a 95% Wilson interval;
/// `mean` is then the success fraction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub study: String,
    pub n: usize,
    pub m: Option<usize>,
    pub p: Option<f64>,
    pub metric: String,
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub successes: Option<usize>,
    pub wilson_low: Option<f64>,
    pub wilson_high: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    pub fn get(&self, n: usize, m: Option<usize>, metric: &str) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.n == n && r.m == m && r.metric == metric)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

enum Value {
    Flag(bool),
    Num(f64),
}

type Extractor = fn(&TrialRecord) -> Option<Value>;

fn ratio_value(r: &TrialRecord, method: &str) -> Option<Value> {
    if r.alpha_method.as_deref() != Some(method) {
        return None;
    }
    let a = parse_alpha(r.alpha_star.as_deref()?).ok()?;
    Some(Value::Num(*a.numer() as f64 / *a.denom() as f64))
}

/// Metric name and how to read it off a record, in output order.
const METRICS: &[(&str, Extractor)] = &[
    ("tau1_eq_tauconn", |r| Some(Value::Flag(r.tau_1? == r.tau_conn?))),
    ("tau1_over_half_n_ln_n", |r| {
        let n = r.n as f64;
        Some(Value::Num(r.tau_1? as f64 / (0.5 * n * n.ln())))
    }),
    ("tauk_eq_taukconn", |r| Some(Value::Flag(r.tau_k? == r.tau_k_conn?))),
    ("giant_fraction", |r| {
        Some(Value::Num(r.giant_size? as f64 / r.n as f64))
    }),
    ("kcore_fraction", |r| {
        Some(Value::Num(r.kcore_size? as f64 / r.n as f64))
    }),
    ("kcore_k_connected", |r| r.kcore_k_connected.map(Value::Flag)),
    ("alpha_star_exact", |r| ratio_value(r, "exact")),
    ("alpha_star_upper", |r| ratio_value(r, "local-search-upper-bound")),
    ("cherry_present", |r| r.cherry.map(Value::Flag)),
    ("greedy_satisfied", |r| r.greedy_satisfied.map(Value::Flag)),
    ("attack_absent", |r| r.attack_found.map(|f| Value::Flag(!f))),
    ("tiny_ball_holds", |r| r.tiny_ball_holds.map(Value::Flag)),
    ("atyp_neighbours_holds", |r| r.atyp_neighbours_holds.map(Value::Flag)),
    ("tiny_triangle_holds", |r| r.tiny_triangle_holds.map(Value::Flag)),
    ("atyp_size_holds", |r| r.atyp_size_holds.map(Value::Flag)),
    ("edge_density_holds", |r| r.edge_density_holds.map(Value::Flag)),
    ("max_tiny_ball", |r| Some(Value::Num(r.max_tiny_ball? as f64))),
    ("max_atyp_neighbours", |r| {
        Some(Value::Num(r.max_atyp_neighbours? as f64))
    }),
    ("max_density_dev", |r| r.max_density_dev.map(Value::Num)),
    ("max_d_neighbours", |r| Some(Value::Num(r.max_d_neighbours? as f64))),
];

/// Name of the per-`n` row giving the smallest `m` whose cherry rate is
/// below one half.
pub const CHERRY_CROSSING: &str = "cherry_crossing_m";

/// Aggregates records into rows, grouped by `(study, n, m, p)` in that
/// order. Depends only on the multiset of records.
pub fn summarize(records: &[TrialRecord]) -> SummaryTable {
    type Key = (String, usize, Option<usize>, Option<u64>);
    let mut groups: BTreeMap<Key, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.study.clone(), r.n, r.m, r.p.map(f64::to_bits));
        groups.entry(key).or_default().push(r);
    }
    let mut rows = Vec::new();
    for ((study, n, m, p), members) in &groups {
        for &(name, extract) in METRICS {
            let values: Vec<Value> = members.iter().filter_map(|r| extract(r)).collect();
            if values.is_empty() {
                continue;
            }
            rows.push(aggregate(study, *n, *m, p.map(f64::from_bits), name, &values));
        }
    }
    rows.extend(cherry_crossings(&rows));
    SummaryTable { rows }
}

fn cherry_crossings(rows: &[SummaryRow]) -> Vec<SummaryRow> {
    let mut by_n: BTreeMap<(String, usize), Vec<&SummaryRow>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.metric == "cherry_present" && r.m.is_some()) {
        by_n.entry((r.study.clone(), r.n)).or_default().push(r);
    }
    by_n.into_iter()
        .filter_map(|((study, n), mut rs)| {
            rs.sort_by_key(|r| r.m);
            let hit = rs.iter().find(|r| r.mean < 0.5)?;
            let m = hit.m? as f64;
            Some(aggregate(&study, n, None, None, CHERRY_CROSSING, &[Value::Num(m)]))
        })
        .collect()
}

fn aggregate(study: &str, n: usize, m: Option<usize>, p: Option<f64>, metric: &str, values: &[Value]) -> SummaryRow {
    let is_flag = values.iter().all(|v| matches!(v, Value::Flag(_)));
    let mut xs: Vec<f64> = values
        .iter()
        .map(|v| match *v {
            Value::Flag(b) => f64::from(u8::from(b)),
            Value::Num(x) => x,
        })
        .collect();
    xs.sort_by(f64::total_cmp);
    let count = xs.len();
    let mean = xs.iter().sum::<f64>() / count as f64;
    let (successes, wilson_low, wilson_high) = if is_flag {
        let s = xs.iter().filter(|&&x| x > 0.5).count();
        let (lo, hi) = wilson_interval(s, count);
        (Some(s), Some(lo), Some(hi))
    } else {
        (None, None, None)
    };
    SummaryRow {
        study: study.to_string(),
        n,
        m,
        p,
        metric: metric.to_string(),
        count,
        mean,
        min: xs[0],
        q1: quantile(&xs, 0.25),
        median: quantile(&xs, 0.5),
        q3: quantile(&xs, 0.75),
        max: xs[count - 1],
        successes,
        wilson_low,
        wilson_high,
    }
}

/// Linear interpolation between order statistics; `sorted` is nonempty.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}
