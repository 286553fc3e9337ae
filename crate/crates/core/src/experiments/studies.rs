use rayon::prelude::*;

use super::config::{ExperimentConfig, Study};
use super::record::TrialRecord;
use super::summary::{summarize, SummaryTable};
use crate::classify::{audit_atyp_size, audit_edge_counts, audit_neighbourhoods, classify_vertices};
use crate::error::{invalid, Error, Result};
use crate::graph::{giant_component, is_k_connected, k_core, Graph, Subgraph};
use crate::process::{
    graph_at, hitting_time_k_connectivity, hitting_time_min_degree, pair_count, sample_coupled, sample_gnm,
    sample_process,
};
use crate::resilience::{
    cherry_attack, connectivity_resilience_threshold, find_k_conn_attack_with, format_ratio, greedy_partition_attack,
    heavy_crossing_vertices, BudgetRule, ExactLimits, LocalSearch, ThresholdMethod,
};
use crate::rng::derive_seed;

/// Records in canonical `(n, m, trial)` order and their summary.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyOutput {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub summary: SummaryTable,
}

/// Seed of one trial: a function of the master seed and the trial's
/// coordinates only, so results do not depend on scheduling.
pub fn trial_seed(cfg: &ExperimentConfig, n: usize, m: Option<usize>, trial: usize) -> u64 {
    derive_seed(
        cfg.seed,
        &[cfg.study.id(), n as u64, m.map_or(0, |m| m as u64 + 1), trial as u64],
    )
}

/// Every `(n, m, trial)` the config asks for, in output order.
pub fn trial_grid(cfg: &ExperimentConfig) -> Vec<(usize, Option<usize>, usize)> {
    let mut ns = cfg.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut grid = Vec::new();
    for n in ns {
        let ms: Vec<Option<usize>> = match cfg.study {
            Study::Sweep | Study::Kcore => cfg.m_values(n).into_iter().map(Some).collect(),
            Study::Hitting | Study::Audit => vec![None],
        };
        for m in ms {
            grid.extend((0..cfg.trials).map(|t| (n, m, t)));
        }
    }
    grid
}

pub fn run_study(cfg: &ExperimentConfig) -> Result<StudyOutput> {
    cfg.validate()?;
    check_study_preconditions(cfg)?;
    let grid = trial_grid(cfg);
    let work = || -> Result<Vec<TrialRecord>> { grid.par_iter().map(|&(n, m, t)| run_trial(cfg, n, m, t)).collect() };
    let records = match cfg.threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))?
            .install(work)?,
        _ => work()?,
    };
    let summary = summarize(&records);
    Ok(StudyOutput {
        config: cfg.echo(),
        records,
        summary,
    })
}

fn check_study_preconditions(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.study == Study::Audit && cfg.p_prime_ratio > cfg.epsilon * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "regime violation: p' = {} p0 exceeds epsilon p0 = {} p0",
            cfg.p_prime_ratio, cfg.epsilon
        )));
    }
    Ok(())
}

fn with_study(cfg: &ExperimentConfig, study: Study) -> Result<SummaryTable> {
    if cfg.study != study {
        return Err(invalid(format!(
            "config is for the {} study, not {}",
            cfg.study.name(),
            study.name()
        )));
    }
    Ok(run_study(cfg)?.summary)
}

pub fn run_hitting_time_study(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    with_study(cfg, Study::Hitting)
}

pub fn run_resilience_sweep(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    with_study(cfg, Study::Sweep)
}

pub fn run_kcore_study(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    with_study(cfg, Study::Kcore)
}

pub fn run_property_audit_study(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    with_study(cfg, Study::Audit)
}

/// One trial, reproducible from the config and its coordinates alone.
pub fn run_trial(cfg: &ExperimentConfig, n: usize, m: Option<usize>, trial: usize) -> Result<TrialRecord> {
    let seed = trial_seed(cfg, n, m, trial);
    let mut rec = TrialRecord {
        study: cfg.study.name().to_string(),
        n,
        m,
        trial,
        seed,
        ..Default::default()
    };
    match cfg.study {
        Study::Hitting => hitting_trial(cfg, &mut rec)?,
        Study::Sweep => sweep_trial(cfg, &mut rec)?,
        Study::Kcore => kcore_trial(cfg, &mut rec)?,
        Study::Audit => audit_trial(cfg, &mut rec)?,
    }
    Ok(rec)
}

fn hitting_trial(cfg: &ExperimentConfig, rec: &mut TrialRecord) -> Result<()> {
    let n = rec.n;
    let trace = sample_process(n, rec.seed)?;
    let tau_1 = hitting_time_min_degree(&trace, 1)?;
    rec.tau_1 = Some(tau_1);
    rec.tau_conn = Some(hitting_time_k_connectivity(&trace, 1)?);
    let g = graph_at(&trace, tau_1)?;
    attack_giant(cfg, rec, &g, tau_1)
}

fn sweep_trial(cfg: &ExperimentConfig, rec: &mut TrialRecord) -> Result<()> {
    let m = rec.m.expect("sweep trials have m");
    let g = sample_gnm(rec.n, m, rec.seed)?;
    attack_giant(cfg, rec, &g, m)
}

/// Giant size, cherry, threshold and greedy attack on the giant of `g`.
fn attack_giant(cfg: &ExperimentConfig, rec: &mut TrialRecord, g: &Graph, m: usize) -> Result<()> {
    let giant = match giant_component(g) {
        Ok(giant) => giant,
        Err(Error::NoGiant) => {
            rec.giant_size = Some(usize::from(g.n() > 0));
            rec.cherry = Some(false);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let size = giant.graph.n();
    rec.giant_size = Some(size);
    rec.cherry = Some(cherry_attack(&giant.graph).is_some());

    let search = LocalSearch {
        restarts: cfg.restarts,
        seed: derive_seed(rec.seed, &[1]),
    };
    let mode = if size <= cfg.exact_max_n {
        Some(None)
    } else if size <= cfg.local_search_max_n {
        Some(Some(search))
    } else {
        None
    };
    if let Some(mode) = mode {
        let report = connectivity_resilience_threshold(&giant.graph, mode)?;
        rec.alpha_star = Some(format_ratio(&report.threshold));
        rec.alpha_method = Some(method_name(report.method).to_string());
    }

    // the greedy attack is only defined for epsilon < 1/2; left unmeasured otherwise
    if cfg.epsilon < 0.5 {
        let p1 = m as f64 / pair_count(rec.n) as f64;
        rec.greedy_satisfied = Some(greedy_on(g, &giant, p1, cfg, derive_seed(rec.seed, &[2]))?);
    }
    Ok(())
}

fn method_name(m: ThresholdMethod) -> &'static str {
    match m {
        ThresholdMethod::Exact => "exact",
        ThresholdMethod::LocalSearchUpperBound => "local-search-upper-bound",
    }
}

/// Runs the greedy attack on `giant` with classes measured in the whole
/// graph at density `p1`. A construction that aborts counts as unsatisfied.
fn greedy_on(g: &Graph, giant: &Subgraph, p1: f64, cfg: &ExperimentConfig, seed: u64) -> Result<bool> {
    if giant.graph.n() < 2 {
        return Ok(false);
    }
    let cls = classify_vertices(g, p1, cfg.delta, None)?.localize(giant)?;
    let d_threshold = (0.5 + cfg.delta) * g.n() as f64 * p1;
    match greedy_partition_attack(&giant.graph, &cls, d_threshold, cfg.epsilon, seed) {
        Ok(out) => Ok(out.outcome.satisfied),
        Err(Error::RearrangementCap { .. }) | Err(Error::InvalidParameter(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

fn kcore_trial(cfg: &ExperimentConfig, rec: &mut TrialRecord) -> Result<()> {
    let (n, k) = (rec.n, cfg.k);
    let m = rec.m.expect("k-core trials have m");
    let trace = sample_process(n, rec.seed)?;
    let g = graph_at(&trace, m)?;
    let core = k_core(&g, k);
    let size = core.graph.n();
    rec.kcore_size = Some(size);
    let connected = size > 0 && is_k_connected(&core.graph, k);
    rec.kcore_k_connected = Some(connected);
    if connected && size <= cfg.exact_max_n {
        let rule = BudgetRule::keep_degree(cfg.alpha()?, k);
        let limits = ExactLimits {
            bipartitions: cfg.exact_max_n,
            separators: cfg.exact_max_n,
        };
        rec.attack_found = Some(find_k_conn_attack_with(&core.graph, &rule, None, k, limits)?.is_some());
    }
    if n > k {
        rec.tau_k = Some(hitting_time_min_degree(&trace, k)?);
        rec.tau_k_conn = Some(hitting_time_k_connectivity(&trace, k)?);
    }
    Ok(())
}

fn audit_trial(cfg: &ExperimentConfig, rec: &mut TrialRecord) -> Result<()> {
    let n = rec.n;
    let p0 = (cfg.p0_scale * (n as f64).ln() / (3.0 * n as f64)).min(1.0);
    let p_prime = cfg.p_prime_ratio * p0;
    rec.p = Some(p0);
    let sample = sample_coupled(n, p0, p_prime, rec.seed)?;
    let cls = classify_vertices(&sample.g_minus, p0, cfg.delta, None)?;
    let reports = audit_neighbourhoods(&sample.g_plus, &cls, cfg.l)?;
    rec.tiny_ball_holds = Some(reports[0].holds);
    rec.max_tiny_ball = Some(reports[0].max_observed as usize);
    rec.atyp_neighbours_holds = Some(reports[1].holds);
    rec.max_atyp_neighbours = Some(reports[1].max_observed as usize);
    rec.tiny_triangle_holds = Some(reports[2].holds);
    rec.atyp_size_holds = Some(audit_atyp_size(&cls)?.holds);
    if sample.p1 > 0.0 {
        let density = audit_edge_counts(
            &sample.g_plus,
            sample.p1,
            cfg.c,
            cfg.subset_trials,
            derive_seed(rec.seed, &[1]),
        )?;
        rec.edge_density_holds = Some(density.holds);
        rec.max_density_dev = Some(density.max_observed);
    }
    let d_threshold = (0.5 + cfg.delta) * n as f64 * sample.p1;
    let (_, d_set) = heavy_crossing_vertices(&sample.g_plus, d_threshold, derive_seed(rec.seed, &[2]));
    rec.max_d_neighbours = (0..n).map(|v| sample.g_plus.degree_into(v, &d_set)).max();
    Ok(())
}
