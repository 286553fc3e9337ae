use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::resilience::{parse_alpha, Alpha};

/// Environment variable overriding the master seed of a loaded config.
pub const SEED_ENV: &str = "RESILIENCE_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    Hitting,
    Sweep,
    Kcore,
    Audit,
}

impl Study {
    /// Component of every derived trial seed.
    pub fn id(self) -> u64 {
        match self {
            Study::Hitting => 1,
            Study::Sweep => 2,
            Study::Kcore => 3,
            Study::Audit => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Study::Hitting => "hitting",
            Study::Sweep => "sweep",
            Study::Kcore => "kcore",
            Study::Audit => "audit",
        }
    }
}

impl std::str::FromStr for Study {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hitting" => Ok(Study::Hitting),
            "sweep" => Ok(Study::Sweep),
            "kcore" => Ok(Study::Kcore),
            "audit" => Ok(Study::Audit),
            _ => Err(invalid(format!("unknown study {s:?}"))),
        }
    }
}

/// One study run. Stored as TOML; see the README for the keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub study: Study,
    pub n: Vec<usize>,
    /// Explicit edge counts; takes precedence over `m_scale`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<usize>,
    /// Edge counts as multiples of `n ln n / 6`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m_scale: Vec<f64>,
    #[serde(default = "defaults::k")]
    pub k: usize,
    #[serde(default = "defaults::epsilon")]
    pub epsilon: f64,
    #[serde(default = "defaults::delta")]
    pub delta: f64,
    /// Limit on atypical neighbours per vertex.
    #[serde(default = "defaults::l")]
    pub l: usize,
    /// Edge-density constant.
    #[serde(default = "defaults::c")]
    pub c: f64,
    #[serde(default = "defaults::trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Budget fraction for exact k-connectivity attacks, `"p/q"`; defaults
    /// to `1/2 - epsilon`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    /// Largest graph handed to the exact searches.
    #[serde(default = "defaults::exact_max_n")]
    pub exact_max_n: usize,
    /// Largest graph handed to local search; above it only the greedy
    /// attack runs.
    #[serde(default = "defaults::local_search_max_n")]
    pub local_search_max_n: usize,
    #[serde(default = "defaults::restarts")]
    pub restarts: usize,
    /// Audit study: `p0 = p0_scale * ln n / (3n)`.
    #[serde(default = "defaults::p0_scale")]
    pub p0_scale: f64,
    /// Audit study: `p' = p_prime_ratio * p0`.
    #[serde(default = "defaults::p_prime_ratio")]
    pub p_prime_ratio: f64,
    /// Random subsets per edge-density audit.
    #[serde(default = "defaults::subset_trials")]
    pub subset_trials: usize,
    /// Worker threads; absent or 0 uses every core. Never affects results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_csv: Option<PathBuf>,
}

mod defaults {
    pub fn k() -> usize {
        2
    }
    pub fn epsilon() -> f64 {
        0.1
    }
    pub fn delta() -> f64 {
        0.05
    }
    pub fn l() -> usize {
        30
    }
    pub fn c() -> f64 {
        1.0
    }
    pub fn trials() -> usize {
        100
    }
    pub fn exact_max_n() -> usize {
        20
    }
    pub fn local_search_max_n() -> usize {
        1024
    }
    pub fn restarts() -> usize {
        32
    }
    pub fn p0_scale() -> f64 {
        1.2
    }
    pub fn p_prime_ratio() -> f64 {
        0.5
    }
    pub fn subset_trials() -> usize {
        200
    }
}

impl ExperimentConfig {
    /// A config with every optional key at its default.
    pub fn new(study: Study, n: Vec<usize>) -> Self {
        Self {
            study,
            n,
            m: Vec::new(),
            m_scale: Vec::new(),
            k: defaults::k(),
            epsilon: defaults::epsilon(),
            delta: defaults::delta(),
            l: defaults::l(),
            c: defaults::c(),
            trials: defaults::trials(),
            seed: 0,
            alpha: None,
            exact_max_n: defaults::exact_max_n(),
            local_search_max_n: defaults::local_search_max_n(),
            restarts: defaults::restarts(),
            p0_scale: defaults::p0_scale(),
            p_prime_ratio: defaults::p_prime_ratio(),
            subset_trials: defaults::subset_trials(),
            threads: None,
            output_json: None,
            output_csv: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| invalid(format!("config: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Applies `RESILIENCE_SEED` when set. Accepts decimal or `0x` hex.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(raw) = std::env::var(SEED_ENV) {
            self.seed = parse_seed(&raw)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.n.is_empty() {
            return Err(invalid("at least one n is required"));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < 2) {
            return Err(invalid(format!("n = {n} is below 2")));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid(format!("epsilon = {} outside (0, 1)", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(format!("delta = {} outside (0, 1)", self.delta)));
        }
        if !(self.c > 0.0) {
            return Err(invalid("c must be positive"));
        }
        if self.k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if self.study == Study::Kcore && self.k < 2 {
            return Err(invalid("the k-core study needs k >= 2"));
        }
        if matches!(self.study, Study::Sweep | Study::Kcore) && self.m.is_empty() && self.m_scale.is_empty() {
            return Err(invalid("this study needs m or m_scale values"));
        }
        if self.m_scale.iter().any(|&s| !(s > 0.0)) {
            return Err(invalid("m_scale values must be positive"));
        }
        if !(self.p0_scale > 0.0) || !(self.p_prime_ratio >= 0.0) {
            return Err(invalid("p0_scale must be positive and p_prime_ratio nonnegative"));
        }
        if self.restarts == 0 {
            return Err(invalid("restarts must be at least 1"));
        }
        // only the k-core study derives alpha from epsilon
        match (&self.alpha, self.study) {
            (_, Study::Kcore) => drop(self.alpha()?),
            (Some(text), _) => drop(parse_alpha(text)?),
            (None, _) => {}
        }
        Ok(())
    }

    /// Exact budget fraction for the k-connectivity attacks.
    pub fn alpha(&self) -> Result<Alpha> {
        match &self.alpha {
            Some(text) => parse_alpha(text),
            None => {
                let x = 0.5 - self.epsilon;
                if x < 0.0 {
                    return Err(invalid("1/2 - epsilon is negative; set alpha explicitly"));
                }
                const SCALE: u64 = 1_000_000;
                Ok(Alpha::new((x * SCALE as f64).round() as u64, SCALE))
            }
        }
    }

    /// The `m` grid for a given `n`, ascending and capped at `C(n, 2)`.
    pub fn m_values(&self, n: usize) -> Vec<usize> {
        let total = n * (n - 1) / 2;
        let mut ms: Vec<usize> = if !self.m.is_empty() {
            self.m.clone()
        } else {
            let unit = n as f64 * (n as f64).ln() / 6.0;
            self.m_scale.iter().map(|s| (s * unit).ceil() as usize).collect()
        };
        for m in &mut ms {
            *m = (*m).min(total);
        }
        ms.sort_unstable();
        ms.dedup();
        ms
    }

    /// The config as echoed into study output: settings that cannot change
    /// the results (threads, output paths) are dropped.
    pub fn echo(&self) -> Self {
        Self {
            threads: None,
            output_json: None,
            output_csv: None,
            ..self.clone()
        }
    }
}

pub fn parse_seed(raw: &str) -> Result<u64> {
    let raw = raw.trim();
    let parsed = match raw.strip_prefix("0x").or_else(|| raw.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => raw.parse(),
    };
    parsed.map_err(|_| invalid(format!("bad seed {raw:?}")))
}
