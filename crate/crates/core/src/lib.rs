//! Random graph processes, edge-deletion resilience of connectivity, and
//! the Monte Carlo studies that measure both.
//!
//! * [`graph`]: immutable simple graphs with components, k-cores,
//!   k-connectivity and neighbourhood balls.
//! * [`process`]: the random graph process, `G(n, m)`, `G(n, p)` and the
//!   coupled pair `G- ⊆ G+`, plus hitting times.
//! * [`classify`]: tiny/atypical vertices and structural audits.
//! * [`resilience`]: budget rules, exact and heuristic attacks, thresholds.
//! * [`experiments`]: seeded parallel studies and their output formats.
//!
//! All randomness flows from explicit 64-bit seeds; see [`rng`].

pub mod classify;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod process;
pub mod resilience;
pub mod rng;

pub use classify::{AuditReport, VertexClassification, Witness};
pub use error::{Error, Result};
pub use graph::{Edge, Graph, Subgraph, Vertex, VertexSet};
pub use process::{CoupledSample, ProcessTrace};
pub use resilience::{Alpha, AttackOutcome, BudgetRule, Cut, ResilienceReport};
