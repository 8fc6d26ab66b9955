//! SCCs, elementary cycles and per-edge stub-cost metrics.

pub mod coupling;
pub mod cycles;
pub mod metrics;
pub mod scc;

use thiserror::Error;

use crate::model::ModelError;

pub use coupling::{CouplingRecord, CouplingTable, CouplingVariant};
pub use cycles::{all_cycles, enumerate_cycles, Cycle, CycleError, DEFAULT_CYCLE_CAP};
pub use metrics::{compute_metrics, Coupling, EdgeMetrics, EdgeWeight, IfMode, MetricsConfig, Rational};
pub use scc::{tarjan_scc, SccInfo};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("variant {variant} needs a coupling table (--coupling)")]
    NeedsCouplingTable { variant: CouplingVariant },
    #[error("no {variant} coupling data for edge {edge}, which lies on a cycle")]
    MissingCoupling { edge: String, variant: CouplingVariant },
}
