//! Class integration test ordering: build a class dependency graph, weigh
//! each dependency by the cost of stubbing it, break the cycles, and search
//! for cheap integration orders.

pub mod analysis;
pub mod breaking;
pub mod io;
pub mod model;
pub mod ordering;
pub mod pipeline;
pub mod repro;
pub mod search;

use thiserror::Error;

use analysis::AnalysisError;
use breaking::BreakError;
use io::ParseError;
use model::ModelError;
use ordering::OrderError;
use search::SearchError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Break(#[from] BreakError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    /// 1 for bad input, 2 for a cycle nothing can break, 3 for a broken
    /// internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Break(BreakError::InfeasibleCycle { .. }) => 2,
            Error::Break(_) | Error::Order(_) => 3,
            _ => 1,
        }
    }
}
