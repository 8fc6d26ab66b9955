//! Side-by-side runs of several algorithms over shared inputs.

use crate::model::Cdg;

use super::{run_search, FitnessModel, SearchConfig, SearchError};

/// One generation of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub algorithm: String,
    pub seed: u64,
    pub generation: usize,
    pub avg_fitness: f64,
    pub min_fitness: f64,
    /// Class ids of the generation's best order, space separated.
    pub best_order: String,
}

/// Runs every configuration once per seed; rows follow config, then seed,
/// then generation order.
pub fn compare_algorithms(
    cdg: &Cdg,
    model: &FitnessModel,
    configs: &[SearchConfig],
    seeds: &[u64],
) -> Result<Vec<ComparisonRow>, SearchError> {
    if seeds.is_empty() {
        return Err(SearchError::InvalidConfig("at least one seed is required".into()));
    }
    let mut rows = Vec::new();
    for config in configs {
        for &seed in seeds {
            let cfg = SearchConfig { seed, ..config.clone() };
            let result = run_search(model, &cfg)?;
            for s in &result.stats {
                let ids: Vec<&str> = s.best.iter().map(|&v| cdg.id(v)).collect();
                rows.push(ComparisonRow {
                    algorithm: cfg.algorithm.to_string(),
                    seed,
                    generation: s.generation,
                    avg_fitness: s.average,
                    min_fitness: s.minimum,
                    best_order: ids.join(" "),
                });
            }
        }
    }
    Ok(rows)
}
