//! Permutation search for cheap integration orders: an adaptive GA, a
//! micro-GA with restarts, and a discrete cuckoo search.

pub mod compare;
pub mod config;
pub mod cuckoo;
pub mod fitness;
pub mod ga;
pub mod micro_ga;
pub mod operators;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{Cdg, NodeIx};
use crate::ordering::TestOrder;

pub use compare::{compare_algorithms, ComparisonRow};
pub use config::{Algorithm, SearchConfig};
pub use fitness::FitnessModel;

/// Name of the generator written into report metadata.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha, seed_from_u64, one stream per algorithm)";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("not a permutation of the classes: {0}")]
    InvalidPermutation(String),
    #[error("cannot start worker threads: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<NodeIx>,
    pub fitness: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationStats {
    /// 1-based; generation 1 is the initial population.
    pub generation: usize,
    pub average: f64,
    pub minimum: f64,
    pub best: Vec<NodeIx>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub best: Chromosome,
    pub stats: Vec<GenerationStats>,
}

impl SearchResult {
    pub fn order(&self, cdg: &Cdg) -> TestOrder {
        TestOrder::from_sequence(cdg, self.best.genes.clone())
    }
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn run_search(model: &FitnessModel, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    config.validate()?;
    let mut ctx = Context::new(model, config)?;
    let (best, stats) = match config.algorithm {
        Algorithm::Ga => ga::run(&mut ctx, config),
        Algorithm::MicroGa => micro_ga::run(&mut ctx, config),
        Algorithm::Cuckoo => cuckoo::run(&mut ctx, config),
    };
    Ok(SearchResult {
        algorithm: config.algorithm,
        seed: config.seed,
        best,
        stats,
    })
}

pub fn ga_search(model: &FitnessModel, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    run_search(model, &SearchConfig { algorithm: Algorithm::Ga, ..config.clone() })
}

pub fn micro_ga_search(model: &FitnessModel, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    run_search(model, &SearchConfig { algorithm: Algorithm::MicroGa, ..config.clone() })
}

pub fn cuckoo_search(model: &FitnessModel, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    run_search(model, &SearchConfig { algorithm: Algorithm::Cuckoo, ..config.clone() })
}

/// State shared by the three algorithms.
pub(crate) struct Context<'a> {
    pub model: &'a FitnessModel,
    pub rng: ChaCha8Rng,
    pool: Option<rayon::ThreadPool>,
    best: Option<Chromosome>,
}

impl<'a> Context<'a> {
    fn new(model: &'a FitnessModel, config: &SearchConfig) -> Result<Self, SearchError> {
        let pool = if config.threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(config.threads)
                .build()
                .map_err(|e| SearchError::ThreadPool(e.to_string()))?;
            Some(pool)
        } else {
            None
        };
        Ok(Context {
            model,
            rng: rng_for(config.seed, config.algorithm.stream()),
            pool,
            best: None,
        })
    }

    pub fn classes(&self) -> usize {
        self.model.classes()
    }

    pub fn random_genes(&mut self) -> Vec<NodeIx> {
        operators::random_permutation(self.classes(), &mut self.rng)
    }

    /// Scores a batch of gene vectors. Evaluation draws no random numbers,
    /// so the thread count cannot change results.
    pub fn evaluate(&mut self, batch: Vec<Vec<NodeIx>>) -> Vec<Chromosome> {
        debug_assert!(batch.iter().all(|g| operators::is_permutation(g, self.classes())));
        let model = self.model;
        let score = |genes: Vec<NodeIx>| Chromosome {
            fitness: model.evaluate_unchecked(&genes),
            genes,
        };
        let scored: Vec<Chromosome> = match &self.pool {
            Some(pool) => pool.install(|| batch.into_par_iter().map(score).collect()),
            None => batch.into_iter().map(score).collect(),
        };
        for c in &scored {
            if self.best.as_ref().is_none_or(|b| c.fitness < b.fitness) {
                self.best = Some(c.clone());
            }
        }
        scored
    }

    pub fn random_population(&mut self, size: usize) -> Vec<Chromosome> {
        let batch = (0..size).map(|_| self.random_genes()).collect();
        self.evaluate(batch)
    }

    /// Best chromosome seen so far.
    pub fn best(&self) -> Chromosome {
        self.best.clone().expect("at least one evaluation")
    }

    /// Winner of a tournament of `size` draws with replacement; the first
    /// drawn wins ties.
    pub fn tournament<'p>(&mut self, pop: &'p [Chromosome], size: usize) -> &'p Chromosome {
        let mut winner = &pop[self.rng.random_range(0..pop.len())];
        for _ in 1..size {
            let c = &pop[self.rng.random_range(0..pop.len())];
            if c.fitness < winner.fitness {
                winner = c;
            }
        }
        winner
    }
}

/// Index of the fittest chromosome; the first one wins ties.
pub(crate) fn fittest(pop: &[Chromosome]) -> usize {
    let mut best = 0;
    for (i, c) in pop.iter().enumerate() {
        if c.fitness < pop[best].fitness {
            best = i;
        }
    }
    best
}

pub(crate) fn stats_for(generation: usize, pop: &[Chromosome]) -> GenerationStats {
    let average = pop.iter().map(|c| c.fitness).sum::<f64>() / pop.len() as f64;
    let best = &pop[fittest(pop)];
    GenerationStats {
        generation,
        average,
        minimum: best.fitness,
        best: best.genes.clone(),
    }
}
