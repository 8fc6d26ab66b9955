use std::fmt;
use std::str::FromStr;

use super::SearchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ga,
    MicroGa,
    Cuckoo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ga, Algorithm::MicroGa, Algorithm::Cuckoo];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Ga => "ga",
            Algorithm::MicroGa => "micro-ga",
            Algorithm::Cuckoo => "cuckoo",
        }
    }

    /// RNG stream reserved for the algorithm, so equal seeds do not give
    /// different algorithms the same random sequence.
    pub fn stream(self) -> u64 {
        match self {
            Algorithm::Ga => 1,
            Algorithm::MicroGa => 2,
            Algorithm::Cuckoo => 3,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ga" => Ok(Algorithm::Ga),
            "micro-ga" | "micro_ga" => Ok(Algorithm::MicroGa),
            "cuckoo" => Ok(Algorithm::Cuckoo),
            _ => Err(format!("unknown algorithm `{s}`")),
        }
    }
}

/// Search parameters. Probabilities are percentages.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub algorithm: Algorithm,
    pub population: usize,
    /// Number of generations reported, the initial population included.
    pub generations: usize,
    pub seed: u64,
    pub pc_bad: f64,
    pub pc_good: f64,
    pub pm_bad: f64,
    pub pm_good: f64,
    pub tournament_size: usize,
    /// Generations without improvement before a micro-GA restart.
    pub stall_limit: usize,
    pub discard_count: usize,
    /// Mean number of swaps in a cuckoo perturbation.
    pub perturbation_strength: f64,
    /// Worker threads for fitness evaluation; results do not depend on it.
    pub threads: usize,
}

impl SearchConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        SearchConfig {
            algorithm,
            population: match algorithm {
                Algorithm::MicroGa => 5,
                _ => 100,
            },
            generations: 20,
            seed: 0,
            pc_bad: 75.0,
            pc_good: 25.0,
            pm_bad: 25.0,
            pm_good: 15.0,
            tournament_size: 2,
            stall_limit: 5,
            discard_count: 20,
            perturbation_strength: 2.0,
            threads: 1,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::InvalidConfig(msg));
        if self.population < 2 {
            return bad(format!("population {} is below 2", self.population));
        }
        if self.generations == 0 {
            return bad("generations must be at least 1".into());
        }
        for (name, p) in [
            ("pc_bad", self.pc_bad),
            ("pc_good", self.pc_good),
            ("pm_bad", self.pm_bad),
            ("pm_good", self.pm_good),
        ] {
            if !(0.0..=100.0).contains(&p) {
                return bad(format!("{name} = {p} is outside 0..=100"));
            }
        }
        if self.tournament_size == 0 {
            return bad("tournament size must be at least 1".into());
        }
        if self.algorithm == Algorithm::Cuckoo && self.discard_count >= self.population {
            return bad(format!(
                "discard count {} must be below the population {}",
                self.discard_count, self.population
            ));
        }
        if !(self.perturbation_strength.is_finite() && self.perturbation_strength >= 1.0) {
            return bad(format!(
                "perturbation strength {} must be at least 1",
                self.perturbation_strength
            ));
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        Ok(())
    }
}
