//! Discrete cuckoo search: every nest tries a random multi-swap move and
//! keeps it if better; the worst nests are then abandoned for new ones.

use rand::Rng;

use super::operators::swap_mutation;
use super::{fittest, stats_for, Chromosome, Context, GenerationStats, SearchConfig};

/// Number of swaps: 1 plus a geometric count, so the mean is `strength`.
pub fn step_length<R: Rng + ?Sized>(strength: f64, rng: &mut R) -> usize {
    const MAX_STEP: usize = 1_000;
    let stay = 1.0 - 1.0 / strength.max(1.0);
    let mut s = 1;
    while s < MAX_STEP && rng.random_bool(stay) {
        s += 1;
    }
    s
}

pub(crate) fn run(ctx: &mut Context, config: &SearchConfig) -> (Chromosome, Vec<GenerationStats>) {
    let mut nests = ctx.random_population(config.population);
    let mut stats = Vec::with_capacity(config.generations);

    for generation in 1..=config.generations {
        stats.push(stats_for(generation, &nests));
        if generation == config.generations {
            break;
        }

        let moves: Vec<Vec<usize>> = nests
            .iter()
            .map(|nest| {
                let mut genes = nest.genes.clone();
                for _ in 0..step_length(config.perturbation_strength, &mut ctx.rng) {
                    swap_mutation(&mut genes, &mut ctx.rng);
                }
                genes
            })
            .collect();
        for (nest, cand) in nests.iter_mut().zip(ctx.evaluate(moves)) {
            if cand.fitness < nest.fitness {
                *nest = cand;
            }
        }

        // abandon the worst nests, never the best one
        let keep = fittest(&nests);
        let mut worst: Vec<usize> = (0..nests.len()).filter(|&i| i != keep).collect();
        worst.sort_by(|&a, &b| nests[b].fitness.total_cmp(&nests[a].fitness).then(b.cmp(&a)));
        worst.truncate(config.discard_count);
        let fresh = (0..worst.len()).map(|_| ctx.random_genes()).collect();
        for (i, c) in worst.into_iter().zip(ctx.evaluate(fresh)) {
            nests[i] = c;
        }
    }
    (ctx.best(), stats)
}
