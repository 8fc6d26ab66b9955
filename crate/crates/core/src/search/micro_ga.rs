//! Micro-GA: a tiny population, an elite, crossover only, and a restart of
//! the non-elite members when the population converges or stalls.

use super::operators::{order_crossover, random_cut};
use super::{fittest, stats_for, Chromosome, Context, GenerationStats, SearchConfig};

pub(crate) fn run(ctx: &mut Context, config: &SearchConfig) -> (Chromosome, Vec<GenerationStats>) {
    let n = ctx.classes();
    let mut pop = ctx.random_population(config.population);
    let mut stats = Vec::with_capacity(config.generations);
    let mut best_fitness = pop[fittest(&pop)].fitness;
    let mut stall = 0;

    for generation in 1..=config.generations {
        stats.push(stats_for(generation, &pop));
        if generation == config.generations {
            break;
        }

        let elite = pop[fittest(&pop)].clone();
        let converged = pop.iter().all(|c| c.genes == elite.genes);
        let children: Vec<Vec<usize>> = if converged || stall >= config.stall_limit {
            stall = 0;
            (1..config.population).map(|_| ctx.random_genes()).collect()
        } else {
            (1..config.population)
                .map(|_| {
                    let a = ctx.tournament(&pop, config.tournament_size).genes.clone();
                    let b = ctx.tournament(&pop, config.tournament_size).genes.clone();
                    let cut = random_cut(n, &mut ctx.rng);
                    order_crossover(&a, &b, cut)
                })
                .collect()
        };
        let mut next = vec![elite];
        next.extend(ctx.evaluate(children));
        let gen_best = next[fittest(&next)].fitness;
        if gen_best < best_fitness {
            best_fitness = gen_best;
            stall = 0;
        } else {
            stall += 1;
        }
        pop = next;
    }
    (ctx.best(), stats)
}
