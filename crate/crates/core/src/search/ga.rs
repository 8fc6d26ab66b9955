//! Generational GA with elitism and fitness-dependent crossover and
//! mutation rates.

use rand::Rng;

use super::operators::{order_crossover, random_cut, swap_mutation};
use super::{fittest, stats_for, Chromosome, Context, GenerationStats, SearchConfig};

/// Rates for a parent: "bad" (fitness strictly above the population
/// average) parents get the high rates.
pub fn rates(fitness: f64, average: f64, config: &SearchConfig) -> (f64, f64) {
    if fitness > average {
        (config.pc_bad, config.pm_bad)
    } else {
        (config.pc_good, config.pm_good)
    }
}

pub(crate) fn run(ctx: &mut Context, config: &SearchConfig) -> (Chromosome, Vec<GenerationStats>) {
    let n = ctx.classes();
    let mut pop = ctx.random_population(config.population);
    let mut stats = Vec::with_capacity(config.generations);

    for generation in 1..=config.generations {
        let row = stats_for(generation, &pop);
        let average = row.average;
        stats.push(row);
        if generation == config.generations {
            break;
        }

        let mut next = vec![pop[fittest(&pop)].genes.clone()];
        while next.len() < config.population {
            let p1 = ctx.tournament(&pop, config.tournament_size).clone();
            let p2 = ctx.tournament(&pop, config.tournament_size).clone();
            for (a, b) in [(&p1, &p2), (&p2, &p1)] {
                if next.len() == config.population {
                    break;
                }
                let (pc, pm) = rates(a.fitness, average, config);
                let mut child = if n > 1 && ctx.rng.random_bool(pc / 100.0) {
                    let cut = random_cut(n, &mut ctx.rng);
                    order_crossover(&a.genes, &b.genes, cut)
                } else {
                    a.genes.clone()
                };
                if ctx.rng.random_bool(pm / 100.0) {
                    swap_mutation(&mut child, &mut ctx.rng);
                }
                next.push(child);
            }
        }
        // the elite keeps its cached fitness; only children are scored
        let elite = pop.swap_remove(fittest(&pop));
        let mut scored = vec![elite];
        scored.extend(ctx.evaluate(next.split_off(1)));
        pop = scored;
    }
    (ctx.best(), stats)
}
