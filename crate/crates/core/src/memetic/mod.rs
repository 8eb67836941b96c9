//! (μ+λ) memetic evolutionary initial bipartitioner.
//!
//! Individuals carry their own mutation rate drawn from a fixed ladder.
//! Every offspring is repaired to balance and improved by FM, and the
//! improved genes replace the originals.

mod operators;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

pub use operators::{hamming, mutate, mutation_ladder, normalize_crossover, repair};

use crate::error::{Error, Result};
use crate::evaluation::{EvalRecord, LogBuilder, Solution};
use crate::fm::{FmConfig, FmEngine};
use crate::hypergraph::partition::Partition;
use crate::hypergraph::{Hypergraph, Weight};
use crate::pool::{pool_run_keep, random_partition, PoolConfig};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct EaConfig {
    pub mu: usize,
    pub lambda: usize,
    /// Probability X of recombining two parents.
    pub crossover_prob: f64,
    /// Probability A of redrawing an offspring's mutation rate.
    pub adapt_prob: f64,
    /// Seeding multiplier s: the population is picked from `mu * s` pool
    /// evaluations, or built from `mu` random individuals when zero.
    pub seed_multiplier: usize,
    pub epsilon: f64,
    pub fm_passes: usize,
}

impl Default for EaConfig {
    fn default() -> Self {
        Self {
            mu: 100,
            lambda: 1000,
            crossover_prob: 0.8,
            adapt_prob: 0.1,
            seed_multiplier: 100,
            epsilon: 0.1,
            fm_passes: FmConfig::default().max_passes,
        }
    }
}

impl EaConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_owned()));
        if self.mu < 1 || self.lambda < 1 {
            return fail("mu and lambda must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) || !(0.0..=1.0).contains(&self.adapt_prob) {
            return fail("crossover and adaptation probabilities must lie in [0, 1]");
        }
        self.fm().validate()
    }

    pub fn fm(&self) -> FmConfig {
        FmConfig {
            epsilon: self.epsilon,
            max_passes: self.fm_passes,
        }
    }

    /// Evaluations spent before the first generation.
    pub fn seeding_evaluations(&self) -> usize {
        if self.seed_multiplier == 0 {
            self.mu
        } else {
            self.mu.saturating_mul(self.seed_multiplier)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub solution: Solution,
    pub mutation_rate: f64,
}

impl Individual {
    pub fn partition(&self) -> &Partition {
        &self.solution.partition
    }

    pub fn cut(&self) -> Weight {
        self.solution.cut
    }
}

#[derive(Clone, Debug)]
pub struct Seeding {
    /// Best first.
    pub population: Vec<Individual>,
    pub log: Vec<EvalRecord>,
}

impl Seeding {
    pub fn evaluations(&self) -> usize {
        self.log.len()
    }
}

fn evaluate_offspring<R: Rng + ?Sized>(
    hg: &Hypergraph,
    mut part: Partition,
    fm: FmConfig,
    rng: &mut R,
) -> Solution {
    repair(hg, &mut part, fm.epsilon, rng);
    let mut engine = FmEngine::new(hg, fm).expect("validated config");
    engine.refine(&mut part, rng).expect("bipartition of hg");
    Solution::evaluate(hg, part, fm.epsilon)
}

fn rank(population: &mut [Individual]) {
    population.sort_by(|a, b| a.solution.cmp_quality(&b.solution));
}

/// Builds the initial population of `cfg.mu` individuals.
pub fn seed_population<R: Rng + ?Sized>(
    hg: &Hypergraph,
    cfg: &EaConfig,
    pool: &PoolConfig,
    rng: &mut R,
) -> Result<Seeding> {
    cfg.validate()?;
    let ladder = mutation_ladder(hg.num_vertices())?;
    let mut log = LogBuilder::default();
    let mut population: Vec<Individual> = if cfg.seed_multiplier == 0 {
        let base: u64 = rng.gen();
        let fm = cfg.fm();
        let sols: Vec<(Solution, f64)> = (0..cfg.mu)
            .into_par_iter()
            .map(|i| {
                let mut r = rng::derive(base, 0, i as u64);
                let part = random_partition(hg, cfg.epsilon, &mut r);
                let rate = *ladder.choose(&mut r).expect("ladder");
                (evaluate_offspring(hg, part, fm, &mut r), rate)
            })
            .collect();
        sols.into_iter()
            .map(|(solution, mutation_rate)| {
                log.push("seed", &solution, Some(mutation_rate));
                Individual { solution, mutation_rate }
            })
            .collect()
    } else {
        let pool = PoolConfig {
            epsilon: cfg.epsilon,
            fm_passes: cfg.fm_passes,
            ..pool.clone()
        };
        let out = pool_run_keep(hg, &pool, cfg.seeding_evaluations(), cfg.mu, rng)?;
        log.records = out.log;
        out.top
            .into_iter()
            .map(|solution| Individual {
                solution,
                mutation_rate: *ladder.choose(rng).expect("ladder"),
            })
            .collect()
    };
    rank(&mut population);
    Ok(Seeding { population, log: log.records })
}

#[derive(Clone, Debug)]
pub struct EaOutcome {
    pub best: Individual,
    /// Seeding evaluations followed by offspring evaluations.
    pub log: Vec<EvalRecord>,
    pub seeding_evaluations: usize,
    /// Generations started, including a final partial one.
    pub generations: usize,
    /// Best cut of the population after seeding and after each generation.
    pub generation_best: Vec<Weight>,
    pub final_population: Vec<Individual>,
}

impl EaOutcome {
    pub fn evaluations(&self) -> usize {
        self.log.len()
    }
}

/// Runs the memetic EA for exactly `budget` evaluations, seeding included.
pub fn ea_run<R: Rng + ?Sized>(
    hg: &Hypergraph,
    cfg: &EaConfig,
    pool: &PoolConfig,
    budget: usize,
    rng: &mut R,
) -> Result<EaOutcome> {
    cfg.validate()?;
    if hg.num_vertices() == 0 {
        return Err(Error::Config("cannot partition an empty hypergraph".into()));
    }
    let seeding_evaluations = cfg.seeding_evaluations();
    if budget <= seeding_evaluations {
        return Err(Error::Config(format!(
            "budget {budget} does not exceed the {seeding_evaluations} seeding evaluations"
        )));
    }
    let ladder = mutation_ladder(hg.num_vertices())?;
    let seeding = seed_population(hg, cfg, pool, rng)?;
    let mut population = seeding.population;
    let mut log = LogBuilder::from_records(seeding.log);
    let mut generation_best = vec![population[0].cut()];
    let base: u64 = rng.gen();
    let fm = cfg.fm();
    let mut generation = 0usize;
    while log.records.len() < budget {
        let count = cfg.lambda.min(budget - log.records.len());
        let parents = &population;
        let offspring: Vec<Individual> = (0..count)
            .into_par_iter()
            .map(|i| {
                let mut r = rng::derive(base, generation as u64 + 1, i as u64);
                let p1 = parents.choose(&mut r).expect("population");
                let p2 = parents.choose(&mut r).expect("population");
                let mut genes = p1.partition().blocks().to_vec();
                let mut rate = p1.mutation_rate;
                if r.gen_bool(cfg.crossover_prob) {
                    genes = normalize_crossover(p1.partition().blocks(), p2.partition().blocks(), &mut r)
                        .expect("equal lengths");
                    let fitter = if p2.solution.cmp_quality(&p1.solution).is_lt() { p2 } else { p1 };
                    rate = fitter.mutation_rate;
                }
                mutate(&mut genes, &mut rate, &ladder, cfg.adapt_prob, &mut r);
                let part = Partition::from_blocks(hg, genes, 2);
                Individual {
                    solution: evaluate_offspring(hg, part, fm, &mut r),
                    mutation_rate: rate,
                }
            })
            .collect();
        for child in &offspring {
            log.push("ea", &child.solution, Some(child.mutation_rate));
        }
        population.extend(offspring);
        rank(&mut population);
        population.truncate(cfg.mu);
        generation_best.push(population[0].cut());
        generation += 1;
    }
    Ok(EaOutcome {
        best: population[0].clone(),
        log: log.records,
        seeding_evaluations,
        generations: generation,
        generation_best,
        final_population: population,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm::improving_move_exists;
    use crate::hypergraph::fixtures::h4;
    use crate::rng::seeded;

    fn small() -> EaConfig {
        EaConfig {
            mu: 4,
            lambda: 8,
            seed_multiplier: 0,
            ..EaConfig::default()
        }
    }

    #[test]
    fn h4_reaches_optimum() {
        let hg = h4();
        let out = ea_run(&hg, &small(), &PoolConfig::default(), 100, &mut seeded(0)).unwrap();
        assert_eq!(out.best.cut(), 2);
        assert_eq!(out.evaluations(), 100);
        // 4 seeding + 12 full generations of 8
        assert_eq!(out.generations, 12);
        assert!(out.log.windows(2).all(|w| w[1].best_so_far <= w[0].best_so_far));
    }

    #[test]
    fn budget_must_exceed_seeding() {
        let hg = h4();
        assert!(ea_run(&hg, &small(), &PoolConfig::default(), 4, &mut seeded(0)).is_err());
        let seeded_cfg = EaConfig { seed_multiplier: 3, ..small() };
        assert!(ea_run(&hg, &seeded_cfg, &PoolConfig::default(), 12, &mut seeded(0)).is_err());
        let out = ea_run(&hg, &seeded_cfg, &PoolConfig::default(), 13, &mut seeded(0)).unwrap();
        assert_eq!(out.evaluations(), 13);
        assert_eq!(out.generations, 1);
    }

    #[test]
    fn seeding_without_pool() {
        let hg = h4();
        let cfg = EaConfig { mu: 8, ..small() };
        let s = seed_population(&hg, &cfg, &PoolConfig::default(), &mut seeded(3)).unwrap();
        assert_eq!(s.evaluations(), 8);
        assert_eq!(s.population.len(), 8);
        let ladder = mutation_ladder(4).unwrap();
        for ind in &s.population {
            assert!(ind.solution.feasible);
            assert!(ladder.contains(&ind.mutation_rate));
            assert!(!improving_move_exists(&hg, ind.partition(), 0.1).unwrap());
        }
        assert!(s.population.windows(2).all(|w| w[0].cut() <= w[1].cut()));
    }

    #[test]
    fn seeding_from_pool() {
        let hg = h4();
        let cfg = EaConfig { mu: 3, seed_multiplier: 5, ..small() };
        let s = seed_population(&hg, &cfg, &PoolConfig::default(), &mut seeded(3)).unwrap();
        assert_eq!(s.evaluations(), 15);
        assert_eq!(s.population.len(), 3);
        assert_eq!(s.population[0].cut(), 2);
    }

    #[test]
    fn deterministic_and_ladder_closed() {
        let edges = vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![5, 6], vec![6, 7, 0], vec![1, 5], vec![4, 7]];
        let hg = Hypergraph::new(8, edges, None, None).unwrap();
        let cfg = EaConfig { mu: 5, lambda: 7, ..small() };
        let a = ea_run(&hg, &cfg, &PoolConfig::default(), 60, &mut seeded(8)).unwrap();
        let b = ea_run(&hg, &cfg, &PoolConfig::default(), 60, &mut seeded(8)).unwrap();
        assert_eq!(a.log, b.log);
        assert_eq!(a.best, b.best);
        let ladder = mutation_ladder(8).unwrap();
        assert!(a.log.iter().all(|r| ladder.contains(&r.mutation_rate.unwrap())));
        assert!(a.generation_best.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(a.generations, 8);
    }
}
