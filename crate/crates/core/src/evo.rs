//! The evolutionary loops: genetic algorithm, novelty search, the adaptive
//! explore-exploit hybrid, and a random-search baseline.
//!
//! All four share the same operator kit (truncation survivor selection,
//! uniform parent selection with repetition, additive Gaussian mutation,
//! robust elite extraction). The hybrid keeps two survivor sets — one ranked
//! by novelty, one by fitness — and splits the `popsize - 1` child slots
//! between them according to the exploration rate `gamma`, which grows by
//! `alpha` when the elite stagnates and shrinks by `beta` when it improves.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::maze::MazeConfig;
use crate::novelty::{
    behavior_characteristic, novelty_scores, update_archive, BcMode, BehaviorDescriptor,
    NoveltyArchive,
};
use crate::policy::{init_params, Architecture, ParamVector};
use crate::rollout::{
    evaluate_population, rollout, training_episode_seed, RolloutResult, StepBudget,
};
use crate::seeds::{self, STREAM_ARCHIVE, STREAM_EVOLUTION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Ga,
    Ns,
    Eyal,
    Rs,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Ga => "ga",
            Algorithm::Ns => "ns",
            Algorithm::Eyal => "eyal",
            Algorithm::Rs => "rs",
        }
    }

    /// Whether this loop computes behavior descriptors and novelty at all.
    pub fn uses_novelty(&self) -> bool {
        matches!(self, Algorithm::Ns | Algorithm::Eyal)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ga" => Ok(Algorithm::Ga),
            "ns" => Ok(Algorithm::Ns),
            "eyal" => Ok(Algorithm::Eyal),
            "rs" => Ok(Algorithm::Rs),
            other => Err(Error::InvalidConfig(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Evolution hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvoConfig {
    /// Population size M, including the elite slot.
    pub popsize: usize,
    /// Truncation size T: survivors kept per selection.
    pub truncation: usize,
    /// Mutation power sigma^2: variance of the per-component Gaussian noise.
    pub mutation_power: f64,
    /// Treat `mutation_power` as a standard deviation instead of a variance.
    pub mutation_power_is_std: bool,
    pub elite_candidates: usize,
    pub elite_robustness: usize,
    /// Initial exploration rate gamma.
    pub gamma0: f64,
    /// Exploration growth rate alpha (applied on stagnation).
    pub alpha: f64,
    /// Exploration decay rate beta (applied on improvement).
    pub beta: f64,
    pub max_training_steps: u64,
    pub novelty_k: usize,
    pub archive_pr: f64,
    pub bc_mode: BcMode,
}

impl Default for EvoConfig {
    fn default() -> Self {
        EvoConfig {
            popsize: 51,
            truncation: 20,
            mutation_power: 0.005,
            mutation_power_is_std: false,
            elite_candidates: 5,
            elite_robustness: 5,
            gamma0: 0.75,
            alpha: 0.1,
            beta: 0.1,
            max_training_steps: 50_000_000,
            novelty_k: 25,
            archive_pr: 0.01,
            bc_mode: BcMode::MazeLastPosition,
        }
    }
}

impl EvoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.popsize == 0 {
            return Err(Error::InvalidConfig("popsize must be positive".into()));
        }
        if self.truncation == 0 || self.truncation > self.popsize {
            return Err(Error::InvalidConfig(
                "truncation must be in 1..=popsize".into(),
            ));
        }
        if self.elite_candidates == 0 || self.elite_candidates > self.popsize {
            return Err(Error::InvalidConfig(
                "elite_candidates must be in 1..=popsize".into(),
            ));
        }
        if self.elite_robustness == 0 {
            return Err(Error::InvalidConfig(
                "elite_robustness must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.gamma0) {
            return Err(Error::InvalidConfig("gamma0 must be in [0, 1]".into()));
        }
        if self.alpha < 0.0 || self.beta < 0.0 {
            return Err(Error::InvalidConfig("alpha and beta must be >= 0".into()));
        }
        if self.mutation_power < 0.0 {
            return Err(Error::InvalidConfig("mutation_power must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.archive_pr) {
            return Err(Error::InvalidConfig("archive_pr must be in [0, 1]".into()));
        }
        if self.novelty_k == 0 {
            return Err(Error::InvalidConfig("novelty_k must be positive".into()));
        }
        if self.max_training_steps == 0 {
            return Err(Error::InvalidConfig(
                "max_training_steps must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One population member with its evaluation results.
#[derive(Debug, Clone)]
pub struct Individual {
    pub params: ParamVector,
    pub fitness: f64,
    pub bc: Option<BehaviorDescriptor>,
    pub novelty: f64,
}

/// Per-generation summary reported by the loop.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationReport {
    pub generation: u64,
    pub elite_params: ParamVector,
    /// Mean score of the elite over its robustness rollouts.
    pub elite_fitness: f64,
    pub gamma: f64,
    /// Cumulative training steps after this generation.
    pub training_steps_used: u64,
    pub wall_time: Duration,
    /// Env steps charged by this generation's population rollouts.
    pub population_steps: u64,
    /// Env steps charged by this generation's elite re-evaluations.
    pub elite_steps: u64,
    /// Number of elite re-evaluation rollouts this generation.
    pub elite_rollouts: u64,
}

/// Indices of the `t` highest-scoring individuals, ties broken by lower
/// index (stable).
pub fn select_survivors(scores: &[f64], t: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx.truncate(t);
    idx
}

/// `n` uniform draws with replacement from the survivor set.
pub fn select_parents<R: Rng + ?Sized>(survivors: &[usize], n: usize, rng: &mut R) -> Vec<usize> {
    assert!(!survivors.is_empty() || n == 0, "no survivors to draw from");
    (0..n)
        .map(|_| survivors[rng.random_range(0..survivors.len())])
        .collect()
}

/// Parent plus i.i.d. Gaussian noise on every component.
pub fn mutate<R: Rng + ?Sized>(
    params: &ParamVector,
    mutation_power: f64,
    power_is_std: bool,
    rng: &mut R,
) -> ParamVector {
    let std = if power_is_std {
        mutation_power
    } else {
        mutation_power.sqrt()
    };
    let normal = Normal::new(0.0, std).expect("non-negative std");
    ParamVector(params.0.iter().map(|v| v + normal.sample(rng)).collect())
}

/// gamma' after one elite comparison: down by beta on improvement, up by
/// alpha on stagnation, clamped to [0, 1].
pub fn update_gamma(gamma: f64, improved: bool, alpha: f64, beta: f64) -> f64 {
    let g = if improved { gamma - beta } else { gamma + alpha };
    g.clamp(0.0, 1.0)
}

/// Split the `m - 1` child slots: floor(gamma * (m-1)) go to the exploring
/// niche, the rest to the exploiting niche; the last slot holds the elite.
pub fn niche_sizes(m: usize, gamma: f64) -> (usize, usize) {
    let slots = m - 1;
    let n_explore = (gamma * slots as f64).floor() as usize;
    let n_explore = n_explore.min(slots);
    (n_explore, slots - n_explore)
}

/// Outcome of robust elite extraction.
pub struct EliteChoice {
    pub index: usize,
    pub mean_fitness: f64,
    pub steps_consumed: u64,
    pub rollouts_run: u64,
}

/// Re-evaluate the top `candidates` individuals with `robustness` fresh
/// rollouts each and pick the best mean. `rollout_fn(pop_index, repeat)`
/// runs one episode; every step it reports is charged to the caller.
pub fn extract_elite<F>(
    fitnesses: &[f64],
    candidates: usize,
    robustness: usize,
    mut rollout_fn: F,
) -> Result<EliteChoice>
where
    F: FnMut(usize, usize) -> Result<(f64, u64)>,
{
    let cand = select_survivors(fitnesses, candidates.min(fitnesses.len()));
    let mut best: Option<(usize, f64)> = None;
    let mut steps = 0u64;
    let mut rollouts = 0u64;
    for &idx in &cand {
        let mut sum = 0.0;
        for rep in 1..=robustness {
            let (fit, s) = rollout_fn(idx, rep)?;
            sum += fit;
            steps += s;
            rollouts += 1;
        }
        let mean = sum / robustness as f64;
        // strict > keeps the earlier (higher-fitness, lower-index) candidate on ties
        if best.map_or(true, |(_, b)| mean > b) {
            best = Some((idx, mean));
        }
    }
    let (index, mean_fitness) = best.ok_or(Error::EmptyInput("elite candidates"))?;
    Ok(EliteChoice {
        index,
        mean_fitness,
        steps_consumed: steps,
        rollouts_run: rollouts,
    })
}

/// Full state of one evolutionary run; call [`EvoDriver::run_generation`]
/// until it returns `None`.
pub struct EvoDriver {
    pub algorithm: Algorithm,
    pub arch: Architecture,
    pub maze: MazeConfig,
    pub config: EvoConfig,
    pub trial_seed: u64,
    pub budget: StepBudget,
    pub gamma: f64,
    pub archive: NoveltyArchive,
    evo_rng: ChaCha8Rng,
    archive_rng: ChaCha8Rng,
    population: Vec<Individual>,
    elite: Option<(ParamVector, f64)>,
    generation: u64,
    /// Population indices of the parents drawn this generation, in draw
    /// order (exploring niche first for the hybrid).
    pub last_parent_indices: Vec<usize>,
}

impl EvoDriver {
    pub fn new(
        algorithm: Algorithm,
        arch: Architecture,
        maze: MazeConfig,
        config: EvoConfig,
        trial_seed: u64,
    ) -> Result<Self> {
        config.validate()?;
        maze.validate()?;
        Ok(EvoDriver {
            algorithm,
            arch,
            maze,
            budget: StepBudget::new(config.max_training_steps),
            gamma: config.gamma0,
            archive: NoveltyArchive::new(config.archive_pr),
            evo_rng: seeds::stream_rng(trial_seed, STREAM_EVOLUTION),
            archive_rng: seeds::stream_rng(trial_seed, STREAM_ARCHIVE),
            population: Vec::new(),
            elite: None,
            generation: 0,
            last_parent_indices: Vec::new(),
            config,
            trial_seed,
        })
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn elite(&self) -> Option<&(ParamVector, f64)> {
        self.elite.as_ref()
    }

    fn reproduce(&mut self) -> Vec<ParamVector> {
        let m = self.config.popsize;
        self.last_parent_indices.clear();

        if self.generation == 0 || self.algorithm == Algorithm::Rs {
            return (0..m)
                .map(|_| init_params(&self.arch, &mut self.evo_rng))
                .collect();
        }

        let fitnesses: Vec<f64> = self.population.iter().map(|i| i.fitness).collect();
        let novelties: Vec<f64> = self.population.iter().map(|i| i.novelty).collect();
        let t = self.config.truncation;

        let parent_indices: Vec<usize> = match self.algorithm {
            Algorithm::Ga => {
                let survivors = select_survivors(&fitnesses, t);
                select_parents(&survivors, m - 1, &mut self.evo_rng)
            }
            Algorithm::Ns => {
                let survivors = select_survivors(&novelties, t);
                select_parents(&survivors, m - 1, &mut self.evo_rng)
            }
            Algorithm::Eyal => {
                let exploring = select_survivors(&novelties, t);
                let exploiting = select_survivors(&fitnesses, t);
                let (n_explore, n_exploit) = niche_sizes(m, self.gamma);
                let mut parents = select_parents(&exploring, n_explore, &mut self.evo_rng);
                parents.extend(select_parents(&exploiting, n_exploit, &mut self.evo_rng));
                parents
            }
            Algorithm::Rs => unreachable!(),
        };
        self.last_parent_indices = parent_indices.clone();

        let mut children: Vec<ParamVector> = parent_indices
            .iter()
            .map(|&pi| {
                mutate(
                    &self.population[pi].params,
                    self.config.mutation_power,
                    self.config.mutation_power_is_std,
                    &mut self.evo_rng,
                )
            })
            .collect();
        let (elite_params, _) = self.elite.as_ref().expect("elite exists after gen 1");
        children.push(elite_params.clone());
        children
    }

    /// Run one full generation. Returns `None` without doing any work when
    /// the training budget is already exhausted.
    pub fn run_generation(&mut self) -> Result<Option<GenerationReport>> {
        if self.budget.exhausted() {
            return Ok(None);
        }
        let started = Instant::now();
        let gen = self.generation + 1;

        let genomes = self.reproduce();
        let used_before = self.budget.used;
        let results = evaluate_population(
            &self.arch,
            &genomes,
            &self.maze,
            self.trial_seed,
            gen,
            &mut self.budget,
        )?;
        let population_steps = self.budget.used - used_before;

        let fitnesses: Vec<f64> = results.iter().map(|r| r.fitness).collect();

        // robust elite extraction; rollouts run in parallel per candidate batch
        let robustness = self.config.elite_robustness;
        let arch = &self.arch;
        let maze = &self.maze;
        let trial_seed = self.trial_seed;
        let choice = {
            // pre-compute all candidate re-evaluations in parallel, then fold
            let cand = select_survivors(&fitnesses, self.config.elite_candidates.min(fitnesses.len()));
            let evals: Vec<((usize, usize), RolloutResult)> = cand
                .iter()
                .flat_map(|&idx| (1..=robustness).map(move |rep| (idx, rep)))
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|(idx, rep)| {
                    let seed = training_episode_seed(trial_seed, gen, idx as u64, rep as u64);
                    rollout(arch, &genomes[idx], maze, seed).map(|r| ((idx, rep), r))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut lookup = std::collections::HashMap::new();
            for (key, r) in evals {
                lookup.insert(key, (r.fitness, r.env_steps as u64));
            }
            extract_elite(
                &fitnesses,
                self.config.elite_candidates,
                robustness,
                |idx, rep| Ok(lookup[&(idx, rep)]),
            )?
        };
        self.budget.charge(choice.steps_consumed);

        // gamma adaptation: undefined on the first generation (no previous elite)
        if self.algorithm == Algorithm::Eyal {
            if let Some((_, prev_mean)) = self.elite {
                let improved = choice.mean_fitness > prev_mean;
                self.gamma = update_gamma(self.gamma, improved, self.config.alpha, self.config.beta);
            }
        }

        let mut population: Vec<Individual> = results
            .iter()
            .zip(genomes)
            .map(|(r, params)| Individual {
                params,
                fitness: r.fitness,
                bc: None,
                novelty: 0.0,
            })
            .collect();

        if self.algorithm.uses_novelty() {
            let bcs: Vec<BehaviorDescriptor> = results
                .iter()
                .map(|r| {
                    behavior_characteristic(&r.trajectory, self.config.bc_mode, self.maze.max_steps)
                })
                .collect();
            let scores = novelty_scores(&bcs, &self.archive, self.config.novelty_k);
            for ((ind, bc), score) in population.iter_mut().zip(&bcs).zip(&scores) {
                ind.bc = Some(bc.clone());
                ind.novelty = *score;
            }
            update_archive(&mut self.archive, &bcs, &mut self.archive_rng);
        }

        let elite_params = population[choice.index].params.clone();
        self.elite = Some((elite_params.clone(), choice.mean_fitness));
        self.population = population;
        self.generation = gen;

        Ok(Some(GenerationReport {
            generation: gen,
            elite_params,
            elite_fitness: choice.mean_fitness,
            gamma: self.gamma,
            training_steps_used: self.budget.used,
            wall_time: started.elapsed(),
            population_steps,
            elite_steps: choice.steps_consumed,
            elite_rollouts: choice.rollouts_run,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maze::RewardMode;
    use crate::policy::OutputMode;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn survivors_by_score_with_stable_ties() {
        assert_eq!(select_survivors(&[3.0, 1.0, 2.0], 2), vec![0, 2]);
        assert_eq!(select_survivors(&[1.0, 1.0, 1.0], 2), vec![0, 1]);
        assert_eq!(select_survivors(&[3.0, 1.0, 2.0], 3), vec![0, 2, 1]);
    }

    #[test]
    fn parent_selection_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(select_parents(&[0, 1], 0, &mut rng).is_empty());
        assert_eq!(select_parents(&[7], 5, &mut rng), vec![7; 5]);
    }

    #[test]
    fn parent_selection_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let picks = select_parents(&[0, 1], 100_000, &mut rng);
        let zeros = picks.iter().filter(|&&p| p == 0).count();
        // binomial(1e5, 0.5): 4.4 sigma ~ 700
        assert!((49_300..=50_700).contains(&zeros), "zeros {zeros}");
    }

    #[test]
    fn zero_power_mutation_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = ParamVector(vec![1.0, -2.0, 3.0]);
        assert_eq!(mutate(&p, 0.0, false, &mut rng), p);
        assert_eq!(mutate(&p, 0.0, true, &mut rng), p);
    }

    #[test]
    fn mutation_noise_variance_matches_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let parent = ParamVector(vec![0.0; n]);
        let child = mutate(&parent, 0.005, false, &mut rng);
        assert_eq!(child.len(), n);
        let mean: f64 = child.0.iter().sum::<f64>() / n as f64;
        let var: f64 = child.0.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        assert!((0.0047..=0.0053).contains(&var), "var {var}");
    }

    #[test]
    fn gamma_update_rules() {
        assert!((update_gamma(0.75, true, 0.1, 0.1) - 0.65).abs() < 1e-12);
        assert_eq!(update_gamma(0.95, false, 0.1, 0.1), 1.0);
        assert_eq!(update_gamma(0.05, true, 0.1, 0.1), 0.0);
        assert_eq!(update_gamma(0.4, true, 0.0, 0.0), 0.4);
        assert_eq!(update_gamma(0.4, false, 0.0, 0.0), 0.4);
    }

    #[test]
    fn niche_split_sums_to_m_minus_one() {
        assert_eq!(niche_sizes(51, 0.75), (37, 13));
        assert_eq!(niche_sizes(51, 0.0), (0, 50));
        assert_eq!(niche_sizes(51, 1.0), (50, 0));
        for g in 0..=20 {
            let gamma = g as f64 / 20.0;
            let (e, x) = niche_sizes(51, gamma);
            assert_eq!(e + x, 50);
        }
    }

    #[test]
    fn elite_extraction_prefers_higher_robust_mean() {
        // fitnesses pick candidates 1 and 0; robust means 6.0 vs 4.0
        let fitnesses = vec![5.0, 9.0];
        let choice = extract_elite(&fitnesses, 2, 2, |idx, _rep| {
            Ok(if idx == 0 { (6.0, 10) } else { (4.0, 10) })
        })
        .unwrap();
        assert_eq!(choice.index, 0);
        assert_eq!(choice.mean_fitness, 6.0);
        assert_eq!(choice.steps_consumed, 40);
        assert_eq!(choice.rollouts_run, 4);
    }

    #[test]
    fn single_candidate_is_elite_regardless_of_draws() {
        let fitnesses = vec![1.0, 2.0, 3.0];
        let choice = extract_elite(&fitnesses, 1, 5, |idx, _| {
            assert_eq!(idx, 2);
            Ok((-100.0, 500))
        })
        .unwrap();
        assert_eq!(choice.index, 2);
        assert_eq!(choice.steps_consumed, 2500);
    }

    fn tiny_driver(algorithm: Algorithm, seed: u64) -> EvoDriver {
        let arch = Architecture::new(4, vec![4], 2, OutputMode::ContinuousBounded).unwrap();
        let maze = MazeConfig::canonical(RewardMode::Sparse);
        let config = EvoConfig {
            popsize: 8,
            truncation: 3,
            elite_candidates: 2,
            elite_robustness: 2,
            max_training_steps: 100_000,
            ..EvoConfig::default()
        };
        EvoDriver::new(algorithm, arch, maze, config, seed).unwrap()
    }

    #[test]
    fn first_generation_is_all_initializer_draws() {
        let mut d = tiny_driver(Algorithm::Ga, 11);
        let report = d.run_generation().unwrap().unwrap();
        assert_eq!(report.generation, 1);
        assert_eq!(d.population().len(), 8);
        assert_eq!(report.elite_rollouts, 4);
        assert!(report.training_steps_used > 0);
    }

    #[test]
    fn elite_is_carried_into_next_population() {
        let mut d = tiny_driver(Algorithm::Ga, 12);
        let r1 = d.run_generation().unwrap().unwrap();
        d.run_generation().unwrap().unwrap();
        let carried = d
            .population()
            .iter()
            .any(|ind| ind.params == r1.elite_params);
        assert!(carried);
        // elite occupies the last slot
        assert_eq!(d.population().last().unwrap().params, r1.elite_params);
    }

    #[test]
    fn ga_never_touches_novelty_state() {
        let mut d = tiny_driver(Algorithm::Ga, 13);
        for _ in 0..3 {
            d.run_generation().unwrap().unwrap();
        }
        assert!(d.archive.is_empty());
        assert!(d.population().iter().all(|i| i.bc.is_none()));
    }

    #[test]
    fn ns_population_has_descriptors() {
        let mut d = tiny_driver(Algorithm::Ns, 14);
        d.run_generation().unwrap().unwrap();
        assert!(d.population().iter().all(|i| i.bc.is_some()));
    }

    #[test]
    fn budget_guard_stops_the_loop() {
        let mut d = tiny_driver(Algorithm::Ga, 15);
        let mut last_used = 0;
        while let Some(r) = d.run_generation().unwrap() {
            assert!(r.training_steps_used > last_used);
            last_used = r.training_steps_used;
        }
        assert!(d.budget.used >= d.budget.max);
        // overshoot bounded by one generation: 8 rollouts + 4 elite rollouts
        let one_gen = (8 + 4) * 500;
        assert!(d.budget.used < d.budget.max + one_gen);
        assert!(d.run_generation().unwrap().is_none());
    }

    #[test]
    fn rs_resamples_every_generation() {
        let mut d = tiny_driver(Algorithm::Rs, 16);
        let r1 = d.run_generation().unwrap().unwrap();
        d.run_generation().unwrap().unwrap();
        // fresh draws: previous elite params are not in the new population
        assert!(d
            .population()
            .iter()
            .all(|ind| ind.params != r1.elite_params));
    }

    #[test]
    fn gamma_stays_in_bounds_over_a_run() {
        let mut d = tiny_driver(Algorithm::Eyal, 17);
        let mut gammas = vec![d.gamma];
        while let Some(r) = d.run_generation().unwrap() {
            assert!((0.0..=1.0).contains(&r.gamma));
            gammas.push(r.gamma);
        }
        // first generation leaves gamma at gamma0
        assert_eq!(gammas[1], d.config.gamma0);
    }
}
