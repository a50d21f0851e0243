//! Episode execution, training-step accounting, and the validation protocol.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maze::{self, MazeConfig, Trajectory};
use crate::policy::{self, Action, Architecture, OutputMode, ParamVector};
use crate::seeds::{self, STREAM_ENVIRONMENT, STREAM_VALIDATION};

/// One finished episode.
#[derive(Debug, Clone, PartialEq)]
pub struct RolloutResult {
    pub trajectory: Trajectory,
    pub fitness: f64,
    pub env_steps: usize,
}

/// Training-step ledger. A generation may start while under budget and run to
/// completion, so `used` can overshoot `max` by at most one generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepBudget {
    pub used: u64,
    pub max: u64,
}

impl StepBudget {
    pub fn new(max: u64) -> Self {
        StepBudget { used: 0, max }
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.max
    }

    pub fn charge(&mut self, steps: u64) {
        self.used += steps;
    }
}

/// Run one full episode of the policy, deterministically in
/// (policy, config, seed).
pub fn rollout(
    arch: &Architecture,
    params: &ParamVector,
    config: &MazeConfig,
    episode_seed: u64,
) -> Result<RolloutResult> {
    if arch.output_mode != OutputMode::ContinuousBounded || arch.output_dim != 2 {
        return Err(Error::InvalidConfig(
            "maze rollouts need a 2-output continuous policy".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(episode_seed);
    let (mut state, mut obs) = maze::reset(config, &mut rng);

    let mut observations = vec![obs.clone()];
    let mut actions = Vec::new();
    let mut rewards = Vec::new();
    let mut total = 0.0;

    while !state.done {
        let action = match policy::act(arch, params, &obs)? {
            Action::Continuous(v) => [v[0], v[1]],
            Action::Discrete(_) => unreachable!("continuous mode checked above"),
        };
        let out = maze::step(config, &state, action)?;
        actions.push(vec![action[0], action[1]]);
        rewards.push(out.reward);
        total += out.reward;
        observations.push(out.obs.clone());
        obs = out.obs;
        state = out.state;
    }

    let length = rewards.len();
    let trajectory = Trajectory {
        observations,
        actions,
        rewards,
        final_position: state.position,
        length,
        total_reward: total,
    };
    Ok(RolloutResult {
        fitness: total,
        env_steps: length,
        trajectory,
    })
}

/// Seed for a training episode of `individual` at `generation`, repeat 0 for
/// the population rollout and 1..=robustness for elite re-evaluations.
pub fn training_episode_seed(trial_seed: u64, generation: u64, individual: u64, repeat: u64) -> u64 {
    seeds::derive_seed(
        trial_seed,
        STREAM_ENVIRONMENT,
        &[generation, individual, repeat],
    )
}

/// One rollout per individual, parallel across the population, results in
/// population order regardless of scheduling. Charges every env step to the
/// budget.
pub fn evaluate_population(
    arch: &Architecture,
    population: &[ParamVector],
    config: &MazeConfig,
    trial_seed: u64,
    generation: u64,
    budget: &mut StepBudget,
) -> Result<Vec<RolloutResult>> {
    let results: Vec<Result<RolloutResult>> = population
        .par_iter()
        .enumerate()
        .map(|(i, params)| {
            let seed = training_episode_seed(trial_seed, generation, i as u64, 0);
            rollout(arch, params, config, seed)
        })
        .collect();
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        let r = r?;
        budget.charge(r.env_steps as u64);
        out.push(r);
    }
    Ok(out)
}

/// Mean fitness over `n_episodes` seeded rollouts on the validation stream.
/// Charges nothing to the training budget.
pub fn validate(
    arch: &Architecture,
    params: &ParamVector,
    config: &MazeConfig,
    n_episodes: usize,
    trial_seed: u64,
    generation: u64,
) -> Result<f64> {
    if n_episodes == 0 {
        return Err(Error::EmptyInput("validation episodes"));
    }
    let fitnesses: Vec<Result<f64>> = (0..n_episodes)
        .into_par_iter()
        .map(|ep| {
            let seed = seeds::derive_seed(
                trial_seed,
                STREAM_VALIDATION,
                &[generation, ep as u64, 0],
            );
            rollout(arch, params, config, seed).map(|r| r.fitness)
        })
        .collect();
    let mut sum = 0.0;
    for f in fitnesses {
        sum += f?;
    }
    Ok(sum / n_episodes as f64)
}
