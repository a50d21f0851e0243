//! Acceptance gate: every release criterion checked end to end, one printed
//! PASS/FAIL line per criterion. The statistical criteria (7-9) run full
//! desk-scale trial batches and dominate the runtime.

use std::fmt::Write as _;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use evomaze::evo::{mutate, select_survivors, Algorithm, EvoConfig, EvoDriver};
use evomaze::harness::{
    forward_fill, run_trial, ExperimentConfig, FillStatistic, TrialRecord, TrialRow,
    TrialSettings,
};
use evomaze::maze::{self, MazeConfig, RewardMode};
use evomaze::novelty::{novelty_scores, update_archive, BehaviorDescriptor, NoveltyArchive};
use evomaze::policy::{Architecture, OutputMode, ParamVector};

type Check = std::result::Result<String, String>;

/// Desk-scale settings used by the statistical criteria.
fn desk_settings(algorithm: Algorithm, env: RewardMode, seed: u64) -> TrialSettings {
    let cfg = ExperimentConfig::desk(env);
    TrialSettings {
        algorithm,
        env,
        trial_seed: seed,
        evo: cfg.evo.clone(),
        maze: MazeConfig::canonical(env),
        hidden_dims: cfg.hidden_dims.clone(),
        validation_episodes: cfg.validation_episodes,
        out_path: None,
        record_wall_time: false,
    }
}

fn run_batch(algorithm: Algorithm, env: RewardMode, seeds: std::ops::RangeInclusive<u64>) -> Vec<TrialRecord> {
    seeds
        .map(|seed| run_trial(&desk_settings(algorithm, env, seed)).expect("trial runs"))
        .collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean.
fn sem(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0);
    (var / xs.len() as f64).sqrt()
}

// ---------------------------------------------------------------------------
// criterion 1: reward exactness
// ---------------------------------------------------------------------------

/// Step the maze with a scripted action sequence, independently recomputing
/// position and reward at every step, and return (rewards, episode length).
fn scripted_episode(mode: RewardMode) -> Check {
    let mut cfg = MazeConfig::canonical(mode);
    cfg.start_jitter = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut state, _) = maze::reset(&cfg, &mut rng);

    // right past the pocket arm, straight down, then left to the goal;
    // the whole path stays clear of every wall
    let script = |pos: [f64; 2]| -> [f64; 2] {
        if pos[1] > -3.0 + 1e-9 {
            if pos[0] < 2.35 - 1e-9 {
                [1.0, 0.0]
            } else {
                [0.0, -1.0]
            }
        } else {
            [-1.0, 0.0]
        }
    };

    let mut my_pos = state.position;
    let mut my_total = 0.0;
    let mut steps = 0usize;
    while !state.done {
        let action = script(my_pos);
        let out = maze::step(&cfg, &state, action).map_err(|e| e.to_string())?;
        // independent kinematics: the path never touches a wall, so the
        // slide reduces to plain displacement
        my_pos = [
            my_pos[0] + action[0] * cfg.step_size,
            my_pos[1] + action[1] * cfg.step_size,
        ];
        if out.state.position != my_pos {
            return Err(format!(
                "position diverged at step {steps}: env {:?} vs recomputed {my_pos:?}",
                out.state.position
            ));
        }
        let d = ((my_pos[0] - cfg.goal[0]).powi(2) + (my_pos[1] - cfg.goal[1]).powi(2)).sqrt();
        let reached = d <= cfg.goal_radius;
        let expected = match mode {
            RewardMode::Sparse => {
                if reached {
                    0.0
                } else {
                    -1.0
                }
            }
            RewardMode::Deceptive => {
                if reached {
                    10_000.0
                } else {
                    -d
                }
            }
        };
        if out.reward != expected {
            return Err(format!(
                "reward diverged at step {steps}: env {} vs recomputed {expected}",
                out.reward
            ));
        }
        my_total += expected;
        state = out.state;
        steps += 1;
        if steps > cfg.max_steps {
            return Err("episode exceeded max_steps".into());
        }
    }
    if !state.reached_goal {
        return Err("scripted path failed to reach the goal".into());
    }
    match mode {
        RewardMode::Sparse => {
            if my_total != -((steps as f64) - 1.0) {
                return Err(format!(
                    "sparse total {my_total} != -(steps-1) = {}",
                    -((steps as f64) - 1.0)
                ));
            }
        }
        RewardMode::Deceptive => {
            if !(my_total > 0.0) {
                return Err(format!("deceptive goal episode total {my_total} not positive"));
            }
        }
    }
    Ok(format!("goal in {steps} steps, total {my_total:.3}"))
}

fn criterion_1() -> Check {
    // timeout floor: a motionless agent collects exactly -500 sparse reward
    let mut cfg = MazeConfig::canonical(RewardMode::Sparse);
    cfg.start_jitter = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut state, _) = maze::reset(&cfg, &mut rng);
    let mut total = 0.0;
    let mut n = 0;
    while !state.done {
        let out = maze::step(&cfg, &state, [0.0, 0.0]).map_err(|e| e.to_string())?;
        total += out.reward;
        state = out.state;
        n += 1;
    }
    if n != 500 || total != -500.0 {
        return Err(format!("timeout episode: {n} steps, total {total} (want 500, -500)"));
    }

    let sparse = scripted_episode(RewardMode::Sparse)?;
    let deceptive = scripted_episode(RewardMode::Deceptive)?;
    Ok(format!("timeout -500 exact; sparse {sparse}; deceptive {deceptive}"))
}

// ---------------------------------------------------------------------------
// criterion 2: operator oracle equivalence
// ---------------------------------------------------------------------------

fn knn_oracle(own: &[BehaviorDescriptor], archive: &[BehaviorDescriptor], k: usize) -> Vec<f64> {
    own.iter()
        .enumerate()
        .map(|(i, bc)| {
            let mut dists: Vec<f64> = own
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, o)| bc.distance(o))
                .chain(archive.iter().map(|o| bc.distance(o)))
                .collect();
            if dists.is_empty() {
                return 0.0;
            }
            dists.sort_by(f64::total_cmp);
            let used = k.min(dists.len());
            dists[..used].iter().sum::<f64>() / used as f64
        })
        .collect()
}

fn truncation_oracle(scores: &[f64], t: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx.into_iter().take(t).collect()
}

fn fill_oracle(
    rows: &[TrialRow],
    interval: u64,
    horizon: u64,
    statistic: FillStatistic,
) -> Vec<(u64, Option<f64>)> {
    let mut out = Vec::new();
    let mut step = interval;
    while step <= horizon {
        // full rescan: latest row at or before this checkpoint
        let mut value = None;
        for (i, row) in rows.iter().enumerate() {
            if row.training_steps_used <= step {
                value = Some(match statistic {
                    FillStatistic::EliteFitness => row.elite_fitness,
                    FillStatistic::BestSoFarValidation => rows[..=i]
                        .iter()
                        .map(|r| r.validation_score)
                        .fold(f64::NEG_INFINITY, f64::max),
                });
            }
        }
        out.push((step, value));
        step += interval;
    }
    out
}

fn criterion_2() -> Check {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(202);

    for case in 0..200 {
        let n_own = rng.random_range(0..=12);
        let n_arch = rng.random_range(0..=12usize.saturating_sub(n_own));
        let dim = rng.random_range(1..=3);
        let k = rng.random_range(1..=15);
        let point = |rng: &mut ChaCha8Rng| {
            BehaviorDescriptor((0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
        };
        let own: Vec<_> = (0..n_own).map(|_| point(&mut rng)).collect();
        let arch_pts: Vec<_> = (0..n_arch).map(|_| point(&mut rng)).collect();
        // probability-1 insertion fills the archive deterministically
        let mut archive = NoveltyArchive::new(1.0);
        update_archive(&mut archive, &arch_pts, &mut rng);
        let fast = novelty_scores(&own, &archive, k);
        let slow = knn_oracle(&own, &arch_pts, k);
        if fast != slow {
            return Err(format!("k-NN mismatch on case {case}: {fast:?} vs {slow:?}"));
        }
    }

    for case in 0..200 {
        let n = rng.random_range(1..=30);
        let t = rng.random_range(1..=n);
        // duplicated scores exercise the stable tie-break
        let scores: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64).collect();
        let fast = select_survivors(&scores, t);
        let slow = truncation_oracle(&scores, t);
        if fast != slow {
            return Err(format!("truncation mismatch on case {case}: {fast:?} vs {slow:?}"));
        }
    }

    for case in 0..200 {
        let n = rng.random_range(0..=20);
        let mut steps = 0u64;
        let rows: Vec<TrialRow> = (0..n)
            .map(|g| {
                steps += rng.random_range(1_000..40_000);
                TrialRow {
                    generation: g + 1,
                    training_steps_used: steps,
                    elite_fitness: rng.random_range(-500.0..500.0),
                    gamma: 0.5,
                    validation_score: rng.random_range(-500.0..500.0),
                    wall_time_s: 0.0,
                    population_steps: 0,
                    elite_steps: 0,
                    elite_rollouts: 0,
                }
            })
            .collect();
        let interval = rng.random_range(1_000..20_000);
        let horizon = rng.random_range(interval..400_000);
        for statistic in [FillStatistic::BestSoFarValidation, FillStatistic::EliteFitness] {
            let fast = forward_fill(&rows, interval, horizon, statistic);
            let slow = fill_oracle(&rows, interval, horizon, statistic);
            if fast != slow {
                return Err(format!("forward-fill mismatch on case {case}"));
            }
        }
    }

    Ok("k-NN, truncation, and forward-fill match brute-force oracles on 200 cases each".into())
}

// ---------------------------------------------------------------------------
// criterion 3: mutation statistics
// ---------------------------------------------------------------------------

fn criterion_3() -> Check {
    const N: usize = 100_000;
    const SIGMA2: f64 = 0.005;
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let zero = ParamVector(vec![0.0; N]);
    let noise = mutate(&zero, SIGMA2, false, &mut rng);

    let m = mean(&noise.0);
    let var = noise.0.iter().map(|x| (x - m).powi(2)).sum::<f64>() / N as f64;
    let mean_bound = 4.0 * (SIGMA2 / N as f64).sqrt();
    if m.abs() >= mean_bound {
        return Err(format!("noise mean {m} exceeds bound {mean_bound}"));
    }
    if var < 0.94 * SIGMA2 || var > 1.06 * SIGMA2 {
        return Err(format!("noise variance {var} outside {SIGMA2} +/- 6%"));
    }
    Ok(format!("mean {m:.2e} < {mean_bound:.2e}, variance {var:.5} within 6% of {SIGMA2}"))
}

// ---------------------------------------------------------------------------
// criterion 4: hybrid reductions
// ---------------------------------------------------------------------------

fn tiny_config() -> EvoConfig {
    EvoConfig {
        popsize: 12,
        truncation: 5,
        elite_candidates: 3,
        elite_robustness: 2,
        max_training_steps: u64::MAX / 2,
        ..EvoConfig::default()
    }
}

struct Trace {
    elite_fitness: Vec<f64>,
    elite_params: Vec<ParamVector>,
    parents: Vec<Vec<usize>>,
    gammas: Vec<f64>,
}

fn drive(algorithm: Algorithm, gamma0: f64, alpha: f64, beta: f64, gens: usize) -> Trace {
    let arch = Architecture::new(4, vec![8], 2, OutputMode::ContinuousBounded).unwrap();
    let config = EvoConfig {
        gamma0,
        alpha,
        beta,
        ..tiny_config()
    };
    let maze = MazeConfig::canonical(RewardMode::Deceptive);
    let mut driver = EvoDriver::new(algorithm, arch, maze, config, 77).unwrap();
    let mut trace = Trace {
        elite_fitness: Vec::new(),
        elite_params: Vec::new(),
        parents: Vec::new(),
        gammas: Vec::new(),
    };
    for _ in 0..gens {
        let report = driver.run_generation().unwrap().expect("budget is ample");
        trace.elite_fitness.push(report.elite_fitness);
        trace.elite_params.push(report.elite_params);
        trace.parents.push(driver.last_parent_indices.clone());
        trace.gammas.push(report.gamma);
    }
    trace
}

fn criterion_4() -> Check {
    const GENS: usize = 20;
    let ga = drive(Algorithm::Ga, 0.75, 0.1, 0.1, GENS);
    let eyal0 = drive(Algorithm::Eyal, 0.0, 0.0, 0.0, GENS);
    if ga.elite_fitness != eyal0.elite_fitness || ga.elite_params != eyal0.elite_params {
        return Err("exploit-only hybrid (gamma=0) diverged from plain GA elites".into());
    }
    if eyal0.gammas.iter().any(|&g| g != 0.0) {
        return Err("gamma drifted with alpha=beta=0".into());
    }

    let ns = drive(Algorithm::Ns, 0.75, 0.1, 0.1, GENS);
    let eyal1 = drive(Algorithm::Eyal, 1.0, 0.0, 0.0, GENS);
    if ns.parents != eyal1.parents {
        return Err("explore-only hybrid (gamma=1) diverged from NS parent selection".into());
    }
    if ns.elite_fitness != eyal1.elite_fitness {
        return Err("explore-only hybrid (gamma=1) diverged from NS elites".into());
    }
    Ok(format!("both reductions exact over {GENS} generations"))
}

// ---------------------------------------------------------------------------
// criterion 5: determinism across worker counts
// ---------------------------------------------------------------------------

fn criterion_5() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for workers in [1usize, 3] {
        let mut settings = desk_settings(Algorithm::Eyal, RewardMode::Deceptive, 5);
        let path = dir.path().join(format!("trial_w{workers}.csv"));
        settings.out_path = Some(path.clone());
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| run_trial(&settings)).map_err(|e| e.to_string())?;
        bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    if bytes[0] != bytes[1] {
        return Err("trial CSVs differ between 1 and 3 worker threads".into());
    }
    Ok(format!("full desk trial byte-identical across worker counts ({} bytes)", bytes[0].len()))
}

// ---------------------------------------------------------------------------
// criterion 6: gamma dynamics on logged runs
// ---------------------------------------------------------------------------

fn check_gamma_trace(record: &TrialRecord, alpha: f64, beta: f64) -> std::result::Result<(), String> {
    let gammas: Vec<f64> = record.reports.iter().map(|r| r.gamma).collect();
    for (i, &g) in gammas.iter().enumerate() {
        if !(0.0..=1.0).contains(&g) {
            return Err(format!("gamma {g} out of [0,1] at generation {}", i + 1));
        }
    }
    for w in gammas.windows(2) {
        let (prev, next) = (w[0], w[1]);
        let down = (prev - beta).clamp(0.0, 1.0);
        let up = (prev + alpha).clamp(0.0, 1.0);
        if next != down && next != up {
            return Err(format!("gamma step {prev} -> {next} is neither -beta nor +alpha (clamped)"));
        }
    }
    Ok(())
}

fn criterion_6(eyal_records: &[&TrialRecord]) -> Check {
    let mut checked = 0;
    for record in eyal_records {
        check_gamma_trace(record, 0.1, 0.1)?;
        checked += record.reports.len();
    }
    Ok(format!(
        "gamma in [0,1] and all steps +/-0.1 (clamped) across {} logged generations in {} runs",
        checked,
        eyal_records.len()
    ))
}

// ---------------------------------------------------------------------------
// criteria 7-9: qualitative reproduction at desk scale
// ---------------------------------------------------------------------------

fn solves(records: &[TrialRecord]) -> usize {
    records.iter().filter(|r| r.trial_score > 0.0).count()
}

fn criterion_7(
    ga: &[TrialRecord],
    ns: &[TrialRecord],
    eyal: &[TrialRecord],
) -> Check {
    let (sg, sn, se) = (solves(ga), solves(ns), solves(eyal));
    let mean_ns = mean(&ns.iter().map(|r| r.trial_score).collect::<Vec<_>>());
    let mean_eyal = mean(&eyal.iter().map(|r| r.trial_score).collect::<Vec<_>>());
    let mut problems = Vec::new();
    if sg > 2 {
        problems.push(format!("GA reached the goal in {sg}/10 (> 2/10)"));
    }
    if sn < 6 {
        problems.push(format!("NS reached the goal in only {sn}/10 (< 6/10)"));
    }
    if se < 6 {
        problems.push(format!("hybrid reached the goal in only {se}/10 (< 6/10)"));
    }
    if mean_eyal < mean_ns {
        problems.push(format!(
            "hybrid mean final best-so-far {mean_eyal:.1} < NS mean {mean_ns:.1}"
        ));
    }
    if problems.is_empty() {
        Ok(format!(
            "GA {sg}/10, NS {sn}/10, hybrid {se}/10 reach the goal; hybrid mean {mean_eyal:.1} >= NS mean {mean_ns:.1}"
        ))
    } else {
        Err(format!(
            "{} (GA {sg}/10, NS {sn}/10, hybrid {se}/10 reach the goal)",
            problems.join("; ")
        ))
    }
}

/// Per-checkpoint forward-filled best-so-far validation values, one inner
/// vector per trial, restricted to checkpoints where every trial has a value.
fn filled_matrix(records: &[TrialRecord], interval: u64, horizon: u64) -> Vec<(u64, Vec<f64>)> {
    let fills: Vec<Vec<(u64, Option<f64>)>> = records
        .iter()
        .map(|r| forward_fill(&r.rows(), interval, horizon, FillStatistic::BestSoFarValidation))
        .collect();
    let n_points = fills[0].len();
    (0..n_points)
        .filter_map(|i| {
            let step = fills[0][i].0;
            let vals: Option<Vec<f64>> = fills.iter().map(|f| f[i].1).collect();
            vals.map(|v| (step, v))
        })
        .collect()
}

/// Training step of the last strict improvement in best-so-far validation.
fn last_improvement_step(record: &TrialRecord) -> u64 {
    let mut best = f64::NEG_INFINITY;
    let mut step = 0;
    for row in record.rows() {
        if row.validation_score > best {
            best = row.validation_score;
            step = row.training_steps_used;
        }
    }
    step
}

fn criterion_8(
    ga: &[TrialRecord],
    ns: &[TrialRecord],
    eyal: &[TrialRecord],
) -> Check {
    let interval = 10_000;
    let half_budget = 1_000_000;
    let ga_fill = filled_matrix(ga, interval, half_budget);
    let eyal_fill = filled_matrix(eyal, interval, half_budget);
    let common: Vec<u64> = ga_fill
        .iter()
        .map(|(s, _)| *s)
        .filter(|s| eyal_fill.iter().any(|(t, _)| t == s))
        .collect();
    if common.is_empty() {
        return Err("no common checkpoints before half budget".into());
    }
    let mut worst: Option<(u64, f64)> = None;
    for &step in &common {
        let gv = &ga_fill.iter().find(|(s, _)| *s == step).unwrap().1;
        let ev = &eyal_fill.iter().find(|(s, _)| *s == step).unwrap().1;
        let (mg, me) = (mean(gv), mean(ev));
        let pooled = (sem(gv).powi(2) + sem(ev).powi(2)).sqrt();
        let slack = me - (mg - pooled);
        if worst.map_or(true, |(_, w)| slack < w) {
            worst = Some((step, slack));
        }
        if slack < 0.0 {
            return Err(format!(
                "hybrid mean {me:.1} below GA mean {mg:.1} minus pooled SE {pooled:.1} at step {step}"
            ));
        }
    }

    let late: usize = ns
        .iter()
        .zip(eyal)
        .filter(|(n, e)| last_improvement_step(e) > last_improvement_step(n))
        .count();
    if late < 5 {
        return Err(format!(
            "hybrid improved after NS's last improvement in only {late}/10 trials (< 5)"
        ));
    }
    let (step, slack) = worst.unwrap();
    Ok(format!(
        "hybrid >= GA - pooled SE at all {} checkpoints (tightest slack {slack:.1} at step {step}); late improvement in {late}/10 trials",
        common.len()
    ))
}

fn criterion_9(
    adaptive_075: &[TrialRecord],
) -> Check {
    let mut summary = String::new();
    for gamma0 in [0.25, 0.5, 0.75] {
        let run_arm = |alpha: f64, beta: f64| -> Vec<TrialRecord> {
            (1..=10)
                .map(|seed| {
                    let mut s = desk_settings(Algorithm::Eyal, RewardMode::Sparse, seed);
                    s.evo.gamma0 = gamma0;
                    s.evo.alpha = alpha;
                    s.evo.beta = beta;
                    run_trial(&s).expect("trial runs")
                })
                .collect()
        };
        let adaptive: Vec<TrialRecord> = if gamma0 == 0.75 {
            adaptive_075.to_vec()
        } else {
            run_arm(0.1, 0.1)
        };
        let fixed = run_arm(0.0, 0.0);
        let av: Vec<f64> = adaptive.iter().map(|r| r.trial_score).collect();
        let fv: Vec<f64> = fixed.iter().map(|r| r.trial_score).collect();
        let pooled = (sem(&av).powi(2) + sem(&fv).powi(2)).sqrt();
        if mean(&av) < mean(&fv) - pooled {
            return Err(format!(
                "at gamma0={gamma0}: adaptive mean {:.1} < fixed mean {:.1} minus pooled SE {pooled:.1}",
                mean(&av),
                mean(&fv)
            ));
        }
        let _ = write!(
            summary,
            "g0={gamma0}: adaptive {:.1} vs fixed {:.1} (SE {pooled:.1}); ",
            mean(&av),
            mean(&fv)
        );
    }
    Ok(summary.trim_end_matches("; ").to_string())
}

// ---------------------------------------------------------------------------
// criterion 10: budget accounting
// ---------------------------------------------------------------------------

fn criterion_10(records: &[&TrialRecord]) -> Check {
    let expected_rollouts = {
        let evo = EvoConfig::default();
        (evo.elite_candidates * evo.elite_robustness) as u64
    };
    let mut generations = 0u64;
    for record in records {
        let rows = record.rows();
        let mut cumulative = 0u64;
        for row in &rows {
            cumulative += row.population_steps + row.elite_steps;
            if cumulative != row.training_steps_used {
                return Err(format!(
                    "recomputed steps {cumulative} != logged {} at generation {} (seed {})",
                    row.training_steps_used, row.generation, record.trial_seed
                ));
            }
            if row.elite_rollouts != expected_rollouts {
                return Err(format!(
                    "elite rollouts {} != candidates*robustness = {expected_rollouts} at generation {}",
                    row.elite_rollouts, row.generation
                ));
            }
            generations += 1;
        }
    }
    Ok(format!(
        "step ledger exact and elite extraction charged {expected_rollouts} rollouts in every one of {generations} generations across {} trials",
        records.len()
    ))
}

// ---------------------------------------------------------------------------
// runner
// ---------------------------------------------------------------------------

#[test]
fn acceptance_criteria() {
    let mut failures = Vec::new();
    let mut report = |number: u32, name: &str, outcome: Check| match outcome {
        Ok(detail) => println!("PASS criterion {number} ({name}): {detail}"),
        Err(detail) => {
            println!("FAIL criterion {number} ({name}): {detail}");
            failures.push(format!("criterion {number} ({name}): {detail}"));
        }
    };

    report(1, "reward exactness", criterion_1());
    report(2, "operator oracle equivalence", criterion_2());
    report(3, "mutation statistics", criterion_3());
    report(4, "hybrid reduction to GA and NS", criterion_4());
    report(5, "determinism across worker counts", criterion_5());

    // shared trial batches for the statistical criteria
    struct Batch {
        ga: Vec<TrialRecord>,
        ns: Vec<TrialRecord>,
        eyal: Vec<TrialRecord>,
    }
    let batch = |env| Batch {
        ga: run_batch(Algorithm::Ga, env, 1..=10),
        ns: run_batch(Algorithm::Ns, env, 1..=10),
        eyal: run_batch(Algorithm::Eyal, env, 1..=10),
    };
    let dec = batch(RewardMode::Deceptive);
    let sparse = batch(RewardMode::Sparse);

    let eyal_logs: Vec<&TrialRecord> = dec.eyal.iter().chain(&sparse.eyal).collect();
    let all_logs: Vec<&TrialRecord> = [&dec, &sparse]
        .into_iter()
        .flat_map(|b| b.ga.iter().chain(&b.ns).chain(&b.eyal))
        .collect();

    report(6, "gamma dynamics on logs", criterion_6(&eyal_logs));
    report(
        7,
        "deceptive-maze qualitative reproduction",
        criterion_7(&dec.ga, &dec.ns, &dec.eyal),
    );
    report(
        8,
        "sparse-maze qualitative reproduction",
        criterion_8(&sparse.ga, &sparse.ns, &sparse.eyal),
    );
    report(
        9,
        "adaptive-vs-fixed exploration ablation",
        criterion_9(&sparse.eyal),
    );
    report(10, "budget accounting", criterion_10(&all_logs));

    assert!(
        failures.is_empty(),
        "{} acceptance criteria failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}
