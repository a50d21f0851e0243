//! Experiment driver: trials, forward-fill curve aggregation, confidence
//! intervals, and CSV/SVG emission.
//!
//! Generation boundaries fall at different training-step counts in every
//! trial, so curves are aligned by splitting the x-axis into fixed intervals
//! and forward-filling each trial's latest report to those points before
//! averaging.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::evo::{Algorithm, EvoConfig, EvoDriver, GenerationReport};
use crate::maze::{MazeConfig, RewardMode};
use crate::policy::{Architecture, OutputMode};
use crate::rollout::validate;

/// Everything needed to run one trial.
#[derive(Debug, Clone)]
pub struct TrialSettings {
    pub algorithm: Algorithm,
    pub env: RewardMode,
    pub trial_seed: u64,
    pub evo: EvoConfig,
    pub maze: MazeConfig,
    pub hidden_dims: Vec<usize>,
    pub validation_episodes: usize,
    /// When set, the trial CSV is appended row by row as generations finish.
    pub out_path: Option<PathBuf>,
    /// Record real wall time per generation; off for byte-reproducible logs.
    pub record_wall_time: bool,
}

impl TrialSettings {
    pub fn new(algorithm: Algorithm, env: RewardMode, trial_seed: u64) -> Self {
        TrialSettings {
            algorithm,
            env,
            trial_seed,
            evo: EvoConfig::default(),
            maze: MazeConfig::canonical(env),
            hidden_dims: vec![256, 256],
            validation_episodes: 100,
            out_path: None,
            record_wall_time: true,
        }
    }

    pub fn architecture(&self) -> Result<Architecture> {
        Architecture::new(
            MazeConfig::OBS_DIM,
            self.hidden_dims.clone(),
            2,
            OutputMode::ContinuousBounded,
        )
    }
}

/// One CSV row of a trial log.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub generation: u64,
    pub training_steps_used: u64,
    pub elite_fitness: f64,
    pub gamma: f64,
    pub validation_score: f64,
    pub wall_time_s: f64,
    pub population_steps: u64,
    pub elite_steps: u64,
    pub elite_rollouts: u64,
}

/// Full per-trial log.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub algorithm: Algorithm,
    pub environment: RewardMode,
    pub trial_seed: u64,
    pub max_training_steps: u64,
    pub reports: Vec<GenerationReport>,
    pub validation_scores: Vec<f64>,
    /// Highest validation score of any generation's elite.
    pub trial_score: f64,
}

impl TrialRecord {
    pub fn rows(&self) -> Vec<TrialRow> {
        self.reports
            .iter()
            .zip(&self.validation_scores)
            .map(|(r, &v)| TrialRow {
                generation: r.generation,
                training_steps_used: r.training_steps_used,
                elite_fitness: r.elite_fitness,
                gamma: r.gamma,
                validation_score: v,
                wall_time_s: r.wall_time.as_secs_f64(),
                population_steps: r.population_steps,
                elite_steps: r.elite_steps,
                elite_rollouts: r.elite_rollouts,
            })
            .collect()
    }
}

const TRIAL_HEADER: &str = "generation,training_steps_used,elite_fitness,gamma,validation_score,wall_time_s,population_steps,elite_steps,elite_rollouts";

fn trial_meta_line(algorithm: Algorithm, env: RewardMode, seed: u64, max_steps: u64) -> String {
    let env_s = match env {
        RewardMode::Sparse => "sparse",
        RewardMode::Deceptive => "deceptive",
    };
    format!(
        "# algorithm={} env={} seed={} max_steps={}",
        algorithm.as_str(),
        env_s,
        seed,
        max_steps
    )
}

fn format_row(row: &TrialRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        row.generation,
        row.training_steps_used,
        row.elite_fitness,
        row.gamma,
        row.validation_score,
        row.wall_time_s,
        row.population_steps,
        row.elite_steps,
        row.elite_rollouts
    )
}

/// Run one complete trial: generations until the budget is exhausted, with a
/// validation pass on every generation's elite.
pub fn run_trial(settings: &TrialSettings) -> Result<TrialRecord> {
    let arch = settings.architecture()?;
    let evo = settings.evo.clone();
    evo.validate()?;
    let mut driver = EvoDriver::new(
        settings.algorithm,
        arch.clone(),
        settings.maze.clone(),
        evo,
        settings.trial_seed,
    )?;

    let mut writer: Option<std::io::BufWriter<std::fs::File>> = match &settings.out_path {
        Some(path) => {
            let file =
                std::fs::File::create(path).map_err(|e| Error::io(path.clone(), e))?;
            let mut w = std::io::BufWriter::new(file);
            writeln!(
                w,
                "{}",
                trial_meta_line(
                    settings.algorithm,
                    settings.env,
                    settings.trial_seed,
                    settings.evo.max_training_steps
                )
            )
            .map_err(|e| Error::io(path.clone(), e))?;
            writeln!(w, "{TRIAL_HEADER}").map_err(|e| Error::io(path.clone(), e))?;
            Some(w)
        }
        None => None,
    };

    let mut reports = Vec::new();
    let mut validation_scores = Vec::new();

    while let Some(mut report) = driver.run_generation()? {
        if !settings.record_wall_time {
            report.wall_time = std::time::Duration::ZERO;
        }
        let score = validate(
            &arch,
            &report.elite_params,
            &settings.maze,
            settings.validation_episodes,
            settings.trial_seed,
            report.generation,
        )?;
        validation_scores.push(score);

        if let Some(w) = writer.as_mut() {
            let row = TrialRow {
                generation: report.generation,
                training_steps_used: report.training_steps_used,
                elite_fitness: report.elite_fitness,
                gamma: report.gamma,
                validation_score: score,
                wall_time_s: report.wall_time.as_secs_f64(),
                population_steps: report.population_steps,
                elite_steps: report.elite_steps,
                elite_rollouts: report.elite_rollouts,
            };
            let path = settings.out_path.as_ref().unwrap();
            writeln!(w, "{}", format_row(&row)).map_err(|e| Error::io(path.clone(), e))?;
            w.flush().map_err(|e| Error::io(path.clone(), e))?;
        }
        reports.push(report);
    }

    let trial_score = validation_scores
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TrialRecord {
        algorithm: settings.algorithm,
        environment: settings.env,
        trial_seed: settings.trial_seed,
        max_training_steps: settings.evo.max_training_steps,
        reports,
        validation_scores,
        trial_score,
    })
}

/// Parse a trial CSV written by [`run_trial`].
pub fn parse_trial_csv(path: &Path) -> Result<(Algorithm, RewardMode, u64, u64, Vec<TrialRow>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let meta = lines
        .next()
        .ok_or_else(|| Error::parse(path, "empty file"))?;
    if !meta.starts_with('#') {
        return Err(Error::parse(path, "missing metadata line"));
    }
    let mut algorithm = None;
    let mut env = None;
    let mut seed = None;
    let mut max_steps = None;
    for part in meta.trim_start_matches('#').split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(path, format!("bad metadata token {part:?}")))?;
        match key {
            "algorithm" => algorithm = Some(value.parse::<Algorithm>()?),
            "env" => env = Some(value.parse::<RewardMode>()?),
            "seed" => seed = value.parse::<u64>().ok(),
            "max_steps" => max_steps = value.parse::<u64>().ok(),
            _ => {}
        }
    }
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(path, "missing header"))?;
    if header != TRIAL_HEADER {
        return Err(Error::parse(path, format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::parse(path, format!("bad row {}", i + 3)));
        }
        let parse_err = |what: &str| Error::parse(path, format!("bad {what} in row {}", i + 3));
        rows.push(TrialRow {
            generation: f[0].parse().map_err(|_| parse_err("generation"))?,
            training_steps_used: f[1].parse().map_err(|_| parse_err("steps"))?,
            elite_fitness: f[2].parse().map_err(|_| parse_err("elite_fitness"))?,
            gamma: f[3].parse().map_err(|_| parse_err("gamma"))?,
            validation_score: f[4].parse().map_err(|_| parse_err("validation_score"))?,
            wall_time_s: f[5].parse().map_err(|_| parse_err("wall_time_s"))?,
            population_steps: f[6].parse().map_err(|_| parse_err("population_steps"))?,
            elite_steps: f[7].parse().map_err(|_| parse_err("elite_steps"))?,
            elite_rollouts: f[8].parse().map_err(|_| parse_err("elite_rollouts"))?,
        });
    }
    Ok((
        algorithm.ok_or_else(|| Error::parse(path, "missing algorithm"))?,
        env.ok_or_else(|| Error::parse(path, "missing env"))?,
        seed.ok_or_else(|| Error::parse(path, "missing seed"))?,
        max_steps.ok_or_else(|| Error::parse(path, "missing max_steps"))?,
        rows,
    ))
}

/// Which per-generation statistic a filled series carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillStatistic {
    BestSoFarValidation,
    EliteFitness,
}

/// Forward-fill one trial's reports to every multiple of `interval` up to
/// `horizon`. Points before the first report are `None` and excluded from
/// aggregation.
pub fn forward_fill(
    rows: &[TrialRow],
    interval: u64,
    horizon: u64,
    statistic: FillStatistic,
) -> Vec<(u64, Option<f64>)> {
    // per-generation statistic values in report order
    let mut values = Vec::with_capacity(rows.len());
    let mut best = f64::NEG_INFINITY;
    for row in rows {
        let v = match statistic {
            FillStatistic::BestSoFarValidation => {
                best = best.max(row.validation_score);
                best
            }
            FillStatistic::EliteFitness => row.elite_fitness,
        };
        values.push((row.training_steps_used, v));
    }

    let mut series = Vec::new();
    let mut latest: Option<f64> = None;
    let mut cursor = 0usize;
    let mut point = interval;
    while point <= horizon {
        while cursor < values.len() && values[cursor].0 <= point {
            latest = Some(values[cursor].1);
            cursor += 1;
        }
        series.push((point, latest));
        point += interval;
    }
    series
}

/// Mean with a normal-approximation confidence interval; n = 1 gives a
/// degenerate interval at the mean.
pub fn mean_ci(values: &[f64], level: f64) -> Result<(f64, f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyInput("mean_ci values"));
    }
    let z = if (level - 0.95).abs() < 1e-9 {
        1.96
    } else if (level - 0.99).abs() < 1e-9 {
        2.576
    } else if (level - 0.90).abs() < 1e-9 {
        1.645
    } else {
        return Err(Error::InvalidConfig(format!(
            "unsupported confidence level {level}"
        )));
    };
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Ok((mean, mean, mean));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let half = z * var.sqrt() / n.sqrt();
    Ok((mean, mean - half, mean + half))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub step: u64,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

/// Mean/CI curve over several trials at fixed step intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub interval: u64,
    pub points: Vec<CurvePoint>,
}

/// Aggregate many trials of one algorithm into a mean/CI curve. A point uses
/// only the trials that have data there.
pub fn aggregate(
    trials: &[Vec<TrialRow>],
    interval: u64,
    horizon: u64,
    statistic: FillStatistic,
) -> Result<AggregateCurve> {
    let filled: Vec<Vec<(u64, Option<f64>)>> = trials
        .iter()
        .map(|rows| forward_fill(rows, interval, horizon, statistic))
        .collect();
    let n_points = filled.first().map_or(0, |s| s.len());
    let mut points = Vec::new();
    for i in 0..n_points {
        let step = filled[0][i].0;
        let values: Vec<f64> = filled.iter().filter_map(|s| s[i].1).collect();
        if values.is_empty() {
            continue;
        }
        let (mean, ci_low, ci_high) = mean_ci(&values, 0.95)?;
        points.push(CurvePoint {
            step,
            mean,
            ci_low,
            ci_high,
            n: values.len(),
        });
    }
    Ok(AggregateCurve { interval, points })
}

const CURVE_HEADER: &str = "step,mean,ci_low,ci_high,n";

/// Write a curve CSV: `step,mean,ci_low,ci_high,n`.
pub fn emit_curve_csv(curve: &AggregateCurve, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for p in &curve.points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.step, p.mean, p.ci_low, p.ci_high, p.n
        ));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn parse_curve_csv(path: &Path) -> Result<AggregateCurve> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(path, "empty file"))?;
    if header != CURVE_HEADER {
        return Err(Error::parse(path, format!("unexpected header {header:?}")));
    }
    let mut points = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(Error::parse(path, format!("bad row {line:?}")));
        }
        points.push(CurvePoint {
            step: f[0].parse().map_err(|_| Error::parse(path, "bad step"))?,
            mean: f[1].parse().map_err(|_| Error::parse(path, "bad mean"))?,
            ci_low: f[2].parse().map_err(|_| Error::parse(path, "bad ci_low"))?,
            ci_high: f[3].parse().map_err(|_| Error::parse(path, "bad ci_high"))?,
            n: f[4].parse().map_err(|_| Error::parse(path, "bad n"))?,
        });
    }
    let interval = match points.as_slice() {
        [] | [_] => points.first().map_or(1, |p| p.step),
        [a, b, ..] => b.step - a.step,
    };
    Ok(AggregateCurve { interval, points })
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Render labelled curves with shaded CI bands into a deterministic SVG.
pub fn emit_plot(curves: &[(String, AggregateCurve)], path: &Path) -> Result<()> {
    if curves.is_empty() || curves.iter().all(|(_, c)| c.points.is_empty()) {
        return Err(Error::EmptyInput("curves to plot"));
    }
    let (width, height) = (800.0, 500.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 20.0, 50.0);
    let (pw, ph) = (width - ml - mr, height - mt - mb);

    let mut xmax = 0u64;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, c) in curves {
        for p in &c.points {
            xmax = xmax.max(p.step);
            ymin = ymin.min(p.ci_low);
            ymax = ymax.max(p.ci_high);
        }
    }
    if ymin == ymax {
        ymin -= 1.0;
        ymax += 1.0;
    }
    let pad = 0.05 * (ymax - ymin);
    let (ymin, ymax) = (ymin - pad, ymax + pad);
    let x = |step: u64| ml + pw * step as f64 / xmax as f64;
    let y = |v: f64| mt + ph * (1.0 - (v - ymin) / (ymax - ymin));

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        mt + ph,
        ml + pw,
        mt + ph
    ));
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        mt + ph
    ));
    for i in 0..=5 {
        let step = xmax * i / 5;
        let vx = x(step);
        svg.push_str(&format!(
            "<text x=\"{vx:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{step}</text>\n",
            mt + ph + 18.0
        ));
        let val = ymin + (ymax - ymin) * i as f64 / 5.0;
        let vy = y(val);
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{vy:.2}\" font-size=\"11\" text-anchor=\"end\">{val:.1}</text>\n",
            ml - 6.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">training steps</text>\n",
        ml + pw / 2.0,
        height - 10.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">validation score</text>\n",
        mt + ph / 2.0,
        mt + ph / 2.0
    ));

    for (ci, (label, curve)) in curves.iter().enumerate() {
        if curve.points.is_empty() {
            continue;
        }
        let color = PALETTE[ci % PALETTE.len()];
        // CI band: upper bound forward, lower bound back
        let mut band = String::from("<polygon points=\"");
        for p in &curve.points {
            band.push_str(&format!("{:.2},{:.2} ", x(p.step), y(p.ci_high)));
        }
        for p in curve.points.iter().rev() {
            band.push_str(&format!("{:.2},{:.2} ", x(p.step), y(p.ci_low)));
        }
        band.push_str(&format!("\" fill=\"{color}\" opacity=\"0.15\"/>\n"));
        svg.push_str(&band);

        let mut line = String::from("<polyline points=\"");
        for p in &curve.points {
            line.push_str(&format!("{:.2},{:.2} ", x(p.step), y(p.mean)));
        }
        line.push_str(&format!(
            "\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n"
        ));
        svg.push_str(&line);

        // legend entry
        let ly = mt + 16.0 + 18.0 * ci as f64;
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"14\" height=\"4\" fill=\"{color}\"/>\n",
            ml + 12.0,
            ly - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{ly:.2}\" font-size=\"12\">{label}</text>\n",
            ml + 32.0
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

/// Multi-trial experiment description; also the on-disk config-file format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub env: RewardMode,
    pub trials: usize,
    pub seed0: u64,
    pub interval: u64,
    pub validation_episodes: usize,
    pub hidden_dims: Vec<usize>,
    pub out_dir: Option<PathBuf>,
    pub evo: EvoConfig,
    /// Custom maze geometry; the canonical pocket maze when absent.
    pub maze: Option<MazeConfig>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::desk(RewardMode::Deceptive)
    }
}

impl ExperimentConfig {
    /// Desk-scale profile: a budget and network small enough for a single
    /// workstation. Two hyperparameters shift with the scale: mutation
    /// variance is raised because per-weight noise must be larger on a 16x16
    /// genome to produce behavioral steps comparable to the full-scale
    /// 256x256 one, and truncation is sharpened so the novelty frontier
    /// advances within the much smaller generation count.
    pub fn desk(env: RewardMode) -> Self {
        ExperimentConfig {
            algorithms: vec![Algorithm::Ga, Algorithm::Ns, Algorithm::Eyal],
            env,
            trials: 10,
            seed0: 1,
            interval: 10_000,
            validation_episodes: 100,
            hidden_dims: vec![16, 16],
            evo: EvoConfig {
                max_training_steps: 2_000_000,
                mutation_power: 0.01,
                truncation: 5,
                ..EvoConfig::default()
            },
            maze: None,
            out_dir: None,
        }
    }

    /// Full-scale profile: 40 trials of 5e7 steps with the 256x256 network.
    pub fn paper(env: RewardMode) -> Self {
        ExperimentConfig {
            trials: 40,
            hidden_dims: vec![256, 256],
            evo: EvoConfig {
                max_training_steps: 50_000_000,
                ..EvoConfig::default()
            },
            ..ExperimentConfig::desk(env)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
        cfg.evo.validate()?;
        if let Some(m) = &cfg.maze {
            m.validate()?;
        }
        Ok(cfg)
    }

    pub fn maze_config(&self) -> MazeConfig {
        self.maze
            .clone()
            .unwrap_or_else(|| MazeConfig::canonical(self.env))
    }

    fn trial_settings(&self, algorithm: Algorithm, seed: u64) -> TrialSettings {
        let out_path = self.out_dir.as_ref().map(|d| {
            let env_s = match self.env {
                RewardMode::Sparse => "sparse",
                RewardMode::Deceptive => "deceptive",
            };
            d.join(format!("trial_{}_{}_seed{}.csv", algorithm.as_str(), env_s, seed))
        });
        TrialSettings {
            algorithm,
            env: self.env,
            trial_seed: seed,
            evo: self.evo.clone(),
            maze: self.maze_config(),
            hidden_dims: self.hidden_dims.clone(),
            validation_episodes: self.validation_episodes,
            out_path,
            record_wall_time: true,
        }
    }
}

/// Run every (algorithm, trial) pair. Trial i uses seed `seed0 + i`; a
/// panicking trial is reported and skipped.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.clone(), e))?;
    }
    let mut records = Vec::new();
    for &algorithm in &config.algorithms {
        for i in 0..config.trials {
            let seed = config.seed0 + i as u64;
            let settings = config.trial_settings(algorithm, seed);
            let outcome = std::panic::catch_unwind(|| run_trial(&settings));
            match outcome {
                Ok(Ok(record)) => records.push(record),
                Ok(Err(e)) => {
                    eprintln!(
                        "warning: trial {} seed {} failed: {e}; skipping",
                        algorithm.as_str(),
                        seed
                    );
                }
                Err(_) => {
                    eprintln!(
                        "warning: trial {} seed {} panicked; skipping",
                        algorithm.as_str(),
                        seed
                    );
                }
            }
        }
    }
    Ok(records)
}

/// Group records by algorithm and aggregate each group.
pub fn aggregate_records(
    records: &[TrialRecord],
    interval: u64,
    statistic: FillStatistic,
) -> Result<Vec<(Algorithm, AggregateCurve)>> {
    let mut order: Vec<Algorithm> = Vec::new();
    for r in records {
        if !order.contains(&r.algorithm) {
            order.push(r.algorithm);
        }
    }
    order
        .into_iter()
        .map(|alg| {
            let trials: Vec<Vec<TrialRow>> = records
                .iter()
                .filter(|r| r.algorithm == alg)
                .map(|r| r.rows())
                .collect();
            let horizon = records
                .iter()
                .filter(|r| r.algorithm == alg)
                .map(|r| r.max_training_steps)
                .max()
                .unwrap_or(0);
            aggregate(&trials, interval, horizon, statistic).map(|c| (alg, c))
        })
        .collect()
}

/// Run trials of one settings template in parallel over seeds; results are
/// ordered by seed.
pub fn run_trials_parallel(template: &TrialSettings, seeds: &[u64]) -> Result<Vec<TrialRecord>> {
    seeds
        .par_iter()
        .map(|&seed| {
            let mut s = template.clone();
            s.trial_seed = seed;
            s.out_path = template.out_path.as_ref().map(|p| {
                let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("trial");
                let ext = p.extension().and_then(|e| e.to_str()).unwrap_or("csv");
                p.with_file_name(format!("{stem}_seed{seed}.{ext}"))
            });
            run_trial(&s)
        })
        .collect()
}
