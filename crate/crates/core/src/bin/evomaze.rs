//! Command-line experiment driver.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use evomaze::evo::Algorithm;
use evomaze::harness::{
    self, AggregateCurve, ExperimentConfig, FillStatistic, TrialRow, TrialSettings,
};
use evomaze::maze::{MazeConfig, RewardMode};

#[derive(Parser)]
#[command(name = "evomaze", version, about = "Neuroevolution experiments in a deceptive point maze")]
struct Cli {
    /// Worker threads for rollout evaluation (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Ga,
    Ns,
    Eyal,
    Rs,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Algorithm {
        match a {
            AlgorithmArg::Ga => Algorithm::Ga,
            AlgorithmArg::Ns => Algorithm::Ns,
            AlgorithmArg::Eyal => Algorithm::Eyal,
            AlgorithmArg::Rs => Algorithm::Rs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvArg {
    Sparse,
    Deceptive,
}

impl From<EnvArg> for RewardMode {
    fn from(e: EnvArg) -> RewardMode {
        match e {
            EnvArg::Sparse => RewardMode::Sparse,
            EnvArg::Deceptive => RewardMode::Deceptive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    /// 2e6 training steps, 10 trials, 16x16 policy network.
    Desk,
    /// 5e7 training steps, 40 trials, 256x256 policy network.
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatisticArg {
    BestSoFarValidation,
    EliteFitness,
}

impl From<StatisticArg> for FillStatistic {
    fn from(s: StatisticArg) -> FillStatistic {
        match s {
            StatisticArg::BestSoFarValidation => FillStatistic::BestSoFarValidation,
            StatisticArg::EliteFitness => FillStatistic::EliteFitness,
        }
    }
}

/// Hyperparameter overrides shared by `run` and `experiment`.
#[derive(Args)]
struct HyperArgs {
    /// Training-step budget.
    #[arg(long)]
    max_steps: Option<u64>,
    /// Initial exploration rate.
    #[arg(long)]
    gamma: Option<f64>,
    /// Exploration growth rate (on stagnation).
    #[arg(long)]
    alpha: Option<f64>,
    /// Exploration decay rate (on improvement).
    #[arg(long)]
    beta: Option<f64>,
    /// Mutation power (variance of the Gaussian mutation noise).
    #[arg(long)]
    sigma2: Option<f64>,
    /// Population size including the elite slot.
    #[arg(long)]
    popsize: Option<usize>,
    /// Truncation size for survivor selection.
    #[arg(long)]
    truncation: Option<usize>,
    /// Validation episodes per generation.
    #[arg(long)]
    validation_episodes: Option<usize>,
    /// Neighbourhood size for the k-NN novelty score.
    #[arg(long)]
    novelty_k: Option<usize>,
    /// Per-descriptor probability of insertion into the novelty archive.
    #[arg(long)]
    archive_pr: Option<f64>,
    /// Hidden layer widths, e.g. 16,16.
    #[arg(long, value_delimiter = ',')]
    hidden_dims: Option<Vec<usize>>,
    /// Maze geometry file (TOML); canonical pocket maze when absent.
    #[arg(long)]
    maze_config: Option<PathBuf>,
}

impl HyperArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) -> evomaze::error::Result<()> {
        if let Some(v) = self.max_steps {
            cfg.evo.max_training_steps = v;
        }
        if let Some(v) = self.gamma {
            cfg.evo.gamma0 = v;
        }
        if let Some(v) = self.alpha {
            cfg.evo.alpha = v;
        }
        if let Some(v) = self.beta {
            cfg.evo.beta = v;
        }
        if let Some(v) = self.sigma2 {
            cfg.evo.mutation_power = v;
        }
        if let Some(v) = self.popsize {
            cfg.evo.popsize = v;
        }
        if let Some(v) = self.truncation {
            cfg.evo.truncation = v;
        }
        if let Some(v) = self.novelty_k {
            cfg.evo.novelty_k = v;
        }
        if let Some(v) = self.archive_pr {
            cfg.evo.archive_pr = v;
        }
        if let Some(v) = self.validation_episodes {
            cfg.validation_episodes = v;
        }
        if let Some(v) = &self.hidden_dims {
            cfg.hidden_dims = v.clone();
        }
        if let Some(path) = &self.maze_config {
            cfg.maze = Some(MazeConfig::load(path)?);
        }
        cfg.evo.validate()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a single trial and write its CSV log.
    Run {
        #[arg(long, value_enum)]
        algorithm: AlgorithmArg,
        #[arg(long, value_enum)]
        env: EnvArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ProfileArg::Desk)]
        profile: ProfileArg,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Also dump the novelty archive to CSV (ns/eyal only).
        #[arg(long)]
        dump_archive: bool,
        #[command(flatten)]
        hyper: HyperArgs,
    },
    /// Run a multi-trial sweep over algorithms.
    Experiment {
        /// Experiment config file (TOML); flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Algorithms to sweep (repeat or comma-separate).
        #[arg(long, value_enum, value_delimiter = ',')]
        algorithm: Vec<AlgorithmArg>,
        #[arg(long, value_enum)]
        env: Option<EnvArg>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = ProfileArg::Desk)]
        profile: ProfileArg,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        interval: u64,
        #[command(flatten)]
        hyper: HyperArgs,
    },
    /// Aggregate trial CSVs into per-algorithm mean/CI curve CSVs.
    Aggregate {
        /// Trial CSV files, or a directory containing them.
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        interval: u64,
        #[arg(long, value_enum, default_value_t = StatisticArg::BestSoFarValidation)]
        statistic: StatisticArg,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Plot curve CSVs into one SVG.
    Plot {
        /// Curve CSV files; legend labels come from file stems.
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "out/plot.svg")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: could not configure {workers} workers: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn base_config(profile: ProfileArg, env: RewardMode) -> ExperimentConfig {
    match profile {
        ProfileArg::Desk => ExperimentConfig::desk(env),
        ProfileArg::Paper => ExperimentConfig::paper(env),
    }
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Run {
            algorithm,
            env,
            seed,
            profile,
            out_dir,
            dump_archive,
            hyper,
        } => {
            let env: RewardMode = env.into();
            let algorithm: Algorithm = algorithm.into();
            let mut cfg = base_config(profile, env);
            hyper.apply(&mut cfg)?;
            std::fs::create_dir_all(&out_dir)?;
            let env_s = match env {
                RewardMode::Sparse => "sparse",
                RewardMode::Deceptive => "deceptive",
            };
            let out_path = out_dir.join(format!(
                "trial_{}_{}_seed{}.csv",
                algorithm.as_str(),
                env_s,
                seed
            ));
            let settings = TrialSettings {
                algorithm,
                env,
                trial_seed: seed,
                evo: cfg.evo.clone(),
                maze: cfg.maze_config(),
                hidden_dims: cfg.hidden_dims.clone(),
                validation_episodes: cfg.validation_episodes,
                out_path: Some(out_path.clone()),
                record_wall_time: true,
            };
            let record = harness::run_trial(&settings)?;
            if dump_archive && algorithm.uses_novelty() {
                // replay the trial's training loop (same seed, no validation)
                // to reconstruct the archive for the dump
                let arch = settings.architecture()?;
                let mut driver = evomaze::evo::EvoDriver::new(
                    algorithm,
                    arch,
                    settings.maze.clone(),
                    settings.evo.clone(),
                    seed,
                )?;
                while driver.run_generation()?.is_some() {}
                driver.archive.write_csv(&out_dir.join(format!(
                    "archive_{}_{}_seed{}.csv",
                    algorithm.as_str(),
                    env_s,
                    seed
                )))?;
            }
            println!(
                "trial {} {} seed {}: {} generations, {} training steps, score {}",
                algorithm.as_str(),
                env_s,
                seed,
                record.reports.len(),
                record.reports.last().map_or(0, |r| r.training_steps_used),
                record.trial_score
            );
            println!("wrote {}", out_path.display());
            Ok(())
        }
        Command::Experiment {
            config,
            algorithm,
            env,
            trials,
            seed,
            profile,
            out_dir,
            interval,
            hyper,
        } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(&path)?,
                None => base_config(profile, env.map(Into::into).unwrap_or(RewardMode::Deceptive)),
            };
            if let Some(env) = env {
                cfg.env = env.into();
            }
            if !algorithm.is_empty() {
                cfg.algorithms = algorithm.into_iter().map(Into::into).collect();
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed0 = s;
            }
            hyper.apply(&mut cfg)?;
            cfg.interval = interval;
            cfg.out_dir = Some(out_dir.clone());

            let records = harness::run_experiment(&cfg)?;
            println!("completed {} trials into {}", records.len(), out_dir.display());

            let curves = harness::aggregate_records(
                &records,
                cfg.interval,
                FillStatistic::BestSoFarValidation,
            )?;
            for (alg, curve) in &curves {
                let path = out_dir.join(format!("curve_{}.csv", alg.as_str()));
                harness::emit_curve_csv(curve, &path)?;
                println!("wrote {}", path.display());
            }
            let labelled: Vec<(String, AggregateCurve)> = curves
                .into_iter()
                .map(|(alg, c)| (alg.as_str().to_string(), c))
                .collect();
            if !labelled.is_empty() {
                let plot = out_dir.join("curves.svg");
                harness::emit_plot(&labelled, &plot)?;
                println!("wrote {}", plot.display());
            }
            Ok(())
        }
        Command::Aggregate {
            inputs,
            interval,
            statistic,
            out_dir,
        } => {
            let mut files = Vec::new();
            for input in inputs {
                if input.is_dir() {
                    let mut entries: Vec<PathBuf> = std::fs::read_dir(&input)?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| {
                            p.extension().is_some_and(|e| e == "csv")
                                && p.file_name()
                                    .and_then(|n| n.to_str())
                                    .is_some_and(|n| n.starts_with("trial_"))
                        })
                        .collect();
                    entries.sort();
                    files.extend(entries);
                } else {
                    files.push(input);
                }
            }
            if files.is_empty() {
                return Err("no trial CSVs to aggregate".into());
            }
            let mut groups: BTreeMap<&'static str, (u64, Vec<Vec<TrialRow>>)> = BTreeMap::new();
            for file in &files {
                let (alg, _env, _seed, max_steps, rows) = harness::parse_trial_csv(file)?;
                let entry = groups.entry(alg.as_str()).or_insert((0, Vec::new()));
                entry.0 = entry.0.max(max_steps);
                entry.1.push(rows);
            }
            std::fs::create_dir_all(&out_dir)?;
            for (alg, (horizon, trials)) in &groups {
                let curve = harness::aggregate(trials, interval, *horizon, statistic.into())?;
                let path = out_dir.join(format!("curve_{alg}.csv"));
                harness::emit_curve_csv(&curve, &path)?;
                println!("wrote {} ({} trials)", path.display(), trials.len());
            }
            Ok(())
        }
        Command::Plot { inputs, out } => {
            if inputs.is_empty() {
                return Err("no curve CSVs to plot".into());
            }
            let mut curves = Vec::new();
            for input in &inputs {
                let label = input
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("curve")
                    .trim_start_matches("curve_")
                    .to_string();
                curves.push((label, harness::parse_curve_csv(input)?));
            }
            if let Some(parent) = out.parent() {
                std::fs::create_dir_all(parent)?;
            }
            harness::emit_plot(&curves, &out)?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}
