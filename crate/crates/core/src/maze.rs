//! Deterministic 2D point-mass maze with a pocket obstacle.
//!
//! The canonical geometry places a U-shaped wall (opening toward the start)
//! between start and goal, so greedily descending toward the goal traps the
//! agent in the pocket. Two reward functions are provided: `Sparse` pays -1
//! per step until the goal is reached, `Deceptive` pays the negative distance
//! to the goal per step and +10,000 on arrival.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardMode {
    Sparse,
    Deceptive,
}

impl std::str::FromStr for RewardMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(RewardMode::Sparse),
            "deceptive" => Ok(RewardMode::Deceptive),
            other => Err(Error::InvalidConfig(format!("unknown reward mode {other:?}"))),
        }
    }
}

/// Axis-aligned arena rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.xmin && p[0] <= self.xmax && p[1] >= self.ymin && p[1] <= self.ymax
    }

    /// Half of the larger side; the observation normalizer.
    pub fn half_extent(&self) -> f64 {
        0.5 * (self.xmax - self.xmin).max(self.ymax - self.ymin)
    }
}

/// Axis-aligned wall segment inflated by half its thickness on every side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wall {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub thickness: f64,
}

impl Wall {
    /// Solid rectangle occupied by the wall: (xmin, xmax, ymin, ymax).
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let h = 0.5 * self.thickness;
        (
            self.x0.min(self.x1) - h,
            self.x0.max(self.x1) + h,
            self.y0.min(self.y1) - h,
            self.y0.max(self.y1) + h,
        )
    }

    /// Strict interior test; points on the face are legal.
    pub fn contains_interior(&self, p: [f64; 2]) -> bool {
        let (xmin, xmax, ymin, ymax) = self.bounds();
        p[0] > xmin && p[0] < xmax && p[1] > ymin && p[1] < ymax
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MazeConfig {
    pub arena: Rect,
    pub walls: Vec<Wall>,
    pub start: [f64; 2],
    pub goal: [f64; 2],
    pub goal_radius: f64,
    pub step_size: f64,
    pub max_steps: usize,
    pub reward_mode: RewardMode,
    pub start_jitter: f64,
}

impl MazeConfig {
    /// The canonical pocket maze: arena [-5,5]^2, start (0,3), goal (0,-3),
    /// U-shaped obstacle opening upward between them.
    pub fn canonical(reward_mode: RewardMode) -> Self {
        MazeConfig {
            arena: Rect {
                xmin: -5.0,
                xmax: 5.0,
                ymin: -5.0,
                ymax: 5.0,
            },
            walls: vec![
                // pocket bottom
                Wall {
                    x0: -2.0,
                    y0: 1.0,
                    x1: 2.0,
                    y1: 1.0,
                    thickness: 0.2,
                },
                // left arm
                Wall {
                    x0: -2.0,
                    y0: 1.0,
                    x1: -2.0,
                    y1: 2.5,
                    thickness: 0.2,
                },
                // right arm
                Wall {
                    x0: 2.0,
                    y0: 1.0,
                    x1: 2.0,
                    y1: 2.5,
                    thickness: 0.2,
                },
            ],
            start: [0.0, 3.0],
            goal: [0.0, -3.0],
            goal_radius: 0.5,
            step_size: 0.05,
            max_steps: 500,
            reward_mode,
            start_jitter: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.arena.xmin >= self.arena.xmax || self.arena.ymin >= self.arena.ymax {
            return Err(Error::InvalidConfig("arena rectangle is degenerate".into()));
        }
        if self.goal_radius <= 0.0 {
            return Err(Error::InvalidConfig("goal_radius must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be positive".into()));
        }
        if self.step_size <= 0.0 {
            return Err(Error::InvalidConfig("step_size must be positive".into()));
        }
        if self.start_jitter < 0.0 {
            return Err(Error::InvalidConfig("start_jitter must be >= 0".into()));
        }
        for (name, p) in [("start", self.start), ("goal", self.goal)] {
            if !self.is_legal(p) {
                return Err(Error::InvalidConfig(format!(
                    "{name} {p:?} is outside the arena or inside a wall"
                )));
            }
        }
        Ok(())
    }

    pub fn is_legal(&self, p: [f64; 2]) -> bool {
        self.arena.contains(p) && !self.walls.iter().any(|w| w.contains_interior(p))
    }

    /// Observation length produced by [`observe`].
    pub const OBS_DIM: usize = 4;

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: MazeConfig =
            toml::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvState {
    pub position: [f64; 2],
    pub step_index: usize,
    pub done: bool,
    pub reached_goal: bool,
}

/// Ordered record of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub observations: Vec<Vec<f64>>,
    pub actions: Vec<Vec<f64>>,
    pub rewards: Vec<f64>,
    pub final_position: [f64; 2],
    pub length: usize,
    pub total_reward: f64,
}

/// Place the agent at the start plus a uniform-in-disk jitter, re-sampled
/// until the position is legal.
pub fn reset<R: Rng + ?Sized>(config: &MazeConfig, rng: &mut R) -> (EnvState, Vec<f64>) {
    let position = if config.start_jitter == 0.0 {
        config.start
    } else {
        loop {
            let dx = rng.random_range(-config.start_jitter..=config.start_jitter);
            let dy = rng.random_range(-config.start_jitter..=config.start_jitter);
            if dx * dx + dy * dy > config.start_jitter * config.start_jitter {
                continue;
            }
            let p = [config.start[0] + dx, config.start[1] + dy];
            if config.is_legal(p) {
                break p;
            }
        }
    };
    let state = EnvState {
        position,
        step_index: 0,
        done: false,
        reached_goal: false,
    };
    let obs = observe(config, &state);
    (state, obs)
}

/// Per-step reward for the given mode.
///
/// Deceptive: -distance to goal, or +10,000 on the step that reaches it.
/// Sparse: -1 per step, 0 on the step that reaches the goal.
pub fn compute_reward(
    mode: RewardMode,
    position_after: [f64; 2],
    reached_goal: bool,
    goal: [f64; 2],
) -> f64 {
    match mode {
        RewardMode::Deceptive => {
            if reached_goal {
                10_000.0
            } else {
                -dist(position_after, goal)
            }
        }
        RewardMode::Sparse => {
            if reached_goal {
                0.0
            } else {
                -1.0
            }
        }
    }
}

pub struct StepOutcome {
    pub state: EnvState,
    pub reward: f64,
    pub obs: Vec<f64>,
    pub done: bool,
}

/// Advance one timestep with sliding (per-axis) collision: the x move is
/// attempted first, then the y move; a move that would land inside a wall or
/// outside the arena is cancelled on that axis only.
pub fn step(config: &MazeConfig, state: &EnvState, action: [f64; 2]) -> Result<StepOutcome> {
    if state.done {
        return Err(Error::EpisodeDone);
    }
    let mut pos = state.position;
    let dx = action[0].clamp(-1.0, 1.0) * config.step_size;
    let dy = action[1].clamp(-1.0, 1.0) * config.step_size;

    let px = [pos[0] + dx, pos[1]];
    if config.is_legal(px) {
        pos = px;
    }
    let py = [pos[0], pos[1] + dy];
    if config.is_legal(py) {
        pos = py;
    }

    let reached_goal = dist(pos, config.goal) <= config.goal_radius;
    let step_index = state.step_index + 1;
    let done = reached_goal || step_index == config.max_steps;
    let reward = compute_reward(config.reward_mode, pos, reached_goal, config.goal);
    let next = EnvState {
        position: pos,
        step_index,
        done,
        reached_goal,
    };
    let obs = observe(config, &next);
    Ok(StepOutcome {
        state: next,
        reward,
        obs,
        done,
    })
}

/// 4-vector observation: (x/s, y/s, (gx-x)/s, (gy-y)/s) with s the arena
/// half-extent. Components stay in [-2, 2].
pub fn observe(config: &MazeConfig, state: &EnvState) -> Vec<f64> {
    let s = config.arena.half_extent();
    let [x, y] = state.position;
    let [gx, gy] = config.goal;
    vec![x / s, y / s, (gx - x) / s, (gy - y) / s]
}

pub fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}
