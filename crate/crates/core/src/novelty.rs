//! Behavior characterization, k-nearest-neighbor novelty, and the
//! probabilistically populated archive.

use rand::Rng;
use std::path::Path;

use crate::error::{Error, Result};
use crate::maze::Trajectory;

/// Low-dimensional summary of a trajectory; the space novelty is measured in.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorDescriptor(pub Vec<f64>);

impl BehaviorDescriptor {
    pub fn distance(&self, other: &BehaviorDescriptor) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// How a trajectory is summarized into a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcMode {
    /// The agent's final (x, y) position.
    MazeLastPosition,
    /// The last observation vector with the normalized episode length appended.
    GenericLastObsTime,
}

/// Append-only store of past descriptors; each candidate is inserted
/// independently with probability `insert_probability`.
#[derive(Debug, Clone, Default)]
pub struct NoveltyArchive {
    descriptors: Vec<BehaviorDescriptor>,
    pub insert_probability: f64,
}

impl NoveltyArchive {
    pub fn new(insert_probability: f64) -> Self {
        NoveltyArchive {
            descriptors: Vec::new(),
            insert_probability,
        }
    }

    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }

    pub fn descriptors(&self) -> &[BehaviorDescriptor] {
        &self.descriptors
    }

    /// One descriptor per row.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| {
            Error::io(path, std::io::Error::other(e))
        })?;
        for bc in &self.descriptors {
            let row: Vec<String> = bc.0.iter().map(|v| v.to_string()).collect();
            w.write_record(&row)
                .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

/// Summarize a trajectory.
pub fn behavior_characteristic(
    traj: &Trajectory,
    mode: BcMode,
    max_steps: usize,
) -> BehaviorDescriptor {
    match mode {
        BcMode::MazeLastPosition => {
            BehaviorDescriptor(vec![traj.final_position[0], traj.final_position[1]])
        }
        BcMode::GenericLastObsTime => {
            let mut v = traj
                .observations
                .last()
                .cloned()
                .unwrap_or_default();
            v.push(traj.length as f64 / max_steps as f64);
            BehaviorDescriptor(v)
        }
    }
}

/// Mean Euclidean distance to the k nearest reference points, where the
/// reference set for individual i is the archive plus all population peers
/// except i. An empty reference set scores 0; fewer than k references use
/// them all.
pub fn novelty_scores(
    population_bcs: &[BehaviorDescriptor],
    archive: &NoveltyArchive,
    k: usize,
) -> Vec<f64> {
    let mut scores = Vec::with_capacity(population_bcs.len());
    let mut dists: Vec<f64> =
        Vec::with_capacity(archive.len() + population_bcs.len().saturating_sub(1));
    for (i, bc) in population_bcs.iter().enumerate() {
        dists.clear();
        dists.extend(archive.descriptors().iter().map(|a| bc.distance(a)));
        dists.extend(
            population_bcs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, peer)| bc.distance(peer)),
        );
        if dists.is_empty() {
            scores.push(0.0);
            continue;
        }
        let kk = k.min(dists.len());
        dists.select_nth_unstable_by(kk - 1, |a, b| a.total_cmp(b));
        // sum in ascending order so the result is bit-identical to a
        // sort-everything reference
        dists[..kk].sort_by(|a, b| a.total_cmp(b));
        scores.push(dists[..kk].iter().sum::<f64>() / kk as f64);
    }
    scores
}

/// Append each descriptor independently with the archive's insert
/// probability. Always consumes one uniform draw per candidate so RNG
/// consumption does not depend on outcomes.
pub fn update_archive<R: Rng + ?Sized>(
    archive: &mut NoveltyArchive,
    population_bcs: &[BehaviorDescriptor],
    rng: &mut R,
) {
    for bc in population_bcs {
        let u: f64 = rng.random();
        if u < archive.insert_probability {
            archive.descriptors.push(bc.clone());
        }
    }
}
