//! Neuroevolution of flat-vector MLP policies in a 2D point maze.
//!
//! The crate bundles three evolutionary loops — a genetic algorithm, novelty
//! search, and an adaptive explore-exploit hybrid that shifts population slots
//! between a novelty-selected niche and a fitness-selected niche — together
//! with the maze simulator, rollout machinery, and the experiment harness that
//! aggregates trial logs into mean/CI curves.

pub mod error;
pub mod evo;
pub mod harness;
pub mod maze;
pub mod novelty;
pub mod policy;
pub mod rollout;
pub mod seeds;

pub use error::Error;
