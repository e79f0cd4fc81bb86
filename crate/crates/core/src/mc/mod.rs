//! Monte Carlo simulation of the time-inhomogeneous chain, its additive
//! functional and the discounted passage functionals.
//!
//! Paths are driven by per-path counter-based streams keyed by
//! `(seed, path_index)`, so every estimate is a deterministic function of
//! the seed and path count no matter how many worker threads run.

mod estimate;
mod passage;
mod path;

pub use estimate::{estimate_functional, occupation_distribution, EstimatorResult};
pub use passage::{passage_functional, Passage, Sign};
pub use path::{simulate_path, PathSample, PathWalker, SimConfig, Sojourn, DEFAULT_HORIZON_FACTOR};
