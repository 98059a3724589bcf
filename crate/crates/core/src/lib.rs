//! Top-K spatio-temporal sequential pattern mining.
//!
//! Event-based spatio-temporal data is a set of event types and a set of
//! typed, located, timestamped instances. A following relation `f1 -> f2`
//! holds when instances of `f2` occur with elevated density inside the
//! spatio-temporal neighborhoods of `f1` instances; chains of such relations
//! are sequential patterns, scored by their weakest link (the sequence
//! index). This crate discovers the K most significant patterns with a
//! depth-first miner whose pruning threshold rises dynamically as the top-K
//! ranking fills, and ships the supporting pieces: plane-sweep spatial
//! joins, density-ratio statistics, a brute-force oracle, a synthetic
//! dataset generator and a benchmark harness.
//!
//! ```
//! use stkm_core::{generate, mine_topk, GenConfig, MineConfig, NeighborhoodConfig, Shape};
//!
//! let gen = GenConfig { num_types: 6, num_patterns: 2, pattern_len: 3,
//!                       noise_fraction: 0.1, seed: 7, ..GenConfig::default() };
//! let (dataset, truth) = generate(&gen).unwrap();
//! let neighborhood = NeighborhoodConfig::new(Shape::Cube, 10.0, 10.0).unwrap();
//! let (ranking, stats) = mine_topk(&dataset, &MineConfig::new(5, 3, neighborhood)).unwrap();
//! assert!(ranking.entries().iter().all(|e| e.seq_index > 1.0));
//! assert_eq!(truth.len(), 2);
//! assert!(stats.joins <= stats.expansions);
//! ```
//!
//! With the default `parallel` feature the miner can fan 1-length seeds out
//! across a rayon pool (`MineConfig::parallel`); without it the same call
//! falls back to the sequential path.

pub mod error;
pub mod generator;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod stats;

pub use error::{Error, Result};
pub use generator::{generate, GenConfig};
pub use geometry::{
    is_neighbor, naive_join, neighborhood_volume, plane_sweep_join, JoinResult,
    NeighborhoodConfig, Shape,
};
pub use io::{parse_dataset, write_dataset, GroundTruth, ParsedDataset, RankingReport};
pub use miner::{
    mine_threshold, mine_topk, MineConfig, MineStats, OfferDecision, RankEntry, Ranking,
    DEFAULT_MAX_LEN,
};
pub use model::{Dataset, EventInstance, Pattern, SpaceExtent, TypeId};
pub use oracle::{enumerate_all, topk_reference, EnumeratedPattern};
pub use stats::{density, density_ratio, extend_seq_index, DensityRatioResult};
