//! Benchmark harness: sweeps the ranking capacity K over generated datasets
//! of growing planted-pattern length and reports mean wall time and mean
//! expansion counts per cell. Expansion counts are the hardware-independent
//! signal; wall times depend on the machine.

use std::time::Instant;

use crate::error::Result;
use crate::generator::{generate, GenConfig};
use crate::geometry::{NeighborhoodConfig, Shape};
use crate::miner::{mine_topk, MineConfig};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Planted-pattern lengths to generate datasets for (one dataset each).
    pub ps_values: Vec<usize>,
    /// Ranking capacities swept per dataset.
    pub k_values: Vec<usize>,
    /// Mining repetitions per cell; times are averaged over them.
    pub reps: usize,
    pub min_len: usize,
    pub max_len: usize,
    /// Generator parameters shared by every dataset; `pattern_len` and
    /// `seed` are overridden per row.
    pub base: GenConfig,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ps_values: (2..=6).collect(),
            k_values: (20..=90).step_by(10).collect(),
            reps: 3,
            min_len: 3,
            max_len: crate::miner::DEFAULT_MAX_LEN,
            base: GenConfig::default(),
            seed: 42,
        }
    }
}

/// One table cell: the `(Ps, K)` pair with its means.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub ps: usize,
    pub k: usize,
    pub mean_seconds: f64,
    pub mean_expansions: f64,
    pub reps: usize,
}

pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    run_with_progress(cfg, |_| {})
}

/// Runs the sweep, invoking `progress` after each finished cell. Repetitions
/// run sequentially for timing isolation.
pub fn run_with_progress(
    cfg: &BenchConfig,
    mut progress: impl FnMut(&BenchRow),
) -> Result<Vec<BenchRow>> {
    let reps = cfg.reps.max(1);
    let mut rows = Vec::new();
    for &ps in &cfg.ps_values {
        let gen_cfg = GenConfig {
            pattern_len: ps,
            seed: cfg.seed.wrapping_add(ps as u64),
            ..cfg.base.clone()
        };
        let (data, _) = generate(&gen_cfg)?;
        let neighborhood = NeighborhoodConfig::new(
            Shape::Cube,
            gen_cfg.spatial_radius,
            gen_cfg.temporal_interval,
        )?;
        for &k in &cfg.k_values {
            let mine_cfg = MineConfig {
                max_len: cfg.max_len,
                ..MineConfig::new(k, cfg.min_len, neighborhood)
            };
            let mut total_seconds = 0.0;
            let mut total_expansions = 0u64;
            for _ in 0..reps {
                let start = Instant::now();
                let (_, stats) = mine_topk(&data, &mine_cfg)?;
                total_seconds += start.elapsed().as_secs_f64();
                total_expansions += stats.expansions;
            }
            let row = BenchRow {
                ps,
                k,
                mean_seconds: total_seconds / reps as f64,
                mean_expansions: total_expansions as f64 / reps as f64,
                reps,
            };
            progress(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("ps,k,mean_seconds,mean_expansions,reps\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.ps, row.k, row.mean_seconds, row.mean_expansions, row.reps
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_produces_one_row_per_cell() {
        let cfg = BenchConfig {
            ps_values: vec![2],
            k_values: vec![5, 10],
            reps: 1,
            min_len: 2,
            base: GenConfig {
                num_types: 6,
                num_patterns: 2,
                pattern_len: 2,
                roots_per_pattern: 3,
                noise_fraction: 0.5,
                ..GenConfig::default()
            },
            ..BenchConfig::default()
        };
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].ps, rows[0].k), (2, 5));
        assert_eq!((rows[1].ps, rows[1].k), (2, 10));
        let csv = write_csv(&rows);
        assert!(csv.starts_with("ps,k,mean_seconds,mean_expansions,reps\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
