//! Density, density ratio and sequence-index computations.
//!
//! The strength of a following relation `f1 -> f2` is the ratio between the
//! average density of `f2` instances inside the neighborhoods of the tail
//! event set and the global density of `f2` in the embedding space. Ratios
//! above 1 indicate attraction.

use crate::error::{Error, Result};
use crate::geometry::{neighborhood_volume, plane_sweep_join, JoinResult, NeighborhoodConfig};
use crate::model::{Dataset, TypeId};

/// Outcome of one link evaluation. The join result is retained because its
/// deduplicated union becomes the next tail event set.
#[derive(Debug, Clone)]
pub struct DensityRatioResult {
    pub ratio: f64,
    pub avg_neighborhood_density: f64,
    pub global_density: f64,
    pub join: JoinResult,
}

/// Number of instances inside a space divided by the volume of that space.
pub fn density(count: usize, space_volume: f64) -> Result<f64> {
    if !(space_volume > 0.0) {
        return Err(Error::NonPositiveVolume(space_volume));
    }
    Ok(count as f64 / space_volume)
}

/// Density ratio of extending a tail event set with event type `f`.
///
/// The numerator averages, over the tail instances, the density of type-`f`
/// instances in each neighborhood (counts are per neighborhood, not
/// deduplicated across them); the denominator is the global density of `f`.
pub fn density_ratio(
    data: &Dataset,
    tail: &[u32],
    f: TypeId,
    cfg: &NeighborhoodConfig,
) -> Result<DensityRatioResult> {
    if tail.is_empty() {
        return Err(Error::EmptyTail);
    }
    let candidates = data.instances_of_type(f)?;
    if candidates.is_empty() {
        return Err(Error::NoGlobalInstances(f.0));
    }
    let join = plane_sweep_join(data, tail, candidates, cfg);
    ratio_from_counts(data, tail.len(), join.total_pairs(), candidates.len(), cfg, join)
}

/// Shared arithmetic between `density_ratio` and any join strategy: callers
/// supply the total neighbor count over all tail neighborhoods.
pub fn ratio_from_counts(
    data: &Dataset,
    tail_len: usize,
    total_neighbors: usize,
    global_count: usize,
    cfg: &NeighborhoodConfig,
    join: JoinResult,
) -> Result<DensityRatioResult> {
    let nbhd_vol = neighborhood_volume(cfg, data.extent().spatial_dims)?;
    let avg = total_neighbors as f64 / (tail_len as f64 * nbhd_vol);
    let global = density(global_count, data.extent().volume())?;
    Ok(DensityRatioResult {
        ratio: avg / global,
        avg_neighborhood_density: avg,
        global_density: global,
        join,
    })
}

/// Sequence index of an expanded sequence: the link ratio itself when the
/// parent is a 1-length seed, otherwise the minimum of the parent index and
/// the new link ratio.
#[inline]
pub fn extend_seq_index(prev: Option<f64>, link_ratio: f64) -> f64 {
    match prev {
        None => link_ratio,
        Some(p) => p.min(link_ratio),
    }
}
