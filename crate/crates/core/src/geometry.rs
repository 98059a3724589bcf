//! Neighborhood membership, neighborhood volumes and the spatial join that
//! maps a tail event set to per-instance neighbor lists.
//!
//! The spatio-temporal neighborhood of an instance `e` is the set of
//! instances strictly after `e` in time (within the temporal interval `T`)
//! and within spatial radius `R`. Cube neighborhoods use the Chebyshev
//! distance (an axis-aligned square of side `2R`), cylinders the Euclidean
//! distance.

use std::collections::BTreeSet;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, EventInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Cube,
    Cylinder,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shape::Cube => write!(f, "cube"),
            Shape::Cylinder => write!(f, "cylinder"),
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cube" => Ok(Shape::Cube),
            "cylinder" => Ok(Shape::Cylinder),
            other => Err(Error::InvalidConfig(format!(
                "unknown neighborhood shape {other:?} (expected cube or cylinder)"
            ))),
        }
    }
}

/// Geometry of the neighborhood space: its shape, spatial radius `R` and
/// temporal interval `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodConfig {
    pub shape: Shape,
    pub spatial_radius: f64,
    pub temporal_interval: f64,
}

impl NeighborhoodConfig {
    pub fn new(shape: Shape, spatial_radius: f64, temporal_interval: f64) -> Result<Self> {
        let cfg = NeighborhoodConfig {
            shape,
            spatial_radius,
            temporal_interval,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !(self.spatial_radius > 0.0) || !self.spatial_radius.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "spatial radius {} must be positive and finite",
                self.spatial_radius
            )));
        }
        if !(self.temporal_interval > 0.0) || !self.temporal_interval.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "temporal interval {} must be positive and finite",
                self.temporal_interval
            )));
        }
        Ok(())
    }

    /// Cylinders are only meaningful with two spatial dimensions.
    pub fn validate_for_dims(&self, spatial_dims: u8) -> Result<()> {
        self.check()?;
        if self.shape == Shape::Cylinder && spatial_dims != 2 {
            return Err(Error::InvalidConfig(
                "cylinder neighborhoods require 2 spatial dimensions".into(),
            ));
        }
        Ok(())
    }
}

/// Whether `p` lies in the neighborhood of `e`: within spatial radius and
/// strictly after `e` in time, at most the temporal interval ahead.
///
/// Both bounds are closed on the far side; simultaneous occurrences are
/// excluded so the relation stays irreflexive and antisymmetric.
#[inline]
pub fn is_neighbor(e: &EventInstance, p: &EventInstance, cfg: &NeighborhoodConfig) -> bool {
    let dt = p.time - e.time;
    if !(dt > 0.0 && dt <= cfg.temporal_interval) {
        return false;
    }
    let dx = p.loc[0] - e.loc[0];
    let dy = p.loc[1] - e.loc[1];
    match cfg.shape {
        Shape::Cube => dx.abs().max(dy.abs()) <= cfg.spatial_radius,
        Shape::Cylinder => dx * dx + dy * dy <= cfg.spatial_radius * cfg.spatial_radius,
    }
}

/// Volume of one neighborhood space.
///
/// Cube: `(2R)^dims * T` (Chebyshev ball of radius `R`).
/// Cylinder (2-D only): `pi * R^2 * T`.
pub fn neighborhood_volume(cfg: &NeighborhoodConfig, spatial_dims: u8) -> Result<f64> {
    cfg.validate_for_dims(spatial_dims)?;
    let r = cfg.spatial_radius;
    let t = cfg.temporal_interval;
    Ok(match cfg.shape {
        Shape::Cube => (2.0 * r).powi(spatial_dims as i32) * t,
        Shape::Cylinder => std::f64::consts::PI * r * r * t,
    })
}

/// Per-tail-instance neighbor lists plus their deduplicated union.
///
/// `per_tail[i]` holds the neighbors of `tail[i]` restricted to the candidate
/// set; `joined` is the union in canonical instance order, ready to serve as
/// the next tail event set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinResult {
    pub per_tail: Vec<Vec<u32>>,
    pub joined: Vec<u32>,
}

impl JoinResult {
    pub fn empty() -> Self {
        JoinResult {
            per_tail: Vec::new(),
            joined: Vec::new(),
        }
    }

    /// Total number of (tail, neighbor) pairs, with multiplicity.
    pub fn total_pairs(&self) -> usize {
        self.per_tail.iter().map(Vec::len).sum()
    }
}

fn finish(data: &Dataset, mut per_tail: Vec<Vec<u32>>) -> JoinResult {
    let mut joined: Vec<u32> = per_tail.iter().flatten().copied().collect();
    joined.sort_unstable();
    joined.dedup();
    joined.sort_unstable_by(|&a, &b| data.instance_cmp(a, b));
    for list in &mut per_tail {
        list.sort_unstable_by(|&a, &b| data.instance_cmp(a, b));
    }
    JoinResult { per_tail, joined }
}

#[cfg(debug_assertions)]
fn assert_time_sorted(data: &Dataset, list: &[u32], name: &str) {
    debug_assert!(
        list.windows(2)
            .all(|w| data.instance(w[0]).time <= data.instance(w[1]).time),
        "{name} list must be sorted by time ascending"
    );
}

/// Exhaustive pairwise join. Obviously correct and used as the oracle for
/// `plane_sweep_join`.
pub fn naive_join(
    data: &Dataset,
    tail: &[u32],
    candidates: &[u32],
    cfg: &NeighborhoodConfig,
) -> JoinResult {
    let per_tail: Vec<Vec<u32>> = tail
        .iter()
        .map(|&e| {
            candidates
                .iter()
                .copied()
                .filter(|&p| is_neighbor(data.instance(e), data.instance(p), cfg))
                .collect()
        })
        .collect();
    finish(data, per_tail)
}

/// Plane-sweep join over the time axis.
///
/// Both inputs must be sorted by time ascending. A single forward sweep
/// maintains the active candidate window `(e.time, e.time + T]` in a set
/// ordered by first spatial coordinate; candidates inside the `[x-R, x+R]`
/// slice of the window go through the exact membership test.
///
/// Output is identical, per tail instance, to `naive_join`.
pub fn plane_sweep_join(
    data: &Dataset,
    tail: &[u32],
    candidates: &[u32],
    cfg: &NeighborhoodConfig,
) -> JoinResult {
    #[cfg(debug_assertions)]
    {
        assert_time_sorted(data, tail, "tail");
        assert_time_sorted(data, candidates, "candidate");
    }

    let r = cfg.spatial_radius;
    let t = cfg.temporal_interval;
    let mut per_tail: Vec<Vec<u32>> = Vec::with_capacity(tail.len());
    let mut active: BTreeSet<(OrderedFloat<f64>, u32)> = BTreeSet::new();
    let (mut lo, mut hi) = (0usize, 0usize);

    for &e_idx in tail {
        let e = data.instance(e_idx);

        // Enter candidates with time - e.time <= T. The comparison is the
        // same floating-point expression the membership test uses, so the
        // window is never narrower than the true temporal range.
        while hi < candidates.len() && data.instance(candidates[hi]).time - e.time <= t {
            let p = data.instance(candidates[hi]);
            active.insert((OrderedFloat(p.loc[0]), candidates[hi]));
            hi += 1;
        }
        // Expire candidates at or before e.time (membership is strict).
        while lo < hi && data.instance(candidates[lo]).time <= e.time {
            let p = data.instance(candidates[lo]);
            active.remove(&(OrderedFloat(p.loc[0]), candidates[lo]));
            lo += 1;
        }

        // Slice the window by first coordinate, widened one ulp per side so
        // boundary rounding can never drop a candidate the exact test accepts.
        let x_lo = OrderedFloat((e.loc[0] - r).next_down());
        let x_hi = OrderedFloat((e.loc[0] + r).next_up());
        let neighbors: Vec<u32> = active
            .range((x_lo, u32::MIN)..=(x_hi, u32::MAX))
            .filter(|&&(_, p_idx)| is_neighbor(e, data.instance(p_idx), cfg))
            .map(|&(_, p_idx)| p_idx)
            .collect();
        per_tail.push(neighbors);
    }

    finish(data, per_tail)
}
