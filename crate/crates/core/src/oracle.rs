//! Brute-force reference implementation used by tests and the `verify`
//! command.
//!
//! Everything here is simple and obviously correct, and deliberately avoids
//! the optimized paths: joins are exhaustive pairwise scans and the density
//! arithmetic is written out locally. Exponential in `max_len`, intended for
//! small inputs only.

use crate::error::{Error, Result};
use crate::geometry::{naive_join, neighborhood_volume, NeighborhoodConfig};
use crate::miner::{RankEntry, Ranking};
use crate::model::{Dataset, TypeId};

/// One enumerated sequence with the density ratio of every link.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedPattern {
    pub types: Vec<TypeId>,
    pub seq_index: f64,
    pub link_ratios: Vec<f64>,
}

/// Enumerates every type sequence of length 2 up to `max_len` reachable
/// through nonzero links, in lexicographic order. A zero-ratio link ends the
/// branch: the sequence through it is neither emitted nor extended.
pub fn enumerate_all(
    data: &Dataset,
    cfg: &NeighborhoodConfig,
    max_len: usize,
) -> Result<Vec<EnumeratedPattern>> {
    if max_len < 2 {
        return Err(Error::InvalidConfig(format!(
            "max_len must be at least 2, got {max_len}"
        )));
    }
    cfg.validate_for_dims(data.extent().spatial_dims)?;
    let nbhd_vol = neighborhood_volume(cfg, data.extent().spatial_dims)?;
    let space_vol = data.extent().volume();

    let mut out = Vec::new();
    for f in data.type_ids() {
        let tail = data.instances_of_type(f)?;
        if tail.is_empty() {
            continue;
        }
        extend(
            data,
            cfg,
            max_len,
            nbhd_vol,
            space_vol,
            &[f],
            tail,
            &[],
            &mut out,
        )?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    data: &Dataset,
    cfg: &NeighborhoodConfig,
    max_len: usize,
    nbhd_vol: f64,
    space_vol: f64,
    types: &[TypeId],
    tail: &[u32],
    ratios: &[f64],
    out: &mut Vec<EnumeratedPattern>,
) -> Result<()> {
    if types.len() >= max_len {
        return Ok(());
    }
    for f in data.type_ids() {
        let candidates = data.instances_of_type(f)?;
        if candidates.is_empty() {
            continue;
        }
        let join = naive_join(data, tail, candidates, cfg);
        let total: usize = join.per_tail.iter().map(Vec::len).sum();
        let avg = total as f64 / (tail.len() as f64 * nbhd_vol);
        let global = candidates.len() as f64 / space_vol;
        let ratio = avg / global;
        if ratio <= 0.0 {
            continue;
        }
        let mut child_types = types.to_vec();
        child_types.push(f);
        let mut child_ratios = ratios.to_vec();
        child_ratios.push(ratio);
        let seq_index = child_ratios.iter().copied().fold(f64::INFINITY, f64::min);
        out.push(EnumeratedPattern {
            types: child_types.clone(),
            seq_index,
            link_ratios: child_ratios.clone(),
        });
        extend(
            data,
            cfg,
            max_len,
            nbhd_vol,
            space_vol,
            &child_types,
            &join.joined,
            &child_ratios,
            out,
        )?;
    }
    Ok(())
}

/// Definitional top-K: keep patterns of length at least `min_len` whose
/// sequence index exceeds 1, sort by index descending (ties lexicographic
/// ascending) and take the first `k`.
pub fn topk_reference(all: &[EnumeratedPattern], k: usize, min_len: usize) -> Ranking {
    let entries: Vec<RankEntry> = all
        .iter()
        .filter(|p| p.types.len() >= min_len && p.seq_index > 1.0)
        .map(|p| RankEntry {
            types: p.types.clone(),
            seq_index: p.seq_index,
        })
        .collect();
    Ranking::from_entries(k, min_len, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Shape;
    use crate::model::{EventInstance, SpaceExtent};

    fn inst(id: &str, ty: u32, x: f64, t: f64) -> EventInstance {
        EventInstance::new(id, TypeId(ty), [x, 0.0], t)
    }

    fn cube(r: f64, t: f64) -> NeighborhoodConfig {
        NeighborhoodConfig::new(Shape::Cube, r, t).unwrap()
    }

    #[test]
    fn two_types_enumerate_at_most_four_sequences() {
        let data = Dataset::new(
            vec!["A".into(), "B".into()],
            vec![
                inst("a1", 0, 1.0, 1.0),
                inst("a2", 0, 2.0, 2.0),
                inst("b1", 1, 1.5, 1.5),
            ],
            SpaceExtent::uniform(1, 10.0, 10.0).unwrap(),
        )
        .unwrap();
        let all = enumerate_all(&data, &cube(2.0, 2.0), 2).unwrap();
        assert!(all.len() <= 4);
        assert!(all.iter().all(|p| p.types.len() == 2));
    }

    #[test]
    fn hand_computed_fixture_ratio() {
        let data = Dataset::new(
            vec!["A".into(), "B".into()],
            vec![
                inst("a1", 0, 0.0, 0.0),
                inst("b1", 1, 1.0, 1.0),
                inst("b2", 1, 2.0, 1.0),
                inst("b3", 1, 50.0, 15.0),
            ],
            SpaceExtent::uniform(1, 100.0, 20.0).unwrap(),
        )
        .unwrap();
        let all = enumerate_all(&data, &cube(5.0, 5.0), 2).unwrap();
        let ab = all
            .iter()
            .find(|p| p.types == [TypeId(0), TypeId(1)])
            .expect("A -> B enumerated");
        assert!((ab.seq_index - 80.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn no_cross_neighbors_means_empty_output() {
        let data = Dataset::new(
            vec!["A".into(), "B".into()],
            vec![inst("a1", 0, 0.0, 18.0), inst("b1", 1, 90.0, 1.0)],
            SpaceExtent::uniform(1, 100.0, 20.0).unwrap(),
        )
        .unwrap();
        let all = enumerate_all(&data, &cube(2.0, 2.0), 4).unwrap();
        assert!(all.is_empty());
    }

    #[test]
    fn seq_index_is_min_of_link_ratios() {
        let data = Dataset::new(
            vec!["A".into(), "B".into(), "C".into()],
            vec![
                inst("a1", 0, 1.0, 1.0),
                inst("b1", 1, 1.5, 2.0),
                inst("b2", 1, 2.0, 2.5),
                inst("c1", 2, 1.0, 3.0),
            ],
            SpaceExtent::uniform(1, 50.0, 10.0).unwrap(),
        )
        .unwrap();
        let all = enumerate_all(&data, &cube(2.0, 2.0), 4).unwrap();
        assert!(!all.is_empty());
        for p in &all {
            let min = p.link_ratios.iter().copied().fold(f64::INFINITY, f64::min);
            assert_eq!(p.seq_index, min);
            assert_eq!(p.link_ratios.len(), p.types.len() - 1);
        }
    }

    #[test]
    fn longer_cap_is_prefix_closed_superset() {
        let data = Dataset::new(
            vec!["A".into(), "B".into()],
            vec![
                inst("a1", 0, 1.0, 1.0),
                inst("b1", 1, 1.5, 1.5),
                inst("a2", 0, 2.0, 2.0),
                inst("b2", 1, 2.5, 2.5),
            ],
            SpaceExtent::uniform(1, 10.0, 10.0).unwrap(),
        )
        .unwrap();
        let cfg = cube(2.0, 2.0);
        let shallow = enumerate_all(&data, &cfg, 3).unwrap();
        let deep = enumerate_all(&data, &cfg, 4).unwrap();
        for p in &shallow {
            assert!(deep.contains(p));
        }
        assert!(deep.len() >= shallow.len());
    }

    #[test]
    fn topk_reference_sorts_filters_and_truncates() {
        let mk = |types: &[u32], idx: f64| EnumeratedPattern {
            types: types.iter().map(|&i| TypeId(i)).collect(),
            seq_index: idx,
            link_ratios: vec![idx],
        };
        assert!(topk_reference(&[], 3, 2).is_empty());

        let all = vec![
            mk(&[0, 1], 5.0),
            mk(&[1, 0], 9.0),
            mk(&[0, 2], 7.0),
            mk(&[2, 0], 0.5), // below the base threshold
            mk(&[2, 1], 3.0),
        ];
        let top = topk_reference(&all, 3, 2);
        let idxs: Vec<f64> = top.entries().iter().map(|e| e.seq_index).collect();
        assert_eq!(idxs, [9.0, 7.0, 5.0]);
    }
}
