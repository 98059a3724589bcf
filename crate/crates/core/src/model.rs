//! Domain types shared by all modules: event types, instances, datasets,
//! the embedding space and pattern (sequence) representations.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index into a dataset's event type table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeId(pub u32);

impl TypeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A single occurrence of an event type: an identifier, a spatial location
/// and an occurrence time.
///
/// Locations are stored as two coordinates; 1-dimensional datasets keep the
/// second coordinate at zero, so distance computations are dimension-agnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct EventInstance {
    pub id: String,
    pub ty: TypeId,
    pub loc: [f64; 2],
    pub time: f64,
}

impl EventInstance {
    pub fn new(id: impl Into<String>, ty: TypeId, loc: [f64; 2], time: f64) -> Self {
        EventInstance {
            id: id.into(),
            ty,
            loc,
            time,
        }
    }
}

/// The embedding space `V`: an axis-aligned box `[0, spatial_size]^dims x [0, temporal_size]`.
///
/// Its volume is the denominator of every global density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceExtent {
    /// 1 or 2 spatial dimensions.
    pub spatial_dims: u8,
    /// Size per spatial dimension; index 1 is ignored when `spatial_dims == 1`.
    pub spatial_size: [f64; 2],
    pub temporal_size: f64,
}

impl SpaceExtent {
    pub fn new(spatial_dims: u8, spatial_size: [f64; 2], temporal_size: f64) -> Result<Self> {
        if spatial_dims != 1 && spatial_dims != 2 {
            return Err(Error::InvalidConfig(format!(
                "spatial_dims must be 1 or 2, got {spatial_dims}"
            )));
        }
        for d in 0..spatial_dims as usize {
            if !(spatial_size[d] > 0.0) || !spatial_size[d].is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "spatial size {} must be positive and finite",
                    spatial_size[d]
                )));
            }
        }
        if !(temporal_size > 0.0) || !temporal_size.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "temporal size {temporal_size} must be positive and finite"
            )));
        }
        Ok(SpaceExtent {
            spatial_dims,
            spatial_size,
            temporal_size,
        })
    }

    /// Convenience constructor for a uniform spatial size in every dimension.
    pub fn uniform(spatial_dims: u8, spatial_size: f64, temporal_size: f64) -> Result<Self> {
        SpaceExtent::new(spatial_dims, [spatial_size; 2], temporal_size)
    }

    /// Product of the spatial sizes and the temporal size.
    pub fn volume(&self) -> f64 {
        let mut v = self.temporal_size;
        for d in 0..self.spatial_dims as usize {
            v *= self.spatial_size[d];
        }
        v
    }

    /// Whether a point lies inside the closed box (boundary counts as inside).
    pub fn contains(&self, loc: [f64; 2], time: f64) -> bool {
        if !(0.0..=self.temporal_size).contains(&time) {
            return false;
        }
        (0..self.spatial_dims as usize).all(|d| (0.0..=self.spatial_size[d]).contains(&loc[d]))
    }
}

/// An event-based spatio-temporal dataset: the type table, the instance set
/// and a per-type index sorted in canonical order.
#[derive(Debug, Clone)]
pub struct Dataset {
    labels: Vec<String>,
    instances: Vec<EventInstance>,
    extent: SpaceExtent,
    /// For each type, the indices of its instances sorted by
    /// (time, first coordinate, instance id).
    by_type: Vec<Vec<u32>>,
}

impl Dataset {
    /// Builds a dataset and its per-type index, validating every invariant:
    /// unique labels, known type ids, instances inside the closed extent and
    /// finite coordinates.
    pub fn new(
        labels: Vec<String>,
        instances: Vec<EventInstance>,
        extent: SpaceExtent,
    ) -> Result<Self> {
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidData(format!("duplicate type label {a:?}")));
            }
        }
        if instances.len() > u32::MAX as usize {
            return Err(Error::InvalidData("too many instances".into()));
        }
        for inst in &instances {
            if inst.ty.index() >= labels.len() {
                return Err(Error::UnknownType(inst.ty.0));
            }
            if !inst.loc[0].is_finite() || !inst.loc[1].is_finite() || !inst.time.is_finite() {
                return Err(Error::InvalidData(format!(
                    "instance {:?} has a non-finite coordinate",
                    inst.id
                )));
            }
            if extent.spatial_dims == 1 && inst.loc[1] != 0.0 {
                return Err(Error::InvalidData(format!(
                    "instance {:?} has a second coordinate in a 1-D dataset",
                    inst.id
                )));
            }
            if !extent.contains(inst.loc, inst.time) {
                return Err(Error::InvalidData(format!(
                    "instance {:?} lies outside the declared extent",
                    inst.id
                )));
            }
        }

        let mut by_type: Vec<Vec<u32>> = vec![Vec::new(); labels.len()];
        for (i, inst) in instances.iter().enumerate() {
            by_type[inst.ty.index()].push(i as u32);
        }
        let mut ds = Dataset {
            labels,
            instances,
            extent,
            by_type: Vec::new(),
        };
        for list in &mut by_type {
            list.sort_unstable_by(|&a, &b| canonical_cmp(&ds.instances, a, b));
        }
        ds.by_type = by_type;
        Ok(ds)
    }

    pub fn extent(&self) -> &SpaceExtent {
        &self.extent
    }

    pub fn num_types(&self) -> usize {
        self.labels.len()
    }

    /// All type ids, in ascending id order.
    pub fn type_ids(&self) -> impl Iterator<Item = TypeId> + '_ {
        (0..self.labels.len() as u32).map(TypeId)
    }

    pub fn type_label(&self, ty: TypeId) -> Result<&str> {
        self.labels
            .get(ty.index())
            .map(String::as_str)
            .ok_or(Error::UnknownType(ty.0))
    }

    pub fn type_by_label(&self, label: &str) -> Option<TypeId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| TypeId(i as u32))
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn instances(&self) -> &[EventInstance] {
        &self.instances
    }

    #[inline]
    pub fn instance(&self, idx: u32) -> &EventInstance {
        &self.instances[idx as usize]
    }

    /// The set `D(f)`: indices of all instances of type `f`, sorted by time
    /// ascending (ties: first coordinate, then instance id).
    pub fn instances_of_type(&self, ty: TypeId) -> Result<&[u32]> {
        self.by_type
            .get(ty.index())
            .map(Vec::as_slice)
            .ok_or(Error::UnknownType(ty.0))
    }

    /// The canonical instance order used by the per-type index, join outputs
    /// and tail event sets.
    #[inline]
    pub fn instance_cmp(&self, a: u32, b: u32) -> Ordering {
        canonical_cmp(&self.instances, a, b)
    }

    /// Resolves a sequence of type ids to labels.
    pub fn labels_of(&self, types: &[TypeId]) -> Result<Vec<String>> {
        types
            .iter()
            .map(|&t| self.type_label(t).map(str::to_owned))
            .collect()
    }
}

fn canonical_cmp(instances: &[EventInstance], a: u32, b: u32) -> Ordering {
    let (x, y) = (&instances[a as usize], &instances[b as usize]);
    x.time
        .total_cmp(&y.time)
        .then_with(|| x.loc[0].total_cmp(&y.loc[0]))
        .then_with(|| x.id.cmp(&y.id))
}

/// A sequence of event types under the following relation, together with the
/// instances of its last type that participate in it (the tail event set) and
/// its sequence index (the minimum link density ratio; absent for length 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub types: Vec<TypeId>,
    pub seq_index: Option<f64>,
    /// Instance indices of type `types.last()`, in canonical order, deduplicated.
    pub tail: Vec<u32>,
}

impl Pattern {
    /// A 1-length seed whose tail event set is all of `D(f)`.
    pub fn seed(dataset: &Dataset, ty: TypeId) -> Result<Self> {
        Ok(Pattern {
            types: vec![ty],
            seq_index: None,
            tail: dataset.instances_of_type(ty)?.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(id: &str, ty: u32, x: f64, t: f64) -> EventInstance {
        EventInstance::new(id, TypeId(ty), [x, 0.0], t)
    }

    fn fig1_sample() -> Dataset {
        // First rows of the running example: two As, two Bs, two Cs, two Ds.
        let extent = SpaceExtent::uniform(1, 100.0, 20.0).unwrap();
        Dataset::new(
            vec!["A".into(), "B".into(), "C".into(), "D".into()],
            vec![
                inst("a1", 0, 19.0, 1.0),
                inst("a2", 0, 83.0, 1.0),
                inst("b1", 1, 25.0, 3.0),
                inst("b2", 1, 1.0, 3.0),
                inst("c1", 2, 25.0, 7.0),
                inst("c2", 2, 15.0, 7.0),
                inst("d1", 3, 21.0, 11.0),
                inst("d2", 3, 13.0, 12.0),
            ],
            extent,
        )
        .unwrap()
    }

    #[test]
    fn instances_of_type_filters_and_sorts() {
        let ds = fig1_sample();
        let a = TypeId(0);
        let ids: Vec<&str> = ds
            .instances_of_type(a)
            .unwrap()
            .iter()
            .map(|&i| ds.instance(i).id.as_str())
            .collect();
        assert_eq!(ids, ["a1", "a2"]); // same time, ordered by x

        // Ties in time sort by first coordinate: b2 (x=1) before b1 (x=25).
        let ids: Vec<&str> = ds
            .instances_of_type(TypeId(1))
            .unwrap()
            .iter()
            .map(|&i| ds.instance(i).id.as_str())
            .collect();
        assert_eq!(ids, ["b2", "b1"]);
    }

    #[test]
    fn instances_of_type_empty_and_unknown() {
        let extent = SpaceExtent::uniform(1, 10.0, 10.0).unwrap();
        let ds = Dataset::new(vec!["A".into(), "B".into()], vec![inst("a1", 0, 1.0, 1.0)], extent)
            .unwrap();
        assert!(ds.instances_of_type(TypeId(1)).unwrap().is_empty());
        assert!(matches!(
            ds.instances_of_type(TypeId(9)),
            Err(Error::UnknownType(9))
        ));
    }

    #[test]
    fn mixed_dataset_filter() {
        let extent = SpaceExtent::uniform(1, 10.0, 10.0).unwrap();
        let ds = Dataset::new(
            vec!["A".into(), "B".into()],
            vec![
                inst("a1", 0, 1.0, 1.0),
                inst("b1", 1, 2.0, 2.0),
                inst("a2", 0, 3.0, 3.0),
            ],
            extent,
        )
        .unwrap();
        let ids: Vec<&str> = ds
            .instances_of_type(TypeId(0))
            .unwrap()
            .iter()
            .map(|&i| ds.instance(i).id.as_str())
            .collect();
        assert_eq!(ids, ["a1", "a2"]);
    }

    #[test]
    fn per_type_index_partitions_instances() {
        let ds = fig1_sample();
        let mut all: Vec<u32> = ds
            .type_ids()
            .flat_map(|t| ds.instances_of_type(t).unwrap().iter().copied())
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..ds.len() as u32).collect::<Vec<_>>());
    }

    #[test]
    fn volume_examples() {
        // The running example: |V| = 20 * 100 = 2000.
        let v1 = SpaceExtent::uniform(1, 100.0, 20.0).unwrap();
        assert_eq!(v1.volume(), 2000.0);
        let v2 = SpaceExtent::uniform(2, 1000.0, 1200.0).unwrap();
        assert_eq!(v2.volume(), 1.2e9);
        let unit = SpaceExtent::uniform(1, 1.0, 1.0).unwrap();
        assert_eq!(unit.volume(), 1.0);
    }

    #[test]
    fn volume_is_monotone_in_each_field() {
        let base = SpaceExtent::new(2, [10.0, 20.0], 5.0).unwrap();
        let bigger_x = SpaceExtent::new(2, [11.0, 20.0], 5.0).unwrap();
        let bigger_y = SpaceExtent::new(2, [10.0, 21.0], 5.0).unwrap();
        let bigger_t = SpaceExtent::new(2, [10.0, 20.0], 6.0).unwrap();
        assert!(bigger_x.volume() > base.volume());
        assert!(bigger_y.volume() > base.volume());
        assert!(bigger_t.volume() > base.volume());
    }

    #[test]
    fn boundary_points_count_as_inside() {
        let extent = SpaceExtent::uniform(1, 100.0, 20.0).unwrap();
        assert!(extent.contains([100.0, 0.0], 20.0));
        assert!(extent.contains([0.0, 0.0], 0.0));
        assert!(!extent.contains([100.0001, 0.0], 1.0));
    }

    #[test]
    fn construction_rejects_out_of_extent() {
        let extent = SpaceExtent::uniform(1, 10.0, 10.0).unwrap();
        let err = Dataset::new(vec!["A".into()], vec![inst("a1", 0, 11.0, 1.0)], extent);
        assert!(matches!(err, Err(Error::InvalidData(_))));
    }

    #[test]
    fn construction_rejects_duplicate_labels() {
        let extent = SpaceExtent::uniform(1, 10.0, 10.0).unwrap();
        let err = Dataset::new(vec!["A".into(), "A".into()], vec![], extent);
        assert!(matches!(err, Err(Error::InvalidData(_))));
    }
}
