//! Synthetic event-based spatio-temporal datasets with planted following
//! chains plus uniform background noise.
//!
//! Each planted pattern owns a disjoint subset of the type table. Root
//! instances are scattered uniformly (with room left at the end of the time
//! axis for a full chain), and every instance of chain element `i` spawns a
//! few instances of element `i+1` uniformly inside its cube neighborhood, so
//! planted chains are discoverable by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Dataset, EventInstance, SpaceExtent, TypeId};

/// Generator parameters. Defaults reproduce the benchmark setup: 25 types,
/// 4 planted patterns of length 4 with 10 roots each, cube placement with
/// R = 10 and T = 10 inside a 1000 x 1000 x 1200 space.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    /// Nf: number of event types.
    pub num_types: usize,
    /// Pn: number of planted maximal patterns.
    pub num_patterns: usize,
    /// Ps: length of each planted pattern.
    pub pattern_len: usize,
    /// Ni: root instances per planted pattern.
    pub roots_per_pattern: usize,
    /// R: spatial radius used for follower placement.
    pub spatial_radius: f64,
    /// T: temporal interval used for follower placement.
    pub temporal_interval: f64,
    /// DSize: spatial size per dimension.
    pub spatial_size: f64,
    /// TSize: temporal size.
    pub temporal_size: f64,
    pub spatial_dims: u8,
    /// Followers spawned per instance, drawn uniformly from this inclusive range.
    pub followers_min: u32,
    pub followers_max: u32,
    /// Fraction of the final dataset that is uniform background noise.
    pub noise_fraction: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            num_types: 25,
            num_patterns: 4,
            pattern_len: 4,
            roots_per_pattern: 10,
            spatial_radius: 10.0,
            temporal_interval: 10.0,
            spatial_size: 1000.0,
            temporal_size: 1200.0,
            spatial_dims: 2,
            followers_min: 1,
            followers_max: 3,
            noise_fraction: 0.95,
            seed: 42,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_types == 0 || self.num_patterns == 0 || self.pattern_len == 0
            || self.roots_per_pattern == 0
        {
            return Err(Error::InvalidConfig("all counts must be positive".into()));
        }
        if self.num_patterns * self.pattern_len > self.num_types {
            return Err(Error::InvalidConfig(format!(
                "planted patterns need {} disjoint types but only {} exist",
                self.num_patterns * self.pattern_len,
                self.num_types
            )));
        }
        if self.spatial_dims != 1 && self.spatial_dims != 2 {
            return Err(Error::InvalidConfig("spatial_dims must be 1 or 2".into()));
        }
        if !(self.spatial_radius > 0.0) || !(self.temporal_interval > 0.0) {
            return Err(Error::InvalidConfig("R and T must be positive".into()));
        }
        if !(self.spatial_size > 0.0) || !(self.temporal_size > 0.0) {
            return Err(Error::InvalidConfig("DSize and TSize must be positive".into()));
        }
        if self.pattern_len as f64 * self.temporal_interval > self.temporal_size {
            return Err(Error::InvalidConfig(format!(
                "a {}-step chain with T = {} cannot fit into TSize = {}",
                self.pattern_len, self.temporal_interval, self.temporal_size
            )));
        }
        if self.followers_min < 1 || self.followers_min > self.followers_max {
            return Err(Error::InvalidConfig(
                "follower range must satisfy 1 <= min <= max".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.noise_fraction) {
            return Err(Error::InvalidConfig(
                "noise_fraction must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn extent(&self) -> Result<SpaceExtent> {
        SpaceExtent::uniform(self.spatial_dims, self.spatial_size, self.temporal_size)
    }
}

/// Spreadsheet-style type labels: A..Z, AA, AB, ...
fn type_label(mut i: usize) -> String {
    let mut bytes = Vec::new();
    loop {
        bytes.push(b'A' + (i % 26) as u8);
        i /= 26;
        if i == 0 {
            break;
        }
        i -= 1;
    }
    bytes.reverse();
    String::from_utf8(bytes).expect("ascii labels")
}

struct Emitter {
    labels: Vec<String>,
    counters: Vec<usize>,
    instances: Vec<EventInstance>,
}

impl Emitter {
    fn emit(&mut self, ty: TypeId, loc: [f64; 2], time: f64) {
        self.counters[ty.index()] += 1;
        let id = format!(
            "{}{}",
            self.labels[ty.index()].to_ascii_lowercase(),
            self.counters[ty.index()]
        );
        self.instances.push(EventInstance::new(id, ty, loc, time));
    }
}

/// Generates a dataset and returns it together with the planted type
/// sequences (the ground truth). Deterministic in `cfg.seed`.
pub fn generate(cfg: &GenConfig) -> Result<(Dataset, Vec<Vec<TypeId>>)> {
    cfg.validate()?;
    let extent = cfg.extent()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut em = Emitter {
        labels: (0..cfg.num_types).map(type_label).collect(),
        counters: vec![0; cfg.num_types],
        instances: Vec::new(),
    };

    let dims = cfg.spatial_dims as usize;
    let uniform_loc = |rng: &mut ChaCha8Rng| {
        let mut loc = [0.0; 2];
        for d in loc.iter_mut().take(dims) {
            *d = rng.random_range(0.0..=cfg.spatial_size);
        }
        loc
    };

    // Roots are biased away from the temporal tail so a full chain fits.
    let max_root_time = cfg.temporal_size - cfg.pattern_len as f64 * cfg.temporal_interval;
    let mut truth = Vec::with_capacity(cfg.num_patterns);
    for p in 0..cfg.num_patterns {
        let types: Vec<TypeId> = (p * cfg.pattern_len..(p + 1) * cfg.pattern_len)
            .map(|i| TypeId(i as u32))
            .collect();
        let mut level: Vec<([f64; 2], f64)> = (0..cfg.roots_per_pattern)
            .map(|_| (uniform_loc(&mut rng), rng.random_range(0.0..=max_root_time)))
            .collect();
        for &(loc, time) in &level {
            em.emit(types[0], loc, time);
        }
        for &ty in &types[1..] {
            let mut next = Vec::new();
            for &(parent_loc, parent_time) in &level {
                let n = rng.random_range(cfg.followers_min..=cfg.followers_max);
                for _ in 0..n {
                    let mut loc = [0.0; 2];
                    for d in 0..dims {
                        let offset = rng.random_range(-cfg.spatial_radius..=cfg.spatial_radius);
                        // Clamping moves the follower toward its parent, so it
                        // stays inside both the space and the neighborhood.
                        loc[d] = (parent_loc[d] + offset).clamp(0.0, cfg.spatial_size);
                    }
                    // Strictly positive temporal offset in (0, T].
                    let dt = cfg.temporal_interval * (1.0 - rng.random::<f64>());
                    next.push((loc, parent_time + dt));
                }
            }
            for &(loc, time) in &next {
                em.emit(ty, loc, time);
            }
            level = next;
        }
        truth.push(types);
    }

    let planted = em.instances.len();
    let noise_count = if cfg.noise_fraction > 0.0 {
        (planted as f64 * cfg.noise_fraction / (1.0 - cfg.noise_fraction)).round() as usize
    } else {
        0
    };
    for _ in 0..noise_count {
        let ty = TypeId(rng.random_range(0..cfg.num_types as u32));
        let loc = uniform_loc(&mut rng);
        let time = rng.random_range(0.0..=cfg.temporal_size);
        em.emit(ty, loc, time);
    }

    let dataset = Dataset::new(em.labels, em.instances, extent)?;
    Ok((dataset, truth))
}
