//! The top-K miner: a depth-first expansion of type sequences with a bounded
//! ranking whose K-th sequence index is the dynamic pruning threshold, plus
//! the threshold-driven baseline miner it is compared against.
//!
//! Every sequence starts from a 1-length seed per event type. Expanding a
//! sequence with a type `f` joins its tail event set against `D(f)`, derives
//! the link's density ratio and the candidate sequence index, and then one of
//! three things happens: the candidate is inserted into a ranking that is not
//! yet full, it evicts the K-th entry of a full ranking it beats, or it is
//! rejected and the whole subtree is pruned. The K-th index can only rise, so
//! rejected candidates can never produce a descendant that would rank.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::NeighborhoodConfig;
use crate::model::{Dataset, Pattern, TypeId};
use crate::stats::{density_ratio, extend_seq_index, DensityRatioResult};

/// One ranked pattern: its type sequence and sequence index.
#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub types: Vec<TypeId>,
    pub seq_index: f64,
}

/// Ranking order: sequence index descending, ties broken by ascending
/// lexicographic order on the type-id sequence.
pub(crate) fn entry_cmp(a: &RankEntry, b: &RankEntry) -> std::cmp::Ordering {
    b.seq_index
        .total_cmp(&a.seq_index)
        .then_with(|| a.types.cmp(&b.types))
}

/// The bounded, ordered top-K structure. Holds at most `capacity` entries of
/// length at least `min_len`, sorted by `entry_cmp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    capacity: usize,
    min_len: usize,
    entries: Vec<RankEntry>,
}

/// What happened to a pattern offered to the ranking.
#[derive(Debug, Clone, PartialEq)]
pub enum OfferDecision {
    /// Ranking had spare capacity; the pattern was inserted.
    InsertedNotFull,
    /// Ranking was full and the pattern beat the K-th entry, which it evicted.
    InsertedEvicted(RankEntry),
    /// Ranking was full and the pattern did not strictly beat the K-th entry.
    Rejected,
}

impl Ranking {
    pub fn new(capacity: usize, min_len: usize) -> Self {
        assert!(capacity >= 1, "ranking capacity must be at least 1");
        assert!(min_len >= 2, "min_len must be at least 2");
        Ranking {
            capacity,
            min_len,
            entries: Vec::with_capacity(capacity),
        }
    }

    pub(crate) fn from_entries(capacity: usize, min_len: usize, mut entries: Vec<RankEntry>) -> Self {
        entries.sort_unstable_by(entry_cmp);
        entries.truncate(capacity);
        Ranking {
            capacity,
            min_len,
            entries,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.capacity
    }

    /// Entries in rank order (index descending, lexicographic tie order).
    pub fn entries(&self) -> &[RankEntry] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<RankEntry> {
        self.entries
    }

    /// Sequence index of the K-th (worst ranked) pattern, once full.
    pub fn kth_index(&self) -> Option<f64> {
        if self.is_full() {
            self.entries.last().map(|e| e.seq_index)
        } else {
            None
        }
    }

    /// The current effective pruning threshold: the base threshold 1 while
    /// the ranking has spare capacity, the K-th sequence index afterwards.
    /// Never decreases over a mining run.
    pub fn prune_threshold(&self) -> f64 {
        self.kth_index()
            .map_or(MineConfig::BASE_THRESHOLD, |k| k.max(MineConfig::BASE_THRESHOLD))
    }

    /// Offers a pattern, preserving rank order. A full ranking is only
    /// entered by strictly beating the K-th index; the evicted entry is
    /// returned.
    pub fn offer(&mut self, types: Vec<TypeId>, seq_index: f64) -> OfferDecision {
        debug_assert!(types.len() >= self.min_len);
        debug_assert!(seq_index > MineConfig::BASE_THRESHOLD);
        let entry = RankEntry { types, seq_index };
        if !self.is_full() {
            self.insert_sorted(entry);
            OfferDecision::InsertedNotFull
        } else if seq_index > self.entries.last().expect("full ranking").seq_index {
            let evicted = self.entries.pop().expect("full ranking");
            self.insert_sorted(entry);
            OfferDecision::InsertedEvicted(evicted)
        } else {
            OfferDecision::Rejected
        }
    }

    fn insert_sorted(&mut self, entry: RankEntry) {
        // After all entries with an index >= ours: equal indexes keep
        // discovery order, which the depth-first order makes lexicographic.
        let pos = self
            .entries
            .partition_point(|e| e.seq_index >= entry.seq_index);
        self.entries.insert(pos, entry);
    }
}

/// Mining parameters. `k`, `min_len` and the neighborhood geometry come from
/// the caller; `max_len` caps the depth-first recursion so cyclic type chains
/// terminate; the base significance threshold is fixed at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MineConfig {
    pub k: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub neighborhood: NeighborhoodConfig,
    /// Expand short sequences (below `min_len`) even when a full ranking
    /// already dominates their index, reproducing the classic expansion rule
    /// literally. The default additionally prunes them, which is sound
    /// because a sequence index never increases under expansion. Both modes
    /// produce identical rankings.
    pub strict_paper_pruning: bool,
    /// Mine seeds in parallel with per-seed rankings merged at the end.
    /// Requires the `parallel` feature; ignored (sequential fallback)
    /// without it. The final ranking is identical either way; scenario
    /// counts may differ from the sequential run but stay deterministic.
    pub parallel: bool,
}

pub const DEFAULT_MAX_LEN: usize = 20;

impl MineConfig {
    /// Density ratios must strictly exceed this for a sequence to be
    /// considered significant at all.
    pub const BASE_THRESHOLD: f64 = 1.0;

    pub fn new(k: usize, min_len: usize, neighborhood: NeighborhoodConfig) -> Self {
        MineConfig {
            k,
            min_len,
            max_len: DEFAULT_MAX_LEN,
            neighborhood,
            strict_paper_pruning: false,
            parallel: false,
        }
    }

    pub fn validate(&self, data: &Dataset) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if self.min_len < 2 || self.min_len > self.max_len {
            return Err(Error::InvalidConfig(format!(
                "need 2 <= min_len <= max_len, got min_len={} max_len={}",
                self.min_len, self.max_len
            )));
        }
        self.neighborhood
            .validate_for_dims(data.extent().spatial_dims)
    }
}

/// Observability counters for one mining run.
///
/// `expansions` counts candidate extensions evaluated (one per considered
/// `sequence -> type` pair), `joins` the spatial joins actually performed.
/// The three scenario counters partition `offers`. The monotonicity flags
/// are recorded observations: the candidate index never exceeded its
/// parent's, and the pruning threshold never decreased.
///
/// Wall time is excluded from serialization and equality so that reports
/// stay byte-identical across repeated runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MineStats {
    pub expansions: u64,
    pub joins: u64,
    pub offers: u64,
    pub inserted_not_full: u64,
    pub inserted_evicted: u64,
    pub rejected: u64,
    pub seq_index_monotone: bool,
    pub threshold_monotone: bool,
    #[serde(skip)]
    pub wall: Duration,
}

impl MineStats {
    pub fn new() -> Self {
        MineStats {
            expansions: 0,
            joins: 0,
            offers: 0,
            inserted_not_full: 0,
            inserted_evicted: 0,
            rejected: 0,
            seq_index_monotone: true,
            threshold_monotone: true,
            wall: Duration::ZERO,
        }
    }

    fn absorb(&mut self, other: &MineStats) {
        self.expansions += other.expansions;
        self.joins += other.joins;
        self.offers += other.offers;
        self.inserted_not_full += other.inserted_not_full;
        self.inserted_evicted += other.inserted_evicted;
        self.rejected += other.rejected;
        self.seq_index_monotone &= other.seq_index_monotone;
        self.threshold_monotone &= other.threshold_monotone;
    }
}

impl Default for MineStats {
    fn default() -> Self {
        MineStats::new()
    }
}

impl PartialEq for MineStats {
    fn eq(&self, other: &Self) -> bool {
        // Wall time is machine noise, not part of the run's identity.
        (
            self.expansions,
            self.joins,
            self.offers,
            self.inserted_not_full,
            self.inserted_evicted,
            self.rejected,
            self.seq_index_monotone,
            self.threshold_monotone,
        ) == (
            other.expansions,
            other.joins,
            other.offers,
            other.inserted_not_full,
            other.inserted_evicted,
            other.rejected,
            other.seq_index_monotone,
            other.threshold_monotone,
        )
    }
}

struct Dfs<'a> {
    data: &'a Dataset,
    neighborhood: &'a NeighborhoodConfig,
    max_len: usize,
    stats: MineStats,
    last_threshold: f64,
}

impl<'a> Dfs<'a> {
    fn new(data: &'a Dataset, neighborhood: &'a NeighborhoodConfig, max_len: usize) -> Self {
        Dfs {
            data,
            neighborhood,
            max_len,
            stats: MineStats::new(),
            last_threshold: MineConfig::BASE_THRESHOLD,
        }
    }

    /// Evaluates one candidate extension: join, link ratio, candidate index.
    /// `None` when the dataset holds no instances of `f` at all.
    fn eval(&mut self, pattern: &Pattern, f: TypeId) -> Result<Option<(f64, DensityRatioResult)>> {
        self.stats.expansions += 1;
        match density_ratio(self.data, &pattern.tail, f, self.neighborhood) {
            Ok(res) => {
                self.stats.joins += 1;
                let idx = extend_seq_index(pattern.seq_index, res.ratio);
                if let Some(prev) = pattern.seq_index {
                    if idx > prev {
                        self.stats.seq_index_monotone = false;
                    }
                }
                Ok(Some((idx, res)))
            }
            Err(Error::NoGlobalInstances(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn observe_threshold(&mut self, ranking: &Ranking) {
        let threshold = ranking.prune_threshold();
        if threshold < self.last_threshold {
            self.stats.threshold_monotone = false;
        }
        self.last_threshold = threshold;
    }

    fn expand_topk(
        &mut self,
        pattern: &Pattern,
        ranking: &mut Ranking,
        strict: bool,
        min_len: usize,
    ) -> Result<()> {
        if pattern.len() >= self.max_len {
            return Ok(());
        }
        for f in self.data.type_ids() {
            let Some((idx, res)) = self.eval(pattern, f)? else {
                continue;
            };
            if !(idx > MineConfig::BASE_THRESHOLD) {
                continue;
            }
            let child_len = pattern.len() + 1;
            if child_len < min_len {
                // Too short to rank. A full ranking whose K-th index already
                // dominates this subtree makes every descendant unrankable;
                // the strict mode skips that prune and recurses regardless.
                if !strict && idx <= ranking.prune_threshold() {
                    continue;
                }
                let mut types = pattern.types.clone();
                types.push(f);
                let child = Pattern {
                    types,
                    seq_index: Some(idx),
                    tail: res.join.joined,
                };
                self.expand_topk(&child, ranking, strict, min_len)?;
            } else {
                let mut types = pattern.types.clone();
                types.push(f);
                self.stats.offers += 1;
                let decision = ranking.offer(types.clone(), idx);
                self.observe_threshold(ranking);
                match decision {
                    OfferDecision::Rejected => {
                        self.stats.rejected += 1;
                        // Neither inserted nor expanded.
                    }
                    OfferDecision::InsertedNotFull | OfferDecision::InsertedEvicted(_) => {
                        match decision {
                            OfferDecision::InsertedNotFull => self.stats.inserted_not_full += 1,
                            _ => self.stats.inserted_evicted += 1,
                        }
                        let child = Pattern {
                            types,
                            seq_index: Some(idx),
                            tail: res.join.joined,
                        };
                        self.expand_topk(&child, ranking, strict, min_len)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn expand_threshold(
        &mut self,
        pattern: &Pattern,
        threshold: f64,
        out: &mut Vec<Pattern>,
    ) -> Result<()> {
        if pattern.len() >= self.max_len {
            return Ok(());
        }
        for f in self.data.type_ids() {
            let Some((idx, res)) = self.eval(pattern, f)? else {
                continue;
            };
            if !(idx > threshold) {
                continue;
            }
            let mut types = pattern.types.clone();
            types.push(f);
            let child = Pattern {
                types,
                seq_index: Some(idx),
                tail: res.join.joined,
            };
            out.push(child.clone());
            self.expand_threshold(&child, threshold, out)?;
        }
        Ok(())
    }
}

/// Discovers the top-K sequential patterns of length in `[min_len, max_len]`
/// whose sequence index exceeds 1, ranked by index (ties lexicographic).
///
/// Deterministic: seeds and candidate types are iterated in ascending type-id
/// order, so repeated runs produce identical rankings and scenario counts.
pub fn mine_topk(data: &Dataset, cfg: &MineConfig) -> Result<(Ranking, MineStats)> {
    cfg.validate(data)?;
    let start = Instant::now();

    #[cfg(feature = "parallel")]
    if cfg.parallel {
        let (ranking, mut stats) = mine_topk_parallel(data, cfg)?;
        stats.wall = start.elapsed();
        return Ok((ranking, stats));
    }

    let mut dfs = Dfs::new(data, &cfg.neighborhood, cfg.max_len);
    let mut ranking = Ranking::new(cfg.k, cfg.min_len);
    for f in data.type_ids() {
        let seed = Pattern::seed(data, f)?;
        if seed.tail.is_empty() {
            continue;
        }
        dfs.expand_topk(&seed, &mut ranking, cfg.strict_paper_pruning, cfg.min_len)?;
    }
    let mut stats = dfs.stats;
    stats.wall = start.elapsed();
    Ok((ranking, stats))
}

/// One task per 1-length seed, each with a private ranking; the per-seed
/// rankings are merged afterwards. Any pattern in the global top-K belongs to
/// exactly one seed's subtree and must already be in that seed's local top-K,
/// so the merge loses nothing and equals the sequential result.
#[cfg(feature = "parallel")]
fn mine_topk_parallel(data: &Dataset, cfg: &MineConfig) -> Result<(Ranking, MineStats)> {
    use rayon::prelude::*;

    let types: Vec<TypeId> = data.type_ids().collect();
    let per_seed: Result<Vec<(Vec<RankEntry>, MineStats)>> = types
        .into_par_iter()
        .map(|f| {
            let mut dfs = Dfs::new(data, &cfg.neighborhood, cfg.max_len);
            let mut ranking = Ranking::new(cfg.k, cfg.min_len);
            let seed = Pattern::seed(data, f)?;
            if !seed.tail.is_empty() {
                dfs.expand_topk(&seed, &mut ranking, cfg.strict_paper_pruning, cfg.min_len)?;
            }
            Ok((ranking.into_entries(), dfs.stats))
        })
        .collect();

    let mut entries = Vec::new();
    let mut stats = MineStats::new();
    for (seed_entries, seed_stats) in per_seed? {
        entries.extend(seed_entries);
        stats.absorb(&seed_stats);
    }
    Ok((Ranking::from_entries(cfg.k, cfg.min_len, entries), stats))
}

/// The threshold-driven baseline: the same depth-first expansion without a
/// ranking, returning every pattern of length 2 up to `cfg.max_len` whose
/// sequence index strictly exceeds `threshold`, in discovery (lexicographic)
/// order. `cfg.k` and `cfg.min_len` are not used.
pub fn mine_threshold(
    data: &Dataset,
    threshold: f64,
    cfg: &MineConfig,
) -> Result<(Vec<Pattern>, MineStats)> {
    if !(threshold >= 0.0) || !threshold.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "threshold {threshold} must be finite and non-negative"
        )));
    }
    cfg.neighborhood
        .validate_for_dims(data.extent().spatial_dims)?;
    let start = Instant::now();
    let mut dfs = Dfs::new(data, &cfg.neighborhood, cfg.max_len);
    let mut out = Vec::new();
    for f in data.type_ids() {
        let seed = Pattern::seed(data, f)?;
        if seed.tail.is_empty() {
            continue;
        }
        dfs.expand_threshold(&seed, threshold, &mut out)?;
    }
    let mut stats = dfs.stats;
    stats.wall = start.elapsed();
    Ok((out, stats))
}
