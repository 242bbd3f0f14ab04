//! Exhaustive enumeration of `S_m`, the brute-force oracle, connected
//! counts, and the `β`/`α` split-type tables.
//!
//! `β_D(R, m, q)` counts split types of size `m` with `q` parts at distance
//! exactly `R`. For an additive metric it is the `q`-fold convolution of
//! the connected counts over the `(radius, size)` grid, which is what
//! [`BetaTable`] stores layer by layer.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{Metric, Radius};
use crate::perm::{has_cut, split_type_parts, Permutation};
use crate::scalar::guarded_binomial;

pub const DEFAULT_MAX_DEGREE: usize = 12;
pub const DEFAULT_CONFIRM_ABOVE: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("degree {degree} exceeds the enumeration cap {cap}")]
    CapExceeded { degree: usize, cap: usize },
    #[error("enumerating S_{degree} ({count} permutations) needs explicit confirmation above degree {threshold}")]
    NeedsConfirmation {
        degree: usize,
        threshold: usize,
        count: u64,
    },
    #[error("metric {0} is not additive; the convolution route does not apply")]
    NotAdditive(Metric),
    #[error("metric {0} has no growth bound N(R)")]
    NoGrowthBound(Metric),
    #[error("beta({radius}, {m}, {q}) is outside the table built for radius <= {max_radius}, size <= {max_size}, connected parts <= {connected_cap}")]
    OutOfTable {
        radius: u64,
        m: usize,
        q: usize,
        max_radius: u64,
        max_size: usize,
        connected_cap: usize,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Limits and parallelism for raw group enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumConfig {
    /// Hard cap on the degree of any enumerated `S_m`.
    pub max_degree: usize,
    /// Degrees above this one need `allow_large`.
    pub confirm_above: usize,
    pub allow_large: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_MAX_DEGREE,
            confirm_above: DEFAULT_CONFIRM_ABOVE,
            allow_large: false,
            threads: None,
        }
    }
}

impl EnumConfig {
    pub fn single_threaded() -> Self {
        Self {
            threads: Some(1),
            ..Self::default()
        }
    }

    pub fn check(&self, degree: usize) -> Result<(), EnumError> {
        if degree > self.max_degree {
            return Err(EnumError::CapExceeded {
                degree,
                cap: self.max_degree,
            });
        }
        if degree > self.confirm_above && !self.allow_large {
            return Err(EnumError::NeedsConfirmation {
                degree,
                threshold: self.confirm_above,
                count: factorial(degree),
            });
        }
        Ok(())
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Advances `word` to its lexicographic successor. Returns `false` (leaving
/// the word unchanged) at the last permutation.
pub fn next_permutation(word: &mut [u32]) -> bool {
    let n = word.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}

/// The permutation of rank `index` in lexicographic order on `S_m`.
pub fn unrank(m: usize, mut index: u64) -> Vec<u32> {
    let mut pool: Vec<u32> = (1..=m as u32).collect();
    let mut word = Vec::with_capacity(m);
    for remaining in (1..=m).rev() {
        let block = factorial(remaining - 1);
        let pick = (index / block) as usize;
        index %= block;
        word.push(pool.remove(pick));
    }
    word
}

/// Lexicographic iterator over a contiguous rank range of `S_m`.
#[derive(Debug, Clone)]
pub struct LexPermutations {
    word: Vec<u32>,
    remaining: u64,
}

impl LexPermutations {
    /// All of `S_m`, without any cap check.
    pub fn new(m: usize) -> Self {
        Self::range(m, 0, factorial(m))
    }

    /// Ranks `start..end` of `S_m`.
    pub fn range(m: usize, start: u64, end: u64) -> Self {
        let end = end.min(factorial(m));
        let start = start.min(end);
        Self {
            word: unrank(m, start),
            remaining: end - start,
        }
    }

    /// Calls `f` on each word in the range without allocating.
    pub fn for_each_word(mut self, mut f: impl FnMut(&[u32])) {
        while self.remaining > 0 {
            f(&self.word);
            self.remaining -= 1;
            if self.remaining > 0 {
                next_permutation(&mut self.word);
            }
        }
    }
}

impl Iterator for LexPermutations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.word.clone();
        self.remaining -= 1;
        if self.remaining > 0 {
            next_permutation(&mut self.word);
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for LexPermutations {}

/// Every element of `S_m` in lexicographic order, checked against the cap.
pub fn iterate_group(
    m: usize,
    config: &EnumConfig,
) -> Result<impl Iterator<Item = Permutation>, EnumError> {
    config.check(m)?;
    Ok(LexPermutations::new(m).map(Permutation::from_word_unchecked))
}

/// Splits the rank range of `S_m` into at most `parts` contiguous chunks.
pub fn partition_ranks(m: usize, parts: usize) -> Vec<(u64, u64)> {
    let total = factorial(m);
    let parts = (parts.max(1) as u64).min(total);
    let size = total.div_ceil(parts);
    (0..parts)
        .map(|i| (i * size, ((i + 1) * size).min(total)))
        .filter(|(a, b)| a < b)
        .collect()
}

/// Counts keyed by distance.
pub type Histogram = BTreeMap<u64, u64>;

/// Counts of genuine split types of size `m`, keyed by `(q, distance)`.
pub type SplitTypeHistogram = BTreeMap<(usize, u64), u64>;

type Cache<K, V> = Mutex<HashMap<K, Arc<V>>>;

/// Enumeration engine: owns the configuration, an optional dedicated thread
/// pool, and memoized histograms and tables.
pub struct Enumerator {
    config: EnumConfig,
    pool: Option<rayon::ThreadPool>,
    full: Cache<(Metric, usize), Histogram>,
    connected: Cache<(Metric, usize), Histogram>,
    split_types: Cache<(Metric, usize), SplitTypeHistogram>,
    tables: Cache<(Metric, u64, usize, usize), BetaTable>,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self::new(EnumConfig::default())
    }
}

impl Enumerator {
    /// Panics if a dedicated pool was requested and cannot be created; use
    /// [`Enumerator::try_new`] to handle that case.
    pub fn new(config: EnumConfig) -> Self {
        Self::try_new(config).expect("failed to build thread pool")
    }

    pub fn try_new(config: EnumConfig) -> Result<Self, EnumError> {
        let pool = match config.threads {
            Some(n) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| EnumError::ThreadPool(e.to_string()))?,
            ),
            None => None,
        };
        Ok(Self {
            config,
            pool,
            full: Mutex::default(),
            connected: Mutex::default(),
            split_types: Mutex::default(),
            tables: Mutex::default(),
        })
    }

    pub fn config(&self) -> &EnumConfig {
        &self.config
    }

    fn threads(&self) -> usize {
        match &self.pool {
            Some(pool) => pool.current_num_threads(),
            None => rayon::current_num_threads(),
        }
    }

    fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }

    /// Parallel fold over all words of `S_m`, chunked by rank.
    fn fold_group<A, F>(&self, m: usize, fold: F) -> Result<A, EnumError>
    where
        A: Default + Send + MergeCounts,
        F: Fn(&mut A, &[u32]) + Sync,
    {
        self.config.check(m)?;
        let chunks = partition_ranks(m, self.threads() * 16);
        Ok(self.install(|| {
            chunks
                .into_par_iter()
                .map(|(start, end)| {
                    let mut acc = A::default();
                    LexPermutations::range(m, start, end).for_each_word(|w| fold(&mut acc, w));
                    acc
                })
                .reduce(A::default, |mut a, b| {
                    a.merge(b);
                    a
                })
        }))
    }

    fn memo<K, V>(
        cache: &Cache<K, V>,
        key: K,
        build: impl FnOnce() -> Result<V, EnumError>,
    ) -> Result<Arc<V>, EnumError>
    where
        K: std::hash::Hash + Eq,
    {
        if let Some(v) = cache.lock().unwrap().get(&key) {
            return Ok(Arc::clone(v));
        }
        let value = Arc::new(build()?);
        Ok(Arc::clone(
            cache.lock().unwrap().entry(key).or_insert(value),
        ))
    }

    /// Distance distribution over all of `S_n`.
    pub fn distance_histogram(
        &self,
        metric: Metric,
        n: usize,
    ) -> Result<Arc<Histogram>, EnumError> {
        Self::memo(&self.full, (metric, n), || {
            self.fold_group(n, |h: &mut Histogram, w| {
                *h.entry(metric.distance_of_word(w)).or_default() += 1;
            })
        })
    }

    /// Distance distribution over the connected permutations of `S_m`.
    pub fn connected_histogram(
        &self,
        metric: Metric,
        m: usize,
    ) -> Result<Arc<Histogram>, EnumError> {
        Self::memo(&self.connected, (metric, m), || {
            if m == 0 {
                return Ok(Histogram::new());
            }
            self.fold_group(m, |h: &mut Histogram, w| {
                if !has_cut(w) {
                    *h.entry(metric.distance_of_word(w)).or_default() += 1;
                }
            })
        })
    }

    /// Genuine split types of size exactly `m` (no fixed-point parts), by
    /// part count and distance: a direct count independent of the convolution.
    pub fn split_type_histogram(
        &self,
        metric: Metric,
        m: usize,
    ) -> Result<Arc<SplitTypeHistogram>, EnumError> {
        Self::memo(&self.split_types, (metric, m), || {
            self.fold_group(m, |h: &mut SplitTypeHistogram, w| {
                if let Some(q) = split_type_parts(w) {
                    *h.entry((q, metric.distance_of_word(w))).or_default() += 1;
                }
            })
        })
    }

    /// `#{u ∈ S_n : D(u) = R}` by exhaustive enumeration.
    pub fn oracle_sphere(
        &self,
        metric: Metric,
        n: usize,
        radius: Radius,
    ) -> Result<BigUint, EnumError> {
        let hist = self.distance_histogram(metric, n)?;
        Ok(BigUint::from(hist.get(&radius.0).copied().unwrap_or(0)))
    }

    /// `#{u ∈ S_n : D(u) <= R}` by exhaustive enumeration.
    pub fn oracle_ball(
        &self,
        metric: Metric,
        n: usize,
        radius: Radius,
    ) -> Result<BigUint, EnumError> {
        let hist = self.distance_histogram(metric, n)?;
        Ok(BigUint::from(
            hist.range(..=radius.0).map(|(_, c)| c).sum::<u64>(),
        ))
    }

    /// Connected permutations of degree `m >= 2` at distance `R`. The
    /// single point `(1)` is connected but never a split-type part, so
    /// `m < 2` gives zero.
    pub fn connected_beta(
        &self,
        metric: Metric,
        radius: Radius,
        m: usize,
    ) -> Result<BigUint, EnumError> {
        if m < 2 {
            return Ok(BigUint::zero());
        }
        let hist = self.connected_histogram(metric, m)?;
        Ok(BigUint::from(hist.get(&radius.0).copied().unwrap_or(0)))
    }

    /// Builds (or fetches) the table exact for every `m <= max_size`.
    pub fn beta_table(
        &self,
        metric: Metric,
        max_radius: Radius,
        max_size: usize,
    ) -> Result<Arc<BetaTable>, EnumError> {
        if !metric.is_additive() {
            return Err(EnumError::NotAdditive(metric));
        }
        let bound = metric
            .growth_bound(max_radius)
            .ok_or(EnumError::NoGrowthBound(metric))?;
        let cap = max_size.min(bound as usize + 1);
        self.beta_table_with_cap(metric, max_radius, max_size, cap)
    }

    /// Like [`Enumerator::beta_table`] but enumerates connected parts only up
    /// to `connected_cap`; entries needing larger parts report `OutOfTable`.
    pub fn beta_table_with_cap(
        &self,
        metric: Metric,
        max_radius: Radius,
        max_size: usize,
        connected_cap: usize,
    ) -> Result<Arc<BetaTable>, EnumError> {
        if !metric.is_additive() {
            return Err(EnumError::NotAdditive(metric));
        }
        let bound = metric
            .growth_bound(max_radius)
            .ok_or(EnumError::NoGrowthBound(metric))?;
        let connected_cap = connected_cap.min(max_size).min(bound as usize + 1);
        Self::memo(
            &self.tables,
            (metric, max_radius.0, max_size, connected_cap),
            || BetaTable::build(self, metric, max_radius, max_size, connected_cap),
        )
    }

    /// `β_D(R, m, q)` through the convolution table.
    pub fn beta(
        &self,
        metric: Metric,
        radius: Radius,
        m: usize,
        q: usize,
    ) -> Result<BigUint, EnumError> {
        self.beta_table(metric, radius, m)?.beta(radius, m, q)
    }

    /// `α_D(R, m, q) = Σ_{r <= R} β_D(r, m, q)`.
    pub fn alpha(
        &self,
        metric: Metric,
        radius: Radius,
        m: usize,
        q: usize,
    ) -> Result<BigUint, EnumError> {
        self.beta_table(metric, radius, m)?.alpha(radius, m, q)
    }

    fn pipeline_table(
        &self,
        metric: Metric,
        n: usize,
        radius: Radius,
    ) -> Result<(Arc<BetaTable>, u64), EnumError> {
        if !metric.is_additive() {
            return Err(EnumError::NotAdditive(metric));
        }
        let bound = metric
            .growth_bound(radius)
            .ok_or(EnumError::NoGrowthBound(metric))?;
        // Split types with m > n never embed in S_n.
        let max_size = n.min(2 * bound as usize);
        Ok((self.beta_table(metric, radius, max_size)?, bound))
    }

    /// `A_{D,n}(R) = Σ_q Σ_m β(R, m, q) [n + q - m choose q]`, valid for every `n`.
    pub fn pipeline_sphere(
        &self,
        metric: Metric,
        n: usize,
        radius: Radius,
    ) -> Result<BigUint, EnumError> {
        let (table, bound) = self.pipeline_table(metric, n, radius)?;
        table.weighted_sum(n, bound, |m, q| table.beta(radius, m, q))
    }

    /// `V_{D,n}(R)` as a sum of pipeline spheres over attainable radii.
    pub fn pipeline_ball(
        &self,
        metric: Metric,
        n: usize,
        radius: Radius,
    ) -> Result<BigUint, EnumError> {
        let (table, _) = self.pipeline_table(metric, n, radius)?;
        let mut total = BigUint::zero();
        for r in (0..=radius.0).step_by(metric.radius_step() as usize) {
            let r = Radius(r);
            let bound = metric.growth_bound(r).expect("bounded metric");
            total += table.weighted_sum(n, bound, |m, q| table.beta(r, m, q))?;
        }
        Ok(total)
    }

    /// `V_{D,n}(R) = Σ_q Σ_m α(R, m, q) [n + q - m choose q]`.
    pub fn pipeline_ball_alpha(
        &self,
        metric: Metric,
        n: usize,
        radius: Radius,
    ) -> Result<BigUint, EnumError> {
        let (table, bound) = self.pipeline_table(metric, n, radius)?;
        table.weighted_sum(n, bound, |m, q| table.alpha(radius, m, q))
    }

    /// Runs the requested routes for a sphere count.
    pub fn sphere_report(
        &self,
        metric: Metric,
        n: usize,
        radius: Radius,
        method: Method,
    ) -> Result<CountReport, EnumError> {
        let pipeline = match method {
            Method::Oracle => None,
            _ => Some(self.pipeline_sphere(metric, n, radius)?),
        };
        let oracle = match method {
            Method::Pipeline => None,
            _ => Some(self.oracle_sphere(metric, n, radius)?),
        };
        Ok(CountReport::new(metric, n, radius, pipeline, oracle))
    }

    /// Runs the requested routes for a ball count.
    pub fn ball_report(
        &self,
        metric: Metric,
        n: usize,
        radius: Radius,
        method: Method,
    ) -> Result<CountReport, EnumError> {
        let pipeline = match method {
            Method::Oracle => None,
            _ => Some(self.pipeline_ball(metric, n, radius)?),
        };
        let oracle = match method {
            Method::Pipeline => None,
            _ => Some(self.oracle_ball(metric, n, radius)?),
        };
        Ok(CountReport::new(metric, n, radius, pipeline, oracle))
    }
}

trait MergeCounts {
    fn merge(&mut self, other: Self);
}

impl<K: Ord> MergeCounts for BTreeMap<K, u64> {
    fn merge(&mut self, other: Self) {
        for (k, v) in other {
            *self.entry(k).or_default() += v;
        }
    }
}

/// Exact `β_D(R, m, q)` for `R <= max_radius`, `m <= max_size`.
///
/// Layer `q` holds the `q`-fold convolution of the connected counts; layer 0
/// is the identity (`β(0, 0, 0) = 1`).
#[derive(Debug, Clone)]
pub struct BetaTable {
    metric: Metric,
    max_radius: u64,
    max_size: usize,
    connected_cap: usize,
    /// `layers[q][m][r]`
    layers: Vec<Vec<Vec<BigUint>>>,
}

impl BetaTable {
    fn build(
        enumerator: &Enumerator,
        metric: Metric,
        max_radius: Radius,
        max_size: usize,
        connected_cap: usize,
    ) -> Result<Self, EnumError> {
        let radii = max_radius.0 as usize + 1;
        let bound = metric
            .growth_bound(max_radius)
            .ok_or(EnumError::NoGrowthBound(metric))? as usize;
        let mut connected = vec![vec![BigUint::zero(); radii]; max_size + 1];
        for (m, row) in connected
            .iter_mut()
            .enumerate()
            .take(connected_cap + 1)
            .skip(2)
        {
            let hist = enumerator.connected_histogram(metric, m)?;
            for (&r, &count) in hist.range(..=max_radius.0) {
                row[r as usize] = BigUint::from(count);
            }
        }

        let mut identity = vec![vec![BigUint::zero(); radii]; max_size + 1];
        identity[0][0] = BigUint::from(1u32);
        let mut layers = vec![identity];
        let q_max = (max_size / 2).min(bound);
        for _ in 1..=q_max {
            let prev = layers.last().unwrap();
            let mut next = vec![vec![BigUint::zero(); radii]; max_size + 1];
            for (m1, conn_row) in connected.iter().enumerate() {
                for (r1, c) in conn_row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (m0, prev_row) in prev.iter().enumerate().take(max_size + 1 - m1) {
                        for (r0, b) in prev_row.iter().enumerate().take(radii - r1) {
                            if !b.is_zero() {
                                next[m0 + m1][r0 + r1] += c * b;
                            }
                        }
                    }
                }
            }
            layers.push(next);
        }
        Ok(Self {
            metric,
            max_radius: max_radius.0,
            max_size,
            connected_cap,
            layers,
        })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn max_radius(&self) -> Radius {
        Radius(self.max_radius)
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    /// Largest connected part size that was enumerated.
    pub fn connected_cap(&self) -> usize {
        self.connected_cap
    }

    fn bound(&self, radius: Radius) -> usize {
        self.metric.growth_bound(radius).unwrap_or(0) as usize
    }

    /// True when `β(R, m, q)` is known exactly from this table.
    pub fn is_exact(&self, radius: Radius, m: usize, q: usize) -> bool {
        if Self::structurally_zero(m, q) || q > self.bound(radius) {
            return true;
        }
        if radius.0 > self.max_radius || m > self.max_size || q >= self.layers.len() {
            return false;
        }
        if q == 0 {
            return true;
        }
        // The largest part has size <= m - 2(q - 1) and <= N(R) + 1.
        let largest_part = (m + 2).saturating_sub(2 * q).min(self.bound(radius) + 1);
        largest_part <= self.connected_cap
    }

    fn structurally_zero(m: usize, q: usize) -> bool {
        m < 2 * q || (q == 0 && m != 0)
    }

    pub fn beta(&self, radius: Radius, m: usize, q: usize) -> Result<BigUint, EnumError> {
        if !self.is_exact(radius, m, q) {
            return Err(EnumError::OutOfTable {
                radius: radius.0,
                m,
                q,
                max_radius: self.max_radius,
                max_size: self.max_size,
                connected_cap: self.connected_cap,
            });
        }
        Ok(self
            .layers
            .get(q)
            .and_then(|layer| layer.get(m))
            .and_then(|row| row.get(radius.0 as usize))
            .cloned()
            .unwrap_or_default())
    }

    pub fn alpha(&self, radius: Radius, m: usize, q: usize) -> Result<BigUint, EnumError> {
        let mut total = BigUint::zero();
        for r in (0..=radius.0).step_by(self.metric.radius_step() as usize) {
            total += self.beta(Radius(r), m, q)?;
        }
        Ok(total)
    }

    /// All nonzero `(m, q, β)` at radius `R`, sorted by `(q, m)`.
    pub fn nonzero_at(&self, radius: Radius) -> Result<Vec<(usize, usize, BigUint)>, EnumError> {
        let bound = self.bound(radius);
        let mut out = Vec::new();
        for q in 0..=bound.min(self.max_size / 2) {
            for m in 2 * q..=(q + bound).min(self.max_size) {
                let b = self.beta(radius, m, q)?;
                if !b.is_zero() {
                    out.push((m, q, b));
                }
            }
        }
        Ok(out)
    }

    fn weighted_sum(
        &self,
        n: usize,
        bound: u64,
        coefficient: impl Fn(usize, usize) -> Result<BigUint, EnumError>,
    ) -> Result<BigUint, EnumError> {
        let bound = bound as usize;
        let mut total = BigUint::zero();
        for q in 0..=bound.min(n / 2) {
            for m in 2 * q..=(q + bound).min(n) {
                let c = coefficient(m, q)?;
                if !c.is_zero() {
                    let weight: BigUint =
                        guarded_binomial(n as i64 + q as i64 - m as i64, q as u64);
                    total += c * weight;
                }
            }
        }
        Ok(total)
    }
}

/// Which routes a count should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Pipeline,
    Oracle,
    Both,
}

/// A count from the pipeline and/or the oracle, with a verdict when both ran.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub metric: Metric,
    pub n: usize,
    pub radius: Radius,
    #[serde(with = "crate::decimal::option")]
    pub pipeline: Option<BigUint>,
    #[serde(with = "crate::decimal::option")]
    pub oracle: Option<BigUint>,
    #[serde(rename = "match")]
    pub matched: Option<bool>,
}

impl CountReport {
    pub fn new(
        metric: Metric,
        n: usize,
        radius: Radius,
        pipeline: Option<BigUint>,
        oracle: Option<BigUint>,
    ) -> Self {
        let matched = match (&pipeline, &oracle) {
            (Some(p), Some(o)) => Some(p == o),
            _ => None,
        };
        Self {
            metric,
            n,
            radius,
            pipeline,
            oracle,
            matched,
        }
    }

    /// The count to display: the pipeline value when present.
    pub fn value(&self) -> Option<&BigUint> {
        self.pipeline.as_ref().or(self.oracle.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn engine() -> Enumerator {
        Enumerator::default()
    }

    #[test]
    fn iterate_group_sizes_and_order() {
        let cfg = EnumConfig::default();
        let s1: Vec<_> = iterate_group(1, &cfg).unwrap().collect();
        assert_eq!(s1.len(), 1);
        assert_eq!(s1[0].word(), &[1]);
        let s3: Vec<_> = iterate_group(3, &cfg)
            .unwrap()
            .map(|p| p.word().to_vec())
            .collect();
        assert_eq!(
            s3,
            vec![
                vec![1, 2, 3],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![2, 3, 1],
                vec![3, 1, 2],
                vec![3, 2, 1]
            ]
        );
        assert!(matches!(
            iterate_group(13, &cfg).err(),
            Some(EnumError::CapExceeded {
                degree: 13,
                cap: 12
            })
        ));
        assert!(matches!(
            iterate_group(11, &cfg).err(),
            Some(EnumError::NeedsConfirmation { degree: 11, .. })
        ));
        let confirmed = EnumConfig {
            allow_large: true,
            ..EnumConfig::default()
        };
        assert!(confirmed.check(12).is_ok());
    }

    #[test]
    fn unrank_matches_successor_order() {
        for m in 0..=6 {
            for (rank, word) in LexPermutations::new(m).enumerate() {
                assert_eq!(unrank(m, rank as u64), word);
            }
        }
    }

    #[test]
    fn rank_partitions_cover_the_group_once() {
        for parts in [1, 3, 7, 1000] {
            let ranges = partition_ranks(5, parts);
            let mut all: Vec<Vec<u32>> = ranges
                .iter()
                .flat_map(|&(a, b)| LexPermutations::range(5, a, b))
                .collect();
            assert_eq!(all.len(), 120);
            all.dedup();
            assert_eq!(all.len(), 120);
        }
    }

    #[test]
    fn oracle_examples() {
        let e = engine();
        assert_eq!(e.oracle_sphere(Metric::L1, 5, Radius(12)).unwrap(), big(20));
        assert_eq!(e.oracle_sphere(Metric::L1, 4, Radius(0)).unwrap(), big(1));
        assert_eq!(e.oracle_sphere(Metric::L1, 4, Radius(8)).unwrap(), big(4));
        assert_eq!(e.oracle_ball(Metric::L1, 4, Radius(2)).unwrap(), big(4));
        assert_eq!(e.oracle_ball(Metric::L1, 4, Radius(0)).unwrap(), big(1));
        let s2 = e.oracle_sphere(Metric::L1, 4, Radius(2)).unwrap();
        let s4 = e.oracle_sphere(Metric::L1, 4, Radius(4)).unwrap();
        assert_eq!(big(1) + s2 + s4, big(11));
        assert_eq!(e.oracle_ball(Metric::L1, 4, Radius(4)).unwrap(), big(11));
    }

    #[test]
    fn connected_examples() {
        let e = engine();
        assert_eq!(e.connected_beta(Metric::L1, Radius(2), 2).unwrap(), big(1));
        assert_eq!(e.connected_beta(Metric::L1, Radius(8), 5).unwrap(), big(27));
        assert_eq!(
            e.connected_beta(Metric::L1, Radius(18), 6).unwrap(),
            big(36)
        );
        assert_eq!(e.connected_beta(Metric::L1, Radius(0), 1).unwrap(), big(0));
        let brute = LexPermutations::new(6)
            .filter(|w| !has_cut(w) && Metric::L1.distance_of_word(w) == 16)
            .count() as u64;
        assert_eq!(brute, 100);
        assert_eq!(
            e.connected_beta(Metric::L1, Radius(16), 6).unwrap(),
            big(brute)
        );
    }

    #[test]
    fn beta_examples() {
        let e = engine();
        for k in 1..=6u64 {
            assert_eq!(
                e.beta(Metric::L1, Radius(2 * k), 2 * k as usize, k as usize)
                    .unwrap(),
                big(1)
            );
        }
        assert_eq!(e.beta(Metric::L1, Radius(20), 8, 2).unwrap(), big(72));
        assert_eq!(e.beta(Metric::L1, Radius(12), 8, 2).unwrap(), big(405));
        assert_eq!(
            e.beta(Metric::Hamming, Radius(2), 2, 1),
            Err(EnumError::NotAdditive(Metric::Hamming))
        );
    }

    #[test]
    fn alpha_examples() {
        let e = engine();
        assert_eq!(e.alpha(Metric::L1, Radius(2), 2, 1).unwrap(), big(1));
        assert_eq!(e.alpha(Metric::L1, Radius(4), 2, 1).unwrap(), big(1));
        let brute = LexPermutations::new(4)
            .filter(|w| !has_cut(w) && Metric::L1.distance_of_word(w) <= 8)
            .count() as u64;
        assert_eq!(brute, 13);
        assert_eq!(e.alpha(Metric::L1, Radius(8), 4, 1).unwrap(), big(brute));
    }

    #[test]
    fn pipeline_examples() {
        let e = engine();
        assert_eq!(
            e.pipeline_sphere(Metric::L1, 5, Radius(12)).unwrap(),
            big(20)
        );
        assert_eq!(e.pipeline_sphere(Metric::L1, 7, Radius(2)).unwrap(), big(6));
        assert_eq!(
            e.pipeline_sphere(Metric::L1, 7, Radius(12)).unwrap(),
            e.oracle_sphere(Metric::L1, 7, Radius(12)).unwrap()
        );
        assert_eq!(
            e.pipeline_sphere(Metric::L1, 7, Radius(12)).unwrap(),
            big(591)
        );
        assert_eq!(e.pipeline_sphere(Metric::L1, 7, Radius(3)).unwrap(), big(0));
        assert_eq!(e.pipeline_ball(Metric::L1, 4, Radius(4)).unwrap(), big(11));
        assert_eq!(e.pipeline_ball(Metric::L1, 5, Radius(0)).unwrap(), big(1));
        assert_eq!(e.pipeline_ball(Metric::L1, 6, Radius(2)).unwrap(), big(6));
    }

    #[test]
    fn table_refuses_entries_it_cannot_know() {
        let e = engine();
        let t = e
            .beta_table_with_cap(Metric::L1, Radius(20), 20, 6)
            .unwrap();
        assert_eq!(t.beta(Radius(20), 8, 2).unwrap(), big(72));
        assert!(matches!(
            t.beta(Radius(20), 11, 1),
            Err(EnumError::OutOfTable { .. })
        ));
        assert_eq!(t.beta(Radius(20), 3, 2).unwrap(), big(0));
    }

    #[test]
    fn oracle_matches_pipeline_for_small_groups() {
        let e = engine();
        for metric in [Metric::L1, Metric::Kendall] {
            for n in 1..=6 {
                let max = Metric::max_distance(metric, n, e.config()).unwrap().0;
                for r in 0..=max + 2 {
                    let r = Radius(r);
                    assert_eq!(
                        e.pipeline_sphere(metric, n, r).unwrap(),
                        e.oracle_sphere(metric, n, r).unwrap(),
                        "{metric} n={n} r={r}"
                    );
                    let ball = e.oracle_ball(metric, n, r).unwrap();
                    assert_eq!(e.pipeline_ball(metric, n, r).unwrap(), ball);
                    assert_eq!(e.pipeline_ball_alpha(metric, n, r).unwrap(), ball);
                }
            }
        }
    }

    #[test]
    fn convolution_matches_direct_split_types() {
        let e = engine();
        for metric in [Metric::L1, Metric::Kendall] {
            for m in 2..=7 {
                let direct = e.split_type_histogram(metric, m).unwrap();
                let max = metric.max_distance(m, e.config()).unwrap().0;
                for r in 0..=max {
                    for q in 1..=m / 2 {
                        let expected = direct.get(&(q, r)).copied().unwrap_or(0);
                        assert_eq!(
                            e.beta(metric, Radius(r), m, q).unwrap(),
                            big(expected),
                            "{metric} r={r} m={m} q={q}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn report_verdicts() {
        let e = engine();
        let r = e
            .sphere_report(Metric::L1, 5, Radius(12), Method::Both)
            .unwrap();
        assert_eq!(r.matched, Some(true));
        assert_eq!(r.value(), Some(&big(20)));
        let r = e
            .sphere_report(Metric::Hamming, 5, Radius(2), Method::Oracle)
            .unwrap();
        assert_eq!((r.pipeline, r.matched), (None, None));
        assert_eq!(r.oracle, Some(big(10)));
        let fake = CountReport::new(Metric::L1, 3, Radius(2), Some(big(2)), Some(big(3)));
        assert_eq!(fake.matched, Some(false));
    }

    #[test]
    fn report_json_shape() {
        let r = CountReport::new(Metric::L1, 5, Radius(12), Some(big(20)), None);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"metric": "l1", "n": 5, "radius": 12, "pipeline": "20", "oracle": null, "match": null})
        );
        let back: CountReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn dedicated_pool_gives_same_counts() {
        let single = Enumerator::new(EnumConfig::single_threaded());
        let multi = Enumerator::new(EnumConfig {
            threads: Some(4),
            ..EnumConfig::default()
        });
        assert_eq!(
            single.distance_histogram(Metric::Kendall, 7).unwrap(),
            multi.distance_histogram(Metric::Kendall, 7).unwrap()
        );
    }
}
