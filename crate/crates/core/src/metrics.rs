//! Right-invariant distances on permutations.
//!
//! Every distance is reported in its native integer scale: for `ℓp` that is
//! the `p`-th power `Σ |u(i) - i|^p`, for the other metrics the distance
//! itself. Distances between two permutations go through right invariance,
//! `D(u, v) = D(u ∘ v⁻¹)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{EnumConfig, EnumError, Enumerator};
use crate::perm::{cycle_lengths, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("unknown metric {0:?} (expected l1, lp:<p>, linf, hamming, cayley or kendall)")]
    Unknown(String),
    #[error("lp exponent must be an integer >= 1, got {0:?}")]
    BadExponent(String),
}

/// One of the supported right-invariant metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    L1,
    /// `ℓp` for integer `p >= 1`, measured as the `p`-th power.
    Lp(u32),
    Linf,
    Hamming,
    Cayley,
    Kendall,
}

/// A distance value in the metric's native integer scale.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Radius(pub u64);

impl Radius {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Radius {
    fn from(v: u64) -> Self {
        Radius(v)
    }
}

impl Metric {
    pub fn lp(p: u32) -> Result<Self, MetricError> {
        if p == 0 {
            return Err(MetricError::BadExponent(p.to_string()));
        }
        Ok(Metric::Lp(p))
    }

    /// `D(π + ρ) = D(π) + D(ρ)` holds.
    pub fn is_additive(self) -> bool {
        matches!(self, Metric::L1 | Metric::Kendall | Metric::Lp(1))
    }

    /// `D(u)` depends only on the split type of `u`. True for every metric here.
    pub fn is_split_type_invariant(self) -> bool {
        true
    }

    /// Smallest positive gap between attainable radii: even radii only for `ℓ1`.
    pub fn radius_step(self) -> u64 {
        match self {
            Metric::L1 | Metric::Lp(1) => 2,
            _ => 1,
        }
    }

    pub fn is_attainable_step(self, r: u64) -> bool {
        r.is_multiple_of(self.radius_step())
    }

    /// A bound `N(R)` with `m(σ) - q(σ) <= N(R)` for every split type
    /// within radius `R`, when one exists.
    pub fn growth_bound(self, radius: Radius) -> Option<u64> {
        match self {
            // m - q <= ℓ1/2 <= ℓp^p/2
            Metric::L1 | Metric::Lp(_) => Some(radius.0 / 2),
            // ℓ1 <= 2 I
            Metric::Kendall => Some(radius.0),
            Metric::Linf | Metric::Hamming | Metric::Cayley => None,
        }
    }

    /// `D(u)` for a raw word over `1..=len`.
    pub fn distance_of_word(self, word: &[u32]) -> u64 {
        match self {
            Metric::L1 | Metric::Lp(1) => word
                .iter()
                .zip(1u32..)
                .map(|(&v, i)| v.abs_diff(i) as u64)
                .sum(),
            Metric::Lp(p) => {
                let total: u128 = word
                    .iter()
                    .zip(1u32..)
                    .map(|(&v, i)| (v.abs_diff(i) as u128).pow(p))
                    .sum();
                u64::try_from(total).expect("lp distance exceeds u64 range")
            }
            Metric::Linf => word
                .iter()
                .zip(1u32..)
                .map(|(&v, i)| v.abs_diff(i) as u64)
                .max()
                .unwrap_or(0),
            Metric::Hamming => word.iter().zip(1u32..).filter(|(&v, i)| v != *i).count() as u64,
            Metric::Cayley => (word.len() - cycle_lengths(word).len()) as u64,
            Metric::Kendall => inversions(word),
        }
    }

    pub fn distance_to_identity(self, u: &Permutation) -> Radius {
        Radius(self.distance_of_word(u.support_word()))
    }

    /// `D(u, v)` computed as `D(u ∘ v⁻¹)`.
    pub fn distance(self, u: &Permutation, v: &Permutation) -> Radius {
        let degree = u.degree().max(v.degree());
        let relative = u.padded(degree).compose(&v.padded(degree).inverse());
        self.distance_to_identity(&relative)
    }

    /// Positionwise formula `D(u, v)` for the metrics that have one
    /// (`ℓp`, `ℓ∞`, Hamming). `None` for the others.
    pub fn distance_positionwise(self, u: &Permutation, v: &Permutation) -> Option<Radius> {
        let degree = u.degree().max(v.degree());
        let diffs = (1..=degree).map(|i| u.apply(i).abs_diff(v.apply(i)) as u128);
        let value = match self {
            Metric::L1 => diffs.sum::<u128>(),
            Metric::Lp(p) => diffs.map(|d| d.pow(p)).sum(),
            Metric::Linf => diffs.max().unwrap_or(0),
            Metric::Hamming => diffs.filter(|&d| d != 0).count() as u128,
            Metric::Cayley | Metric::Kendall => return None,
        };
        Some(Radius(
            u64::try_from(value).expect("distance exceeds u64 range"),
        ))
    }

    /// Maximum of `D` over `S_m`. Closed form for `ℓ1`, exhaustive search
    /// (bounded by the enumeration cap) otherwise.
    pub fn max_distance(self, m: usize, config: &EnumConfig) -> Result<Radius, EnumError> {
        match self {
            Metric::L1 | Metric::Lp(1) => Ok(Radius(max_l1(m))),
            _ => {
                let enumerator = Enumerator::new(config.clone());
                let hist = enumerator.distance_histogram(self, m)?;
                Ok(Radius(hist.keys().next_back().copied().unwrap_or(0)))
            }
        }
    }
}

/// `⌊m²/2⌋`: `2r²` for `m = 2r` and `2r² + 2r` for `m = 2r + 1`.
pub fn max_l1(m: usize) -> u64 {
    let r = (m / 2) as u64;
    if m.is_multiple_of(2) {
        2 * r * r
    } else {
        2 * r * r + 2 * r
    }
}

/// Inversion count `#{i < j : w(i) > w(j)}` via a Fenwick tree.
pub fn inversions(word: &[u32]) -> u64 {
    let n = word.len();
    if n < 16 {
        let mut count = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if word[i] > word[j] {
                    count += 1;
                }
            }
        }
        return count;
    }
    let mut tree = vec![0u64; n + 1];
    let mut count = 0u64;
    for (seen, &v) in word.iter().enumerate() {
        let mut idx = v as usize;
        let mut below = 0;
        while idx > 0 {
            below += tree[idx];
            idx &= idx - 1;
        }
        count += seen as u64 - below;
        let mut idx = v as usize;
        while idx <= n {
            tree[idx] += 1;
            idx += idx & idx.wrapping_neg();
        }
    }
    count
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::L1 => f.write_str("l1"),
            Metric::Lp(p) => write!(f, "lp:{p}"),
            Metric::Linf => f.write_str("linf"),
            Metric::Hamming => f.write_str("hamming"),
            Metric::Cayley => f.write_str("cayley"),
            Metric::Kendall => f.write_str("kendall"),
        }
    }
}

impl FromStr for Metric {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "l1" => Ok(Metric::L1),
            "linf" => Ok(Metric::Linf),
            "hamming" => Ok(Metric::Hamming),
            "cayley" => Ok(Metric::Cayley),
            "kendall" => Ok(Metric::Kendall),
            other => match other.strip_prefix("lp:") {
                Some(p) => {
                    let p: u32 = p
                        .parse()
                        .map_err(|_| MetricError::BadExponent(p.to_string()))?;
                    Metric::lp(p)
                }
                None => Err(MetricError::Unknown(s.to_string())),
            },
        }
    }
}

impl Serialize for Metric {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
