//! Permutations in one-line notation, concatenation, cuts and split types.
//!
//! A [`Permutation`] is an element of the group of permutations of the
//! positive integers that fix all but finitely many points. Its word may
//! carry trailing fixed points; equality and hashing ignore them, so the
//! permutation `(21)` and `(213)` are the same group element.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::scalar::guarded_binomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("invalid token {0:?}: expected a positive integer")]
    BadToken(String),
    #[error("non-positive value {0}: values are 1-based")]
    NonPositive(i64),
    #[error("duplicate value {0}")]
    Duplicate(u32),
    #[error("value {value} out of range for a word of length {len}")]
    OutOfRange { value: u32, len: usize },
    #[error("connectivity is undefined for the empty permutation")]
    EmptyWord,
}

/// A permutation given by its one-line word `u(1) u(2) ... u(n)`.
#[derive(Clone, Default)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    /// The identity of `S_n`, written with `n` fixed points.
    pub fn identity(degree: usize) -> Self {
        Self {
            word: (1..=degree as u32).collect(),
        }
    }

    /// Builds a permutation from a word, checking that it rearranges `1..=len`.
    pub fn from_word(word: Vec<u32>) -> Result<Self, PermError> {
        let len = word.len();
        let mut seen = vec![false; len + 1];
        for &value in &word {
            if value == 0 {
                return Err(PermError::NonPositive(0));
            }
            if value as usize > len {
                return Err(PermError::OutOfRange { value, len });
            }
            if std::mem::replace(&mut seen[value as usize], true) {
                return Err(PermError::Duplicate(value));
            }
        }
        Ok(Self { word })
    }

    /// Wraps a word that is already known to be valid.
    pub(crate) fn from_word_unchecked(word: Vec<u32>) -> Self {
        debug_assert!(Self::from_word(word.clone()).is_ok());
        Self { word }
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    /// The image of the 1-based point `i`; points beyond the word are fixed.
    pub fn apply(&self, i: usize) -> usize {
        match self.word.get(i.wrapping_sub(1)) {
            Some(&v) => v as usize,
            None => i,
        }
    }

    /// The word with trailing fixed points removed.
    pub fn support_word(&self) -> &[u32] {
        let mut end = self.word.len();
        while end > 0 && self.word[end - 1] as usize == end {
            end -= 1;
        }
        &self.word[..end]
    }

    /// Smallest `n` with the permutation in `S_n`.
    pub fn support_degree(&self) -> usize {
        self.support_word().len()
    }

    pub fn is_identity(&self) -> bool {
        self.support_word().is_empty()
    }

    /// The same element written in `S_degree`. Panics if `degree` is smaller
    /// than the support.
    pub fn padded(&self, degree: usize) -> Self {
        let support = self.support_word();
        assert!(support.len() <= degree, "cannot shrink below the support");
        let mut word = support.to_vec();
        word.extend(support.len() as u32 + 1..=degree as u32);
        Self { word }
    }

    pub fn inverse(&self) -> Self {
        let mut word = vec![0u32; self.word.len()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v as usize - 1] = i as u32 + 1;
        }
        Self { word }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        let degree = self.degree().max(other.degree());
        let word = (1..=degree)
            .map(|i| self.apply(other.apply(i)) as u32)
            .collect();
        Self { word }
    }

    /// Cycle lengths over the written degree, fixed points included.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        cycle_lengths(&self.word)
    }

    /// Concatenation `self + other`: `other`'s word shifted by `deg(self)`.
    pub fn concat(&self, other: &Self) -> Self {
        let shift = self.word.len() as u32;
        let mut word = Vec::with_capacity(self.word.len() + other.word.len());
        word.extend_from_slice(&self.word);
        word.extend(other.word.iter().map(|v| v + shift));
        Self { word }
    }

    /// Positions `1 <= i < degree` where the word maps `[1, i]` onto itself.
    pub fn cuts(&self) -> Vec<usize> {
        cut_positions(&self.word)
    }

    /// Connected means no cut. The empty word is rejected.
    pub fn is_connected(&self) -> Result<bool, PermError> {
        if self.word.is_empty() {
            return Err(PermError::EmptyWord);
        }
        Ok(!has_cut(&self.word))
    }

    pub fn split_decompose(&self) -> SplitDecomposition {
        let cut_positions = self.cuts();
        let mut parts = Vec::with_capacity(cut_positions.len() + 1);
        let mut start = 0usize;
        for end in cut_positions
            .iter()
            .copied()
            .chain(std::iter::once(self.degree()))
        {
            if end > start {
                let base = start as u32;
                let slice = self.word[start..end].iter().map(|v| v - base).collect();
                parts.push(Permutation::from_word_unchecked(slice));
            }
            start = end;
        }
        SplitDecomposition {
            parts,
            cut_positions,
        }
    }

    pub fn split_type(&self) -> SplitType {
        let parts = self
            .split_decompose()
            .parts
            .into_iter()
            .filter(|p| p.degree() >= 2)
            .collect();
        SplitType::from_parts_unchecked(parts)
    }
}

pub(crate) fn cut_positions(word: &[u32]) -> Vec<usize> {
    let mut running_max = 0u32;
    let mut cuts = Vec::new();
    for (idx, &v) in word.iter().enumerate().take(word.len().saturating_sub(1)) {
        running_max = running_max.max(v);
        if running_max as usize == idx + 1 {
            cuts.push(idx + 1);
        }
    }
    cuts
}

pub(crate) fn has_cut(word: &[u32]) -> bool {
    let mut running_max = 0u32;
    for (idx, &v) in word.iter().enumerate().take(word.len().saturating_sub(1)) {
        running_max = running_max.max(v);
        if running_max as usize == idx + 1 {
            return true;
        }
    }
    false
}

/// True when every part of the split decomposition has degree at least 2,
/// i.e. the word is itself a split type of degree `word.len()`.
pub(crate) fn split_type_parts(word: &[u32]) -> Option<usize> {
    let mut running_max = 0u32;
    let mut start = 0usize;
    let mut parts = 0usize;
    for (idx, &v) in word.iter().enumerate() {
        running_max = running_max.max(v);
        if running_max as usize == idx + 1 {
            if idx == start {
                return None;
            }
            parts += 1;
            start = idx + 1;
        }
    }
    Some(parts)
}

pub(crate) fn cycle_lengths(word: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; word.len()];
    let mut lengths = Vec::new();
    for start in 0..word.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = word[i] as usize - 1;
            len += 1;
        }
        lengths.push(len);
    }
    lengths
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.support_word() == other.support_word()
    }
}

impl Eq for Permutation {}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.support_word().hash(state);
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation(")?;
        for v in &self.word {
            write!(f, "{v}")?;
            if self.word.len() > 9 {
                write!(f, ",")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.word {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Whitespace- or comma-separated 1-based values.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut word = Vec::new();
        for token in text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let value: i64 = token
                .parse()
                .map_err(|_| PermError::BadToken(token.to_string()))?;
            if value <= 0 {
                return Err(PermError::NonPositive(value));
            }
            let value = u32::try_from(value).map_err(|_| PermError::BadToken(token.to_string()))?;
            word.push(value);
        }
        Self::from_word(word)
    }
}

impl Add for &Permutation {
    type Output = Permutation;

    fn add(self, rhs: &Permutation) -> Permutation {
        self.concat(rhs)
    }
}

impl Add for Permutation {
    type Output = Permutation;

    fn add(self, rhs: Permutation) -> Permutation {
        self.concat(&rhs)
    }
}

/// Unique factorization of a permutation into connected parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDecomposition {
    pub parts: Vec<Permutation>,
    pub cut_positions: Vec<usize>,
}

impl SplitDecomposition {
    pub fn recombine(&self) -> Permutation {
        self.parts
            .iter()
            .fold(Permutation::default(), |acc, p| acc.concat(p))
    }
}

/// Concatenation of the nontrivial connected parts of a permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitType {
    parts: Vec<Permutation>,
    word: Permutation,
}

impl SplitType {
    /// The empty split type, i.e. the split type of the identity.
    pub fn empty() -> Self {
        Self::from_parts_unchecked(Vec::new())
    }

    /// Accepts parts that are each connected and of degree at least 2.
    pub fn from_parts(parts: Vec<Permutation>) -> Result<Self, PermError> {
        for p in &parts {
            if p.degree() < 2 || !p.is_connected()? {
                return Err(PermError::BadToken(format!(
                    "part {p} is not a nontrivial connected permutation"
                )));
            }
        }
        Ok(Self::from_parts_unchecked(parts))
    }

    fn from_parts_unchecked(parts: Vec<Permutation>) -> Self {
        let word = parts
            .iter()
            .fold(Permutation::default(), |acc, p| acc.concat(p));
        Self { parts, word }
    }

    pub fn parts(&self) -> &[Permutation] {
        &self.parts
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.word
    }

    /// Total degree `m(σ)`.
    pub fn m(&self) -> usize {
        self.word.degree()
    }

    /// Number of parts `q(σ)`.
    pub fn q(&self) -> usize {
        self.parts.len()
    }
}

/// Number of permutations in `S_n` with the given split type:
/// `[n + q - m choose q]`.
pub fn count_embeddings(n: usize, sigma: &SplitType) -> BigUint {
    count_embeddings_mq(n, sigma.m(), sigma.q())
}

/// [`count_embeddings`] from the size and part count alone.
pub fn count_embeddings_mq(n: usize, m: usize, q: usize) -> BigUint {
    guarded_binomial(n as i64 + q as i64 - m as i64, q as u64)
}
