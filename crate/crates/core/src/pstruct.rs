//! Linearly ordered sets with a partition into `n` parts, and the projection
//! from two-part structures onto tournaments.
//!
//! The order of a [`PnStructure`] is the position order, so an isomorphism
//! between two of them is forced to be the rank map. Two structures are
//! therefore isomorphic exactly when their part words are equal, and
//! "pairwise non-isomorphic extensions" simply means "distinct words".

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tournament::{Tournament, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnError {
    #[error("part {part} at position {position} is outside 1..={n_parts}")]
    PartOutOfRange {
        position: usize,
        part: u8,
        n_parts: u8,
    },
    #[error("number of parts must be at least 1")]
    NoParts,
    #[error("projection needs exactly two parts, got {0}")]
    NotTwoParts(u8),
    #[error("operation needs a nonempty structure")]
    Empty,
    #[error("structures with more than {MAX_VERTICES} elements are not supported")]
    TooLarge,
    #[error("invalid character {found:?} at position {position}")]
    Parse { position: usize, found: char },
}

/// A finite linear order with an `n_parts`-partition, stored as the word of
/// parts read in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PnStructure {
    n_parts: u8,
    parts: Vec<u8>,
}

impl PnStructure {
    pub fn new(n_parts: u8, parts: Vec<u8>) -> Result<Self, PnError> {
        if n_parts == 0 {
            return Err(PnError::NoParts);
        }
        if parts.len() > MAX_VERTICES {
            return Err(PnError::TooLarge);
        }
        if let Some((position, &part)) = parts
            .iter()
            .enumerate()
            .find(|(_, &p)| p == 0 || p > n_parts)
        {
            return Err(PnError::PartOutOfRange {
                position,
                part,
                n_parts,
            });
        }
        Ok(PnStructure { n_parts, parts })
    }

    /// Parses a word such as `"121"`. `n_parts` defaults to the largest digit.
    pub fn parse_word(word: &str, n_parts: Option<u8>) -> Result<Self, PnError> {
        let mut parts = Vec::with_capacity(word.len());
        for (position, c) in word.trim().chars().enumerate() {
            match c.to_digit(10) {
                Some(d) if d >= 1 => parts.push(d as u8),
                _ => return Err(PnError::Parse { position, found: c }),
            }
        }
        let n = n_parts.unwrap_or_else(|| parts.iter().copied().max().unwrap_or(1));
        PnStructure::new(n, parts)
    }

    pub fn n_parts(&self) -> u8 {
        self.n_parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    pub fn part(&self, k: usize) -> u8 {
        self.parts[k]
    }

    pub fn word(&self) -> String {
        self.parts.iter().map(|p| p.to_string()).collect()
    }

    /// Substructure on the given positions, taken in increasing order.
    pub fn restrict(&self, positions: &[usize]) -> PnStructure {
        let mut pos = positions.to_vec();
        pos.sort_unstable();
        PnStructure {
            n_parts: self.n_parts,
            parts: pos.into_iter().map(|p| self.parts[p]).collect(),
        }
    }

    /// All words of length `len` over `n_parts` letters, in lexicographic order.
    pub fn all_words(n_parts: u8, len: usize) -> impl Iterator<Item = PnStructure> {
        let total = (n_parts as u64).pow(len as u32);
        (0..total).map(move |mut idx| {
            let mut parts = vec![1u8; len];
            for slot in parts.iter_mut().rev() {
                *slot = (idx % n_parts as u64) as u8 + 1;
                idx /= n_parts as u64;
            }
            PnStructure { n_parts, parts }
        })
    }

    /// Order- and part-preserving embedding into `host`, found greedily.
    pub fn embeds_into(&self, host: &PnStructure) -> Option<Vec<usize>> {
        let mut image = Vec::with_capacity(self.len());
        let mut next = 0;
        for &p in &self.parts {
            let at = (next..host.len()).find(|&k| host.parts[k] == p)?;
            image.push(at);
            next = at + 1;
        }
        Some(image)
    }
}

impl fmt::Debug for PnStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}[{}]", self.n_parts, self.word())
    }
}

impl fmt::Display for PnStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl FromStr for PnStructure {
    type Err = PnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PnStructure::parse_word(s, None)
    }
}

/// The extensions of a tournament: all two-part words projecting onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSet {
    pub base: Tournament,
    pub representatives: Vec<PnStructure>,
}

impl ExtensionSet {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn index_of(&self, a: &PnStructure) -> Option<usize> {
        self.representatives.binary_search(a).ok()
    }
}

/// Tournament of a two-part structure: for positions `i < j`, `i -> j` when
/// both lie in the same part and `j -> i` otherwise.
pub fn project(a: &PnStructure) -> Result<Tournament, PnError> {
    if a.n_parts != 2 {
        return Err(PnError::NotTwoParts(a.n_parts));
    }
    Ok(project_parts(&a.parts))
}

pub(crate) fn project_parts(parts: &[u8]) -> Tournament {
    Tournament::from_fn(parts.len(), |i, j| parts[i] == parts[j])
}

pub fn pn_isomorphic(a: &PnStructure, b: &PnStructure) -> bool {
    a.parts == b.parts
}

/// Every word in `{1,2}^|x|` whose projection is isomorphic to `x`, sorted.
pub fn enumerate_extensions(x: &Tournament) -> ExtensionSet {
    let target = x.canonical_code();
    let representatives = PnStructure::all_words(2, x.len())
        .filter(|w| project_parts(&w.parts).canonical_code() == target)
        .collect();
    ExtensionSet {
        base: x.clone(),
        representatives,
    }
}

/// Moves the least element to the top of the order and switches its part.
/// The projection is unchanged up to relabelling: every pair involving the
/// moved element swaps both its order and its same-part status.
pub fn rotate_extension(a: &PnStructure) -> Result<PnStructure, PnError> {
    if a.n_parts != 2 {
        return Err(PnError::NotTwoParts(a.n_parts));
    }
    let (&first, rest) = a.parts.split_first().ok_or(PnError::Empty)?;
    let mut parts = rest.to_vec();
    parts.push(3 - first);
    Ok(PnStructure { n_parts: 2, parts })
}

/// Finite stand-in for the dense `n`-partitioned rationals: `1 2 … n`
/// repeated `depth` times. Every `n` consecutive positions meet every part.
pub fn qn_dense_model(n: u8, depth: usize) -> Result<PnStructure, PnError> {
    if n == 0 {
        return Err(PnError::NoParts);
    }
    let parts: Vec<u8> = (0..depth).flat_map(|_| 1..=n).collect();
    PnStructure::new(n, parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::{automorphism_count, is_isomorphic};

    fn w(s: &str) -> PnStructure {
        PnStructure::parse_word(s, Some(2)).unwrap()
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(&w("111")).unwrap(), Tournament::transitive(3));
        let c = project(&w("121")).unwrap();
        // 1 -> 3, 2 -> 1, 3 -> 2 in one-based labels
        assert!(c.arc(0, 2) && c.arc(1, 0) && c.arc(2, 1));
        let t = project(&w("122")).unwrap();
        assert!(t.arc(1, 0) && t.arc(2, 0) && t.arc(1, 2));
        assert!(is_isomorphic(&t, &Tournament::transitive(3)).is_some());
        assert_eq!(
            project(&PnStructure::parse_word("123", None).unwrap()),
            Err(PnError::NotTwoParts(3))
        );
    }

    #[test]
    fn isomorphism_is_word_equality() {
        assert!(pn_isomorphic(&w("121"), &w("121")));
        assert!(!pn_isomorphic(&w("11"), &w("12")));
        assert!(!pn_isomorphic(&w("12"), &w("21")));
    }

    #[test]
    fn extension_examples() {
        let point = enumerate_extensions(&Tournament::point());
        assert_eq!(point.representatives, vec![w("1"), w("2")]);
        let cycle = enumerate_extensions(&project(&w("121")).unwrap());
        assert_eq!(cycle.representatives, vec![w("121"), w("212")]);
        assert_eq!(enumerate_extensions(&Tournament::transitive(2)).len(), 4);
        assert_eq!(enumerate_extensions(&Tournament::transitive(3)).len(), 6);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotate_extension(&w("121")).unwrap(), w("212"));
        let start = w("11212");
        let mut cur = start.clone();
        for _ in 0..2 * start.len() {
            cur = rotate_extension(&cur).unwrap();
        }
        assert_eq!(cur, start);
        assert_eq!(
            rotate_extension(&PnStructure::new(2, vec![]).unwrap()),
            Err(PnError::Empty)
        );
    }

    #[test]
    fn rotation_preserves_projection() {
        for len in 1..=5 {
            for a in PnStructure::all_words(2, len) {
                let r = rotate_extension(&a).unwrap();
                let (pa, pr) = (project(&a).unwrap(), project(&r).unwrap());
                assert!(is_isomorphic(&pa, &pr).is_some(), "{a:?}");
            }
        }
    }

    #[test]
    fn rotation_orbit_covers_extensions() {
        for len in 1..=5 {
            for a in PnStructure::all_words(2, len) {
                let x = project(&a).unwrap();
                let ext = enumerate_extensions(&x);
                let mut orbit = vec![a.clone()];
                let mut cur = a.clone();
                for _ in 1..2 * len {
                    cur = rotate_extension(&cur).unwrap();
                    orbit.push(cur.clone());
                }
                orbit.sort();
                orbit.dedup();
                assert_eq!(orbit, ext.representatives, "orbit of {a:?}");
                assert_eq!(ext.len() * automorphism_count(&x), 2 * len);
            }
        }
    }

    #[test]
    fn dense_model_examples() {
        assert_eq!(qn_dense_model(2, 2).unwrap(), w("1212"));
        assert_eq!(
            qn_dense_model(1, 4).unwrap(),
            PnStructure::parse_word("1111", None).unwrap()
        );
        for depth in 1..=4 {
            let host = qn_dense_model(2, depth).unwrap();
            for len in 0..=depth {
                for a in PnStructure::all_words(2, len) {
                    let image = a.embeds_into(&host).expect("embeds");
                    assert!(image.windows(2).all(|p| p[0] < p[1]));
                    assert!(image
                        .iter()
                        .zip(a.parts())
                        .all(|(&k, &p)| host.part(k) == p));
                }
            }
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            PnStructure::parse_word("1a", None),
            Err(PnError::Parse {
                position: 1,
                found: 'a'
            })
        ));
        assert!(matches!(
            PnStructure::parse_word("13", Some(2)),
            Err(PnError::PartOutOfRange {
                position: 1,
                part: 3,
                ..
            })
        ));
    }
}
