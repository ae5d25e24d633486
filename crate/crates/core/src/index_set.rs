//! Index sets `I ⊆ {1, …, n}` and the combinatorics of admissibility.
//!
//! The three largest markings `n-2, n-1, n` are *special*: they play the
//! role of the points `0, 1, ∞` on the projective line. An index set is
//! admissible when it contains at most one special element and has between
//! `3` and `n-2` elements; admissible sets label the exceptional divisors.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest marking count representable by the bitmask encoding.
pub const MAX_N: usize = 32;

/// A subset of `{1, …, n}` stored as a bitmask (bit `i-1` encodes `i`).
/// Serde uses the raw `(n, bits)` form; documents meant for people carry
/// element lists instead.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexSet {
    n: u8,
    bits: u32,
}

pub fn check_n(n: usize) -> Result<()> {
    if (3..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidMarkingCount(n))
    }
}

impl IndexSet {
    pub fn new(n: usize, elems: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_n(n)?;
        let mut bits = 0u32;
        for i in elems {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            bits |= 1 << (i - 1);
        }
        Ok(IndexSet { n: n as u8, bits })
    }

    /// Builds a set from a raw bitmask. Bits above `n` are a logic error.
    pub fn from_bits(n: usize, bits: u32) -> Self {
        debug_assert!(n <= MAX_N && (n == MAX_N || bits >> n == 0));
        IndexSet { n: n as u8, bits }
    }

    pub fn empty(n: usize) -> Self {
        IndexSet { n: n as u8, bits: 0 }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n() && self.bits & (1 << (i - 1)) != 0
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.bits;
        (0..32).filter(move |b| bits & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn elems(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset(&self, other: &IndexSet) -> bool {
        self.is_subset(other) && self.bits != other.bits
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet { n: self.n, bits: self.bits | other.bits }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet { n: self.n, bits: self.bits & other.bits }
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet { n: self.n, bits: self.bits & !other.bits }
    }

    pub fn with(&self, i: usize) -> IndexSet {
        IndexSet { n: self.n, bits: self.bits | (1 << (i - 1)) }
    }

    pub fn without(&self, i: usize) -> IndexSet {
        IndexSet { n: self.n, bits: self.bits & !(1 << (i - 1)) }
    }

    /// Mask of the special elements `{n-2, n-1, n}`.
    pub fn specials(n: usize) -> IndexSet {
        IndexSet { n: n as u8, bits: 0b111 << (n - 3) }
    }

    /// `{1, …, n-3}`: the coordinates of `(P^1)^(n-3)`.
    pub fn ordinary(n: usize) -> IndexSet {
        IndexSet { n: n as u8, bits: (1u32 << (n - 3)) - 1 }
    }

    pub fn full(n: usize) -> IndexSet {
        let bits = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        IndexSet { n: n as u8, bits }
    }

    /// The unique special element of `self`, if exactly one is present.
    pub fn special(&self) -> Option<usize> {
        let s = self.intersection(&Self::specials(self.n()));
        (s.len() == 1).then(|| s.first().unwrap())
    }

    pub fn special_count(&self) -> usize {
        self.intersection(&Self::specials(self.n())).len()
    }

    pub fn is_special_free(&self) -> bool {
        self.special_count() == 0
    }

    pub fn is_admissible(&self) -> bool {
        let k = self.len();
        self.special_count() <= 1 && k >= 3 && k + 2 <= self.n()
    }

    /// Nested or disjoint.
    pub fn is_compatible(&self, other: &IndexSet) -> bool {
        self.is_subset(other) || other.is_subset(self) || self.is_disjoint(other)
    }

    /// The total order on subsets: by size, then the set holding the
    /// smallest element of the symmetric difference comes first.
    pub fn cmp_order(&self, other: &IndexSet) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {
                let diff = self.bits ^ other.bits;
                if diff == 0 {
                    Ordering::Equal
                } else if self.bits & (diff & diff.wrapping_neg()) != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            o => o,
        }
    }

    pub fn order_less(&self, other: &IndexSet) -> bool {
        self.cmp_order(other) == Ordering::Less
    }

    /// Render as `{1,2,3}`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Element-list form used in JSON documents.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct IndexSetRepr(pub Vec<usize>);

/// Checked admissibility: errors on elements outside `{1..n}`.
pub fn is_admissible(n: usize, elems: &[usize]) -> Result<bool> {
    Ok(IndexSet::new(n, elems.iter().copied())?.is_admissible())
}

/// All admissible index sets for `n`, sorted by [`IndexSet::cmp_order`].
pub fn admissible_sets(n: usize) -> Vec<IndexSet> {
    let full = IndexSet::full(n);
    let mut out: Vec<IndexSet> = (0..=full.bits())
        .map(|b| IndexSet::from_bits(n, b))
        .filter(|s| s.is_admissible())
        .collect();
    out.sort_by(|a, b| a.cmp_order(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, e: &[usize]) -> IndexSet {
        IndexSet::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(set(6, &[1, 2, 3]).is_admissible());
        assert!(!set(6, &[4, 5, 6]).is_admissible());
        assert!(!set(6, &[1, 2]).is_admissible());
        assert!(set(6, &[1, 2, 3, 4]).is_admissible());
        assert!(!set(6, &[1, 2, 3, 4, 5]).is_admissible());
        assert!(matches!(
            is_admissible(6, &[1, 7]),
            Err(Error::IndexOutOfRange { index: 7, n: 6 })
        ));
        assert!(matches!(is_admissible(6, &[0]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn compatibility_examples() {
        assert!(!set(6, &[1, 2, 3]).is_compatible(&set(6, &[2, 3, 4])));
        assert!(set(6, &[1, 2, 3]).is_compatible(&set(6, &[1, 2, 3, 4])));
        assert!(set(7, &[1, 2, 4]).is_compatible(&set(7, &[3, 5, 6])));
    }

    #[test]
    fn compatibility_is_symmetric_and_reflexive() {
        let sets = admissible_sets(7);
        for a in &sets {
            assert!(a.is_compatible(a));
            for b in &sets {
                assert_eq!(a.is_compatible(b), b.is_compatible(a));
            }
        }
    }

    #[test]
    fn subset_order_examples() {
        assert!(set(6, &[1, 2, 3]).order_less(&set(6, &[1, 2, 3, 4])));
        assert!(set(6, &[1, 2, 3]).order_less(&set(6, &[1, 2, 4])));
        assert!(set(20, &[12, 13, 18]).order_less(&set(20, &[14, 15, 19])));
        assert!(!set(20, &[14, 15, 19]).order_less(&set(20, &[12, 13, 18])));
    }

    #[test]
    fn equal_size_order_is_lexicographic() {
        for n in 3..=8 {
            let all: Vec<IndexSet> =
                (0..(1u32 << n)).map(|b| IndexSet::from_bits(n, b)).collect();
            for a in &all {
                for b in &all {
                    if a.len() == b.len() && a != b {
                        assert_eq!(a.cmp_order(b), a.elems().cmp(&b.elems()), "{a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn admissible_counts() {
        assert_eq!(admissible_sets(4).len(), 0);
        assert_eq!(admissible_sets(5).len(), 3);
        assert_eq!(admissible_sets(6).len(), 13);
        assert_eq!(admissible_sets(7).len(), 38);
    }

    #[test]
    fn specials_and_ordinary() {
        assert_eq!(IndexSet::specials(6).elems(), vec![4, 5, 6]);
        assert_eq!(IndexSet::ordinary(6).elems(), vec![1, 2, 3]);
        assert_eq!(set(6, &[2, 3, 4]).special(), Some(4));
        assert_eq!(set(6, &[1, 2, 3]).special(), None);
    }
}
