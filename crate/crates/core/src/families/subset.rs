use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

/// The ground set `[n] = {1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return invalid(format!("ground set size must be in 1..={MAX_GROUND}, got {n}"));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, elements: I) -> Result<Subset> {
        Subset::new(self.n, elements)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }
}

/// Mask with the lowest `n` bits set.
#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of `[n]` stored as a bit-set: element `i` lives in bit `i - 1`.
///
/// Subsets are totally ordered by size first and then lexicographically on their
/// ascending element lists. Families, hypergraph vertex lists and the Tucker
/// labeling all use this order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    bits: u64,
    n: u8,
}

impl Subset {
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Result<Self> {
        if n > MAX_GROUND {
            return invalid(format!("ground set size {n} exceeds {MAX_GROUND}"));
        }
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > n {
                return invalid(format!("element {e} outside [1, {n}]"));
            }
            bits |= 1u64 << (e - 1);
        }
        Ok(Self { bits, n: n as u8 })
    }

    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > MAX_GROUND {
            return invalid(format!("ground set size {n} exceeds {MAX_GROUND}"));
        }
        if bits & !low_mask(n) != 0 {
            return invalid(format!("bit pattern {bits:#x} has elements outside [1, {n}]"));
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Caller guarantees `bits` lies inside `[n]`.
    #[inline]
    pub(crate) fn from_bits_unchecked(n: usize, bits: u64) -> Self {
        debug_assert!(bits & !low_mask(n) == 0);
        Self { bits, n: n as u8 }
    }

    pub fn empty(n: usize) -> Self {
        Self { bits: 0, n: n as u8 }
    }

    pub fn full(n: usize) -> Self {
        Self { bits: low_mask(n), n: n as u8 }
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn ground(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        (1..=64).contains(&e) && self.bits >> (e - 1) & 1 == 1
    }

    pub fn min_element(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize + 1)
    }

    pub fn max_element(&self) -> Option<usize> {
        (self.bits != 0).then(|| 64 - self.bits.leading_zeros() as usize)
    }

    /// Ascending elements.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        BitIter(self.bits).map(|b| b + 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.n, other.n);
        Subset { bits: self.bits | other.bits, n: self.n }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.n, other.n);
        Subset { bits: self.bits & other.bits, n: self.n }
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.n, other.n);
        Subset { bits: self.bits & !other.bits, n: self.n }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.bits & !other.bits == 0
    }

    /// `self ⊆_s other`: removing at most `s` elements puts `self` inside `other`.
    #[inline]
    pub fn within_s(&self, other: &Subset, s: usize) -> bool {
        within_s_bits(self.bits, other.bits, s)
    }
}

#[inline]
pub(crate) fn within_s_bits(a: u64, b: u64, s: usize) -> bool {
    ((a & !b).count_ones() as usize) <= s
}

/// Size-then-lex comparison on raw bit patterns.
#[inline]
pub(crate) fn cmp_bits(a: u64, b: u64) -> Ordering {
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Equal if a == b => Ordering::Equal,
        Ordering::Equal => {
            // The first position where the ascending lists differ holds the
            // smallest element of the symmetric difference.
            let low = (a ^ b) & (a ^ b).wrapping_neg();
            if a & low != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        other => other,
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_bits(self.bits, other.bits).then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Iterates the zero-based indices of set bits, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Ascending-numeric iterator over all `k`-element bit patterns inside `[n]`.
pub(crate) fn k_subsets_bits(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = if n >= 64 { None } else { Some(1u64 << n) };
    let first = if k == 0 {
        Some(0)
    } else if k > n {
        None
    } else {
        Some(low_mask(k))
    };
    let mut cur = first;
    std::iter::from_fn(move || {
        let v = cur?;
        cur = if v == 0 {
            None
        } else {
            // Gosper's hack.
            let c = v & v.wrapping_neg();
            let r = v.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let next = (((r ^ v) >> 2) / c) | r;
                match limit {
                    Some(l) if next >= l => None,
                    _ => Some(next),
                }
            }
        };
        Some(v)
    })
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, e: &[usize]) -> Subset {
        Subset::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn order_is_size_then_lex() {
        assert!(set(5, &[5]) < set(5, &[1, 2]));
        assert!(set(5, &[1, 3]) < set(5, &[1, 4]));
        assert!(set(5, &[1, 4]) < set(5, &[2, 3]));
        assert!(set(5, &[1, 2, 5]) < set(5, &[1, 3, 4]));
        assert_eq!(set(5, &[2, 3]).cmp(&set(5, &[2, 3])), Ordering::Equal);
    }

    #[test]
    fn gosper_enumerates_all_k_subsets() {
        for n in 0..=9 {
            for k in 0..=n + 1 {
                let got: Vec<u64> = k_subsets_bits(n, k).collect();
                let want: Vec<u64> =
                    (0..1u64 << n).filter(|b| b.count_ones() as usize == k).collect();
                assert_eq!(got, want, "n={n} k={k}");
            }
        }
        assert_eq!(k_subsets_bits(64, 64).count(), 1);
        assert_eq!(k_subsets_bits(64, 1).count(), 64);
    }

    #[test]
    fn rejects_out_of_range_elements() {
        assert!(Subset::new(4, [5]).is_err());
        assert!(Subset::new(4, [0]).is_err());
        assert!(Subset::from_bits(3, 0b1000).is_err());
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(65).is_err());
    }

    #[test]
    fn min_max_and_display() {
        let a = set(10, &[3, 7, 9]);
        assert_eq!(a.min_element(), Some(3));
        assert_eq!(a.max_element(), Some(9));
        assert_eq!(a.to_string(), "{3,7,9}");
        assert_eq!(Subset::empty(4).min_element(), None);
        assert_eq!(binomial(10, 3), 120);
    }
}
