//! Bit-indexed subsets of a small ground set.

use std::fmt;

/// Largest ground set a [`PointSet`] can index.
pub const MAX_POINTS: usize = 64;

/// A subset of `{0, .., n-1}` stored as a bit mask.
///
/// The point count `n` lives with the owning space; a bare `PointSet` only
/// knows its bits.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    /// The full set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> PointSet {
        debug_assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(i: usize) -> PointSet {
        PointSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> PointSet {
        it.into_iter()
            .fold(PointSet::EMPTY, |acc, i| acc.with(i))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn with(self, i: usize) -> PointSet {
        PointSet(self.0 | (1u64 << i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    /// Complement relative to `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> PointSet {
        PointSet(!self.0 & PointSet::full(n).0)
    }

    #[inline]
    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: PointSet) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn fits(self, n: usize) -> bool {
        self.is_subset(PointSet::full(n))
    }

    /// Indices of the set bits, ascending.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Every subset of `{0, .., n-1}` in increasing bit order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = PointSet> {
        assert!(n < MAX_POINTS, "cannot enumerate all subsets of {n} points");
        (0u64..(1u64 << n)).map(PointSet)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serialized as the ascending list of point indices.
impl serde::Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.iter())
    }
}

impl<'de> serde::Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(de)?;
        if let Some(&i) = v.iter().find(|&&i| i >= MAX_POINTS) {
            return Err(serde::de::Error::custom(format!("point index {i} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet::from_indices(iter)
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Iterates the bit indices of a raw `u64` mask.
#[inline]
pub(crate) fn bits_of(mask: u64) -> Iter {
    Iter(mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_and_subsets() {
        let a = PointSet::from_indices([0, 2]);
        assert_eq!(a.complement(3), PointSet::singleton(1));
        assert!(a.is_subset(PointSet::full(3)));
        assert!(!PointSet::full(3).is_subset(a));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(PointSet::all_subsets(3).count(), 8);
        assert_eq!(PointSet::full(64).len(), 64);
    }
}
