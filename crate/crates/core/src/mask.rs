//! Ground sets and subset masks.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set; dense tables hold `2^n` entries.
pub const MAX_GROUND: usize = 28;

/// The universe `{1, …, n}`; element `i` maps to bit `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge { n, max: MAX_GROUND });
        }
        Ok(GroundSet { n })
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n
    }

    /// Number of subsets, `2^n`.
    #[inline]
    pub fn size(self) -> usize {
        1usize << self.n
    }

    #[inline]
    pub fn full(self) -> Mask {
        Mask((self.size() - 1) as u32)
    }

    pub fn masks(self) -> impl Iterator<Item = Mask> {
        (0..self.size() as u32).map(Mask)
    }

    pub fn contains(self, mask: Mask) -> bool {
        (mask.0 as usize) < self.size()
    }

    pub(crate) fn check_same(self, other: GroundSet) -> Result<()> {
        if self != other {
            return Err(Error::GroundMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

/// A subset of the ground set as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mask(pub u32);

impl Mask {
    pub const EMPTY: Mask = Mask(0);

    /// Mask of the given 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Mask {
        Mask(elements.into_iter().fold(0u32, |m, e| m | (1 << (e - 1))))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset_of(self, other: Mask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn contains(self, element: usize) -> bool {
        self.0 >> (element - 1) & 1 == 1
    }

    #[inline]
    pub fn union(self, other: Mask) -> Mask {
        Mask(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Mask) -> Mask {
        Mask(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Mask) -> Mask {
        Mask(self.0 & !other.0)
    }

    #[inline]
    pub fn symmetric_difference(self, other: Mask) -> Mask {
        Mask(self.0 ^ other.0)
    }

    /// 1-based elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |b| bits >> b & 1 == 1).map(|b| b + 1)
    }

    pub fn subsets(self) -> Submasks {
        iterate_subsets(self)
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Every submask of `s` exactly once, in strictly decreasing numeric order
/// from `s` down to the empty set.
pub fn iterate_subsets(s: Mask) -> Submasks {
    Submasks {
        set: s.0,
        next: Some(s.0),
    }
}

#[derive(Debug, Clone)]
pub struct Submasks {
    set: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        let cur = self.next?;
        self.next = if cur == 0 { None } else { Some((cur - 1) & self.set) };
        Some(Mask(cur))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match self.next {
            None => (0, Some(0)),
            Some(_) => (1, Some(1usize << self.set.count_ones())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn collect(s: u32) -> Vec<u32> {
        iterate_subsets(Mask(s)).map(Mask::bits).collect()
    }

    #[test]
    fn submask_order() {
        assert_eq!(collect(0b101), vec![0b101, 0b100, 0b001, 0b000]);
        assert_eq!(collect(0), vec![0]);
        assert_eq!(collect(0b011), vec![0b011, 0b010, 0b001, 0b000]);
    }

    #[test]
    fn ground_cap() {
        assert!(GroundSet::new(28).is_ok());
        assert_eq!(GroundSet::new(29), Err(Error::GroundTooLarge { n: 29, max: 28 }));
        assert_eq!(GroundSet::new(0).unwrap().size(), 1);
    }

    #[test]
    fn element_convention() {
        let m = Mask::from_elements([1, 3]);
        assert_eq!(m.bits(), 0b101);
        assert_eq!(m.elements().collect::<Vec<_>>(), vec![1, 3]);
        assert!(m.contains(3) && !m.contains(2));
        assert_eq!(m.to_string(), "{1,3}");
    }

    proptest! {
        #[test]
        fn submasks_are_exhaustive(s in 0u32..(1 << 12)) {
            let subs = collect(s);
            prop_assert_eq!(subs.len(), 1usize << s.count_ones());
            prop_assert!(subs.windows(2).all(|w| w[0] > w[1]));
            prop_assert!(subs.iter().all(|&t| t & !s == 0));
        }
    }
}
