use std::fmt;

/// Largest population a profile can hold; sets are single-word bitmasks.
pub const MAX_INDIVIDUALS: usize = 64;

/// A set of individuals, stored as a bitmask over indices `0..n`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndividualSet(u64);

impl IndividualSet {
    pub const EMPTY: IndividualSet = IndividualSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        IndividualSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_INDIVIDUALS);
        if n == MAX_INDIVIDUALS {
            IndividualSet(u64::MAX)
        } else {
            IndividualSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(a: usize) -> Self {
        IndividualSet(1u64 << a)
    }

    pub fn contains(self, a: usize) -> bool {
        a < MAX_INDIVIDUALS && self.0 >> a & 1 == 1
    }

    pub fn insert(&mut self, a: usize) {
        self.0 |= 1u64 << a;
    }

    pub fn remove(&mut self, a: usize) {
        self.0 &= !(1u64 << a);
    }

    pub fn with(mut self, a: usize) -> Self {
        self.insert(a);
        self
    }

    pub fn without(mut self, a: usize) -> Self {
        self.remove(a);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        IndividualSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndividualSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndividualSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement relative to `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> Self {
        IndividualSet::full(n).difference(self)
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for IndividualSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for IndividualSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = IndividualSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for IndividualSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
