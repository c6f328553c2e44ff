//! Point sets over a local index range. Up to 128 points live inline, so
//! cloning inside the search loops does not touch the allocator.

use smallvec::{smallvec, SmallVec};

const WORD: usize = 64;

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Bits {
    words: SmallVec<[u64; 2]>,
}

impl Clone for Bits {
    #[inline]
    fn clone(&self) -> Self {
        Bits { words: SmallVec::from_slice(&self.words) }
    }

    #[inline]
    fn clone_from(&mut self, source: &Self) {
        self.words.clear();
        self.words.extend_from_slice(&source.words);
    }
}

impl Bits {
    pub fn with_capacity(n: usize) -> Self {
        Bits { words: smallvec![0; n.div_ceil(WORD)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::with_capacity(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let used = (n - lo).min(WORD);
            *w = if used == WORD { u64::MAX } else { (1u64 << used) - 1 };
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn set(&mut self, i: usize, on: bool) {
        if on {
            self.insert(i);
        } else {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / WORD).is_some_and(|w| w >> (i % WORD) & 1 == 1)
    }

    #[cfg(test)]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_clear(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_disjoint(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    #[cfg(test)]
    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.words
    }

    /// Members in increasing order.
    pub fn ones(&self) -> Ones<'_> {
        Ones { words: &self.words, index: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    /// Members of `self` missing from `other`.
    pub fn difference<'a>(&'a self, other: &'a Bits) -> impl Iterator<Item = usize> + 'a {
        self.ones().filter(|&i| !other.contains(i))
    }
}

pub(crate) struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.index * WORD + bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops_across_words() {
        let mut a = Bits::with_capacity(130);
        for i in [0, 5, 63, 64, 129] {
            a.insert(i);
        }
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![0, 5, 63, 64, 129]);
        assert_eq!(a.count_ones(), 5);
        let full = Bits::full(130);
        assert_eq!(full.count_ones(), 130);
        assert!(a.is_subset(&full));
        let mut b = full.clone();
        b.difference_with(&a);
        assert!(b.is_disjoint(&a));
        assert_eq!(b.count_ones(), 125);
        a.set(64, false);
        assert!(!a.contains(64) && a.contains(63));
        assert_eq!(full.difference(&b).collect::<Vec<_>>(), vec![0, 5, 63, 64, 129]);
        let mut c = a.clone();
        c.intersect_with(&b);
        assert!(c.is_clear());
        assert!(Bits::with_capacity(0).ones().next().is_none());
        assert_eq!(Bits::full(64).as_slice(), &[u64::MAX]);
    }
}
