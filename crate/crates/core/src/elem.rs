//! Carrier elements and small carrier subsets.
//!
//! Carriers are at most [`MAX_CARRIER`] elements, so a subset fits in a
//! single `u32` bitmask. Every hot loop in the crate works on these masks.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Hard upper bound on carrier size imposed by the bitset representation.
pub const MAX_CARRIER: usize = 32;

/// Index of an element in a structure's carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u8);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Elem {
    fn from(i: usize) -> Self {
        debug_assert!(i < MAX_CARRIER);
        Elem(i as u8)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of a carrier, stored as a bitmask over element indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemSet(pub u32);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    #[inline]
    pub fn singleton(e: Elem) -> Self {
        ElemSet(1 << e.0)
    }

    /// The full carrier `{0, .., size-1}`.
    #[inline]
    pub fn full(size: usize) -> Self {
        if size >= 32 {
            ElemSet(u32::MAX)
        } else {
            ElemSet((1u32 << size) - 1)
        }
    }

    #[inline]
    pub fn contains(self, e: Elem) -> bool {
        self.0 & (1 << e.0) != 0
    }

    #[inline]
    pub fn insert(&mut self, e: Elem) {
        self.0 |= 1 << e.0;
    }

    #[inline]
    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<Elem> {
        if self.0 == 0 {
            None
        } else {
            Some(Elem(self.0.trailing_zeros() as u8))
        }
    }

    pub fn iter(self) -> ElemSetIter {
        ElemSetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<Elem> {
        self.iter().collect()
    }

    /// Canonical lattice ordering: by size, then by the sorted member list.
    pub fn canonical_cmp(&self, other: &ElemSet) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.to_vec().cmp(&other.to_vec()))
    }
}

impl FromIterator<Elem> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

pub struct ElemSetIter(u32);

impl Iterator for ElemSetIter {
    type Item = Elem;

    #[inline]
    fn next(&mut self) -> Option<Elem> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Elem(i as u8))
    }
}

/// Calls `visit` on every tuple of length `len` over `0..size` in lexicographic
/// order. Stops early when `visit` returns `false`; returns whether the scan
/// ran to completion.
pub fn for_each_tuple(size: usize, len: usize, mut visit: impl FnMut(&[Elem]) -> bool) -> bool {
    if len == 0 {
        return visit(&[]);
    }
    if size == 0 {
        return true;
    }
    let mut cur = vec![Elem(0); len];
    loop {
        if !visit(&cur) {
            return false;
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            if cur[pos].index() + 1 < size {
                cur[pos].0 += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = Elem(0);
                }
                break;
            }
        }
    }
}

/// Calls `visit` on every nondecreasing tuple (multiset in sorted form) of
/// length `len` over `0..size`, in lexicographic order.
pub fn for_each_multiset(size: usize, len: usize, mut visit: impl FnMut(&[Elem]) -> bool) -> bool {
    if len == 0 {
        return visit(&[]);
    }
    if size == 0 {
        return true;
    }
    let mut cur = vec![Elem(0); len];
    loop {
        if !visit(&cur) {
            return false;
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            if cur[pos].index() + 1 < size {
                let v = Elem(cur[pos].0 + 1);
                for c in cur.iter_mut().skip(pos) {
                    *c = v;
                }
                break;
            }
        }
    }
}

/// All nondecreasing tuples of length `len` over `0..size`.
pub fn multisets(size: usize, len: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    for_each_multiset(size, len, |t| {
        out.push(t.to_vec());
        true
    });
    out
}

/// Number of multisets of size `len` drawn from `size` kinds.
pub fn multiset_count(size: usize, len: usize) -> usize {
    if size == 0 {
        return usize::from(len == 0);
    }
    binomial(size + len - 1, len)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Calls `visit` on every `k`-element index combination of `0..n` in
/// lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return false;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_basics() {
        let mut s = ElemSet::EMPTY;
        s.insert(Elem(3));
        s.insert(Elem(0));
        assert_eq!(s.to_vec(), vec![Elem(0), Elem(3)]);
        assert!(s.is_subset(ElemSet::full(4)));
        assert!(!ElemSet::full(4).is_subset(s));
        assert_eq!(ElemSet::full(32).len(), 32);
        assert_eq!(s.first(), Some(Elem(0)));
    }

    #[test]
    fn tuple_and_multiset_counts() {
        let mut n = 0;
        for_each_tuple(3, 4, |_| {
            n += 1;
            true
        });
        assert_eq!(n, 81);
        assert_eq!(multisets(3, 3).len(), 10);
        assert_eq!(multiset_count(3, 3), 10);
        assert_eq!(multiset_count(4, 4), 35);
        let mut c = 0;
        for_each_combination(7, 2, |_| {
            c += 1;
            true
        });
        assert_eq!(c, binomial(7, 2));
    }

    #[test]
    fn multisets_are_sorted_and_lexicographic() {
        let all = multisets(3, 2);
        let want: Vec<Vec<Elem>> = [[0, 0], [0, 1], [0, 2], [1, 1], [1, 2], [2, 2]]
            .iter()
            .map(|t| t.iter().map(|&i| Elem(i)).collect())
            .collect();
        assert_eq!(all, want);
    }

    #[test]
    fn canonical_order_is_size_then_members() {
        let a: ElemSet = [Elem(0), Elem(2)].into_iter().collect();
        let b: ElemSet = [Elem(0), Elem(1), Elem(2)].into_iter().collect();
        let c: ElemSet = [Elem(0), Elem(1)].into_iter().collect();
        assert!(a.canonical_cmp(&b).is_lt());
        assert!(c.canonical_cmp(&a).is_lt());
    }
}
