//! Finite multisets stored as sorted `(element, multiplicity)` runs.
//!
//! Equal multisets have identical representations, so the derived `Eq`,
//! `Ord` and `Hash` are the multiset ones.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset<T: Ord> {
    runs: Vec<(T, usize)>,
}

impl<T: Ord> Default for Multiset<T> {
    fn default() -> Self {
        Multiset { runs: Vec::new() }
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl<T: Ord> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl<T: Ord + Clone> Multiset<T> {
    /// Copy with one more occurrence of `x`.
    pub fn with(&self, x: T) -> Self {
        let mut m = self.clone();
        m.insert(x);
        m
    }

    /// Copy with one occurrence of `x` removed, if there is one.
    pub fn without(&self, x: &T) -> Option<Self> {
        let mut m = self.clone();
        m.remove_one(x).then_some(m)
    }

    /// Multiset union (sum of multiplicities).
    pub fn sum(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (x, n) in &other.runs {
            m.insert_n(x.clone(), *n);
        }
        m
    }

    /// `self − other`, defined only when `other ⊆ self`.
    pub fn difference(&self, other: &Self) -> Option<Self> {
        let mut m = self.clone();
        for (x, n) in &other.runs {
            match m.runs.binary_search_by(|(y, _)| y.cmp(x)) {
                Ok(i) if m.runs[i].1 >= *n => {
                    m.runs[i].1 -= n;
                    if m.runs[i].1 == 0 {
                        m.runs.remove(i);
                    }
                }
                _ => return None,
            }
        }
        Some(m)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.runs.iter().all(|(x, n)| other.count(x) >= *n)
    }

    /// Every ordered pair `(left, right)` with `left ⊎ right = self`, each
    /// exactly once.
    ///
    /// Pairs are ordered lexicographically by the per-element left counts,
    /// largest first, so `{a}` yields `({a}, {})` before `({}, {a})`.
    pub fn splits(&self) -> Vec<(Self, Self)> {
        let mut out = Vec::with_capacity(self.split_count());
        let mut left = Vec::with_capacity(self.runs.len());
        self.splits_from(0, &mut left, &mut out);
        out
    }

    fn splits_from(&self, i: usize, left: &mut Vec<usize>, out: &mut Vec<(Self, Self)>) {
        if i == self.runs.len() {
            let mut l = Multiset::new();
            let mut r = Multiset::new();
            for ((x, n), k) in self.runs.iter().zip(left.iter()) {
                if *k > 0 {
                    l.runs.push((x.clone(), *k));
                }
                if n - k > 0 {
                    r.runs.push((x.clone(), n - k));
                }
            }
            out.push((l, r));
            return;
        }
        for k in (0..=self.runs[i].1).rev() {
            left.push(k);
            self.splits_from(i + 1, left, out);
            left.pop();
        }
    }

    /// All sub-multisets, in the same order as the left halves of [`splits`](Self::splits).
    pub fn submultisets(&self) -> Vec<Self> {
        self.splits().into_iter().map(|(l, _)| l).collect()
    }
}

impl<T: Ord> Multiset<T> {
    pub fn new() -> Self {
        Multiset { runs: Vec::new() }
    }

    pub fn insert(&mut self, x: T) {
        self.insert_n(x, 1);
    }

    pub fn insert_n(&mut self, x: T, n: usize) {
        if n == 0 {
            return;
        }
        match self.runs.binary_search_by(|(y, _)| y.cmp(&x)) {
            Ok(i) => self.runs[i].1 += n,
            Err(i) => self.runs.insert(i, (x, n)),
        }
    }

    pub fn remove_one(&mut self, x: &T) -> bool {
        match self.runs.binary_search_by(|(y, _)| y.cmp(x)) {
            Ok(i) => {
                self.runs[i].1 -= 1;
                if self.runs[i].1 == 0 {
                    self.runs.remove(i);
                }
                true
            }
            Err(_) => false,
        }
    }

    pub fn count(&self, x: &T) -> usize {
        match self.runs.binary_search_by(|(y, _)| y.cmp(x)) {
            Ok(i) => self.runs[i].1,
            Err(_) => 0,
        }
    }

    pub fn contains(&self, x: &T) -> bool {
        self.count(x) > 0
    }

    /// Total number of occurrences.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Distinct elements with their multiplicities, in canonical order.
    pub fn distinct(&self) -> impl Iterator<Item = (&T, usize)> + '_ {
        self.runs.iter().map(|(x, n)| (x, *n))
    }

    /// Every occurrence, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.runs
            .iter()
            .flat_map(|(x, n)| std::iter::repeat_n(x, *n))
    }

    /// Number of ordered splits: the product of `multiplicity + 1`.
    pub fn split_count(&self) -> usize {
        self.runs.iter().map(|(_, n)| n + 1).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn split_examples() {
        let empty: Multiset<char> = Multiset::new();
        assert_eq!(empty.splits(), vec![(Multiset::new(), Multiset::new())]);

        let a: Multiset<char> = ['a'].into_iter().collect();
        assert_eq!(
            a.splits(),
            vec![(a.clone(), Multiset::new()), (Multiset::new(), a.clone())]
        );

        let aab: Multiset<char> = "aab".chars().collect();
        assert_eq!(aab.splits().len(), 6);
        let abc: Multiset<char> = "abc".chars().collect();
        assert_eq!(abc.splits().len(), 8);
    }

    #[test]
    fn difference_requires_subset() {
        let m: Multiset<char> = "aab".chars().collect();
        let a: Multiset<char> = "a".chars().collect();
        let bb: Multiset<char> = "bb".chars().collect();
        assert_eq!(m.difference(&a).unwrap(), "ab".chars().collect());
        assert!(m.difference(&bb).is_none());
        assert!(a.is_subset(&m));
        assert!(!bb.is_subset(&m));
    }

    proptest! {
        #[test]
        fn insertion_order_is_irrelevant(mut xs in proptest::collection::vec(0u8..5, 0..10), seed in any::<u64>()) {
            let m1: Multiset<u8> = xs.iter().copied().collect();
            // deterministic shuffle
            let n = xs.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (s >> 33) as usize % (i + 1);
                xs.swap(i, j);
            }
            let m2: Multiset<u8> = xs.into_iter().collect();
            prop_assert_eq!(m1, m2);
        }

        #[test]
        fn splits_partition_exactly(xs in proptest::collection::vec(0u8..4, 0..7)) {
            let m: Multiset<u8> = xs.into_iter().collect();
            let splits = m.splits();
            prop_assert_eq!(splits.len(), m.split_count());
            let mut seen = std::collections::HashSet::new();
            let mut left_total = 0;
            for (l, r) in &splits {
                prop_assert_eq!(&l.sum(r), &m);
                prop_assert!(seen.insert(l.clone()));
                left_total += l.len();
            }
            // each occurrence lands on the left in exactly half the splits
            prop_assert_eq!(2 * left_total, m.len() * splits.len());
        }
    }
}
