//! Finitely supported multisets: the reactor states.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A finitely supported map from labels to positive counts.
///
/// Zero counts are never stored, so structural equality is multiset
/// equality. The derived ordering is the canonical state order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset<E: Ord> {
    counts: BTreeMap<E, u64>,
}

impl<E: Ord> Default for Multiset<E> {
    fn default() -> Self {
        Self {
            counts: BTreeMap::new(),
        }
    }
}

impl<E: Ord + fmt::Debug> fmt::Debug for Multiset<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.counts.iter()).finish()
    }
}

impl<E: Ord> FromIterator<E> for Multiset<E> {
    fn from_iter<I: IntoIterator<Item = E>>(iter: I) -> Self {
        let mut m = Self::new();
        for e in iter {
            m.insert(e);
        }
        m
    }
}

impl<E: Ord> Multiset<E> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a multiset from `(label, count)` pairs; repeated labels add up
    /// and zero counts are dropped.
    pub fn from_counts(pairs: impl IntoIterator<Item = (E, u64)>) -> Self {
        let mut m = Self::new();
        for (e, n) in pairs {
            m.insert_many(e, n);
        }
        m
    }

    pub fn count(&self, e: &E) -> u64 {
        self.counts.get(e).copied().unwrap_or(0)
    }

    /// `N`, the number of members.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Number of distinct labels.
    pub fn species(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Supported labels with their counts, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&E, u64)> + '_ {
        self.counts.iter().map(|(e, n)| (e, *n))
    }

    pub fn support(&self) -> impl Iterator<Item = &E> + '_ {
        self.counts.keys()
    }

    pub fn insert(&mut self, e: E) {
        *self.counts.entry(e).or_insert(0) += 1;
    }

    pub fn insert_many(&mut self, e: E, n: u64) {
        if n > 0 {
            *self.counts.entry(e).or_insert(0) += n;
        }
    }

    /// Removes one member labelled `e`; returns false (and does nothing) if
    /// there is none.
    pub fn take(&mut self, e: &E) -> bool {
        match self.counts.get_mut(e) {
            Some(1) => {
                self.counts.remove(e);
                true
            }
            Some(n) => {
                *n -= 1;
                true
            }
            None => false,
        }
    }

    /// The label of the member at position `index` when members are listed
    /// token by token in canonical order.
    pub fn token(&self, mut index: u64) -> Option<&E> {
        for (e, &n) in &self.counts {
            if index < n {
                return Some(e);
            }
            index -= n;
        }
        None
    }
}

impl<E: Ord + Clone> Multiset<E> {
    /// `σ^s`: one more member labelled `s`.
    pub fn add(&self, s: &E) -> Self {
        let mut next = self.clone();
        next.insert(s.clone());
        next
    }

    /// `σ_s`: one fewer member labelled `s`, saturating at zero.
    pub fn remove(&self, s: &E) -> Self {
        let mut next = self.clone();
        next.take(s);
        next
    }

    /// All removals left to right (each saturating), then all insertions.
    pub fn surgery<'a>(
        &self,
        removals: impl IntoIterator<Item = &'a E>,
        insertions: impl IntoIterator<Item = &'a E>,
    ) -> Self
    where
        E: 'a,
    {
        let mut next = self.clone();
        for s in removals {
            next.take(s);
        }
        for t in insertions {
            next.insert(t.clone());
        }
        next
    }

    /// Probability of drawing exactly `tuple`, in order, when taking
    /// `tuple.len()` members uniformly without replacement.
    ///
    /// Zero when the multiset is empty or the tuple is longer than the
    /// multiset; the empty tuple has probability one on a nonempty multiset.
    pub fn pick(&self, tuple: &[E]) -> BigRational {
        let total = self.total();
        let k = tuple.len() as u64;
        if total == 0 || k > total {
            return BigRational::zero();
        }
        let mut remaining = self.clone();
        let mut numer = BigInt::one();
        let mut denom = BigInt::one();
        for (i, s) in tuple.iter().enumerate() {
            let c = remaining.count(s);
            if c == 0 {
                return BigRational::zero();
            }
            numer *= c;
            denom *= total - i as u64;
            remaining.take(s);
        }
        BigRational::new(numer, denom)
    }

    /// `f_*`: relabels every member by `f`, merging counts.
    pub fn pushforward<F: Ord>(&self, f: impl Fn(&E) -> F) -> Multiset<F> {
        Multiset::from_counts(self.iter().map(|(e, n)| (f(e), n)))
    }
}

/// Every multiset over `labels` with at most `max_total` members.
pub fn all_up_to<E: Ord + Clone>(labels: &[E], max_total: u64) -> Vec<Multiset<E>> {
    fn rec<E: Ord + Clone>(labels: &[E], budget: u64, acc: &mut Multiset<E>, out: &mut Vec<Multiset<E>>) {
        let Some((first, rest)) = labels.split_first() else {
            out.push(acc.clone());
            return;
        };
        for n in 0..=budget {
            let mut next = acc.clone();
            next.insert_many(first.clone(), n);
            rec(rest, budget - n, &mut next, out);
        }
    }
    let mut out = Vec::new();
    rec(labels, max_total, &mut Multiset::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(pairs: &[(char, u64)]) -> Multiset<char> {
        Multiset::from_counts(pairs.iter().copied())
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_examples() {
        assert_eq!(ms(&[]).add(&'a'), ms(&[('a', 1)]));
        assert_eq!(ms(&[('a', 2)]).add(&'a'), ms(&[('a', 3)]));
        assert_eq!(ms(&[('a', 1)]).add(&'b'), ms(&[('a', 1), ('b', 1)]));
    }

    #[test]
    fn remove_examples() {
        assert_eq!(ms(&[('a', 2)]).remove(&'a'), ms(&[('a', 1)]));
        assert_eq!(ms(&[('a', 1)]).remove(&'a'), ms(&[]));
        assert_eq!(ms(&[('a', 1)]).remove(&'b'), ms(&[('a', 1)]));
    }

    #[test]
    fn surgery_examples() {
        assert_eq!(ms(&[('a', 1), ('b', 1)]).surgery(&['a', 'b'], &['c']), ms(&[('c', 1)]));
        // second removal saturates before the insertion
        assert_eq!(ms(&[('a', 1)]).surgery(&['a', 'a'], &['a']), ms(&[('a', 1)]));
        let g2 = Multiset::from_counts([("g", 2)]);
        assert_eq!(g2.surgery(&["g", "g"], &["g·g"]), Multiset::from_counts([("g·g", 1)]));
    }

    #[test]
    fn total_examples() {
        assert_eq!(ms(&[]).total(), 0);
        assert_eq!(ms(&[('a', 2), ('b', 1)]).total(), 3);
        assert_eq!(ms(&[('a', 5)]).total(), 5);
    }

    #[test]
    fn zero_counts_are_not_stored() {
        assert_eq!(ms(&[('a', 0), ('b', 1)]).species(), 1);
        assert_eq!(ms(&[('a', 0)]), ms(&[]));
    }

    /// Enumerates every ordered draw of distinct tokens.
    fn pick_by_tokens(m: &Multiset<char>, tuple: &[char]) -> BigRational {
        let tokens: Vec<char> = m
            .iter()
            .flat_map(|(e, n)| std::iter::repeat_n(*e, n as usize))
            .collect();
        let k = tuple.len();
        let mut hits = 0i64;
        let mut draws = 0i64;
        fn rec(tokens: &[char], used: &mut Vec<usize>, k: usize, tuple: &[char], hits: &mut i64, draws: &mut i64) {
            if used.len() == k {
                *draws += 1;
                if used.iter().zip(tuple).all(|(&i, t)| tokens[i] == *t) {
                    *hits += 1;
                }
                return;
            }
            for i in 0..tokens.len() {
                if !used.contains(&i) {
                    used.push(i);
                    rec(tokens, used, k, tuple, hits, draws);
                    used.pop();
                }
            }
        }
        rec(&tokens, &mut Vec::new(), k, tuple, &mut hits, &mut draws);
        if draws == 0 || tokens.is_empty() {
            return BigRational::zero();
        }
        ratio(hits, draws)
    }

    #[test]
    fn pick_examples() {
        let m = ms(&[('a', 2), ('b', 1)]);
        assert_eq!(pick_by_tokens(&m, &['a', 'b']), ratio(1, 3));
        assert_eq!(m.pick(&['a', 'b']), ratio(1, 3));
        assert_eq!(ms(&[]).pick(&['a']), ratio(0, 1));
        assert_eq!(ms(&[('g', 2)]).pick(&['g', 'g']), ratio(1, 1));
        assert_eq!(m.pick(&[]), ratio(1, 1));
        assert_eq!(ms(&[]).pick(&[]), ratio(0, 1));
        assert_eq!(m.pick(&['a', 'a', 'a']), ratio(0, 1));
        assert_eq!(m.pick(&['a', 'b', 'a', 'b']), ratio(0, 1));
    }

    #[test]
    fn pushforward_examples() {
        let m = ms(&[('a', 2), ('b', 1)]);
        assert_eq!(m.pushforward(|_| 'c'), ms(&[('c', 3)]));
        assert_eq!(m.pushforward(|e| *e), m);
        let lib = Multiset::from_counts([("l", 1), ("m_n", 2), ("m_q", 1)]);
        let coarse = lib.pushforward(|e| if *e == "l" { "l" } else { "m" });
        assert_eq!(coarse, Multiset::from_counts([("l", 1), ("m", 3)]));
    }

    #[test]
    fn token_walks_canonical_order() {
        let m = ms(&[('b', 1), ('a', 2)]);
        let tokens: Vec<char> = (0..4).map(|i| m.token(i).copied().unwrap_or('-')).collect();
        assert_eq!(tokens, vec!['a', 'a', 'b', '-']);
    }

    #[test]
    fn all_up_to_counts() {
        // multisets of size ≤ 4 over 3 labels: C(4 + 3, 3) = 35
        let all = all_up_to(&['a', 'b', 'c'], 4);
        assert_eq!(all.len(), 35);
        assert!(all.iter().all(|m| m.total() <= 4));
        assert_eq!(all_up_to::<char>(&[], 3), vec![Multiset::new()]);
    }

    fn arb_ms() -> impl Strategy<Value = Multiset<char>> {
        prop::collection::vec((prop::sample::select(vec!['a', 'b', 'c']), 0u64..4), 0..4)
            .prop_map(Multiset::from_counts)
    }

    proptest! {
        #[test]
        fn add_then_remove_is_identity(m in arb_ms(), s in prop::sample::select(vec!['a', 'b', 'c'])) {
            prop_assert_eq!(m.add(&s).remove(&s), m.clone());
            if m.count(&s) >= 1 {
                prop_assert_eq!(m.remove(&s).add(&s), m);
            }
        }

        #[test]
        fn pick_matches_token_enumeration(m in arb_ms(), tuple in prop::collection::vec(prop::sample::select(vec!['a', 'b', 'c', 'd']), 0..3)) {
            prop_assume!(m.total() <= 6);
            prop_assert_eq!(m.pick(&tuple), pick_by_tokens(&m, &tuple));
        }

        #[test]
        fn pick_sums_to_one(m in arb_ms(), k in 1usize..3) {
            prop_assume!(m.total() as usize >= k);
            let support: Vec<char> = m.support().copied().collect();
            let sum: BigRational = crate::algebra::cartesian_power(&support, k)
                .iter()
                .map(|t| m.pick(t))
                .sum();
            prop_assert_eq!(sum, BigRational::one());
        }

        #[test]
        fn pushforward_preserves_total(m in arb_ms()) {
            prop_assert_eq!(m.pushforward(|c| *c == 'a').total(), m.total());
        }
    }
}
