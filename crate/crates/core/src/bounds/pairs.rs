//! Compressible pairs and their synchronizing height.

use crate::automaton::Automaton;
use crate::search::{pair_index, pair_merge_lengths};

/// The compressible pairs of an automaton with their shortest merge lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    n: usize,
    lengths: Vec<Option<u32>>,
}

impl PairSet {
    /// A pair set with explicit merge lengths; pairs not listed are absent.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize, u32)]) -> Self {
        let mut lengths = vec![None; n * n.saturating_sub(1) / 2];
        for &(p, q, d) in pairs {
            let (p, q) = (p.min(q), p.max(q));
            assert!(p != q && q < n, "pair {{{p}, {q}}} out of range");
            lengths[pair_index(n, p, q)] = Some(d);
        }
        PairSet { n, lengths }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.lengths.iter().filter(|d| d.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: usize, q: usize) -> bool {
        self.merge_length(p, q).is_some()
    }

    pub fn merge_length(&self, p: usize, q: usize) -> Option<usize> {
        if p == q || p.max(q) >= self.n {
            return None;
        }
        self.lengths[pair_index(self.n, p.min(q), p.max(q))].map(|d| d as usize)
    }

    /// The pairs `(p, q)`, `p < q`, in index order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |p| (p + 1..n).map(move |q| (p, q)))
            .filter(|&(p, q)| self.contains(p, q))
    }

    /// `h(P)`: the largest shortest-merge length, 0 for the empty set.
    pub fn height(&self) -> usize {
        self.lengths.iter().flatten().max().map_or(0, |&d| d as usize)
    }

    /// The set as a bit mask over pair indices; `None` above 16 states.
    pub fn mask(&self) -> Option<u128> {
        if self.lengths.len() > 128 {
            return None;
        }
        Some(
            self.lengths
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_some())
                .fold(0u128, |m, (i, _)| m | 1 << i),
        )
    }
}

/// All compressible pairs of `A` with their merge lengths.
pub fn compressible_pairs(a: &Automaton) -> PairSet {
    PairSet { n: a.n(), lengths: pair_merge_lengths(a) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture, Fixture};
    use crate::stateset::StateSet;
    use crate::Word;

    /// Shortest merging word by trying all words in length order.
    fn brute_merge(a: &Automaton, p: usize, q: usize, cap: usize) -> Option<usize> {
        let pair: StateSet = [p, q].into_iter().collect();
        for len in 1..=cap {
            let total = a.k().pow(len as u32);
            for code in 0..total {
                let mut c = code;
                let letters: Vec<usize> = (0..len)
                    .map(|_| {
                        let x = c % a.k();
                        c /= a.k();
                        x
                    })
                    .collect();
                if a.apply(pair, &Word::new(letters)).unwrap().len() == 1 {
                    return Some(len);
                }
            }
        }
        None
    }

    #[test]
    fn cerny_pairs() {
        let c4 = fixture(Fixture::Cerny, Some(4)).unwrap();
        let p = compressible_pairs(&c4);
        assert_eq!(p.len(), 6);
        let mut h = 0;
        for (x, y) in p.pairs() {
            let d = brute_merge(&c4, x, y, 10).unwrap();
            assert_eq!(p.merge_length(x, y), Some(d));
            h = h.max(d);
        }
        assert_eq!(p.height(), h);
    }

    #[test]
    fn identity_has_no_pairs() {
        let id = Automaton::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let p = compressible_pairs(&id);
        assert!(p.is_empty());
        assert_eq!(p.height(), 0);
        assert_eq!(p.mask(), Some(0));
    }
}
