//! Frankl-Pin sequences over a set of pairs.
//!
//! A sequence `(M_i, x_i, y_i)` of `m`-subsets with marked pairs is valid when
//! `x_i, y_i` lie in `M_i` and, for every `j < i`, not both of them lie in
//! `M_j`. Read from the end, the sequence grows a graph `F` of the pairs used
//! so far: a new entry `(M, e)` may be put in front iff `M` is an independent
//! set of `F` containing both ends of `e`. The longest sequence therefore
//! depends only on which pairs are in `F`, and is found by a memoised search
//! over edge sets.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::pairs::PairSet;
use crate::stateset::StateSet;

/// Node budget of the exact search used when none is given.
pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FpEntry {
    pub set: StateSet,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FranklPinSequence {
    pub m: usize,
    pub entries: Vec<FpEntry>,
    /// True when the exact search finished within its budget.
    pub exact: bool,
}

impl FranklPinSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks both defining conditions, set sizes and, when given, that every
    /// marked pair belongs to `pairs`.
    pub fn is_valid(&self, pairs: Option<&PairSet>) -> bool {
        for (i, e) in self.entries.iter().enumerate() {
            if e.set.len() != self.m || e.x == e.y {
                return false;
            }
            if !e.set.contains(e.x) || !e.set.contains(e.y) {
                return false;
            }
            if let Some(p) = pairs {
                if !p.contains(e.x, e.y) {
                    return false;
                }
            }
            if self.entries[..i].iter().any(|f| f.set.contains(e.x) && f.set.contains(e.y)) {
                return false;
            }
        }
        true
    }
}

/// An independent set of size `need` inside `cand`, added to `chosen`.
fn independent(adj: &[u64], cand: u64, need: usize, chosen: u64) -> Option<u64> {
    if need == 0 {
        return Some(chosen);
    }
    if (cand.count_ones() as usize) < need {
        return None;
    }
    let v = cand.trailing_zeros() as usize;
    let bit = 1u64 << v;
    independent(adj, cand & !bit & !adj[v], need - 1, chosen | bit)
        .or_else(|| independent(adj, cand & !bit, need, chosen))
}

struct Graph {
    n: usize,
    m: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    fn adjacency(&self, used: &[bool]) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for (i, &(p, q)) in self.edges.iter().enumerate() {
            if used[i] {
                adj[p] |= 1 << q;
                adj[q] |= 1 << p;
            }
        }
        adj
    }

    /// An `m`-set independent in `adj` containing `p` and `q`.
    fn witness(&self, adj: &[u64], p: usize, q: usize) -> Option<u64> {
        if adj[p] >> q & 1 == 1 {
            return None;
        }
        let all = StateSet::full(self.n).bits();
        let pq = (1u64 << p) | (1u64 << q);
        let cand = all & !pq & !adj[p] & !adj[q];
        independent(adj, cand, self.m - 2, pq)
    }
}

fn graph(pairs: &PairSet, m: usize) -> Graph {
    Graph { n: pairs.n(), m, edges: pairs.pairs().collect() }
}

fn used_from_mask(mask: u128, count: usize) -> Vec<bool> {
    (0..count).map(|i| mask >> i & 1 == 1).collect()
}

struct Exact<'a> {
    g: &'a Graph,
    memo: HashMap<u128, (u32, u8)>,
    budget: usize,
    exhausted: bool,
}

impl Exact<'_> {
    fn solve(&mut self, mask: u128) -> u32 {
        if let Some(&(v, _)) = self.memo.get(&mask) {
            return v;
        }
        if self.memo.len() >= self.budget {
            self.exhausted = true;
            return 0;
        }
        let used = used_from_mask(mask, self.g.edges.len());
        let adj = self.g.adjacency(&used);
        let mut best = (0u32, u8::MAX);
        for (i, &(p, q)) in self.g.edges.iter().enumerate() {
            if used[i] || self.g.witness(&adj, p, q).is_none() {
                continue;
            }
            let v = 1 + self.solve(mask | 1 << i);
            if self.exhausted {
                return 0;
            }
            if v > best.0 {
                best = (v, i as u8);
            }
        }
        self.memo.insert(mask, best);
        best.0
    }
}

/// Builds the sequence from the order in which edges enter `F`.
fn sequence_from_order(g: &Graph, order: &[usize], exact: bool) -> FranklPinSequence {
    let mut used = vec![false; g.edges.len()];
    let mut entries = Vec::with_capacity(order.len());
    for &i in order {
        let (p, q) = g.edges[i];
        let adj = g.adjacency(&used);
        let set = g.witness(&adj, p, q).expect("edge was feasible");
        entries.push(FpEntry { set: StateSet::from_bits(set), x: p, y: q });
        used[i] = true;
    }
    entries.reverse();
    FranklPinSequence { m: g.m, entries, exact }
}

/// Greedy construction: always add the feasible edge that leaves the most
/// other edges feasible.
fn greedy_order(g: &Graph) -> Vec<usize> {
    let mut used = vec![false; g.edges.len()];
    let mut order = Vec::new();
    loop {
        let adj = g.adjacency(&used);
        let feasible: Vec<usize> = (0..g.edges.len())
            .filter(|&i| !used[i] && g.witness(&adj, g.edges[i].0, g.edges[i].1).is_some())
            .collect();
        let Some(&pick) = feasible.iter().max_by_key(|&&i| {
            used[i] = true;
            let adj = g.adjacency(&used);
            let left = feasible
                .iter()
                .filter(|&&j| j != i && g.witness(&adj, g.edges[j].0, g.edges[j].1).is_some())
                .count();
            used[i] = false;
            (left, std::cmp::Reverse(i))
        }) else {
            break;
        };
        used[pick] = true;
        order.push(pick);
    }
    order
}

/// The longest `m`-subset Frankl-Pin sequence over `pairs` that the exact
/// search finds within `budget` memo entries, or the greedy one when the
/// budget runs out (or the exact one is shorter, which cannot happen).
pub fn max_franklpin(pairs: &PairSet, m: usize, budget: usize) -> FranklPinSequence {
    let n = pairs.n();
    assert!(2 <= m && m <= n, "need 2 <= m <= n");
    let g = graph(pairs, m);
    let greedy = sequence_from_order(&g, &greedy_order(&g), false);
    if g.edges.len() > 128 {
        return greedy;
    }
    let mut ex = Exact { g: &g, memo: HashMap::new(), budget, exhausted: false };
    let best = ex.solve(0);
    if ex.exhausted || (best as usize) < greedy.len() {
        return greedy;
    }
    let mut order = Vec::new();
    let mut mask = 0u128;
    while let Some(&(v, i)) = ex.memo.get(&mask) {
        if v == 0 {
            break;
        }
        order.push(i as usize);
        mask |= 1 << i;
    }
    sequence_from_order(&g, &order, true)
}

type CacheKey = (usize, usize, u128);

fn cache() -> &'static Mutex<HashMap<CacheKey, usize>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, usize>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Length of [`max_franklpin`] with the given budget, cached per pair set.
pub fn franklpin_length(pairs: &PairSet, m: usize, budget: usize) -> usize {
    if pairs.is_empty() {
        return 0;
    }
    if m == 2 {
        // every pair can be used once, each M_i being the pair itself
        return pairs.len();
    }
    let Some(mask) = pairs.mask() else {
        return max_franklpin(pairs, m, budget).len();
    };
    let key = (pairs.n(), m, mask);
    if let Some(&v) = cache().lock().unwrap().get(&key) {
        return v;
    }
    let v = max_franklpin(pairs, m, budget).len();
    cache().lock().unwrap().insert(key, v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pairs(n: usize) -> PairSet {
        let mut v = Vec::new();
        for p in 0..n {
            for q in p + 1..n {
                v.push((p, q, 1));
            }
        }
        PairSet::from_pairs(n, &v)
    }

    /// Forward DP: the state is the set of pairs lying inside some earlier
    /// `M_j`; a new entry may use any pair outside it.
    fn forward_oracle(pairs: &PairSet, m: usize) -> usize {
        let n = pairs.n();
        let index: Vec<(usize, usize)> =
            (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).collect();
        let msets: Vec<u64> = (0u64..1 << n).filter(|s| s.count_ones() as usize == m).collect();
        fn inside(index: &[(usize, usize)], set: u64) -> u128 {
            index
                .iter()
                .enumerate()
                .filter(|(_, &(p, q))| set >> p & 1 == 1 && set >> q & 1 == 1)
                .fold(0, |acc, (i, _)| acc | 1 << i)
        }
        fn go(
            forb: u128,
            pairs: &PairSet,
            index: &[(usize, usize)],
            msets: &[u64],
            memo: &mut HashMap<u128, usize>,
        ) -> usize {
            if let Some(&v) = memo.get(&forb) {
                return v;
            }
            let mut best = 0;
            for (i, &(p, q)) in index.iter().enumerate() {
                if forb >> i & 1 == 1 || !pairs.contains(p, q) {
                    continue;
                }
                for &s in msets.iter().filter(|&&s| s >> p & 1 == 1 && s >> q & 1 == 1) {
                    best = best.max(1 + go(forb | inside(index, s), pairs, index, msets, memo));
                }
            }
            memo.insert(forb, best);
            best
        }
        go(0, pairs, &index, &msets, &mut HashMap::new())
    }

    #[test]
    fn all_pairs_four_states() {
        let p = all_pairs(4);
        let s = max_franklpin(&p, 2, DEFAULT_BUDGET);
        assert_eq!(s.len(), 6);
        assert!(s.exact && s.is_valid(Some(&p)));
    }

    #[test]
    fn small_cases() {
        let empty = PairSet::from_pairs(4, &[]);
        assert_eq!(max_franklpin(&empty, 3, DEFAULT_BUDGET).len(), 0);
        let one = PairSet::from_pairs(4, &[(1, 2, 3)]);
        assert_eq!(max_franklpin(&one, 2, DEFAULT_BUDGET).len(), 1);
        // m = n leaves room for a single entry
        assert_eq!(max_franklpin(&all_pairs(5), 5, DEFAULT_BUDGET).len(), 1);
    }

    #[test]
    fn exact_matches_forward_oracle() {
        for n in 3..=5 {
            for m in 2..=n {
                let p = all_pairs(n);
                let s = max_franklpin(&p, m, DEFAULT_BUDGET);
                assert!(s.is_valid(Some(&p)));
                assert_eq!(s.len(), forward_oracle(&p, m), "n={n} m={m}");
            }
        }
        // a sparse pair set
        let p = PairSet::from_pairs(5, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (0, 4, 3)]);
        for m in 2..=5 {
            let s = max_franklpin(&p, m, DEFAULT_BUDGET);
            assert!(s.is_valid(Some(&p)));
            assert_eq!(s.len(), forward_oracle(&p, m), "m={m}");
        }
    }

    #[test]
    fn tiny_budget_falls_back_to_greedy() {
        let p = all_pairs(6);
        let s = max_franklpin(&p, 3, 5);
        assert!(!s.exact);
        assert!(s.is_valid(Some(&p)));
        assert!(s.len() <= max_franklpin(&p, 3, DEFAULT_BUDGET).len());
    }

    #[test]
    fn cached_length_agrees() {
        let p = all_pairs(5);
        for m in 2..=5 {
            assert_eq!(franklpin_length(&p, m, DEFAULT_BUDGET), max_franklpin(&p, m, DEFAULT_BUDGET).len());
        }
    }

    #[test]
    fn invalid_sequence_detected() {
        let seq = FranklPinSequence {
            m: 2,
            entries: vec![
                FpEntry { set: [0, 1].into_iter().collect(), x: 0, y: 1 },
                FpEntry { set: [0, 1].into_iter().collect(), x: 0, y: 1 },
            ],
            exact: false,
        };
        assert!(!seq.is_valid(None));
    }
}
