//! Breadth-first search in the power automaton.
//!
//! Nodes are state sets; an edge `S -> Sx` exists for every letter `x`. The
//! extending algorithms walk the reversed edges `S -> S x^-1` instead. Visited
//! sets live in a flat bitmap indexed by the set's bits when `n` is within the
//! subset-table limit and in a hash set otherwise.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::automaton::{Automaton, Word};
use crate::bounds::one_cluster_data;
use crate::error::{Error, Result};
use crate::stateset::StateSet;

/// Default largest `n` for which `2^n` tables are built.
pub const DEFAULT_MAX_SUBSET_BITS: usize = 24;

/// Largest `n` for which `2^n` tables are built; overridable through the
/// `SYNCHROLAB_MAX_SUBSET_BITS` environment variable.
/// The variable is read once per process.
pub fn max_subset_bits() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("SYNCHROLAB_MAX_SUBSET_BITS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|v: usize| v.min(40))
            .unwrap_or(DEFAULT_MAX_SUBSET_BITS)
    })
}

fn guard(n: usize) -> Result<()> {
    let limit = max_subset_bits();
    if n > limit {
        Err(Error::SizeGuard { n, limit })
    } else {
        Ok(())
    }
}

enum Visited {
    Flat(Vec<u64>),
    Hash(HashSet<u64>),
}

impl Visited {
    fn new(n: usize) -> Self {
        if n <= DEFAULT_MAX_SUBSET_BITS {
            Visited::Flat(vec![0; (1usize << n).div_ceil(64)])
        } else {
            Visited::Hash(HashSet::new())
        }
    }

    /// Marks `s`; returns false if it was already marked.
    #[inline]
    fn insert(&mut self, s: StateSet) -> bool {
        match self {
            Visited::Flat(bits) => {
                let i = s.bits() as usize;
                let (w, b) = (i / 64, 1u64 << (i % 64));
                let fresh = bits[w] & b == 0;
                bits[w] |= b;
                fresh
            }
            Visited::Hash(h) => h.insert(s.bits()),
        }
    }
}

/// Direction of the power-automaton edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    Image,
    Preimage,
}

#[inline]
fn step(a: &Automaton, dir: Dir, s: StateSet, x: usize) -> StateSet {
    match dir {
        Dir::Image => a.image(s, x),
        Dir::Preimage => a.preimage(s, x),
    }
}

/// Level-synchronous BFS from `start`. Returns the smallest depth at which a
/// goal set appears together with the goal sets at that depth (only the first
/// one unless `all` is set).
fn bfs_levels<G: Fn(StateSet) -> bool>(
    a: &Automaton,
    dir: Dir,
    start: StateSet,
    goal: G,
    all: bool,
) -> Option<(usize, Vec<StateSet>)> {
    if goal(start) {
        return Some((0, vec![start]));
    }
    let mut visited = Visited::new(a.n());
    visited.insert(start);
    let mut frontier = vec![start];
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        let mut hits = Vec::new();
        for &s in &frontier {
            for x in 0..a.k() {
                let t = step(a, dir, s, x);
                if visited.insert(t) {
                    if goal(t) {
                        if !all {
                            return Some((depth, vec![t]));
                        }
                        hits.push(t);
                    }
                    next.push(t);
                }
            }
        }
        if !hits.is_empty() {
            hits.sort_unstable();
            return Some((depth, hits));
        }
        frontier = next;
    }
    None
}

/// BFS in the image direction that also returns a shortest word from
/// `start` to a goal set, and that set.
pub fn shortest_word<G: Fn(StateSet) -> bool>(
    a: &Automaton,
    start: StateSet,
    goal: G,
) -> Option<(Word, StateSet)> {
    if goal(start) {
        return Some((Word::empty(), start));
    }
    let mut parent: HashMap<u64, (u64, u8)> = HashMap::new();
    parent.insert(start.bits(), (start.bits(), u8::MAX));
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            for x in 0..a.k() {
                let t = a.image(s, x);
                if parent.contains_key(&t.bits()) {
                    continue;
                }
                parent.insert(t.bits(), (s.bits(), x as u8));
                if goal(t) {
                    let mut letters = Vec::new();
                    let mut cur = t.bits();
                    while cur != start.bits() {
                        let (p, x) = parent[&cur];
                        letters.push(x as usize);
                        cur = p;
                    }
                    letters.reverse();
                    return Some((Word::new(letters), t));
                }
                next.push(t);
            }
        }
        frontier = next;
    }
    None
}

/// Shortest merge lengths of all pairs `{p, q}`, `p < q`, indexed by
/// [`pair_index`]; `None` marks pairs that cannot be merged.
///
/// Backward BFS in the pair automaton: a pair is at distance 1 if some letter
/// merges it, and at distance `d + 1` if some letter maps it onto a pair at
/// distance `d`.
pub fn pair_merge_lengths(a: &Automaton) -> Vec<Option<u32>> {
    let n = a.n();
    let count = n * (n - 1) / 2;
    let mut dist = vec![None; count];
    let mut rev: Vec<Vec<u32>> = vec![Vec::new(); count];
    let mut frontier = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let id = pair_index(n, p, q);
            for x in 0..a.k() {
                let (s, t) = (a.next(p, x), a.next(q, x));
                if s == t {
                    if dist[id].is_none() {
                        dist[id] = Some(1);
                        frontier.push(id);
                    }
                } else {
                    rev[pair_index(n, s.min(t), s.max(t))].push(id as u32);
                }
            }
        }
    }
    let mut d = 1;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &id in &frontier {
            for &u in &rev[id] {
                let u = u as usize;
                if dist[u].is_none() {
                    dist[u] = Some(d);
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Position of the pair `{p, q}` (`p < q`) in row-major upper-triangular order.
pub fn pair_index(n: usize, p: usize, q: usize) -> usize {
    debug_assert!(p < q && q < n);
    p * (2 * n - p - 1) / 2 + (q - p - 1)
}

/// Pair criterion: `A` is synchronizing iff every pair can be merged.
pub fn is_synchronizing(a: &Automaton) -> bool {
    a.n() == 1 || pair_merge_lengths(a).iter().all(Option::is_some)
}

/// Length of a shortest reset word, if any.
pub fn reset_length(a: &Automaton) -> Option<usize> {
    if !is_synchronizing(a) {
        return None;
    }
    bfs_levels(a, Dir::Image, a.full_set(), |s| s.len() <= 1, false).map(|(d, _)| d)
}

/// A shortest reset word and its length.
pub fn reset_word(a: &Automaton) -> Option<(usize, Word)> {
    if !is_synchronizing(a) {
        return None;
    }
    shortest_word(a, a.full_set(), |s| s.len() <= 1).map(|(w, _)| (w.len(), w))
}

/// A shortest word `w` with `|Qw| <= r`, if one exists.
pub fn shortest_word_of_rank(a: &Automaton, r: usize) -> Result<Option<(usize, Word)>> {
    if r == 0 || r > a.n() {
        return Err(Error::InvalidParameter(format!(
            "rank {r} outside 1..={}",
            a.n()
        )));
    }
    Ok(shortest_word(a, a.full_set(), |s| s.len() <= r).map(|(w, _)| (w.len(), w)))
}

/// `out[r]` is the length of a shortest word of rank at most `r`, for
/// `0 <= r <= n` (`out[0]` is always `None`). One BFS serves every rank.
pub fn rank_lengths(a: &Automaton) -> Vec<Option<usize>> {
    let n = a.n();
    let mut first = vec![None; n + 1];
    let start = a.full_set();
    first[n] = Some(0);
    let mut visited = Visited::new(n);
    visited.insert(start);
    let mut frontier = vec![start];
    let mut depth = 0;
    while !frontier.is_empty() && first[1].is_none() {
        depth += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            for x in 0..a.k() {
                let t = a.image(s, x);
                if visited.insert(t) {
                    first[t.len()].get_or_insert(depth);
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    let mut out = vec![None; n + 1];
    let mut best: Option<usize> = None;
    for r in 1..=n {
        if let Some(d) = first[r] {
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
        out[r] = best;
    }
    out
}

/// A shortest word `w` with `q` not in `Qw`.
pub fn avoid_word(a: &Automaton, q: usize) -> Result<Option<(usize, Word)>> {
    if q >= a.n() {
        return Err(Error::StateOutOfRange { state: q, n: a.n() });
    }
    Ok(shortest_word(a, a.full_set(), |s| !s.contains(q)).map(|(w, _)| (w.len(), w)))
}

pub fn avoid_length(a: &Automaton, q: usize) -> Result<Option<usize>> {
    Ok(avoid_word(a, q)?.map(|(d, _)| d))
}

/// Shortest avoiding-word length for every state, from a single BFS.
pub fn avoid_lengths(a: &Automaton) -> Vec<Option<usize>> {
    let n = a.n();
    let mut out = vec![None; n];
    let mut missing = n;
    let start = a.full_set();
    let mut visited = Visited::new(n);
    visited.insert(start);
    let mut frontier = vec![start];
    let mut depth = 0;
    while !frontier.is_empty() && missing > 0 {
        depth += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            for x in 0..a.k() {
                let t = a.image(s, x);
                if visited.insert(t) {
                    for q in StateSet::full(n).iter().filter(|&q| !t.contains(q)) {
                        if out[q].is_none() {
                            out[q] = Some(depth);
                            missing -= 1;
                        }
                    }
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    out
}

const INF: u8 = u8::MAX;

/// Shortest synchronizing-word length `L(S)` of every non-empty subset.
#[derive(Clone, Debug)]
pub struct SyncProfile {
    n: usize,
    dist: Vec<u8>,
}

impl SyncProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `L(S)`, or `None` if `S` cannot be synchronized.
    pub fn get(&self, s: StateSet) -> Option<usize> {
        assert!(!s.is_empty(), "L is undefined on the empty set");
        match self.dist[s.bits() as usize] {
            INF => None,
            d => Some(d as usize),
        }
    }

    /// `max L(S)` over the subsets of each size, indexed by size; `None` if
    /// some subset of that size is not synchronizable.
    pub fn max_by_size(&self) -> Vec<Option<usize>> {
        let mut out: Vec<Option<usize>> = vec![Some(0); self.n + 1];
        for bits in 1..self.dist.len() {
            let c = (bits as u64).count_ones() as usize;
            let d = self.dist[bits];
            out[c] = match (out[c], d) {
                (None, _) | (_, INF) => None,
                (Some(m), d) => Some(m.max(d as usize)),
            };
        }
        out
    }

    /// Every non-empty subset with its `L(S)`.
    pub fn iter(&self) -> impl Iterator<Item = (StateSet, Option<usize>)> + '_ {
        (1..self.dist.len()).map(|b| {
            let d = self.dist[b];
            (StateSet::from_bits(b as u64), (d != INF).then_some(d as usize))
        })
    }

    /// A word of length `L(S)` mapping `S` to a singleton, read off the table
    /// by descending one level per letter.
    pub fn witness(&self, a: &Automaton, s: StateSet) -> Option<Word> {
        let mut cur = s;
        let mut d = self.get(s)?;
        let mut letters = Vec::with_capacity(d);
        while d > 0 {
            let x = (0..a.k()).find(|&x| self.get(a.image(cur, x)) == Some(d - 1))?;
            letters.push(x);
            cur = a.image(cur, x);
            d -= 1;
        }
        Some(Word::new(letters))
    }
}

/// `L(S)` for every subset, by round-based relaxation: singletons sit at
/// level 0 and a subset enters level `t` once some letter maps it into level
/// `t - 1`. Guarded by [`max_subset_bits`].
pub fn sync_profile(a: &Automaton) -> Result<SyncProfile> {
    let n = a.n();
    guard(n)?;
    let size = 1usize << n;
    let mut dist = vec![INF; size];
    let mut pending: Vec<u64> = Vec::new();
    for bits in 1..size as u64 {
        if bits.count_ones() == 1 {
            dist[bits as usize] = 0;
        } else {
            pending.push(bits);
        }
    }
    let mut round: u8 = 0;
    while !pending.is_empty() {
        round += 1;
        if round == INF {
            return Err(Error::InvalidParameter(
                "subset synchronization lengths exceed 254".into(),
            ));
        }
        let mut entered = Vec::new();
        pending.retain(|&bits| {
            let s = StateSet::from_bits(bits);
            let hit = (0..a.k()).any(|x| dist[a.image(s, x).bits() as usize] == round - 1);
            if hit {
                entered.push(bits);
            }
            !hit
        });
        if entered.is_empty() {
            break;
        }
        for bits in entered {
            dist[bits as usize] = round;
        }
    }
    Ok(SyncProfile { n, dist })
}

/// Length of a shortest word compressing `s`, with every strictly smaller
/// image reachable at that length.
pub fn compress_step(a: &Automaton, s: StateSet) -> Option<(usize, Vec<StateSet>)> {
    let c = s.len();
    bfs_levels(a, Dir::Image, s, |t| t.len() < c, true)
}

/// Length of a shortest word `w` with `|S w^-1| > |S|`, with every such
/// preimage reachable at that length.
pub fn extend_step(a: &Automaton, s: StateSet) -> Option<(usize, Vec<StateSet>)> {
    let c = s.len();
    bfs_levels(a, Dir::Preimage, s, |t| t.len() > c, true)
}

/// Worst-case total length of the greedy compressing algorithm started at
/// `Q`: `W(S) = 0` for singletons and `W(S) = d(S) + max W(T)` over the
/// images `T` of `S` under shortest compressing words. `None` when `A` is not
/// synchronizing.
pub fn greedy_compress_worst(a: &Automaton) -> Result<Option<usize>> {
    guard(a.n())?;
    if !is_synchronizing(a) {
        return Ok(None);
    }
    let mut memo = HashMap::new();
    Ok(compress_worst(a, a.full_set(), &mut memo))
}

fn compress_worst(a: &Automaton, s: StateSet, memo: &mut HashMap<u64, usize>) -> Option<usize> {
    if s.len() <= 1 {
        return Some(0);
    }
    if let Some(&w) = memo.get(&s.bits()) {
        return Some(w);
    }
    let (d, images) = compress_step(a, s)?;
    let mut worst = 0;
    for t in images {
        worst = worst.max(compress_worst(a, t, memo)?);
    }
    memo.insert(s.bits(), d + worst);
    Some(d + worst)
}

/// One adversarial greedy run realising [`greedy_compress_worst`]: the sets
/// visited from `Q` down to a singleton and the word used at each step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyTrace {
    pub steps: Vec<(StateSet, Word)>,
    pub end: StateSet,
}

impl GreedyTrace {
    pub fn total_len(&self) -> usize {
        self.steps.iter().map(|(_, w)| w.len()).sum()
    }
}

pub fn greedy_compress_trace(a: &Automaton) -> Result<Option<GreedyTrace>> {
    guard(a.n())?;
    if !is_synchronizing(a) {
        return Ok(None);
    }
    let mut memo = HashMap::new();
    let mut s = a.full_set();
    let mut steps = Vec::new();
    while s.len() > 1 {
        let (_, images) = compress_step(a, s).expect("synchronizing");
        let t = *images
            .iter()
            .max_by_key(|&&t| (compress_worst(a, t, &mut memo), std::cmp::Reverse(t)))
            .unwrap();
        let (w, _) = shortest_word(a, s, |u| u == t).unwrap();
        steps.push((s, w));
        s = t;
    }
    Ok(Some(GreedyTrace { steps, end: s }))
}

/// How the extending algorithm's starting singleton is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExtendStart {
    /// The adversary picks the singleton.
    #[default]
    Adversarial,
    /// The most favourable singleton is used.
    Best,
}

/// Worst-case total length of the greedy extending algorithm: start from a
/// singleton and repeatedly apply a shortest word `w` with `|S w^-1| > |S|`
/// until the preimage is `Q`.
pub fn greedy_extend_worst(a: &Automaton, start: ExtendStart) -> Result<usize> {
    guard(a.n())?;
    if !is_synchronizing(a) {
        return Err(Error::NotSynchronizing);
    }
    if !crate::structure::is_strongly_connected(a) {
        return Err(Error::NotStronglyConnected);
    }
    let mut memo = HashMap::new();
    let mut values = Vec::with_capacity(a.n());
    for q in 0..a.n() {
        let v = extend_worst(a, StateSet::singleton(q), &mut memo).ok_or_else(|| {
            Error::InvalidParameter(format!("no extending word from {{{q}}}"))
        })?;
        values.push(v);
    }
    Ok(match start {
        ExtendStart::Adversarial => values.into_iter().max().unwrap(),
        ExtendStart::Best => values.into_iter().min().unwrap(),
    })
}

fn extend_worst(a: &Automaton, s: StateSet, memo: &mut HashMap<u64, usize>) -> Option<usize> {
    if s.len() == a.n() {
        return Some(0);
    }
    if let Some(&w) = memo.get(&s.bits()) {
        return Some(w);
    }
    let (d, pre) = extend_step(a, s)?;
    let mut worst = 0;
    for t in pre {
        worst = worst.max(extend_worst(a, t, memo)?);
    }
    memo.insert(s.bits(), d + worst);
    Some(d + worst)
}

/// For a one-cluster letter `x` with cycle `C` and level `l`: the maximum over
/// non-empty proper `S` of `C` of the least `|w|` with
/// `|S (w x^l)^-1 ∩ C| > |S|`. `Ok(None)` when some `S` admits no such word.
pub fn one_cluster_extension_max(a: &Automaton, x: usize) -> Result<Option<usize>> {
    if x >= a.k() {
        return Err(Error::LetterOutOfRange { letter: x, k: a.k() });
    }
    let data = one_cluster_data(a, x).ok_or(Error::NotOneCluster(x))?;
    guard(a.n())?;
    let cycle = data.cycle;
    let members: Vec<usize> = cycle.iter().collect();
    let m = members.len();
    let mut worst = 0;
    for code in 1..(1u64 << m) - 1 {
        let s: StateSet = (0..m).filter(|i| code >> i & 1 == 1).map(|i| members[i]).collect();
        let mut start = s;
        for _ in 0..data.level {
            start = a.preimage(start, x);
        }
        let c = s.len();
        let found = bfs_levels(a, Dir::Preimage, start, |t| t.intersection(cycle).len() > c, false);
        match found {
            Some((d, _)) => worst = worst.max(d),
            None => return Ok(None),
        }
    }
    Ok(Some(worst))
}
