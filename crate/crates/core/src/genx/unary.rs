//! Self-maps of `[n]` up to conjugacy, i.e. functional graphs up to
//! isomorphism.
//!
//! A functional graph is a multiset of connected components; a component is a
//! cycle of rooted trees, taken up to rotation; a rooted tree is a root with a
//! multiset of subtrees. Each level is enumerated in a canonical order, so
//! every class is built once and then brought to its smallest conjugate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::automaton::Automaton;
use crate::canon::lexmin_conjugate;

/// Rooted trees by size: `trees[s]` lists trees with `s` nodes, each as the
/// sorted list of its subtree ids `(size, index)`.
struct Forest {
    trees: Vec<Vec<Vec<(usize, usize)>>>,
}

impl Forest {
    fn new(max: usize) -> Self {
        let mut trees: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); max + 1];
        if max >= 1 {
            trees[1].push(Vec::new());
        }
        for s in 2..=max {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            Self::multisets(&trees, s - 1, (1, 0), &mut cur, &mut out);
            trees[s] = out;
        }
        Forest { trees }
    }

    /// Multisets of trees of total size `left`, ids non-decreasing from `min`.
    fn multisets(
        trees: &[Vec<Vec<(usize, usize)>>],
        left: usize,
        min: (usize, usize),
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for size in min.0..=left {
            let start = if size == min.0 { min.1 } else { 0 };
            for idx in start..trees[size].len() {
                cur.push((size, idx));
                Self::multisets(trees, left - size, (size, idx), cur, out);
                cur.pop();
            }
        }
    }

    /// Writes the tree rooted at `root` into `map`, attaching the root to
    /// `parent`; returns the next free state.
    fn build(&self, id: (usize, usize), root: usize, parent: usize, map: &mut [u8]) -> usize {
        map[root] = parent as u8;
        let mut next = root + 1;
        for &child in &self.trees[id.0][id.1] {
            next = self.build(child, next, root, map);
        }
        next
    }
}

/// Sequences of tree ids with total size `s`, kept only when lexicographically
/// minimal among their rotations.
fn components(forest: &Forest, s: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        forest: &Forest,
        left: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if left == 0 {
            let c = cur.len();
            if (1..c).all(|r| {
                let rot: Vec<_> = cur[r..].iter().chain(&cur[..r]).copied().collect();
                *cur <= rot
            }) {
                out.push(cur.clone());
            }
            return;
        }
        for size in 1..=left {
            for idx in 0..forest.trees[size].len() {
                cur.push((size, idx));
                rec(forest, left - size, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(forest, s, &mut Vec::new(), &mut out);
    out
}

/// One map per conjugacy class of self-maps of `[n]`, each the smallest
/// conjugate, sorted.
pub fn unary_maps(n: usize) -> Vec<Vec<u8>> {
    assert!((1..=64).contains(&n));
    let forest = Forest::new(n);
    let comps: Vec<Vec<Vec<(usize, usize)>>> = (0..=n).map(|s| components(&forest, s)).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    fn rec(
        forest: &Forest,
        comps: &[Vec<Vec<(usize, usize)>>],
        n: usize,
        left: usize,
        min: (usize, usize),
        chosen: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if left == 0 {
            let mut map = vec![0u8; n];
            let mut next = 0;
            for &(s, i) in chosen.iter() {
                let cycle = &comps[s][i];
                let roots: Vec<usize> = {
                    let mut r = Vec::new();
                    for &tree in cycle {
                        r.push(next);
                        next = forest.build(tree, next, next, &mut map);
                    }
                    r
                };
                for (j, &root) in roots.iter().enumerate() {
                    map[root] = roots[(j + 1) % roots.len()] as u8;
                }
            }
            out.push(lexmin_conjugate(&map).0);
            return;
        }
        for s in min.0..=left {
            let start = if s == min.0 { min.1 } else { 0 };
            for i in start..comps[s].len() {
                chosen.push((s, i));
                rec(forest, comps, n, left - s, (s, i), chosen, out);
                chosen.pop();
            }
        }
    }
    rec(&forest, &comps, n, n, (1, 0), &mut chosen, &mut out);
    out.sort();
    out
}

/// The non-isomorphic unary automata on `n` states, in canonical form.
pub fn enumerate_unary(n: usize) -> Vec<Automaton> {
    unary_maps(n)
        .into_iter()
        .map(|m| Automaton::from_table(n, 1, m))
        .collect()
}

/// Number of conjugacy classes of self-maps of `[n]`, by Burnside's lemma: a
/// permutation with cycle lengths `c_1, c_2, ..` commutes with
/// `prod_i (sum_{c_j | c_i} c_j)` maps.
pub fn unary_class_count(n: usize) -> u128 {
    // sum over cycle types: |class| * fix = n! / prod(c^m_c m_c!) * fix
    fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if n == 0 {
            f(cur);
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            partitions(n - part, part, cur, f);
            cur.pop();
        }
    }
    let fact = |m: usize| (1..=m as u128).product::<u128>();
    let mut total: u128 = 0;
    partitions(n, n, &mut Vec::new(), &mut |parts| {
        let fix: u128 = parts
            .iter()
            .map(|&c| parts.iter().filter(|&&d| c % d == 0).map(|&d| d as u128).sum::<u128>())
            .product();
        let mut denom: u128 = 1;
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &c in parts {
            *counts.entry(c).or_default() += 1;
        }
        for (&c, &m) in &counts {
            denom *= (c as u128).pow(m as u32) * fact(m);
        }
        total += fact(n) / denom * fix;
    });
    total / fact(n)
}

/// Class ids of all self-maps of `[n]`; ids follow the order of the smallest
/// conjugates, so comparing ids compares representatives.
pub struct UnaryClasses {
    pub n: usize,
    pub reps: Vec<Vec<u8>>,
    /// Indexed by the base-`n` code of the map (position 0 most significant).
    ids: Option<Vec<u32>>,
    index: HashMap<Vec<u8>, u32>,
}

/// Largest `n^n` for which the class table is materialised.
pub const CLASS_TABLE_LIMIT: u64 = 1 << 24;

pub fn map_code(map: &[u8]) -> u64 {
    let n = map.len() as u64;
    map.iter().fold(0u64, |c, &t| c * n + t as u64)
}

impl UnaryClasses {
    fn build(n: usize) -> Self {
        let reps = unary_maps(n);
        let index: HashMap<Vec<u8>, u32> =
            reps.iter().enumerate().map(|(i, r)| (r.clone(), i as u32)).collect();
        let total = (n as u64).checked_pow(n as u32);
        let ids = total.filter(|&t| t <= CLASS_TABLE_LIMIT).map(|total| {
            (0..total)
                .into_par_iter()
                .map(|code| {
                    let mut map = vec![0u8; n];
                    let mut c = code;
                    for q in (0..n).rev() {
                        map[q] = (c % n as u64) as u8;
                        c /= n as u64;
                    }
                    index[&lexmin_conjugate(&map).0]
                })
                .collect()
        });
        UnaryClasses { n, reps, ids, index }
    }

    /// The shared table for `n`.
    pub fn get(n: usize) -> Arc<UnaryClasses> {
        static TABLES: OnceLock<Mutex<HashMap<usize, Arc<UnaryClasses>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = tables.lock().unwrap().get(&n) {
            return Arc::clone(t);
        }
        let t = Arc::new(UnaryClasses::build(n));
        tables.lock().unwrap().entry(n).or_insert(t).clone()
    }

    pub fn class_of(&self, map: &[u8]) -> u32 {
        match &self.ids {
            Some(ids) => ids[map_code(map) as usize],
            None => self.index[&lexmin_conjugate(map).0],
        }
    }

    /// Class id of a map given its code, when the table is materialised.
    pub fn class_of_code(&self, code: u64) -> Option<u32> {
        self.ids.as_ref().map(|ids| ids[code as usize])
    }

    pub fn is_rep(&self, map: &[u8]) -> bool {
        self.reps[self.class_of(map) as usize] == map
    }
}
