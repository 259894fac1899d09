//! Canonical forms, isomorphism and automorphisms.
//!
//! The canonical form of an automaton is the lexicographically smallest
//! transition table (letter-major: the whole row of letter 0 first, then
//! letter 1, ...) over all relabellings of the states. Because the order is
//! letter-major it can be computed one row at a time: row 0 is the smallest
//! conjugate of the first letter, and the remaining rows are minimised over the
//! centraliser of that conjugate. The generator in [`crate::genx`] relies on
//! exactly this structure.

use crate::automaton::Automaton;

const NONE: u8 = u8::MAX;

/// Smallest conjugate of a self-map, together with the relabelling that
/// produces it (`sigma[old] = new`).
pub fn lexmin_conjugate(map: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let n = map.len();
    let mut s = UnarySearch {
        f: map,
        n,
        label: vec![NONE; n],
        state: vec![NONE; n],
        count: 0,
        cur: vec![0; n],
        best: None,
    };
    s.dfs(0);
    s.best.expect("search always reaches a leaf")
}

struct UnarySearch<'a> {
    f: &'a [u8],
    n: usize,
    label: Vec<u8>,
    state: Vec<u8>,
    count: usize,
    cur: Vec<u8>,
    best: Option<(Vec<u8>, Vec<u8>)>,
}

impl UnarySearch<'_> {
    fn assign(&mut self, q: usize) {
        self.label[q] = self.count as u8;
        self.state[self.count] = q as u8;
        self.count += 1;
    }

    fn unassign(&mut self, q: usize) {
        self.count -= 1;
        self.label[q] = NONE;
        self.state[self.count] = NONE;
    }

    fn worse_than_best(&self, upto: usize) -> bool {
        match &self.best {
            Some((row, _)) => self.cur[..=upto] > row[..=upto],
            None => false,
        }
    }

    /// Swapping `p` and `q` commutes with the map.
    fn transposition_commutes(&self, p: usize, q: usize) -> bool {
        let swap = |s: usize| {
            if s == p {
                q
            } else if s == q {
                p
            } else {
                s
            }
        };
        (0..self.n).all(|s| self.f[swap(s)] as usize == swap(self.f[s] as usize))
    }

    /// Fills position `i` from the already chosen state of label `i`.
    fn step(&mut self, i: usize) {
        let t = self.f[self.state[i] as usize] as usize;
        let fresh = self.label[t] == NONE;
        if fresh {
            self.assign(t);
        }
        self.cur[i] = self.label[t];
        if !self.worse_than_best(i) {
            self.dfs(i + 1);
        }
        if fresh {
            self.unassign(t);
        }
    }

    fn dfs(&mut self, i: usize) {
        if i == self.n {
            let better = match &self.best {
                Some((row, _)) => self.cur < *row,
                None => true,
            };
            if better {
                self.best = Some((self.cur.clone(), self.label.clone()));
            }
            return;
        }
        if i < self.count {
            self.step(i);
            return;
        }
        // label i is free: any unlabelled state may take it
        let value = |c: usize| -> usize {
            let t = self.f[c] as usize;
            if t == c {
                i
            } else if self.label[t] != NONE {
                self.label[t] as usize
            } else {
                i + 1
            }
        };
        let free: Vec<usize> = (0..self.n).filter(|&c| self.label[c] == NONE).collect();
        let best_value = free.iter().map(|&c| value(c)).min().unwrap();
        let mut reps: Vec<usize> = Vec::new();
        for c in free.into_iter().filter(|&c| value(c) == best_value) {
            // an automorphism swapping two free states makes their subtrees identical
            if reps.iter().any(|&r| self.transposition_commutes(r, c)) {
                continue;
            }
            reps.push(c);
        }
        for c in reps {
            self.assign(c);
            self.step(i);
            self.unassign(c);
        }
    }
}

/// Calls `visit` with every automorphism `sigma` (`sigma[q]` is the image of
/// `q`) until it returns `false`.
pub fn for_each_automorphism<F: FnMut(&[u8]) -> bool>(a: &Automaton, mut visit: F) {
    let n = a.n();
    let mut sigma = vec![NONE; n];
    let mut used = vec![false; n];
    aut_search(a, &mut sigma, &mut used, &mut visit);
}

fn aut_search<F: FnMut(&[u8]) -> bool>(
    a: &Automaton,
    sigma: &mut Vec<u8>,
    used: &mut Vec<bool>,
    visit: &mut F,
) -> bool {
    let Some(q) = sigma.iter().position(|&s| s == NONE) else {
        return visit(sigma);
    };
    let mut trail = Vec::new();
    for p in 0..a.n() {
        if used[p] {
            continue;
        }
        let ok = propagate(a, q, p, sigma, used, &mut trail);
        if ok && !aut_search(a, sigma, used, visit) {
            undo(sigma, used, &mut trail);
            return false;
        }
        undo(sigma, used, &mut trail);
    }
    true
}

fn propagate(
    a: &Automaton,
    q: usize,
    p: usize,
    sigma: &mut [u8],
    used: &mut [bool],
    trail: &mut Vec<usize>,
) -> bool {
    let mut stack = vec![(q, p)];
    while let Some((q, p)) = stack.pop() {
        if sigma[q] != NONE {
            if sigma[q] as usize != p {
                return false;
            }
            continue;
        }
        if used[p] {
            return false;
        }
        sigma[q] = p as u8;
        used[p] = true;
        trail.push(q);
        for x in 0..a.k() {
            stack.push((a.next(q, x), a.next(p, x)));
        }
    }
    true
}

fn undo(sigma: &mut [u8], used: &mut [bool], trail: &mut Vec<usize>) {
    for q in trail.drain(..) {
        used[sigma[q] as usize] = false;
        sigma[q] = NONE;
    }
}

/// All state permutations commuting with every letter.
pub fn automorphisms(a: &Automaton) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_automorphism(a, |s| {
        out.push(s.iter().map(|&t| t as usize).collect());
        true
    });
    out
}

/// Canonical form with the letter order fixed, and the relabelling that
/// produces it.
fn canonical_fixed(a: &Automaton) -> (Automaton, Vec<usize>) {
    let n = a.n();
    if a.k() == 0 {
        return (a.clone(), (0..n).collect());
    }
    let (row0, sigma0) = lexmin_conjugate(a.row(0));
    let sigma0: Vec<usize> = sigma0.into_iter().map(usize::from).collect();
    let first = a.relabel_states(&sigma0);
    if a.k() == 1 {
        return (first, sigma0);
    }
    let centraliser = Automaton::from_table(n, 1, row0);
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    let mut table = vec![0u8; n * a.k()];
    for_each_automorphism(&centraliser, |sigma| {
        for x in 1..a.k() {
            for q in 0..n {
                table[x * n + sigma[q] as usize] = sigma[first.next(q, x)];
            }
        }
        let tail = &table[n..];
        let better = match &best {
            Some((b, _)) => tail < &b[..],
            None => true,
        };
        if better {
            best = Some((tail.to_vec(), sigma.iter().map(|&t| t as usize).collect()));
        }
        true
    });
    let (_, sigma) = best.unwrap();
    let canon = first.relabel_states(&sigma);
    let total: Vec<usize> = sigma0.iter().map(|&s| sigma[s]).collect();
    (canon, total)
}

/// The lexicographically smallest transition table over all state
/// relabellings, and over all letter reorderings when `permute_letters` is
/// set. Two automata are isomorphic iff their canonical forms are equal.
pub fn canonical_form(a: &Automaton, permute_letters: bool) -> Automaton {
    if !permute_letters || a.k() <= 1 {
        return canonical_fixed(a).0;
    }
    // only letters whose smallest conjugate is minimal can come first
    let reps: Vec<Vec<u8>> = (0..a.k()).map(|x| lexmin_conjugate(a.row(x)).0).collect();
    let min_rep = reps.iter().min().unwrap();
    let mut best: Option<Automaton> = None;
    for order in permutations(a.k()) {
        if &reps[order[0]] != min_rep {
            continue;
        }
        let c = canonical_fixed(&a.reorder_letters(&order)).0;
        if best.as_ref().is_none_or(|b| c.table() < b.table()) {
            best = Some(c);
        }
    }
    best.unwrap()
}

/// A relabelling `sigma` with `a.relabel_states(&sigma)` equal to the
/// letter-fixed canonical form.
pub fn canonical_labeling(a: &Automaton) -> Vec<usize> {
    canonical_fixed(a).1
}

pub fn is_isomorphic(a: &Automaton, b: &Automaton, permute_letters: bool) -> bool {
    a.n() == b.n()
        && a.k() == b.k()
        && canonical_form(a, permute_letters) == canonical_form(b, permute_letters)
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}
