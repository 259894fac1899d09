//! Structural classifiers: connectivity, aperiodicity, irreducibility,
//! permutation letters, bidirectional paths and Kari-like automata.

use std::collections::HashSet;

use serde::Serialize;

use crate::automaton::Automaton;
use crate::bounds::one_cluster_data;
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::fixtures::{fixture, Fixture};
use crate::search::is_synchronizing;
use crate::stateset::StateSet;
use crate::transform::Transformation;

/// Element cap of the semigroup scan used when none is given.
pub const DEFAULT_SEMIGROUP_CAP: usize = 50_000_000;

fn reach(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> StateSet {
    let mut seen = StateSet::singleton(0);
    let mut stack = vec![0];
    while let Some(q) = stack.pop() {
        for t in succ(q) {
            if !seen.contains(t) {
                seen.insert(t);
                stack.push(t);
            }
        }
    }
    debug_assert!(seen.is_subset(StateSet::full(n)));
    seen
}

/// The underlying digraph over all letters is strongly connected.
pub fn is_strongly_connected(a: &Automaton) -> bool {
    let n = a.n();
    let forward = reach(n, |q| (0..a.k()).map(|x| a.next(q, x)).collect());
    if forward.len() != n {
        return false;
    }
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..a.k() {
        for q in 0..n {
            back[a.next(q, x)].push(q);
        }
    }
    reach(n, |q| back[q].clone()).len() == n
}

/// Outcome of a semigroup closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupScan {
    pub size: usize,
    pub aperiodic: bool,
    /// The closure stopped at the element cap.
    pub truncated: bool,
}

/// Enumerates the transition semigroup by closing the letters under right
/// multiplication. With `stop_on_period` the scan ends at the first element
/// with a cycle of length at least 2.
pub fn semigroup_scan(a: &Automaton, cap: usize, stop_on_period: bool) -> SemigroupScan {
    let letters: Vec<Transformation> = a.letters().collect();
    let mut seen: HashSet<Transformation> = HashSet::new();
    let mut queue: Vec<Transformation> = Vec::new();
    let mut aperiodic = true;
    for t in &letters {
        if seen.insert(t.clone()) {
            queue.push(t.clone());
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let t = queue[head].clone();
        head += 1;
        if t.has_nontrivial_cycle() {
            aperiodic = false;
            if stop_on_period {
                return SemigroupScan { size: seen.len(), aperiodic, truncated: false };
            }
        }
        for x in &letters {
            let u = t.then(x);
            if !seen.contains(&u) {
                if seen.len() >= cap {
                    return SemigroupScan { size: seen.len(), aperiodic, truncated: true };
                }
                seen.insert(u.clone());
                queue.push(u);
            }
        }
    }
    SemigroupScan { size: seen.len(), aperiodic, truncated: false }
}

/// No word induces a transformation with a cycle of length at least 2.
/// Errors with [`Error::Indeterminate`] when the semigroup outgrows `cap`
/// before a periodic element is found.
pub fn is_aperiodic_capped(a: &Automaton, cap: usize) -> Result<bool> {
    let scan = semigroup_scan(a, cap, true);
    if !scan.aperiodic {
        return Ok(false);
    }
    if scan.truncated {
        return Err(Error::Indeterminate(cap));
    }
    Ok(true)
}

pub fn is_aperiodic(a: &Automaton) -> Result<bool> {
    is_aperiodic_capped(a, DEFAULT_SEMIGROUP_CAP)
}

/// Synchronizing, with no proper non-empty sub-alphabet synchronizing. A
/// sub-alphabet synchronizes only if every larger one does, so it suffices to
/// drop one letter at a time. Unary synchronizing automata qualify.
pub fn is_irreducibly_synchronizing(a: &Automaton) -> Result<bool> {
    if !is_synchronizing(a) {
        return Err(Error::NotSynchronizing);
    }
    if a.k() <= 1 {
        return Ok(true);
    }
    for drop in 0..a.k() {
        let keep: Vec<usize> = (0..a.k()).filter(|&x| x != drop).collect();
        if is_synchronizing(&a.restrict(&keep)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// After deleting loops, the digraph is symmetric and its underlying simple
/// graph is a path through all states.
pub fn is_bidirectional_path(a: &Automaton) -> bool {
    let n = a.n();
    let mut adj = vec![StateSet::EMPTY; n];
    for x in 0..a.k() {
        for q in 0..n {
            let t = a.next(q, x);
            if t != q {
                adj[q].insert(t);
            }
        }
    }
    for q in 0..n {
        if adj[q].iter().any(|t| !adj[t].contains(q)) {
            return false;
        }
    }
    let edges: usize = adj.iter().map(|s| s.len()).sum::<usize>() / 2;
    if edges != n - 1 || adj.iter().any(|s| s.len() > 2) {
        return false;
    }
    reach(n, |q| adj[q].iter().collect()).len() == n
}

/// Every letter acts as a bijection.
pub fn is_permutation_automaton(a: &Automaton) -> bool {
    a.letters().all(|t| t.is_permutation())
}

/// Weakly connected components of the underlying digraph, each sorted, in
/// order of their smallest state.
pub fn components(a: &Automaton) -> Vec<Vec<usize>> {
    let n = a.n();
    let mut adj = vec![StateSet::EMPTY; n];
    for x in 0..a.k() {
        for q in 0..n {
            let t = a.next(q, x);
            adj[q].insert(t);
            adj[t].insert(q);
        }
    }
    let mut done = StateSet::EMPTY;
    let mut out = Vec::new();
    for q in 0..n {
        if done.contains(q) {
            continue;
        }
        let mut comp = StateSet::singleton(q);
        let mut stack = vec![q];
        while let Some(p) = stack.pop() {
            for t in adj[p].iter() {
                if !comp.contains(t) {
                    comp.insert(t);
                    stack.push(t);
                }
            }
        }
        done = done.union(comp);
        out.push(comp.iter().collect());
    }
    out
}

/// The automaton induced on a component, with letters acting as the identity
/// removed and repeated letters merged.
fn reduced_component(a: &Automaton, comp: &[usize]) -> Automaton {
    let mut index = vec![usize::MAX; a.n()];
    for (i, &q) in comp.iter().enumerate() {
        index[q] = i;
    }
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for x in 0..a.k() {
        let row: Vec<usize> = comp.iter().map(|&q| index[a.next(q, x)]).collect();
        let identity = row.iter().enumerate().all(|(i, &t)| i == t);
        if !identity && !rows.contains(&row) {
            rows.push(row);
        }
    }
    Automaton::new(comp.len(), rows).expect("components are closed under letters")
}

/// In the closure of Kari's automaton under trivial extensions and disjoint
/// unions with permutation automata: exactly one component reduces to Kari's
/// automaton (up to renaming states and letters) and every other component
/// is a permutation automaton.
pub fn is_kari_like(a: &Automaton) -> bool {
    let kari = fixture(Fixture::Kari, None).expect("fixed table");
    let kari_form = canonical_form(&kari, true);
    let mut kari_components = 0;
    for comp in components(a) {
        let r = reduced_component(a, &comp);
        if is_permutation_automaton(&r) {
            continue;
        }
        if r.n() == kari.n() && r.k() == kari.k() && canonical_form(&r, true) == kari_form {
            kari_components += 1;
        } else {
            return false;
        }
    }
    kari_components == 1
}

/// All classifier outputs for one automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub synchronizing: bool,
    pub strongly_connected: bool,
    pub irreducibly_synchronizing: Option<bool>,
    /// `None` when the semigroup scan gave up.
    pub aperiodic: Option<bool>,
    pub bidirectional_path: bool,
    pub permutation: bool,
    pub kari_like: bool,
    pub one_cluster_letters: Vec<usize>,
}

pub fn classify(a: &Automaton) -> Classification {
    Classification {
        synchronizing: is_synchronizing(a),
        strongly_connected: is_strongly_connected(a),
        irreducibly_synchronizing: is_irreducibly_synchronizing(a).ok(),
        aperiodic: is_aperiodic(a).ok(),
        bidirectional_path: is_bidirectional_path(a),
        permutation: is_permutation_automaton(a),
        kari_like: is_kari_like(a),
        one_cluster_letters: (0..a.k()).filter(|&x| one_cluster_data(a, x).is_some()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Word;
    use proptest::prelude::*;

    fn all_automata(n: usize, k: usize) -> impl Iterator<Item = Automaton> {
        let cells = n * k;
        (0..n.pow(cells as u32)).map(move |mut code| {
            let table = (0..cells)
                .map(|_| {
                    let t = (code % n) as u8;
                    code /= n;
                    t
                })
                .collect();
            Automaton::from_table(n, k, table)
        })
    }

    /// Periodic element among the words of length at most `len`.
    fn periodic_word_exists(a: &Automaton, len: usize) -> bool {
        let mut layer = vec![Transformation::identity(a.n())];
        for _ in 0..len {
            let mut next = Vec::new();
            for t in &layer {
                for x in 0..a.k() {
                    let u = t.then(&a.letter(x));
                    if u.has_nontrivial_cycle() {
                        return true;
                    }
                    next.push(u);
                }
            }
            layer = next;
        }
        false
    }

    #[test]
    fn aperiodic_matches_word_enumeration() {
        for (n, k, len) in [(2, 2, 6), (3, 2, 9), (3, 3, 7)] {
            for a in all_automata(n, k) {
                let by_words = !periodic_word_exists(&a, len);
                assert_eq!(is_aperiodic(&a).unwrap(), by_words, "{a}");
            }
        }
    }

    #[test]
    fn aperiodic_series() {
        for n in 2..=8 {
            let a = fixture(Fixture::Aperiodic3, Some(n)).unwrap();
            assert!(is_aperiodic(&a).unwrap(), "n={n}");
        }
        let c = fixture(Fixture::Cerny, Some(4)).unwrap();
        assert!(!is_aperiodic(&c).unwrap());
        let one = Automaton::new(1, vec![vec![0]]).unwrap();
        assert!(is_aperiodic(&one).unwrap());
    }

    #[test]
    fn indeterminate_when_capped() {
        // aperiodic, with more than two elements
        let c = Automaton::new(5, vec![vec![0, 0, 1, 2, 3], vec![1, 1, 2, 3, 4]]).unwrap();
        assert!(matches!(is_aperiodic_capped(&c, 2), Err(Error::Indeterminate(2))));
    }

    #[test]
    fn connectivity() {
        let fig1 = fixture(Fixture::Fig1, None).unwrap();
        assert!(is_strongly_connected(&fig1));
        let sink = Automaton::new(3, vec![vec![1, 2, 2]]).unwrap();
        assert!(!is_strongly_connected(&sink));
        assert!(is_strongly_connected(&fixture(Fixture::Cerny, Some(6)).unwrap()));
    }

    #[test]
    fn irreducibility() {
        for n in 3..=6 {
            let c = fixture(Fixture::Cerny, Some(n)).unwrap();
            assert!(is_irreducibly_synchronizing(&c).unwrap());
        }
        // for two states the non-permutation letter alone merges the pair
        let c2 = fixture(Fixture::Cerny, Some(2)).unwrap();
        assert!(!is_irreducibly_synchronizing(&c2).unwrap());
        let unary = Automaton::new(3, vec![vec![0, 0, 0]]).unwrap();
        assert!(is_irreducibly_synchronizing(&unary).unwrap());
        let id = Automaton::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(is_irreducibly_synchronizing(&id), Err(Error::NotSynchronizing)));
        let redundant = Automaton::new(2, vec![vec![0, 0], vec![1, 0]]).unwrap();
        assert!(!is_irreducibly_synchronizing(&redundant).unwrap());
    }

    #[test]
    fn paths() {
        let p2 = Automaton::new(2, vec![vec![1, 1], vec![0, 0]]).unwrap();
        assert!(is_bidirectional_path(&p2));
        let p3 = Automaton::new(3, vec![vec![1, 2, 2], vec![0, 0, 1]]).unwrap();
        assert!(is_bidirectional_path(&p3));
        assert_eq!(crate::search::reset_length(&p3), Some(2));
        assert!(!is_bidirectional_path(&fixture(Fixture::Cerny, Some(4)).unwrap()));
        assert!(!is_bidirectional_path(&fixture(Fixture::Aperiodic3, Some(6)).unwrap()));
    }

    #[test]
    fn permutation_letters() {
        assert!(is_permutation_automaton(&Automaton::new(4, vec![vec![1, 2, 3, 0]]).unwrap()));
        assert!(!is_permutation_automaton(&fixture(Fixture::Cerny, Some(4)).unwrap()));
        let kp = fixture(Fixture::KariPrime, None).unwrap();
        let comps = components(&kp);
        assert_eq!(comps, vec![vec![0, 1, 2, 3, 4, 5], vec![6, 7, 8]]);
        assert!(is_permutation_automaton(&reduced_component(&kp, &comps[1])));
    }

    #[test]
    fn kari_like() {
        let kari = fixture(Fixture::Kari, None).unwrap();
        assert!(is_kari_like(&kari));
        assert!(is_kari_like(&fixture(Fixture::KariPrime, None).unwrap()));
        assert!(!is_kari_like(&fixture(Fixture::Cerny, Some(6)).unwrap()));
        // trivial extension by the identity and by a copy of b
        let ext = kari.with_letter(&[0, 1, 2, 3, 4, 5]).with_letter(kari.row(1));
        assert!(is_kari_like(&ext));
        let w = Word::new(vec![0, 1]);
        let ab = kari.word_action(&w).unwrap();
        assert!(!is_kari_like(&kari.with_letter(ab.as_bytes())));
    }

    proptest! {
        #[test]
        fn path_invariant_under_relabelling(
            (n, table) in (2usize..7).prop_flat_map(|n| (Just(n), proptest::collection::vec(0..n as u8, 2 * n))),
            seed in any::<u64>(),
        ) {
            let a = Automaton::from_table(n, 2, table);
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let b = a.relabel_states(&perm);
            prop_assert_eq!(is_bidirectional_path(&a), is_bidirectional_path(&b));
            prop_assert_eq!(is_strongly_connected(&a), is_strongly_connected(&b));
            prop_assert_eq!(is_kari_like(&a), is_kari_like(&b));
        }
    }
}
