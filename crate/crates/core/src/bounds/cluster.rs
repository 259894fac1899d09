//! One-cluster letters and words.

use crate::automaton::{Automaton, Word};
use crate::stateset::StateSet;
use crate::transform::Transformation;

/// A transformation whose functional graph is connected: a single cycle `C`
/// of length `m` with trees attached, reached from every state after `level`
/// steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneClusterData {
    pub cycle: StateSet,
    pub m: usize,
    pub level: usize,
    /// The cycle listed from its smallest state along the map.
    pub cycle_order: Vec<usize>,
}

/// Cycle and level of `t` if its functional graph has exactly one cycle.
pub fn one_cluster_of(t: &Transformation) -> Option<OneClusterData> {
    let mut cycles = t.cycles();
    if cycles.len() != 1 {
        return None;
    }
    let cycle_order = cycles.pop().unwrap();
    let cycle: StateSet = cycle_order.iter().copied().collect();
    let mut image = StateSet::full(t.n());
    let mut level = 0;
    while image != cycle {
        image = t.image(image);
        level += 1;
    }
    Some(OneClusterData { cycle, m: cycle_order.len(), level, cycle_order })
}

/// One-cluster data of letter `x`, if the letter is one-cluster.
pub fn one_cluster_data(a: &Automaton, x: usize) -> Option<OneClusterData> {
    one_cluster_of(&a.letter(x))
}

/// Every word of length `1..=max_len` inducing a one-cluster transformation.
pub fn one_cluster_words(a: &Automaton, max_len: usize) -> Vec<(Word, OneClusterData)> {
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<usize>, Transformation)> = vec![(Vec::new(), Transformation::identity(a.n()))];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * a.k());
        for (w, t) in &layer {
            for x in 0..a.k() {
                let mut v = w.clone();
                v.push(x);
                let u = t.then(&a.letter(x));
                if let Some(d) = one_cluster_of(&u) {
                    out.push((Word::new(v.clone()), d));
                }
                next.push((v, u));
            }
        }
        layer = next;
    }
    out
}
