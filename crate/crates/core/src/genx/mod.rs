//! Isomorph-free generation of automata.
//!
//! Generation starts from the unary automata up to conjugacy and adds one
//! letter at a time. The existing letters are kept fixed and the new letter
//! ranges over representatives of its orbits under the automorphism group of
//! the prefix, so with a canonical prefix every output is itself in
//! (letter-fixed) canonical form. Optionally, automata that are not the
//! smallest over all letter orders are dropped as well.
//!
//! Prefixes can be pruned with [`extension_reset_ubound`]: when every
//! synchronizing extension of a prefix provably resets below the threshold,
//! none of its extensions is generated.

mod unary;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use unary::{enumerate_unary, map_code, unary_class_count, unary_maps, UnaryClasses};

use crate::automaton::Automaton;
use crate::bounds::{compressible_pairs, one_cluster_bound, theorem1_sum, DEFAULT_CLUSTER_WORD_LEN};
use crate::canon::{automorphisms, canonical_form, permutations};
use crate::error::{Error, Result};
use crate::search::is_synchronizing;
use crate::structure::{is_irreducibly_synchronizing, is_strongly_connected};

/// Node budget of the Frankl-Pin search used while pruning.
pub const PRUNE_FP_BUDGET: usize = 20_000;

/// An upper bound on the reset length of every synchronizing automaton that
/// extends `a` by further letters, or `None` when no ingredient applies.
///
/// Two facts survive adding letters: compressible pairs stay compressible
/// with no larger merge lengths, and one-cluster words keep inducing the same
/// transformation. The bound is the smaller of the summed pair bound (over
/// `a`'s compressible pairs, when there are any) and the one-cluster bound.
pub fn extension_reset_ubound(a: &Automaton) -> Option<i64> {
    extension_reset_ubound_with(a, PRUNE_FP_BUDGET)
}

pub fn extension_reset_ubound_with(a: &Automaton, fp_budget: usize) -> Option<i64> {
    if a.n() == 1 {
        return Some(0);
    }
    let pairs = compressible_pairs(a);
    let pair_bound = (!pairs.is_empty()).then(|| theorem1_sum(&pairs, fp_budget));
    let cluster = one_cluster_bound(a, DEFAULT_CLUSTER_WORD_LEN).map(|(v, _)| v);
    match (pair_bound, cluster) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// A prefix-pruning rule.
pub trait Prune: Sync {
    /// True when no extension of `a` needs to be generated.
    fn prune(&self, a: &Automaton) -> bool;
}

/// Never prunes.
pub struct NoPrune;

impl Prune for NoPrune {
    fn prune(&self, _: &Automaton) -> bool {
        false
    }
}

impl<F: Fn(&Automaton) -> bool + Sync> Prune for F {
    fn prune(&self, a: &Automaton) -> bool {
        self(a)
    }
}

/// Letter-permutation test for an automaton in letter-fixed canonical form:
/// true iff it is also the smallest over all letter orders.
pub fn is_letter_minimal(b: &Automaton, classes: &UnaryClasses) -> bool {
    if b.k() <= 1 {
        return true;
    }
    let ids: Vec<u32> = (0..b.k()).map(|x| classes.class_of(b.row(x))).collect();
    if ids[1..].iter().any(|&c| c < ids[0]) {
        return false;
    }
    for order in permutations(b.k()).into_iter().skip(1) {
        if ids[order[0]] != ids[0] {
            continue;
        }
        let c = canonical_form(&b.reorder_letters(&order), false);
        if c.table() < b.table() {
            return false;
        }
    }
    true
}

/// All one-letter extensions of the canonical automaton `a`, one per
/// isomorphism class with the letter order fixed; with `dedupe_letters`, one
/// per class up to letter renaming. Extensions rejected by `keep` are
/// skipped. Output order is the lexicographic order of the new letter.
pub fn extend_one_letter(
    a: &Automaton,
    dedupe_letters: bool,
    keep: impl Fn(&Automaton) -> bool,
) -> Vec<Automaton> {
    let n = a.n();
    if a.k() == 0 {
        return enumerate_unary(n).into_iter().filter(|b| keep(b)).collect();
    }
    let classes = dedupe_letters.then(|| UnaryClasses::get(n));
    let auts: Vec<Vec<usize>> = automorphisms(a).into_iter().filter(|s| s.iter().enumerate().any(|(i, &t)| i != t)).collect();
    let full_group = auts.len() + 1 == (1..=n).product::<usize>();
    let unary = full_group.then(|| UnaryClasses::get(n));
    let mut out = Vec::new();
    let mut row = vec![0u8; n];
    let mut image = vec![0u8; n];
    loop {
        let minimal = match &unary {
            // the prefix letters all act trivially: orbits are conjugacy classes
            Some(c) => c.is_rep(&row),
            None => auts.iter().all(|sigma| {
                for q in 0..n {
                    image[sigma[q]] = sigma[row[q] as usize] as u8;
                }
                image >= row
            }),
        };
        if minimal {
            let b = a.with_letter(&row);
            let letters_ok = classes.as_ref().is_none_or(|c| is_letter_minimal(&b, c));
            if letters_ok && keep(&b) {
                out.push(b);
            }
        }
        // next row in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            row[i] += 1;
            if (row[i] as usize) < n {
                break;
            }
            row[i] = 0;
        }
    }
}

/// Class restrictions applied to the generated automata.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filters {
    pub synchronizing: bool,
    pub strongly_connected: bool,
    pub irreducible: bool,
}

impl Filters {
    pub fn accepts(&self, a: &Automaton) -> bool {
        if self.strongly_connected && !is_strongly_connected(a) {
            return false;
        }
        if self.irreducible {
            return matches!(is_irreducibly_synchronizing(a), Ok(true));
        }
        !self.synchronizing || is_synchronizing(a)
    }

    /// Parses a comma-separated list of `sync`, `sc`, `irreducible` (or their
    /// long names); `all` or the empty string means no filter.
    pub fn parse(s: &str) -> Result<Filters> {
        let mut f = Filters::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "all" | "none" => {}
                "sync" | "synchronizing" => f.synchronizing = true,
                "sc" | "strongly_connected" | "strongly-connected" => f.strongly_connected = true,
                "irreducible" | "irr" => f.irreducible = true,
                other => {
                    return Err(Error::InvalidParameter(format!("unknown filter `{other}`")))
                }
            }
        }
        Ok(f)
    }
}

impl std::fmt::Display for Filters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.synchronizing {
            parts.push("sync");
        }
        if self.strongly_connected {
            parts.push("sc");
        }
        if self.irreducible {
            parts.push("irreducible");
        }
        if parts.is_empty() {
            f.write_str("all")
        } else {
            f.write_str(&parts.join(","))
        }
    }
}

/// What to generate and how.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationPlan {
    pub n: usize,
    pub k: usize,
    /// Prefixes whose extension bound is below this are dropped.
    pub threshold: Option<usize>,
    pub filters: Filters,
    /// Identify automata that differ only by the order of their letters.
    pub dedupe_letters: bool,
    /// Seeds (automata with `k - 1` letters) per chunk.
    pub chunk_size: usize,
    pub fp_budget: usize,
}

impl GenerationPlan {
    pub fn new(n: usize, k: usize) -> Self {
        GenerationPlan {
            n,
            k,
            threshold: None,
            filters: Filters::default(),
            dedupe_letters: true,
            chunk_size: 16,
            fp_budget: PRUNE_FP_BUDGET,
        }
    }

    pub fn with_threshold(mut self, t: Option<usize>) -> Self {
        self.threshold = t;
        self
    }

    pub fn with_filters(mut self, f: Filters) -> Self {
        self.filters = f;
        self
    }

    pub fn with_dedupe_letters(mut self, d: bool) -> Self {
        self.dedupe_letters = d;
        self
    }

    pub fn with_chunk_size(mut self, c: usize) -> Self {
        self.chunk_size = c.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=crate::stateset::MAX_STATES).contains(&self.n) {
            return Err(Error::InvalidParameter(format!("n = {} out of range", self.n)));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.n > 10 {
            return Err(Error::InvalidParameter(format!(
                "exhaustive generation beyond n = 10 is not supported (n = {})",
                self.n
            )));
        }
        Ok(())
    }

    /// Prefix pruning at the intermediate levels.
    fn prune_prefix(&self, a: &Automaton) -> bool {
        if self.filters.irreducible && is_synchronizing(a) {
            // every extension would have a synchronizing proper sub-alphabet
            return true;
        }
        match self.threshold {
            Some(t) => extension_reset_ubound_with(a, self.fp_budget).is_some_and(|b| b < t as i64),
            None => false,
        }
    }

    /// The automata with `k - 1` letters whose extensions form the output,
    /// after pruning; for `k = 1` the single letterless automaton.
    pub fn seeds(&self) -> Result<Vec<Automaton>> {
        self.validate()?;
        let mut level = vec![Automaton::empty(self.n)];
        for _ in 1..self.k {
            level = level
                .par_iter()
                .flat_map_iter(|a| {
                    extend_one_letter(a, self.dedupe_letters, |b| !self.prune_prefix(b))
                })
                .collect();
        }
        Ok(level)
    }

    /// The final automata grown from one seed, in generation order.
    pub fn expand_seed(&self, seed: &Automaton) -> Vec<Automaton> {
        extend_one_letter(seed, self.dedupe_letters, |b| self.filters.accepts(b))
    }

    pub fn chunk_count(&self, seeds: usize) -> usize {
        seeds.div_ceil(self.chunk_size)
    }

    /// The final automata of chunk `i`.
    pub fn expand_chunk(&self, seeds: &[Automaton], i: usize) -> Vec<Automaton> {
        let lo = i * self.chunk_size;
        let hi = (lo + self.chunk_size).min(seeds.len());
        seeds[lo..hi].iter().flat_map(|s| self.expand_seed(s)).collect()
    }
}

/// Every automaton of the plan, in deterministic order.
pub fn run_plan(plan: &GenerationPlan) -> Result<Vec<Automaton>> {
    let seeds = plan.seeds()?;
    let chunks: Vec<Vec<Automaton>> = (0..plan.chunk_count(seeds.len()))
        .into_par_iter()
        .map(|i| plan.expand_chunk(&seeds, i))
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}
