//! Upper bounds on reset and compressing lengths.

mod cluster;
mod dstar;
mod franklpin;
mod pairs;

use std::collections::BTreeMap;

use serde::Serialize;

pub use cluster::{one_cluster_data, one_cluster_of, one_cluster_words, OneClusterData};
pub use dstar::{dstar, dstar_by_rank, dstar_table, integer_rank, DStarTable, MAX_M as DSTAR_MAX_M};
pub use franklpin::{franklpin_length, max_franklpin, FpEntry, FranklPinSequence, DEFAULT_BUDGET};
pub use pairs::{compressible_pairs, PairSet};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::search;

/// Longest word searched for one-cluster transformations by default.
pub const DEFAULT_CLUSTER_WORD_LEN: usize = 3;

fn binom2(x: i64) -> i64 {
    x * (x - 1) / 2
}

/// `C(n-m+2, 2) - p + h`: a bound on the shortest word compressing any
/// compressible `m`-subset, given a Frankl-Pin sequence of length `p` over a
/// set of compressible pairs of height `h`.
pub fn theorem1_bound(n: usize, m: usize, p: usize, h: usize) -> i64 {
    assert!(2 <= m && m <= n, "need 2 <= m <= n");
    binom2((n - m + 2) as i64) - p as i64 + h as i64
}

/// Per-size Frankl-Pin lengths `p_m` for `m = 2..=n`.
pub fn franklpin_lengths(pairs: &PairSet, budget: usize) -> Vec<usize> {
    (2..=pairs.n()).map(|m| franklpin_length(pairs, m, budget)).collect()
}

/// Sum of [`theorem1_bound`] over `m = 2..=n`: a bound on the reset length
/// of any synchronizing automaton in which `pairs` are compressible with
/// height at most `pairs.height()`.
pub fn theorem1_sum(pairs: &PairSet, budget: usize) -> i64 {
    let n = pairs.n();
    let h = pairs.height();
    franklpin_lengths(pairs, budget)
        .into_iter()
        .zip(2..=n)
        .map(|(p, m)| theorem1_bound(n, m, p, h))
        .sum()
}

/// `2 |w| + n - r + 1`: from a word of rank `r`, a word of smaller rank
/// exists within this length whenever one exists at all.
pub fn pin_rank_step(wlen: usize, n: usize, r: usize) -> usize {
    assert!(r >= 2 && r <= n, "need 2 <= r <= n");
    2 * wlen + n - r + 1
}

/// `L_1` of the chain `L_n = 0`, `L_(r-1) = pin_rank_step(L_r, n, r)`.
pub fn pin_chain(n: usize) -> u128 {
    let mut len: u128 = 0;
    for r in (2..=n).rev() {
        len = len.saturating_mul(2).saturating_add((n - r + 1) as u128);
    }
    len
}

/// `s(l+m-2)(m-1) + (n+1)(m-1) + s l - sum_k D*(m,k)`.
pub fn theorem2_bound(n: usize, s: usize, l: usize, m: usize, table: &DStarTable) -> Result<i64> {
    if m < 2 || s < 1 || table.m != m {
        return Err(Error::InvalidParameter(format!(
            "theorem 2 needs m >= 2, s >= 1 and a D* table for m (m={m}, s={s}, table m={})",
            table.m
        )));
    }
    let (n, s, l, m) = (n as i64, s as i64, l as i64, m as i64);
    Ok(s * (l + m - 2) * (m - 1) + (n + 1) * (m - 1) + s * l - table.sum() as i64)
}

/// Ceiling of `2nm - 4m ln((m+3)/2) + 2m - n + 1`.
pub fn corollary3_bound(n: usize, m: usize) -> i64 {
    assert!(m >= 2, "need m >= 2");
    let (nf, mf) = (n as f64, m as f64);
    let v = 2.0 * nf * mf - 4.0 * mf * ((mf + 3.0) / 2.0).ln() + 2.0 * mf - nf + 1.0;
    v.ceil() as i64
}

pub fn is_prime(m: usize) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

/// `n - m + 1 + 2l + (m-2)(n+l)`, for a prime cycle length `m`.
pub fn steinberg_eq1_bound(n: usize, l: usize, m: usize) -> Result<i64> {
    if !is_prime(m) {
        return Err(Error::InvalidParameter(format!("cycle length {m} is not prime")));
    }
    let (n, l, m) = (n as i64, l as i64, m as i64);
    Ok(n - m + 1 + 2 * l + (m - 2) * (n + l))
}

/// The smallest one-cluster bound over words of length `1..=max_len`:
/// [`theorem2_bound`] for cycles of length `2..=20`, and `s l` when the cycle
/// is a fixed point
/// (then `w^l` already resets). Returns the value and the word length, level
/// and cycle length that attain it.
pub fn one_cluster_bound(a: &Automaton, max_len: usize) -> Option<(i64, BTreeMap<String, i64>)> {
    let mut best: Option<(i64, BTreeMap<String, i64>)> = None;
    for (w, d) in one_cluster_words(a, max_len) {
        let s = w.len();
        let value = if d.m == 1 {
            (s * d.level) as i64
        } else {
            match dstar_table(d.m) {
                Ok(t) => theorem2_bound(a.n(), s, d.level, d.m, &t).unwrap(),
                Err(_) => continue,
            }
        };
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            let inputs = BTreeMap::from([
                ("n".to_string(), a.n() as i64),
                ("s".to_string(), s as i64),
                ("l".to_string(), d.level as i64),
                ("m".to_string(), d.m as i64),
            ]);
            best = Some((value, inputs));
        }
    }
    best
}

/// One applicable bound with its inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: i64,
    pub inputs: BTreeMap<String, i64>,
}

/// Every reset-length bound that applies to one automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub automaton: String,
    pub n: usize,
    pub synchronizing: bool,
    pub reset_length: Option<usize>,
    pub bounds: Vec<BoundEntry>,
}

impl BoundReport {
    /// The smallest bound, if any applies.
    pub fn best(&self) -> Option<i64> {
        self.bounds.iter().map(|b| b.value).min()
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.bounds.iter().find(|b| b.name == name).map(|b| b.value)
    }
}

fn entry(name: &str, value: i64, inputs: &[(&str, i64)]) -> BoundEntry {
    BoundEntry {
        name: name.to_string(),
        value,
        inputs: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
    }
}

/// All bounds for a synchronizing automaton; empty for the others.
pub fn bound_report(a: &Automaton) -> BoundReport {
    let n = a.n();
    let synchronizing = search::is_synchronizing(a);
    let mut bounds = Vec::new();
    if synchronizing && n >= 2 {
        let pairs = compressible_pairs(a);
        let h = pairs.height();
        let ps = franklpin_lengths(&pairs, DEFAULT_BUDGET);
        let mut inputs = vec![("n".to_string(), n as i64), ("h".to_string(), h as i64)];
        for (m, p) in (2..=n).zip(&ps) {
            inputs.push((format!("p_{m}"), *p as i64));
        }
        bounds.push(BoundEntry {
            name: "theorem1".into(),
            value: theorem1_sum(&pairs, DEFAULT_BUDGET),
            inputs: inputs.into_iter().collect(),
        });
        let chain = pin_chain(n).min(i64::MAX as u128) as i64;
        bounds.push(entry("pin_chain", chain, &[("n", n as i64)]));
        if let Some(w2) = search::rank_lengths(a)[2] {
            let v = pin_rank_step(w2, n, 2) as i64;
            bounds.push(entry("pin_rank2", v, &[("n", n as i64), ("wlen", w2 as i64)]));
        }
        if let Some((v, inputs)) = one_cluster_bound(a, DEFAULT_CLUSTER_WORD_LEN) {
            bounds.push(BoundEntry { name: "theorem2".into(), value: v, inputs });
        }
        let letters: Vec<OneClusterData> = (0..a.k()).filter_map(|x| one_cluster_data(a, x)).collect();
        if let Some(d) = letters.iter().filter(|d| d.m >= 2).min_by_key(|d| corollary3_bound(n, d.m)) {
            bounds.push(entry(
                "corollary3",
                corollary3_bound(n, d.m),
                &[("n", n as i64), ("m", d.m as i64)],
            ));
        }
        if let Some((v, d)) = letters
            .iter()
            .filter_map(|d| steinberg_eq1_bound(n, d.level, d.m).ok().map(|v| (v, d)))
            .min_by_key(|(v, _)| *v)
        {
            bounds.push(entry(
                "steinberg_eq1",
                v,
                &[("n", n as i64), ("l", d.level as i64), ("m", d.m as i64)],
            ));
        }
    }
    BoundReport {
        automaton: a.to_line(),
        n,
        synchronizing,
        reset_length: if synchronizing { search::reset_length(a) } else { None },
        bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture, Fixture};
    use proptest::prelude::*;

    #[test]
    fn theorem1_arithmetic() {
        assert_eq!(theorem1_bound(5, 3, 0, 0), 6);
        assert_eq!(theorem1_bound(5, 3, 4, 2), 4);
        for n in 2..=12 {
            let sum: i64 = (2..=n).map(|m| theorem1_bound(n, m, 0, 0)).sum();
            assert_eq!(sum, ((n * n * n - n) / 6) as i64);
        }
    }

    #[test]
    fn pin_arithmetic() {
        assert_eq!(pin_rank_step(0, 6, 6), 1);
        assert_eq!(pin_rank_step(10, 10, 3), 28);
        assert_eq!(pin_chain(2), 1);
        assert_eq!(pin_chain(5), 26);
    }

    #[test]
    fn theorem2_values() {
        let t4 = dstar_table(4).unwrap();
        assert_eq!(t4.sum(), 8);
        assert_eq!(theorem2_bound(6, 1, 2, 4, &t4).unwrap(), 27);
        // prime m, s = 1: direct evaluation gives (m-1)(n+l) + l
        for m in [3usize, 5, 7] {
            let t = dstar_table(m).unwrap();
            for n in m..m + 4 {
                for l in 0..4 {
                    let v = theorem2_bound(n, 1, l, m, &t).unwrap();
                    assert_eq!(v, ((m - 1) * (n + l) + l) as i64);
                    assert_eq!(v, steinberg_eq1_bound(n, l, m).unwrap() + (m - 1) as i64);
                }
            }
        }
        assert!(theorem2_bound(6, 1, 0, 1, &t4).is_err());
    }

    #[test]
    fn corollary3_and_steinberg() {
        assert_eq!(corollary3_bound(10, 2), 28);
        assert_eq!(corollary3_bound(2, 2), 4);
        assert_eq!(steinberg_eq1_bound(5, 0, 5).unwrap(), 16);
        assert_eq!(steinberg_eq1_bound(6, 1, 5).unwrap(), 25);
        assert!(steinberg_eq1_bound(6, 1, 4).is_err());
        assert!(is_prime(2) && is_prime(11) && !is_prime(1) && !is_prime(9));
    }

    #[test]
    fn report_for_cerny() {
        let c5 = fixture(Fixture::Cerny, Some(5)).unwrap();
        let r = bound_report(&c5);
        assert_eq!(r.reset_length, Some(16));
        for b in &r.bounds {
            assert!(b.value >= 16, "{} = {}", b.name, b.value);
        }
        assert_eq!(r.get("steinberg_eq1"), Some(16));
        let id = Automaton::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(bound_report(&id).bounds.is_empty());
    }

    fn arb_automaton(max_n: usize, max_k: usize) -> impl Strategy<Value = Automaton> {
        (2..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
            proptest::collection::vec(0..n as u8, n * k)
                .prop_map(move |t| Automaton::from_table(n, k, t))
        })
    }

    proptest! {
        #[test]
        fn bounds_dominate_reset_length(a in arb_automaton(7, 3)) {
            let r = bound_report(&a);
            if let Some(len) = r.reset_length {
                for b in &r.bounds {
                    prop_assert!(b.value >= len as i64, "{} = {} < {}", b.name, b.value, len);
                }
            }
        }

        #[test]
        fn theorem1_per_subset(a in arb_automaton(6, 2)) {
            let pairs = compressible_pairs(&a);
            if pairs.is_empty() {
                return Ok(());
            }
            let n = a.n();
            let h = pairs.height();
            for m in 2..=n {
                let bound = theorem1_bound(n, m, franklpin_length(&pairs, m, DEFAULT_BUDGET), h);
                for bits in 0u64..1 << n {
                    if bits.count_ones() as usize != m {
                        continue;
                    }
                    let s = crate::StateSet::from_bits(bits);
                    if let Some((d, _)) = search::compress_step(&a, s) {
                        prop_assert!(d as i64 <= bound);
                    }
                }
            }
        }
    }
}
