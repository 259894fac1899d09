//! Per-automaton checkers. Each returns an [`Outcome`]: whether the automaton
//! falls under the statement's hypothesis, the measured values, a violation
//! description if the statement fails, and tight cases.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::automaton::Automaton;
use crate::bounds::{is_prime, one_cluster_data};
use crate::error::{Error, Result};
use crate::fixtures::{fixture, Fixture};
use crate::search::{
    avoid_lengths, greedy_compress_worst, greedy_extend_worst, is_synchronizing,
    one_cluster_extension_max, reset_length, shortest_word_of_rank, sync_profile, ExtendStart,
};
use crate::structure::{is_aperiodic, is_bidirectional_path, is_irreducibly_synchronizing, is_kari_like, is_strongly_connected};

/// The statements a campaign can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Checker {
    Cerny,
    Conjecture1,
    Conjecture2,
    Conjecture3,
    Conjecture4,
    Conjecture5,
    Conjecture6,
    Problem1,
}

impl Checker {
    pub const ALL: [Checker; 8] = [
        Checker::Cerny,
        Checker::Conjecture1,
        Checker::Conjecture2,
        Checker::Conjecture3,
        Checker::Conjecture4,
        Checker::Conjecture5,
        Checker::Conjecture6,
        Checker::Problem1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Checker::Cerny => "cerny",
            Checker::Conjecture1 => "conjecture1",
            Checker::Conjecture2 => "conjecture2",
            Checker::Conjecture3 => "conjecture3",
            Checker::Conjecture4 => "conjecture4",
            Checker::Conjecture5 => "conjecture5",
            Checker::Conjecture6 => "conjecture6",
            Checker::Problem1 => "problem1",
        }
    }

    pub fn from_name(s: &str) -> Option<Checker> {
        Checker::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn check(self, a: &Automaton) -> Outcome {
        match self {
            Checker::Cerny => check_cerny(a),
            Checker::Conjecture1 => check_conjecture1(a),
            Checker::Conjecture2 => check_conjecture2(a),
            Checker::Conjecture3 => check_conjecture3(a),
            Checker::Conjecture4 => check_conjecture4(a),
            Checker::Conjecture5 => check_conjecture5(a),
            Checker::Conjecture6 => check_conjecture6(a),
            Checker::Problem1 => check_problem1(a),
        }
    }
}

impl std::fmt::Display for Checker {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Checker {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Checker::from_name(s).ok_or_else(|| Error::InvalidParameter(format!("unknown checker `{s}`")))
    }
}

/// Result of one checker on one automaton.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub in_hypothesis: bool,
    /// Named measurements, in a fixed order per checker.
    pub metrics: Vec<(&'static str, u64)>,
    pub violation: Option<String>,
    /// Descriptions of cases that meet the bound exactly.
    pub tight: Vec<String>,
}

impl Outcome {
    fn skip() -> Self {
        Outcome::default()
    }

    fn applies() -> Self {
        Outcome { in_hypothesis: true, ..Outcome::default() }
    }

    pub fn metric(&self, name: &str) -> Option<u64> {
        self.metrics.iter().find(|(m, _)| *m == name).map(|&(_, v)| v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("in_hypothesis".into(), self.in_hypothesis.into());
        for &(name, v) in &self.metrics {
            map.insert(name.into(), v.into());
        }
        if let Some(v) = &self.violation {
            map.insert("violation".into(), v.clone().into());
        }
        if !self.tight.is_empty() {
            map.insert("tight".into(), self.tight.clone().into());
        }
        serde_json::Value::Object(map)
    }
}

/// Reset length at most `(n-1)^2`.
pub fn check_cerny(a: &Automaton) -> Outcome {
    let Some(r) = reset_length(a) else {
        return Outcome::skip();
    };
    let n = a.n();
    let bound = (n - 1) * (n - 1);
    let mut o = Outcome::applies();
    o.metrics.push(("reset_length", r as u64));
    if r > bound {
        o.violation = Some(format!("reset length {r} > {bound}"));
    } else if r == bound && n >= 2 {
        o.tight.push(format!("reset length {r}"));
    }
    o
}

/// Every one-cluster letter with a cycle of composite length extends each
/// proper subset of its cycle by a word `w a^l` with `|w| <= n`.
pub fn check_conjecture1(a: &Automaton) -> Outcome {
    if !is_synchronizing(a) {
        return Outcome::skip();
    }
    let n = a.n();
    let mut o = Outcome::skip();
    let mut worst = 0;
    for x in 0..a.k() {
        let Some(d) = one_cluster_data(a, x) else { continue };
        if d.m < 4 || is_prime(d.m) {
            continue;
        }
        o.in_hypothesis = true;
        match one_cluster_extension_max(a, x) {
            Ok(Some(w)) => {
                worst = worst.max(w);
                if w > n && o.violation.is_none() {
                    o.violation = Some(format!("letter {x}: a subset needs |w| = {w} > {n}"));
                }
                if w == n {
                    o.tight.push(format!("letter {x}, cycle {}, |w| = {n}", d.m));
                }
            }
            Ok(None) => {
                if o.violation.is_none() {
                    o.violation = Some(format!("letter {x}: a subset of the cycle has no extending word"));
                }
            }
            Err(e) => o.violation = Some(format!("letter {x}: {e}")),
        }
    }
    if o.in_hypothesis {
        o.metrics.push(("extension_length", worst as u64));
    }
    o
}

/// Aperiodic synchronizing automata reset within `n + ceil(n/2) - 2`.
pub fn check_conjecture2(a: &Automaton) -> Outcome {
    let n = a.n();
    if n < 2 {
        return Outcome::skip();
    }
    let Some(r) = reset_length(a) else {
        return Outcome::skip();
    };
    if !matches!(is_aperiodic(a), Ok(true)) {
        return Outcome::skip();
    }
    let bound = n + n.div_ceil(2) - 2;
    let mut o = Outcome::applies();
    o.metrics.push(("reset_length", r as u64));
    if r > bound {
        o.violation = Some(format!("reset length {r} > {bound}"));
    } else if r == bound {
        o.tight.push(format!("reset length {r}"));
    }
    o
}

/// Strongly connected aperiodic synchronizing automata reset within `n - 1`,
/// with equality only for bidirectional paths.
pub fn check_conjecture3(a: &Automaton) -> Outcome {
    let n = a.n();
    if !is_strongly_connected(a) {
        return Outcome::skip();
    }
    let Some(r) = reset_length(a) else {
        return Outcome::skip();
    };
    if !matches!(is_aperiodic(a), Ok(true)) {
        return Outcome::skip();
    }
    let mut o = Outcome::applies();
    o.metrics.push(("reset_length", r as u64));
    if r + 1 > n {
        o.violation = Some(format!("reset length {r} > {}", n - 1));
    } else if r + 1 == n {
        if is_bidirectional_path(a) {
            o.tight.push(format!("bidirectional path, reset length {r}"));
        } else {
            o.violation = Some(format!("reset length {r} = n - 1 but not a bidirectional path"));
        }
    }
    o
}

/// In strongly connected synchronizing automata every state is avoided by a
/// word of length at most `2n - 2`.
pub fn check_conjecture4(a: &Automaton) -> Outcome {
    let n = a.n();
    if n < 2 || !is_strongly_connected(a) || !is_synchronizing(a) {
        return Outcome::skip();
    }
    let bound = 2 * n - 2;
    let mut o = Outcome::applies();
    let lengths = avoid_lengths(a);
    let mut worst = 0;
    for (q, l) in lengths.iter().enumerate() {
        match l {
            Some(l) => {
                worst = worst.max(*l);
                if *l > bound && o.violation.is_none() {
                    o.violation = Some(format!("state {q} needs {l} > {bound}"));
                }
            }
            None => {
                if o.violation.is_none() {
                    o.violation = Some(format!("state {q} cannot be avoided"));
                }
            }
        }
    }
    o.metrics.push(("avoid_length", worst as u64));
    if worst == bound {
        o.tight.push(format!("avoid length {worst}"));
    }
    o
}

/// A word of rank at most `n - d` exists of length at most `d^2`, except in
/// Kari-like automata for `d = 4` (length 17).
pub fn check_conjecture5(a: &Automaton) -> Outcome {
    let n = a.n();
    let mut o = Outcome::skip();
    let mut exempt = Vec::new();
    for d in 1..n {
        let len = match shortest_word_of_rank(a, n - d) {
            Ok(Some((len, _))) => len,
            Ok(None) => break,
            Err(e) => {
                o.in_hypothesis = true;
                o.violation = Some(format!("d = {d}: {e}"));
                break;
            }
        };
        o.in_hypothesis = true;
        if len > d * d {
            if d == 4 && len == 17 && is_kari_like(a) {
                exempt.push(d);
                o.tight.push(format!("kari-like exemption, d = 4, length {len}"));
            } else if o.violation.is_none() {
                o.violation = Some(format!("d = {d}: shortest word of rank <= {} has length {len} > {}", n - d, d * d));
            }
        } else if len == d * d {
            o.tight.push(format!("d = {d}, length {len}"));
        }
        o.metrics.push((rank_metric(d), len as u64));
    }
    if !exempt.is_empty() {
        o.metrics.push(("kari_exempt", exempt.len() as u64));
    }
    o
}

fn rank_metric(d: usize) -> &'static str {
    const NAMES: [&str; 16] = [
        "rank_d1", "rank_d2", "rank_d3", "rank_d4", "rank_d5", "rank_d6", "rank_d7", "rank_d8",
        "rank_d9", "rank_d10", "rank_d11", "rank_d12", "rank_d13", "rank_d14", "rank_d15", "rank_d16",
    ];
    NAMES.get(d - 1).copied().unwrap_or("rank_dmax")
}

/// Upper bound on the shortest word synchronizing a subset of size `s`.
pub fn subset_sync_bound(n: usize, s: usize) -> i64 {
    assert!(1 <= s && s <= n);
    let (n, s) = (n as i64, s as i64);
    let c1 = (n - s + s - 1) / s;
    let c2 = (n + s - 1) / s;
    (n - 1) * (n - 1) - c1 * (2 * n - s * c2 - 1)
}

/// Every subset `S` of a synchronizing automaton is synchronized by a word
/// no longer than [`subset_sync_bound`] at `|S|`.
pub fn check_conjecture6(a: &Automaton) -> Outcome {
    if !is_synchronizing(a) {
        return Outcome::skip();
    }
    let n = a.n();
    let profile = match sync_profile(a) {
        Ok(p) => p,
        Err(e) => {
            return Outcome { in_hypothesis: true, violation: Some(e.to_string()), ..Outcome::default() }
        }
    };
    let mut o = Outcome::applies();
    let mut slack = i64::MAX;
    let mut tight_sizes = vec![false; n + 1];
    for (s, l) in profile.iter() {
        let size = s.len();
        if size == 0 {
            continue;
        }
        let bound = subset_sync_bound(n, size);
        let l = match l {
            Some(l) => l as i64,
            None => {
                o.violation = Some(format!("subset {s} cannot be synchronized"));
                break;
            }
        };
        slack = slack.min(bound - l);
        if l > bound && o.violation.is_none() {
            o.violation = Some(format!("subset {s}: {l} > {bound}"));
        }
        if l == bound && size >= 2 && !tight_sizes[size] {
            tight_sizes[size] = true;
            o.tight.push(format!("|S| = {size}, S = {s}, L(S) = {l}"));
        }
    }
    o.metrics.push(("reset_length", profile.get(crate::stateset::StateSet::full(n)).unwrap_or(0) as u64));
    o.metrics.push(("min_slack", slack.max(0) as u64));
    o
}

fn cerny_greedy(n: usize) -> Option<usize> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Option<usize>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return *v;
    }
    let v = fixture(Fixture::Cerny, Some(n)).ok().and_then(|c| greedy_compress_worst(&c).ok().flatten());
    cache.lock().unwrap().insert(n, v);
    v
}

/// Worst-case lengths of the greedy compressing and extending algorithms on
/// irreducibly synchronizing automata. Automata beating the Černý automaton
/// of the same size are reported as tight.
pub fn check_problem1(a: &Automaton) -> Outcome {
    if !matches!(is_irreducibly_synchronizing(a), Ok(true)) {
        return Outcome::skip();
    }
    let mut o = Outcome::applies();
    match greedy_compress_worst(a) {
        Ok(Some(g)) => {
            o.metrics.push(("greedy_compress", g as u64));
            if a.n() >= 2 && cerny_greedy(a.n()).is_some_and(|c| g > c) {
                o.tight.push(format!("greedy compress {g} exceeds the Černý automaton"));
            }
        }
        Ok(None) => o.violation = Some("greedy compression stalled".into()),
        Err(e) => o.violation = Some(e.to_string()),
    }
    if is_strongly_connected(a) {
        if let Ok(e) = greedy_extend_worst(a, ExtendStart::Adversarial) {
            o.metrics.push(("greedy_extend", e as u64));
        }
    }
    if let Some(r) = reset_length(a) {
        o.metrics.push(("reset_length", r as u64));
    }
    o
}
