//! Campaign aggregates and their merge.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automaton::Automaton;

use super::check::Outcome;

/// Witness lines kept per metric maximum, per tight list and for violations.
pub const WITNESS_CAP: usize = 32;

/// A failed statement with the automaton that replays it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub checker: String,
    pub line: String,
    pub detail: String,
}

/// An automaton meeting a bound exactly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tight {
    pub line: String,
    pub detail: String,
}

/// Largest value of a metric and the smallest lines attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extreme {
    pub value: u64,
    pub witnesses: BTreeSet<String>,
}

/// The class a campaign ran over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDesc {
    pub n: usize,
    pub k: usize,
    pub filters: String,
    pub threshold: Option<usize>,
    pub dedupe_letters: bool,
}

/// Aggregated outcome of a campaign or of a part of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub campaign: String,
    pub checker: String,
    pub class: ClassDesc,
    pub examined: u64,
    pub in_hypothesis: u64,
    /// Metric name, then value, then count.
    pub spectra: BTreeMap<String, BTreeMap<u64, u64>>,
    pub maxima: BTreeMap<String, Extreme>,
    pub violation_count: u64,
    pub violations: BTreeSet<Violation>,
    pub tight_count: u64,
    pub tight: BTreeSet<Tight>,
    /// Chunk indices folded into this result.
    pub chunks: BTreeSet<usize>,
}

fn cap<T: Ord>(set: &mut BTreeSet<T>) {
    while set.len() > WITNESS_CAP {
        set.pop_last();
    }
}

impl CampaignResult {
    pub fn new(campaign: &str, checker: &str, class: ClassDesc) -> Self {
        CampaignResult {
            campaign: campaign.to_string(),
            checker: checker.to_string(),
            class,
            examined: 0,
            in_hypothesis: 0,
            spectra: BTreeMap::new(),
            maxima: BTreeMap::new(),
            violation_count: 0,
            violations: BTreeSet::new(),
            tight_count: 0,
            tight: BTreeSet::new(),
            chunks: BTreeSet::new(),
        }
    }

    /// Folds one automaton's outcome in.
    pub fn record(&mut self, a: &Automaton, o: &Outcome) {
        self.examined += 1;
        if !o.in_hypothesis {
            return;
        }
        self.in_hypothesis += 1;
        let mut line: Option<String> = None;
        let mut line_of = || line.get_or_insert_with(|| a.to_line()).clone();
        for &(name, v) in &o.metrics {
            *self.spectra.entry(name.to_string()).or_default().entry(v).or_default() += 1;
            match self.maxima.get_mut(name) {
                Some(e) if e.value > v => {}
                Some(e) if e.value == v => {
                    let l = line_of();
                    if e.witnesses.len() < WITNESS_CAP || e.witnesses.last().is_some_and(|w| &l < w) {
                        e.witnesses.insert(l);
                        cap(&mut e.witnesses);
                    }
                }
                _ => {
                    let e = Extreme { value: v, witnesses: BTreeSet::from([line_of()]) };
                    self.maxima.insert(name.to_string(), e);
                }
            }
        }
        if let Some(detail) = &o.violation {
            self.violation_count += 1;
            self.violations.insert(Violation {
                checker: self.checker.clone(),
                line: line_of(),
                detail: detail.clone(),
            });
            cap(&mut self.violations);
        }
        for detail in &o.tight {
            self.tight_count += 1;
            self.tight.insert(Tight { line: line_of(), detail: detail.clone() });
            cap(&mut self.tight);
        }
    }

    /// Commutative, associative combination of two partial results.
    pub fn merge(&mut self, other: &CampaignResult) {
        self.examined += other.examined;
        self.in_hypothesis += other.in_hypothesis;
        for (name, spec) in &other.spectra {
            let mine = self.spectra.entry(name.clone()).or_default();
            for (&v, &c) in spec {
                *mine.entry(v).or_default() += c;
            }
        }
        for (name, e) in &other.maxima {
            match self.maxima.get_mut(name) {
                Some(m) if m.value > e.value => {}
                Some(m) if m.value == e.value => {
                    m.witnesses.extend(e.witnesses.iter().cloned());
                    cap(&mut m.witnesses);
                }
                _ => {
                    self.maxima.insert(name.clone(), e.clone());
                }
            }
        }
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations.iter().cloned());
        cap(&mut self.violations);
        self.tight_count += other.tight_count;
        self.tight.extend(other.tight.iter().cloned());
        cap(&mut self.tight);
        self.chunks.extend(other.chunks.iter().copied());
    }

    pub fn max(&self, metric: &str) -> Option<u64> {
        self.maxima.get(metric).map(|e| e.value)
    }

    /// Total count recorded in a metric's spectrum.
    pub fn total(&self, metric: &str) -> u64 {
        self.spectra.get(metric).map_or(0, |s| s.values().sum())
    }

    /// Maximal runs of reset lengths with no automaton, strictly between two
    /// attained lengths and at most `(n-1)^2`.
    pub fn gaps(&self) -> Vec<(u64, u64)> {
        let Some(spec) = self.spectra.get("reset_length") else {
            return Vec::new();
        };
        let limit = ((self.class.n.max(1) - 1) * (self.class.n.max(1) - 1)) as u64;
        let attained: Vec<u64> = spec.iter().filter(|(_, &c)| c > 0).map(|(&v, _)| v).collect();
        attained
            .windows(2)
            .filter(|w| w[1] > w[0] + 1 && w[0] < limit)
            .map(|w| (w[0] + 1, (w[1] - 1).min(limit)))
            .collect()
    }

    /// Final report: the aggregate plus derived gaps, pretty printed with a
    /// fixed key order.
    pub fn report_json(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            #[serde(flatten)]
            result: &'a CampaignResult,
            gaps: Vec<(u64, u64)>,
        }
        let mut s = serde_json::to_string_pretty(&Report { result: self, gaps: self.gaps() })
            .expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class() -> ClassDesc {
        ClassDesc { n: 4, k: 2, filters: "all".into(), threshold: None, dedupe_letters: true }
    }

    fn outcome(values: &[u64], violation: bool, tight: bool) -> Outcome {
        Outcome {
            in_hypothesis: true,
            metrics: values.iter().map(|&v| ("reset_length", v)).collect(),
            violation: violation.then(|| "bad".to_string()),
            tight: if tight { vec!["tight".into()] } else { vec![] },
        }
    }

    fn automaton(code: u32) -> Automaton {
        let table: Vec<usize> = (0..8).map(|i| ((code >> (2 * i)) & 3) as usize).collect();
        Automaton::new(4, vec![table[..4].to_vec(), table[4..].to_vec()]).unwrap()
    }

    fn part(items: &[(u32, u64, bool, bool)], chunk: usize) -> CampaignResult {
        let mut r = CampaignResult::new("t", "cerny", class());
        for &(code, v, bad, tight) in items {
            r.record(&automaton(code), &outcome(&[v], bad, tight));
        }
        r.chunks.insert(chunk);
        r
    }

    #[test]
    fn gaps_between_attained() {
        let mut r = CampaignResult::new("t", "cerny", class());
        for v in [1u64, 2, 3, 6, 9] {
            r.spectra.entry("reset_length".into()).or_default().insert(v, 1);
        }
        assert_eq!(r.gaps(), vec![(4, 5), (7, 8)]);
    }

    proptest! {
        #[test]
        fn merge_is_order_independent(
            items in proptest::collection::vec((0u32..65536, 0u64..12, proptest::bool::weighted(0.1), proptest::bool::weighted(0.2)), 0..120),
            cuts in proptest::collection::vec(0usize..120, 0..5),
            seed in 0u64..1000,
        ) {
            let mut cuts: Vec<usize> = cuts.into_iter().map(|c| c.min(items.len())).collect();
            cuts.push(0);
            cuts.push(items.len());
            cuts.sort();
            let parts: Vec<CampaignResult> = cuts.windows(2).enumerate().map(|(i, w)| part(&items[w[0]..w[1]], i)).collect();
            let mut forward = CampaignResult::new("t", "cerny", class());
            for p in &parts {
                forward.merge(p);
            }
            let mut order: Vec<usize> = (0..parts.len()).collect();
            let mut s = seed;
            for i in (1..order.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            // a balanced tree of merges in the shuffled order
            let mut layer: Vec<CampaignResult> = order.iter().map(|&i| parts[i].clone()).collect();
            while layer.len() > 1 {
                let mut next = Vec::new();
                for pair in layer.chunks(2) {
                    let mut m = pair[0].clone();
                    if let Some(b) = pair.get(1) {
                        m.merge(b);
                    }
                    next.push(m);
                }
                layer = next;
            }
            let shuffled = layer.pop().unwrap_or_else(|| CampaignResult::new("t", "cerny", class()));
            let mut whole = part(&items, 0);
            whole.chunks = forward.chunks.clone();
            prop_assert_eq!(forward.report_json(), shuffled.report_json());
            prop_assert_eq!(forward.report_json(), whole.report_json());
        }
    }
}
