//! Campaign definitions: a checker applied to every automaton of a
//! generation plan.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::genx::{Filters, GenerationPlan};

use super::check::Checker;
use super::result::{CampaignResult, ClassDesc};

/// A named sweep: one checker over one generated class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub name: String,
    pub checker: Checker,
    pub plan: GenerationPlan,
}

/// The class each checker is run over unless overridden.
pub fn default_filters(checker: Checker) -> Filters {
    let f = |s: &str| Filters::parse(s).expect("static filter list");
    match checker {
        Checker::Cerny | Checker::Conjecture5 => Filters::default(),
        Checker::Conjecture1 | Checker::Conjecture2 | Checker::Conjecture6 => f("sync"),
        Checker::Conjecture3 | Checker::Conjecture4 => f("sync,sc"),
        Checker::Problem1 => f("irreducible"),
    }
}

impl CampaignSpec {
    pub fn new(checker: Checker, n: usize, k: usize) -> Self {
        let plan = GenerationPlan::new(n, k).with_filters(default_filters(checker));
        CampaignSpec { name: checker.name().to_string(), checker, plan }
    }

    /// The reset-length spectrum of strongly connected synchronizing
    /// automata, from which gaps are read.
    pub fn gaps(n: usize, k: usize) -> Self {
        let mut c = CampaignSpec::new(Checker::Cerny, n, k);
        c.name = "gaps".into();
        c.plan.filters = Filters::parse("sync,sc").expect("static filter list");
        c
    }

    /// Looks up a campaign by name: a checker name or `gaps`.
    pub fn named(name: &str, n: usize, k: usize) -> Result<Self> {
        if name == "gaps" {
            return Ok(CampaignSpec::gaps(n, k));
        }
        let checker = Checker::from_name(name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown campaign `{name}`")))?;
        Ok(CampaignSpec::new(checker, n, k))
    }

    pub fn with_plan(mut self, f: impl FnOnce(GenerationPlan) -> GenerationPlan) -> Self {
        self.plan = f(self.plan);
        self
    }

    /// Stable identifier of everything that influences the results. The
    /// chunk size is included because checkpoints count chunks.
    pub fn id(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        let digest = Sha256::digest(json.as_bytes());
        let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        format!("{}-n{}-k{}-{hex}", self.name, self.plan.n, self.plan.k)
    }

    pub fn class(&self) -> ClassDesc {
        ClassDesc {
            n: self.plan.n,
            k: self.plan.k,
            filters: self.plan.filters.to_string(),
            threshold: self.plan.threshold,
            dedupe_letters: self.plan.dedupe_letters,
        }
    }

    pub fn empty_result(&self) -> CampaignResult {
        CampaignResult::new(&self.name, self.checker.name(), self.class())
    }

    /// Checks one chunk; with `jsonl`, also renders one record per automaton.
    pub fn run_chunk(&self, seeds: &[Automaton], chunk: usize, jsonl: bool) -> (CampaignResult, String) {
        let mut result = self.empty_result();
        result.chunks.insert(chunk);
        let mut out = String::new();
        for a in self.plan.expand_chunk(seeds, chunk) {
            let o = self.checker.check(&a);
            result.record(&a, &o);
            if jsonl {
                let rec = serde_json::json!({ "a": a.to_line(), "props": o.to_json() });
                out.push_str(&rec.to_string());
                out.push('\n');
            }
        }
        (result, out)
    }

    /// Runs the whole campaign in memory.
    pub fn run(&self) -> Result<CampaignResult> {
        let seeds = self.plan.seeds()?;
        let parts: Vec<CampaignResult> = {
            use rayon::prelude::*;
            (0..self.plan.chunk_count(seeds.len()))
                .into_par_iter()
                .map(|i| self.run_chunk(&seeds, i, false).0)
                .collect()
        };
        let mut result = self.empty_result();
        for p in &parts {
            result.merge(p);
        }
        Ok(result)
    }
}

/// Runs the Černý checker over the class.
pub fn campaign_cerny(n: usize, k: usize, filters: Filters) -> Result<CampaignResult> {
    CampaignSpec::new(Checker::Cerny, n, k).with_plan(|p| p.with_filters(filters)).run()
}

/// Gaps in the reset lengths of strongly connected synchronizing automata.
pub fn campaign_gaps(n: usize, k: usize) -> Result<Vec<(u64, u64)>> {
    Ok(CampaignSpec::gaps(n, k).run()?.gaps())
}

/// Greedy worst cases over irreducibly synchronizing automata.
pub fn campaign_problem1(n: usize, k: usize) -> Result<CampaignResult> {
    CampaignSpec::new(Checker::Problem1, n, k).run()
}
