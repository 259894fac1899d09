//! Sweeps far beyond a workstation, kept as disabled definitions with their
//! published outcomes and rough costs.

use serde::Serialize;

use super::check::Checker;

#[derive(Clone, Debug, Serialize)]
pub struct GridCampaign {
    pub name: &'static str,
    pub checker: Checker,
    pub n: usize,
    pub k: usize,
    pub filters: &'static str,
    pub expected: &'static str,
    pub cost: &'static str,
    /// Runnable on request from the command line; the others only document.
    pub runnable: bool,
}

pub const GRID_CAMPAIGNS: &[GridCampaign] = &[
    GridCampaign {
        name: "grid-cerny-binary-12",
        checker: Checker::Cerny,
        n: 12,
        k: 2,
        filters: "sync,sc",
        expected: "no violations; reset lengths >= 94: 94:3, 95-98:0, 99:3, 100:21, 101:9, 102:2, 103-109:0, 110:2, 111:1, 112:1, 113-120:0, 121:1",
        cost: "about 1e15 automata, 100 CPU-years",
        runnable: false,
    },
    GridCampaign {
        name: "grid-cerny-ternary-8",
        checker: Checker::Cerny,
        n: 8,
        k: 3,
        filters: "sync",
        expected: "no violations",
        cost: "about 2.1e10 automata, 1.25 CPU-years",
        runnable: false,
    },
    GridCampaign {
        name: "grid-gaps-binary-9",
        checker: Checker::Cerny,
        n: 9,
        k: 2,
        filters: "sync,sc",
        expected: "two gaps below 64",
        cost: "CPU-weeks",
        runnable: false,
    },
    GridCampaign {
        name: "grid-gaps-binary-10",
        checker: Checker::Cerny,
        n: 10,
        k: 2,
        filters: "sync,sc",
        expected: "two gaps below 81",
        cost: "CPU-months",
        runnable: false,
    },
    GridCampaign {
        name: "grid-gaps-binary-11",
        checker: Checker::Cerny,
        n: 11,
        k: 2,
        filters: "sync,sc",
        expected: "three gaps below 100",
        cost: "CPU-years",
        runnable: false,
    },
    GridCampaign {
        name: "grid-gaps-binary-12",
        checker: Checker::Cerny,
        n: 12,
        k: 2,
        filters: "sync,sc",
        expected: "three gaps below 121",
        cost: "100 CPU-years",
        runnable: false,
    },
    GridCampaign {
        name: "grid-problem1-binary-7",
        checker: Checker::Problem1,
        n: 7,
        k: 2,
        filters: "irreducible",
        expected: "greedy_extend max 48 while greedy_compress stays at most 43 on that automaton",
        cost: "several CPU-hours",
        runnable: true,
    },
];

pub fn grid_campaign(name: &str) -> Option<&'static GridCampaign> {
    GRID_CAMPAIGNS.iter().find(|g| g.name == name)
}
