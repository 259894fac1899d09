//! Verification campaigns: checkers for the Černý conjecture and its
//! relatives, run over generated classes with mergeable aggregates.

mod campaign;
mod check;
mod driver;
mod grid;
mod result;

pub use campaign::{campaign_cerny, campaign_gaps, campaign_problem1, default_filters, CampaignSpec};
pub use check::{
    check_cerny, check_conjecture1, check_conjecture2, check_conjecture3, check_conjecture4,
    check_conjecture5, check_conjecture6, check_problem1, subset_sync_bound, Checker, Outcome,
};
pub use driver::{run_campaign, DriverConfig, RunOutcome};
pub use grid::{grid_campaign, GridCampaign, GRID_CAMPAIGNS};
pub use result::{CampaignResult, ClassDesc, Extreme, Tight, Violation, WITNESS_CAP};
