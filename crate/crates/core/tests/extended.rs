//! Long sweeps, run with `cargo test --release -- --ignored`.

use synchrolab::verify::{campaign_gaps, CampaignSpec, Checker};
use synchrolab::{canonical_form, fixture, Fixture};

#[test]
#[ignore = "ternary n = 5: about 4e7 automata"]
fn ternary_five_gaps() {
    let binary = campaign_gaps(5, 2).unwrap();
    let ternary = campaign_gaps(5, 3).unwrap();
    println!("binary 5 gaps {binary:?}, ternary 5 gaps {ternary:?}");
    // both spectra are gap-free at n = 5
    assert_eq!(binary.last(), ternary.last());
}

#[test]
#[ignore = "ternary n = 5 irreducibly synchronizing sweep"]
fn ternary_five_greedy_worst_case() {
    let r = CampaignSpec::new(Checker::Problem1, 5, 3).run().unwrap();
    let g1 = canonical_form(&fixture(Fixture::G1, None).unwrap(), true).to_line();
    assert!(r.tight.iter().any(|t| t.line == g1), "{:?}", r.tight);
}

#[test]
#[ignore = "binary n = 7 irreducibly synchronizing sweep, several hours"]
fn binary_seven_extend_versus_compress() {
    let r = CampaignSpec::new(Checker::Problem1, 7, 2).run().unwrap();
    assert_eq!(r.max("greedy_extend"), Some(48));
    println!("greedy_compress max {:?}", r.max("greedy_compress"));
}
