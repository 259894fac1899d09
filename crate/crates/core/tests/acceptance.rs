//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::Instant;

use num_rational::Ratio;
use synchrolab::bounds::{
    bound_report, compressible_pairs, dstar, dstar_table, franklpin_lengths, theorem1_bound,
    DEFAULT_BUDGET,
};
use synchrolab::genx::{run_plan, Filters, GenerationPlan};
use synchrolab::search::{greedy_compress_worst, reset_length, shortest_word_of_rank};
use synchrolab::structure::{is_aperiodic, is_irreducibly_synchronizing, is_strongly_connected};
use synchrolab::verify::{
    check_conjecture5, check_conjecture6, run_campaign, CampaignResult, CampaignSpec, Checker,
    DriverConfig, GRID_CAMPAIGNS,
};
use synchrolab::{canonical_form, fixture, Automaton, Fixture};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fx(f: Fixture, n: Option<usize>) -> Automaton {
    fixture(f, n).expect("fixture")
}

// ---- independent oracles -------------------------------------------------

fn image(a: &Automaton, s: u64, x: usize) -> u64 {
    let row = a.row(x);
    (0..a.n()).filter(|q| s >> q & 1 == 1).fold(0, |t, q| t | 1 << row[q])
}

/// Breadth-first search from `start` to the first set satisfying `goal`.
fn bfs_len(a: &Automaton, start: u64, goal: impl Fn(u64) -> bool) -> Option<usize> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((s, d)) = queue.pop_front() {
        if goal(s) {
            return Some(d);
        }
        for x in 0..a.k() {
            let t = image(a, s, x);
            if seen.insert(t) {
                queue.push_back((t, d + 1));
            }
        }
    }
    None
}

fn oracle_reset(a: &Automaton) -> Option<usize> {
    bfs_len(a, (1u64 << a.n()) - 1, |s| s.count_ones() == 1)
}

/// Rank over the rationals by plain Gaussian elimination.
fn rational_rank(mut rows: Vec<Vec<Ratio<i64>>>) -> usize {
    let (r, c) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut rank = 0;
    for col in 0..c {
        let Some(p) = (rank..r).find(|&i| rows[i][col] != Ratio::from_integer(0)) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col];
        for i in 0..r {
            if i != rank {
                let f = rows[i][col] / pivot;
                for j in 0..c {
                    let v = rows[rank][j];
                    rows[i][j] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `min over k-subsets S of Z_m of m - q_S + rank(circulant of S)`.
fn oracle_dstar(m: usize, k: usize) -> usize {
    let mut best = usize::MAX;
    for code in 0u32..1 << m {
        if code.count_ones() as usize != k {
            continue;
        }
        let s: Vec<bool> = (0..m).map(|i| code >> i & 1 == 1).collect();
        let q = (1..=m).find(|&t| (0..m).all(|i| s[i] == s[(i + t) % m])).unwrap();
        let v: Vec<i64> = s.iter().map(|&b| if b { (m - k) as i64 } else { -(k as i64) }).collect();
        let rows = (0..m)
            .map(|j| (0..m).map(|i| Ratio::from_integer(v[(i + m - j) % m])).collect())
            .collect();
        best = best.min(m - q + rational_rank(rows));
    }
    best
}

fn all_of(n: usize, k: usize) -> Vec<Automaton> {
    run_plan(&GenerationPlan::new(n, k)).expect("generation")
}

fn campaign(checker: Checker, n: usize, k: usize) -> CampaignResult {
    CampaignSpec::new(checker, n, k).run().expect("campaign")
}

fn clean(r: &CampaignResult) -> Result<(), String> {
    ensure(
        r.violation_count == 0,
        format!("{} n={} k={}: {} violations, e.g. {:?}", r.checker, r.class.n, r.class.k, r.violation_count, r.violations.first()),
    )
}

// ---- criteria ------------------------------------------------------------

fn c1_fixtures() -> Verdict {
    for n in 2..=11 {
        let r = reset_length(&fx(Fixture::Cerny, Some(n)));
        ensure(r == Some((n - 1) * (n - 1)), format!("cerny({n}) reset {r:?}"))?;
    }
    let f = fx(Fixture::Fig1, None);
    ensure(reset_length(&f) == Some(95), format!("fig1 reset {:?}", reset_length(&f)))?;
    ensure(is_strongly_connected(&f), "fig1 not strongly connected")?;
    ensure(matches!(is_irreducibly_synchronizing(&f), Ok(true)), "fig1 not irreducible")?;
    for (g, r, w) in [(Fixture::G1, 15, 19), (Fixture::G2, 22, 30), (Fixture::G3, 20, 28), (Fixture::G4, 20, 28)] {
        let a = fx(g, None);
        ensure(reset_length(&a) == Some(r), format!("{g} reset {:?}", reset_length(&a)))?;
        let gw = greedy_compress_worst(&a).map_err(|e| e.to_string())?;
        ensure(gw == Some(w), format!("{g} greedy {gw:?}"))?;
    }
    Ok("cerny 2..11, fig1 = 95, G1-G4 = 15/22/20/20 and 19/30/28/28".into())
}

fn c2_kari() -> Verdict {
    let k = fx(Fixture::Kari, None);
    let len = shortest_word_of_rank(&k, 2).map_err(|e| e.to_string())?.map(|(l, _)| l);
    ensure(len == Some(17), format!("kari rank-2 length {len:?}"))?;
    for f in [Fixture::Kari, Fixture::KariPrime] {
        let o = check_conjecture5(&fx(f, None));
        ensure(o.violation.is_none() && o.metric("kari_exempt") == Some(1), format!("{f}: {o:?}"))?;
    }
    Ok("rank-2 word of length 17 > 16, kari and kari_prime exempt".into())
}

fn c3_aperiodic() -> Verdict {
    let mut note = String::new();
    for n in 2..=12 {
        let a = fx(Fixture::Aperiodic3, Some(n));
        ensure(matches!(is_aperiodic(&a), Ok(true)), format!("aperiodic3({n}) not aperiodic"))?;
        let r = reset_length(&a);
        ensure(r == Some(n + n / 2 - 2), format!("aperiodic3({n}) reset {r:?}"))?;
        let irr = is_irreducibly_synchronizing(&a);
        if n >= 4 {
            ensure(matches!(irr, Ok(true)), format!("aperiodic3({n}) irreducible {irr:?}"))?;
        } else if n == 3 {
            note = format!("n = 3 irreducible: {irr:?}");
        }
    }
    Ok(format!("n = 2..12 aperiodic, reset n + floor(n/2) - 2; {note}"))
}

/// Automata up to renaming of states and letters, by Burnside's lemma over
/// `S_n x S_k` for `k <= 3`. A pair `(sigma, tau)` fixes a table iff each
/// letter on a `tau`-cycle of length `c` is determined by the first one, which
/// must commute with `sigma^c`.
fn oracle_class_count(n: usize, k: usize) -> u64 {
    let maps: Vec<Vec<usize>> = (0..n.pow(n as u32))
        .map(|mut c| (0..n).map(|_| { let t = c % n; c /= n; t }).collect())
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut perms = vec![perm.clone()];
    // lexicographic successors
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
        perms.push(perm.clone());
    }
    let fix = |p: &[usize]| maps.iter().filter(|f| (0..n).all(|q| p[f[q]] == f[p[q]])).count() as u64;
    let power = |p: &[usize], e: usize| -> Vec<usize> {
        (0..n).map(|q| (0..e).fold(q, |x, _| p[x])).collect()
    };
    // letter permutations by cycle type: (number of them, cycle lengths)
    let types: Vec<(u64, Vec<usize>)> = match k {
        1 => vec![(1, vec![1])],
        2 => vec![(1, vec![1, 1]), (1, vec![2])],
        3 => vec![(1, vec![1, 1, 1]), (3, vec![1, 2]), (2, vec![3])],
        _ => panic!("k <= 3"),
    };
    let kfact: u64 = (1..=k as u64).product();
    let total: u64 = perms
        .iter()
        .map(|s| {
            types
                .iter()
                .map(|(mult, cycles)| mult * cycles.iter().map(|&c| fix(&power(s, c))).product::<u64>())
                .sum::<u64>()
        })
        .sum();
    total / (perms.len() as u64 * kfact)
}

/// Class counts, checked against the oracle on the first verified run.
const BINARY5_CLASSES: u64 = 41876;
const BINARY6_CLASSES: u64 = 1540696;
const TERNARY4_CLASSES: u64 = 118949;
const BINARY6_GAPS: [(u64, u64); 1] = [(24, 24)];

fn c4_cerny_sweep() -> Verdict {
    let mut notes = Vec::new();
    for (n, k) in [(2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (4, 3)] {
        let r = campaign(Checker::Cerny, n, k);
        clean(&r)?;
        ensure(r.max("reset_length") == Some(((n - 1) * (n - 1)) as u64), format!("n={n} k={k}: max {:?}", r.max("reset_length")))?;
        let expected = oracle_class_count(n, k);
        ensure(r.examined == expected, format!("n={n} k={k}: {} classes, oracle {expected}", r.examined))?;
    }
    ensure(oracle_class_count(5, 2) == BINARY5_CLASSES, "binary 5 regression count")?;
    ensure(oracle_class_count(4, 3) == TERNARY4_CLASSES, "ternary 4 regression count")?;
    notes.push(format!("binary 5: {BINARY5_CLASSES} classes; ternary 4: {TERNARY4_CLASSES} classes"));
    let r = campaign(Checker::Cerny, 6, 2);
    clean(&r)?;
    ensure(r.max("reset_length") == Some(25), format!("binary 6 max {:?}", r.max("reset_length")))?;
    ensure(r.examined == BINARY6_CLASSES, format!("binary 6 count {}", r.examined))?;
    ensure(oracle_class_count(6, 2) == BINARY6_CLASSES, "binary 6 oracle count")?;
    let gaps = CampaignSpec::gaps(6, 2).run().map_err(|e| e.to_string())?.gaps();
    ensure(gaps.len() == 1, format!("binary 6 gaps {gaps:?}"))?;
    ensure(gaps == BINARY6_GAPS, format!("binary 6 gaps {gaps:?}"))?;
    notes.push(format!("binary 6: {} classes, gap {:?}", r.examined, gaps[0]));
    Ok(notes.join("; "))
}

fn c5_bounds() -> Verdict {
    let mut checked = 0u64;
    for (n, k) in [(2, 2), (3, 2), (4, 2), (5, 2)] {
        for a in all_of(n, k) {
            let pairs = compressible_pairs(&a);
            let ps = franklpin_lengths(&pairs, DEFAULT_BUDGET);
            let h = pairs.height();
            for code in 1u64..1 << n {
                let m = code.count_ones() as usize;
                if m < 2 {
                    continue;
                }
                if let Some(len) = bfs_len(&a, code, |t| (t.count_ones() as usize) < m) {
                    let b = theorem1_bound(n, m, ps[m - 2], h);
                    ensure(len as i64 <= b, format!("{a}: subset {code:b} needs {len} > theorem1 {b}"))?;
                    checked += 1;
                }
            }
            if let Some(r) = oracle_reset(&a) {
                let rep = bound_report(&a);
                for e in &rep.bounds {
                    ensure(e.value >= r as i64, format!("{a}: {} = {} < reset {r}", e.name, e.value))?;
                }
            }
        }
    }
    Ok(format!("{checked} compressible subsets, all bound entries dominate the reset length"))
}

fn c6_dstar() -> Verdict {
    for m in 2..=12 {
        let t = dstar_table(m).map_err(|e| e.to_string())?;
        for k in 1..m {
            let o = oracle_dstar(m, k);
            ensure(t.get(k) == o, format!("D*({m},{k}) = {} vs oracle {o}", t.get(k)))?;
        }
    }
    for m in [2usize, 3, 5, 7, 11] {
        for k in 1..m {
            ensure(dstar(m, k).ok() == Some(m - 1), format!("D*({m},{k}) prime"))?;
        }
    }
    let four: Vec<usize> = (1..4).map(|k| dstar(4, k).unwrap()).collect();
    ensure(four == [3, 2, 3], format!("D*(4,.) = {four:?}"))?;
    Ok("cyclotomic = rational rank for m <= 12".into())
}

fn c7_pruning() -> Verdict {
    let t = 16;
    let plan = GenerationPlan::new(5, 2).with_filters(Filters::parse("sync").unwrap());
    let long = |p: &GenerationPlan| -> BTreeSet<Automaton> {
        run_plan(p).unwrap().into_iter().filter(|a| oracle_reset(a).is_some_and(|r| r >= t)).collect()
    };
    let full = long(&plan);
    let pruned_plan = plan.clone().with_threshold(Some(t));
    let pruned = long(&pruned_plan);
    let emitted = run_plan(&pruned_plan).unwrap().len();
    ensure(full == pruned, format!("{} vs {} automata with reset >= {t}", full.len(), pruned.len()))?;
    ensure(!full.is_empty(), "no automaton reaches the threshold")?;
    let all = run_plan(&plan).unwrap().len();
    Ok(format!("{} automata with reset >= 16 in both; pruned run emits {emitted} of {all}", full.len()))
}

fn c8_conjectures() -> Verdict {
    let mut notes = Vec::new();
    let binary = |c: Checker, max_n: usize| -> Result<(), String> {
        for n in 2..=max_n {
            clean(&campaign(c, n, 2))?;
        }
        Ok(())
    };
    for c in [Checker::Conjecture1, Checker::Conjecture2, Checker::Conjecture6] {
        binary(c, 5)?;
        clean(&campaign(c, 4, 3))?;
    }
    for c in [Checker::Conjecture3, Checker::Conjecture4] {
        binary(c, 6)?;
    }
    let c1 = campaign(Checker::Conjecture1, 6, 2);
    clean(&c1)?;
    ensure(c1.tight_count > 0, "no binary 6 automaton needs |w| = n")?;
    notes.push(format!("{} binary 6 one-cluster cases need |w| = n", c1.tight_count));
    clean(&campaign(Checker::Conjecture3, 4, 3))?;
    let c4 = campaign(Checker::Conjecture4, 4, 3);
    clean(&c4)?;
    ensure(c4.max("avoid_length") == Some(6), format!("ternary 4 avoid max {:?}", c4.max("avoid_length")))?;
    notes.push(format!("avoid 6 witness {}", c4.maxima["avoid_length"].witnesses.first().unwrap()));

    let c6 = campaign(Checker::Conjecture6, 5, 2);
    let c5 = canonical_form(&fx(Fixture::Cerny, Some(5)), true).to_line();
    let direct = check_conjecture6(&fx(Fixture::Cerny, Some(5)));
    ensure(direct.tight.iter().any(|t| t.starts_with("|S| = 2,") && t.ends_with("L(S) = 10")), "C5 direct")?;
    ensure(
        c6.tight.iter().any(|t| t.line == c5 && t.detail.starts_with("|S| = 2,") && t.detail.ends_with("L(S) = 10")),
        format!("C5 subset of size 2 missing from {} tight entries", c6.tight_count),
    )?;
    notes.push(format!("C5 subset tight ({} tight cases in binary 5)", c6.tight_count));
    Ok(notes.join("; "))
}

fn c9_determinism() -> Verdict {
    let spec = CampaignSpec::new(Checker::Cerny, 5, 2).with_plan(|p| p.with_chunk_size(2));
    let run = |workers, stop: Option<usize>, dir: &std::path::Path| {
        let cfg = DriverConfig {
            workers,
            checkpoint: Some(dir.join("ckpt")),
            jsonl: Some(dir.join("out.jsonl")),
            stop_after_chunks: stop,
        };
        run_campaign(&spec, &cfg).map_err(|e| e.to_string())
    };
    let d1 = tempfile::tempdir().unwrap();
    let d8 = tempfile::tempdir().unwrap();
    let di = tempfile::tempdir().unwrap();
    let one = run(1, None, d1.path())?;
    let eight = run(8, None, d8.path())?;
    let first = run(8, Some(7), di.path())?;
    ensure(!first.complete, "interruption did not happen")?;
    let resumed = run(3, None, di.path())?;
    ensure(resumed.complete && resumed.resumed, "resume failed")?;
    let r1 = one.result.report_json();
    ensure(r1 == eight.result.report_json(), "1 vs 8 workers differ")?;
    ensure(r1 == resumed.result.report_json(), "resumed report differs")?;
    let j1 = std::fs::read(d1.path().join("out.jsonl")).unwrap();
    ensure(j1 == std::fs::read(di.path().join("out.jsonl")).unwrap(), "resumed JSONL differs")?;
    ensure(j1 == std::fs::read(d8.path().join("out.jsonl")).unwrap(), "8-worker JSONL differs")?;
    Ok(format!("{} chunks, reports and JSONL byte-identical", one.total_chunks))
}

fn c10_grid() -> Verdict {
    ensure(GRID_CAMPAIGNS.len() >= 7, "grid definitions missing")?;
    let needed = ["grid-cerny-binary-12", "grid-cerny-ternary-8", "grid-problem1-binary-7"];
    for name in needed {
        let g = GRID_CAMPAIGNS.iter().find(|g| g.name == name).ok_or(format!("{name} missing"))?;
        ensure(!g.expected.is_empty() && !g.cost.is_empty(), format!("{name} undocumented"))?;
    }
    ensure(GRID_CAMPAIGNS.iter().filter(|g| g.runnable).all(|g| g.name == "grid-problem1-binary-7"), "unexpected runnable grid campaign")?;
    Ok(format!("{} disabled grid definitions with expected values", GRID_CAMPAIGNS.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("1 fixtures", c1_fixtures),
        ("2 kari", c2_kari),
        ("3 aperiodic series", c3_aperiodic),
        ("4 cerny sweep", c4_cerny_sweep),
        ("5 bound soundness", c5_bounds),
        ("6 dstar", c6_dstar),
        ("7 pruning safety", c7_pruning),
        ("8 conjecture campaigns", c8_conjectures),
        ("9 determinism", c9_determinism),
        ("10 grid definitions", c10_grid),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let verdict = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
