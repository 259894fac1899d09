use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use synchrolab::bounds::{bound_report, dstar_by_rank, dstar_table};
use synchrolab::fixtures::fixture_by_name;
use synchrolab::genx::{run_plan, Filters, GenerationPlan};
use synchrolab::search::{rank_lengths, reset_word};
use synchrolab::structure::classify;
use synchrolab::verify::{grid_campaign, run_campaign, CampaignSpec, DriverConfig, GRID_CAMPAIGNS};
use synchrolab::Automaton;

#[derive(Parser)]
#[command(name = "synchrolab", version, about = "Synchronizing automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reset length, rank, classifiers and bounds per automaton.
    Analyze(InputArgs),
    /// Run a verification campaign over a generated class.
    Campaign(CampaignArgs),
    /// Print every automaton of a class, one line each.
    Generate(GenerateArgs),
    /// Print a named automaton.
    Fixture {
        name: String,
        n: Option<usize>,
    },
    /// All applicable reset-length bounds.
    Bounds(InputArgs),
    /// Structural classifiers.
    Classify(InputArgs),
    /// D*(m, k) for k = 1..m-1 by both methods.
    Dstar {
        m: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Tsv,
}

#[derive(Args)]
struct InputArgs {
    /// An automaton line `n k : r0 ; r1 ...`.
    automaton: Option<String>,
    /// Read automaton lines from a file (`-` for standard input).
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Comma-separated subset of sync, sc, irreducible.
    #[arg(long)]
    filters: Option<String>,
    /// Drop prefixes whose extensions all reset below this length.
    #[arg(long)]
    threshold: Option<usize>,
    /// Keep automata that differ only by the order of their letters.
    #[arg(long)]
    no_letter_dedupe: bool,
    #[arg(long, default_value_t = 16)]
    chunk_size: usize,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl ClassArgs {
    fn apply(&self, mut plan: GenerationPlan) -> Result<GenerationPlan> {
        if let Some(f) = &self.filters {
            plan.filters = Filters::parse(f)?;
        }
        Ok(plan
            .with_threshold(self.threshold)
            .with_dedupe_letters(!self.no_letter_dedupe)
            .with_chunk_size(self.chunk_size))
    }
}

#[derive(Args)]
struct CampaignArgs {
    /// cerny, gaps, conjecture1..conjecture6, problem1, or a grid campaign.
    name: Option<String>,
    /// List campaigns, including the disabled grid definitions.
    #[arg(long)]
    list: bool,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    filters: Option<String>,
    #[arg(long)]
    threshold: Option<usize>,
    #[arg(long)]
    no_letter_dedupe: bool,
    #[arg(long, default_value_t = 16)]
    chunk_size: usize,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Checkpoint file; an existing one is resumed.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Per-automaton JSONL records.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Final report (standard output by default).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Allow the runnable grid campaigns.
    #[arg(long)]
    enable_grid: bool,
    /// Stop after this many chunks, leaving a checkpoint.
    #[arg(long, hide = true)]
    stop_after: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Input lines with their 1-based numbers; blank lines and `#` comments are
/// skipped.
fn input_lines(args: &InputArgs) -> Result<Vec<(usize, String)>> {
    let raw: Vec<String> = match (&args.automaton, &args.input) {
        (Some(line), None) => vec![line.clone()],
        (None, Some(p)) if p.as_os_str() == "-" => io::stdin().lock().lines().collect::<io::Result<_>>()?,
        (None, Some(p)) => BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?)
            .lines()
            .collect::<io::Result<_>>()?,
        (Some(_), Some(_)) => bail!("give either an automaton line or --input, not both"),
        (None, None) => bail!("no automaton given (pass a line or --input FILE)"),
    };
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

fn analyze_props(a: &Automaton) -> Value {
    let reset = reset_word(a);
    let ranks = rank_lengths(a);
    let rank = ranks.iter().position(Option::is_some).unwrap_or(a.n());
    let report = bound_report(a);
    json!({
        "n": a.n(),
        "k": a.k(),
        "synchronizing": reset.is_some(),
        "reset_length": reset.as_ref().map(|(l, _)| *l),
        "reset_word": reset.as_ref().map(|(_, w)| w.to_string()),
        "rank": rank,
        "classification": classify(a),
        "best_bound": report.best(),
        "bounds": report.bounds,
    })
}

fn tsv_row(line: &str, p: &Value) -> String {
    let c = &p["classification"];
    let cell = |v: &Value| match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    [
        line.to_string(),
        cell(&p["synchronizing"]),
        cell(&p["reset_length"]),
        cell(&p["rank"]),
        cell(&c["strongly_connected"]),
        cell(&c["irreducibly_synchronizing"]),
        cell(&c["aperiodic"]),
        cell(&p["best_bound"]),
    ]
    .join("\t")
}

/// Runs `props` over the input; malformed lines become error records.
/// Returns whether any line failed to parse.
fn per_automaton(args: &InputArgs, props: impl Fn(&Automaton) -> Value) -> Result<bool> {
    let lines = input_lines(args)?;
    let mut out = output(&args.out)?;
    if args.format == Format::Tsv {
        writeln!(out, "automaton\tsynchronizing\treset_length\trank\tstrongly_connected\tirreducible\taperiodic\tbest_bound")?;
    }
    let mut bad = false;
    for (no, line) in lines {
        match Automaton::parse_line(&line) {
            Ok(a) => {
                let p = props(&a);
                match args.format {
                    Format::Jsonl => writeln!(out, "{}", json!({ "a": a.to_line(), "props": p }))?,
                    Format::Tsv => writeln!(out, "{}", tsv_row(&a.to_line(), &p))?,
                }
            }
            Err(e) => {
                bad = true;
                let rec = json!({ "line": no, "input": line, "error": e.to_string() });
                match args.format {
                    Format::Jsonl => writeln!(out, "{rec}")?,
                    Format::Tsv => eprintln!("{rec}"),
                }
            }
        }
    }
    out.flush()?;
    Ok(bad)
}

fn set_workers(workers: usize) {
    if workers > 0 {
        // only the first call can configure the global pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
}

fn cmd_campaign(args: &CampaignArgs) -> Result<ExitCode> {
    if args.list {
        let mut out = output(&None)?;
        for name in ["cerny", "gaps", "conjecture1", "conjecture2", "conjecture3", "conjecture4", "conjecture5", "conjecture6", "problem1"] {
            writeln!(out, "{name}")?;
        }
        for g in GRID_CAMPAIGNS {
            let state = if g.runnable { "runnable with --enable-grid" } else { "disabled" };
            writeln!(out, "{}\t{state}\tn={} k={}\texpected: {}\tcost: {}", g.name, g.n, g.k, g.expected, g.cost)?;
        }
        out.flush()?;
        return Ok(ExitCode::SUCCESS);
    }
    let name = args.name.as_deref().ok_or_else(|| anyhow!("campaign name required (see --list)"))?;
    let mut spec = if let Some(g) = grid_campaign(name) {
        if !g.runnable {
            bail!("`{name}` is a disabled grid campaign ({}); expected: {}", g.cost, g.expected);
        }
        if !args.enable_grid {
            bail!("`{name}` takes {}; pass --enable-grid to run it", g.cost);
        }
        let mut s = CampaignSpec::new(g.checker, g.n, g.k);
        s.name = g.name.to_string();
        s.plan.filters = Filters::parse(g.filters)?;
        s
    } else {
        if args.n == 0 {
            bail!("--n is required");
        }
        CampaignSpec::named(name, args.n, args.k)?
    };
    let class = ClassArgs {
        n: spec.plan.n,
        k: spec.plan.k,
        filters: args.filters.clone(),
        threshold: args.threshold,
        no_letter_dedupe: args.no_letter_dedupe,
        chunk_size: args.chunk_size,
        workers: args.workers,
    };
    spec.plan = class.apply(spec.plan)?;
    let cfg = DriverConfig {
        workers: args.workers,
        checkpoint: args.checkpoint.clone(),
        jsonl: args.out.clone(),
        stop_after_chunks: args.stop_after,
    };
    let run = run_campaign(&spec, &cfg)?;
    if !run.complete {
        eprintln!("stopped after chunk {} of {}; rerun with the same checkpoint to resume", run.cursor, run.total_chunks);
        return Ok(ExitCode::SUCCESS);
    }
    let mut out = output(&args.report)?;
    out.write_all(run.result.report_json().as_bytes())?;
    out.flush()?;
    Ok(if run.result.violation_count > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    set_workers(args.class.workers);
    let plan = args.class.apply(GenerationPlan::new(args.class.n, args.class.k))?;
    let mut out = output(&args.out)?;
    for a in run_plan(&plan)? {
        writeln!(out, "{a}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_dstar(m: usize) -> Result<()> {
    let table = dstar_table(m)?;
    let mut out = output(&None)?;
    writeln!(out, "k\tcyclotomic\trank\tagree")?;
    for k in 1..m {
        let fast = table.get(k);
        let slow = dstar_by_rank(m, k)?;
        writeln!(out, "{k}\t{fast}\t{slow}\t{}", fast == slow)?;
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let input_status = |bad: bool| if bad { ExitCode::from(2) } else { ExitCode::SUCCESS };
    match &cli.command {
        Command::Analyze(args) => Ok(input_status(per_automaton(args, analyze_props)?)),
        Command::Bounds(args) => Ok(input_status(per_automaton(args, |a| {
            serde_json::to_value(bound_report(a)).expect("report serializes")
        })?)),
        Command::Classify(args) => Ok(input_status(per_automaton(args, |a| {
            serde_json::to_value(classify(a)).expect("classification serializes")
        })?)),
        Command::Campaign(args) => cmd_campaign(args),
        Command::Generate(args) => cmd_generate(args).map(|_| ExitCode::SUCCESS),
        Command::Fixture { name, n } => {
            println!("{}", fixture_by_name(name, *n)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Dstar { m } => cmd_dstar(*m).map(|_| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
