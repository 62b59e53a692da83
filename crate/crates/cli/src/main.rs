//! `tdl`: command-line entry point for the digraph laboratory.
//!
//! Subcommands: `extremal`, `census`, `partition`, `stability`, `sample`,
//! `pattern`, and `check` (the full acceptance suite). Results go to stdout
//! or `--out`; every run writes a JSON manifest to stderr with the full
//! parameter echo and a SHA-256 digest of the output. `TDL_BUDGET_SECS`
//! caps any exhaustive search; exceeding it exits with status 2, invalid
//! input with status 1.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use tdl_core::budget::Budget;
use tdl_core::census::{labelled_census, ratio_trend, rpartite_lower_bound, CensusOptions};
use tdl_core::containment::{pattern_stats_named, transitive_blowup_pattern, Pattern};
use tdl_core::digraph::{Digraph, GraphKind};
use tdl_core::error::Error;
use tdl_core::extremal::{exact_extremal, extremal_gap_scan, ExtremalOptions};
use tdl_core::sampler::{typicality_with_defects, ChainConfig, TypicalityOptions};
use tdl_core::structure::{
    optimal_partition, partition_report, stability_sweep, PartitionMode, PartitionOptions,
    RPartition,
};
use tdl_core::verify;
use tdl_core::weight::{format_sig10, WeightParam};

#[derive(Parser)]
#[command(name = "tdl", version, about = "exact small-n laboratory for weighted Turán problems on digraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel scans (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Serialize)]
enum Cmd {
    /// Exact weighted Turán number with witness certificate.
    Extremal(ExtremalArgs),
    /// Exhaustive labelled census of H-free and r-partite graphs.
    Census(CensusArgs),
    /// Optimal or heuristic r-partition of one graph.
    Partition(PartitionArgs),
    /// Deficit-vs-edit-distance sweep over all H-free graphs.
    Stability(StabilityArgs),
    /// MCMC sampling of H-free graphs with r-partiteness statistics.
    Sample(SampleArgs),
    /// Derived quantities of a forbidden pattern.
    Pattern(PatternArgs),
    /// Run the full acceptance suite; nonzero exit on any failure.
    Check(CheckArgs),
}

#[derive(Args, Serialize, Clone)]
struct PatternSpec {
    /// Forbid T_{r+1}^t given as "r,t" (for example "2,1" is T_3).
    #[arg(long)]
    pattern: Option<String>,
    /// File with one `D <n> <hex>` line holding an arbitrary pattern.
    #[arg(long, conflicts_with = "pattern")]
    pattern_file: Option<PathBuf>,
    /// Pattern parameter r (T_{r+1}^t); also the partition class count.
    #[arg(long)]
    r: Option<usize>,
    /// Pattern parameter t (blow-up factor).
    #[arg(long)]
    t: Option<usize>,
}

impl PatternSpec {
    /// The pattern plus the r this run partitions against.
    fn resolve(&self) -> Result<(Pattern, usize), Error> {
        if let Some(path) = &self.pattern_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {path:?}: {e}")))?;
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .ok_or_else(|| Error::Parse(format!("{path:?} holds no graph line")))?;
            let h = Digraph::parse_line(line)?;
            let name = format!("H(v={},e={})", h.n(), h.arc_count());
            let r = self.r.ok_or_else(|| {
                Error::InvalidArgument("--r is required with --pattern-file".into())
            })?;
            return Ok((pattern_stats_named(&h, name)?, r));
        }
        let (r, t) = if let Some(spec) = &self.pattern {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!(
                    "pattern spec '{spec}' is not of the form r,t"
                )));
            }
            let r = parts[0].trim().parse().map_err(|_| {
                Error::Parse(format!("pattern spec '{spec}': r is not an integer"))
            })?;
            let t = parts[1].trim().parse().map_err(|_| {
                Error::Parse(format!("pattern spec '{spec}': t is not an integer"))
            })?;
            (r, t)
        } else {
            match (self.r, self.t) {
                (Some(r), Some(t)) => (r, t),
                (Some(r), None) => (r, 1),
                _ => {
                    return Err(Error::InvalidArgument(
                        "give a pattern: --pattern r,t or --r <r> [--t <t>] or --pattern-file"
                            .into(),
                    ))
                }
            }
        };
        Ok((transitive_blowup_pattern(r, t)?, r))
    }
}

fn parse_weight(s: &str) -> Result<WeightParam, Error> {
    let s = s.trim();
    if matches!(s, "log2(3)" | "log2_3" | "log23" | "oriented") {
        return Ok(WeightParam::oriented_counting());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("weight '{s}': bad numerator")))?;
        let den: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("weight '{s}': bad denominator")))?;
        return WeightParam::from_rational(num, den);
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.len() <= 9 && !frac.is_empty() {
            let whole: i64 = whole
                .parse()
                .map_err(|_| Error::Parse(format!("weight '{s}' is not a number")))?;
            let frac_val: i64 = frac
                .parse()
                .map_err(|_| Error::Parse(format!("weight '{s}' is not a number")))?;
            let den = 10i64.pow(frac.len() as u32);
            return WeightParam::from_rational(whole * den + frac_val, den);
        }
        let f: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("weight '{s}' is not a number")))?;
        return WeightParam::from_float(f);
    }
    let int: i64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("weight '{s}' is not a number")))?;
    WeightParam::from_integer(int)
}

/// "4" or "3..5" (inclusive).
fn parse_n_range(s: &str) -> Result<(usize, usize), Error> {
    if let Some((a, b)) = s.split_once("..") {
        let lo = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad range '{s}'")))?;
        let hi = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad range '{s}'")))?;
        if lo > hi {
            return Err(Error::Parse(format!("empty range '{s}'")));
        }
        Ok((lo, hi))
    } else {
        let n = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex count '{s}'")))?;
        Ok((n, n))
    }
}

#[derive(Args, Serialize)]
struct ExtremalArgs {
    /// Vertex count, or an inclusive range "3..5" for a gap scan.
    #[arg(long)]
    n: String,
    #[command(flatten)]
    pattern: PatternSpec,
    /// Weight a >= 1: integer, p/q, decimal, or log2(3).
    #[arg(long, default_value = "2")]
    a: String,
    #[arg(long, default_value = "digraph")]
    kind: GraphKindArg,
    /// Raise the per-mode n cap (complete search, use with care).
    #[arg(long)]
    max_n: Option<usize>,
}

#[derive(Args, Serialize)]
struct CensusArgs {
    /// Vertex count, or an inclusive range "2..5" for a ratio trend.
    #[arg(long)]
    n: String,
    #[command(flatten)]
    pattern: PatternSpec,
    #[arg(long, default_value = "oriented")]
    kind: GraphKindArg,
    /// Comma-separated near-partite thresholds, e.g. "0.05,0.1".
    #[arg(long)]
    alpha: Option<String>,
    /// Raise the enumeration state cap.
    #[arg(long)]
    max_states: Option<u128>,
}

#[derive(Args, Serialize)]
struct PartitionArgs {
    /// Graph line `D <n> <hex>`.
    #[arg(long)]
    graph: Option<String>,
    /// File with one graph line.
    #[arg(long, conflicts_with = "graph")]
    graph_file: Option<PathBuf>,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Evaluate this explicit partition instead of searching: classes as
    /// "0,1,2|3,4".
    #[arg(long)]
    classes: Option<String>,
    #[arg(long)]
    max_states: Option<u128>,
    #[arg(long, default_value = "32")]
    restarts: u32,
    #[arg(long, default_value = "0")]
    seed: u64,
}

#[derive(Args, Serialize)]
struct StabilityArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value = "1")]
    t: usize,
    #[arg(long, default_value = "2")]
    a: String,
    /// Weighted-size deficit cap, as a fraction of n^2.
    #[arg(long, default_value = "1.0")]
    gamma: f64,
    #[arg(long, default_value = "digraph")]
    kind: GraphKindArg,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    pattern: PatternSpec,
    #[arg(long, default_value = "digraph")]
    kind: GraphKindArg,
    /// Burn-in steps (default 50 n^2).
    #[arg(long)]
    burnin: Option<u64>,
    /// Steps between samples (default n^2).
    #[arg(long)]
    thin: Option<u64>,
    #[arg(long, default_value = "10000")]
    samples: u64,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long, default_value = "1")]
    chains: u32,
    /// Closeness threshold for the alpha statistic.
    #[arg(long, default_value = "0.1")]
    alpha: f64,
    /// Local-search restarts per sample.
    #[arg(long, default_value = "8")]
    ls_restarts: u32,
    /// Write per-sample defects as CSV here.
    #[arg(long)]
    csv_defects: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PatternArgs {
    #[command(flatten)]
    pattern: PatternSpec,
    /// Extra weights to report Condition-A verdicts for.
    #[arg(long)]
    a: Vec<String>,
}

#[derive(Args, Serialize)]
struct CheckArgs {
    /// Run only this criterion (1-7).
    #[arg(long)]
    criterion: Option<usize>,
}

#[derive(Clone, Copy, Serialize, clap::ValueEnum)]
enum GraphKindArg {
    Oriented,
    Digraph,
}

impl From<GraphKindArg> for GraphKind {
    fn from(k: GraphKindArg) -> GraphKind {
        match k {
            GraphKindArg::Oriented => GraphKind::Oriented,
            GraphKindArg::Digraph => GraphKind::Digraph,
        }
    }
}

struct CmdOutput {
    payload: String,
    seed: Option<u64>,
    exit: i32,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit code for usage errors is 2; this tool
            // reserves 2 for budget exhaustion, so remap to 1
            let _ = e.print();
            let code = if e.use_stderr() { 1 } else { 0 };
            std::process::exit(code);
        }
    };
    if let Some(k) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    let started = Instant::now();
    let budget = Budget::from_env();
    let subcommand = match &cli.cmd {
        Cmd::Extremal(_) => "extremal",
        Cmd::Census(_) => "census",
        Cmd::Partition(_) => "partition",
        Cmd::Stability(_) => "stability",
        Cmd::Sample(_) => "sample",
        Cmd::Pattern(_) => "pattern",
        Cmd::Check(_) => "check",
    };
    let params = serde_json::to_value(&cli.cmd).unwrap_or(serde_json::Value::Null);

    match dispatch(&cli.cmd, &budget) {
        Ok(out) => {
            let digest = hex::encode(Sha256::digest(out.payload.as_bytes()));
            let target = match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out.payload) {
                        eprintln!("error: cannot write {path:?}: {e}");
                        std::process::exit(1);
                    }
                    path.display().to_string()
                }
                None => {
                    print!("{}", out.payload);
                    let _ = std::io::stdout().flush();
                    "stdout".to_string()
                }
            };
            emit_manifest(subcommand, &params, out.seed, started, &target, &digest);
            std::process::exit(out.exit);
        }
        Err(e) => {
            eprintln!("error: {e}");
            emit_manifest(subcommand, &params, None, started, "none", "");
            let code = match e {
                Error::BudgetExceeded(_) => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}

fn emit_manifest(
    subcommand: &str,
    params: &serde_json::Value,
    seed: Option<u64>,
    started: Instant,
    target: &str,
    digest: &str,
) {
    let manifest = serde_json::json!({
        "subcommand": subcommand,
        "params": params,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "wall_secs": started.elapsed().as_secs_f64(),
        "outputs": [{"target": target, "sha256": digest}],
    });
    eprintln!("{manifest}");
}

fn dispatch(cmd: &Cmd, budget: &Budget) -> Result<CmdOutput, Error> {
    match cmd {
        Cmd::Extremal(args) => run_extremal(args, budget),
        Cmd::Census(args) => run_census(args, budget),
        Cmd::Partition(args) => run_partition(args, budget),
        Cmd::Stability(args) => run_stability(args, budget),
        Cmd::Sample(args) => run_sample(args, budget),
        Cmd::Pattern(args) => run_pattern(args),
        Cmd::Check(args) => run_check(args, budget),
    }
}

fn run_extremal(args: &ExtremalArgs, budget: &Budget) -> Result<CmdOutput, Error> {
    let (pattern, r) = args.pattern.resolve()?;
    let a = parse_weight(&args.a)?;
    let kind: GraphKind = args.kind.into();
    let mut opts = ExtremalOptions {
        budget: budget.clone(),
        ..Default::default()
    };
    if let Some(m) = args.max_n {
        opts.max_n_digraph = m;
        opts.max_n_oriented = m;
    }
    let (lo, hi) = parse_n_range(&args.n)?;
    let payload = if lo == hi {
        let cert = exact_extremal(lo, pattern.h(), pattern.name(), &a, kind, &opts)?;
        format!("{:#}\n", cert.to_json())
    } else {
        let rows = extremal_gap_scan(lo..=hi, pattern.h(), pattern.name(), r, &a, kind, &opts)?;
        let mut s = String::from("n,ex,lower,gap,lower_is_valid\n");
        for row in rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n, row.ex, row.lower, row.gap, row.lower_is_valid
            ));
        }
        s
    };
    Ok(CmdOutput {
        payload,
        seed: None,
        exit: 0,
    })
}

fn run_census(args: &CensusArgs, budget: &Budget) -> Result<CmdOutput, Error> {
    let (pattern, r) = args.pattern.resolve()?;
    let kind: GraphKind = args.kind.into();
    let mut opts = CensusOptions {
        budget: budget.clone(),
        ..Default::default()
    };
    if let Some(m) = args.max_states {
        opts.max_states = m;
    }
    let alphas: Vec<f64> = match &args.alpha {
        None => Vec::new(),
        Some(s) => s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad alpha '{p}'")))
            })
            .collect::<Result<_, _>>()?,
    };
    let (lo, hi) = parse_n_range(&args.n)?;
    let payload = if lo == hi {
        let rec = labelled_census(lo, pattern.h(), pattern.name(), r, kind, &alphas, &opts)?;
        format!("{}\n{}\n", rec.csv_header(), rec.csv_row())
    } else {
        let report = ratio_trend(lo..=hi, pattern.h(), pattern.name(), r, kind, &opts)?;
        let mut s = String::from("n,f,t,ratio\n");
        for row in &report.rows {
            s.push_str(&format!(
                "{},{},{},{}\n",
                row.n,
                row.f,
                row.t,
                format_sig10(row.ratio)
            ));
        }
        s.push_str(&format!(
            "# ratio_nonincreasing={} (observational; no asymptotic claim)\n",
            report.ratio_nonincreasing
        ));
        s.push_str(&format!(
            "# rpartite_lower_bound(n={hi}) = {}\n",
            rpartite_lower_bound(hi, r, kind)?
        ));
        s
    };
    Ok(CmdOutput {
        payload,
        seed: None,
        exit: 0,
    })
}

fn load_graph(graph: &Option<String>, file: &Option<PathBuf>) -> Result<Digraph, Error> {
    if let Some(line) = graph {
        return Digraph::parse_line(line);
    }
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path:?}: {e}")))?;
        let line = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse(format!("{path:?} holds no graph line")))?;
        return Digraph::parse_line(line);
    }
    Err(Error::InvalidArgument(
        "give a graph with --graph or --graph-file".into(),
    ))
}

fn run_partition(args: &PartitionArgs, budget: &Budget) -> Result<CmdOutput, Error> {
    let g = load_graph(&args.graph, &args.graph_file)?;
    let report = if let Some(spec) = &args.classes {
        let classes: Vec<Vec<usize>> = spec
            .split('|')
            .map(|class| {
                class
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad vertex '{s}'")))
                    })
                    .collect::<Result<Vec<usize>, Error>>()
            })
            .collect::<Result<_, _>>()?;
        let q = RPartition::new(g.n(), classes)?;
        partition_report(&g, &q)?
    } else {
        let mode = match args.mode.as_str() {
            "exact" => PartitionMode::Exact,
            "local" | "local_search" => PartitionMode::LocalSearch,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown mode '{other}' (expected exact or local)"
                )))
            }
        };
        let mut opts = PartitionOptions {
            budget: budget.clone(),
            restarts: args.restarts,
            seed: args.seed,
            ..Default::default()
        };
        if let Some(m) = args.max_states {
            opts.max_states = m;
        }
        optimal_partition(&g, args.r, mode, &opts)?
    };
    let payload = format!(
        "{:#}\n",
        serde_json::to_value(&report).map_err(|e| Error::InvalidArgument(e.to_string()))?
    );
    Ok(CmdOutput {
        payload,
        seed: Some(args.seed),
        exit: 0,
    })
}

fn run_stability(args: &StabilityArgs, budget: &Budget) -> Result<CmdOutput, Error> {
    let a = parse_weight(&args.a)?;
    let res = stability_sweep(
        args.n,
        args.r,
        args.t,
        &a,
        args.gamma,
        args.kind.into(),
        budget,
    )?;
    Ok(CmdOutput {
        payload: res.to_csv(),
        seed: None,
        exit: 0,
    })
}

fn run_sample(args: &SampleArgs, budget: &Budget) -> Result<CmdOutput, Error> {
    let _ = budget; // sampling is step-bounded, not search-bounded
    let (pattern, r) = args.pattern.resolve()?;
    let mut cfg = ChainConfig::new(args.n, args.kind.into(), pattern);
    if let Some(b) = args.burnin {
        cfg.burn_in = b;
    }
    if let Some(t) = args.thin {
        cfg.thin = t;
    }
    cfg.samples = args.samples;
    cfg.seed = args.seed;
    cfg.chains = args.chains;
    let topts = TypicalityOptions {
        ls_restarts: args.ls_restarts,
    };
    let (stats, defects) = typicality_with_defects(&cfg, r, args.alpha, &topts)?;
    if let Some(path) = &args.csv_defects {
        let mut csv = String::from("sample,defect\n");
        for (i, d) in defects.iter().enumerate() {
            csv.push_str(&format!("{i},{d}\n"));
        }
        std::fs::write(path, csv)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {path:?}: {e}")))?;
    }
    let mut value =
        serde_json::to_value(&stats).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    value["n"] = serde_json::json!(args.n);
    value["r"] = serde_json::json!(r);
    value["burn_in"] = serde_json::json!(cfg.burn_in);
    value["thin"] = serde_json::json!(cfg.thin);
    value["seed"] = serde_json::json!(cfg.seed);
    value["rng"] = serde_json::json!("ChaCha12, seed_from_u64, stream = chain index");
    Ok(CmdOutput {
        payload: format!("{value:#}\n"),
        seed: Some(args.seed),
        exit: 0,
    })
}

fn run_pattern(args: &PatternArgs) -> Result<CmdOutput, Error> {
    let (pattern, _) = args.pattern.resolve()?;
    let mut weights = vec![
        ("2".to_string(), WeightParam::from_integer(2).unwrap()),
        ("4".to_string(), WeightParam::from_integer(4).unwrap()),
    ];
    for s in &args.a {
        weights.push((s.clone(), parse_weight(s)?));
    }
    let mut verdicts = serde_json::Map::new();
    for (label, w) in &weights {
        verdicts.insert(
            format!("a={label}"),
            match pattern.condition_a_holds(w) {
                Some(v) => serde_json::json!(v),
                None => serde_json::Value::Null,
            },
        );
    }
    let value = serde_json::json!({
        "name": pattern.name(),
        "graph": pattern.h().to_line(),
        "vertices": pattern.h().n(),
        "arcs": pattern.h().arc_count(),
        "delta": pattern.delta(),
        "m_num": pattern.m_value().map(|m| *m.numer()),
        "m_den": pattern.m_value().map(|m| *m.denom()),
        "cond_a_threshold_num": pattern.cond_a_threshold().map(|t| *t.numer()),
        "cond_a_threshold_den": pattern.cond_a_threshold().map(|t| *t.denom()),
        "condition_a": verdicts,
        "has_bidirected_pair": pattern.has_bidirected_pair(),
    });
    Ok(CmdOutput {
        payload: format!("{value:#}\n"),
        seed: None,
        exit: 0,
    })
}

fn run_check(args: &CheckArgs, budget: &Budget) -> Result<CmdOutput, Error> {
    let outcomes = match args.criterion {
        None => verify::run_criteria(budget),
        Some(1) => vec![verify::criterion_1(budget)],
        Some(2) => vec![verify::criterion_2(budget)],
        Some(3) => vec![verify::criterion_3(budget)],
        Some(4) => vec![verify::criterion_4(budget)],
        Some(5) => vec![verify::criterion_5(budget)],
        Some(6) => vec![verify::criterion_6(budget)],
        Some(7) => vec![verify::criterion_7(budget)],
        Some(k) => {
            return Err(Error::InvalidArgument(format!(
                "criterion {k} does not exist (1-7)"
            )))
        }
    };
    let mut payload = String::new();
    let mut all_passed = true;
    for o in &outcomes {
        payload.push_str(&o.line());
        payload.push('\n');
        all_passed &= o.passed;
    }
    payload.push_str(if all_passed {
        "acceptance: all criteria passed\n"
    } else {
        "acceptance: FAILURES present\n"
    });
    Ok(CmdOutput {
        payload,
        seed: None,
        exit: if all_passed { 0 } else { 1 },
    })
}
