use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use ame_core::analysis::{count_mixed_marginals, is_ame, parity_exclusion, scott_rains_bound};
use ame_core::bits::k_subsets;
use ame_core::io::{read_graph, read_state, state_to_json};
use ame_core::named::{discover, fixture_text, named_graph, NAMES};
use ame_core::search::{graph_count, search_range, Prefilter, SearchConfig, SearchReport};
use ame_core::state::{mask_to_qubits, Complex64};
use ame_core::{Graph, PauliOperator, StateVector};
use clap::{Args, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

pub struct CommandResult {
    /// 0 success, 1 a requested check ran and failed.
    pub exit_code: u8,
    pub report: Value,
    pub human: String,
}

impl CommandResult {
    fn ok(report: Value, human: String) -> Self {
        Self {
            exit_code: 0,
            report,
            human,
        }
    }
}

/// Usage or input problems; reported with exit code 2.
#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<ame_core::Error> for CliError {
    fn from(e: ame_core::Error) -> Self {
        CliError(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError(msg.into())
}

/// Parses `A..B` or `A..=B`, both inclusive of `B`.
fn parse_range(s: &str) -> Result<RangeInclusive<u64>, CliError> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| usage(format!("expected a range A..B, got `{s}`")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("bad range bound `{t}` in `{s}`")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(usage(format!("empty range `{s}`")));
    }
    Ok(a..=b)
}

// ---------------------------------------------------------------- verify

#[derive(Args)]
pub struct VerifyArgs {
    /// State file: {"n": int, "amplitudes": [[re, im], ...]}.
    pub state_file: PathBuf,
    /// Marginal sizes to count (default 1..=⌊n/2⌋).
    #[arg(long = "k", value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Exit with status 1 unless the state is AME.
    #[arg(long)]
    pub expect_ame: bool,
}

pub fn verify(args: &VerifyArgs) -> Result<CommandResult, CliError> {
    let state = read_state(&args.state_file)?;
    let n = state.n();
    let ks: Vec<usize> = if args.k.is_empty() {
        (1..=(n / 2).max(1)).collect()
    } else {
        args.k.clone()
    };
    let sectors = state.sector_lengths();
    let mut counts = vec![];
    for &k in &ks {
        if k == 0 || k > n {
            return Err(usage(format!("--k {k} outside 1..={n}")));
        }
        counts.push(count_mixed_marginals(&state, k, args.tol)?);
    }
    let ame = is_ame(&state, args.tol);

    let mut human = format!("n = {n}\nsector lengths:");
    for (j, a) in sectors.values.iter().enumerate() {
        write!(human, " A{j}={a:.6}").unwrap();
    }
    human.push('\n');
    for c in &counts {
        writeln!(human, "mixed {}-body marginals: {} / {}", c.k, c.count, c.total).unwrap();
        for f in &c.failing {
            writeln!(human, "  not mixed: {f:?}").unwrap();
        }
    }
    writeln!(human, "AME: {ame}").unwrap();

    let report = json!({
        "command": "verify",
        "n": n,
        "tol": args.tol,
        "sector_lengths": sectors.values,
        "mixed_marginals": counts,
        "is_ame": ame,
    });
    Ok(CommandResult {
        exit_code: u8::from(args.expect_ame && !ame),
        report,
        human,
    })
}

// --------------------------------------------------------------- exclude

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct ExcludeArgs {
    /// Single qubit count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Inclusive range `A..B`.
    #[arg(long)]
    pub range: Option<String>,
}

pub fn exclude(args: &ExcludeArgs) -> Result<CommandResult, CliError> {
    let ns: Vec<usize> = match (&args.n, &args.range) {
        (Some(n), _) => vec![*n],
        (None, Some(r)) => parse_range(r)?.map(|n| n as usize).collect(),
        (None, None) => return Err(usage("one of --n or --range is required")),
    };
    let verdicts = ns
        .iter()
        .map(|&n| parity_exclusion(n))
        .collect::<Result<Vec<_>, _>>()?;
    let not_excluded: Vec<usize> = verdicts.iter().filter(|v| !v.excluded).map(|v| v.n).collect();

    let mut human = format!(
        "{:>4}  {:<20} {:>8} {:>8}  {:<13} {}\n",
        "n", "case", "lhs", "rhs", "verdict", "eigenvalues"
    );
    for v in &verdicts {
        let eig: Vec<String> = v.eigenvalues_used.iter().map(|(j, l)| format!("λ{j}={l}")).collect();
        writeln!(
            human,
            "{:>4}  {:<20} {:>8} {:>8}  {:<13} {}",
            v.n,
            v.case_label.as_str(),
            v.lhs,
            v.rhs,
            if v.excluded { "excluded" } else { "not excluded" },
            eig.join(" ")
        )
        .unwrap();
    }
    writeln!(human, "not excluded: {not_excluded:?}").unwrap();
    let report = json!({
        "command": "exclude",
        "verdicts": verdicts,
        "not_excluded": not_excluded,
    });
    Ok(CommandResult::ok(report, human))
}

// ---------------------------------------------------------------- search

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// none, one-body, two-body, <m>-body or below-k.
    #[arg(long, default_value = "none")]
    pub prefilter: String,
    /// Worker threads (0 = one per core).
    #[arg(long, env = "AME_JOBS", default_value_t = 0)]
    pub jobs: usize,
    /// Start from the bitmask stored in this checkpoint file.
    #[arg(long, value_name = "FILE")]
    pub resume: Option<PathBuf>,
    /// After each block, write the next start bitmask to this file.
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
    /// Exit with status 1 unless the best count equals this value.
    #[arg(long)]
    pub expect_best: Option<usize>,
}

const CHECKPOINT_BLOCK: u64 = 1 << 18;

fn read_checkpoint(path: &PathBuf) -> Result<u64, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read checkpoint {}: {e}", path.display())))?;
    text.trim()
        .parse()
        .map_err(|_| usage(format!("checkpoint {} is not a bitmask", path.display())))
}

pub fn search(args: &SearchArgs) -> Result<CommandResult, CliError> {
    let prefilter: Prefilter = args.prefilter.parse()?;
    let config = SearchConfig::new(args.n, args.k, prefilter).with_jobs(args.jobs);
    if args.n == 0 || args.n > ame_core::search::MAX_SEARCH_VERTICES {
        return Err(usage(format!("--n {} outside 1..=8", args.n)));
    }
    let end = graph_count(args.n);
    let start = match &args.resume {
        Some(path) => read_checkpoint(path)?,
        None => 0,
    };
    if start > end {
        return Err(usage(format!("checkpoint start {start} beyond {end}")));
    }
    let mut report: Option<SearchReport> = None;
    let mut cursor = start;
    loop {
        let block_end = (cursor + CHECKPOINT_BLOCK).min(end);
        let part = search_range(&config, cursor, block_end)?;
        report = Some(match report {
            None => part,
            Some(r) => r.merge(part)?,
        });
        cursor = block_end;
        if let Some(path) = &args.checkpoint {
            std::fs::write(path, format!("{cursor}\n"))
                .map_err(|e| usage(format!("cannot write checkpoint {}: {e}", path.display())))?;
        }
        if cursor >= end {
            break;
        }
    }
    let report = report.expect("at least one block");

    let mut human = String::new();
    writeln!(human, "n = {}, k = {}, prefilter: {}", report.n, report.k, report.prefilter).unwrap();
    writeln!(
        human,
        "graphs scanned: {} (bitmasks {}..{}), passing prefilter: {}",
        report.graphs_scanned, report.range_start, report.range_end, report.graphs_passing
    )
    .unwrap();
    match report.best_count {
        Some(b) => writeln!(human, "best count: {b} / {}", report.max_possible).unwrap(),
        None => writeln!(human, "best count: none (no graph passed)").unwrap(),
    }
    writeln!(human, "witnesses: {} total", report.witness_total).unwrap();
    for w in report.witnesses.iter().take(10) {
        writeln!(human, "  {w}").unwrap();
    }
    if report.witnesses.len() > 10 {
        writeln!(human, "  ... ({} more listed in JSON)", report.witnesses.len() - 10).unwrap();
    }

    let failed = args.expect_best.is_some_and(|e| report.best_count != Some(e));
    if let Some(e) = args.expect_best {
        writeln!(human, "expected best {e}: {}", if failed { "FAILED" } else { "ok" }).unwrap();
    }
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["command"] = json!("search");
    Ok(CommandResult {
        exit_code: u8::from(failed),
        report: value,
        human,
    })
}

// ---------------------------------------------------------------- bounds

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct BoundsArgs {
    /// Local dimension D.
    #[arg(long)]
    pub dim: Option<u64>,
    /// Inclusive range of local dimensions `A..B`.
    #[arg(long)]
    pub dim_range: Option<String>,
}

pub fn bounds(args: &BoundsArgs) -> Result<CommandResult, CliError> {
    let dims: Vec<u64> = match (&args.dim, &args.dim_range) {
        (Some(d), _) => vec![*d],
        (None, Some(r)) => parse_range(r)?.collect(),
        (None, None) => return Err(usage("one of --dim or --dim-range is required")),
    };
    let mut rows = vec![];
    let mut human = format!("{:>4} {:>10} {:>10}\n", "D", "n even ≤", "n odd ≤");
    for d in dims {
        let (even, odd) = scott_rains_bound(d)?;
        writeln!(human, "{d:>4} {even:>10} {odd:>10}").unwrap();
        rows.push(json!({ "dim": d, "n_max_even": even, "n_max_odd": odd }));
    }
    Ok(CommandResult::ok(json!({ "command": "bounds", "bounds": rows }), human))
}

// -------------------------------------------------------------- selftest

#[derive(Args)]
pub struct SelftestArgs {
    /// Random Pauli pairs for the parity-rule check.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn random_hermitian(rng: &mut StdRng, n: usize) -> PauliOperator {
    let m = (1u32 << n) - 1;
    let sign = if rng.gen::<bool>() { 2 } else { 0 };
    PauliOperator::new(n, rng.gen::<u32>() & m, rng.gen::<u32>() & m, sign).expect("in range")
}

fn brute_sector_lengths(s: &StateVector) -> Vec<f64> {
    let mut a = vec![0.0; s.n() + 1];
    for p in PauliOperator::all(s.n()) {
        let r = s.expectation(&p).expect("matching size");
        a[p.weight()] += r * r;
    }
    a
}

pub fn selftest(args: &SelftestArgs) -> Result<CommandResult, CliError> {
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let mut rng = StdRng::seed_from_u64(args.seed);

    let mut parity_violations = 0u64;
    let mut vanishing = 0u64;
    for _ in 0..args.trials {
        let n = rng.gen_range(1..=8);
        let (p, q) = (random_hermitian(&mut rng, n), random_hermitian(&mut rng, n));
        match p.anticommutator_weight(&q)? {
            None => vanishing += 1,
            Some(w) => {
                let subadditive = p.product(&q)?.weight() <= p.weight() + q.weight();
                if w % 2 != (p.weight() + q.weight()) % 2 || !subadditive {
                    parity_violations += 1;
                }
            }
        }
    }

    let graph_trials = (args.trials / 1000).clamp(1, 200);
    let mut oracle_violations = 0u64;
    for _ in 0..graph_trials {
        let n = rng.gen_range(1..=6);
        let slots = n * (n - 1) / 2;
        let g = Graph::from_edge_bitmask(n, (rng.gen::<u64>() & ((1u64 << slots) - 1)) as u128)?;
        let psi = g.graph_state_vector()?;
        let analyzer = g.marginal_analyzer();
        for mask in 1u32..1 << n {
            if analyzer.is_mixed(mask) != psi.is_maximally_mixed(&mask_to_qubits(mask), 1e-9)? {
                oracle_violations += 1;
            }
        }
        let dense = psi.sector_lengths();
        let stab = g.sector_lengths();
        if dense.values.iter().zip(&stab).any(|(a, &b)| (a - b as f64).abs() > 1e-9) {
            oracle_violations += 1;
        }
    }
    for n in 1..=4 {
        let amps: Vec<Complex64> = (0..1 << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let state = StateVector::normalized(n, amps.iter().map(|a| a / norm).collect(), 1e-6)?;
        let fast = state.sector_lengths();
        if fast.values.iter().zip(brute_sector_lengths(&state)).any(|(a, b)| (a - b).abs() > 1e-9) {
            oracle_violations += 1;
        }
    }

    let passed = parity_violations == 0 && oracle_violations == 0;
    let human = format!(
        "parity rule: {} pairs, {} vanishing anticommutators, {} violations\n\
         oracle equivalence: {} random graphs, {} violations\n\
         {}\n",
        args.trials,
        vanishing,
        parity_violations,
        graph_trials,
        oracle_violations,
        if passed { "PASS" } else { "FAIL" }
    );
    let report = json!({
        "command": "selftest",
        "seed": args.seed,
        "trials": args.trials,
        "vanishing_anticommutators": vanishing,
        "parity_violations": parity_violations,
        "graph_trials": graph_trials,
        "oracle_violations": oracle_violations,
        "passed": passed,
    });
    Ok(CommandResult {
        exit_code: u8::from(!passed),
        report,
        human,
    })
}

// ----------------------------------------------------------------- graph

#[derive(Clone, Copy, ValueEnum)]
pub enum GraphFormat {
    /// `n` then `u v` lines.
    Text,
    /// Compact `n:HEX` edge bitmask.
    Hex,
    /// Graph-state JSON file.
    State,
}

#[derive(Args)]
pub struct GraphArgs {
    /// Named fixture: bell, triangle, ring5, ame6, wheel7, fano7.
    #[arg(long, group = "source")]
    pub name: Option<String>,
    /// Graph file (edge list or n:HEX).
    #[arg(long, group = "source")]
    pub file: Option<PathBuf>,
    /// Inline compact form `n:HEX`.
    #[arg(long, group = "source")]
    pub hex: Option<String>,
    /// Apply local complementation at these vertices, in order.
    #[arg(long, value_delimiter = ',')]
    pub lc: Vec<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: GraphFormat,
}

pub fn graph(args: &GraphArgs) -> Result<CommandResult, CliError> {
    let mut g = match (&args.name, &args.file, &args.hex) {
        (Some(name), _, _) => named_graph(name)?,
        (_, Some(path), _) => read_graph(path)?,
        (_, _, Some(hex)) => Graph::parse(hex)?,
        _ => return Err(usage("one of --name, --file or --hex is required")),
    };
    for &v in &args.lc {
        g = g.local_complement(v)?;
    }
    let human = match args.format {
        GraphFormat::Text => g.to_text(),
        GraphFormat::Hex => format!("{g}\n"),
        GraphFormat::State => format!("{}\n", state_to_json(&g.graph_state_vector()?)),
    };
    let analyzer = g.marginal_analyzer();
    let counts: Vec<Value> = (1..=g.n())
        .map(|k| json!({ "k": k, "mixed": analyzer.mixed_count(k), "total": k_subsets(g.n(), k).count() }))
        .collect();
    let report = json!({
        "command": "graph",
        "n": g.n(),
        "hex": g.to_string(),
        "edges": g.edges(),
        "lc_applied": args.lc,
        "sector_lengths": g.sector_lengths(),
        "mixed_marginals": counts,
    });
    Ok(CommandResult::ok(report, human))
}

// -------------------------------------------------------------- fixtures

#[derive(Args)]
pub struct FixturesArgs {
    /// Directory of frozen `<name>.graph` files (default: the copies built into the binary).
    #[arg(long)]
    pub dir: Option<PathBuf>,
    /// Overwrite the files in --dir with the rediscovered graphs.
    #[arg(long, requires = "dir")]
    pub write: bool,
}

pub fn fixtures(args: &FixturesArgs) -> Result<CommandResult, CliError> {
    let mut rows = vec![];
    let mut human = String::new();
    let mut all_match = true;
    for name in NAMES {
        let found = discover(name)?;
        let frozen = match &args.dir {
            Some(dir) => {
                let path = dir.join(format!("{name}.graph"));
                if args.write {
                    std::fs::write(&path, found.to_text())
                        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
                }
                read_graph(&path)?
            }
            None => Graph::parse(fixture_text(name)?)?,
        };
        let matches = frozen == found;
        all_match &= matches;
        writeln!(
            human,
            "{name:<9} frozen {frozen:<12} discovered {found:<12} {}",
            if matches { "ok" } else { "DIFFERS" }
        )
        .unwrap();
        rows.push(json!({
            "name": name,
            "frozen": frozen.to_string(),
            "discovered": found.to_string(),
            "matches": matches,
        }));
    }
    Ok(CommandResult {
        exit_code: u8::from(!all_match),
        report: json!({ "command": "fixtures", "fixtures": rows, "all_match": all_match }),
        human,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..12").unwrap(), 2..=12);
        assert_eq!(parse_range("2..=12").unwrap(), 2..=12);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("5").is_err());
        assert!(parse_range("a..3").is_err());
    }
}
