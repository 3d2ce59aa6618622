//! Exhaustive scans over labeled graphs and local-complementation orbits.
//!
//! Graphs on `n` vertices are indexed by their edge bitmask (bit
//! `edge_index(u, v)` for edge `{u, v}`), so the `2^{C(n,2)}` labeled graphs
//! are exactly the integers `0..2^{C(n,2)}`. Scans split that range into
//! fixed contiguous chunks and merge partial reports in chunk order, which
//! makes the result independent of the worker count.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::binomial;
use crate::error::{Error, Result};
use crate::graph::{Graph, MarginalAnalyzer};

pub const MAX_ENUMERATION_VERTICES: usize = 10;
pub const MAX_SEARCH_VERTICES: usize = 8;
pub const WITNESS_CAP: usize = 1024;
const CHUNK: u64 = 1 << 14;

pub fn graph_count(n: usize) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

/// All labeled graphs on `n` vertices in edge-bitmask order.
pub fn enumerate_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n == 0 || n > MAX_ENUMERATION_VERTICES {
        return Err(Error::UnsupportedSize {
            n,
            max: MAX_ENUMERATION_VERTICES,
        });
    }
    Ok((0..graph_count(n)).map(move |bits| Graph::from_edge_bitmask_unchecked(n, bits)))
}

/// Condition a graph state must meet before its `k`-marginals are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefilter {
    None,
    /// All marginals on at most this many qubits are maximally mixed.
    AllMixedUpTo(usize),
    /// All marginals smaller than the counted size `k` are maximally mixed.
    BelowK,
}

impl Prefilter {
    fn threshold(&self, k: usize) -> usize {
        match *self {
            Prefilter::None => 0,
            Prefilter::AllMixedUpTo(m) => m,
            Prefilter::BelowK => k.saturating_sub(1),
        }
    }

    pub fn describe(&self, k: usize) -> String {
        match self.threshold(k) {
            0 => "none".to_string(),
            m => format!("all {m}-body marginals mixed"),
        }
    }
}

impl fmt::Display for Prefilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prefilter::None => f.write_str("none"),
            Prefilter::AllMixedUpTo(1) => f.write_str("one-body"),
            Prefilter::AllMixedUpTo(2) => f.write_str("two-body"),
            Prefilter::AllMixedUpTo(m) => write!(f, "{m}-body"),
            Prefilter::BelowK => f.write_str("below-k"),
        }
    }
}

impl FromStr for Prefilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Prefilter::None),
            "one-body" => Ok(Prefilter::AllMixedUpTo(1)),
            "two-body" => Ok(Prefilter::AllMixedUpTo(2)),
            "below-k" => Ok(Prefilter::BelowK),
            other => other
                .strip_suffix("-body")
                .and_then(|m| m.parse().ok())
                .map(Prefilter::AllMixedUpTo)
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "unknown prefilter `{other}` (none, one-body, two-body, <m>-body, below-k)"
                    ))
                }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub k: usize,
    pub prefilter: String,
    /// Scanned edge-bitmask range `[range_start, range_end)`.
    pub range_start: u64,
    pub range_end: u64,
    pub graphs_scanned: u64,
    pub graphs_passing: u64,
    /// Maximum number of mixed `k`-marginals among passing graphs.
    pub best_count: Option<usize>,
    pub max_possible: u64,
    /// Graphs attaining `best_count`, smallest bitmasks first, in `n:HEX` form.
    pub witnesses: Vec<String>,
    pub witness_total: u64,
    pub witness_overflow: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Partial {
    scanned: u64,
    passing: u64,
    best: Option<usize>,
    witnesses: Vec<u64>,
    witness_total: u64,
}

impl Partial {
    /// Associative merge; witness lists stay sorted and capped.
    fn merge(mut self, other: Partial) -> Partial {
        self.scanned += other.scanned;
        self.passing += other.passing;
        match (self.best, other.best) {
            (_, None) => {}
            (None, Some(_)) => {
                self.best = other.best;
                self.witnesses = other.witnesses;
                self.witness_total = other.witness_total;
            }
            (Some(a), Some(b)) if b > a => {
                self.best = other.best;
                self.witnesses = other.witnesses;
                self.witness_total = other.witness_total;
            }
            (Some(a), Some(b)) if a == b => {
                self.witnesses.extend(other.witnesses);
                self.witnesses.sort_unstable();
                self.witnesses.dedup();
                self.witnesses.truncate(WITNESS_CAP);
                self.witness_total += other.witness_total;
            }
            _ => {}
        }
        self
    }

    fn record(&mut self, bits: u64, count: usize) {
        match self.best {
            Some(b) if count < b => return,
            Some(b) if count == b => {}
            _ => {
                self.best = Some(count);
                self.witnesses.clear();
                self.witness_total = 0;
            }
        }
        self.witness_total += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(bits);
        }
    }
}

fn scan_chunk(n: usize, k: usize, threshold: usize, start: u64, end: u64) -> Partial {
    let mut analyzer = MarginalAnalyzer::default();
    let mut partial = Partial::default();
    for bits in start..end {
        analyzer.load(&Graph::from_edge_bitmask_unchecked(n, bits));
        partial.scanned += 1;
        if threshold > 0 && !analyzer.all_mixed(threshold) {
            continue;
        }
        partial.passing += 1;
        partial.record(bits, analyzer.mixed_count(k));
    }
    partial
}

/// Scan parameters. `jobs = 0` uses the ambient rayon pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    pub prefilter: Prefilter,
    pub jobs: usize,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, prefilter: Prefilter) -> Self {
        Self {
            n,
            k,
            prefilter,
            jobs: 0,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_SEARCH_VERTICES {
            return Err(Error::UnsupportedSize {
                n: self.n,
                max: MAX_SEARCH_VERTICES,
            });
        }
        if self.k > self.n {
            return Err(Error::InvalidArgument(format!("k = {} exceeds n = {}", self.k, self.n)));
        }
        Ok(())
    }
}

fn run_in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Scans every graph on `config.n` vertices.
pub fn search_best(config: &SearchConfig) -> Result<SearchReport> {
    search_range(config, 0, graph_count(config.n))
}

/// Scans the edge-bitmask range `[start, end)`.
pub fn search_range(config: &SearchConfig, start: u64, end: u64) -> Result<SearchReport> {
    config.validate()?;
    let total = graph_count(config.n);
    if start > end || end > total {
        return Err(Error::InvalidArgument(format!(
            "range {start}..{end} outside 0..{total}"
        )));
    }
    let (n, k) = (config.n, config.k);
    let threshold = config.prefilter.threshold(k);
    let chunks: Vec<(u64, u64)> = (start..end)
        .step_by(CHUNK as usize)
        .map(|s| (s, (s + CHUNK).min(end)))
        .collect();
    let partials: Vec<Partial> = run_in_pool(config.jobs, || {
        chunks
            .par_iter()
            .map(|&(s, e)| scan_chunk(n, k, threshold, s, e))
            .collect()
    })?;
    let merged = partials.into_iter().fold(Partial::default(), Partial::merge);
    Ok(SearchReport {
        n,
        k,
        prefilter: config.prefilter.describe(k),
        range_start: start,
        range_end: end,
        graphs_scanned: merged.scanned,
        graphs_passing: merged.passing,
        best_count: merged.best,
        max_possible: binomial(n as u64, k as u64),
        witnesses: merged
            .witnesses
            .iter()
            .map(|&b| Graph::from_edge_bitmask_unchecked(n, b).to_string())
            .collect(),
        witness_total: merged.witness_total,
        witness_overflow: merged.witness_total - merged.witnesses.len() as u64,
    })
}

impl SearchReport {
    /// Combines reports over adjacent ranges, `self` first.
    pub fn merge(self, other: SearchReport) -> Result<SearchReport> {
        if self.n != other.n || self.k != other.k || self.prefilter != other.prefilter {
            return Err(Error::InvalidArgument("reports describe different searches".into()));
        }
        if self.range_end != other.range_start {
            return Err(Error::InvalidArgument("report ranges are not adjacent".into()));
        }
        let n = self.n;
        let parse = |ws: &[String]| -> Vec<u64> {
            ws.iter()
                .map(|w| {
                    Graph::parse(w)
                        .map(|g| g.edge_bitmask() as u64)
                        .expect("witnesses are produced in n:HEX form")
                })
                .collect()
        };
        let a = Partial {
            scanned: self.graphs_scanned,
            passing: self.graphs_passing,
            best: self.best_count,
            witnesses: parse(&self.witnesses),
            witness_total: self.witness_total,
        };
        let b = Partial {
            scanned: other.graphs_scanned,
            passing: other.graphs_passing,
            best: other.best_count,
            witnesses: parse(&other.witnesses),
            witness_total: other.witness_total,
        };
        let m = a.merge(b);
        Ok(SearchReport {
            range_end: other.range_end,
            graphs_scanned: m.scanned,
            graphs_passing: m.passing,
            best_count: m.best,
            witnesses: m
                .witnesses
                .iter()
                .map(|&b| Graph::from_edge_bitmask_unchecked(n, b).to_string())
                .collect(),
            witness_total: m.witness_total,
            witness_overflow: m.witness_total - m.witnesses.len() as u64,
            ..self
        })
    }
}

/// First graph, in edge-bitmask order, whose graph state is AME.
pub fn find_ame_graph(n: usize) -> Result<Option<Graph>> {
    if n == 0 || n > MAX_SEARCH_VERTICES {
        return Err(Error::UnsupportedSize {
            n,
            max: MAX_SEARCH_VERTICES,
        });
    }
    let mut analyzer = MarginalAnalyzer::default();
    for bits in 0..graph_count(n) {
        let g = Graph::from_edge_bitmask_unchecked(n, bits);
        analyzer.load(&g);
        if analyzer.all_mixed(n / 2) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcOrbit {
    pub graphs: BTreeSet<Graph>,
    /// `false` when the breadth-first closure stopped at the size cap.
    pub complete: bool,
}

/// Breadth-first closure of `g` under local complementation, capped at `max_size` graphs.
pub fn lc_orbit(g: &Graph, max_size: usize) -> LcOrbit {
    let mut graphs = BTreeSet::from([*g]);
    let mut queue = VecDeque::from([*g]);
    while let Some(cur) = queue.pop_front() {
        for v in 0..cur.n() {
            let next = cur.local_complement(v).expect("vertex in range");
            if graphs.contains(&next) {
                continue;
            }
            if graphs.len() >= max_size {
                return LcOrbit {
                    graphs,
                    complete: false,
                };
            }
            graphs.insert(next);
            queue.push_back(next);
        }
    }
    LcOrbit {
        graphs,
        complete: true,
    }
}
