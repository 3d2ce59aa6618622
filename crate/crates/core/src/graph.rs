//! Simple graphs, their graph states and stabilizer groups.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::bits::{edge_index, k_subsets};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::state::{StateVector, MAX_STATE_QUBITS};

pub const MAX_VERTICES: usize = 16;

/// Simple undirected graph stored as per-vertex neighbor masks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: [u16; MAX_VERTICES],
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}, {:?})", self.n, self.edges())
    }
}

impl fmt::Display for Graph {
    /// Compact `n:HEX` edge-bitmask form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:x}", self.n, self.edge_bitmask())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::UnsupportedSize {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(Self {
            n,
            adj: [0; MAX_VERTICES],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inverse of [`Graph::edge_bitmask`]; bit `edge_index(u, v)` marks edge `{u, v}`.
    pub fn from_edge_bitmask(n: usize, bits: u128) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let slots = n * (n - 1) / 2;
        if slots < 128 && bits >> slots != 0 {
            return Err(Error::InvalidArgument(format!(
                "edge bitmask {bits:x} has bits beyond the {slots} pairs of {n} vertices"
            )));
        }
        for v in 1..n {
            for u in 0..v {
                if bits >> edge_index(u, v) & 1 == 1 {
                    g.adj[u] |= 1 << v;
                    g.adj[v] |= 1 << u;
                }
            }
        }
        Ok(g)
    }

    /// Fast constructor for the enumeration loop; `bits` must fit `n`.
    pub(crate) fn from_edge_bitmask_unchecked(n: usize, bits: u64) -> Self {
        let mut adj = [0u16; MAX_VERTICES];
        let mut idx = 0;
        for v in 1..n {
            for u in 0..v {
                if bits >> idx & 1 == 1 {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
                idx += 1;
            }
        }
        Self { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v] as u32
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.n].iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_bitmask(&self) -> u128 {
        self.edges()
            .into_iter()
            .fold(0u128, |acc, (u, v)| acc | 1u128 << edge_index(u, v))
    }

    /// Complements the subgraph induced on the neighborhood of `v`.
    pub fn local_complement(&self, v: usize) -> Result<Self> {
        self.check_vertex(v)?;
        let nv = self.adj[v];
        let mut out = *self;
        let mut rest = nv;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            out.adj[u] ^= nv & !(1 << u);
            rest &= rest - 1;
        }
        Ok(out)
    }

    /// Image of the graph under the vertex relabeling `v ↦ perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidArgument("permutation length differs from n".into()));
        }
        let mut g = Self::empty(self.n)?;
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v])?;
        }
        Ok(g)
    }

    /// `(∏ CZ_{jk}) |+⟩^{⊗n}`; every amplitude is `±2^{-n/2}`.
    pub fn graph_state_vector(&self) -> Result<StateVector> {
        if self.n > MAX_STATE_QUBITS {
            return Err(Error::UnsupportedSize {
                n: self.n,
                max: MAX_STATE_QUBITS,
            });
        }
        let amp = (0.5f64).powf(self.n as f64 / 2.0);
        let amps = (0..1usize << self.n)
            .map(|b| {
                let twice_edges: u32 = (0..self.n)
                    .filter(|&j| b >> j & 1 == 1)
                    .map(|j| (self.adj[j] as usize & b).count_ones())
                    .sum();
                let sign = if (twice_edges / 2) % 2 == 1 { -1.0 } else { 1.0 };
                Complex64::new(sign * amp, 0.0)
            })
            .collect();
        StateVector::new(self.n, amps)
    }

    /// Generators `K_j = X_j ∏_{k ∈ N(j)} Z_k`.
    pub fn stabilizer_generators(&self) -> StabilizerGroup {
        let generators = (0..self.n)
            .map(|j| PauliOperator::from_raw(self.n, 1 << j, self.adj[j] as u32, 0))
            .collect();
        StabilizerGroup {
            n: self.n,
            generators,
        }
    }

    /// Supports of all `2^n` stabilizer elements, indexed by generator subset.
    pub fn stabilizer_supports_into(&self, out: &mut Vec<u32>) {
        let size = 1usize << self.n;
        out.clear();
        out.reserve(size);
        let mut zs: Vec<u32> = Vec::with_capacity(size);
        zs.push(0);
        out.push(0);
        for s in 1..size {
            let low = s.trailing_zeros() as usize;
            let z = zs[s & (s - 1)] ^ self.adj[low] as u32;
            zs.push(z);
            out.push(s as u32 | z);
        }
    }

    /// Fast marginal analysis via stabilizer supports.
    pub fn marginal_analyzer(&self) -> MarginalAnalyzer {
        let mut a = MarginalAnalyzer::default();
        a.load(self);
        a
    }

    /// Which `k`-subset marginals of the graph state are maximally mixed.
    pub fn stabilizer_marginal_report(&self, k: usize) -> Result<MarginalReport> {
        if k > self.n {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {}", self.n)));
        }
        let analyzer = self.marginal_analyzer();
        let mixed: BTreeMap<u32, bool> = k_subsets(self.n, k)
            .map(|s| (s, analyzer.is_mixed(s)))
            .collect();
        let count = mixed.values().filter(|&&m| m).count();
        Ok(MarginalReport {
            n: self.n,
            k,
            mixed,
            count,
        })
    }

    /// Sector lengths of the graph state: the weight distribution of its stabilizer group.
    pub fn sector_lengths(&self) -> Vec<u64> {
        let mut supports = vec![];
        self.stabilizer_supports_into(&mut supports);
        let mut dist = vec![0u64; self.n + 1];
        for s in supports {
            dist[s.count_ones() as usize] += 1;
        }
        dist
    }

    /// Plain-text form: first line `n`, then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parses either the plain-text edge list or the compact `n:HEX` form.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph description".into()))?;
        if let Some((n, hex)) = first.split_once(':') {
            if lines.next().is_some() {
                return Err(Error::Parse("trailing content after compact graph form".into()));
            }
            let n = parse_usize(n)?;
            let bits = u128::from_str_radix(hex.trim(), 16)
                .map_err(|e| Error::Parse(format!("bad edge bitmask `{hex}`: {e}")))?;
            return Self::from_edge_bitmask(n, bits);
        }
        let n = parse_usize(first)?;
        let mut g = Self::empty(n)?;
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("expected `u v`, got `{line}`")));
            };
            g.add_edge(parse_usize(u)?, parse_usize(v)?)?;
        }
        Ok(g)
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a non-negative integer, got `{s}`")))
}

/// Reusable table answering "is the marginal on subset S maximally mixed?"
/// for one graph state. A marginal is maximally mixed iff no nontrivial
/// stabilizer element is supported within the subset.
#[derive(Default, Clone)]
pub struct MarginalAnalyzer {
    n: usize,
    supports: Vec<u32>,
    /// `blocked[m]` is set when some nontrivial element has support exactly `m`.
    blocked: Vec<bool>,
}

impl MarginalAnalyzer {
    pub fn load(&mut self, g: &Graph) {
        self.n = g.n;
        g.stabilizer_supports_into(&mut self.supports);
        self.blocked.clear();
        self.blocked.resize(1 << g.n, false);
        for &s in &self.supports[1..] {
            self.blocked[s as usize] = true;
        }
    }

    pub fn is_mixed(&self, subset: u32) -> bool {
        let mut sub = subset;
        loop {
            if sub != 0 && self.blocked[sub as usize] {
                return false;
            }
            if sub == 0 {
                return true;
            }
            sub = (sub - 1) & subset;
        }
    }

    /// Smallest weight of a nontrivial stabilizer element; `n + 1` when none.
    pub fn min_weight(&self) -> usize {
        self.supports[1..]
            .iter()
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap_or(self.n + 1)
    }

    /// All marginals of size `m` are maximally mixed.
    pub fn all_mixed(&self, m: usize) -> bool {
        self.min_weight() > m
    }

    pub fn mixed_count(&self, k: usize) -> usize {
        if self.all_mixed(k) {
            return crate::bits::binomial(self.n as u64, k as u64) as usize;
        }
        k_subsets(self.n, k).filter(|&s| self.is_mixed(s)).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalReport {
    pub n: usize,
    pub k: usize,
    /// Subset bitmask to maximally-mixed flag.
    pub mixed: BTreeMap<u32, bool>,
    pub count: usize,
}

impl MarginalReport {
    pub fn failing(&self) -> Vec<u32> {
        self.mixed.iter().filter(|(_, &m)| !m).map(|(&s, _)| s).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOperator>,
}

impl StabilizerGroup {
    /// Checks that the generators commute, are Hermitian and independent
    /// without generating `−I`.
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self> {
        for g in &generators {
            if g.n() != n {
                return Err(Error::DimensionMismatch(g.n(), n));
            }
            if !g.is_hermitian() {
                return Err(Error::NonHermitian(g.phase_exp()));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            if generators[i + 1..].iter().any(|b| a.anticommutes(b)) {
                return Err(Error::InvalidArgument(format!("generator {a} does not commute")));
            }
        }
        if generators.len() > n {
            return Err(Error::InvalidArgument("more generators than qubits".into()));
        }
        let group = Self { n, generators };
        let elements = group.elements();
        if elements[1..].iter().any(|e| e.is_identity()) {
            return Err(Error::InvalidArgument(
                "generators are dependent or produce -I".into(),
            ));
        }
        Ok(group)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// All `2^g` products of generator subsets with exact signs; element `s`
    /// is the product of the generators whose indices are set in `s`.
    pub fn elements(&self) -> Vec<PauliOperator> {
        let size = 1usize << self.generators.len();
        let mut out = Vec::with_capacity(size);
        out.push(PauliOperator::from_raw(self.n, 0, 0, 0));
        for s in 1..size {
            let low = s.trailing_zeros() as usize;
            let prev = out[s & (s - 1)];
            out.push(prev.mul_unchecked(&self.generators[low]));
        }
        out
    }
}
