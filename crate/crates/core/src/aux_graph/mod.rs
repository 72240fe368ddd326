//! The auxiliary graph used to analyse LP decoding failures.
//!
//! Vertices `g_0..g_{n-1}` sit on a Hamiltonian line; edge `i` joins `g_i`
//! and `g_{i+1}` and costs `γ_i (1 - 2 x_i)`, the change in LP cost when code
//! bit `i` is decoded opposite to its transmitted value. Each interleaver
//! group is a zero-cost hyperedge. The last code bit has no Hamiltonian edge.
//!
//! A hyperpromenade is a multiset of atom paths (walks along the line) whose
//! endpoint counts agree across the members of every group. Its cost is the
//! sum of atom costs; a non-positive hyperpromenade witnesses possible
//! decoder failure.

mod promenade_graph;
mod windows;
mod witness;

pub use promenade_graph::{build_hyperpromenade_graph, HyperpromenadeGraph};
pub use windows::{min_cost_simple_window, WindowScan};
pub use witness::{extract_witness, is_simple, window_length, Extraction, Witness, WitnessStep};

use crate::channel::LlrVector;
use crate::encoder::{Codeword, GroupedInterleaver};
use crate::error::{Error, Result};
use crate::girth::HyperGraphLine;

#[derive(Debug, Clone, PartialEq)]
pub struct AuxGraph {
    ham_costs: Vec<f64>,
    il: GroupedInterleaver,
    prefix: Vec<f64>,
}

impl AuxGraph {
    /// `ham_costs[i]` is the cost of the edge between vertices `i` and `i + 1`.
    pub fn new(ham_costs: Vec<f64>, il: GroupedInterleaver) -> Result<Self> {
        if ham_costs.len() + 1 != il.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} Hamiltonian costs for {} vertices",
                ham_costs.len(),
                il.n()
            )));
        }
        let mut prefix = Vec::with_capacity(ham_costs.len() + 1);
        prefix.push(0.0);
        for c in &ham_costs {
            prefix.push(prefix.last().unwrap() + c);
        }
        Ok(AuxGraph { ham_costs, il, prefix })
    }

    pub fn n(&self) -> usize {
        self.il.n()
    }

    pub fn ham_costs(&self) -> &[f64] {
        &self.ham_costs
    }

    pub fn interleaver(&self) -> &GroupedInterleaver {
        &self.il
    }

    pub fn to_hypergraph(&self) -> HyperGraphLine {
        HyperGraphLine::from_interleaver(&self.il)
    }

    /// Cost of the atom path between two vertices.
    pub fn path_cost(&self, sigma: usize, tau: usize) -> f64 {
        let (a, b) = if sigma <= tau { (sigma, tau) } else { (tau, sigma) };
        // Summed directly rather than through prefix differences, so that
        // integer-valued costs stay exact.
        self.ham_costs[a..b].iter().sum()
    }

    /// Same as [`path_cost`](Self::path_cost) in O(1), up to rounding.
    pub fn path_cost_fast(&self, sigma: usize, tau: usize) -> f64 {
        let (a, b) = if sigma <= tau { (sigma, tau) } else { (tau, sigma) };
        self.prefix[b] - self.prefix[a]
    }
}

/// Edge costs `γ_i (1 - 2 x_i)` for the transmitted codeword.
pub fn build_aux_graph(codeword: &Codeword, llrs: &LlrVector, il: &GroupedInterleaver) -> Result<AuxGraph> {
    let n = il.n();
    if codeword.bits.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!("codeword has {} bits, expected {}", codeword.bits.len(), n + 1)));
    }
    if llrs.len() != n && llrs.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!("{} LLRs for block length {n}", llrs.len())));
    }
    let costs = (0..n - 1).map(|i| llrs.values[i] * (1.0 - 2.0 * f64::from(codeword.bits[i]))).collect();
    AuxGraph::new(costs, il.clone())
}

/// A walk along Hamiltonian edges between two distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomPath {
    pub sigma: usize,
    pub tau: usize,
}

impl AtomPath {
    /// Endpoints are 0-based and stored in ascending order.
    pub fn new(a: usize, b: usize) -> Self {
        AtomPath { sigma: a.min(b), tau: a.max(b) }
    }

    /// Number of Hamiltonian edges.
    pub fn len(&self) -> usize {
        self.tau - self.sigma
    }

    pub fn is_empty(&self) -> bool {
        self.sigma == self.tau
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Hyperpromenade {
    pub atoms: Vec<AtomPath>,
}

impl Hyperpromenade {
    pub fn new(atoms: Vec<AtomPath>) -> Self {
        Hyperpromenade { atoms }
    }

    /// `|B_i|`: number of atoms (with multiplicity) with an endpoint at `i`.
    pub fn endpoint_counts(&self, n: usize) -> Vec<usize> {
        let mut b = vec![0; n];
        for a in &self.atoms {
            b[a.sigma] += 1;
            b[a.tau] += 1;
        }
        b
    }

    pub fn cost(&self, theta: &AuxGraph) -> f64 {
        self.atoms.iter().map(|a| theta.path_cost(a.sigma, a.tau)).sum()
    }

    /// One atom per line as two 1-based vertices.
    pub fn to_text(&self) -> String {
        self.atoms.iter().map(|a| format!("{} {}\n", a.sigma + 1, a.tau + 1)).collect()
    }

    /// Reads the format written by [`Hyperpromenade::to_text`]; `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected two vertices, got `{line}`", lineno + 1));
            let v: Vec<usize> =
                line.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
            match v[..] {
                [a, b] if a >= 1 && b >= 1 => atoms.push(AtomPath::new(a - 1, b - 1)),
                _ => return Err(bad()),
            }
        }
        Ok(Hyperpromenade { atoms })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation {
    pub valid: bool,
    pub cost: f64,
}

fn check_atoms(theta: &AuxGraph, psi: &Hyperpromenade) -> Result<()> {
    for a in &psi.atoms {
        if a.tau >= theta.n() {
            return Err(Error::OutOfRange(format!("atom ({}, {}) with n = {}", a.sigma + 1, a.tau + 1, theta.n())));
        }
        if a.is_empty() {
            return Err(Error::InvalidHyperpromenade(format!("zero-length atom at vertex {}", a.sigma + 1)));
        }
    }
    Ok(())
}

/// Checks the endpoint-count equality on every group and sums the cost.
pub fn validate_hyperpromenade(theta: &AuxGraph, psi: &Hyperpromenade) -> Result<Validation> {
    check_atoms(theta, psi)?;
    let b = psi.endpoint_counts(theta.n());
    let valid = theta.interleaver().groups().iter().all(|g| g.iter().all(|&i| b[i] == b[g[0]]));
    Ok(Validation { valid, cost: psi.cost(theta) })
}
