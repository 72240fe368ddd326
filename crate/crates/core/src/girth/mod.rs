//! Hypergraphs made of a Hamiltonian cycle (or line) plus a matching of
//! hyperedges, with distances and girth measured under the rule that the same
//! edge or hyperedge is never used twice in a row.
//!
//! The rule forbids U-turns on Hamiltonian edges and "roundabouts" inside one
//! hyperedge. A search state is therefore a vertex together with the kind of
//! edge it was entered through; a vertex has at most one hyperedge, so the
//! kind identifies the edge.

mod construct;
mod file;

pub use construct::{
    build_matching, random_irregular, BuildOptions, Construction, ConstructionState, Policy, StepBranch, StepRecord,
    TieBreak,
};
pub use file::{parse_interleaver, write_interleaver};

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::encoder::GroupedInterleaver;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Cycle,
    Line,
}

// Edge kinds through which a vertex can be entered.
const FROM_NONE: usize = 0;
const FROM_LEFT: usize = 1;
const FROM_RIGHT: usize = 2;
const FROM_HYPER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperGraphLine {
    n: usize,
    mode: Mode,
    hyperedges: Vec<Vec<usize>>,
    owner: Vec<Option<usize>>,
}

impl HyperGraphLine {
    /// Vertices `0..n` on a cycle (or line) with no hyperedges.
    pub fn new(n: usize, mode: Mode) -> Self {
        HyperGraphLine { n, mode, hyperedges: Vec::new(), owner: vec![None; n] }
    }

    /// Builds a graph from hyperedges, enforcing that no vertex is in two of them.
    pub fn with_hyperedges(n: usize, mode: Mode, hyperedges: Vec<Vec<usize>>) -> Result<Self> {
        let mut g = Self::new(n, mode);
        for h in hyperedges {
            g.add_hyperedge(h)?;
        }
        Ok(g)
    }

    pub fn from_interleaver(il: &GroupedInterleaver) -> Self {
        Self::with_hyperedges(il.n(), Mode::Line, il.groups().to_vec()).expect("interleaver groups are disjoint")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    pub fn owner(&self, v: usize) -> Option<usize> {
        self.owner[v]
    }

    /// Number of Hamiltonian edges.
    pub fn hamiltonian_edge_count(&self) -> usize {
        match self.mode {
            Mode::Cycle => self.n,
            Mode::Line => self.n.saturating_sub(1),
        }
    }

    pub fn add_hyperedge(&mut self, mut h: Vec<usize>) -> Result<usize> {
        h.sort_unstable();
        h.dedup();
        if h.len() < 2 {
            return Err(Error::Construction("a hyperedge needs at least two vertices".into()));
        }
        let id = self.hyperedges.len();
        for &v in &h {
            if v >= self.n {
                return Err(Error::Construction(format!("vertex {v} out of range")));
            }
            if self.owner[v].is_some() {
                return Err(Error::Construction(format!("vertex {v} is already incident with a hyperedge")));
            }
        }
        for &v in &h {
            self.owner[v] = Some(id);
        }
        self.hyperedges.push(h);
        Ok(id)
    }

    /// Replaces hyperedge `id` in place (used by the rewiring swap).
    pub(crate) fn replace_hyperedge(&mut self, id: usize, mut h: Vec<usize>) {
        for &v in &self.hyperedges[id] {
            if self.owner[v] == Some(id) {
                self.owner[v] = None;
            }
        }
        h.sort_unstable();
        for &v in &h {
            self.owner[v] = Some(id);
        }
        self.hyperedges[id] = h;
    }

    /// Drops the Hamiltonian edge between the last and first vertex.
    pub fn into_line(mut self) -> Self {
        self.mode = Mode::Line;
        self
    }

    /// No vertex lies in two hyperedges and the owner table agrees with the edge list.
    pub fn satisfies_matching_condition(&self) -> bool {
        let mut seen = vec![None; self.n];
        for (id, h) in self.hyperedges.iter().enumerate() {
            for &v in h {
                if seen[v].is_some() {
                    return false;
                }
                seen[v] = Some(id);
            }
        }
        seen == self.owner
    }

    /// Vertices not incident with any hyperedge, ascending.
    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.owner[v].is_none()).collect()
    }

    // Calls `f(next_vertex, entered_from)` for every move allowed out of
    // `v` when `v` was entered through `from`.
    #[inline]
    fn for_each_move(&self, v: usize, from: usize, mut f: impl FnMut(usize, usize)) {
        let n = self.n;
        if from != FROM_LEFT {
            let left = match (v, self.mode) {
                (0, Mode::Cycle) => Some(n - 1),
                (0, Mode::Line) => None,
                _ => Some(v - 1),
            };
            if let Some(u) = left {
                f(u, FROM_RIGHT);
            }
        }
        if from != FROM_RIGHT {
            let right = if v + 1 < n {
                Some(v + 1)
            } else if self.mode == Mode::Cycle {
                Some(0)
            } else {
                None
            };
            if let Some(u) = right {
                f(u, FROM_LEFT);
            }
        }
        if from != FROM_HYPER {
            if let Some(h) = self.owner[v] {
                for &u in &self.hyperedges[h] {
                    if u != v {
                        f(u, FROM_HYPER);
                    }
                }
            }
        }
    }

    /// Restricted distances from `z`, truncated at `radius`; `None` beyond it.
    pub fn distances_from(&self, z: usize, radius: usize) -> Vec<Option<usize>> {
        let mut vertex_dist = vec![None; self.n];
        let mut state_seen = vec![false; self.n * 4];
        let mut queue = VecDeque::new();
        vertex_dist[z] = Some(0);
        state_seen[z * 4 + FROM_NONE] = true;
        queue.push_back((z, FROM_NONE, 0usize));
        while let Some((v, from, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            self.for_each_move(v, from, |u, entered| {
                let s = u * 4 + entered;
                if !state_seen[s] {
                    state_seen[s] = true;
                    if vertex_dist[u].is_none() {
                        vertex_dist[u] = Some(d + 1);
                    }
                    queue.push_back((u, entered, d + 1));
                }
            });
        }
        vertex_dist
    }

    /// The ball `D_r(z)`: vertices at restricted distance at most `r`, ascending.
    pub fn restricted_distance_ball(&self, z: usize, r: usize) -> Vec<usize> {
        self.distances_from(z, r).iter().enumerate().filter_map(|(v, d)| d.map(|_| v)).collect()
    }

    /// Restricted distance between two vertices, `None` if unreachable.
    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        self.distances_from(a, self.n * 4)[b]
    }

    /// Length of the shortest closed walk through `z`, if any is shorter than `cap`.
    fn shortest_cycle_through(&self, z: usize, cap: usize) -> Option<usize> {
        let mut state_seen = vec![false; self.n * 4];
        let mut queue = VecDeque::new();
        state_seen[z * 4 + FROM_NONE] = true;
        queue.push_back((z, FROM_NONE, 0usize));
        while let Some((v, from, d)) = queue.pop_front() {
            if d + 1 >= cap {
                return None;
            }
            let mut closed = false;
            self.for_each_move(v, from, |u, entered| {
                if u == z {
                    closed = true;
                    return;
                }
                let s = u * 4 + entered;
                if !state_seen[s] {
                    state_seen[s] = true;
                    queue.push_back((u, entered, d + 1));
                }
            });
            if closed {
                return Some(d + 1);
            }
        }
        None
    }

    /// Girth: the length of the shortest cycle, `None` when there is none.
    pub fn girth(&self) -> Option<usize> {
        // A cycle through z has length at most n * 4 states.
        let cap = self.n * 4 + 2;
        (0..self.n).into_par_iter().filter_map(|z| self.shortest_cycle_through(z, cap)).min()
    }

    /// Converts a line-mode graph whose hyperedges cover every vertex.
    pub fn to_interleaver(&self) -> Result<GroupedInterleaver> {
        matching_to_interleaver(self)
    }
}

/// Group `t` is the `t`-th hyperedge by smallest vertex.
pub fn matching_to_interleaver(graph: &HyperGraphLine) -> Result<GroupedInterleaver> {
    if graph.mode != Mode::Line {
        return Err(Error::InvalidInterleaver("the matching must be on a Hamiltonian line".into()));
    }
    if let Some(v) = (0..graph.n).find(|&v| graph.owner[v].is_none()) {
        return Err(Error::UncoveredVertex(v + 1));
    }
    let mut groups: Vec<Vec<usize>> = graph
        .hyperedges
        .iter()
        .map(|h| {
            let mut h = h.clone();
            h.sort_unstable();
            h
        })
        .collect();
    groups.sort_by_key(|h| h[0]);
    GroupedInterleaver::new(groups, graph.n)
}

/// `1 + 2 (q^{r} - 1) / (q - 1)`: ball of radius `r` around a vertex without hyperedge.
pub fn ball_bound_uncovered(q: usize, r: usize) -> usize {
    1 + 2 * geometric_sum(q, r)
}

/// `1 + (1 + q) (q^{r} - 1) / (q - 1)`: ball of radius `r` around a covered vertex.
pub fn ball_bound_covered(q: usize, r: usize) -> usize {
    1 + (1 + q) * geometric_sum(q, r)
}

// 1 + q + ... + q^{r-1}
fn geometric_sum(q: usize, r: usize) -> usize {
    (0..r).map(|i| q.pow(i as u32)).sum()
}

/// `floor(log_q n)` computed in integers.
pub fn floor_log(q: usize, n: usize) -> usize {
    assert!(q >= 2 && n >= 1);
    let mut e = 0;
    let mut p = 1usize;
    while p.checked_mul(q).is_some_and(|np| np <= n) {
        p *= q;
        e += 1;
    }
    e
}

/// Target girth `floor(log_q n) - 1` of the greedy construction.
pub fn target_girth(q: usize, n: usize) -> usize {
    floor_log(q, n).saturating_sub(1)
}
