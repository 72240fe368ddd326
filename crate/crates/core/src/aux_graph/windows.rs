use rayon::prelude::*;

use super::AuxGraph;
use crate::error::{Error, Result};

/// Largest search tolerated by [`min_cost_simple_window`], measured as
/// `n (2 q_max - 1)^L`.
pub const MAX_WINDOW_WORK: f64 = 2e8;

#[derive(Debug, Clone, PartialEq)]
pub struct WindowScan {
    /// `+inf` when there is no window.
    pub min_cost: f64,
    /// Undirected simple paths and cycles with exactly `L` Hamiltonian edges.
    pub count: u64,
    /// Vertex sequence of the cheapest window, lexicographically smallest on ties.
    pub argmin: Vec<usize>,
}

const HAM: usize = 0;
const HOP: usize = 1;

/// Walks are stored as `v0, t1, v1, t2, v2, ...` with `t` either `HAM` or
/// `HOP`, so that a walk and its reverse compare as token lists.
struct Search<'a> {
    theta: &'a AuxGraph,
    len: usize,
    used: Vec<bool>,
    path: Vec<usize>,
    best_cost: f64,
    best_path: Vec<usize>,
    count: u64,
}

impl Search<'_> {
    /// Both orientations of every window are generated; keep the one whose
    /// token sequence is not larger than its reverse.
    fn record(&mut self, cost: f64) {
        let p = &self.path;
        if p.iter().rev().lt(p.iter()) {
            return;
        }
        self.count += 1;
        if cost < self.best_cost || (cost == self.best_cost && *p < self.best_path) {
            self.best_cost = cost;
            self.best_path = p.clone();
        }
    }

    fn ham_from(&mut self, v: usize, cost: f64, hams: usize) {
        let n = self.theta.n();
        let below = v.checked_sub(1).map(|u| (u, u));
        let above = (v + 1 < n).then_some((v, v + 1));
        for (edge, next) in [below, above].into_iter().flatten() {
            if self.used[edge] {
                continue;
            }
            self.used[edge] = true;
            self.path.extend([HAM, next]);
            self.after_ham(next, cost + self.theta.ham_costs()[edge], hams + 1);
            self.path.truncate(self.path.len() - 2);
            self.used[edge] = false;
        }
    }

    fn after_ham(&mut self, v: usize, cost: f64, hams: usize) {
        if hams == self.len {
            self.record(cost);
            return;
        }
        self.ham_from(v, cost, hams);
        let il = self.theta.interleaver();
        let group = il.group(il.group_of(v));
        for &w in group {
            if w != v {
                self.path.extend([HOP, w]);
                self.ham_from(w, cost, hams);
                self.path.truncate(self.path.len() - 2);
            }
        }
    }
}

/// Enumerates every simple path or cycle that starts and ends with a
/// Hamiltonian edge and contains exactly `len` of them, and returns the
/// cheapest along with the count.
///
/// Walks never take the same Hamiltonian edge twice, never hop twice in a
/// row, and never repeat a Hamiltonian edge. Each undirected window is
/// counted once.
pub fn min_cost_simple_window(theta: &AuxGraph, len: usize) -> Result<WindowScan> {
    let n = theta.n();
    if len == 0 {
        return Err(Error::OutOfRange("window length must be positive".into()));
    }
    let q_max = theta.interleaver().groups().iter().map(Vec::len).max().unwrap_or(1) as f64;
    let work = n as f64 * (2.0 * q_max - 1.0).powi(len as i32);
    if work > MAX_WINDOW_WORK {
        return Err(Error::ScaleGuard(format!("n = {n}, L = {len}: about {work:.2e} walks")));
    }
    let per_start: Vec<(f64, Vec<usize>, u64)> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut s = Search {
                theta,
                len,
                used: vec![false; n.saturating_sub(1)],
                path: vec![v],
                best_cost: f64::INFINITY,
                best_path: Vec::new(),
                count: 0,
            };
            s.ham_from(v, 0.0, 0);
            (s.best_cost, s.best_path, s.count)
        })
        .collect();
    let (mut best_cost, mut best_path, mut count) = (f64::INFINITY, Vec::new(), 0);
    for (c, p, k) in per_start {
        count += k;
        if c < best_cost || (c == best_cost && p < best_path) {
            best_cost = c;
            best_path = p;
        }
    }
    Ok(WindowScan { min_cost: best_cost, count, argmin: best_path.into_iter().step_by(2).collect() })
}
