//! Greedy construction of a high-girth hyperedge matching on a Hamiltonian
//! cycle.
//!
//! Starting from an empty matching `A`, each augmentation step adds one
//! hyperedge while keeping two conditions: no vertex lies in two hyperedges,
//! and the girth stays at least `g = floor(log_q n) - 1`.
//!
//! * Direct step: if `q` uncovered vertices are pairwise at distance at least
//!   `g - 1`, they form the new hyperedge.
//! * Swap step: otherwise take a maximal far-apart set `p_1..p_t` (`t < q`),
//!   pad it to `p_1..p_q` with uncovered vertices, and let `W` be the vertices
//!   outside every ball `D_{g-1}(p_i)`. Pick `s_1..s_q` in `W` sequentially,
//!   each outside the balls of the previous ones. Every `s_i` lies in some
//!   hyperedge `h_i`; `h_i` is rewired to `p_i ∪ h_i \ {s_i}` and
//!   `{s_1, .., s_q}` becomes a new hyperedge.
//!
//! When the matching covers every vertex, the edge closing the cycle is
//! removed, leaving a Hamiltonian line.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{ball_bound_covered, ball_bound_uncovered, target_girth, HyperGraphLine, Mode};
use crate::encoder::{DegreeDistribution, GroupedInterleaver};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Greedy,
    Random,
}

/// How arbitrary choices are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LowestIndex,
    Random,
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub policy: Policy,
    pub tie_break: TieBreak,
    /// Check both matching conditions, the ball bounds and the girth after
    /// every augmentation. Quadratic per step; meant for desk-scale runs.
    pub verify_steps: bool,
}

impl BuildOptions {
    pub fn greedy() -> Self {
        BuildOptions { policy: Policy::Greedy, tie_break: TieBreak::LowestIndex, verify_steps: false }
    }

    pub fn random() -> Self {
        BuildOptions { policy: Policy::Random, tie_break: TieBreak::Random, verify_steps: false }
    }

    pub fn verified(mut self) -> Self {
        self.verify_steps = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepBranch {
    Direct,
    Swap {
        /// `|W|`, the vertices outside all balls around `p_1..p_q`.
        w_size: usize,
        /// Size of the maximal far-apart set found before padding.
        t: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    /// `|A|` after the step.
    pub matching_size: usize,
    pub branch: StepBranch,
    /// Measured girth after the step (only with `verify_steps`).
    pub girth: Option<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct Construction {
    /// Final graph, in line mode.
    pub graph: HyperGraphLine,
    /// `floor(log_q n) - 1` for the greedy policy, 0 for the random one.
    pub target_girth: usize,
    /// Girth measured on the cycle before the closing edge is removed.
    pub girth_cycle: Option<usize>,
    /// Girth measured on the final line.
    pub girth: Option<usize>,
    pub steps: Vec<StepRecord>,
}

impl Construction {
    pub fn interleaver(&self) -> GroupedInterleaver {
        self.graph.to_interleaver().expect("construction covers every vertex")
    }
}

/// Matching under construction on the Hamiltonian cycle.
#[derive(Debug, Clone)]
pub struct ConstructionState {
    pub graph: HyperGraphLine,
    /// Vertices of degree 2, i.e. not covered by `A`.
    pub v2: Vec<bool>,
    pub q: usize,
    pub g: usize,
}

impl ConstructionState {
    pub fn new(n: usize, q: usize, g: usize) -> Self {
        ConstructionState { graph: HyperGraphLine::new(n, Mode::Cycle), v2: vec![true; n], q, g }
    }

    pub fn matching_size(&self) -> usize {
        self.graph.hyperedges().len()
    }

    fn ball(&self, z: usize) -> Vec<usize> {
        self.graph.restricted_distance_ball(z, self.g - 1)
    }

    // Greedily grows a set of uncovered vertices pairwise at distance >= g - 1.
    fn far_apart_set(&self, order: &[usize]) -> Vec<usize> {
        let mut blocked = vec![false; self.graph.n()];
        let mut chosen = Vec::with_capacity(self.q);
        for &v in order {
            if blocked[v] {
                continue;
            }
            chosen.push(v);
            if chosen.len() == self.q {
                break;
            }
            // distance < g - 1 is too close
            for u in self.graph.restricted_distance_ball(v, self.g.saturating_sub(2)) {
                blocked[u] = true;
            }
        }
        chosen
    }

    /// One augmentation; `|A|` grows by exactly one.
    pub fn augment<R: Rng + ?Sized>(&mut self, tie_break: TieBreak, rng: &mut R) -> Result<StepBranch> {
        let q = self.q;
        let n = self.graph.n();
        let mut order: Vec<usize> = (0..n).filter(|&v| self.v2[v]).collect();
        if order.len() < q {
            return Err(Error::Construction(format!("only {} uncovered vertices remain", order.len())));
        }
        if tie_break == TieBreak::Random {
            order.shuffle(rng);
        }
        let before = self.matching_size();
        let far = self.far_apart_set(&order);
        if far.len() == q {
            for &v in &far {
                self.v2[v] = false;
            }
            self.graph.add_hyperedge(far)?;
            debug_assert_eq!(self.matching_size(), before + 1);
            return Ok(StepBranch::Direct);
        }

        let t = far.len();
        let mut p = far;
        for &v in &order {
            if p.len() == q {
                break;
            }
            if !p.contains(&v) {
                p.push(v);
            }
        }

        let mut in_u = vec![false; n];
        let bound_v2 = ball_bound_uncovered(q, self.g - 1);
        for &pi in &p {
            let ball = self.ball(pi);
            if ball.len() > bound_v2 {
                return Err(Error::Construction(format!(
                    "ball around uncovered vertex {pi} has {} > {bound_v2} vertices",
                    ball.len()
                )));
            }
            for u in ball {
                in_u[u] = true;
            }
        }
        let mut w: Vec<usize> = (0..n).filter(|&v| !in_u[v]).collect();
        let w_size = w.len();
        // q^{g+1} - q - 2q (q^{g-1} - 1) / (q - 1)
        let w_floor = q.pow(self.g as u32 + 1) as i64 - q as i64 - (q * (bound_v2 - 1)) as i64;
        if (w_size as i64) < w_floor {
            return Err(Error::Construction(format!("|W| = {w_size} is below the guaranteed {w_floor}")));
        }
        if tie_break == TieBreak::Random {
            w.shuffle(rng);
        }

        let mut blocked = vec![false; n];
        let mut s = Vec::with_capacity(q);
        for &v in &w {
            if blocked[v] {
                continue;
            }
            s.push(v);
            if s.len() == q {
                break;
            }
            for u in self.ball(v) {
                blocked[u] = true;
            }
        }
        if s.len() < q {
            return Err(Error::Construction(format!("could only select {} of {q} far-apart vertices in W", s.len())));
        }

        let mut rewired = Vec::with_capacity(q);
        for (&si, &pi) in s.iter().zip(&p) {
            let h = self.graph.owner(si).ok_or_else(|| {
                Error::Construction(format!("vertex {si} in W is uncovered, so p_1..p_t was not maximal"))
            })?;
            if rewired.iter().any(|&(hh, _)| hh == h) {
                return Err(Error::Construction(format!("s-vertices share hyperedge {h}")));
            }
            let mut edge: Vec<usize> = self.graph.hyperedges()[h].iter().copied().filter(|&v| v != si).collect();
            edge.push(pi);
            rewired.push((h, edge));
        }
        for (h, edge) in rewired {
            self.graph.replace_hyperedge(h, edge);
        }
        for &pi in &p {
            self.v2[pi] = false;
        }
        self.graph.add_hyperedge(s)?;
        debug_assert_eq!(self.matching_size(), before + 1);
        Ok(StepBranch::Swap { w_size, t })
    }

    /// Both matching conditions plus the ball-size bounds at every vertex.
    pub fn verify(&self) -> Result<Option<usize>> {
        if !self.graph.satisfies_matching_condition() {
            return Err(Error::Construction("a vertex is incident with two hyperedges".into()));
        }
        let uncovered = self.graph.uncovered();
        let expected: Vec<usize> = (0..self.graph.n()).filter(|&v| self.v2[v]).collect();
        if uncovered != expected {
            return Err(Error::Construction("uncovered-vertex set is out of sync".into()));
        }
        let r = self.g - 1;
        for v in 0..self.graph.n() {
            let size = self.ball(v).len();
            let bound = if self.v2[v] { ball_bound_uncovered(self.q, r) } else { ball_bound_covered(self.q, r) };
            if size > bound {
                return Err(Error::Construction(format!("ball around {v} has {size} > {bound} vertices")));
            }
        }
        let girth = self.graph.girth();
        if girth.is_some_and(|g| g < self.g) {
            return Err(Error::Construction(format!("girth dropped to {girth:?} below {}", self.g)));
        }
        Ok(girth)
    }
}

/// Builds a `q`-uniform matching of `k` hyperedges on `n = q k` vertices.
pub fn build_matching<R: Rng + ?Sized>(q: usize, k: usize, opts: BuildOptions, rng: &mut R) -> Result<Construction> {
    if q < 2 || k == 0 {
        return Err(Error::Construction(format!("need q >= 2 and k >= 1, got q={q}, k={k}")));
    }
    let n = q * k;
    match opts.policy {
        Policy::Random => {
            let dd = DegreeDistribution::regular(q, k)?;
            let graph = random_irregular(&dd, rng)?;
            let girth = graph.girth();
            Ok(Construction { graph, target_girth: 0, girth_cycle: None, girth, steps: Vec::new() })
        }
        Policy::Greedy => {
            if q < 3 {
                return Err(Error::Construction("the greedy construction needs q >= 3".into()));
            }
            if n < q.pow(4) {
                return Err(Error::Construction(format!("n = {n} is below q^4 = {}", q.pow(4))));
            }
            let g = target_girth(q, n);
            let mut state = ConstructionState::new(n, q, g);
            let mut steps = Vec::with_capacity(k);
            while state.matching_size() < k {
                let before = state.matching_size();
                let branch = state.augment(opts.tie_break, rng)?;
                if state.matching_size() != before + 1 {
                    return Err(Error::Construction("augmentation did not grow the matching by one".into()));
                }
                let girth = if opts.verify_steps { Some(state.verify()?) } else { None };
                log::debug!("step {}: {:?}", state.matching_size(), branch);
                steps.push(StepRecord { matching_size: state.matching_size(), branch, girth });
            }
            let girth_cycle = state.graph.girth();
            let graph = state.graph.into_line();
            let girth = graph.girth();
            if girth_cycle.is_some_and(|gc| gc < g) {
                return Err(Error::Construction(format!("final girth {girth_cycle:?} below target {g}")));
            }
            Ok(Construction { graph, target_girth: g, girth_cycle, girth, steps })
        }
    }
}

/// Uniformly random partition of the positions into groups of sizes `q_t`,
/// on a Hamiltonian line. Group `t` receives degree `q_t`.
pub fn random_irregular<R: Rng + ?Sized>(dd: &DegreeDistribution, rng: &mut R) -> Result<HyperGraphLine> {
    let n = dd.n();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::with_capacity(dd.k());
    let mut at = 0;
    for &q in dd.degrees() {
        edges.push(perm[at..at + q].to_vec());
        at += q;
    }
    HyperGraphLine::with_hyperedges(n, Mode::Line, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(build_matching(3, 26, BuildOptions::greedy(), &mut rng).is_err());
        assert!(build_matching(2, 64, BuildOptions::greedy(), &mut rng).is_err());
    }

    #[test]
    fn random_policy_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = build_matching(4, 10, BuildOptions::random(), &mut rng).unwrap();
        let il = c.interleaver();
        assert_eq!(il.n(), 40);
        assert!(il.groups().iter().all(|g| g.len() == 4));
    }

    #[test]
    fn greedy_q3_n81_meets_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = build_matching(3, 27, BuildOptions::greedy().verified(), &mut rng).unwrap();
        assert_eq!(c.target_girth, 3);
        assert_eq!(c.graph.hyperedges().len(), 27);
        assert!(c.girth.unwrap() >= 3);
        assert!(c.girth.unwrap() >= c.girth_cycle.unwrap());
        for (i, s) in c.steps.iter().enumerate() {
            assert_eq!(s.matching_size, i + 1);
            assert!(s.girth.unwrap().is_none_or(|g| g >= 3));
        }
    }

    #[test]
    fn greedy_is_deterministic() {
        let a = build_matching(3, 27, BuildOptions::greedy(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = build_matching(3, 27, BuildOptions::greedy(), &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(a.interleaver(), b.interleaver());
    }

    #[test]
    fn random_tie_break_still_meets_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let opts = BuildOptions { tie_break: TieBreak::Random, ..BuildOptions::greedy() }.verified();
        let c = build_matching(3, 27, opts, &mut rng).unwrap();
        assert!(c.girth.unwrap() >= 3);
    }
}
