use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use super::{build_hyperpromenade_graph, validate_hyperpromenade, AtomPath, AuxGraph, Hyperpromenade};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessStep {
    /// Hamiltonian edge `edge`, which joins vertices `edge` and `edge + 1`.
    Ham { edge: usize, from: usize, to: usize },
    /// Move between two members of the same group.
    Hop { group: usize, from: usize, to: usize },
}

impl WitnessStep {
    pub fn from(&self) -> usize {
        match *self {
            WitnessStep::Ham { from, .. } | WitnessStep::Hop { from, .. } => from,
        }
    }

    pub fn to(&self) -> usize {
        match *self {
            WitnessStep::Ham { to, .. } | WitnessStep::Hop { to, .. } => to,
        }
    }

    pub fn is_ham(&self) -> bool {
        matches!(self, WitnessStep::Ham { .. })
    }
}

/// A simple path or cycle of non-positive cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub steps: Vec<WitnessStep>,
    pub cost: f64,
}

impl Witness {
    pub fn ham_edges(&self) -> usize {
        self.steps.iter().filter(|s| s.is_ham()).count()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        if let Some(first) = self.steps.first() {
            v.push(first.from());
        }
        v.extend(self.steps.iter().map(WitnessStep::to));
        v
    }

    /// Text form with 1-based labels: a cost line, then one line per step,
    /// `H <edge>` for a Hamiltonian edge or `X <group>` for a hop.
    pub fn dump(&self) -> String {
        let mut out = format!("cost={}\n", self.cost);
        for s in &self.steps {
            match *s {
                WitnessStep::Ham { edge, from, to } => writeln!(out, "H {} {} {}", edge + 1, from + 1, to + 1),
                WitnessStep::Hop { group, from, to } => writeln!(out, "X {} {} {}", group + 1, from + 1, to + 1),
            }
            .expect("write to string");
        }
        out
    }
}

/// Number of Hamiltonian edges in a witness window for girth `g`.
///
/// `g / 2` for even `g`. For odd `g` the window can be one edge longer: two
/// visits to the same Hamiltonian edge inside `⌈g/2⌉` Hamiltonian edges close
/// a cycle of length at most `2⌈g/2⌉ - 2 = g - 1`.
pub fn window_length(g: usize) -> usize {
    g.div_ceil(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub witness: Witness,
    pub window_len: usize,
    /// Closed walk through every atom of the chosen component, hops included.
    pub tour: Vec<WitnessStep>,
    /// Cost of each cyclic window of `window_len` Hamiltonian edges of the tour.
    pub window_costs: Vec<f64>,
    pub component_cost: f64,
}

/// Checks that `steps` form a path that never uses the same edge or
/// hyperedge twice in a row and never repeats a Hamiltonian edge, with
/// exactly `ham_edges` Hamiltonian edges.
pub fn is_simple(theta: &AuxGraph, steps: &[WitnessStep], ham_edges: usize) -> bool {
    let n = theta.n();
    let il = theta.interleaver();
    let mut seen = HashSet::new();
    let mut count = 0;
    for (i, s) in steps.iter().enumerate() {
        if i > 0 && steps[i - 1].to() != s.from() {
            return false;
        }
        match *s {
            WitnessStep::Ham { edge, from, to } => {
                if edge + 1 >= n {
                    return false;
                }
                let ends = (from == edge && to == edge + 1) || (from == edge + 1 && to == edge);
                if !ends || !seen.insert(edge) {
                    return false;
                }
                count += 1;
            }
            WitnessStep::Hop { group, from, to } => {
                if from >= n || to >= n || from == to {
                    return false;
                }
                if il.group_of(from) != group || il.group_of(to) != group {
                    return false;
                }
                if i > 0 && !steps[i - 1].is_ham() {
                    return false;
                }
            }
        }
    }
    count == ham_edges
}

/// End `2a` is where atom `a` leaves its lower vertex heading right; end
/// `2a + 1` is where it arrives at its upper vertex from the left.
fn end_vertex(atoms: &[AtomPath], e: usize) -> usize {
    if e.is_multiple_of(2) {
        atoms[e / 2].sigma
    } else {
        atoms[e / 2].tau
    }
}

/// Two ends may be paired only if they differ in vertex or side, so that the
/// walk through the group is neither a U-turn nor a standstill.
fn class(atoms: &[AtomPath], e: usize) -> (usize, usize) {
    (end_vertex(atoms, e), e % 2)
}

/// Closed trails induced by a pairing of atom ends; each is a list of
/// departure ends.
fn trails(partner: &[usize]) -> Vec<Vec<usize>> {
    let m = partner.len() / 2;
    let mut visited = vec![false; m];
    let mut out = Vec::new();
    for a in 0..m {
        if visited[a] {
            continue;
        }
        let start = 2 * a;
        let mut trail = Vec::new();
        let mut d = start;
        loop {
            visited[d / 2] = true;
            trail.push(d);
            d = partner[d ^ 1];
            if d == start {
                break;
            }
        }
        out.push(trail);
    }
    out
}

/// Compatible Euler tour of the contracted multigraph: ends at each group
/// node are paired so that paired ends differ in class, then the resulting
/// closed trails are spliced at shared nodes until one remains.
fn compatible_tour(theta: &AuxGraph, atoms: &[AtomPath]) -> Result<Vec<usize>> {
    let il = theta.interleaver();
    let mut at_node: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in 0..2 * atoms.len() {
        at_node.entry(il.group_of(end_vertex(atoms, e))).or_default().push(e);
    }
    let mut partner = vec![usize::MAX; 2 * atoms.len()];
    for (t, ends) in at_node.iter_mut() {
        let m = ends.len();
        if m % 2 == 1 {
            return Err(Error::Witness(format!("group {} has odd contracted degree {m}", t + 1)));
        }
        ends.sort_by_key(|&e| (class(atoms, e), e));
        for i in 0..m / 2 {
            let (x, y) = (ends[i], ends[i + m / 2]);
            if class(atoms, x) == class(atoms, y) {
                return Err(Error::Witness(format!("group {} has a dominant endpoint class", t + 1)));
            }
            partner[x] = y;
            partner[y] = x;
        }
    }

    loop {
        let ts = trails(&partner);
        if ts.len() == 1 {
            return Ok(ts.into_iter().next().expect("one trail"));
        }
        let mut trail_of = vec![0; atoms.len()];
        for (i, t) in ts.iter().enumerate() {
            for &d in t {
                trail_of[d / 2] = i;
            }
        }
        let mut spliced = false;
        'nodes: for ends in at_node.values() {
            let x1 = ends[0];
            for &y1 in ends {
                if trail_of[y1 / 2] != trail_of[x1 / 2] {
                    let (x2, y2) = (partner[x1], partner[y1]);
                    let ok = |a: usize, b: usize| class(atoms, a) != class(atoms, b);
                    let (a, b, c, d) = if ok(x1, y2) && ok(y1, x2) { (x1, y2, y1, x2) } else { (x1, y1, x2, y2) };
                    partner[a] = b;
                    partner[b] = a;
                    partner[c] = d;
                    partner[d] = c;
                    spliced = true;
                    break 'nodes;
                }
            }
        }
        if !spliced {
            return Err(Error::Witness("component is not connected".into()));
        }
    }
}

/// Expands a tour of departure ends into Hamiltonian steps and hops.
fn expand_tour(theta: &AuxGraph, atoms: &[AtomPath], tour: &[usize]) -> Vec<WitnessStep> {
    let il = theta.interleaver();
    let mut steps = Vec::new();
    for (i, &d) in tour.iter().enumerate() {
        let (from, to) = (end_vertex(atoms, d), end_vertex(atoms, d ^ 1));
        if from < to {
            steps.extend((from..to).map(|e| WitnessStep::Ham { edge: e, from: e, to: e + 1 }));
        } else {
            steps.extend((to..from).rev().map(|e| WitnessStep::Ham { edge: e, from: e + 1, to: e }));
        }
        let next = end_vertex(atoms, tour[(i + 1) % tour.len()]);
        if next != to {
            steps.push(WitnessStep::Hop { group: il.group_of(to), from: to, to: next });
        }
    }
    steps
}

/// Finds a simple path or cycle with [`window_length`]`(g)` Hamiltonian
/// edges and cost at most 0 inside a non-positive hyperpromenade.
///
/// Requires every group to have even size and the hypergraph girth to be at
/// least `g`. When the hyperpromenade graph is disconnected the cheapest
/// component is used.
pub fn extract_witness(theta: &AuxGraph, psi: &Hyperpromenade, g: usize) -> Result<Extraction> {
    let v = validate_hyperpromenade(theta, psi)?;
    if !v.valid {
        return Err(Error::InvalidHyperpromenade("endpoint counts differ inside a group".into()));
    }
    if psi.atoms.is_empty() {
        return Err(Error::InvalidHyperpromenade("no atoms".into()));
    }
    let scale: f64 = theta.ham_costs().iter().map(|c| c.abs()).sum::<f64>().max(1.0);
    let tol = 1e-9 * scale;
    if v.cost > tol {
        return Err(Error::Witness(format!("hyperpromenade cost {} is positive", v.cost)));
    }
    if let Some(t) = theta.interleaver().groups().iter().position(|g| g.len() % 2 == 1) {
        return Err(Error::Witness(format!("group {} has odd size", t + 1)));
    }
    if g < 2 {
        return Err(Error::Witness(format!("girth {g} is below 2")));
    }
    if let Some(measured) = theta.to_hypergraph().girth() {
        if measured < g {
            return Err(Error::Witness(format!("measured girth {measured} is below {g}")));
        }
    }

    let pg = build_hyperpromenade_graph(theta, psi)?;
    let best = (0..pg.components.len())
        .min_by(|&a, &b| pg.component_cost(a).total_cmp(&pg.component_cost(b)))
        .expect("at least one component");
    let atoms: Vec<AtomPath> = pg.components[best].iter().map(|&i| pg.atoms[i]).collect();
    let component_cost = pg.component_cost(best);

    let tour = expand_tour(theta, &atoms, &compatible_tour(theta, &atoms)?);
    let ham_pos: Vec<usize> = (0..tour.len()).filter(|&i| tour[i].is_ham()).collect();
    let h = ham_pos.len();
    let len = window_length(g);
    if h < len {
        return Err(Error::Witness(format!("closed walk has {h} Hamiltonian edges, fewer than {len}")));
    }
    let cost_at = |i: usize| match tour[ham_pos[i]] {
        WitnessStep::Ham { edge, .. } => theta.ham_costs()[edge],
        WitnessStep::Hop { .. } => unreachable!(),
    };
    let window_costs: Vec<f64> = (0..h).map(|i| (0..len).map(|j| cost_at((i + j) % h)).sum()).collect();
    let start = (0..h).min_by(|&a, &b| window_costs[a].total_cmp(&window_costs[b])).expect("non-empty");
    if window_costs[start] > tol {
        return Err(Error::Witness(format!("cheapest window costs {}", window_costs[start])));
    }

    let first = ham_pos[start];
    let last = ham_pos[(start + len - 1) % h];
    let span = if last >= first { last - first + 1 } else { tour.len() - first + last + 1 };
    let steps: Vec<WitnessStep> = (0..span).map(|j| tour[(first + j) % tour.len()]).collect();
    if !is_simple(theta, &steps, len) {
        return Err(Error::Witness("window repeats a Hamiltonian edge; girth precondition fails".into()));
    }
    Ok(Extraction {
        witness: Witness { steps, cost: window_costs[start] },
        window_len: len,
        tour,
        window_costs,
        component_cost,
    })
}
