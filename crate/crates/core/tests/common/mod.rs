#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use ralp::aux_graph::{AtomPath, Hyperpromenade};
use ralp::encoder::{DegreeDistribution, GroupedInterleaver};

pub fn random_code(q: usize, k: usize, rng: &mut impl Rng) -> (DegreeDistribution, GroupedInterleaver) {
    let n = q * k;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let groups = perm.chunks(q).map(<[usize]>::to_vec).collect();
    (DegreeDistribution::regular(q, k).unwrap(), GroupedInterleaver::new(groups, n).unwrap())
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// `Σ_{j=lo}^{m} C(m, j) p^j (1-p)^{m-j}` in exact rational arithmetic.
pub fn binomial_tail_exact(m: usize, lo: usize, p: f64) -> BigRational {
    let p = BigRational::from_float(p).unwrap();
    let one = BigRational::one();
    let q = &one - &p;
    let mut total = BigRational::zero();
    let mut c = BigInt::one();
    for j in 0..=m {
        if j >= lo {
            let term = BigRational::from_integer(c.clone()) * pow(&p, j) * pow(&q, m - j);
            total += term;
        }
        c = c * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    total
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

/// Decimal fixed-point arithmetic on big integers, for transcendental
/// reference values.
pub struct Fixed {
    scale: BigInt,
}

impl Fixed {
    pub fn new(digits: u32) -> Self {
        Fixed { scale: BigInt::from(10).pow(digits) }
    }

    pub fn one(&self) -> BigInt {
        self.scale.clone()
    }

    pub fn real(&self, x: f64) -> BigInt {
        let r = BigRational::from_float(x).unwrap();
        r.numer() * &self.scale / r.denom()
    }

    pub fn int(&self, x: i64) -> BigInt {
        BigInt::from(x) * &self.scale
    }

    pub fn to_f64(&self, a: &BigInt) -> f64 {
        to_f64(&BigRational::new(a.clone(), self.scale.clone()))
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b / &self.scale
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * &self.scale / b
    }

    pub fn sqrt(&self, a: &BigInt) -> BigInt {
        (a * &self.scale).sqrt()
    }

    pub fn exp(&self, x: &BigInt) -> BigInt {
        if x.is_negative() {
            return self.div(&self.one(), &self.exp(&-x));
        }
        let half = &self.scale / 2;
        let mut y = x.clone();
        let mut halvings = 0;
        while y > half {
            y /= 2;
            halvings += 1;
        }
        let mut sum = self.one();
        let mut term = self.one();
        for k in 1.. {
            term = self.mul(&term, &y) / k;
            if term.is_zero() {
                break;
            }
            sum += &term;
        }
        for _ in 0..halvings {
            sum = self.mul(&sum, &sum);
        }
        sum
    }

    fn atan_inv(&self, m: i64) -> BigInt {
        let mut power = &self.scale / m;
        let mut sum = BigInt::zero();
        let m2 = BigInt::from(m * m);
        for k in 0.. {
            if power.is_zero() {
                break;
            }
            let t = &power / (2 * k + 1);
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            power /= &m2;
        }
        sum
    }

    pub fn pi(&self) -> BigInt {
        self.atan_inv(5) * 16 - self.atan_inv(239) * 4
    }

    /// `erfc(x)` for `x ≥ 0` from the Maclaurin series of `erf`.
    pub fn erfc(&self, x: &BigInt) -> BigInt {
        let x2 = self.mul(x, x);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut n = 1i64;
        loop {
            term = self.mul(&term, &x2) / n;
            if term.is_zero() {
                break;
            }
            let t = &term / (2 * n + 1);
            if n % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            n += 1;
        }
        let two_over_sqrt_pi = self.div(&self.int(2), &self.sqrt(&self.pi()));
        self.one() - self.mul(&two_over_sqrt_pi, &sum)
    }

    /// `Q(x) = ½ erfc(x / √2)`.
    pub fn q_function(&self, x: &BigInt) -> BigInt {
        let arg = self.div(x, &self.sqrt(&self.int(2)));
        self.erfc(&arg) / 2
    }
}

/// Shortest cycle of the hypergraph, found on its incidence graph: line
/// edges weigh 2 and vertex-to-hyperedge edges weigh 1, so a hop between two
/// members of a group also weighs 2. Every edge is removed in turn and the
/// cheapest detour between its ends closes the shortest cycle through it.
pub fn girth_oracle(il: &GroupedInterleaver) -> Option<usize> {
    let n = il.n();
    let nodes = n + il.k();
    let mut edges: Vec<(usize, usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1, 2)).collect();
    for (t, g) in il.groups().iter().enumerate() {
        edges.extend(g.iter().map(|&v| (v, n + t, 1)));
    }
    let mut adj = vec![Vec::new(); nodes];
    for (id, &(a, b, w)) in edges.iter().enumerate() {
        adj[a].push((b, w, id));
        adj[b].push((a, w, id));
    }
    let mut best: Option<usize> = None;
    for (id, &(a, b, w)) in edges.iter().enumerate() {
        let mut dist = vec![usize::MAX; nodes];
        let mut heap = BinaryHeap::new();
        dist[a] = 0;
        heap.push(Reverse((0, a)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] || u == b {
                continue;
            }
            for &(v, wv, eid) in &adj[u] {
                if eid != id && d + wv < dist[v] {
                    dist[v] = d + wv;
                    heap.push(Reverse((d + wv, v)));
                }
            }
        }
        if dist[b] != usize::MAX {
            let len = (dist[b] + w) / 2;
            best = Some(best.map_or(len, |x| x.min(len)));
        }
    }
    best
}

/// A random hyperpromenade on `il`: a few groups get endpoint multiplicity
/// 1 or 2 on every member, and the endpoints are paired at random into
/// atoms with distinct ends.
pub fn random_hyperpromenade(il: &GroupedInterleaver, max_groups: usize, rng: &mut impl Rng) -> Hyperpromenade {
    loop {
        let mut groups: Vec<usize> = (0..il.k()).collect();
        groups.shuffle(rng);
        let r = rng.random_range(1..=max_groups.min(il.k()));
        let mut slots = Vec::new();
        for &t in &groups[..r] {
            let b = rng.random_range(1..=2);
            for &v in il.group(t) {
                slots.extend(std::iter::repeat_n(v, b));
            }
        }
        if slots.len() % 2 == 1 {
            continue;
        }
        for _ in 0..50 {
            slots.shuffle(rng);
            if slots.chunks(2).all(|c| c[0] != c[1]) {
                return Hyperpromenade::new(slots.chunks(2).map(|c| AtomPath::new(c[0], c[1])).collect());
            }
        }
    }
}

/// An RA(4) code of length 16 on which the relaxation has a fractional
/// optimum below the best codeword cost: three flipped bits.
pub fn fractional_fixture() -> (DegreeDistribution, GroupedInterleaver, Vec<f64>) {
    let groups = vec![vec![1, 2, 4, 11], vec![0, 5, 9, 13], vec![10, 12, 14, 15], vec![3, 6, 7, 8]];
    let il = GroupedInterleaver::new(groups, 16).unwrap();
    let mut llrs = vec![1.0; 16];
    for i in [4, 12, 13] {
        llrs[i] = -1.0;
    }
    (DegreeDistribution::regular(4, 4).unwrap(), il, llrs)
}

/// ML decoding by enumerating every accumulator input stream of length `n`
/// and keeping those constant on each group; costs as `i64` sums of
/// integer LLRs are exact. Returns `(info, cost)` with ties to the smaller
/// word when read with bit 0 first.
pub fn ml_by_stream_enumeration(il: &GroupedInterleaver, llrs: &[f64]) -> (Vec<u8>, f64) {
    let n = il.n();
    assert!(n <= 20);
    let mut best: Option<(Vec<u8>, f64)> = None;
    for s in 0u32..1 << n {
        let stream: Vec<u8> = (0..n).map(|i| ((s >> i) & 1) as u8).collect();
        if il.groups().iter().any(|g| g.iter().any(|&i| stream[i] != stream[g[0]])) {
            continue;
        }
        let mut acc = 0u8;
        let mut cost = 0.0;
        for i in 0..n {
            acc ^= stream[i];
            if acc == 1 {
                cost += llrs[i];
            }
        }
        let info: Vec<u8> = il.groups().iter().map(|g| stream[g[0]]).collect();
        let better = match &best {
            None => true,
            Some((bi, bc)) => cost < *bc || (cost == *bc && info < *bi),
        };
        if better {
            best = Some((info, cost));
        }
    }
    best.unwrap()
}

/// Runs the witness extractor on a non-positive hyperpromenade and checks
/// the result independently. Returns the witness cost.
pub fn check_witness(theta: &ralp::aux_graph::AuxGraph, psi: &Hyperpromenade, g: usize) -> Result<f64, String> {
    use ralp::aux_graph::{extract_witness, is_simple, min_cost_simple_window, window_length, WitnessStep};
    let ex = extract_witness(theta, psi, g).map_err(|e| format!("extraction failed: {e}"))?;
    let len = window_length(g);
    let w = &ex.witness;
    let hams: Vec<usize> = w
        .steps
        .iter()
        .filter_map(|s| match s {
            WitnessStep::Ham { edge, .. } => Some(*edge),
            WitnessStep::Hop { .. } => None,
        })
        .collect();
    if hams.len() != len {
        return Err(format!("{} Hamiltonian edges, expected {len}", hams.len()));
    }
    let distinct: std::collections::BTreeSet<_> = hams.iter().collect();
    if distinct.len() != hams.len() {
        return Err("repeated Hamiltonian edge".into());
    }
    // consecutive steps share endpoints; hops stay inside one group
    for pair in w.steps.windows(2) {
        if pair[0].to() != pair[1].from() {
            return Err("steps do not chain".into());
        }
    }
    for s in &w.steps {
        match *s {
            WitnessStep::Ham { edge, from, to } => {
                if !((from == edge && to == edge + 1) || (to == edge && from == edge + 1)) {
                    return Err(format!("edge {edge} does not join {from} and {to}"));
                }
            }
            WitnessStep::Hop { group, from, to } => {
                let members = theta.interleaver().group(group);
                if from == to || !members.contains(&from) || !members.contains(&to) {
                    return Err(format!("bad hop {from} -> {to} in group {group}"));
                }
            }
        }
    }
    if !is_simple(theta, &w.steps, len) {
        return Err("not simple".into());
    }
    let cost: f64 = hams.iter().map(|&e| theta.ham_costs()[e]).sum();
    let tol = 1e-9 * theta.ham_costs().iter().map(|c| c.abs()).sum::<f64>().max(1.0);
    if (cost - w.cost).abs() > tol {
        return Err(format!("reported cost {} but edges sum to {cost}", w.cost));
    }
    if cost > tol {
        return Err(format!("positive cost {cost}"));
    }
    let scan = min_cost_simple_window(theta, len).map_err(|e| e.to_string())?;
    if scan.min_cost > cost + tol {
        return Err(format!("scan minimum {} above witness cost {cost}", scan.min_cost));
    }
    Ok(cost)
}

/// Random ±1 or Gaussian Hamiltonian costs, negated when needed so that
/// `psi` has non-positive cost.
pub fn nonpositive_theta(
    il: &GroupedInterleaver,
    psi: &Hyperpromenade,
    gaussian: bool,
    rng: &mut impl Rng,
) -> ralp::aux_graph::AuxGraph {
    use ralp::aux_graph::AuxGraph;
    use rand_distr::{Distribution, Normal};
    let n = il.n();
    let normal = Normal::new(0.3, 1.0).unwrap();
    let mut costs: Vec<f64> = (0..n - 1)
        .map(|_| {
            if gaussian {
                normal.sample(rng)
            } else if rng.random_bool(0.6) {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let theta = AuxGraph::new(costs.clone(), il.clone()).unwrap();
    if psi.cost(&theta) > 0.0 {
        for c in &mut costs {
            *c = -*c;
        }
        return AuxGraph::new(costs, il.clone()).unwrap();
    }
    theta
}

/// Outcome of one forward check: transmit the all-zero word, and when every
/// simple window of the auxiliary graph has positive cost, decode.
pub enum Forward {
    /// Some window is non-positive; nothing is claimed.
    Skipped,
    Decoded {
        correct: bool,
        negative_llrs: usize,
    },
}

pub fn forward_check(
    dd: &DegreeDistribution,
    il: &GroupedInterleaver,
    decoder: &ralp::lp::Decoder,
    g: usize,
    channel: &ralp::channel::ChannelModel,
    rng: &mut impl Rng,
) -> Forward {
    use ralp::aux_graph::{build_aux_graph, min_cost_simple_window, window_length};
    let zero = ralp::encoder::encode(&vec![0; dd.k()], dd, il).unwrap();
    let rx = channel.transmit(&zero.bits[..dd.n()], rng);
    let llrs = channel.llrs(&rx, Default::default()).unwrap();
    let theta = build_aux_graph(&zero, &llrs, il).unwrap();
    let scan = min_cost_simple_window(&theta, window_length(g)).unwrap();
    if scan.min_cost <= 0.0 {
        return Forward::Skipped;
    }
    let r = decoder.decode(&llrs).unwrap();
    Forward::Decoded {
        correct: r.info() == Some(&vec![0; dd.k()][..]),
        negative_llrs: llrs.values.iter().filter(|&&v| v < 0.0).count(),
    }
}

/// ML cost by enumerating the `2^k` information words with a hand-written
/// repeat-and-accumulate encoder.
pub fn ml_by_info_enumeration(il: &GroupedInterleaver, llrs: &[f64]) -> f64 {
    let n = il.n();
    let mut owner = vec![0; n];
    for (t, g) in il.groups().iter().enumerate() {
        for &i in g {
            owner[i] = t;
        }
    }
    let mut best = f64::INFINITY;
    for u in 0u64..1 << il.k() {
        let mut acc = 0u64;
        let mut cost = 0.0;
        for i in 0..n {
            acc ^= (u >> owner[i]) & 1;
            if acc == 1 {
                cost += llrs[i];
            }
        }
        best = best.min(cost);
    }
    best
}
