//! Word-error bounds for LP decoding of RA(q) codes with even `q`.
//!
//! Decoding succeeds whenever every simple path or cycle with `g/2`
//! Hamiltonian edges has positive cost, and there are at most
//! `n (2q - 1)^{g/2}` of them. The union bound multiplies that count by the
//! probability that a sum of `g/2` i.i.d. edge costs is non-positive.

use crate::channel::{q_function, LlrDistribution};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundChannel {
    Bsc,
    Awgn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub channel: BoundChannel,
    pub q: usize,
    pub n: usize,
    /// `p` for the BSC, `σ²` for the AWGN channel.
    pub param: f64,
    pub epsilon: f64,
    /// Even girth used for the windows.
    pub g: usize,
    /// Set when the girth had to be rounded down to an even number.
    pub g_rounded: bool,
    /// `n (2q - 1)^{g/2}`.
    pub paths: f64,
    /// Probability that one window has non-positive cost (or its bound).
    pub tail: f64,
    pub wep_exact: f64,
    pub wep_asymptotic: f64,
    /// Largest `p` (BSC) or `σ²` (AWGN) for which the asymptotic bound
    /// holds at this `ε`.
    pub threshold: f64,
    /// `K` for the BSC, `K̃` for the AWGN channel.
    pub constant: f64,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "q,n,p_or_sigma2,epsilon,g,wep_exact,wep_asymptotic,threshold,vacuous";

    pub fn vacuous(&self) -> bool {
        self.wep_exact > 1.0
    }

    /// Channel parameter strictly below the threshold.
    pub fn below_threshold(&self) -> bool {
        self.param < self.threshold
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:e},{:e},{:e},{}",
            self.q,
            self.n,
            self.param,
            self.epsilon,
            self.g,
            self.wep_exact,
            self.wep_asymptotic,
            self.threshold,
            self.vacuous()
        )
    }
}

/// `log_q n` as a real number.
pub fn log_q(q: usize, n: usize) -> f64 {
    (n as f64).ln() / (q as f64).ln()
}

/// `(g, rounded)`: the largest even number not above `girth`.
pub fn even_girth(girth: usize) -> (usize, bool) {
    (girth - girth % 2, girth % 2 == 1)
}

fn check_q(q: usize) -> Result<()> {
    if q < 4 || q % 2 == 1 {
        return Err(Error::BoundDomain(format!("q = {q} must be even and at least 4")));
    }
    Ok(())
}

fn window_girth(q: usize, n: usize, girth: Option<usize>) -> Result<(usize, bool)> {
    let design = crate::girth::target_girth(q, n);
    let raw = girth.map_or(design, |m| m.min(design));
    let (g, rounded) = even_girth(raw);
    if g < 2 {
        return Err(Error::BoundDomain(format!("girth {raw} at q = {q}, n = {n} leaves no window")));
    }
    if rounded {
        log::warn!("girth {raw} rounded down to {g}");
    }
    Ok((g, rounded))
}

/// `C(m, j)` as a float, exact for the sizes used here.
pub fn binomial(m: usize, j: usize) -> f64 {
    let j = j.min(m - j);
    (0..j).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// `Σ_{j=lo}^{m} C(m, j) p^j (1-p)^{m-j}`.
pub fn binomial_upper_tail(m: usize, lo: usize, p: f64) -> f64 {
    (lo..=m).map(|j| binomial(m, j) * p.powi(j as i32) * (1.0 - p).powi((m - j) as i32)).sum()
}

/// BSC threshold `q^{-4(ε + 1 + ½ log_q(4q - 2))}`.
pub fn bsc_threshold(q: usize, epsilon: f64) -> f64 {
    let qf = q as f64;
    qf.powf(-4.0 * (epsilon + 1.0 + 0.5 * (4.0 * qf - 2.0).ln() / qf.ln()))
}

/// AWGN threshold on `σ²`: `1 / (4 ln q (1 + ε + ½ log_q(2q - 1)))`.
pub fn awgn_threshold(q: usize, epsilon: f64) -> f64 {
    let qf = q as f64;
    1.0 / (4.0 * qf.ln() * (1.0 + epsilon + 0.5 * (2.0 * qf - 1.0).ln() / qf.ln()))
}

/// Exponent `e(p)` with `¼ log_q n · n^{e(p)} · p^{-1/4}` the closed form of
/// the BSC union bound; `e(p) = -ε` exactly at the threshold.
pub fn bsc_rate_exponent(q: usize, p: f64) -> f64 {
    let qf = q as f64;
    1.0 + 0.5 * (4.0 * qf - 2.0).ln() / qf.ln() + 0.25 * p.ln() / qf.ln()
}

pub fn bsc_bound(q: usize, n: usize, p: f64, epsilon: f64) -> Result<BoundReport> {
    bsc_bound_with_girth(q, n, p, epsilon, None)
}

/// As [`bsc_bound`], with windows sized from a measured girth when it is
/// below `⌊log_q n⌋ - 1`.
pub fn bsc_bound_with_girth(q: usize, n: usize, p: f64, epsilon: f64, girth: Option<usize>) -> Result<BoundReport> {
    check_q(q)?;
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::BoundDomain(format!("p = {p} outside (0, 1/2)")));
    }
    if epsilon < 0.0 {
        return Err(Error::BoundDomain(format!("epsilon = {epsilon} is negative")));
    }
    let (g, g_rounded) = window_girth(q, n, girth)?;
    let half = g / 2;
    let paths = n as f64 * ((2 * q - 1) as f64).powi(half as i32);
    let tail = binomial_upper_tail(half, g.div_ceil(4), p);
    let constant = 0.25 * p.powf(-0.25);
    Ok(BoundReport {
        channel: BoundChannel::Bsc,
        q,
        n,
        param: p,
        epsilon,
        g,
        g_rounded,
        paths,
        tail,
        wep_exact: paths * tail,
        wep_asymptotic: constant * log_q(q, n) * (n as f64).powf(-epsilon),
        threshold: bsc_threshold(q, epsilon),
        constant,
    })
}

/// `√(σ²/(π g)) e^{-g/(4σ²)}`, an upper bound on `Pr(c[Y] ≤ 0)`.
pub fn awgn_window_tail_bound(g: usize, sigma2: f64) -> f64 {
    let g = g as f64;
    (sigma2 / (std::f64::consts::PI * g)).sqrt() * (-g / (4.0 * sigma2)).exp()
}

/// `Pr(X ≥ x) ≤ s / (x √(2π)) e^{-x²/(2s²)}` for `X ~ N(0, s²)`, `x > 0`.
pub fn gaussian_tail_bound(s: f64, x: f64) -> f64 {
    s / (x * (2.0 * std::f64::consts::PI).sqrt()) * (-x * x / (2.0 * s * s)).exp()
}

pub fn awgn_bound(q: usize, n: usize, sigma2: f64, epsilon: f64) -> Result<BoundReport> {
    awgn_bound_with_girth(q, n, sigma2, epsilon, None)
}

pub fn awgn_bound_with_girth(
    q: usize,
    n: usize,
    sigma2: f64,
    epsilon: f64,
    girth: Option<usize>,
) -> Result<BoundReport> {
    check_q(q)?;
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::BoundDomain(format!("sigma2 = {sigma2} must be positive")));
    }
    if epsilon < 0.0 {
        return Err(Error::BoundDomain(format!("epsilon = {epsilon} is negative")));
    }
    let (g, g_rounded) = window_girth(q, n, girth)?;
    let paths = n as f64 * ((2 * q - 1) as f64).powi((g / 2) as i32);
    let tail = awgn_window_tail_bound(g, sigma2);
    let constant = (sigma2 / std::f64::consts::PI).sqrt();
    let lg = log_q(q, n);
    let wep_asymptotic =
        if lg > 1.0 { constant * (1.0 / (lg - 1.0)).sqrt() * (n as f64).powf(-epsilon) } else { f64::INFINITY };
    Ok(BoundReport {
        channel: BoundChannel::Awgn,
        q,
        n,
        param: sigma2,
        epsilon,
        g,
        g_rounded,
        paths,
        tail,
        wep_exact: paths * tail,
        wep_asymptotic,
        threshold: awgn_threshold(q, epsilon),
        constant,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MbiosBound {
    /// `n (2 q_max - 1)^{g_half} · tail`.
    pub value: f64,
    /// `Pr(Σ_{i=1}^{g_half} z̃_i ≤ 0)`.
    pub tail: f64,
    /// `min_{s ≥ 0} (E e^{-s z̃})^{g_half}`, an upper bound on `tail`.
    pub chernoff: f64,
}

/// Distribution of a sum of `m` i.i.d. copies, as sorted `(value, mass)`
/// pairs with values that agree to 1e-9 merged.
pub fn convolve_power(atoms: &[(f64, f64)], m: usize) -> Vec<(f64, f64)> {
    let mut acc = vec![(0.0, 1.0)];
    for _ in 0..m {
        let mut next: Vec<(f64, f64)> =
            acc.iter().flat_map(|&(v, w)| atoms.iter().map(move |&(a, p)| (v + a, w * p))).collect();
        next.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(next.len());
        for (v, w) in next {
            match merged.last_mut() {
                Some(last) if (v - last.0).abs() <= 1e-9 * (1.0 + v.abs()) => last.1 += w,
                _ => merged.push((v, w)),
            }
        }
        acc = merged;
    }
    acc
}

fn chernoff_discrete(atoms: &[(f64, f64)], m: usize) -> f64 {
    let mgf = |s: f64| atoms.iter().map(|&(v, p)| p * (-s * v).exp()).sum::<f64>();
    // The moment generating function is convex in s; golden-section search
    // on a bracket that grows until the value starts increasing.
    let mut hi = 1.0;
    while hi < 1e3 && mgf(2.0 * hi) < mgf(hi) {
        hi *= 2.0;
    }
    let (mut a, mut b) = (0.0, 2.0 * hi);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if mgf(c) < mgf(d) {
            b = d;
        } else {
            a = c;
        }
    }
    mgf(0.5 * (a + b)).min(1.0).powi(m as i32)
}

pub fn mbios_bound(q_max: usize, g_half: usize, n: usize, dist: &LlrDistribution) -> Result<MbiosBound> {
    if g_half == 0 {
        return Err(Error::BoundDomain("g_half must be at least 1".into()));
    }
    if q_max < 2 {
        return Err(Error::BoundDomain(format!("q_max = {q_max} is below 2")));
    }
    let (tail, chernoff) = match dist {
        LlrDistribution::Discrete(atoms) => {
            let sum = convolve_power(atoms, g_half);
            let tail = sum.iter().filter(|&&(v, _)| v <= 1e-12).map(|&(_, w)| w).sum();
            (tail, chernoff_discrete(atoms, g_half))
        }
        LlrDistribution::Gaussian { mean, variance } => {
            if *variance <= 0.0 {
                return Err(Error::BoundDomain(format!("variance {variance} must be positive")));
            }
            let m = g_half as f64;
            let tail = q_function(m.sqrt() * mean / variance.sqrt());
            let chernoff = if *mean > 0.0 { (-m * mean * mean / (2.0 * variance)).exp() } else { 1.0 };
            (tail, chernoff)
        }
    };
    let paths = n as f64 * ((2 * q_max - 1) as f64).powi(g_half as i32);
    Ok(MbiosBound { value: paths * tail, tail, chernoff })
}
