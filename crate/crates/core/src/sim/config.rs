//! Line-oriented simulation config.
//!
//! Each non-blank line is `section.key = value`; `#` starts a comment.
//!
//! ```text
//! channel.kind = bsc          # bsc | awgn
//! channel.param = 1e-3        # p, or sigma^2
//! code.q = 4                  # regular degree, or code.degrees = 4,4,6,...
//! code.k = 64
//! interleaver.policy = greedy # greedy | random, or interleaver.path = file
//! interleaver.seed = 1
//! sim.trials = 10000
//! sim.min_errors = 100
//! sim.seed = 42
//! ```
//!
//! Optional keys: `sim.transmit` (`zero` | `random`), `sim.ties`
//! (`against` | `lp`), `lp.integrality_tol`,
//! `lp.feasibility_tol`, `lp.route` (`projected` | `full`), `bounds.epsilon`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::ChannelModel;
use crate::encoder::{DegreeDistribution, GroupedInterleaver};
use crate::error::{Error, Result};
use crate::girth::{build_matching, parse_interleaver, random_irregular, BuildOptions, HyperGraphLine, Policy};
use crate::lp::{DecoderOptions, Route};

const KEYS: &[&str] = &[
    "channel.kind",
    "channel.param",
    "code.q",
    "code.k",
    "code.degrees",
    "interleaver.path",
    "interleaver.policy",
    "interleaver.seed",
    "sim.trials",
    "sim.min_errors",
    "sim.seed",
    "sim.transmit",
    "sim.ties",
    "lp.integrality_tol",
    "lp.feasibility_tol",
    "lp.route",
    "bounds.epsilon",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSpec {
    Regular { q: usize, k: usize },
    Degrees(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterleaverSpec {
    File(PathBuf),
    Build { policy: Policy, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transmit {
    #[default]
    AllZero,
    RandomCodeword,
}

/// How an LP optimum shared by the transmitted word and another point is
/// scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ties {
    /// Costs are nudged towards flipping every transmitted bit, so a tie
    /// becomes a decoding error.
    #[default]
    Against,
    /// Whatever vertex the solver returns.
    Lp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub channel: ChannelModel,
    pub code: CodeSpec,
    pub interleaver: InterleaverSpec,
    pub trials: u64,
    pub min_errors: u64,
    pub seed: u64,
    pub transmit: Transmit,
    pub ties: Ties,
    pub decoder: DecoderOptions,
    pub epsilon: f64,
}

/// A code ready for simulation.
#[derive(Debug, Clone)]
pub struct Code {
    pub dd: DegreeDistribution,
    pub il: GroupedInterleaver,
    /// Measured girth of the auxiliary hypergraph; `None` when acyclic.
    pub girth: Option<usize>,
}

fn err(key: &str, msg: impl Into<String>) -> Error {
    Error::Config { key: key.to_string(), msg: msg.into() }
}

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.take(key).map(|v| v.parse::<T>().map_err(|_| err(key, format!("cannot parse `{v}`")))).transpose()
    }

    fn require<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.parse(key)?.ok_or_else(|| err(key, "missing"))
    }
}

impl SimConfig {
    /// Parses config text; relative interleaver paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| err(line, format!("line {} is not `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(key, "unknown key"));
            }
            if map.insert(key.to_string(), value.to_string()).is_some() {
                return Err(err(key, "given twice"));
            }
        }
        let mut e = Entries(map);

        let kind: String = e.require("channel.kind")?;
        let param: f64 = e.require("channel.param")?;
        let channel = match kind.as_str() {
            "bsc" => ChannelModel::bsc(param),
            "awgn" => ChannelModel::awgn(param),
            other => return Err(err("channel.kind", format!("unknown channel `{other}`"))),
        }
        .map_err(|x| err("channel.param", x.to_string()))?;

        let code = match (e.parse::<usize>("code.q")?, e.take("code.degrees")) {
            (Some(_), Some(_)) => return Err(err("code.degrees", "give either code.q or code.degrees")),
            (Some(q), None) => {
                let k = e.require("code.k")?;
                DegreeDistribution::regular(q, k).map_err(|x| err("code.q", x.to_string()))?;
                CodeSpec::Regular { q, k }
            }
            (None, Some(list)) => {
                let degrees = list
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| err("code.degrees", format!("cannot parse `{list}`")))?;
                DegreeDistribution::new(degrees.clone()).map_err(|x| err("code.degrees", x.to_string()))?;
                if let Some(k) = e.parse::<usize>("code.k")? {
                    if k != degrees.len() {
                        return Err(err("code.k", format!("{k} disagrees with {} degrees", degrees.len())));
                    }
                }
                CodeSpec::Degrees(degrees)
            }
            (None, None) => return Err(err("code.q", "missing (or give code.degrees)")),
        };

        let interleaver = match (e.take("interleaver.path"), e.take("interleaver.policy")) {
            (Some(_), Some(_)) => return Err(err("interleaver.policy", "give either a path or a policy")),
            (Some(p), None) => {
                if e.take("interleaver.seed").is_some() {
                    return Err(err("interleaver.seed", "not used with interleaver.path"));
                }
                let path = base.map_or_else(|| PathBuf::from(&p), |b| b.join(&p));
                if !path.exists() {
                    return Err(err("interleaver.path", format!("{} does not exist", path.display())));
                }
                InterleaverSpec::File(path)
            }
            (None, Some(policy)) => {
                let policy = match policy.as_str() {
                    "greedy" => Policy::Greedy,
                    "random" => Policy::Random,
                    other => return Err(err("interleaver.policy", format!("unknown policy `{other}`"))),
                };
                InterleaverSpec::Build { policy, seed: e.require("interleaver.seed")? }
            }
            (None, None) => return Err(err("interleaver.path", "missing (or give interleaver.policy)")),
        };

        let trials: u64 = e.require("sim.trials")?;
        if trials == 0 {
            return Err(err("sim.trials", "must be at least 1"));
        }
        let min_errors: u64 = e.require("sim.min_errors")?;
        if min_errors == 0 {
            return Err(err("sim.min_errors", "must be at least 1"));
        }
        let seed = e.require("sim.seed")?;
        let transmit = match e.take("sim.transmit").as_deref() {
            None | Some("zero") => Transmit::AllZero,
            Some("random") => Transmit::RandomCodeword,
            Some(other) => return Err(err("sim.transmit", format!("unknown mode `{other}`"))),
        };

        let ties = match e.take("sim.ties").as_deref() {
            None | Some("against") => Ties::Against,
            Some("lp") => Ties::Lp,
            Some(other) => return Err(err("sim.ties", format!("unknown rule `{other}`"))),
        };

        let mut decoder = DecoderOptions::default();
        if let Some(t) = e.parse::<f64>("lp.integrality_tol")? {
            if !(t > 0.0 && t < 0.5) {
                return Err(err("lp.integrality_tol", "must lie in (0, 1/2)"));
            }
            decoder.integrality_tol = t;
        }
        if let Some(t) = e.parse::<f64>("lp.feasibility_tol")? {
            if t.is_nan() || t <= 0.0 {
                return Err(err("lp.feasibility_tol", "must be positive"));
            }
            decoder.feasibility_tol = t;
        }
        decoder.route = match e.take("lp.route").as_deref() {
            None | Some("projected") => Route::Projected,
            Some("full") => Route::Full,
            Some(other) => return Err(err("lp.route", format!("unknown route `{other}`"))),
        };
        let epsilon = e.parse::<f64>("bounds.epsilon")?.unwrap_or(0.0);
        if epsilon < 0.0 {
            return Err(err("bounds.epsilon", "must be nonnegative"));
        }
        Ok(SimConfig { channel, code, interleaver, trials, min_errors, seed, transmit, ties, decoder, epsilon })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    pub fn degree_distribution(&self) -> Result<DegreeDistribution> {
        match &self.code {
            CodeSpec::Regular { q, k } => DegreeDistribution::regular(*q, *k),
            CodeSpec::Degrees(d) => DegreeDistribution::new(d.clone()),
        }
    }

    /// Loads or builds the interleaver and measures its girth.
    pub fn build_code(&self) -> Result<Code> {
        let dd = self.degree_distribution()?;
        let il = match &self.interleaver {
            InterleaverSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                parse_interleaver(&text)?.0
            }
            InterleaverSpec::Build { policy, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                match (&self.code, policy) {
                    (CodeSpec::Regular { q, k }, _) => {
                        let opts = match policy {
                            Policy::Greedy => BuildOptions::greedy(),
                            Policy::Random => BuildOptions::random(),
                        };
                        build_matching(*q, *k, opts, &mut rng)?.interleaver()
                    }
                    (CodeSpec::Degrees(_), Policy::Random) => {
                        let graph = random_irregular(&dd, &mut rng)?;
                        GroupedInterleaver::new(graph.hyperedges().to_vec(), dd.n())?
                    }
                    (CodeSpec::Degrees(_), Policy::Greedy) => {
                        return Err(err("interleaver.policy", "the greedy construction needs a regular code"));
                    }
                }
            }
        };
        il.check_consistent(&dd).map_err(|x| err("interleaver.path", x.to_string()))?;
        let girth = HyperGraphLine::from_interleaver(&il).girth();
        Ok(Code { dd, il, girth })
    }
}
