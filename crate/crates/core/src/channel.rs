//! Memoryless binary-input output-symmetric channels.
//!
//! Two channels are supported: the binary symmetric channel with crossover
//! probability `p`, and the binary-input AWGN channel with unit-energy
//! modulation `0 -> +1`, `1 -> -1` and noise variance `sigma2`.
//!
//! LLRs are defined as `ln P(y | x = 0) / P(y | x = 1)`. The rescaled
//! convention multiplies them by a positive constant so that BSC LLRs are
//! exactly `±1` and AWGN LLRs equal the received value. Decoding always uses
//! the rescaled convention, which leaves the LP argmin unchanged.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    Bsc { p: f64 },
    Awgn { sigma2: f64 },
}

/// Raw LLRs follow the log-likelihood definition; rescaled ones are the
/// analysis convention (`±1` for the BSC, `y` for AWGN).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LlrConvention {
    Raw,
    #[default]
    Rescaled,
}

/// A channel output symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Received {
    Bit(u8),
    Real(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector {
    pub values: Vec<f64>,
    pub convention: LlrConvention,
}

impl LlrVector {
    pub fn rescaled(values: Vec<f64>) -> Self {
        LlrVector { values, convention: LlrConvention::Rescaled }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Distribution of a single LLR conditioned on the transmitted bit being 0.
#[derive(Debug, Clone, PartialEq)]
pub enum LlrDistribution {
    /// Atoms `(value, probability)`.
    Discrete(Vec<(f64, f64)>),
    Gaussian {
        mean: f64,
        variance: f64,
    },
}

impl LlrDistribution {
    /// Builds a discrete distribution, checking that the mass sums to one.
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidChannel("empty pmf".into()));
        }
        if atoms.iter().any(|&(v, pr)| !v.is_finite() || !(0.0..=1.0).contains(&pr)) {
            return Err(Error::InvalidChannel("pmf atoms must be finite with probabilities in [0, 1]".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidChannel(format!("pmf mass {total} differs from 1")));
        }
        Ok(LlrDistribution::Discrete(atoms))
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            LlrDistribution::Discrete(atoms) => atoms.iter().map(|a| a.1).sum(),
            LlrDistribution::Gaussian { .. } => 1.0,
        }
    }

    /// Cumulative distribution function `P(z <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            LlrDistribution::Discrete(atoms) => atoms.iter().filter(|a| a.0 <= x).map(|a| a.1).sum(),
            LlrDistribution::Gaussian { mean, variance } => normal_cdf((x - mean) / variance.sqrt()),
        }
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal upper tail `Q(x) = P(N(0,1) >= x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

impl ChannelModel {
    pub fn bsc(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::InvalidChannel(format!("BSC crossover probability must satisfy 0 < p < 1/2, got {p}")));
        }
        Ok(ChannelModel::Bsc { p })
    }

    pub fn awgn(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidChannel(format!("AWGN noise variance must be positive, got {sigma2}")));
        }
        Ok(ChannelModel::Awgn { sigma2 })
    }

    /// The channel parameter (`p` or `sigma2`).
    pub fn param(&self) -> f64 {
        match *self {
            ChannelModel::Bsc { p } => p,
            ChannelModel::Awgn { sigma2 } => sigma2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelModel::Bsc { .. } => "bsc",
            ChannelModel::Awgn { .. } => "awgn",
        }
    }

    /// Passes one bit through the channel.
    pub fn sample<R: Rng + ?Sized>(&self, bit: u8, rng: &mut R) -> Received {
        match *self {
            ChannelModel::Bsc { p } => {
                let flip = rng.random::<f64>() < p;
                Received::Bit(bit ^ u8::from(flip))
            }
            ChannelModel::Awgn { sigma2 } => {
                let noise = Normal::new(0.0, sigma2.sqrt()).expect("validated variance");
                let y = 1.0 - 2.0 * f64::from(bit);
                Received::Real(y + noise.sample(rng))
            }
        }
    }

    /// Passes a block through the channel.
    pub fn transmit<R: Rng + ?Sized>(&self, bits: &[u8], rng: &mut R) -> Vec<Received> {
        match *self {
            ChannelModel::Bsc { .. } => bits.iter().map(|&b| self.sample(b, rng)).collect(),
            ChannelModel::Awgn { sigma2 } => {
                let noise = Normal::new(0.0, sigma2.sqrt()).expect("validated variance");
                bits.iter().map(|&b| Received::Real(1.0 - 2.0 * f64::from(b) + noise.sample(rng))).collect()
            }
        }
    }

    /// Positive factor mapping raw LLRs to rescaled ones.
    pub fn rescale_factor(&self) -> f64 {
        match *self {
            ChannelModel::Bsc { p } => 1.0 / ((1.0 - p) / p).ln(),
            ChannelModel::Awgn { sigma2 } => sigma2 / 2.0,
        }
    }

    /// LLR of one received symbol.
    pub fn llr(&self, received: Received, convention: LlrConvention) -> Result<f64> {
        let raw_scale = 1.0 / self.rescale_factor();
        let rescaled = match (self, received) {
            (ChannelModel::Bsc { .. }, Received::Bit(0)) => 1.0,
            (ChannelModel::Bsc { .. }, Received::Bit(1)) => -1.0,
            (ChannelModel::Awgn { .. }, Received::Real(y)) => y,
            (_, r) => {
                return Err(Error::InvalidChannel(format!(
                    "symbol {r:?} is not in the {} output alphabet",
                    self.name()
                )))
            }
        };
        Ok(match convention {
            LlrConvention::Rescaled => rescaled,
            LlrConvention::Raw => rescaled * raw_scale,
        })
    }

    pub fn llrs(&self, received: &[Received], convention: LlrConvention) -> Result<LlrVector> {
        let values = received.iter().map(|&r| self.llr(r, convention)).collect::<Result<Vec<_>>>()?;
        Ok(LlrVector { values, convention })
    }

    /// Distribution of the LLR given that bit 0 was sent.
    pub fn llr_distribution(&self, convention: LlrConvention) -> LlrDistribution {
        let scale = match convention {
            LlrConvention::Rescaled => 1.0,
            LlrConvention::Raw => 1.0 / self.rescale_factor(),
        };
        match *self {
            ChannelModel::Bsc { p } => LlrDistribution::Discrete(vec![(scale, 1.0 - p), (-scale, p)]),
            ChannelModel::Awgn { sigma2 } => {
                LlrDistribution::Gaussian { mean: scale, variance: sigma2 * scale * scale }
            }
        }
    }
}
