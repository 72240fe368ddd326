//! Repeat-accumulate encoding.
//!
//! Info bit `t` is copied `q_t` times into the accumulator input positions
//! listed by group `X_t` of the interleaver, the stream is accumulated, and a
//! termination input equal to the final accumulator state drives the encoder
//! back to state 0. The transmitted block is the `n` accumulator outputs plus
//! the termination output, which is always 0.
//!
//! Positions are 0-based throughout the library; the interleaver file format
//! is the only place where they appear 1-based.

use crate::error::{Error, Result};

/// Repetition degrees `q_1..q_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDistribution {
    degrees: Vec<usize>,
}

impl DegreeDistribution {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidDegrees("at least one information bit is required".into()));
        }
        if let Some(q) = degrees.iter().find(|&&q| q < 2) {
            return Err(Error::InvalidDegrees(format!("repetition degree {q} is below 2")));
        }
        Ok(DegreeDistribution { degrees })
    }

    pub fn regular(q: usize, k: usize) -> Result<Self> {
        Self::new(vec![q; k])
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Information block length.
    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    /// Accumulator input length, `sum q_t`.
    pub fn n(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn is_regular(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] == w[1])
    }

    /// All degrees even; required by the error bounds, not by the encoder.
    pub fn all_even(&self) -> bool {
        self.degrees.iter().all(|q| q % 2 == 0)
    }

    pub fn q_max(&self) -> usize {
        *self.degrees.iter().max().expect("non-empty")
    }
}

/// Partition `{X_t}` of the accumulator input positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedInterleaver {
    groups: Vec<Vec<usize>>,
    n: usize,
    /// position -> group index
    owner: Vec<usize>,
}

impl GroupedInterleaver {
    /// Validates that `groups` partition `0..n`; each group is sorted.
    pub fn new(mut groups: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (t, g) in groups.iter_mut().enumerate() {
            if g.is_empty() {
                return Err(Error::InvalidInterleaver(format!("group {} is empty", t + 1)));
            }
            g.sort_unstable();
            for &pos in g.iter() {
                if pos >= n {
                    return Err(Error::InvalidInterleaver(format!("position {} exceeds n = {n}", pos + 1)));
                }
                if owner[pos] != usize::MAX {
                    return Err(Error::InvalidInterleaver(format!("position {} appears twice", pos + 1)));
                }
                owner[pos] = t;
            }
        }
        if let Some(pos) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidInterleaver(format!("position {} is not covered", pos + 1)));
        }
        Ok(GroupedInterleaver { groups, n, owner })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group(&self, t: usize) -> &[usize] {
        &self.groups[t]
    }

    /// Group containing position `pos`.
    pub fn group_of(&self, pos: usize) -> usize {
        self.owner[pos]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    /// Degree distribution implied by the group sizes.
    pub fn degree_distribution(&self) -> Result<DegreeDistribution> {
        DegreeDistribution::new(self.groups.iter().map(Vec::len).collect())
    }

    pub fn check_consistent(&self, dd: &DegreeDistribution) -> Result<()> {
        if dd.k() != self.k() || dd.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "degree distribution (k={}, n={}) vs interleaver (k={}, n={})",
                dd.k(),
                dd.n(),
                self.k(),
                self.n
            )));
        }
        for (t, (&q, g)) in dd.degrees().iter().zip(&self.groups).enumerate() {
            if q != g.len() {
                return Err(Error::DimensionMismatch(format!(
                    "group {} has {} positions, degree is {q}",
                    t + 1,
                    g.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    /// `n` accumulator outputs followed by the termination output bit.
    pub bits: Vec<u8>,
    pub info: Vec<u8>,
    /// Input bit applied in the termination segment.
    pub termination_input: u8,
}

impl Codeword {
    /// The `n` code bits, without the termination output.
    pub fn code_bits(&self) -> &[u8] {
        &self.bits[..self.bits.len() - 1]
    }
}

/// Running mod-2 prefix sum.
pub fn accumulate(stream: &[u8]) -> Result<Vec<u8>> {
    if stream.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut state = 0u8;
    Ok(stream
        .iter()
        .map(|&b| {
            state ^= b & 1;
            state
        })
        .collect())
}

/// Accumulator input stream: position `j` carries the info bit of its group.
pub fn repeat_and_interleave(info: &[u8], il: &GroupedInterleaver) -> Vec<u8> {
    (0..il.n()).map(|j| info[il.group_of(j)] & 1).collect()
}

pub fn encode(info: &[u8], dd: &DegreeDistribution, il: &GroupedInterleaver) -> Result<Codeword> {
    il.check_consistent(dd)?;
    if info.len() != dd.k() {
        return Err(Error::DimensionMismatch(format!("info has {} bits, k = {}", info.len(), dd.k())));
    }
    let stream = repeat_and_interleave(info, il);
    let mut bits = accumulate(&stream)?;
    let termination_input = *bits.last().expect("non-empty");
    // state XOR input = 0
    bits.push(0);
    Ok(Codeword { bits, info: info.iter().map(|b| b & 1).collect(), termination_input })
}
