use crate::channel::LlrVector;
use crate::encoder::{encode, Codeword, DegreeDistribution, GroupedInterleaver};
use crate::error::{Error, Result};

/// Largest information length accepted by [`brute_force_ml`].
pub const MAX_ML_K: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct MlResult {
    pub codeword: Codeword,
    pub cost: f64,
}

/// `Σ γ_i` over the code bits equal to 1; the termination bit is ignored.
pub fn codeword_cost(bits: &[u8], llrs: &LlrVector) -> f64 {
    let n = llrs.len().min(bits.len());
    (0..n).filter(|&i| bits[i] == 1).map(|i| llrs.values[i]).sum()
}

/// Minimum-cost codeword by enumeration of all `2^k` information words.
/// Ties go to the lexicographically smallest information word.
pub fn brute_force_ml(llrs: &LlrVector, dd: &DegreeDistribution, il: &GroupedInterleaver) -> Result<MlResult> {
    let k = dd.k();
    if k > MAX_ML_K {
        return Err(Error::ScaleGuard(format!("k = {k} exceeds {MAX_ML_K}")));
    }
    if llrs.len() != dd.n() && llrs.len() != dd.n() + 1 {
        return Err(Error::DimensionMismatch(format!("{} LLRs for block length {}", llrs.len(), dd.n())));
    }
    let mut best: Option<MlResult> = None;
    for u in 0..1u64 << k {
        let info: Vec<u8> = (0..k).map(|t| ((u >> (k - 1 - t)) & 1) as u8).collect();
        let cw = encode(&info, dd, il)?;
        let cost = codeword_cost(&cw.bits[..dd.n()], llrs);
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(MlResult { codeword: cw, cost });
        }
    }
    Ok(best.expect("k >= 1"))
}
