use super::program::{assemble_projected, assemble_ralp, edge_costs, flows_from_states};
use super::simplex::{solve_lp, LinearProgram, Status};
use super::trellis::{build_trellis, Trellis};
use crate::channel::LlrVector;
use crate::encoder::{DegreeDistribution, GroupedInterleaver};
use crate::error::{Error, Result};

/// Which formulation is handed to the simplex core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Over state occupancies and info bits; edge flows recovered afterwards.
    #[default]
    Projected,
    /// Over edge flows and info bits, with all equality rows.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderOptions {
    pub route: Route,
    pub integrality_tol: f64,
    pub feasibility_tol: f64,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        DecoderOptions { route: Route::Projected, integrality_tol: 1e-6, feasibility_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub f: Vec<f64>,
    pub x: Vec<f64>,
    pub objective: f64,
    pub status: Status,
    pub integral: bool,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Codeword(Vec<u8>),
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub outcome: Outcome,
    /// True exactly when the outcome is a codeword, which is then ML.
    pub certificate: bool,
    pub solution: LpSolution,
}

impl DecodeResult {
    pub fn info(&self) -> Option<&[u8]> {
        match &self.outcome {
            Outcome::Codeword(u) => Some(u),
            Outcome::Error => None,
        }
    }

    pub fn is_error(&self) -> bool {
        self.outcome == Outcome::Error
    }
}

/// LP decoder for a fixed code; reusable across received words.
#[derive(Debug, Clone)]
pub struct Decoder {
    il: GroupedInterleaver,
    trellis: Trellis,
    /// Equality rows of the full relaxation, for the feasibility check.
    rows: LinearProgram,
    options: DecoderOptions,
}

impl Decoder {
    pub fn new(dd: &DegreeDistribution, il: &GroupedInterleaver, options: DecoderOptions) -> Result<Self> {
        il.check_consistent(dd)?;
        let trellis = build_trellis(dd);
        let rows = assemble_ralp(&trellis, &LlrVector::rescaled(vec![0.0; dd.n()]), il)?;
        Ok(Decoder { il: il.clone(), trellis, rows, options })
    }

    pub fn trellis(&self) -> &Trellis {
        &self.trellis
    }

    pub fn options(&self) -> DecoderOptions {
        self.options
    }

    /// Solves the relaxation and checks the result against the full rows.
    pub fn solve(&self, llrs: &LlrVector) -> Result<LpSolution> {
        let ne = self.trellis.edges().len();
        let n = self.trellis.n();
        let k = self.il.k();
        let (mut f, mut x, status, pivots) = match self.options.route {
            Route::Full => {
                let lp = assemble_ralp(&self.trellis, llrs, &self.il)?;
                let s = solve_lp(&lp)?;
                if s.status != Status::Optimal {
                    return Err(Error::Solver(format!("relaxation reported {:?}", s.status)));
                }
                (s.values[..ne].to_vec(), s.values[ne..].to_vec(), s.status, s.pivots)
            }
            Route::Projected => {
                let lp = assemble_projected(&self.trellis, llrs, &self.il)?;
                let s = solve_lp(&lp)?;
                if s.status != Status::Optimal {
                    return Err(Error::Solver(format!("relaxation reported {:?}", s.status)));
                }
                let f = flows_from_states(&self.trellis, &s.values[..n], &s.values[n..], &self.il);
                (f, s.values[n..].to_vec(), s.status, s.pivots)
            }
        };
        let mut y = f.clone();
        y.extend_from_slice(&x);
        let violation = self.rows.max_violation(&y);
        if violation > self.options.feasibility_tol {
            return Err(Error::Solver(format!("solution violates the relaxation by {violation:e}")));
        }
        for v in f.iter_mut().chain(x.iter_mut()) {
            *v = v.clamp(0.0, 1.0);
        }
        let tol = self.options.integrality_tol;
        let integral = f.iter().chain(&x).all(|&v| v.min(1.0 - v) <= tol);
        let objective = edge_costs(&self.trellis, llrs).iter().zip(&f).map(|(c, v)| c * v).sum();
        debug_assert_eq!(x.len(), k);
        Ok(LpSolution { f, x, objective, status, integral, pivots })
    }

    pub fn decode(&self, llrs: &LlrVector) -> Result<DecodeResult> {
        let solution = self.solve(llrs)?;
        if !solution.integral {
            return Ok(DecodeResult { outcome: Outcome::Error, certificate: false, solution });
        }
        let tol = self.options.integrality_tol;
        let mut info = Vec::with_capacity(self.il.k());
        for group in self.il.groups() {
            let flow = |i: usize| -> f64 { self.trellis.input1_pairs(i + 1).iter().map(|&e| solution.f[e]).sum() };
            let first = flow(group[0]);
            if group.iter().any(|&i| (flow(i) - first).abs() > tol) {
                return Err(Error::Solver("input-1 flow differs inside a group".into()));
            }
            info.push(u8::from(first > 0.5));
        }
        Ok(DecodeResult { outcome: Outcome::Codeword(info), certificate: true, solution })
    }
}

/// Decodes with default options.
pub fn decode(llrs: &LlrVector, dd: &DegreeDistribution, il: &GroupedInterleaver) -> Result<DecodeResult> {
    Decoder::new(dd, il, DecoderOptions::default())?.decode(llrs)
}
