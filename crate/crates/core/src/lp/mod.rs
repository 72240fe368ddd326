//! Linear-programming decoding on the accumulator trellis.
//!
//! A codeword is a unit flow along a trellis path whose input labels agree
//! inside every interleaver group. The relaxation keeps the flow and
//! agreement equations but lets flows and info bits take values in `[0, 1]`.
//! An integral optimum is the maximum-likelihood codeword; a fractional one
//! is reported as a decoding error.

mod decoder;
mod ml;
mod program;
mod simplex;
mod trellis;

pub use decoder::{decode, DecodeResult, Decoder, DecoderOptions, LpSolution, Outcome, Route};
pub use ml::{brute_force_ml, codeword_cost, MlResult, MAX_ML_K};
pub use program::{assemble_projected, assemble_ralp, edge_costs, flows_from_states};
pub use simplex::{solve_lp, LinearProgram, Row, RowKind, SimplexSolution, Status};
pub use trellis::{build_trellis, State, Trellis, TrellisEdge};
