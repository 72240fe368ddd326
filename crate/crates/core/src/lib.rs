//! Workbench for repeat-accumulate (RA) codes under linear-programming decoding.
//!
//! The crate covers the whole chain from code construction to analysis:
//!
//! * [`channel`]: BSC and binary-input AWGN channels, LLRs and their
//!   conditional distributions.
//! * [`encoder`]: repetition, interleaving, accumulation and trellis termination.
//! * [`girth`]: the greedy high-girth hyperedge matching and girth verification.
//! * [`aux_graph`]: the analysis graph, hyperpromenades and failure witnesses.
//! * [`lp`]: the accumulator trellis, the RA linear program and its simplex solver.
//! * [`bounds`]: union bounds and thresholds on the word error probability.
//! * [`sim`]: seeded Monte Carlo estimation of the word error rate.

pub mod aux_graph;
pub mod bounds;
pub mod channel;
pub mod encoder;
pub mod error;
pub mod girth;
pub mod lp;
pub mod sim;

pub use error::{Error, Result};
