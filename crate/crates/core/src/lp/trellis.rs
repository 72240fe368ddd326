use crate::encoder::DegreeDistribution;
use crate::error::{Error, Result};

/// Accumulator state `s_layer^bit`. Layer 0 holds the start state, layers
/// `1..=n` follow the code segments, layer `n + 1` is the terminal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    pub layer: usize,
    pub bit: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrellisEdge {
    /// Segment `i` joins layer `i - 1` to layer `i`; segment `n + 1` terminates.
    pub segment: usize,
    pub tail: State,
    pub head: State,
    pub input: u8,
    pub output: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    n: usize,
    edges: Vec<TrellisEdge>,
    /// `starts[i - 1]` is the index of the first edge of segment `i`.
    starts: Vec<usize>,
}

impl Trellis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[TrellisEdge] {
        &self.edges
    }

    /// Edge indices of segment `i` in `1..=n + 1`.
    pub fn segment(&self, i: usize) -> std::ops::Range<usize> {
        self.starts[i - 1]..self.starts.get(i).copied().unwrap_or(self.edges.len())
    }

    /// `I_i`: the input-1 edges entering layer `i`.
    pub fn input1_pairs(&self, i: usize) -> Vec<usize> {
        self.segment(i).filter(|&e| self.edges[e].input == 1).collect()
    }

    /// Interior states, layers `1..=n`, in a fixed order.
    pub fn interior_states(&self) -> impl Iterator<Item = State> + '_ {
        (1..=self.n).flat_map(|layer| [0, 1].map(|bit| State { layer, bit }))
    }

    pub fn source(&self) -> State {
        State { layer: 0, bit: 0 }
    }

    pub fn sink(&self) -> State {
        State { layer: self.n + 1, bit: 0 }
    }

    /// Edge indices of the path driven by `inputs` (length `n`), including
    /// the terminating edge.
    pub fn path(&self, inputs: &[u8]) -> Result<Vec<usize>> {
        if inputs.len() != self.n {
            return Err(Error::DimensionMismatch(format!("{} inputs for {} segments", inputs.len(), self.n)));
        }
        let mut state = 0u8;
        let mut path = Vec::with_capacity(self.n + 1);
        for i in 1..=self.n + 1 {
            let input = if i <= self.n { inputs[i - 1] & 1 } else { state };
            let e = self
                .segment(i)
                .find(|&e| self.edges[e].tail.bit == state && self.edges[e].input == input)
                .expect("every state has both inputs");
            state = self.edges[e].head.bit;
            path.push(e);
        }
        Ok(path)
    }
}

/// Accumulator trellis for block length `n = dd.n()`.
pub fn build_trellis(dd: &DegreeDistribution) -> Trellis {
    let n = dd.n();
    let mut edges = Vec::with_capacity(4 * n);
    let mut starts = Vec::with_capacity(n + 1);
    for i in 1..=n {
        starts.push(edges.len());
        let tails: &[u8] = if i == 1 { &[0] } else { &[0, 1] };
        for &t in tails {
            for input in [0u8, 1] {
                let h = t ^ input;
                edges.push(TrellisEdge {
                    segment: i,
                    tail: State { layer: i - 1, bit: t },
                    head: State { layer: i, bit: h },
                    input,
                    output: h,
                });
            }
        }
    }
    starts.push(edges.len());
    for t in [0u8, 1] {
        edges.push(TrellisEdge {
            segment: n + 1,
            tail: State { layer: n, bit: t },
            head: State { layer: n + 1, bit: 0 },
            input: t,
            output: 0,
        });
    }
    Trellis { n, edges, starts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_counts() {
        let t = build_trellis(&DegreeDistribution::regular(2, 2).unwrap());
        assert_eq!(t.edges().len(), 16);
        assert_eq!(t.segment(1).len(), 2);
        assert_eq!(t.segment(2).len(), 4);
        assert_eq!(t.segment(5).len(), 2);
        for i in 1..=5 {
            for &e in &t.input1_pairs(i) {
                let edge = t.edges()[e];
                assert_ne!(edge.tail.bit, edge.head.bit);
            }
        }
        assert_eq!(t.input1_pairs(1).len(), 1);
        assert_eq!(t.input1_pairs(3).len(), 2);
    }

    #[test]
    fn dynamics() {
        let t = build_trellis(&DegreeDistribution::regular(3, 2).unwrap());
        for e in t.edges() {
            if e.segment <= t.n() {
                assert_eq!(e.head.bit, e.tail.bit ^ e.input);
                assert_eq!(e.output, e.head.bit);
            } else {
                assert_eq!(e.head, t.sink());
                assert_eq!(e.output, 0);
            }
            assert_eq!(e.head.layer, e.tail.layer + 1);
        }
        let zero = t.path(&[0; 6]).unwrap();
        assert!(zero.iter().all(|&e| t.edges()[e].output == 0 && t.edges()[e].input == 0));
        let p = t.path(&[1, 0, 0, 1, 1, 0]).unwrap();
        let outs: Vec<u8> = p.iter().map(|&e| t.edges()[e].output).collect();
        assert_eq!(outs, vec![1, 1, 1, 0, 1, 1, 0]);
        assert_eq!(t.edges()[p[6]].input, 1);
    }
}
