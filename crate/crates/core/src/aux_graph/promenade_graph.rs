use std::collections::BTreeMap;

use super::{check_atoms, AtomPath, AuxGraph, Hyperpromenade};
use crate::error::Result;

/// The graph whose vertices are the labels touched by a hyperpromenade's
/// atom endpoints, whose edges are the atoms, and whose hyperedges are the
/// interleaver groups restricted to those labels.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperpromenadeGraph {
    /// Sorted 0-based labels.
    pub vertices: Vec<usize>,
    pub atoms: Vec<AtomPath>,
    pub atom_costs: Vec<f64>,
    /// group index -> labels of that group present in `vertices`
    pub hyperedges: BTreeMap<usize, Vec<usize>>,
    /// Components as atom index lists, ordered by smallest label.
    pub components: Vec<Vec<usize>>,
}

impl HyperpromenadeGraph {
    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }

    /// Degree of each group node once every hyperedge is contracted to a point.
    pub fn contracted_degrees(&self, theta: &AuxGraph) -> BTreeMap<usize, usize> {
        let mut deg = BTreeMap::new();
        for a in &self.atoms {
            *deg.entry(theta.interleaver().group_of(a.sigma)).or_insert(0) += 1;
            *deg.entry(theta.interleaver().group_of(a.tau)).or_insert(0) += 1;
        }
        deg
    }

    pub fn component(&self, c: usize) -> Hyperpromenade {
        Hyperpromenade::new(self.components[c].iter().map(|&i| self.atoms[i]).collect())
    }

    pub fn component_cost(&self, c: usize) -> f64 {
        self.components[c].iter().map(|&i| self.atom_costs[i]).sum()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

pub fn build_hyperpromenade_graph(theta: &AuxGraph, psi: &Hyperpromenade) -> Result<HyperpromenadeGraph> {
    check_atoms(theta, psi)?;
    let il = theta.interleaver();
    let mut vertices: Vec<usize> = psi.atoms.iter().flat_map(|a| [a.sigma, a.tau]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let index = |v: usize| vertices.binary_search(&v).expect("endpoint label");

    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    for a in &psi.atoms {
        union(&mut parent, index(a.sigma), index(a.tau));
    }
    let mut hyperedges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in &vertices {
        hyperedges.entry(il.group_of(v)).or_default().push(v);
    }
    for members in hyperedges.values() {
        for w in members.windows(2) {
            union(&mut parent, index(w[0]), index(w[1]));
        }
    }

    // Roots are the smallest index in each set, so ordering by root orders
    // components by smallest label.
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, a) in psi.atoms.iter().enumerate() {
        let r = find(&mut parent, index(a.sigma));
        by_root.entry(r).or_default().push(i);
    }
    let atom_costs = psi.atoms.iter().map(|a| theta.path_cost(a.sigma, a.tau)).collect();
    Ok(HyperpromenadeGraph {
        vertices,
        atoms: psi.atoms.clone(),
        atom_costs,
        hyperedges,
        components: by_root.into_values().collect(),
    })
}
