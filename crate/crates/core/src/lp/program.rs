use super::simplex::{LinearProgram, RowKind};
use super::trellis::{State, Trellis};
use crate::channel::LlrVector;
use crate::encoder::GroupedInterleaver;
use crate::error::{Error, Result};

fn check_dims(trellis: &Trellis, llrs: &LlrVector, il: &GroupedInterleaver) -> Result<()> {
    let n = trellis.n();
    if il.n() != n {
        return Err(Error::DimensionMismatch(format!("interleaver n = {} vs trellis n = {n}", il.n())));
    }
    if llrs.len() != n && llrs.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!("{} LLRs for block length {n}", llrs.len())));
    }
    Ok(())
}

/// Edge costs: `γ_i` on the output-1 edges of segment `i + 1`, zero elsewhere.
pub fn edge_costs(trellis: &Trellis, llrs: &LlrVector) -> Vec<f64> {
    trellis
        .edges()
        .iter()
        .map(|e| if e.segment <= trellis.n() && e.output == 1 { llrs.values[e.segment - 1] } else { 0.0 })
        .collect()
}

/// The relaxation over edge flows `f_e` (variables `0..|E|`) and info-bit
/// values `x_t` (variables `|E|..|E| + k`).
///
/// Rows, in order: unit flow out of the start state, conservation at every
/// interior state, and `x_t - Σ_{e ∈ I_i} f_e = 0` for each group `t` and
/// position `i` in it.
pub fn assemble_ralp(trellis: &Trellis, llrs: &LlrVector, il: &GroupedInterleaver) -> Result<LinearProgram> {
    check_dims(trellis, llrs, il)?;
    let ne = trellis.edges().len();
    let mut objective = edge_costs(trellis, llrs);
    objective.resize(ne + il.k(), 0.0);
    let mut lp = LinearProgram::unit_box(objective);

    let source = trellis.source();
    let out: Vec<(usize, f64)> = (0..ne).filter(|&e| trellis.edges()[e].tail == source).map(|e| (e, 1.0)).collect();
    lp.add_row(out, RowKind::Equal, 1.0);

    let mut incident: std::collections::HashMap<State, Vec<(usize, f64)>> = std::collections::HashMap::new();
    for (e, edge) in trellis.edges().iter().enumerate() {
        incident.entry(edge.head).or_default().push((e, 1.0));
        incident.entry(edge.tail).or_default().push((e, -1.0));
    }
    for s in trellis.interior_states() {
        lp.add_row(incident.remove(&s).unwrap_or_default(), RowKind::Equal, 0.0);
    }

    for (t, group) in il.groups().iter().enumerate() {
        for &i in group {
            let mut row = vec![(ne + t, 1.0)];
            row.extend(trellis.input1_pairs(i + 1).into_iter().map(|e| (e, -1.0)));
            lp.add_row(row, RowKind::Equal, 0.0);
        }
    }
    Ok(lp)
}

/// The same relaxation written over state occupancies.
///
/// Variable `i - 1` is `a_i`, the flow through state `s_i^1` for
/// `i = 1..=n`; variable `n + t` is `x_t`. Each segment contributes the four
/// facets of the even-parity polytope on `(a_{i-1}, a_i, x_{t(i)})` with
/// `a_0 = 0`. Edge flows are recovered uniquely by [`flows_from_states`], so
/// vertices and objective values coincide with [`assemble_ralp`].
pub fn assemble_projected(trellis: &Trellis, llrs: &LlrVector, il: &GroupedInterleaver) -> Result<LinearProgram> {
    check_dims(trellis, llrs, il)?;
    let n = trellis.n();
    let mut objective = llrs.values[..n].to_vec();
    objective.resize(n + il.k(), 0.0);
    let mut lp = LinearProgram::unit_box(objective);
    for i in 1..=n {
        let cur = i - 1;
        let x = n + il.group_of(i - 1);
        if i == 1 {
            // a_1 = x
            lp.add_row(vec![(cur, 1.0), (x, -1.0)], RowKind::LessEqual, 0.0);
            lp.add_row(vec![(cur, -1.0), (x, 1.0)], RowKind::LessEqual, 0.0);
            continue;
        }
        let prev = i - 2;
        lp.add_row(vec![(cur, 1.0), (prev, -1.0), (x, -1.0)], RowKind::LessEqual, 0.0);
        lp.add_row(vec![(prev, 1.0), (cur, -1.0), (x, -1.0)], RowKind::LessEqual, 0.0);
        lp.add_row(vec![(x, 1.0), (prev, -1.0), (cur, -1.0)], RowKind::LessEqual, 0.0);
        lp.add_row(vec![(x, 1.0), (prev, 1.0), (cur, 1.0)], RowKind::LessEqual, 2.0);
    }
    Ok(lp)
}

/// Edge flows determined by state occupancies `a` (length `n`) and info-bit
/// values `x`.
pub fn flows_from_states(trellis: &Trellis, a: &[f64], x: &[f64], il: &GroupedInterleaver) -> Vec<f64> {
    let n = trellis.n();
    let mut f = vec![0.0; trellis.edges().len()];
    for (e, edge) in trellis.edges().iter().enumerate() {
        let i = edge.segment;
        f[e] = if i == n + 1 {
            if edge.tail.bit == 1 {
                a[n - 1]
            } else {
                1.0 - a[n - 1]
            }
        } else if i == 1 {
            if edge.head.bit == 1 {
                a[0]
            } else {
                1.0 - a[0]
            }
        } else {
            let (p, c, u) = (a[i - 2], a[i - 1], x[il.group_of(i - 1)]);
            let w = 0.5 * (u - p + c);
            match (edge.tail.bit, edge.head.bit) {
                (0, 0) => 1.0 - p - w,
                (0, 1) => w,
                (1, 1) => c - w,
                _ => p - c + w,
            }
        };
    }
    f
}

#[cfg(test)]
mod tests {
    use super::super::trellis::build_trellis;
    use super::*;
    use crate::encoder::{encode, DegreeDistribution};

    fn small() -> (DegreeDistribution, GroupedInterleaver) {
        let dd = DegreeDistribution::regular(2, 2).unwrap();
        let il = GroupedInterleaver::new(vec![vec![0, 2], vec![1, 3]], 4).unwrap();
        (dd, il)
    }

    #[test]
    fn sizes_and_entries() {
        let (dd, il) = small();
        let t = build_trellis(&dd);
        let lp = assemble_ralp(&t, &LlrVector::rescaled(vec![1.0; 5]), &il).unwrap();
        assert_eq!(lp.num_vars(), 18);
        assert_eq!(lp.num_equalities(), 1 + 8 + 4);
        assert!(lp.rows.iter().all(|r| r.coeffs.iter().all(|&(_, a)| a == 1.0 || a == -1.0)));
        assert!(assemble_ralp(&t, &LlrVector::rescaled(vec![1.0; 3]), &il).is_err());
    }

    #[test]
    fn codewords_are_feasible_flows() {
        let dd = DegreeDistribution::regular(3, 3).unwrap();
        let il = GroupedInterleaver::new(vec![vec![0, 4, 8], vec![1, 3, 6], vec![2, 5, 7]], 9).unwrap();
        let t = build_trellis(&dd);
        let gamma: Vec<f64> = (0..9).map(|i| i as f64 - 3.5).collect();
        let llrs = LlrVector::rescaled(gamma.clone());
        let lp = assemble_ralp(&t, &llrs, &il).unwrap();
        let proj = assemble_projected(&t, &llrs, &il).unwrap();
        for u in 0..8u8 {
            let info: Vec<u8> = (0..3).map(|b| (u >> b) & 1).collect();
            let cw = encode(&info, &dd, &il).unwrap();
            let stream: Vec<u8> = (0..9).map(|j| info[il.group_of(j)]).collect();
            let mut y = vec![0.0; lp.num_vars()];
            for e in t.path(&stream).unwrap() {
                y[e] = 1.0;
            }
            for (tt, &b) in info.iter().enumerate() {
                y[t.edges().len() + tt] = f64::from(b);
            }
            assert_eq!(lp.max_violation(&y), 0.0);
            let cost: f64 = (0..9).filter(|&i| cw.bits[i] == 1).map(|i| gamma[i]).sum();
            assert_eq!(lp.objective_value(&y), cost);

            // the projected point maps back to the same flow
            let mut z: Vec<f64> = cw.bits[..9].iter().map(|&b| f64::from(b)).collect();
            z.extend(info.iter().map(|&b| f64::from(b)));
            assert_eq!(proj.max_violation(&z), 0.0);
            assert_eq!(proj.objective_value(&z), cost);
            let f = flows_from_states(&t, &z[..9], &z[9..], &il);
            assert_eq!(&f[..], &y[..t.edges().len()]);
        }
    }

    #[test]
    fn fractional_states_give_feasible_flows() {
        let (dd, il) = small();
        let t = build_trellis(&dd);
        let a = [0.5, 0.5, 0.0, 0.5];
        let x = [0.5, 0.5];
        let llrs = LlrVector::rescaled(vec![1.0; 4]);
        let proj = assemble_projected(&t, &llrs, &il).unwrap();
        let mut z = a.to_vec();
        z.extend(x);
        assert!(proj.max_violation(&z) < 1e-15);
        let full = assemble_ralp(&t, &llrs, &il).unwrap();
        let mut y = flows_from_states(&t, &a, &x, &il);
        y.extend(x);
        assert!(full.max_violation(&y) < 1e-15);
    }
}
