//! Bounded-variable primal simplex on a dense tableau.
//!
//! Nonbasic variables sit at one of their bounds. Rows are turned into
//! equalities with a slack per `≤` row; rows whose slack cannot start
//! feasible get an artificial variable and a first phase that minimises the
//! artificial sum. Pricing is Dantzig's rule until `10 · #variables`
//! degenerate pivots have been seen, then Bland's rule for the rest of the
//! solve.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Equal,
    LessEqual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub kind: RowKind,
    pub rhs: f64,
}

/// `minimise objective · y` subject to the rows and `lower ≤ y ≤ upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// All variables boxed in `[0, 1]`.
    pub fn unit_box(objective: Vec<f64>) -> Self {
        let m = objective.len();
        LinearProgram { objective, rows: Vec::new(), lower: vec![0.0; m], upper: vec![1.0; m] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, kind: RowKind, rhs: f64) {
        self.rows.push(Row { coeffs, kind, rhs });
    }

    pub fn num_equalities(&self) -> usize {
        self.rows.iter().filter(|r| r.kind == RowKind::Equal).count()
    }

    /// Largest violation of any row or bound.
    pub fn max_violation(&self, y: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| {
            let lhs: f64 = r.coeffs.iter().map(|&(j, a)| a * y[j]).sum();
            match r.kind {
                RowKind::Equal => (lhs - r.rhs).abs(),
                RowKind::LessEqual => (lhs - r.rhs).max(0.0),
            }
        });
        let bounds = y.iter().enumerate().map(|(j, &v)| (self.lower[j] - v).max(v - self.upper[j]).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        self.objective.iter().zip(y).map(|(c, v)| c * v).sum()
    }

    fn check(&self) -> Result<()> {
        let m = self.num_vars();
        if self.lower.len() != m || self.upper.len() != m {
            return Err(Error::DimensionMismatch("bound vectors do not match the objective".into()));
        }
        for j in 0..m {
            if !self.lower[j].is_finite() || self.lower[j] > self.upper[j] {
                return Err(Error::Solver(format!("variable {j} has bounds [{}, {}]", self.lower[j], self.upper[j])));
            }
        }
        for r in &self.rows {
            if r.coeffs.iter().any(|&(j, _)| j >= m) {
                return Err(Error::DimensionMismatch("row references an unknown variable".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub status: Status,
    /// Values of the structural variables.
    pub values: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
    /// True once the degenerate-pivot budget forced Bland's rule.
    pub used_bland: bool,
}

const PIVOT_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const ZERO: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Moved,
    Optimal,
    Unbounded,
}

struct Tableau {
    m: usize,
    cols: usize,
    t: Vec<f64>,
    /// Current values of the basic variables.
    beta: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    at_upper: Vec<bool>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    d: Vec<f64>,
    pivots: usize,
    degenerate: usize,
    bland: bool,
    nz: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, j: usize) -> f64 {
        self.t[r * self.cols + j]
    }

    fn value(&self, j: usize) -> f64 {
        if self.at_upper[j] {
            self.upper[j]
        } else {
            self.lower[j]
        }
    }

    fn reduced_costs(&mut self, cost: &[f64]) {
        self.d = cost.to_vec();
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.t[r * self.cols..(r + 1) * self.cols];
                for (dj, &a) in self.d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        for r in 0..self.m {
            self.d[self.basis[r]] = 0.0;
        }
    }

    fn entering(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols {
            if self.is_basic[j] || self.upper[j] - self.lower[j] <= 0.0 {
                continue;
            }
            let dir = if !self.at_upper[j] && self.d[j] < -OPT_TOL {
                1.0
            } else if self.at_upper[j] && self.d[j] > OPT_TOL {
                -1.0
            } else {
                continue;
            };
            if self.bland {
                return Some((j, dir));
            }
            if best.is_none_or(|(b, _)| self.d[j].abs() > self.d[b].abs()) {
                best = Some((j, dir));
            }
        }
        best
    }

    fn step(&mut self, budget: usize) -> Step {
        let Some((j, dir)) = self.entering() else {
            return Step::Optimal;
        };
        // ratio test
        let mut limit = self.upper[j] - self.lower[j];
        let mut leave: Option<(usize, bool)> = None;
        for r in 0..self.m {
            let a = self.at(r, j);
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basis[r];
            let rate = -dir * a;
            let room = if rate < 0.0 {
                (self.beta[r] - self.lower[b]).max(0.0) / -rate
            } else {
                (self.upper[b] - self.beta[r]).max(0.0) / rate
            };
            let better = match leave {
                None => room < limit,
                Some((lr, _)) => {
                    room < limit - ZERO
                        || (room <= limit + ZERO
                            && if self.bland { b < self.basis[lr] } else { a.abs() > self.at(lr, j).abs() })
                }
            };
            if better {
                limit = room;
                leave = Some((r, rate > 0.0));
            }
        }
        if limit.is_infinite() {
            return Step::Unbounded;
        }
        if limit <= ZERO {
            self.degenerate += 1;
            if self.degenerate > budget {
                self.bland = true;
            }
        }
        for r in 0..self.m {
            let a = self.at(r, j);
            if a != 0.0 {
                self.beta[r] -= dir * a * limit;
            }
        }
        let entering_value = self.value(j) + dir * limit;
        match leave {
            None => self.at_upper[j] = !self.at_upper[j],
            Some((r, to_upper)) => {
                let b = self.basis[r];
                self.is_basic[b] = false;
                self.at_upper[b] = to_upper;
                self.pivot(r, j);
                self.basis[r] = j;
                self.is_basic[j] = true;
                self.at_upper[j] = false;
                self.beta[r] = entering_value;
            }
        }
        self.pivots += 1;
        Step::Moved
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let p = self.at(r, j);
        self.nz.clear();
        for c in 0..cols {
            let v = &mut self.t[r * cols + c];
            if v.abs() < ZERO {
                *v = 0.0;
            } else {
                *v /= p;
                self.nz.push(c);
            }
        }
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * cols + j];
            if f == 0.0 {
                continue;
            }
            let (pivot_row, row) = if i < r {
                let (a, b) = self.t.split_at_mut(r * cols);
                (&b[..cols], &mut a[i * cols..(i + 1) * cols])
            } else {
                let (a, b) = self.t.split_at_mut(i * cols);
                (&a[r * cols..(r + 1) * cols], &mut b[..cols])
            };
            for &c in &self.nz {
                row[c] -= f * pivot_row[c];
            }
            row[j] = 0.0;
        }
        let f = self.d[j];
        if f != 0.0 {
            for &c in &self.nz {
                self.d[c] -= f * self.t[r * cols + c];
            }
            self.d[j] = 0.0;
        }
    }

    fn run(&mut self, budget: usize, max_iter: usize) -> Result<Step> {
        for _ in 0..max_iter {
            match self.step(budget) {
                Step::Moved => {}
                done => return Ok(done),
            }
        }
        Err(Error::Solver(format!("no convergence after {max_iter} iterations")))
    }
}

/// Solves `lp` to an optimal vertex.
pub fn solve_lp(lp: &LinearProgram) -> Result<SimplexSolution> {
    lp.check()?;
    let nv = lp.num_vars();
    let m = lp.rows.len();

    // Residual of each row with every structural variable at its lower bound.
    let resid: Vec<f64> =
        lp.rows.iter().map(|r| r.rhs - r.coeffs.iter().map(|&(j, a)| a * lp.lower[j]).sum::<f64>()).collect();
    let slack_ok = |r: usize| lp.rows[r].kind == RowKind::LessEqual && resid[r] >= 0.0;
    let n_slack = lp.rows.iter().filter(|r| r.kind == RowKind::LessEqual).count();
    let n_art = (0..m).filter(|&r| !slack_ok(r)).count();

    if n_art == 0 && lp.objective.iter().all(|&c| c >= -OPT_TOL) {
        // Every variable at its lower bound is already optimal.
        let values = lp.lower.clone();
        let objective = lp.objective_value(&values);
        return Ok(SimplexSolution { status: Status::Optimal, values, objective, pivots: 0, used_bland: false });
    }

    let cols = nv + n_slack + n_art;
    let mut t = vec![0.0; m * cols];
    let mut lower = lp.lower.clone();
    let mut upper = lp.upper.clone();
    lower.resize(cols, 0.0);
    upper.resize(cols, f64::INFINITY);
    let mut basis = vec![0; m];
    let mut beta = vec![0.0; m];
    let (mut s, mut a) = (nv, nv + n_slack);
    let mut art_cols = Vec::with_capacity(n_art);
    for (r, row) in lp.rows.iter().enumerate() {
        // Artificial rows are negated when their residual is negative so
        // that the artificial starts nonnegative.
        let sign = if slack_ok(r) || resid[r] >= 0.0 { 1.0 } else { -1.0 };
        for &(j, v) in &row.coeffs {
            t[r * cols + j] += sign * v;
        }
        if row.kind == RowKind::LessEqual {
            t[r * cols + s] = sign;
            if slack_ok(r) {
                basis[r] = s;
            }
            s += 1;
        }
        if !slack_ok(r) {
            t[r * cols + a] = 1.0;
            basis[r] = a;
            art_cols.push(a);
            a += 1;
        }
        beta[r] = sign * resid[r];
    }
    let mut is_basic = vec![false; cols];
    for &b in &basis {
        is_basic[b] = true;
    }
    let mut tab = Tableau {
        m,
        cols,
        t,
        beta,
        basis,
        is_basic,
        at_upper: vec![false; cols],
        lower,
        upper,
        d: Vec::new(),
        pivots: 0,
        degenerate: 0,
        bland: false,
        nz: Vec::with_capacity(cols),
    };
    let budget = 10 * cols;
    let max_iter = 200 * (cols + m) + 1000;

    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        for &c in &art_cols {
            phase1[c] = 1.0;
        }
        tab.reduced_costs(&phase1);
        tab.run(budget, max_iter)?;
        let infeas: f64 = (0..m).filter(|&r| tab.basis[r] >= nv + n_slack).map(|r| tab.beta[r]).sum();
        if infeas > 1e-7 {
            return Ok(SimplexSolution {
                status: Status::Infeasible,
                values: vec![f64::NAN; nv],
                objective: f64::NAN,
                pivots: tab.pivots,
                used_bland: tab.bland,
            });
        }
        for &c in &art_cols {
            tab.upper[c] = 0.0;
            tab.at_upper[c] = false;
        }
    }
    let mut cost = lp.objective.clone();
    cost.resize(cols, 0.0);
    tab.reduced_costs(&cost);
    if tab.run(budget, max_iter)? == Step::Unbounded {
        return Ok(SimplexSolution {
            status: Status::Unbounded,
            values: vec![f64::NAN; nv],
            objective: f64::NEG_INFINITY,
            pivots: tab.pivots,
            used_bland: tab.bland,
        });
    }
    let mut values: Vec<f64> = (0..nv).map(|j| tab.value(j)).collect();
    for r in 0..m {
        if tab.basis[r] < nv {
            values[tab.basis[r]] = tab.beta[r];
        }
    }
    let objective = lp.objective_value(&values);
    Ok(SimplexSolution { status: Status::Optimal, values, objective, pivots: tab.pivots, used_bland: tab.bland })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimise_single_variable() {
        let lp = LinearProgram::unit_box(vec![1.0]);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert_eq!(s.values, vec![0.0]);
        assert_eq!(s.objective, 0.0);

        let lp = LinearProgram::unit_box(vec![-1.0]);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.values, vec![1.0]);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
        let mut lp = LinearProgram {
            objective: vec![-3.0, -5.0],
            rows: vec![],
            lower: vec![0.0; 2],
            upper: vec![f64::INFINITY; 2],
        };
        lp.add_row(vec![(0, 1.0)], RowKind::LessEqual, 4.0);
        lp.add_row(vec![(1, 2.0)], RowKind::LessEqual, 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], RowKind::LessEqual, 18.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.values[0] - 2.0).abs() < 1e-12 && (s.values[1] - 6.0).abs() < 1e-12);
        assert!((s.objective + 36.0).abs() < 1e-12);
    }

    #[test]
    fn equality_needs_phase_one() {
        // x + y = 1.5, y - x <= -0.5, min y  ->  (1, 0.5)
        let mut lp = LinearProgram::unit_box(vec![0.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], RowKind::Equal, 1.5);
        lp.add_row(vec![(0, -1.0), (1, 1.0)], RowKind::LessEqual, -0.5);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.values[0] - 1.0).abs() < 1e-12);
        assert!((s.values[1] - 0.5).abs() < 1e-12);
        assert!(lp.max_violation(&s.values) < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::unit_box(vec![1.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], RowKind::Equal, 3.0);
        assert_eq!(solve_lp(&lp).unwrap().status, Status::Infeasible);

        let mut lp = LinearProgram {
            objective: vec![-1.0, 0.0],
            rows: vec![],
            lower: vec![0.0; 2],
            upper: vec![f64::INFINITY; 2],
        };
        lp.add_row(vec![(0, 1.0), (1, -1.0)], RowKind::LessEqual, 1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under Dantzig's rule without anti-cycling.
        let mut lp = LinearProgram {
            objective: vec![-0.75, 150.0, -0.02, 6.0],
            rows: vec![],
            lower: vec![0.0; 4],
            upper: vec![f64::INFINITY; 4],
        };
        lp.add_row(vec![(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], RowKind::LessEqual, 0.0);
        lp.add_row(vec![(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], RowKind::LessEqual, 0.0);
        lp.add_row(vec![(2, 1.0)], RowKind::LessEqual, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective + 0.05).abs() < 1e-12);
    }

    /// Brute-force oracle for tiny boxed problems: the optimum of a bounded
    /// LP is attained at a vertex, and every vertex is the unique solution
    /// of some choice of tight constraints.
    fn vertex_enumeration(lp: &LinearProgram) -> Option<f64> {
        let n = lp.num_vars();
        let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
        for r in &lp.rows {
            let mut a = vec![0.0; n];
            for &(j, v) in &r.coeffs {
                a[j] += v;
            }
            planes.push((a, r.rhs));
        }
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            planes.push((e.clone(), lp.lower[j]));
            planes.push((e, lp.upper[j]));
        }
        let mut best: Option<f64> = None;
        let p = planes.len();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            // Gaussian elimination on the chosen planes.
            let mut m: Vec<Vec<f64>> = idx
                .iter()
                .map(|&i| {
                    let mut row = planes[i].0.clone();
                    row.push(planes[i].1);
                    row
                })
                .collect();
            let mut ok = true;
            for c in 0..n {
                let piv = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
                if m[piv][c].abs() < 1e-9 {
                    ok = false;
                    break;
                }
                m.swap(c, piv);
                let pivot = m[c].clone();
                for (r, row) in m.iter_mut().enumerate() {
                    if r != c {
                        let f = row[c] / pivot[c];
                        for (a, b) in row[c..=n].iter_mut().zip(&pivot[c..=n]) {
                            *a -= f * b;
                        }
                    }
                }
            }
            if ok {
                let y: Vec<f64> = (0..n).map(|i| m[i][n] / m[i][i]).collect();
                if lp.max_violation(&y) < 1e-9 {
                    let v = lp.objective_value(&y);
                    best = Some(best.map_or(v, |b: f64| b.min(v)));
                }
            }
            // next combination
            let mut i = n;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if idx[i] < p - n + i {
                    idx[i] += 1;
                    for k in i + 1..n {
                        idx[k] = idx[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_vertex_enumeration(
            c in prop::collection::vec(-3i32..=3, 3),
            rows in prop::collection::vec((prop::collection::vec(-2i32..=2, 3), -2i32..=3, any::<bool>()), 1..4),
        ) {
            let mut lp = LinearProgram::unit_box(c.iter().map(|&v| f64::from(v)).collect());
            for (a, b, eq) in rows {
                let coeffs = a.iter().enumerate().map(|(j, &v)| (j, f64::from(v))).collect();
                let kind = if eq { RowKind::Equal } else { RowKind::LessEqual };
                lp.add_row(coeffs, kind, f64::from(b));
            }
            let s = solve_lp(&lp).unwrap();
            match vertex_enumeration(&lp) {
                None => prop_assert_eq!(s.status, Status::Infeasible),
                Some(v) => {
                    prop_assert_eq!(s.status, Status::Optimal);
                    prop_assert!((s.objective - v).abs() < 1e-9, "{} vs {}", s.objective, v);
                    prop_assert!(lp.max_violation(&s.values) < 1e-9);
                }
            }
        }
    }
}
