//! Dense revised simplex for `min d·u  s.t.  M u >= q, u >= 0`.
//!
//! The solver works on the equality form `M u - s = q` whose column set is
//! `[M, -I]`; a [`Basis`] indexes into that set, so index `cols + i` is the
//! surplus of row `i`. The basis inverse is kept explicitly and updated in
//! product form, with a fresh Gauss-Jordan factorization every
//! [`SimplexOptions::refactor_every`] pivots.
//!
//! Phase 1 always starts from some basis (the all-surplus basis when cold,
//! the caller's basis when warm) and, if that basis is primal infeasible,
//! adds one artificial column that absorbs every negative basic value at
//! once. Minimizing the artificial restores feasibility without discarding
//! the warm basis.

use std::fmt::Write as _;

use ndarray::{s, Array1, Array2, ArrayView1, Axis};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub matrix: Array2<f64>,
    pub rhs: Array1<f64>,
    pub cost: Array1<f64>,
}

impl LpProblem {
    pub fn new(matrix: Array2<f64>, rhs: Array1<f64>, cost: Array1<f64>) -> Result<Self> {
        if matrix.nrows() != rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "LP matrix has {} rows but rhs has {} entries",
                matrix.nrows(),
                rhs.len()
            )));
        }
        if matrix.ncols() != cost.len() {
            return Err(Error::DimensionMismatch(format!(
                "LP matrix has {} columns but cost has {} entries",
                matrix.ncols(),
                cost.len()
            )));
        }
        if !matrix.iter().chain(rhs.iter()).chain(cost.iter()).all(|v| v.is_finite()) {
            return Err(Error::validation("lp", "non-finite coefficient"));
        }
        Ok(LpProblem { matrix, rhs, cost })
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Appends one row `coeffs · u >= rhs`.
    pub fn with_row(&self, coeffs: ArrayView1<f64>, rhs: f64) -> Result<Self> {
        if coeffs.len() != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "new row has {} entries, LP has {} columns",
                coeffs.len(),
                self.cols()
            )));
        }
        let mut matrix = self.matrix.clone();
        matrix
            .push_row(coeffs)
            .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
        let mut rhs_vec = self.rhs.to_vec();
        rhs_vec.push(rhs);
        LpProblem::new(matrix, Array1::from(rhs_vec), self.cost.clone())
    }

    /// Column `j` of the equality-form matrix `[M, -I]`.
    pub fn equality_column(&self, j: usize) -> Array1<f64> {
        let cols = self.cols();
        if j < cols {
            self.matrix.column(j).to_owned()
        } else {
            let mut e = Array1::zeros(self.rows());
            e[j - cols] = -1.0;
            e
        }
    }
}

/// Ordered basic column indices into `[M, -I]`; position `i` of the basis
/// corresponds to row `i` of the basis inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Basis(pub Vec<usize>);

impl Basis {
    /// The all-surplus basis of an LP with `cols` structural columns.
    pub fn slack(rows: usize, cols: usize) -> Self {
        Basis((cols..cols + rows).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Basis for the same LP with `extra` rows appended: the new rows'
    /// surplus columns join the basis.
    pub fn extended(&self, cols: usize, old_rows: usize, extra: usize) -> Self {
        let mut idx = self.0.clone();
        idx.extend((old_rows..old_rows + extra).map(|r| cols + r));
        Basis(idx)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub primal: Array1<f64>,
    pub duals: Array1<f64>,
    pub basis: Basis,
    pub basis_inverse: Array2<f64>,
    /// Basis changes performed, including phase 1.
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Values of the basic variables, `B⁻¹ q`.
    pub fn basic_values(&self, lp: &LpProblem) -> Array1<f64> {
        self.basis_inverse.dot(&lp.rhs)
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub feas_tol: f64,
    pub opt_tol: f64,
    pub pivot_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub refactor_every: usize,
    /// `None` means `200 * (rows + cols) + 1000`.
    pub max_iters: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feas_tol: 1e-7,
            opt_tol: 1e-7,
            pivot_tol: 1e-9,
            bland_after: 50,
            refactor_every: 100,
            max_iters: None,
        }
    }
}

pub fn solve(lp: &LpProblem, warm: Option<&Basis>) -> Result<LpSolution> {
    solve_with(lp, warm, &SimplexOptions::default())
}

pub fn solve_with(lp: &LpProblem, warm: Option<&Basis>, opts: &SimplexOptions) -> Result<LpSolution> {
    let rows = lp.rows();
    let cols = lp.cols();
    if rows == 0 {
        return solve_unconstrained(lp);
    }
    let start = match warm {
        Some(b) => {
            if b.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "warm basis has {} entries, LP has {} rows",
                    b.len(),
                    rows
                )));
            }
            sanitize(b, rows, cols)
        }
        None => Basis::slack(rows, cols).0,
    };
    let mut solver = Revised::new(lp, start, opts)?;
    solver.run()
}

fn solve_unconstrained(lp: &LpProblem) -> Result<LpSolution> {
    let unbounded = lp.cost.iter().any(|&c| c < 0.0);
    Ok(LpSolution {
        status: if unbounded { LpStatus::Unbounded } else { LpStatus::Optimal },
        objective: if unbounded { f64::NEG_INFINITY } else { 0.0 },
        primal: Array1::zeros(lp.cols()),
        duals: Array1::zeros(0),
        basis: Basis(Vec::new()),
        basis_inverse: Array2::zeros((0, 0)),
        pivots: 0,
    })
}

/// Replaces out-of-range and duplicate indices by unused surplus columns.
fn sanitize(b: &Basis, rows: usize, cols: usize) -> Vec<usize> {
    let total = rows + cols;
    let mut seen = vec![false; total];
    let mut idx: Vec<Option<usize>> = b
        .0
        .iter()
        .map(|&j| {
            if j < total && !seen[j] {
                seen[j] = true;
                Some(j)
            } else {
                None
            }
        })
        .collect();
    let mut free = (cols..total).filter(|&j| !seen[j]);
    for slot in idx.iter_mut().filter(|s| s.is_none()) {
        *slot = free.next();
    }
    idx.into_iter().map(|j| j.expect("enough surplus columns")).collect()
}

/// Inverts a square matrix by Gauss-Jordan elimination with partial pivoting.
pub(crate) fn invert(m: &Array2<f64>, pivot_tol: f64) -> Option<Array2<f64>> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut inv = Array2::<f64>::eye(n);
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, a[[i, k]].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < pivot_tol {
            return None;
        }
        if p != k {
            for j in 0..n {
                a.swap([p, j], [k, j]);
                inv.swap([p, j], [k, j]);
            }
        }
        let piv = a[[k, k]];
        a.row_mut(k).mapv_inplace(|v| v / piv);
        inv.row_mut(k).mapv_inplace(|v| v / piv);
        let arow = a.row(k).to_owned();
        let irow = inv.row(k).to_owned();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[[i, k]];
            if f != 0.0 {
                a.row_mut(i).scaled_add(-f, &arow);
                inv.row_mut(i).scaled_add(-f, &irow);
            }
        }
    }
    Some(inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Revised<'a> {
    lp: &'a LpProblem,
    opts: &'a SimplexOptions,
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
    binv: Array2<f64>,
    xb: Array1<f64>,
    /// Artificial column (index `rows + cols`) while phase 1 is active.
    artificial: Option<Array1<f64>>,
    pivots: usize,
    since_refactor: usize,
    degenerate_run: usize,
    iters: usize,
    max_iters: usize,
}

impl<'a> Revised<'a> {
    fn new(lp: &'a LpProblem, start: Vec<usize>, opts: &'a SimplexOptions) -> Result<Self> {
        let rows = lp.rows();
        let cols = lp.cols();
        let mut s = Revised {
            lp,
            opts,
            rows,
            cols,
            basis: start,
            binv: Array2::zeros((rows, rows)),
            xb: Array1::zeros(rows),
            artificial: None,
            pivots: 0,
            since_refactor: 0,
            degenerate_run: 0,
            iters: 0,
            max_iters: opts.max_iters.unwrap_or(200 * (rows + cols) + 1000),
        };
        s.repair_basis();
        s.refactor()?;
        Ok(s)
    }

    fn art_index(&self) -> usize {
        self.rows + self.cols
    }

    fn column(&self, j: usize) -> Array1<f64> {
        if j == self.art_index() {
            self.artificial.clone().expect("artificial column present")
        } else {
            self.lp.equality_column(j)
        }
    }

    fn basis_matrix(&self) -> Array2<f64> {
        let mut b = Array2::zeros((self.rows, self.rows));
        for (k, &j) in self.basis.iter().enumerate() {
            b.column_mut(k).assign(&self.column(j));
        }
        b
    }

    /// Swaps linearly dependent basis columns for surplus columns of rows
    /// that no kept column pivots on.
    fn repair_basis(&mut self) {
        let mut work = self.basis_matrix();
        let n = self.rows;
        let mut row_used = vec![false; n];
        let mut dependent = Vec::new();
        for k in 0..n {
            let (p, best) = (0..n)
                .filter(|&i| !row_used[i])
                .map(|i| (i, work[[i, k]].abs()))
                .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if p == usize::MAX || best < self.opts.pivot_tol {
                dependent.push(k);
                continue;
            }
            row_used[p] = true;
            let prow = work.row(p).to_owned();
            let piv = prow[k];
            for i in 0..n {
                if !row_used[i] {
                    let f = work[[i, k]] / piv;
                    if f != 0.0 {
                        work.row_mut(i).scaled_add(-f, &prow);
                    }
                }
            }
        }
        if dependent.is_empty() {
            return;
        }
        let free_rows: Vec<usize> = (0..n).filter(|&i| !row_used[i]).collect();
        log::debug!("repairing {} dependent basis columns", dependent.len());
        for (k, r) in dependent.into_iter().zip(free_rows) {
            self.basis[k] = self.cols + r;
        }
    }

    fn refactor(&mut self) -> Result<()> {
        let b = self.basis_matrix();
        self.binv = invert(&b, self.opts.pivot_tol * 1e-3)
            .ok_or_else(|| Error::NumericalFailure("singular basis at refactorization".into()))?;
        self.recompute_xb();
        self.since_refactor = 0;
        Ok(())
    }

    fn recompute_xb(&mut self) {
        self.xb = self.binv.dot(&self.lp.rhs);
    }

    fn cost(&self, phase: Phase, j: usize) -> f64 {
        match phase {
            Phase::One => {
                if j == self.art_index() {
                    1.0
                } else {
                    0.0
                }
            }
            Phase::Two => {
                if j < self.cols {
                    self.lp.cost[j]
                } else {
                    0.0
                }
            }
        }
    }

    fn duals(&self, phase: Phase) -> Array1<f64> {
        let cb: Array1<f64> = self.basis.iter().map(|&j| self.cost(phase, j)).collect();
        self.binv.t().dot(&cb)
    }

    /// Reduced costs of every column eligible to enter (basic columns get +inf).
    fn reduced_costs(&self, phase: Phase, y: &Array1<f64>) -> Vec<f64> {
        let mut rc = vec![f64::INFINITY; self.cols + self.rows];
        let mt_y = self.lp.matrix.t().dot(y);
        for j in 0..self.cols {
            rc[j] = self.cost(phase, j) - mt_y[j];
        }
        for r in 0..self.rows {
            rc[self.cols + r] = y[r];
        }
        for &j in &self.basis {
            if j < rc.len() {
                rc[j] = f64::INFINITY;
            }
        }
        rc
    }

    fn choose_entering(&self, rc: &[f64]) -> Option<usize> {
        let tol = self.opts.opt_tol;
        if self.degenerate_run >= self.opts.bland_after {
            rc.iter().position(|&r| r < -tol)
        } else {
            let mut best = None;
            let mut best_val = -tol;
            for (j, &r) in rc.iter().enumerate() {
                if r < best_val {
                    best_val = r;
                    best = Some(j);
                }
            }
            best
        }
    }

    /// Minimum-ratio test; returns the leaving position.
    fn choose_leaving(&self, alpha: &Array1<f64>) -> Option<usize> {
        let bland = self.degenerate_run >= self.opts.bland_after;
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.rows {
            let a = alpha[i];
            if a <= self.opts.pivot_tol {
                continue;
            }
            let ratio = self.xb[i].max(0.0) / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                    let better = if tie {
                        if bland {
                            self.basis[i] < self.basis[bi]
                        } else {
                            a > alpha[bi]
                        }
                    } else {
                        ratio < br
                    };
                    if better {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, entering: usize, alpha: &Array1<f64>) -> Result<()> {
        let ar = alpha[r];
        let theta = self.xb[r] / ar;
        self.xb.scaled_add(-theta, alpha);
        self.xb[r] = theta;
        let mut prow = self.binv.row(r).to_owned();
        prow.mapv_inplace(|v| v / ar);
        for i in 0..self.rows {
            if i != r && alpha[i] != 0.0 {
                self.binv.row_mut(i).scaled_add(-alpha[i], &prow);
            }
        }
        self.binv.row_mut(r).assign(&prow);
        self.basis[r] = entering;
        self.pivots += 1;
        self.since_refactor += 1;
        if self.since_refactor >= self.opts.refactor_every {
            self.refactor()?;
        }
        Ok(())
    }

    fn iterate(&mut self, phase: Phase) -> Result<PhaseEnd> {
        loop {
            self.iters += 1;
            if self.iters > self.max_iters {
                return Err(Error::IterationLimit(self.max_iters));
            }
            let y = self.duals(phase);
            let mut rc = self.reduced_costs(phase, &y);
            if phase == Phase::One {
                if let Some(a) = &self.artificial {
                    if !self.basis.contains(&self.art_index()) {
                        rc.push(1.0 - y.dot(a));
                    }
                }
            }
            let Some(entering) = self.choose_entering(&rc) else {
                return Ok(PhaseEnd::Optimal);
            };
            let alpha = self.binv.dot(&self.column(entering));
            let Some(r) = self.choose_leaving(&alpha) else {
                return Ok(PhaseEnd::Unbounded);
            };
            let theta = self.xb[r].max(0.0) / alpha[r];
            if theta <= 1e-12 {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(r, entering, &alpha)?;
        }
    }

    fn infeasibility_scale(&self) -> f64 {
        1.0 + self.lp.rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Makes the current basis primal feasible. Returns false if the LP is infeasible.
    fn phase_one(&mut self) -> Result<bool> {
        let tol = self.opts.feas_tol;
        let (r, most_neg) = self
            .xb
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        if most_neg >= -tol {
            return Ok(true);
        }
        // artificial column a = -B s, so B⁻¹a = -s with s marking infeasible rows
        let b = self.basis_matrix();
        let mut a = Array1::zeros(self.rows);
        let mut alpha = Array1::zeros(self.rows);
        for i in 0..self.rows {
            if self.xb[i] < -tol {
                a.scaled_add(-1.0, &b.column(i));
                alpha[i] = -1.0;
            }
        }
        self.artificial = Some(a);
        let art = self.art_index();
        self.pivot(r, art, &alpha)?;
        self.degenerate_run = 0;

        match self.iterate(Phase::One)? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => {
                return Err(Error::NumericalFailure("phase 1 reported unbounded".into()));
            }
        }
        self.refactor()?;
        if let Some(pos) = self.basis.iter().position(|&j| j == art) {
            if self.xb[pos] > tol * self.infeasibility_scale() {
                self.artificial = None;
                return Ok(false);
            }
            self.drive_out_artificial(pos)?;
        }
        self.artificial = None;
        self.degenerate_run = 0;
        Ok(true)
    }

    fn drive_out_artificial(&mut self, pos: usize) -> Result<()> {
        let row = self.binv.row(pos).to_owned();
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols + self.rows {
            if self.basis.contains(&j) {
                continue;
            }
            let v = row.dot(&self.lp.equality_column(j)).abs();
            if v > best.map_or(self.opts.pivot_tol, |b| b.1) {
                best = Some((j, v));
            }
        }
        let (j, _) = best.ok_or_else(|| {
            Error::NumericalFailure("cannot pivot artificial out of the basis".into())
        })?;
        let alpha = self.binv.dot(&self.lp.equality_column(j));
        self.pivot(pos, j, &alpha)?;
        self.refactor()
    }

    fn primal(&self) -> Array1<f64> {
        let mut u = Array1::zeros(self.cols);
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.cols {
                u[j] = self.xb[i];
            }
        }
        u
    }

    fn finish(&self, status: LpStatus) -> LpSolution {
        let primal = self.primal();
        let objective = match status {
            LpStatus::Optimal => self.lp.cost.dot(&primal),
            LpStatus::Infeasible => f64::INFINITY,
            LpStatus::Unbounded => f64::NEG_INFINITY,
        };
        LpSolution {
            status,
            objective,
            primal,
            duals: self.duals(Phase::Two),
            basis: Basis(self.basis.clone()),
            basis_inverse: self.binv.clone(),
            pivots: self.pivots,
        }
    }

    fn run(&mut self) -> Result<LpSolution> {
        const ATTEMPTS: usize = 3;
        for attempt in 0..ATTEMPTS {
            if !self.phase_one()? {
                return Ok(self.finish(LpStatus::Infeasible));
            }
            self.degenerate_run = 0;
            if let PhaseEnd::Unbounded = self.iterate(Phase::Two)? {
                return Ok(self.finish(LpStatus::Unbounded));
            }
            self.refactor()?;
            let scale = self.infeasibility_scale();
            let primal_ok = self.xb.iter().all(|&v| v >= -self.opts.feas_tol * scale);
            let y = self.duals(Phase::Two);
            let dual_ok = self
                .reduced_costs(Phase::Two, &y)
                .iter()
                .all(|&r| r >= -self.opts.opt_tol);
            if primal_ok && dual_ok {
                return Ok(self.finish(LpStatus::Optimal));
            }
            log::debug!("simplex re-check failed on attempt {attempt}; continuing from refactored basis");
        }
        Err(Error::NumericalFailure(format!(
            "no stable optimal basis after {ATTEMPTS} refactorizations"
        )))
    }
}

/// One fractional row of an optimal tableau: the basic integer variable,
/// the matching row of `B⁻¹` and its value `(B⁻¹q)_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalRow {
    pub position: usize,
    pub variable: usize,
    pub w_row: Array1<f64>,
    pub value: f64,
}

/// Rows of the optimal basis whose basic variable is one of the first
/// `num_integer` columns and whose value has fractional part in
/// `[frac_tol, 1 - frac_tol]`. The values are recomputed from `lp.rhs`.
pub fn extract_fractional_rows(
    lp: &LpProblem,
    sol: &LpSolution,
    num_integer: usize,
    frac_tol: f64,
) -> Vec<FractionalRow> {
    if !sol.is_optimal() {
        return Vec::new();
    }
    let values = sol.basic_values(lp);
    sol.basis
        .indices()
        .iter()
        .enumerate()
        .filter(|&(_, &j)| j < num_integer)
        .filter_map(|(i, &j)| {
            let v = values[i];
            let f = v - v.floor();
            (f >= frac_tol && f <= 1.0 - frac_tol).then(|| FractionalRow {
                position: i,
                variable: j,
                w_row: sol.basis_inverse.row(i).to_owned(),
                value: v,
            })
        })
        .collect()
}

/// Text dump of the full tableau `B⁻¹[M, -I | q]` for debugging.
pub fn debug_dump(lp: &LpProblem, sol: &LpSolution) -> String {
    let mut out = String::new();
    let full = {
        let mut e = Array2::zeros((lp.rows(), lp.cols() + lp.rows()));
        e.slice_mut(s![.., ..lp.cols()]).assign(&lp.matrix);
        for i in 0..lp.rows() {
            e[[i, lp.cols() + i]] = -1.0;
        }
        sol.basis_inverse.dot(&e)
    };
    let rhs = sol.basic_values(lp);
    let _ = writeln!(out, "status={:?} objective={} pivots={}", sol.status, sol.objective, sol.pivots);
    for (i, row) in full.axis_iter(Axis(0)).enumerate() {
        let _ = write!(out, "[{:>4}] ", sol.basis.0[i]);
        for v in row {
            let _ = write!(out, "{v:>10.4} ");
        }
        let _ = writeln!(out, "| {:>10.4}", rhs[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn lp(m: Array2<f64>, q: Array1<f64>, d: Array1<f64>) -> LpProblem {
        LpProblem::new(m, q, d).unwrap()
    }

    #[test]
    fn one_variable_upper_bound() {
        let p = lp(array![[-1.0]], array![-2.0], array![-1.0]);
        let sol = solve(&p, None).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.primal[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn worked_two_variable_lp() {
        let p = lp(array![[-2.0, -2.0]], array![-3.0], array![-1.0, -1.0]);
        let sol = solve(&p, None).unwrap();
        assert_abs_diff_eq!(sol.objective, -1.5, epsilon = 1e-12);
        let u = &sol.primal;
        assert!(
            (u[0] - 1.5).abs() < 1e-12 && u[1].abs() < 1e-12
                || (u[1] - 1.5).abs() < 1e-12 && u[0].abs() < 1e-12
        );
        assert_abs_diff_eq!(sol.duals[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn warm_start_from_own_basis_takes_no_pivots() {
        let p = lp(
            array![[1.0, 2.0, 0.5], [3.0, 1.0, 1.0], [-1.0, -1.0, -1.0]],
            array![2.0, 3.0, -10.0],
            array![1.0, 1.5, 0.7],
        );
        let cold = solve(&p, None).unwrap();
        let warm = solve(&p, Some(&cold.basis)).unwrap();
        assert_eq!(warm.pivots, 0);
        assert_abs_diff_eq!(warm.objective, cold.objective, epsilon = 1e-7);
    }

    #[test]
    fn detects_infeasible() {
        // x >= 1 and -x >= 0
        let p = lp(array![[1.0], [-1.0]], array![1.0, 0.0], array![1.0]);
        assert_eq!(solve(&p, None).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let p = lp(array![[1.0, -1.0]], array![1.0], array![-1.0, 0.0]);
        assert_eq!(solve(&p, None).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn singular_warm_basis_is_repaired() {
        let p = lp(
            array![[1.0, 1.0], [2.0, 2.0], [1.0, 0.0]],
            array![1.0, 2.0, 0.5],
            array![1.0, 1.0],
        );
        // columns 0 and 1 plus the surplus of row 2: [1,2,1], [1,2,0], [0,0,-1] are dependent
        let sol = solve(&p, Some(&Basis(vec![0, 1, 4]))).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn wrong_cardinality_is_rejected() {
        let p = lp(array![[1.0]], array![1.0], array![1.0]);
        assert!(matches!(
            solve(&p, Some(&Basis(vec![0, 1]))),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn fractional_row_extraction_on_worked_lp() {
        let p = lp(array![[-2.0, -2.0]], array![-3.0], array![-1.0, -1.0]);
        let sol = solve(&p, None).unwrap();
        let rows = extract_fractional_rows(&p, &sol, 2, 1e-6);
        assert_eq!(rows.len(), 1);
        assert_abs_diff_eq!(rows[0].w_row[0], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[0].value, 1.5, epsilon = 1e-12);
    }

    #[test]
    fn fractional_threshold_drops_near_integral_rows() {
        // optimum u = 1.3
        let p = lp(array![[1.0]], array![1.3], array![1.0]);
        let sol = solve(&p, None).unwrap();
        assert_eq!(extract_fractional_rows(&p, &sol, 1, 0.2).len(), 1);
        assert!(extract_fractional_rows(&p, &sol, 1, 0.4).is_empty());
    }

    #[test]
    fn integral_optimum_has_no_fractional_rows() {
        let p = lp(array![[1.0, 1.0]], array![2.0], array![1.0, 3.0]);
        let sol = solve(&p, None).unwrap();
        assert!(extract_fractional_rows(&p, &sol, 2, 1e-6).is_empty());
    }

    #[test]
    fn continuous_basic_rows_are_not_fractional_rows() {
        let p = lp(array![[-2.0, -2.0]], array![-3.0], array![-1.0, -1.0]);
        let sol = solve(&p, None).unwrap();
        assert!(extract_fractional_rows(&p, &sol, 0, 1e-6).is_empty());
    }

    #[test]
    fn debug_dump_mentions_status() {
        let p = lp(array![[1.0]], array![1.0], array![1.0]);
        let sol = solve(&p, None).unwrap();
        assert!(debug_dump(&p, &sol).starts_with("status=Optimal"));
    }
}
