//! Column-major simplex tableau and the three per-iteration steps: choosing
//! the entering column, choosing the leaving row, and the pivot update.
//!
//! The tableau has `p = m + 1` rows and `q = n + slack + artificial + 2`
//! columns. Columns are laid out as
//!
//! ```text
//! [ structural 0..n | slack n..n+m | artificial … | basis index | rhs ]
//! ```
//!
//! and element `(i, j)` lives at offset `j·p + i`. The last row holds the
//! reduced costs; its rhs cell holds the negated objective value so that the
//! pivot formula applies to it unchanged (see [`Tableau::objective_value`]).
//!
//! Rows whose right-hand side is negative are negated during construction and
//! receive an artificial column with coefficient `+1`, so every rhs starts
//! out nonnegative. The ratio test is therefore `rhs_i / t[i,e]` over rows
//! with `t[i,e] > 0`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{StandardFormLP, Violation};

/// Ratio assigned to rows that cannot bound the entering variable.
pub const SENTINEL: f64 = f64::MAX;

/// Reduced costs must exceed this to be selected for entry.
pub const DEFAULT_ENTERING_TOL: f64 = 1e-9;
/// Smallest admissible pivot magnitude.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableauError {
    #[error("pivot element {element:e} at ({row}, {col}) is below tolerance")]
    DegeneratePivot { row: usize, col: usize, element: f64 },
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Violation>),
}

/// A selected pivot: entering column, leaving row and the element at their
/// intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotChoice {
    pub entering: usize,
    pub leaving: usize,
    pub element: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    rows: usize,
    cols: usize,
    n: usize,
    m: usize,
    num_slack: usize,
    num_artificial: usize,
    values: Vec<f64>,
    is_basic: Vec<bool>,
    blocked: Vec<bool>,
    redundant: Vec<bool>,
}

impl Tableau {
    /// Builds the initial tableau: one slack per row, one artificial per row
    /// with negative rhs, basis of slacks and artificials, last row = `c`.
    pub fn build(lp: &StandardFormLP) -> Result<Self, TableauError> {
        let violations = lp.validate();
        if !violations.is_empty() {
            return Err(TableauError::InvalidModel(violations));
        }
        let n = lp.num_vars();
        let m = lp.num_constraints();
        let num_artificial = lp.num_negative_rhs();
        let num_var_cols = n + m + num_artificial;
        let p = m + 1;
        let q = num_var_cols + 2;
        let mut t = Tableau {
            rows: p,
            cols: q,
            n,
            m,
            num_slack: m,
            num_artificial,
            values: vec![0.0; p * q],
            is_basic: vec![false; num_var_cols],
            blocked: vec![false; num_var_cols],
            redundant: vec![false; m],
        };

        let mut next_artificial = n + m;
        for i in 0..m {
            let flip = if lp.b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                t.set(i, j, flip * lp.a[i][j]);
            }
            t.set(i, n + i, flip);
            t.set(i, q - 1, flip * lp.b[i]);
            let basic = if flip < 0.0 {
                let k = next_artificial;
                next_artificial += 1;
                t.set(i, k, 1.0);
                k
            } else {
                n + i
            };
            t.set(i, q - 2, basic as f64);
            t.is_basic[basic] = true;
        }
        for j in 0..n {
            t.set(m, j, lp.c[j]);
        }
        Ok(t)
    }

    /// Row count `p = m + 1`.
    pub fn p(&self) -> usize {
        self.rows
    }

    /// Column count `q`, including the basis-index and rhs columns.
    pub fn q(&self) -> usize {
        self.cols
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_constraints(&self) -> usize {
        self.m
    }

    pub fn num_slack(&self) -> usize {
        self.num_slack
    }

    pub fn num_artificial(&self) -> usize {
        self.num_artificial
    }

    /// Number of variable columns (structural, slack and artificial).
    pub fn num_var_cols(&self) -> usize {
        self.cols - 2
    }

    pub fn basis_col(&self) -> usize {
        self.cols - 2
    }

    pub fn rhs_col(&self) -> usize {
        self.cols - 1
    }

    pub fn is_artificial(&self, j: usize) -> bool {
        j >= self.n + self.num_slack && j < self.num_var_cols()
    }

    /// The raw column-major storage.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.rows + i]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[j * self.rows + i] = v;
    }

    /// All `p` entries of column `j`, contiguous.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.rows..(j + 1) * self.rows]
    }

    pub fn rhs(&self, i: usize) -> f64 {
        self.get(i, self.rhs_col())
    }

    pub fn basic_var(&self, i: usize) -> usize {
        self.get(i, self.basis_col()) as usize
    }

    pub fn basis(&self) -> Vec<usize> {
        (0..self.m).map(|i| self.basic_var(i)).collect()
    }

    pub fn is_basic(&self, j: usize) -> bool {
        self.is_basic[j]
    }

    pub fn reduced_cost(&self, j: usize) -> f64 {
        self.get(self.m, j)
    }

    /// Current objective value. The last-row rhs cell stores its negation.
    pub fn objective_value(&self) -> f64 {
        -self.get(self.m, self.rhs_col())
    }

    /// Whether column `j` may be chosen to enter the basis.
    pub fn is_selectable(&self, j: usize) -> bool {
        !self.is_basic[j] && !self.blocked[j]
    }

    pub(crate) fn block_column(&mut self, j: usize) {
        self.blocked[j] = true;
    }

    pub fn is_blocked(&self, j: usize) -> bool {
        self.blocked[j]
    }

    pub(crate) fn mark_redundant(&mut self, i: usize) {
        self.redundant[i] = true;
    }

    pub fn is_redundant(&self, i: usize) -> bool {
        self.redundant[i]
    }

    /// Overwrites the objective row (reduced costs and the raw rhs cell).
    pub(crate) fn set_objective_row(&mut self, costs: &[f64], raw_value: f64) {
        debug_assert_eq!(costs.len(), self.num_var_cols());
        for (j, &c) in costs.iter().enumerate() {
            self.set(self.m, j, c);
        }
        let rhs = self.rhs_col();
        self.set(self.m, rhs, raw_value);
    }

    /// Adds `factor · row_i` to the objective row, rhs included.
    pub(crate) fn add_row_to_objective(&mut self, i: usize, factor: f64) {
        let (m, basis_col) = (self.m, self.basis_col());
        for j in (0..self.cols).filter(|&j| j != basis_col) {
            let v = self.get(m, j) + factor * self.get(i, j);
            self.set(m, j, v);
        }
    }

    /// Dantzig's rule: the selectable column with the largest reduced cost,
    /// lowest index on ties; `None` once every reduced cost is `≤ tol`.
    pub fn choose_entering(&self, tol: f64) -> Option<usize> {
        let mut best = tol;
        let mut index = None;
        for j in 0..self.num_var_cols() {
            if !self.is_selectable(j) {
                continue;
            }
            let rc = self.reduced_cost(j);
            if rc > best {
                best = rc;
                index = Some(j);
            }
        }
        index
    }

    /// Bland's rule: the lowest-index selectable column with reduced cost `> tol`.
    pub fn choose_entering_bland(&self, tol: f64) -> Option<usize> {
        (0..self.num_var_cols()).find(|&j| self.is_selectable(j) && self.reduced_cost(j) > tol)
    }

    /// Ratio of row `i` for entering column `e`, or [`SENTINEL`] when the
    /// row cannot bound the entering variable.
    #[inline]
    pub fn ratio(&self, i: usize, e: usize, tol: f64) -> f64 {
        let a = self.get(i, e);
        if a > tol && !self.redundant[i] {
            self.rhs(i) / a
        } else {
            SENTINEL
        }
    }

    /// Minimum-ratio test over column `e`, lowest row on ties; `None` when
    /// every ratio is the sentinel (the LP is unbounded along `e`).
    pub fn choose_leaving(&self, e: usize, tol: f64) -> Option<usize> {
        let mut best = SENTINEL;
        let mut index = None;
        for i in 0..self.m {
            let r = self.ratio(i, e, tol);
            if r < best {
                best = r;
                index = Some(i);
            }
        }
        index
    }

    /// Minimum-ratio test breaking ties by the smallest basic-variable index.
    pub fn choose_leaving_bland(&self, e: usize, tol: f64) -> Option<usize> {
        let mut best = SENTINEL;
        let mut index: Option<usize> = None;
        for i in 0..self.m {
            let r = self.ratio(i, e, tol);
            if r == SENTINEL {
                continue;
            }
            let better = match index {
                None => true,
                Some(k) => r < best || (r == best && self.basic_var(i) < self.basic_var(k)),
            };
            if better {
                best = r;
                index = Some(i);
            }
        }
        index
    }

    pub fn pivot_choice(&self, entering: usize, leaving: usize) -> PivotChoice {
        PivotChoice {
            entering,
            leaving,
            element: self.get(leaving, entering),
        }
    }

    /// Pivots on `choice`: the pivot row is divided by the pivot element and
    /// every other row, the objective row included, has the matching multiple
    /// of the new pivot row subtracted. The entering column becomes the unit
    /// vector of the pivot row.
    pub fn pivot(&mut self, choice: PivotChoice, pivot_tol: f64) -> Result<(), TableauError> {
        let (e, l) = (choice.entering, choice.leaving);
        let pe = self.get(l, e);
        if !(pe.abs() > pivot_tol) {
            return Err(TableauError::DegeneratePivot {
                row: l,
                col: e,
                element: pe,
            });
        }
        let p = self.rows;
        let pivot_col: Vec<f64> = self.column(e).to_vec();
        let basis_col = self.basis_col();
        for j in 0..self.cols {
            if j == basis_col {
                continue;
            }
            let col = &mut self.values[j * p..(j + 1) * p];
            let pr = col[l] / pe;
            if pr != 0.0 {
                for (i, v) in col.iter_mut().enumerate() {
                    if i != l {
                        *v -= pivot_col[i] * pr;
                    }
                }
            }
            col[l] = pr;
        }
        let col = &mut self.values[e * p..(e + 1) * p];
        col.fill(0.0);
        col[l] = 1.0;

        let leaving_var = self.basic_var(l);
        self.is_basic[leaving_var] = false;
        self.is_basic[e] = true;
        self.set(l, basis_col, e as f64);
        Ok(())
    }

    /// Row-major text rendering, one tableau row per line, for golden tests
    /// and debugging.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "tableau p={} q={} n={} slack={} artificial={}",
            self.rows, self.cols, self.n, self.num_slack, self.num_artificial
        );
        for i in 0..self.rows {
            for j in 0..self.num_var_cols() {
                let _ = write!(out, "{:>11.4}", self.get(i, j));
            }
            let basis = if i < self.m {
                format!("{:>5}", self.basic_var(i))
            } else {
                "    z".to_string()
            };
            let _ = writeln!(out, " |{} {:>11.4}", basis, self.get(i, self.rhs_col()));
        }
        out
    }
}
