//! LP data model.
//!
//! [`GeneralLP`] is what users and the MPS reader produce: either objective
//! sense, mixed row relations and arbitrary variable bounds. [`StandardFormLP`]
//! is what the solver consumes: maximize `c·x` subject to `A·x ≤ b`, `x ≥ 0`.
//! [`standardize`] converts one into the other and returns a [`VariableMap`]
//! that carries solutions back.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// An LP in user-facing form.
///
/// Every constraint row carries one coefficient per variable. Bounds default
/// to `[0, +∞)`; use `f64::NEG_INFINITY` / `f64::INFINITY` for open sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralLP {
    pub sense: Sense,
    pub objective: Vec<f64>,
    /// Constant added to the objective.
    #[serde(default)]
    pub objective_constant: f64,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub var_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("variable `{name}` has lower bound {lower} above upper bound {upper}")]
    InfeasibleBounds { name: String, lower: f64, upper: f64 },
    #[error("malformed model: {0}")]
    Malformed(String),
}

impl GeneralLP {
    /// A problem over `num_vars` variables named `x0, x1, …` with default
    /// bounds, zero objective and no rows.
    pub fn new(sense: Sense, num_vars: usize) -> Self {
        GeneralLP {
            sense,
            objective: vec![0.0; num_vars],
            objective_constant: 0.0,
            constraints: Vec::new(),
            lower: vec![0.0; num_vars],
            upper: vec![f64::INFINITY; num_vars],
            var_names: (0..num_vars).map(|j| format!("x{j}")).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn with_objective(mut self, objective: Vec<f64>) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_bounds(mut self, var: usize, lower: f64, upper: f64) -> Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn add_constraint(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) {
        let name = format!("r{}", self.constraints.len());
        self.constraints.push(Constraint {
            name,
            coefficients,
            relation,
            rhs,
        });
    }

    /// Evaluates the original objective (including the constant) at `x`.
    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective_constant + dot(&self.objective, x)
    }

    /// Checks the structural invariants. Bound ordering is checked separately
    /// by [`standardize`], which reports it as [`ModelError::InfeasibleBounds`].
    pub fn check(&self) -> Result<(), ModelError> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n || self.var_names.len() != n {
            return Err(ModelError::Malformed(format!(
                "expected {n} bounds and names, found {} lower, {} upper, {} names",
                self.lower.len(),
                self.upper.len(),
                self.var_names.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &self.var_names {
            if !seen.insert(name.as_str()) {
                return Err(ModelError::Malformed(format!("duplicate variable name `{name}`")));
            }
        }
        let mut seen = HashSet::new();
        for (i, row) in self.constraints.iter().enumerate() {
            if !seen.insert(row.name.as_str()) {
                return Err(ModelError::Malformed(format!("duplicate row name `{}`", row.name)));
            }
            if row.coefficients.len() != n {
                return Err(ModelError::Malformed(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.coefficients.len()
                )));
            }
            if row.coefficients.iter().any(|v| !v.is_finite()) || !row.rhs.is_finite() {
                return Err(ModelError::Malformed(format!("row {i} has a non-finite entry")));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) || !self.objective_constant.is_finite() {
            return Err(ModelError::Malformed("objective has a non-finite entry".into()));
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.upper[j].is_nan() {
                return Err(ModelError::Malformed(format!("variable {j} has a NaN bound")));
            }
        }
        Ok(())
    }
}

/// Maximize `c·x` subject to `A·x ≤ b`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardFormLP {
    pub c: Vec<f64>,
    /// Row-major, `m` rows of `n` coefficients.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

/// One problem found by [`StandardFormLP::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    RowLength { row: usize, found: usize, expected: usize },
    RhsLength { found: usize, expected: usize },
    NonFiniteObjective { index: usize },
    NonFiniteCoefficient { row: usize, col: usize },
    NonFiniteRhs { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowLength { row, found, expected } => {
                write!(f, "row {row} has {found} coefficients, expected {expected}")
            }
            Violation::RhsLength { found, expected } => {
                write!(f, "rhs has {found} entries, expected {expected}")
            }
            Violation::NonFiniteObjective { index } => write!(f, "c[{index}] is not finite"),
            Violation::NonFiniteCoefficient { row, col } => {
                write!(f, "a[{row}][{col}] is not finite")
            }
            Violation::NonFiniteRhs { index } => write!(f, "b[{index}] is not finite"),
        }
    }
}

impl StandardFormLP {
    pub fn new(c: Vec<f64>, a: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        StandardFormLP { c, a, b }
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.a.len()
    }

    /// Number of rows with a negative right-hand side, i.e. the number of
    /// artificial columns the tableau will need.
    pub fn num_negative_rhs(&self) -> usize {
        self.b.iter().filter(|&&v| v < 0.0).count()
    }

    /// Returns every dimension mismatch and non-finite entry. An empty list
    /// means the LP is consistent.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.num_vars();
        let mut out = Vec::new();
        if self.b.len() != self.a.len() {
            out.push(Violation::RhsLength {
                found: self.b.len(),
                expected: self.a.len(),
            });
        }
        for (index, v) in self.c.iter().enumerate() {
            if !v.is_finite() {
                out.push(Violation::NonFiniteObjective { index });
            }
        }
        for (row, coeffs) in self.a.iter().enumerate() {
            if coeffs.len() != n {
                out.push(Violation::RowLength {
                    row,
                    found: coeffs.len(),
                    expected: n,
                });
            }
            for (col, v) in coeffs.iter().enumerate() {
                if !v.is_finite() {
                    out.push(Violation::NonFiniteCoefficient { row, col });
                }
            }
        }
        for (index, v) in self.b.iter().enumerate() {
            if !v.is_finite() {
                out.push(Violation::NonFiniteRhs { index });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        dot(&self.c, x)
    }
}

/// How one original variable is recovered from standard-form columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Recovery {
    /// `x = offset + x'[col]`.
    Shifted { col: usize, offset: f64 },
    /// `x = x'[pos] - x'[neg]`.
    Split { pos: usize, neg: usize },
}

/// Carries standard-form solutions back to the original variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableMap {
    pub sense: Sense,
    /// Original objective = `objective_offset + sign · standard objective`,
    /// where `sign` is `-1` for minimization.
    pub objective_offset: f64,
    pub variables: Vec<Recovery>,
}

impl VariableMap {
    pub fn recover_point(&self, standard: &[f64]) -> Vec<f64> {
        self.variables
            .iter()
            .map(|r| match *r {
                Recovery::Shifted { col, offset } => offset + standard[col],
                Recovery::Split { pos, neg } => standard[pos] - standard[neg],
            })
            .collect()
    }

    pub fn recover_objective(&self, standard_value: f64) -> f64 {
        let sign = match self.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        self.objective_offset + sign * standard_value
    }
}

/// Converts a [`GeneralLP`] into maximization standard form.
///
/// Rows are emitted in input order: `≤` rows as-is, `≥` rows negated, `=`
/// rows as a `≤` row followed by its negation. Rows for finite upper bounds
/// follow, one per bounded variable. Finite lower bounds shift the variable;
/// variables without a finite lower bound are split into a difference of two
/// nonnegative columns.
pub fn standardize(glp: &GeneralLP) -> Result<(StandardFormLP, VariableMap), ModelError> {
    glp.check()?;
    let n = glp.num_vars();
    for j in 0..n {
        let (lo, up) = (glp.lower[j], glp.upper[j]);
        if lo > up || lo == f64::INFINITY || up == f64::NEG_INFINITY {
            return Err(ModelError::InfeasibleBounds {
                name: glp.var_names[j].clone(),
                lower: lo,
                upper: up,
            });
        }
    }

    let mut variables = Vec::with_capacity(n);
    let mut cols = 0usize;
    for j in 0..n {
        if glp.lower[j].is_finite() {
            variables.push(Recovery::Shifted {
                col: cols,
                offset: glp.lower[j],
            });
            cols += 1;
        } else {
            variables.push(Recovery::Split {
                pos: cols,
                neg: cols + 1,
            });
            cols += 2;
        }
    }

    // Maps an original coefficient row onto standard columns; returns the
    // constant contributed by the lower-bound shifts.
    let expand = |coeffs: &[f64]| -> (Vec<f64>, f64) {
        let mut row = vec![0.0; cols];
        let mut shift = 0.0;
        for (j, &a) in coeffs.iter().enumerate() {
            match variables[j] {
                Recovery::Shifted { col, offset } => {
                    row[col] = a;
                    shift += a * offset;
                }
                Recovery::Split { pos, neg } => {
                    row[pos] = a;
                    row[neg] = -a;
                }
            }
        }
        (row, shift)
    };

    let sign = match glp.sense {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let (obj_row, obj_shift) = expand(&glp.objective);
    let c: Vec<f64> = obj_row.iter().map(|&v| sign * v).collect();
    let objective_offset = glp.objective_constant + obj_shift;

    let mut a = Vec::new();
    let mut b = Vec::new();
    for row in &glp.constraints {
        let (coeffs, shift) = expand(&row.coefficients);
        let rhs = row.rhs - shift;
        let negated = || coeffs.iter().map(|v| -v).collect::<Vec<_>>();
        match row.relation {
            Relation::Le => {
                a.push(coeffs.clone());
                b.push(rhs);
            }
            Relation::Ge => {
                a.push(negated());
                b.push(-rhs);
            }
            Relation::Eq => {
                a.push(coeffs.clone());
                b.push(rhs);
                a.push(negated());
                b.push(-rhs);
            }
        }
    }
    for (j, recovery) in variables.iter().enumerate() {
        let up = glp.upper[j];
        if !up.is_finite() {
            continue;
        }
        let mut row = vec![0.0; cols];
        match *recovery {
            Recovery::Shifted { col, offset } => {
                row[col] = 1.0;
                a.push(row);
                b.push(up - offset);
            }
            Recovery::Split { pos, neg } => {
                row[pos] = 1.0;
                row[neg] = -1.0;
                a.push(row);
                b.push(up);
            }
        }
    }

    let lp = StandardFormLP { c, a, b };
    let map = VariableMap {
        sense: glp.sense,
        objective_offset,
        variables,
    };
    Ok((lp, map))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimization_flips_sign() {
        let mut glp = GeneralLP::new(Sense::Minimize, 1).with_objective(vec![-1.0]);
        glp.add_constraint(vec![1.0], Relation::Le, 3.0);
        let (lp, map) = standardize(&glp).unwrap();
        assert_eq!(lp.c, vec![1.0]);
        assert_eq!(lp.a, vec![vec![1.0]]);
        assert_eq!(lp.b, vec![3.0]);
        assert_eq!(map.recover_objective(3.0), -3.0);
        assert_eq!(map.recover_point(&[3.0]), vec![3.0]);
    }

    #[test]
    fn equality_splits_into_two_rows() {
        let mut glp = GeneralLP::new(Sense::Maximize, 2).with_objective(vec![1.0, 1.0]);
        glp.add_constraint(vec![1.0, 1.0], Relation::Eq, 2.0);
        let (lp, _) = standardize(&glp).unwrap();
        assert_eq!(lp.a, vec![vec![1.0, 1.0], vec![-1.0, -1.0]]);
        assert_eq!(lp.b, vec![2.0, -2.0]);
    }

    #[test]
    fn ge_rows_are_negated() {
        let mut glp = GeneralLP::new(Sense::Maximize, 1);
        glp.add_constraint(vec![2.0], Relation::Ge, 1.0);
        let (lp, _) = standardize(&glp).unwrap();
        assert_eq!(lp.a, vec![vec![-2.0]]);
        assert_eq!(lp.b, vec![-1.0]);
    }

    #[test]
    fn bounded_variable_is_shifted() {
        let glp = GeneralLP::new(Sense::Maximize, 1)
            .with_objective(vec![1.0])
            .with_bounds(0, 1.0, 5.0);
        let (lp, map) = standardize(&glp).unwrap();
        assert_eq!(lp.c, vec![1.0]);
        assert_eq!(lp.a, vec![vec![1.0]]);
        assert_eq!(lp.b, vec![4.0]);
        // standard optimum 4 at x' = 4
        assert_eq!(map.recover_objective(4.0), 5.0);
        assert_eq!(map.recover_point(&[4.0]), vec![5.0]);
    }

    #[test]
    fn free_variable_is_split() {
        let mut glp = GeneralLP::new(Sense::Minimize, 1)
            .with_objective(vec![1.0])
            .with_bounds(0, f64::NEG_INFINITY, f64::INFINITY);
        glp.add_constraint(vec![1.0], Relation::Ge, -2.0);
        let (lp, map) = standardize(&glp).unwrap();
        assert_eq!(lp.c, vec![-1.0, 1.0]);
        assert_eq!(lp.a, vec![vec![-1.0, 1.0]]);
        assert_eq!(lp.b, vec![2.0]);
        assert_eq!(map.recover_point(&[0.0, 2.0]), vec![-2.0]);
    }

    #[test]
    fn upper_only_variable_gets_split_and_bound_row() {
        let glp = GeneralLP::new(Sense::Maximize, 1)
            .with_objective(vec![1.0])
            .with_bounds(0, f64::NEG_INFINITY, 7.0);
        let (lp, _) = standardize(&glp).unwrap();
        assert_eq!(lp.a, vec![vec![1.0, -1.0]]);
        assert_eq!(lp.b, vec![7.0]);
    }

    #[test]
    fn inverted_bounds_rejected() {
        let glp = GeneralLP::new(Sense::Maximize, 1).with_bounds(0, 2.0, 1.0);
        assert!(matches!(
            standardize(&glp),
            Err(ModelError::InfeasibleBounds { .. })
        ));
    }

    #[test]
    fn empty_objective_allowed() {
        let glp = GeneralLP::new(Sense::Minimize, 0);
        let (lp, map) = standardize(&glp).unwrap();
        assert_eq!(lp.num_vars(), 0);
        assert_eq!(map.recover_objective(0.0), 0.0);
    }

    #[test]
    fn objective_constant_and_shift_in_offset() {
        let mut glp = GeneralLP::new(Sense::Minimize, 1)
            .with_objective(vec![2.0])
            .with_bounds(0, 3.0, f64::INFINITY);
        glp.objective_constant = 1.0;
        let (lp, map) = standardize(&glp).unwrap();
        assert_eq!(lp.c, vec![-2.0]);
        // x' = 0 -> x = 3 -> 2*3 + 1 = 7
        assert_eq!(map.recover_objective(0.0), 7.0);
    }

    #[test]
    fn validate_consistent() {
        let lp = StandardFormLP::new(
            vec![1.0, 1.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            vec![1.0, 1.0, 1.5],
        );
        assert!(lp.validate().is_empty());
    }

    #[test]
    fn validate_short_row() {
        let lp = StandardFormLP::new(vec![1.0, 1.0], vec![vec![1.0]], vec![1.0]);
        let v = lp.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "row 0 has 1 coefficients, expected 2");
    }

    #[test]
    fn validate_nan_rhs() {
        let lp = StandardFormLP::new(
            vec![1.0],
            vec![vec![1.0], vec![1.0]],
            vec![1.0, f64::NAN],
        );
        assert_eq!(lp.validate(), vec![Violation::NonFiniteRhs { index: 1 }]);
        assert_eq!(lp.validate()[0].to_string(), "b[1] is not finite");
    }

    #[test]
    fn check_rejects_duplicate_names() {
        let mut glp = GeneralLP::new(Sense::Maximize, 2);
        glp.var_names[1] = "x0".into();
        assert!(matches!(glp.check(), Err(ModelError::Malformed(_))));
    }
}
