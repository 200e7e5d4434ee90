//! Brute-force reference solvers, independent of the tableau code.
//!
//! [`vertex_enumerate`] intersects every `n`-subset of the bounding
//! hyperplanes, keeps the feasible intersection points and returns the best
//! one. Unboundedness is decided exactly: the recession cone is intersected
//! with a normalizing hyperplane, its vertices (the extreme rays) are
//! enumerated the same way, and an LP is unbounded iff it is feasible and
//! some extreme ray improves the objective.
//!
//! These routines are exponential and meant for small instances only.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::boxlp::BoxLP;
use crate::model::{dot, GeneralLP, Relation, StandardFormLP};
use crate::simplex::{SolveOutcome, Status};

/// Largest variable count accepted by the vertex oracles.
pub const MAX_ORACLE_VARS: usize = 8;
/// Largest hyperplane count (`m + n` in standard form).
pub const MAX_ORACLE_HYPERPLANES: usize = 24;
/// Largest dimension accepted by [`corner_enumerate`].
pub const MAX_CORNER_DIM: usize = 20;
/// Feasibility and optimality tolerance of the oracles (relative).
pub const ORACLE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for brute force: {0}")]
    OracleBudget(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certificate requested for a {0} outcome")]
    NotOptimal(Status),
}

/// Maximize `c·x` over `{x : G x ≤ h}`. `signs[j]` is `+1` or `-1` when the
/// rows force `signs[j]·x_j ≥ 0` on the recession cone (or `x_j = 0`), which
/// makes `Σ signs[j]·d_j = 1` a valid normalization for extreme rays.
struct Polyhedron<'a> {
    rows: &'a [Vec<f64>],
    rhs: &'a [f64],
    signs: &'a [f64],
}

enum Piece {
    Empty,
    Best(f64, Vec<f64>),
}

impl Polyhedron<'_> {
    fn dim(&self) -> usize {
        self.signs.len()
    }

    fn feasible(&self, x: &[f64]) -> bool {
        self.rows.iter().zip(self.rhs).all(|(row, &h)| {
            let activity = dot(row, x);
            let scale = 1f64.max(h.abs()).max(row_scale(row, x));
            activity - h <= ORACLE_TOL * scale
        })
    }

    fn best_vertex(&self, c: &[f64]) -> Piece {
        let n = self.dim();
        if n == 0 {
            return if self.feasible(&[]) {
                Piece::Best(0.0, Vec::new())
            } else {
                Piece::Empty
            };
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for subset in (0..self.rows.len()).combinations(n) {
            let mat: Vec<Vec<f64>> = subset.iter().map(|&k| self.rows[k].clone()).collect();
            let rhs: Vec<f64> = subset.iter().map(|&k| self.rhs[k]).collect();
            let Some(x) = solve_linear(mat, rhs) else {
                continue;
            };
            if !self.feasible(&x) {
                continue;
            }
            let value = dot(c, &x);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, x));
            }
        }
        match best {
            Some((v, x)) => Piece::Best(v, x),
            None => Piece::Empty,
        }
    }

    /// Whether some extreme ray `d` of the recession cone has `c·d > 0`.
    fn has_improving_ray(&self, c: &[f64]) -> bool {
        let n = self.dim();
        if n == 0 {
            return false;
        }
        let threshold = ORACLE_TOL * c.iter().fold(1f64, |a, v| a.max(v.abs()));
        for subset in (0..self.rows.len()).combinations(n - 1) {
            let mut mat: Vec<Vec<f64>> = subset.iter().map(|&k| self.rows[k].clone()).collect();
            let mut rhs = vec![0.0; n - 1];
            mat.push(self.signs.to_vec());
            rhs.push(1.0);
            let Some(d) = solve_linear(mat, rhs) else {
                continue;
            };
            let d_scale = d.iter().fold(1f64, |a, v| a.max(v.abs()));
            let in_cone = self.rows.iter().all(|row| {
                let r_scale = row.iter().fold(0f64, |a, v| a.max(v.abs()));
                dot(row, &d) <= ORACLE_TOL * r_scale * d_scale
            });
            if in_cone && dot(c, &d) > threshold {
                return true;
            }
        }
        false
    }
}

fn row_scale(row: &[f64], x: &[f64]) -> f64 {
    row.iter().zip(x).map(|(a, v)| (a * v).abs()).fold(0.0, f64::max)
}

/// Gaussian elimination with partial pivoting; `None` if singular.
pub(crate) fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[piv][k].abs() <= 1e-11 * scale {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}

fn outcome_from(pieces: Vec<(Piece, bool)>) -> SolveOutcome {
    let mut feasible = false;
    let mut ray = false;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (piece, improving) in pieces {
        ray |= improving;
        if let Piece::Best(v, x) = piece {
            feasible = true;
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, x));
            }
        }
    }
    if !feasible {
        return SolveOutcome::terminal(Status::Infeasible, 0, 0);
    }
    if ray {
        return SolveOutcome::terminal(Status::Unbounded, 0, 0);
    }
    let (value, point) = best.expect("feasible implies a vertex");
    SolveOutcome::optimal(value, point)
}

/// Brute-force solve of a standard-form LP (`n ≤ 8`, `m + n ≤ 24`).
pub fn vertex_enumerate(lp: &StandardFormLP) -> Result<SolveOutcome, OracleError> {
    if !lp.is_valid() {
        return Err(OracleError::InvalidInput("LP fails validation".into()));
    }
    let (m, n) = (lp.num_constraints(), lp.num_vars());
    if n > MAX_ORACLE_VARS || m + n > MAX_ORACLE_HYPERPLANES {
        return Err(OracleError::OracleBudget(format!("n = {n}, m + n = {}", m + n)));
    }
    let mut rows = lp.a.clone();
    let mut rhs = lp.b.clone();
    for j in 0..n {
        let mut row = vec![0.0; n];
        row[j] = -1.0;
        rows.push(row);
        rhs.push(0.0);
    }
    let signs = vec![1.0; n];
    let poly = Polyhedron {
        rows: &rows,
        rhs: &rhs,
        signs: &signs,
    };
    let piece = poly.best_vertex(&lp.c);
    let ray = poly.has_improving_ray(&lp.c);
    Ok(outcome_from(vec![(piece, ray)]))
}

/// Brute-force solve of a [`GeneralLP`] on its own polyhedron, reporting the
/// original-sense objective (constant included) and original variables.
///
/// Variables without finite bounds are handled by splitting space into
/// orthants, which keeps every piece pointed.
pub fn vertex_enumerate_general(glp: &GeneralLP) -> Result<SolveOutcome, OracleError> {
    glp.check().map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let n = glp.num_vars();
    let sign = match glp.sense {
        crate::model::Sense::Maximize => 1.0,
        crate::model::Sense::Minimize => -1.0,
    };
    let c: Vec<f64> = glp.objective.iter().map(|v| sign * v).collect();

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for con in &glp.constraints {
        let neg: Vec<f64> = con.coefficients.iter().map(|v| -v).collect();
        match con.relation {
            Relation::Le => {
                rows.push(con.coefficients.clone());
                rhs.push(con.rhs);
            }
            Relation::Ge => {
                rows.push(neg);
                rhs.push(-con.rhs);
            }
            Relation::Eq => {
                rows.push(con.coefficients.clone());
                rhs.push(con.rhs);
                rows.push(neg);
                rhs.push(-con.rhs);
            }
        }
    }
    let unit = |j: usize, v: f64| {
        let mut row = vec![0.0; n];
        row[j] = v;
        row
    };
    let mut signs = vec![1.0; n];
    let mut free = Vec::new();
    for j in 0..n {
        let (lo, up) = (glp.lower[j], glp.upper[j]);
        if lo > up {
            return Ok(SolveOutcome::terminal(Status::Infeasible, 0, 0));
        }
        if lo.is_finite() {
            rows.push(unit(j, -1.0));
            rhs.push(-lo);
        }
        if up.is_finite() {
            rows.push(unit(j, 1.0));
            rhs.push(up);
            if !lo.is_finite() {
                signs[j] = -1.0;
            }
        }
        if !lo.is_finite() && !up.is_finite() {
            free.push(j);
        }
    }
    if n > MAX_ORACLE_VARS || rows.len() + free.len() > MAX_ORACLE_HYPERPLANES + MAX_ORACLE_VARS {
        return Err(OracleError::OracleBudget(format!(
            "n = {n}, {} hyperplanes",
            rows.len() + free.len()
        )));
    }

    let mut pieces = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        let mut rows = rows.clone();
        let mut rhs = rhs.clone();
        let mut signs = signs.clone();
        for (bit, &j) in free.iter().enumerate() {
            let s = if mask & (1 << bit) == 0 { 1.0 } else { -1.0 };
            rows.push(unit(j, -s));
            rhs.push(0.0);
            signs[j] = s;
        }
        let poly = Polyhedron {
            rows: &rows,
            rhs: &rhs,
            signs: &signs,
        };
        pieces.push((poly.best_vertex(&c), poly.has_improving_ray(&c)));
    }
    let mut out = outcome_from(pieces);
    if let Some(v) = out.objective_value.as_mut() {
        *v = glp.objective_constant + sign * *v;
    }
    Ok(out)
}

/// Maximum of `ℓ·x` over all `2ⁿ` corners of the box.
pub fn corner_enumerate(lp: &BoxLP) -> Result<f64, OracleError> {
    lp.check().map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let n = lp.dim();
    if n > MAX_CORNER_DIM {
        return Err(OracleError::OracleBudget(format!("box dimension {n}")));
    }
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1u32 << n) {
        let value: f64 = (0..n)
            .map(|i| {
                let h = if mask & (1 << i) == 0 { lp.lower[i] } else { lp.upper[i] };
                lp.direction[i] * h
            })
            .sum();
        best = best.max(value);
    }
    Ok(best)
}

/// Independent check of an `Optimal` claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    /// Largest reduced cost over non-basic columns (relative to `‖c‖∞`).
    pub max_reduced_cost: f64,
    /// Largest row violation `(A x − b)_i`, relative to `max(1, |b_i|)`.
    pub max_primal_violation: f64,
    /// Largest `−x_j`.
    pub max_negativity: f64,
    /// `|c·x − value|`, relative to `max(1, |value|)`.
    pub objective_gap: f64,
    /// Row attaining `max_primal_violation`, when it is positive.
    pub worst_row: Option<usize>,
    pub tolerance: f64,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.max_reduced_cost <= self.tolerance
            && self.max_primal_violation <= self.tolerance
            && self.max_negativity <= self.tolerance
            && self.objective_gap <= self.tolerance
    }
}

/// Recomputes feasibility and reduced costs of an optimal outcome from the
/// LP data alone.
///
/// The basis is the outcome's own when present and nonsingular; otherwise it
/// is derived from the point (positive-level columns first, then slacks and
/// structurals at level zero, keeping only independent columns).
pub fn check_certificate(lp: &StandardFormLP, outcome: &SolveOutcome) -> Result<Certificate, OracleError> {
    if outcome.status != Status::Optimal {
        return Err(OracleError::NotOptimal(outcome.status));
    }
    let (m, n) = (lp.num_constraints(), lp.num_vars());
    let x = outcome
        .primal_point
        .as_deref()
        .filter(|x| x.len() == n)
        .ok_or_else(|| OracleError::InvalidInput("missing or mis-sized primal point".into()))?;
    let value = outcome
        .objective_value
        .ok_or_else(|| OracleError::InvalidInput("missing objective value".into()))?;

    let activity: Vec<f64> = lp.a.iter().map(|row| dot(row, x)).collect();
    let mut max_primal_violation = 0.0;
    let mut worst_row = None;
    for i in 0..m {
        let v = (activity[i] - lp.b[i]) / lp.b[i].abs().max(1.0);
        if v > max_primal_violation {
            max_primal_violation = v;
            worst_row = Some(i);
        }
    }
    let max_negativity = x.iter().fold(0f64, |a, &v| if -v > a { -v } else { a });
    let objective_gap = (dot(&lp.c, x) - value).abs() / value.abs().max(1.0);

    // Column k < n is structural, k = n + i is the slack of row i.
    let column = |k: usize| -> Vec<f64> {
        if k < n {
            lp.a.iter().map(|row| row[k]).collect()
        } else {
            let mut e = vec![0.0; m];
            e[k - n] = 1.0;
            e
        }
    };
    let cost = |k: usize| if k < n { lp.c[k] } else { 0.0 };
    let level = |k: usize| if k < n { x[k] } else { lp.b[k - n] - activity[k - n] };

    let duals = outcome
        .basis
        .as_ref()
        .filter(|b| b.len() == m && b.iter().all(|&k| k < n + m))
        .and_then(|b| basis_duals(b, &column, &cost))
        .or_else(|| {
            let basis = derive_basis(n, m, &column, &level);
            basis_duals(&basis, &column, &cost)
        })
        .unwrap_or_else(|| vec![0.0; m]);

    let c_scale = lp.c.iter().fold(1f64, |a, v| a.max(v.abs()));
    let mut max_reduced_cost = 0f64;
    for k in 0..n + m {
        let d = cost(k) - dot(&duals, &column(k));
        // positive-level columns must price to zero; others must not improve
        let tol_level = ORACLE_TOL * lp.b.iter().fold(1f64, |a, v| a.max(v.abs()));
        let r = if level(k) > tol_level { d.abs() } else { d };
        max_reduced_cost = max_reduced_cost.max(r / c_scale);
    }

    Ok(Certificate {
        max_reduced_cost,
        max_primal_violation,
        max_negativity,
        objective_gap,
        worst_row,
        tolerance: ORACLE_TOL,
    })
}

/// Solves `Bᵀ y = c_B`.
fn basis_duals(
    basis: &[usize],
    column: &dyn Fn(usize) -> Vec<f64>,
    cost: &dyn Fn(usize) -> f64,
) -> Option<Vec<f64>> {
    let bt: Vec<Vec<f64>> = basis.iter().map(|&k| column(k)).collect();
    let cb: Vec<f64> = basis.iter().map(|&k| cost(k)).collect();
    solve_linear(bt, cb)
}

fn derive_basis(
    n: usize,
    m: usize,
    column: &dyn Fn(usize) -> Vec<f64>,
    level: &dyn Fn(usize) -> f64,
) -> Vec<usize> {
    let tol = ORACLE_TOL;
    let positive = (0..n + m).filter(|&k| level(k) > tol);
    let slacks = (n..n + m).filter(|&k| level(k) <= tol);
    let structural = (0..n).filter(|&k| level(k) <= tol);
    let mut basis = Vec::new();
    // Incremental independence test via an orthogonalized copy of the basis.
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for k in positive.chain(slacks).chain(structural) {
        if basis.len() == m {
            break;
        }
        let mut v = column(k);
        let norm0 = dot(&v, &v).sqrt();
        if norm0 == 0.0 {
            continue;
        }
        for q in &ortho {
            let f = dot(&v, q);
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= f * b);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-9 * norm0 {
            v.iter_mut().for_each(|a| *a /= norm);
            ortho.push(v);
            basis.push(k);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sense;

    fn textbook() -> StandardFormLP {
        StandardFormLP::new(
            vec![3.0, 5.0],
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            vec![4.0, 12.0, 18.0],
        )
    }

    #[test]
    fn textbook_vertex() {
        let out = vertex_enumerate(&textbook()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert!((out.objective_value.unwrap() - 36.0).abs() < 1e-9);
        let x = out.primal_point.unwrap();
        assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = StandardFormLP::new(vec![1.0], vec![vec![1.0]], vec![-1.0]);
        assert_eq!(vertex_enumerate(&lp).unwrap().status, Status::Infeasible);
        let lp = StandardFormLP::new(vec![1.0, 0.0], vec![vec![-1.0, 1.0]], vec![1.0]);
        assert_eq!(vertex_enumerate(&lp).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn budget_enforced() {
        let lp = StandardFormLP::new(vec![1.0; 9], vec![vec![1.0; 9]], vec![1.0]);
        assert!(matches!(vertex_enumerate(&lp), Err(OracleError::OracleBudget(_))));
    }

    #[test]
    fn general_free_variable() {
        // min x s.t. x >= -2, x free -> -2
        let mut glp = GeneralLP::new(Sense::Minimize, 1)
            .with_objective(vec![1.0])
            .with_bounds(0, f64::NEG_INFINITY, f64::INFINITY);
        glp.add_constraint(vec![1.0], Relation::Ge, -2.0);
        let out = vertex_enumerate_general(&glp).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert!((out.objective_value.unwrap() + 2.0).abs() < 1e-9);
        glp.sense = Sense::Maximize;
        assert_eq!(vertex_enumerate_general(&glp).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn general_lineality_with_bounded_objective() {
        // max x0 s.t. x0 <= 3, x1 free and absent from the objective
        let mut glp = GeneralLP::new(Sense::Maximize, 2)
            .with_objective(vec![1.0, 0.0])
            .with_bounds(1, f64::NEG_INFINITY, f64::INFINITY);
        glp.add_constraint(vec![1.0, 0.0], Relation::Le, 3.0);
        let out = vertex_enumerate_general(&glp).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert!((out.objective_value.unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn corners() {
        let lp = BoxLP::new(vec![0.0, 1.0], vec![2.0, 3.0], vec![1.0, -1.0]);
        assert_eq!(corner_enumerate(&lp).unwrap(), 1.0);
        let lp = BoxLP::new(vec![0.0; 21], vec![1.0; 21], vec![1.0; 21]);
        assert!(matches!(corner_enumerate(&lp), Err(OracleError::OracleBudget(_))));
    }

    #[test]
    fn certificate_accepts_optimum() {
        let lp = textbook();
        let out = vertex_enumerate(&lp).unwrap();
        let cert = check_certificate(&lp, &out).unwrap();
        assert!(cert.is_certified(), "{cert:?}");
    }

    #[test]
    fn certificate_flags_infeasible_point() {
        let lp = textbook();
        let cert = check_certificate(&lp, &SolveOutcome::optimal(36.3, vec![2.1, 6.0])).unwrap();
        assert!(!cert.is_certified());
        // third constraint: 3·2.1 + 2·6 = 18.3 > 18
        assert_eq!(cert.worst_row, Some(2));
        assert!((cert.max_primal_violation - 0.3 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn certificate_flags_suboptimal_point() {
        let lp = textbook();
        let cert = check_certificate(&lp, &SolveOutcome::optimal(0.0, vec![0.0, 0.0])).unwrap();
        assert_eq!(cert.max_primal_violation, 0.0);
        assert_eq!(cert.max_negativity, 0.0);
        assert!(cert.max_reduced_cost > cert.tolerance);
        assert!(!cert.is_certified());
    }

    #[test]
    fn certificate_requires_optimal() {
        let out = SolveOutcome::terminal(Status::Unbounded, 0, 0);
        assert_eq!(
            check_certificate(&textbook(), &out),
            Err(OracleError::NotOptimal(Status::Unbounded))
        );
    }

    #[test]
    fn linear_solver() {
        let x = solve_linear(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
        assert!(solve_linear(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
    }
}
