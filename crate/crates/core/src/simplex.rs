//! Two-phase simplex driver.
//!
//! When the initial basis contains artificial columns, phase 1 maximizes
//! `-Σ artificials`. A phase-1 optimum below `-phase1_zero` means the LP is
//! infeasible; otherwise the artificials are blocked (and pivoted out of the
//! basis where possible), the original objective is priced out against the
//! current basis, and phase 2 runs on it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::StandardFormLP;
use crate::tableau::{Tableau, TableauError, DEFAULT_ENTERING_TOL, DEFAULT_PIVOT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Unbounded,
    Infeasible,
    IterationLimit,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Unbounded => "unbounded",
            Status::Infeasible => "infeasible",
            Status::IterationLimit => "iteration_limit",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Terminal state of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub status: Status,
    /// Present iff `status` is `Optimal`.
    pub objective_value: Option<f64>,
    /// Present iff `status` is `Optimal`; one entry per structural variable.
    pub primal_point: Option<Vec<f64>>,
    pub iterations_phase1: usize,
    pub iterations_phase2: usize,
    /// Final basis over structural (`0..n`) and slack (`n..n+m`) columns,
    /// present iff `status` is `Optimal`. Rows found redundant are omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<usize>>,
}

impl SolveOutcome {
    pub fn terminal(status: Status, iterations_phase1: usize, iterations_phase2: usize) -> Self {
        SolveOutcome {
            status,
            objective_value: None,
            primal_point: None,
            iterations_phase1,
            iterations_phase2,
            basis: None,
        }
    }

    pub fn optimal(value: f64, point: Vec<f64>) -> Self {
        SolveOutcome {
            status: Status::Optimal,
            objective_value: Some(value),
            primal_point: Some(point),
            iterations_phase1: 0,
            iterations_phase2: 0,
            basis: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AntiCycling {
    Off,
    /// Switch to Bland's rule after this many consecutive degenerate pivots;
    /// `None` means `m`. Dantzig's rule resumes after a nondegenerate pivot.
    BlandAfter(Option<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Reduced costs above this are improving.
    pub entering: f64,
    pub pivot: f64,
    /// Phase-1 optima within this of zero count as feasible.
    pub phase1_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            entering: DEFAULT_ENTERING_TOL,
            pivot: DEFAULT_PIVOT_TOL,
            phase1_zero: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverLimits {
    /// Per-phase pivot limit; `None` means `50·(m + n)`.
    pub max_iterations: Option<usize>,
    pub anti_cycling: AntiCycling,
    pub tolerances: Tolerances,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_iterations: None,
            anti_cycling: AntiCycling::BlandAfter(None),
            tolerances: Tolerances::default(),
        }
    }
}

impl SolverLimits {
    pub fn with_max_iterations(mut self, max: usize) -> Self {
        self.max_iterations = Some(max);
        self
    }

    pub fn iteration_limit(&self, m: usize, n: usize) -> usize {
        self.max_iterations.unwrap_or(50 * (m + n)).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("tableau has no artificial columns")]
    NoArtificials,
    #[error("max_iterations must be at least 1")]
    InvalidLimits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PhaseEnd {
    Optimal,
    Unbounded,
    IterationLimit,
}

/// Solves `lp` with the two-phase simplex method.
pub fn solve(lp: &StandardFormLP, limits: &SolverLimits) -> Result<SolveOutcome, SolverError> {
    if limits.max_iterations == Some(0) {
        return Err(SolverError::InvalidLimits);
    }
    let mut t = Tableau::build(lp)?;
    let max_iters = limits.iteration_limit(lp.num_constraints(), lp.num_vars());
    let tol = limits.tolerances;

    let mut iterations_phase1 = 0;
    if t.num_artificial() > 0 {
        build_auxiliary(&mut t)?;
        let (end, iters) = run_phase(&mut t, limits, max_iters)?;
        iterations_phase1 = iters;
        if end == PhaseEnd::IterationLimit {
            return Ok(SolveOutcome::terminal(Status::IterationLimit, iterations_phase1, 0));
        }
        // Phase 1 is bounded above by zero; either way the optimum decides.
        if t.objective_value() < -tol.phase1_zero {
            return Ok(SolveOutcome::terminal(Status::Infeasible, iterations_phase1, 0));
        }
        iterations_phase1 += restore_objective(&mut t, &lp.c, &tol)?;
    }

    let (end, iterations_phase2) = run_phase(&mut t, limits, max_iters)?;
    let status = match end {
        PhaseEnd::Optimal => Status::Optimal,
        PhaseEnd::Unbounded => Status::Unbounded,
        PhaseEnd::IterationLimit => Status::IterationLimit,
    };
    if status != Status::Optimal {
        return Ok(SolveOutcome::terminal(status, iterations_phase1, iterations_phase2));
    }

    let n = lp.num_vars();
    let mut point = vec![0.0; n];
    let mut basis = Vec::with_capacity(t.num_constraints());
    for i in 0..t.num_constraints() {
        if t.is_redundant(i) {
            continue;
        }
        let var = t.basic_var(i);
        if var < n {
            point[var] = t.rhs(i);
        }
        basis.push(var);
    }
    Ok(SolveOutcome {
        status,
        objective_value: Some(t.objective_value()),
        primal_point: Some(point),
        iterations_phase1,
        iterations_phase2,
        basis: Some(basis),
    })
}

fn run_phase(
    t: &mut Tableau,
    limits: &SolverLimits,
    max_iters: usize,
) -> Result<(PhaseEnd, usize), SolverError> {
    let tol = limits.tolerances;
    let bland_after = match limits.anti_cycling {
        AntiCycling::Off => None,
        AntiCycling::BlandAfter(k) => Some(k.unwrap_or(t.num_constraints())),
    };
    let mut iters = 0;
    let mut degenerate_run = 0;
    loop {
        let bland = bland_after.is_some_and(|k| degenerate_run >= k);
        let entering = if bland {
            t.choose_entering_bland(tol.entering)
        } else {
            t.choose_entering(tol.entering)
        };
        let Some(e) = entering else {
            return Ok((PhaseEnd::Optimal, iters));
        };
        let leaving = if bland {
            t.choose_leaving_bland(e, tol.entering)
        } else {
            t.choose_leaving(e, tol.entering)
        };
        let Some(l) = leaving else {
            return Ok((PhaseEnd::Unbounded, iters));
        };
        if iters >= max_iters {
            return Ok((PhaseEnd::IterationLimit, iters));
        }
        let step = t.ratio(l, e, tol.entering);
        t.pivot(t.pivot_choice(e, l), tol.pivot)?;
        iters += 1;
        if step <= tol.entering {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
    }
}

/// Replaces the objective row with the phase-1 objective `maximize -Σ a_k`,
/// priced out so that every basic artificial has zero reduced cost.
pub fn build_auxiliary(t: &mut Tableau) -> Result<(), SolverError> {
    if t.num_artificial() == 0 {
        return Err(SolverError::NoArtificials);
    }
    let costs: Vec<f64> = (0..t.num_var_cols())
        .map(|j| if t.is_artificial(j) { -1.0 } else { 0.0 })
        .collect();
    t.set_objective_row(&costs, 0.0);
    for i in 0..t.num_constraints() {
        if t.is_artificial(t.basic_var(i)) {
            t.add_row_to_objective(i, 1.0);
        }
    }
    Ok(())
}

/// Ends phase 1: blocks artificial columns, drives zero-level basic
/// artificials out of the basis (or marks their rows redundant when no
/// admissible pivot exists) and prices out `c` against the resulting basis.
///
/// Returns the number of extra pivots performed.
pub fn restore_objective(
    t: &mut Tableau,
    c: &[f64],
    tol: &Tolerances,
) -> Result<usize, SolverError> {
    for j in 0..t.num_var_cols() {
        if t.is_artificial(j) {
            t.block_column(j);
        }
    }
    let non_artificial = t.num_vars() + t.num_slack();
    let mut pivots = 0;
    for i in 0..t.num_constraints() {
        if !t.is_artificial(t.basic_var(i)) {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..non_artificial {
            if t.is_basic(j) {
                continue;
            }
            let v = t.get(i, j).abs();
            if v > tol.pivot && best.is_none_or(|(_, b)| v > b) {
                best = Some((j, v));
            }
        }
        match best {
            Some((j, _)) => {
                t.pivot(t.pivot_choice(j, i), tol.pivot)?;
                pivots += 1;
            }
            None => t.mark_redundant(i),
        }
    }

    let mut costs = vec![0.0; t.num_var_cols()];
    costs[..c.len()].copy_from_slice(c);
    t.set_objective_row(&costs, 0.0);
    for i in 0..t.num_constraints() {
        if t.is_redundant(i) {
            continue;
        }
        let cb = costs[t.basic_var(i)];
        if cb != 0.0 {
            t.add_row_to_objective(i, -cb);
        }
    }
    Ok(pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn textbook() -> StandardFormLP {
        StandardFormLP::new(
            vec![3.0, 5.0],
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            vec![4.0, 12.0, 18.0],
        )
    }

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-9, "{a} != {b}");
    }

    #[test]
    fn textbook_optimum() {
        let out = solve(&textbook(), &SolverLimits::default()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_close(out.objective_value.unwrap(), 36.0);
        let x = out.primal_point.unwrap();
        assert_close(x[0], 2.0);
        assert_close(x[1], 6.0);
        assert_eq!(out.iterations_phase1, 0);
    }

    #[test]
    fn unbounded() {
        let lp = StandardFormLP::new(vec![1.0, 1.0], vec![vec![-1.0, 1.0]], vec![1.0]);
        let out = solve(&lp, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, Status::Unbounded);
        assert!(out.objective_value.is_none() && out.primal_point.is_none());
    }

    #[test]
    fn infeasible_via_phase_one() {
        let lp = StandardFormLP::new(vec![1.0], vec![vec![1.0]], vec![-1.0]);
        let out = solve(&lp, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, Status::Infeasible);
    }

    #[test]
    fn phase_one_then_optimal() {
        // max x1 + x2, x1 + x2 <= 4, x1 >= 1 (as -x1 <= -1)
        let lp = StandardFormLP::new(
            vec![1.0, 2.0],
            vec![vec![1.0, 1.0], vec![-1.0, 0.0]],
            vec![4.0, -1.0],
        );
        let out = solve(&lp, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_close(out.objective_value.unwrap(), 7.0);
        assert!(out.iterations_phase1 >= 1);
    }

    #[test]
    fn auxiliary_single_artificial() {
        let lp = StandardFormLP::new(vec![1.0], vec![vec![-2.0]], vec![-1.0]);
        let mut t = Tableau::build(&lp).unwrap();
        build_auxiliary(&mut t).unwrap();
        // row 0 after negation: [2, -1, 1 | 1]; objective -a + row0
        assert_eq!(t.reduced_cost(0), 2.0);
        assert_eq!(t.reduced_cost(1), -1.0);
        assert_eq!(t.reduced_cost(2), 0.0);
        assert_eq!(t.objective_value(), -1.0);
    }

    #[test]
    fn auxiliary_requires_artificials() {
        let mut t = Tableau::build(&textbook()).unwrap();
        assert_eq!(build_auxiliary(&mut t), Err(SolverError::NoArtificials));
    }

    #[test]
    fn auxiliary_two_artificials() {
        let lp = StandardFormLP::new(
            vec![1.0, 1.0],
            vec![vec![-1.0, -2.0], vec![-3.0, -1.0], vec![1.0, 1.0]],
            vec![-2.0, -5.0, 9.0],
        );
        let mut t = Tableau::build(&lp).unwrap();
        build_auxiliary(&mut t).unwrap();
        assert_eq!(t.objective_value(), -(2.0 + 5.0));
        for i in 0..t.num_constraints() {
            assert_eq!(t.reduced_cost(t.basic_var(i)), 0.0);
        }
    }

    #[test]
    fn restore_without_basic_artificials() {
        let lp = StandardFormLP::new(vec![1.0, 2.0], vec![vec![-1.0, -1.0]], vec![-1.0]);
        let mut t = Tableau::build(&lp).unwrap();
        build_auxiliary(&mut t).unwrap();
        let (end, _) = run_phase(&mut t, &SolverLimits::default(), 100).unwrap();
        assert_eq!(end, PhaseEnd::Optimal);
        assert!(t.basis().iter().all(|&b| !t.is_artificial(b)));
        let pivots = restore_objective(&mut t, &lp.c, &Tolerances::default()).unwrap();
        assert_eq!(pivots, 0);
        for i in 0..t.num_constraints() {
            assert!(t.reduced_cost(t.basic_var(i)).abs() < 1e-12);
        }
        assert!(t.is_blocked(3));
    }

    // max x1 s.t. x1 <= 1, -x1 <= -1: the ratio tie leaves the artificial
    // basic at level zero after phase 1.
    fn stuck_artificial() -> (StandardFormLP, Tableau) {
        let lp = StandardFormLP::new(vec![1.0], vec![vec![1.0], vec![-1.0]], vec![1.0, -1.0]);
        let mut t = Tableau::build(&lp).unwrap();
        build_auxiliary(&mut t).unwrap();
        let (end, _) = run_phase(&mut t, &SolverLimits::default(), 100).unwrap();
        assert_eq!(end, PhaseEnd::Optimal);
        assert_eq!(t.basis(), vec![0, 3]);
        assert!(t.objective_value().abs() < 1e-12);
        (lp, t)
    }

    #[test]
    fn restore_pivots_out_zero_level_artificial() {
        let (lp, mut t) = stuck_artificial();
        let pivots = restore_objective(&mut t, &lp.c, &Tolerances::default()).unwrap();
        assert_eq!(pivots, 1);
        assert!(t.basis().iter().all(|&b| !t.is_artificial(b)));
        assert!(!t.is_redundant(1));
        let out = solve(&lp, &SolverLimits::default()).unwrap();
        assert_close(out.objective_value.unwrap(), 1.0);
        assert_close(out.primal_point.unwrap()[0], 1.0);
    }

    #[test]
    fn restore_marks_all_zero_row_redundant() {
        let (lp, mut t) = stuck_artificial();
        for j in 0..t.num_vars() + t.num_slack() {
            t.set(1, j, 0.0);
        }
        let pivots = restore_objective(&mut t, &lp.c, &Tolerances::default()).unwrap();
        assert_eq!(pivots, 0);
        assert!(t.is_redundant(1));
        let (end, _) = run_phase(&mut t, &SolverLimits::default(), 100).unwrap();
        assert_eq!(end, PhaseEnd::Optimal);
        assert_close(t.objective_value(), 1.0);
    }

    #[test]
    fn iteration_limit_reported() {
        let out = solve(&textbook(), &SolverLimits::default().with_max_iterations(1)).unwrap();
        assert_eq!(out.status, Status::IterationLimit);
        assert_eq!(out.iterations_phase2, 1);
    }

    #[test]
    fn zero_iteration_limit_rejected() {
        assert_eq!(
            solve(&textbook(), &SolverLimits::default().with_max_iterations(0)),
            Err(SolverError::InvalidLimits)
        );
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Beale's classic cycling LP under Dantzig's rule, as maximization.
        let lp = StandardFormLP::new(
            vec![0.75, -150.0, 0.02, -6.0],
            vec![
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![0.0, 0.0, 1.0],
        );
        let out = solve(&lp, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_close(out.objective_value.unwrap(), 0.05);
    }

    #[test]
    fn empty_lp_is_optimal_at_zero() {
        let lp = StandardFormLP::new(vec![], vec![], vec![]);
        let out = solve(&lp, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_eq!(out.objective_value, Some(0.0));
    }
}
