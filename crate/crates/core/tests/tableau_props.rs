mod common;

use batchlp::tableau::{DEFAULT_ENTERING_TOL as TOL, DEFAULT_PIVOT_TOL};
use batchlp::{LpGenerator, StandardFormLP, Tableau};
use common::{naive_entering, naive_leaving, rng};
use proptest::prelude::*;
use rand::Rng;

/// Row-major copy of a tableau with the textbook pivot applied row by row.
struct Mirror {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
}

impl Mirror {
    fn of(t: &Tableau) -> Self {
        let rows = (0..t.p())
            .map(|i| (0..t.q()).map(|j| t.get(i, j)).collect())
            .collect();
        Mirror {
            rows,
            basis: t.basis(),
        }
    }

    fn pivot(&mut self, l: usize, e: usize, basis_col: usize) {
        let pe = self.rows[l][e];
        let new_row: Vec<f64> = self.rows[l].iter().map(|v| v / pe).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == l {
                continue;
            }
            let f = row[e];
            for j in 0..row.len() {
                if j != basis_col {
                    row[j] -= f * new_row[j];
                }
            }
        }
        for j in 0..new_row.len() {
            if j != basis_col {
                self.rows[l][j] = new_row[j];
            }
        }
        self.basis[l] = e;
    }
}

fn random_feasible_lp(r: &mut impl Rng) -> StandardFormLP {
    let m = r.gen_range(1..=7);
    let n = r.gen_range(1..=7);
    LpGenerator {
        m,
        n,
        a: -5..=9,
        b: 0..=15,
        c: -4..=9,
        feasible_start: true,
    }
    .sample(r)
}

#[test]
fn offset_law_against_row_major_mirror() {
    let mut r = rng(1);
    for _ in 0..200 {
        let lp = random_feasible_lp(&mut r);
        let mut t = Tableau::build(&lp).unwrap();
        let mut mirror = Mirror::of(&t);
        for _ in 0..6 {
            let p = t.p();
            for i in 0..p {
                for j in 0..t.q() {
                    assert_eq!(t.values()[j * p + i], t.get(i, j));
                    if j != t.basis_col() {
                        assert_eq!(t.get(i, j), mirror.rows[i][j], "cell ({i},{j})");
                    }
                }
            }
            assert_eq!(t.basis(), mirror.basis);
            let Some(e) = t.choose_entering(TOL) else { break };
            let Some(l) = t.choose_leaving(e, TOL) else { break };
            t.pivot(t.pivot_choice(e, l), DEFAULT_PIVOT_TOL).unwrap();
            mirror.pivot(l, e, t.basis_col());
        }
    }
}

#[test]
fn scans_match_naive_reductions() {
    let mut r = rng(2);
    for _ in 0..1000 {
        let lp = random_feasible_lp(&mut r);
        let mut t = Tableau::build(&lp).unwrap();
        let steps = r.gen_range(0..4);
        for _ in 0..steps {
            let Some(e) = t.choose_entering(TOL) else { break };
            let Some(l) = t.choose_leaving(e, TOL) else { break };
            t.pivot(t.pivot_choice(e, l), DEFAULT_PIVOT_TOL).unwrap();
        }
        assert_eq!(t.choose_entering(TOL), naive_entering(&t, TOL));
        for e in 0..t.num_var_cols() {
            assert_eq!(t.choose_leaving(e, TOL), naive_leaving(&t, e, TOL));
        }
    }
}

#[test]
fn pivot_invariants_on_feasible_dictionaries() {
    let mut r = rng(3);
    let mut pivots = 0;
    while pivots < 1000 {
        let lp = random_feasible_lp(&mut r);
        let mut t = Tableau::build(&lp).unwrap();
        loop {
            let Some(e) = t.choose_entering(TOL) else { break };
            let Some(l) = t.choose_leaving(e, TOL) else { break };
            let before = t.objective_value();
            t.pivot(t.pivot_choice(e, l), DEFAULT_PIVOT_TOL).unwrap();
            pivots += 1;
            assert!(t.objective_value() >= before - 1e-9);
            for i in 0..t.num_constraints() {
                assert!(t.rhs(i) >= -1e-9);
                let b = t.basic_var(i);
                assert!(t.reduced_cost(b).abs() <= 1e-9);
                for k in 0..t.num_constraints() {
                    let want = if k == i { 1.0 } else { 0.0 };
                    assert!((t.get(k, b) - want).abs() <= 1e-9);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn basis_entries_distinct(seed in any::<u64>(), steps in 0usize..6) {
        let mut r = rng(seed);
        let lp = random_feasible_lp(&mut r);
        let mut t = Tableau::build(&lp).unwrap();
        for _ in 0..steps {
            let Some(e) = t.choose_entering(TOL) else { break };
            let Some(l) = t.choose_leaving(e, TOL) else { break };
            t.pivot(t.pivot_choice(e, l), DEFAULT_PIVOT_TOL).unwrap();
        }
        let mut basis = t.basis();
        basis.sort_unstable();
        basis.dedup();
        prop_assert_eq!(basis.len(), t.num_constraints());
        prop_assert!(basis.iter().all(|&b| b < t.num_var_cols() && t.is_basic(b)));
    }
}
