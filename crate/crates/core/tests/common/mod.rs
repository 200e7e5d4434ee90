#![allow(dead_code)]

use batchlp::tableau::SENTINEL;
use batchlp::{LpGenerator, StandardFormLP, Tableau};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive-coefficient LPs with `n ∈ [2,6]`, `m ∈ [3,8]`: A and b in
/// `1..=100`, c in `1..=50`.
pub fn small_positive_lp(rng: &mut ChaCha8Rng, feasible_start: bool) -> StandardFormLP {
    let n = rng.gen_range(2..=6);
    let m = rng.gen_range(3..=8);
    LpGenerator {
        m,
        n,
        a: 1..=100,
        b: 1..=100,
        c: 1..=50,
        feasible_start,
    }
    .sample(rng)
}

/// Mixed-sign integer LPs that land in every status.
pub fn small_mixed_lp(rng: &mut ChaCha8Rng) -> StandardFormLP {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=7);
    LpGenerator {
        m,
        n,
        a: -6..=9,
        b: -8..=20,
        c: -5..=9,
        feasible_start: true,
    }
    .sample(rng)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// Argmax over selectable reduced costs, written as a sort.
pub fn naive_entering(t: &Tableau, tol: f64) -> Option<usize> {
    let m = t.num_constraints();
    let mut cands: Vec<(f64, usize)> = (0..t.num_var_cols())
        .filter(|&j| !t.is_basic(j) && !t.is_blocked(j))
        .map(|j| (t.values()[j * t.p() + m], j))
        .filter(|&(v, _)| v > tol)
        .collect();
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    cands.first().map(|&(_, j)| j)
}

/// Materialized ratio array with sentinel fill, then a sort.
pub fn naive_leaving(t: &Tableau, e: usize, tol: f64) -> Option<usize> {
    let p = t.p();
    let rhs_col = t.q() - 1;
    let mut data: Vec<(f64, usize)> = (0..t.num_constraints())
        .map(|i| {
            let a = t.values()[e * p + i];
            let r = if a > tol && !t.is_redundant(i) {
                t.values()[rhs_col * p + i] / a
            } else {
                SENTINEL
            };
            (r, i)
        })
        .collect();
    data.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    data.first().filter(|&&(r, _)| r < SENTINEL).map(|&(_, i)| i)
}
