//! Seeded random workloads.
//!
//! The default ranges draw `A` and `b` uniformly from the integers
//! `1..=1000` and `c` from `1..=500`. Such LPs are feasible at the origin and
//! bounded; negating `b` gives the infeasible-start regime that forces
//! phase 1 (and, with all-positive `A`, makes the LP infeasible).

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boxlp::BoxLP;
use crate::model::StandardFormLP;

pub const A_RANGE: RangeInclusive<i64> = 1..=1000;
pub const B_RANGE: RangeInclusive<i64> = 1..=1000;
pub const C_RANGE: RangeInclusive<i64> = 1..=500;

/// Shape and integer coefficient ranges for random LPs.
#[derive(Debug, Clone, PartialEq)]
pub struct LpGenerator {
    pub m: usize,
    pub n: usize,
    pub a: RangeInclusive<i64>,
    pub b: RangeInclusive<i64>,
    pub c: RangeInclusive<i64>,
    /// When false every `b_i` is negated.
    pub feasible_start: bool,
}

impl LpGenerator {
    /// Square `dim × dim` LPs with the default ranges.
    pub fn square(dim: usize, feasible_start: bool) -> Self {
        LpGenerator {
            m: dim,
            n: dim,
            a: A_RANGE,
            b: B_RANGE,
            c: C_RANGE,
            feasible_start,
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> StandardFormLP {
        let draw = |rng: &mut R, r: &RangeInclusive<i64>| rng.gen_range(r.clone()) as f64;
        let a = (0..self.m)
            .map(|_| (0..self.n).map(|_| draw(rng, &self.a)).collect())
            .collect();
        let sign = if self.feasible_start { 1.0 } else { -1.0 };
        let b = (0..self.m).map(|_| sign * draw(rng, &self.b)).collect();
        let c = (0..self.n).map(|_| draw(rng, &self.c)).collect();
        StandardFormLP::new(c, a, b)
    }

    pub fn batch(&self, count: usize, seed: u64) -> Vec<StandardFormLP> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample(&mut rng)).collect()
    }
}

/// `count` square LPs of dimension `dim` with the default ranges.
pub fn gen_random_lps(dim: usize, count: usize, seed: u64, feasible_start: bool) -> Vec<StandardFormLP> {
    LpGenerator::square(dim, feasible_start).batch(count, seed)
}

/// `count` random boxes of dimension `dim`: bounds in `[-1000, 1000]`,
/// directions in `[-1, 1]`.
pub fn gen_random_boxes(dim: usize, count: usize, seed: u64) -> Vec<BoxLP> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut lower = Vec::with_capacity(dim);
            let mut upper = Vec::with_capacity(dim);
            for _ in 0..dim {
                let a: f64 = rng.gen_range(-1000.0..1000.0);
                let b: f64 = rng.gen_range(-1000.0..1000.0);
                lower.push(a.min(b));
                upper.push(a.max(b));
            }
            let direction = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            BoxLP::new(lower, upper, direction)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_batch() {
        assert!(gen_random_lps(5, 0, 1, true).is_empty());
    }

    #[test]
    fn deterministic() {
        assert_eq!(gen_random_lps(5, 10, 7, true), gen_random_lps(5, 10, 7, true));
        assert_ne!(gen_random_lps(5, 10, 7, true), gen_random_lps(5, 10, 8, true));
    }

    #[test]
    fn ranges_respected() {
        for lp in gen_random_lps(3, 100, 11, true) {
            assert_eq!((lp.num_constraints(), lp.num_vars()), (3, 3));
            assert!(lp.a.iter().flatten().all(|&v| (1.0..=1000.0).contains(&v) && v.fract() == 0.0));
            assert!(lp.b.iter().all(|&v| (1.0..=1000.0).contains(&v)));
            assert!(lp.c.iter().all(|&v| (1.0..=500.0).contains(&v)));
        }
    }

    #[test]
    fn infeasible_start_negates_b() {
        let feasible = gen_random_lps(4, 5, 3, true);
        let negated = gen_random_lps(4, 5, 3, false);
        for (f, n) in feasible.iter().zip(&negated) {
            assert_eq!(f.a, n.a);
            assert!(f.b.iter().zip(&n.b).all(|(x, y)| *x == -*y));
        }
    }

    #[test]
    fn boxes_valid() {
        for b in gen_random_boxes(5, 50, 2) {
            assert!(b.check().is_ok());
        }
    }
}
