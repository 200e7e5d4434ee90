//! Closed-form maximization of a linear function over a hyper-rectangle.
//!
//! For `B = [a_1, b_1] × … × [a_n, b_n]` the maximum of `ℓ·x` decomposes per
//! coordinate: `h_i = a_i` when `ℓ_i < 0` and `h_i = b_i` otherwise, and the
//! optimum is `Σ ℓ_i·h_i`. Coordinates with `ℓ_i = 0` take `b_i`; the value
//! does not depend on that choice.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::batch::worker_pool;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxLP {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSolution {
    pub value: f64,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoxError {
    #[error("coordinate {index}: lower bound {lower} exceeds upper bound {upper}")]
    InvalidBox { index: usize, lower: f64, upper: f64 },
    #[error("lower, upper and direction lengths differ ({0}, {1}, {2})")]
    DimensionMismatch(usize, usize, usize),
    #[error("coordinate {0} has a non-finite entry")]
    NonFinite(usize),
}

impl BoxLP {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, direction: Vec<f64>) -> Self {
        BoxLP {
            lower,
            upper,
            direction,
        }
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn check(&self) -> Result<(), BoxError> {
        let (nl, nu, nd) = (self.lower.len(), self.upper.len(), self.direction.len());
        if nl != nu || nu != nd {
            return Err(BoxError::DimensionMismatch(nl, nu, nd));
        }
        for i in 0..nd {
            let (lo, up, d) = (self.lower[i], self.upper[i], self.direction[i]);
            if !(lo.is_finite() && up.is_finite() && d.is_finite()) {
                return Err(BoxError::NonFinite(i));
            }
            if lo > up {
                return Err(BoxError::InvalidBox {
                    index: i,
                    lower: lo,
                    upper: up,
                });
            }
        }
        Ok(())
    }
}

pub fn solve_box(lp: &BoxLP) -> Result<BoxSolution, BoxError> {
    lp.check()?;
    let point: Vec<f64> = lp
        .direction
        .iter()
        .zip(lp.lower.iter().zip(&lp.upper))
        .map(|(&d, (&lo, &up))| if d < 0.0 { lo } else { up })
        .collect();
    let value = lp.direction.iter().zip(&point).map(|(d, h)| d * h).sum();
    Ok(BoxSolution { value, point })
}

/// Solves every box on a pool of `workers` threads. Results are in input
/// order; an invalid box only fails its own slot.
pub fn solve_box_batch(boxes: &[BoxLP], workers: usize) -> Vec<Result<BoxSolution, BoxError>> {
    if boxes.is_empty() {
        return Vec::new();
    }
    match worker_pool(workers) {
        Ok(pool) => pool.install(|| boxes.par_iter().map(solve_box).collect()),
        Err(_) => boxes.iter().map(solve_box).collect(),
    }
}
