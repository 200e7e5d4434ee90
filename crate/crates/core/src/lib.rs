//! Batched dense linear programming.
//!
//! `batchlp` solves many small-to-medium LPs at once with a two-phase
//! simplex method on a column-major dense tableau. LPs whose feasible region
//! is a hyper-rectangle take a closed-form path instead. Batches are cut
//! into chunks that fit a memory budget and each chunk is solved on a worker
//! pool.
//!
//! ```
//! use batchlp::{solve, SolverLimits, StandardFormLP, Status};
//!
//! // maximize 3x + 5y  s.t.  x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18, x, y ≥ 0
//! let lp = StandardFormLP::new(
//!     vec![3.0, 5.0],
//!     vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
//!     vec![4.0, 12.0, 18.0],
//! );
//! let out = solve(&lp, &SolverLimits::default()).unwrap();
//! assert_eq!(out.status, Status::Optimal);
//! assert!((out.objective_value.unwrap() - 36.0).abs() < 1e-9);
//! ```
//!
//! The guide in `book/` walks through each piece; its code listings are
//! compiled and run as doctests of this crate.

pub mod batch;
pub mod bench;
pub mod boxlp;
pub mod generate;
pub mod model;
pub mod mps;
pub mod oracle;
pub mod simplex;
pub mod tableau;

pub use batch::{batch_solve, lp_memory_bytes, plan_chunks, BatchConfig, BatchError, BatchReport, ChunkPlan, StatusCounts};
pub use bench::{run_bench, BenchRow, BenchSpec};
pub use boxlp::{solve_box, solve_box_batch, BoxError, BoxLP, BoxSolution};
pub use generate::{gen_random_boxes, gen_random_lps, LpGenerator};
pub use model::{standardize, GeneralLP, ModelError, Relation, Sense, StandardFormLP, VariableMap, Violation};
pub use mps::{lower_to_general, parse_mps, read_mps, MpsError, MpsModel, ParseError};
pub use oracle::{check_certificate, corner_enumerate, vertex_enumerate, vertex_enumerate_general, Certificate, OracleError};
pub use simplex::{solve, AntiCycling, SolveOutcome, SolverError, SolverLimits, Status, Tolerances};
pub use tableau::{PivotChoice, Tableau, TableauError};

// Each chapter of the guide becomes an empty module whose docs are the
// chapter text, so `cargo test --doc` runs every listing.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/standard-form.md")]
    mod standard_form {}
    #[doc = include_str!("../../../book/src/tableau.md")]
    mod tableau {}
    #[doc = include_str!("../../../book/src/two-phase.md")]
    mod two_phase {}
    #[doc = include_str!("../../../book/src/hyper-rectangles.md")]
    mod hyper_rectangles {}
    #[doc = include_str!("../../../book/src/batching.md")]
    mod batching {}
    #[doc = include_str!("../../../book/src/mps.md")]
    mod mps {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
