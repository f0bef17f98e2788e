//! Exact global optimization for K-center clustering with centers restricted
//! to samples.
//!
//! The solver is a reduced-space branch and bound that only branches on the
//! axis-aligned boxes holding each cluster center. Lower bounds come from a
//! closed-form max-min over samples, upper bounds from evaluating concrete
//! sample tuples. Cluster pre-assignment, bounds tightening and sample
//! reduction shrink the search space without removing optimal solutions.
//!
//! This crate is `no_std` (it needs `alloc`). Threading, clocks and file
//! formats live in the `kcenter` companion crate, which plugs into
//! [`parallel::Executor`] and [`search::Clock`].
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod assign;
pub mod bounds;
pub mod dataset;
pub mod heuristic;
pub mod oracle;
pub mod parallel;
pub mod reduce;
pub mod search;
pub mod tighten;

mod error;

pub use error::Error;

pub use assign::AssignmentState;
pub use dataset::{root_region, sqdist, AxisBox, CenterRegion, Dataset};
pub use heuristic::{fft, fft_multistart, CenterSet};
pub use oracle::{brute_force, OracleResult};
pub use parallel::{Executor, Serial};
pub use search::{solve, solve_with, Clock, SolveReport, SolverConfig, Termination, TraceRecord};

pub type Result<T> = core::result::Result<T, Error>;
