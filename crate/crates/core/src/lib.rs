//! Planted 3-regular 3-XORSAT benchmarking toolkit.
//!
//! The crate covers the full pipeline used to benchmark Ising solvers on
//! planted XORSAT problems:
//!
//! - [`xorsat`]: instance generation with a known satisfying assignment,
//!   clause evaluation, the text instance format and an exact GF(2) solver.
//! - [`ising`]: the quadratization of each parity clause into a two-body
//!   Ising Hamiltonian with one ancilla spin, plus energy bookkeeping.
//! - [`solvers`]: a coupled-laser dynamics heuristic with optional noise
//!   injection, and simulated annealing, tabu search and parallel tempering
//!   baselines behind a single [`solvers::solve`] entry point.
//! - [`bench`]: time-to-solution estimation and experiment orchestration.
//! - [`analysis`]: power-law and exponential scaling fits with bootstrap
//!   intervals and plot-ready output.
//!
//! Runnable walkthroughs for each capability live in the crate's
//! `examples/` directory; the `r3x` binary wraps the same pipeline.

pub mod analysis;
pub mod bench;
pub mod ising;
pub mod rng;
pub mod solvers;
pub mod xorsat;

pub use xorsat::{Clause, SolutionSpace, XorSatInstance};

pub use ising::{IsingModel, SpinState, VariableMap};
pub use solvers::{RunRecord, SolverConfig};
