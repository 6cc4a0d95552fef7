//! Conflict-driven clause learning with simulated Grover guidance.
//!
//! The crate is `no_std` (it only needs `alloc`). It contains:
//!
//! * [`dimacs`]: the CNF data model, DIMACS text parsing and serialization.
//! * [`cdcl`]: a complete CDCL solver (two watched literals, first-UIP
//!   learning, VSIDS, phase saving, Luby restarts).
//! * [`extract`]: conflict-local subformula extraction around the current
//!   trail.
//! * [`grover`]: a statevector Grover subsolver with a BBHT schedule and an
//!   explicit gate-level oracle used for verification.
//! * [`hybrid`]: the controller that calls the subsolver every `k` conflicts
//!   and feeds the result back into branching heuristics only.
//! * [`scagen`]: a generator for power side-channel proxy instances.
//!
//! File IO, timing and the command-line front end live in the `qgcl` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cdcl;
pub mod dimacs;
pub mod extract;
pub mod families;
pub mod grover;
pub mod hybrid;
pub mod scagen;

mod hash;

pub use cdcl::{SolveResult, SolveStatus, Solver, SolverConfig, Stats};
pub use dimacs::{Clause, Cnf, Lit, Var};
