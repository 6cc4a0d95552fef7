//! Classical conflict-driven clause learning.
//!
//! [`Solver`] is a MiniSat-style engine: two watched literals, first-UIP
//! learning with basic minimization, VSIDS with phase saving, Luby restarts
//! and activity-based learned clause deletion. The search loop accepts a
//! [`SearchHook`] that runs after every conflict; the hybrid controller uses
//! it to inject heuristic guidance.

mod heap;
mod solver;

use alloc::vec::Vec;

use crate::dimacs::{eval_assignment, Cnf, CnfError};

pub use solver::{ClauseRef, LevelZeroConflict, SearchHook, Solver};

/// Solver parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// VSIDS decay, applied once per conflict.
    pub var_decay: f64,
    pub clause_activity_decay: f64,
    /// Luby unit, in conflicts.
    pub restart_base: u64,
    pub random_seed: u64,
    /// Polarity used for variables that were never assigned.
    pub initial_phase: bool,
    /// Stop with [`SolveStatus::Unknown`] after this many conflicts.
    pub conflict_budget: Option<u64>,
    /// Learned clauses are reduced once they exceed this multiple of the
    /// original clause count.
    pub learnt_cap_factor: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            var_decay: 0.95,
            clause_activity_decay: 0.999,
            restart_base: 100,
            random_seed: 0,
            initial_phase: false,
            conflict_budget: None,
            learnt_cap_factor: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("decay factor {0} must lie strictly between 0 and 1")]
    Decay(f64),
    #[error("restart base must be at least 1")]
    RestartBase,
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolverConfig {
            random_seed: seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for d in [self.var_decay, self.clause_activity_decay] {
            if !(d > 0.0 && d < 1.0) {
                return Err(ConfigError::Decay(d));
            }
        }
        if self.restart_base == 0 {
            return Err(ConfigError::RestartBase);
        }
        Ok(())
    }
}

/// Search counters. All counters only grow during a run.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stats {
    pub restarts: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub grover_calls: u64,
    /// Filled in by callers that can measure time; the core never does.
    pub wall_time: f64,
}

impl Stats {
    /// Equality on every counter, ignoring wall time.
    pub fn same_counters(&self, other: &Stats) -> bool {
        (
            self.restarts,
            self.conflicts,
            self.decisions,
            self.propagations,
            self.grover_calls,
        ) == (
            other.restarts,
            other.conflicts,
            other.decisions,
            other.propagations,
            other.grover_calls,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SolveStatus {
    Sat,
    Unsat,
    /// The conflict budget ran out.
    Unknown,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Sat => "SAT",
            SolveStatus::Unsat => "UNSAT",
            SolveStatus::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Present iff `status` is `Sat`; `model[i]` is the value of variable `i + 1`.
    pub model: Option<Vec<bool>>,
    pub stats: Stats,
}

/// `luby(i)` for `i >= 1`: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
pub fn luby(i: u64) -> u64 {
    assert!(i >= 1, "the Luby sequence is 1-indexed");
    let mut i = i;
    loop {
        // smallest k with i <= 2^k - 1
        let mut k = 1u32;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if i == (1u64 << k) - 1 {
            return 1u64 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

/// Checks a full assignment against the formula.
pub fn check_model(cnf: &Cnf, model: &[bool]) -> Result<bool, CnfError> {
    Ok(eval_assignment(cnf, model)?.satisfied())
}

/// Solves `cnf` with the plain CDCL loop.
pub fn solve(cnf: &Cnf, config: &SolverConfig) -> SolveResult {
    Solver::new(cnf, config.clone()).solve()
}
