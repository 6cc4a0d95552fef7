//! Grover-guided CDCL: the call schedule, feedback into the branching
//! heuristic, and a first-order runtime model.
//!
//! Every `grover_interval` conflicts (up to `max_grover_calls` times) the
//! controller extracts a small subformula around the current trail, runs
//! the simulated BBHT search on it, and turns the best candidate into
//! activity bumps and saved phases. Nothing else in the solver is touched:
//! clauses are learned only by conflict analysis, and a SAT answer is only
//! reported for a model found and checked by the CDCL search.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cdcl::{SearchHook, SolveResult, Solver, SolverConfig};
use crate::dimacs::Cnf;
use crate::extract::{try_extract, ExtractionConfig, Occurrences, SkipReason, SubFormula, TrailSnapshot};
use crate::grover::{bbht_search_with, success_probability, GroverConfig, GroverError};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HybridConfig {
    /// Conflicts between call points.
    pub grover_interval: u64,
    pub max_grover_calls: u32,
    /// Base mixing strength; the effective strength is `eta0 * (1 - q)`.
    pub eta0: f64,
    /// Saved phases are written only when `q` is at most this.
    pub polarity_q_threshold: f64,
    /// Extraction settings, including the budget on `n_sub + m_sub`.
    pub extraction: ExtractionConfig,
    pub grover: GroverConfig,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig {
            grover_interval: 250,
            max_grover_calls: 15,
            eta0: 1.0,
            polarity_q_threshold: 0.1,
            extraction: ExtractionConfig::default(),
            grover: GroverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HybridConfigError {
    #[error("grover_interval must be positive")]
    Interval,
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfUnitInterval { name: &'static str, value: f64 },
    #[error(transparent)]
    Extraction(#[from] crate::extract::ExtractionConfigError),
    #[error(transparent)]
    Grover(#[from] GroverError),
}

fn unit(name: &'static str, value: f64) -> Result<(), HybridConfigError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(HybridConfigError::OutOfUnitInterval { name, value })
    }
}

impl HybridConfig {
    pub fn budget(&self) -> usize {
        self.extraction.budget
    }

    pub fn validate(&self) -> Result<(), HybridConfigError> {
        if self.grover_interval == 0 {
            return Err(HybridConfigError::Interval);
        }
        unit("eta0", self.eta0)?;
        unit("polarity_q_threshold", self.polarity_q_threshold)?;
        self.extraction.validate()?;
        self.grover.validate()?;
        Ok(())
    }
}

/// One Grover call that ran.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CallRecord {
    /// Conflict count when the call was made.
    pub conflict_index: u64,
    pub n_sub: usize,
    pub m_sub: usize,
    pub q: f64,
    pub attempts: u32,
    /// Oracle applications over all attempts.
    pub iterations: u64,
    /// Whether any saved phase was written.
    pub polarity_applied: bool,
    /// Clause database fingerprint right before and after the hints.
    pub db_hash_before: u64,
    pub db_hash_after: u64,
}

/// Call points at which nothing was sent to the subsolver.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SkippedCalls {
    pub nothing_to_extract: u32,
    pub falsified: u32,
    pub trivial: u32,
    pub over_budget: u32,
    /// Subformula exceeded the simulation limit.
    pub too_large: u32,
}

impl SkippedCalls {
    pub fn total(&self) -> u32 {
        self.nothing_to_extract + self.falsified + self.trivial + self.over_budget + self.too_large
    }

    fn count(&mut self, reason: SkipReason) {
        match reason {
            SkipReason::NothingToExtract => self.nothing_to_extract += 1,
            SkipReason::Falsified => self.falsified += 1,
            SkipReason::Trivial => self.trivial += 1,
            SkipReason::OverBudget => self.over_budget += 1,
        }
    }
}

/// `true` iff `conflicts` is a positive multiple of the interval beyond the
/// last call point and calls remain.
pub fn should_call_grover(conflicts: u64, last_call_at: u64, calls_used: u32, config: &HybridConfig) -> bool {
    conflicts > 0
        && conflicts.is_multiple_of(config.grover_interval)
        && conflicts > last_call_at
        && calls_used < config.max_grover_calls
}

/// Effective mixing strength for violation score `q`.
pub fn eta_for(eta0: f64, q: f64) -> f64 {
    eta0 * (1.0 - q)
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("{name} = {value} is outside [0, 1]")]
pub struct NotAProbability {
    pub name: &'static str,
    pub value: f64,
}

/// `(1 - eta) * pi + eta * pi_hat`.
pub fn mix_preferences(pi: f64, pi_hat: f64, eta: f64) -> Result<f64, NotAProbability> {
    for (name, value) in [("pi", pi), ("pi_hat", pi_hat), ("eta", eta)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(NotAProbability { name, value });
        }
    }
    Ok((1.0 - eta) * pi + eta * pi_hat)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HintReport {
    pub bumped: usize,
    pub phases_written: usize,
}

/// Feeds a candidate back into the solver's heuristics.
///
/// Every variable of `sub` gets `var_inc * occurrences * (2 - q)` added to
/// its activity. When `q <= polarity_q_threshold`, variables occurring at
/// least twice get the saved phase obtained by mixing the current phase
/// with the candidate value at strength `eta0 * (1 - q)` and rounding.
pub fn apply_hints(
    solver: &mut Solver,
    sub: &SubFormula,
    beta: &[bool],
    q: f64,
    config: &HybridConfig,
) -> HintReport {
    let occ = sub.occurrence_counts();
    let unit = solver.var_inc();
    let scale = 1.0 + (1.0 - q);
    let set_phases = q <= config.polarity_q_threshold;
    let eta = eta_for(config.eta0, q);
    let mut report = HintReport::default();
    for (dense, &var) in sub.var_map.iter().enumerate() {
        solver.bump_activity_by(var, unit * occ[dense] as f64 * scale);
        report.bumped += 1;
        if set_phases && occ[dense] >= 2 {
            let pi = if solver.saved_phase(var) { 1.0 } else { 0.0 };
            let pi_hat = if beta[dense] { 1.0 } else { 0.0 };
            let mixed = mix_preferences(pi, pi_hat, eta).expect("inputs are in [0, 1]");
            solver.set_saved_phase(var, mixed >= 0.5);
            report.phases_written += 1;
        }
    }
    report
}

/// [`SearchHook`] running the Grover call schedule.
pub struct HybridController<'a> {
    config: &'a HybridConfig,
    occurrences: Occurrences,
    rng: ChaCha8Rng,
    last_call_at: u64,
    pub calls: Vec<CallRecord>,
    pub skipped: SkippedCalls,
}

impl<'a> HybridController<'a> {
    /// The controller draws from its own stream of the solver seed, so the
    /// solver's random sequence is the same as in a plain run.
    pub fn new(cnf: &Cnf, config: &'a HybridConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        HybridController {
            config,
            occurrences: Occurrences::build(cnf),
            rng,
            last_call_at: 0,
            calls: Vec::new(),
            skipped: SkippedCalls::default(),
        }
    }

    fn call(&mut self, solver: &mut Solver) {
        let conflicts = solver.stats().conflicts;
        self.last_call_at = conflicts;
        let snap = TrailSnapshot::capture(solver, self.config.extraction.max_seed_candidates);
        let sub = match try_extract(
            solver.formula(),
            &self.occurrences,
            &snap,
            &self.config.extraction,
            &mut self.rng,
        ) {
            Ok(sub) => sub,
            Err(reason) => {
                self.skipped.count(reason);
                return;
            }
        };
        let outcome = match bbht_search_with(&sub.cnf, &self.config.grover, &mut self.rng) {
            Ok(o) => o,
            Err(_) => {
                self.skipped.too_large += 1;
                return;
            }
        };
        let db_hash_before = solver.clause_db_hash();
        let report = apply_hints(solver, &sub, &outcome.beta_bits(), outcome.q, self.config);
        let db_hash_after = solver.clause_db_hash();
        solver.stats_mut().grover_calls += 1;
        self.calls.push(CallRecord {
            conflict_index: conflicts,
            n_sub: sub.num_vars(),
            m_sub: sub.num_clauses(),
            q: outcome.q,
            attempts: outcome.attempts_used,
            iterations: outcome.total_iterations,
            polarity_applied: report.phases_written > 0,
            db_hash_before,
            db_hash_after,
        });
    }
}

impl SearchHook for HybridController<'_> {
    fn after_conflict(&mut self, solver: &mut Solver) {
        if should_call_grover(
            solver.stats().conflicts,
            self.last_call_at,
            self.calls.len() as u32,
            self.config,
        ) {
            self.call(solver);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridResult {
    pub result: SolveResult,
    pub calls: Vec<CallRecord>,
    pub skipped: SkippedCalls,
}

impl HybridResult {
    pub fn grover_iterations(&self) -> u64 {
        self.calls.iter().map(|c| c.iterations).sum()
    }
}

/// CDCL search with Grover guidance. With `max_grover_calls = 0` this is
/// exactly the plain solver run for `solver_config`.
pub fn solve_hybrid(cnf: &Cnf, config: &HybridConfig, solver_config: &SolverConfig) -> HybridResult {
    let mut solver = Solver::new(cnf, solver_config.clone());
    let mut controller = HybridController::new(cnf, config, solver_config.random_seed);
    let result = solver.solve_with(&mut controller);
    HybridResult {
        result,
        calls: controller.calls,
        skipped: controller.skipped,
    }
}

/// Inputs of one call in the runtime model.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CallCost {
    /// Extraction time, seconds.
    pub extraction: f64,
    /// Feedback time, seconds.
    pub feedback: f64,
    pub n_sub: u32,
    /// Number of satisfying assignments of the subformula.
    pub solutions: u64,
    /// Grover iterations applied.
    pub iterations: u64,
    /// Conflicts avoided per unit of amplified mass.
    pub conflict_density: f64,
}

/// First-order runtime model of a hybrid run. It is a planning heuristic
/// for reasoning about where Grover calls can pay off, not a measurement.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostModelParams {
    /// Runtime of the plain solver, seconds.
    pub cdcl_time: f64,
    /// Seconds per oracle iteration.
    pub iteration_cost: f64,
    /// Overhead multiplier on the ideal Grover cost.
    pub grover_overhead: f64,
    /// Mean cost of one conflict, seconds.
    pub conflict_cost: f64,
    pub calls: Vec<CallCost>,
}

impl CallCost {
    /// Initial marked mass `K / 2^n`.
    pub fn marked_mass(&self) -> f64 {
        self.solutions as f64 / libm::exp2(self.n_sub as f64)
    }

    /// `gamma * c_iter * sqrt(2^n / max(K, 1))`.
    pub fn grover_cost(&self, params: &CostModelParams) -> f64 {
        let space = libm::exp2(self.n_sub as f64) / self.solutions.max(1) as f64;
        params.grover_overhead * params.iteration_cost * libm::sqrt(space)
    }

    /// Expected conflicts avoided: density times the gain in marked mass.
    pub fn conflict_reduction(&self) -> f64 {
        let mu = self.marked_mass().min(1.0);
        let amplified = success_probability(mu, self.iterations).unwrap_or(mu);
        self.conflict_density * (amplified - mu)
    }
}

/// `T_cdcl + sum(call costs) - conflict_cost * sum(conflict reductions)`.
pub fn estimate_hybrid_runtime(params: &CostModelParams) -> f64 {
    let call_cost: f64 = params
        .calls
        .iter()
        .map(|c| c.extraction + c.grover_cost(params) + c.feedback)
        .sum();
    let saved: f64 = params.calls.iter().map(CallCost::conflict_reduction).sum();
    params.cdcl_time + call_cost - params.conflict_cost * saved
}

/// Subformula size `2 log2(m)` around which a quadratic search speedup
/// starts to beat per-clause classical work on `m` clauses.
pub fn crossover_size(m: u64) -> f64 {
    assert!(m >= 1, "crossover_size needs at least one clause");
    2.0 * libm::log2(m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdcl::solve;
    use crate::dimacs::{Clause, Var};
    use crate::extract::SeedClause;
    use crate::families::{pigeonhole, random_ksat};
    use alloc::vec;

    fn cnf(n: usize, cs: &[&[i64]]) -> Cnf {
        Cnf::new(n, cs.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap()
    }

    #[test]
    fn call_schedule() {
        let c = HybridConfig::default();
        let k = c.grover_interval;
        assert!(should_call_grover(2 * k, k, 1, &c));
        assert!(!should_call_grover(2 * k, k, 15, &c));
        assert!(!should_call_grover(k - 1, 0, 0, &c));
        assert!(!should_call_grover(0, 0, 0, &c));
        assert!(!should_call_grover(k, k, 1, &c));
        assert!(should_call_grover(k, 0, 0, &c));
    }

    #[test]
    fn mixing() {
        assert!((mix_preferences(0.5, 1.0, 0.4).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(mix_preferences(0.3, 1.0, 0.0).unwrap(), 0.3);
        assert_eq!(eta_for(0.8, 1.0), 0.0);
        assert!(mix_preferences(0.3, 1.2, 0.5).is_err());
        let mut last = f64::INFINITY;
        for i in 0..=20 {
            let eta = eta_for(0.8, i as f64 / 20.0);
            assert!(eta <= last);
            last = eta;
        }
    }

    fn hint_fixture() -> (Solver, SubFormula) {
        let f = cnf(6, &[&[2, 3], &[-2, 5], &[3, -5, 6], &[1, 4]]);
        let solver = Solver::new(&f, SolverConfig::default());
        let sub = SubFormula::from_global_clauses(
            &[
                Clause::from_dimacs(&[2, 3]),
                Clause::from_dimacs(&[-2, 5]),
                Clause::from_dimacs(&[3, -5, 6]),
            ],
            SeedClause::Original(0),
        );
        (solver, sub)
    }

    #[test]
    fn low_q_sets_phases_of_frequent_variables() {
        let (mut s, sub) = hint_fixture();
        // dense order is 2, 3, 5, 6; occurrences 2, 2, 2, 1
        let before: Vec<f64> = s.activities().to_vec();
        let hash = s.clause_db_hash();
        let r = apply_hints(&mut s, &sub, &[true, true, true, true], 0.0, &HybridConfig::default());
        assert_eq!(r, HintReport { bumped: 4, phases_written: 3 });
        for v in [2, 3, 5] {
            assert!(s.saved_phase(Var::new(v)));
        }
        assert!(!s.saved_phase(Var::new(6)));
        let inc = s.var_inc();
        for (v, occ) in [(2, 2.0), (3, 2.0), (5, 2.0), (6, 1.0)] {
            let i = Var::new(v).index();
            assert!((s.activities()[i] - before[i] - inc * occ * 2.0).abs() < 1e-12);
        }
        assert_eq!(s.activities()[0], before[0]);
        assert_eq!(s.clause_db_hash(), hash);
        assert_eq!(s.decision_level(), 0);
    }

    #[test]
    fn high_q_only_bumps() {
        let (mut s, sub) = hint_fixture();
        let before: Vec<f64> = s.activities().to_vec();
        let r = apply_hints(&mut s, &sub, &[true; 4], 0.9, &HybridConfig::default());
        assert_eq!(r.phases_written, 0);
        assert!((1..=6).all(|v| !s.saved_phase(Var::new(v))));
        let i = Var::new(2).index();
        assert!((s.activities()[i] - before[i] - s.var_inc() * 2.0 * 1.1).abs() < 1e-12);
    }

    #[test]
    fn zero_calls_is_the_baseline() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_ksat(60, 255, 3, &mut rng);
        let config = HybridConfig {
            max_grover_calls: 0,
            ..Default::default()
        };
        for seed in 1..4 {
            let sc = SolverConfig::with_seed(seed);
            let h = solve_hybrid(&f, &config, &sc);
            let b = solve(&f, &sc);
            assert_eq!(h.result.status, b.status);
            assert!(h.result.stats.same_counters(&b.stats));
            assert!(h.calls.is_empty());
        }
    }

    #[test]
    fn contradiction_is_refuted_before_any_call() {
        let h = solve_hybrid(&cnf(1, &[&[1], &[-1]]), &HybridConfig::default(), &SolverConfig::default());
        assert_eq!(h.result.status, crate::cdcl::SolveStatus::Unsat);
        assert!(h.calls.is_empty());
        assert_eq!(h.skipped.total(), 0);
    }

    #[test]
    fn calls_respect_budget_and_leave_clauses_alone() {
        let f = pigeonhole(8, 7);
        let config = HybridConfig {
            grover_interval: 50,
            ..Default::default()
        };
        let h = solve_hybrid(&f, &config, &SolverConfig::with_seed(1));
        assert_eq!(h.result.status, crate::cdcl::SolveStatus::Unsat);
        assert!(!h.calls.is_empty());
        assert!(h.calls.len() <= 15);
        assert_eq!(h.result.stats.grover_calls, h.calls.len() as u64);
        for c in &h.calls {
            assert!(c.n_sub + c.m_sub <= 20);
            assert_eq!(c.db_hash_before, c.db_hash_after);
            assert_eq!(c.conflict_index % 50, 0);
        }
    }

    #[test]
    fn cost_model_edges() {
        let mut p = CostModelParams {
            cdcl_time: 12.5,
            iteration_cost: 1e-3,
            grover_overhead: 2.0,
            conflict_cost: 1e-4,
            calls: vec![],
        };
        assert_eq!(estimate_hybrid_runtime(&p), 12.5);
        p.calls.push(CallCost {
            extraction: 0.01,
            feedback: 0.02,
            n_sub: 8,
            solutions: 4,
            iterations: 0,
            conflict_density: 1000.0,
        });
        // sqrt(256 / 4) = 8 iterations' worth of oracle work
        let expect = 12.5 + 0.01 + 0.02 + 2.0 * 1e-3 * 8.0;
        assert!((estimate_hybrid_runtime(&p) - expect).abs() < 1e-12);
    }

    #[test]
    fn crossover() {
        assert_eq!(crossover_size(1), 0.0);
        assert_eq!(crossover_size(1 << 10), 20.0);
        assert!((crossover_size(200) - 15.287712379549449).abs() < 1e-12);
    }
}
