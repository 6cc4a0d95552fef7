//! Conflict-local subformula extraction.
//!
//! Around a call point the solver's partial assignment is frozen into a
//! [`TrailSnapshot`]. A strategy then picks clauses from the input formula,
//! each clause is simplified under the trail (satisfied clauses dropped,
//! false literals removed) and clauses are packed until the budget
//! `n_sub + m_sub <= B` is reached. Surviving variables are remapped to a
//! dense range `1..=n_sub`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cdcl::{ClauseRef, Solver};
use crate::dimacs::{Clause, Cnf, Lit, Var};

/// How candidate clauses are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Strategy {
    /// Breadth-first expansion from a high-activity seed clause over the
    /// clause-variable incidence graph.
    ActivityBfs,
    /// Clauses in descending clause-activity order.
    ActivityGreedy,
    /// Uniform sample without replacement from the unsatisfied clauses.
    RandomSample,
    /// Clauses around the highest-activity unassigned variables.
    VariableFrontier,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::ActivityBfs,
        Strategy::ActivityGreedy,
        Strategy::RandomSample,
        Strategy::VariableFrontier,
    ];

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Strategy::ActivityBfs => "abfs",
            Strategy::ActivityGreedy => "ag",
            Strategy::RandomSample => "rand",
            Strategy::VariableFrontier => "vf",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown extraction strategy `{0}` (expected abfs, ag, rand or vf)")]
pub struct UnknownStrategy(pub alloc::string::String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| UnknownStrategy(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtractionConfig {
    /// Cap on `n_sub + m_sub`.
    pub budget: usize,
    pub strategy: Strategy,
    /// How many recent learned clauses are considered as BFS seeds (also the
    /// number of frontier variables for `vf`).
    pub max_seed_candidates: usize,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            budget: 20,
            strategy: Strategy::ActivityBfs,
            max_seed_candidates: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractionConfigError {
    #[error("budget {0} is below the minimum of 3")]
    BudgetTooSmall(usize),
    #[error("max_seed_candidates must be positive")]
    NoSeedCandidates,
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<(), ExtractionConfigError> {
        if self.budget < 3 {
            return Err(ExtractionConfigError::BudgetTooSmall(self.budget));
        }
        if self.max_seed_candidates == 0 {
            return Err(ExtractionConfigError::NoSeedCandidates);
        }
        Ok(())
    }
}

/// Clause a BFS extraction started from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeedClause {
    /// Index into the input formula.
    Original(ClauseRef),
    /// Learned clause, by solver clause reference.
    Learnt(ClauseRef),
}

/// An extracted, simplified and densely remapped subformula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubFormula {
    /// Formula over dense variables `1..=n_sub`.
    pub cnf: Cnf,
    /// `var_map[i]` is the global variable behind dense variable `i + 1`.
    pub var_map: Vec<Var>,
    pub seed_clause: SeedClause,
}

impl SubFormula {
    /// Builds a subformula from global clauses that are already simplified,
    /// mapping variables in ascending global order.
    pub fn from_global_clauses(clauses: &[Clause], seed_clause: SeedClause) -> SubFormula {
        let vars: BTreeSet<Var> = clauses
            .iter()
            .flat_map(|c| c.lits().iter().map(|l| l.var()))
            .collect();
        let var_map: Vec<Var> = vars.into_iter().collect();
        let dense = |v: Var| Var::from_index(var_map.binary_search(&v).expect("mapped variable"));
        let dense_clauses = clauses
            .iter()
            .map(|c| Clause::new(c.lits().iter().map(|l| Lit::new(dense(l.var()), l.sign()))))
            .collect();
        let cnf = Cnf::new(var_map.len(), dense_clauses).expect("dense variables in range");
        SubFormula {
            cnf,
            var_map,
            seed_clause,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.cnf.num_vars()
    }

    pub fn num_clauses(&self) -> usize {
        self.cnf.num_clauses()
    }

    /// `n_sub + m_sub`.
    pub fn size(&self) -> usize {
        self.num_vars() + self.num_clauses()
    }

    /// The clauses translated back to global variables.
    pub fn global_clauses(&self) -> Vec<Clause> {
        self.cnf
            .clauses()
            .iter()
            .map(|c| {
                Clause::new(
                    c.lits()
                        .iter()
                        .map(|l| Lit::new(self.var_map[l.var().index()], l.sign())),
                )
            })
            .collect()
    }

    /// How many clauses of the subformula mention each dense variable.
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.num_vars()];
        for c in self.cnf.clauses() {
            for l in c.lits() {
                counts[l.var().index()] += 1;
            }
        }
        counts
    }
}

/// Per-variable lists of the input clauses that mention it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrences(Vec<Vec<ClauseRef>>);

impl Occurrences {
    pub fn build(cnf: &Cnf) -> Occurrences {
        let mut occ = alloc::vec![Vec::new(); cnf.num_vars()];
        for (i, c) in cnf.clauses().iter().enumerate() {
            for l in c.lits() {
                let list: &mut Vec<ClauseRef> = &mut occ[l.var().index()];
                if list.last() != Some(&(i as ClauseRef)) {
                    list.push(i as ClauseRef);
                }
            }
        }
        Occurrences(occ)
    }

    pub fn of(&self, var: Var) -> &[ClauseRef] {
        &self.0[var.index()]
    }
}

/// Heuristic and assignment state frozen at a call point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrailSnapshot {
    /// Indexed by `Var::index`.
    pub assignment: Vec<Option<bool>>,
    pub var_activity: Vec<f64>,
    /// Activities of the input clauses, by index.
    pub clause_activity: Vec<f64>,
    /// Recent learned clauses, newest first, with their activities.
    pub learnts: Vec<(ClauseRef, Clause, f64)>,
}

impl TrailSnapshot {
    pub fn capture(solver: &Solver, max_learnts: usize) -> TrailSnapshot {
        let learnts = solver
            .recent_learnts(max_learnts)
            .into_iter()
            .map(|cref| {
                (
                    cref,
                    Clause::new(solver.clause_lits(cref).iter().copied()),
                    solver.clause_activity(cref),
                )
            })
            .collect();
        TrailSnapshot {
            assignment: solver.assignment(),
            var_activity: solver.activities().to_vec(),
            clause_activity: (0..solver.num_original_clauses())
                .map(|i| solver.clause_activity(i as ClauseRef))
                .collect(),
            learnts,
        }
    }

    /// A snapshot with uniform activities and no learned clauses.
    pub fn from_assignment(assignment: Vec<Option<bool>>, num_clauses: usize) -> TrailSnapshot {
        TrailSnapshot {
            var_activity: alloc::vec![0.0; assignment.len()],
            assignment,
            clause_activity: alloc::vec![0.0; num_clauses],
            learnts: Vec::new(),
        }
    }

    fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.assignment[lit.var().index()].map(|v| lit.eval(v))
    }

    fn is_satisfied(&self, clause: &Clause) -> bool {
        clause.is_tautology() || clause.lits().iter().any(|&l| self.lit_value(l) == Some(true))
    }
}

/// A simplified clause came out empty: the trail falsifies it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("clause {0} is falsified by the trail")]
pub struct FalsifiedClause(pub usize);

fn simplify_clause(clause: &Clause, assignment: &[Option<bool>]) -> Option<Clause> {
    let mut out = Vec::with_capacity(clause.len());
    for &l in clause.lits() {
        match assignment[l.var().index()].map(|v| l.eval(v)) {
            Some(true) => return None,
            Some(false) => {}
            None => out.push(l),
        }
    }
    Some(Clause::new(out))
}

/// Drops clauses satisfied by `assignment` and removes false literals from
/// the rest. Tautologies count as satisfied.
pub fn simplify_under_trail(
    clauses: &[Clause],
    assignment: &[Option<bool>],
) -> Result<Vec<Clause>, FalsifiedClause> {
    let mut out = Vec::new();
    for (i, c) in clauses.iter().enumerate() {
        if c.is_tautology() {
            continue;
        }
        if let Some(s) = simplify_clause(c, assignment) {
            if s.is_empty() {
                return Err(FalsifiedClause(i));
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// Why an extraction produced nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// Every candidate clause is satisfied by the trail.
    NothingToExtract,
    /// A candidate clause is falsified, so the trail is not a conflict-free
    /// fixpoint.
    Falsified,
    /// Fewer than two variables, no clauses, or only unit clauses survive.
    Trivial,
    /// No candidate fits inside the budget.
    OverBudget,
}

/// Accumulates simplified clauses while tracking `n_sub + m_sub`.
struct Packer<'a> {
    budget: usize,
    assignment: &'a [Option<bool>],
    vars: BTreeSet<Var>,
    clauses: Vec<Clause>,
    seen_any: bool,
}

enum Offer {
    Added,
    Satisfied,
    Overflow,
}

impl<'a> Packer<'a> {
    fn new(budget: usize, assignment: &'a [Option<bool>]) -> Self {
        Packer {
            budget,
            assignment,
            vars: BTreeSet::new(),
            clauses: Vec::new(),
            seen_any: false,
        }
    }

    fn size(&self) -> usize {
        self.vars.len() + self.clauses.len()
    }

    fn is_full(&self) -> bool {
        self.size() >= self.budget
    }

    fn cost(&self, clause: &Clause) -> usize {
        1 + clause
            .lits()
            .iter()
            .filter(|l| !self.vars.contains(&l.var()))
            .count()
    }

    /// Simplifies `clause`; adds it unless satisfied. With `allow_overflow`
    /// the clause is added even past the budget (for later trimming),
    /// otherwise a clause that does not fit is rejected.
    fn offer(&mut self, clause: &Clause, allow_overflow: bool) -> Result<Offer, SkipReason> {
        if clause.is_tautology() {
            return Ok(Offer::Satisfied);
        }
        let Some(s) = simplify_clause(clause, self.assignment) else {
            return Ok(Offer::Satisfied);
        };
        if s.is_empty() {
            return Err(SkipReason::Falsified);
        }
        self.seen_any = true;
        if self.clauses.contains(&s) {
            return Ok(Offer::Added);
        }
        let fits = self.size() + self.cost(&s) <= self.budget;
        if !fits && !allow_overflow {
            return Ok(Offer::Overflow);
        }
        self.vars.extend(s.lits().iter().map(|l| l.var()));
        self.clauses.push(s);
        Ok(if fits { Offer::Added } else { Offer::Overflow })
    }

    /// Drops the most recently added clauses until the budget holds.
    fn trim(&mut self) {
        while self.size() > self.budget {
            self.clauses.pop();
            self.vars = self
                .clauses
                .iter()
                .flat_map(|c| c.lits().iter().map(|l| l.var()))
                .collect();
        }
    }

    fn finish(self, seed: SeedClause) -> Result<SubFormula, SkipReason> {
        if self.clauses.is_empty() {
            return Err(if self.seen_any {
                SkipReason::OverBudget
            } else {
                SkipReason::NothingToExtract
            });
        }
        if self.vars.len() < 2 || self.clauses.iter().all(|c| c.len() == 1) {
            return Err(SkipReason::Trivial);
        }
        Ok(SubFormula::from_global_clauses(&self.clauses, seed))
    }
}

/// Picks the BFS seed: the unsatisfied recent learned clause of highest
/// activity, else the lowest-index unsatisfied input clause containing the
/// highest-activity unassigned variable, else any unsatisfied input clause.
pub fn select_seed(cnf: &Cnf, occ: &Occurrences, snap: &TrailSnapshot) -> Option<SeedClause> {
    let mut best: Option<(ClauseRef, f64)> = None;
    for (cref, clause, act) in &snap.learnts {
        if snap.is_satisfied(clause) {
            continue;
        }
        if best.is_none_or(|(_, a)| *act > a) {
            best = Some((*cref, *act));
        }
    }
    if let Some((cref, _)) = best {
        return Some(SeedClause::Learnt(cref));
    }
    let mut top: Option<(usize, f64)> = None;
    for (v, a) in snap.assignment.iter().zip(&snap.var_activity).enumerate() {
        if a.0.is_none() && top.is_none_or(|(_, b)| *a.1 > b) {
            top = Some((v, *a.1));
        }
    }
    if let Some((v, _)) = top {
        for &i in occ.of(Var::from_index(v)) {
            if !snap.is_satisfied(&cnf.clauses()[i as usize]) {
                return Some(SeedClause::Original(i));
            }
        }
    }
    cnf.clauses()
        .iter()
        .position(|c| !snap.is_satisfied(c))
        .map(|i| SeedClause::Original(i as ClauseRef))
}

fn seed_clause<'a>(cnf: &'a Cnf, snap: &'a TrailSnapshot, seed: SeedClause) -> &'a Clause {
    match seed {
        SeedClause::Original(i) => &cnf.clauses()[i as usize],
        SeedClause::Learnt(cref) => {
            &snap
                .learnts
                .iter()
                .find(|(c, _, _)| *c == cref)
                .expect("seed learnt clause is in the snapshot")
                .1
        }
    }
}

/// BFS over the incidence graph of `cnf` starting from `seed`. Each level is
/// visited in ascending clause index. Expansion stops at the first clause
/// that overflows the budget; the overflow is then trimmed.
pub fn extract_bfs(
    cnf: &Cnf,
    occ: &Occurrences,
    snap: &TrailSnapshot,
    seed: SeedClause,
    budget: usize,
) -> Result<SubFormula, SkipReason> {
    let mut packer = Packer::new(budget, &snap.assignment);
    let mut visited = alloc::vec![false; cnf.num_clauses()];
    if let SeedClause::Original(i) = seed {
        visited[i as usize] = true;
    }
    let mut level: Vec<&Clause> = alloc::vec![seed_clause(cnf, snap, seed)];
    'expand: while !level.is_empty() {
        for clause in &level {
            if let Offer::Overflow = packer.offer(clause, true)? {
                break 'expand;
            }
        }
        let mut next = BTreeSet::new();
        for clause in &level {
            for l in clause.lits() {
                for &j in occ.of(l.var()) {
                    if !visited[j as usize] {
                        next.insert(j);
                    }
                }
            }
        }
        for &j in &next {
            visited[j as usize] = true;
        }
        level = next.iter().map(|&j| &cnf.clauses()[j as usize]).collect();
    }
    packer.trim();
    packer.finish(seed)
}

fn pack_in_order(
    cnf: &Cnf,
    snap: &TrailSnapshot,
    order: impl IntoIterator<Item = ClauseRef>,
    budget: usize,
) -> Result<SubFormula, SkipReason> {
    let mut packer = Packer::new(budget, &snap.assignment);
    let mut first = None;
    for i in order {
        if packer.is_full() {
            break;
        }
        if let Offer::Added = packer.offer(&cnf.clauses()[i as usize], false)? {
            first.get_or_insert(i);
        }
    }
    packer.finish(SeedClause::Original(first.unwrap_or(0)))
}

fn unsatisfied(cnf: &Cnf, snap: &TrailSnapshot) -> Vec<ClauseRef> {
    (0..cnf.num_clauses() as ClauseRef)
        .filter(|&i| !snap.is_satisfied(&cnf.clauses()[i as usize]))
        .collect()
}

fn by_activity_desc(snap: &TrailSnapshot, clauses: &mut [ClauseRef]) {
    clauses.sort_by(|&a, &b| {
        snap.clause_activity[b as usize]
            .total_cmp(&snap.clause_activity[a as usize])
            .then(a.cmp(&b))
    });
}

/// Runs the configured strategy, reporting why nothing was extracted.
pub fn try_extract<R: Rng + ?Sized>(
    cnf: &Cnf,
    occ: &Occurrences,
    snap: &TrailSnapshot,
    config: &ExtractionConfig,
    rng: &mut R,
) -> Result<SubFormula, SkipReason> {
    let budget = config.budget;
    match config.strategy {
        Strategy::ActivityBfs => {
            let seed = select_seed(cnf, occ, snap).ok_or(SkipReason::NothingToExtract)?;
            extract_bfs(cnf, occ, snap, seed, budget)
        }
        Strategy::ActivityGreedy => {
            let mut order = unsatisfied(cnf, snap);
            by_activity_desc(snap, &mut order);
            pack_in_order(cnf, snap, order, budget)
        }
        Strategy::RandomSample => {
            let mut order = unsatisfied(cnf, snap);
            order.shuffle(rng);
            pack_in_order(cnf, snap, order, budget)
        }
        Strategy::VariableFrontier => {
            let mut vars: Vec<usize> = (0..snap.assignment.len())
                .filter(|&v| snap.assignment[v].is_none())
                .collect();
            vars.sort_by(|&a, &b| {
                snap.var_activity[b]
                    .total_cmp(&snap.var_activity[a])
                    .then(a.cmp(&b))
            });
            vars.truncate(config.max_seed_candidates);
            let mut order = Vec::new();
            let mut taken = BTreeSet::new();
            for v in vars {
                let mut touching: Vec<ClauseRef> = occ
                    .of(Var::from_index(v))
                    .iter()
                    .copied()
                    .filter(|&i| !taken.contains(&i) && !snap.is_satisfied(&cnf.clauses()[i as usize]))
                    .collect();
                by_activity_desc(snap, &mut touching);
                taken.extend(touching.iter().copied());
                order.extend(touching);
            }
            pack_in_order(cnf, snap, order, budget)
        }
    }
}

/// Extracts a subformula, or `None` when the call should be skipped.
pub fn extract_subformula<R: Rng + ?Sized>(
    cnf: &Cnf,
    occ: &Occurrences,
    snap: &TrailSnapshot,
    config: &ExtractionConfig,
    rng: &mut R,
) -> Option<SubFormula> {
    try_extract(cnf, occ, snap, config, rng).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn clauses(cs: &[&[i64]]) -> Vec<Clause> {
        cs.iter().map(|c| Clause::from_dimacs(c)).collect()
    }

    fn alpha(n: usize, fixed: &[(usize, bool)]) -> Vec<Option<bool>> {
        let mut a = vec![None; n];
        for &(v, b) in fixed {
            a[v - 1] = Some(b);
        }
        a
    }

    #[test]
    fn simplify_reduces_clause_by_clause() {
        let cs = clauses(&[&[1, 3], &[-1, 2], &[-2, 4], &[4, -5]]);
        let a = alpha(5, &[(1, true), (4, false)]);
        let got = simplify_under_trail(&cs, &a).unwrap();
        // (x1 v x3) is satisfied by x1 = 1
        assert_eq!(got, clauses(&[&[2], &[-2], &[-5]]));
    }

    #[test]
    fn simplify_identity_on_empty_trail() {
        let cs = clauses(&[&[1, 3], &[-1, 2]]);
        assert_eq!(simplify_under_trail(&cs, &alpha(3, &[])).unwrap(), cs);
    }

    #[test]
    fn simplify_reports_falsified_clause() {
        let cs = clauses(&[&[1, 2], &[-1]]);
        assert_eq!(
            simplify_under_trail(&cs, &alpha(2, &[(1, true)])),
            Err(FalsifiedClause(1))
        );
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("bfs".parse::<Strategy>().is_err());
    }

    #[test]
    fn everything_satisfied_extracts_nothing() {
        let cnf = Cnf::new(2, clauses(&[&[1, 2], &[1, -2]])).unwrap();
        let occ = Occurrences::build(&cnf);
        let snap = TrailSnapshot::from_assignment(alpha(2, &[(1, true)]), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for strategy in Strategy::ALL {
            let cfg = ExtractionConfig {
                strategy,
                ..Default::default()
            };
            assert_eq!(
                try_extract(&cnf, &occ, &snap, &cfg, &mut rng),
                Err(SkipReason::NothingToExtract)
            );
        }
    }

    #[test]
    fn budget_three_takes_a_single_binary_clause() {
        let cnf = Cnf::new(5, clauses(&[&[1, 2, 3], &[4, -5], &[3, 4, 5]])).unwrap();
        let occ = Occurrences::build(&cnf);
        let snap = TrailSnapshot::from_assignment(alpha(5, &[]), 3);
        let cfg = ExtractionConfig {
            budget: 3,
            strategy: Strategy::ActivityGreedy,
            ..Default::default()
        };
        let sub = try_extract(&cnf, &occ, &snap, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(sub.global_clauses(), clauses(&[&[4, -5]]));
        assert_eq!(sub.size(), 3);
        assert_eq!(sub.var_map, vec![Var::new(4), Var::new(5)]);
    }

    #[test]
    fn trivial_subformulas_are_skipped() {
        let cnf = Cnf::new(3, clauses(&[&[1, 2], &[1, 3]])).unwrap();
        let occ = Occurrences::build(&cnf);
        // both reduce to units
        let snap = TrailSnapshot::from_assignment(alpha(3, &[(1, false)]), 2);
        let cfg = ExtractionConfig::default();
        assert_eq!(
            try_extract(&cnf, &occ, &snap, &cfg, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(SkipReason::Trivial)
        );
    }

    #[test]
    fn oversized_seed_is_over_budget() {
        let cnf = Cnf::new(4, clauses(&[&[1, 2, 3, 4]])).unwrap();
        let occ = Occurrences::build(&cnf);
        let snap = TrailSnapshot::from_assignment(alpha(4, &[]), 1);
        let cfg = ExtractionConfig {
            budget: 4,
            ..Default::default()
        };
        assert_eq!(
            try_extract(&cnf, &occ, &snap, &cfg, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(SkipReason::OverBudget)
        );
    }

    /// Seven-clause graph with a high-activity seed (x2' v x4) and the
    /// trail {x1 = 1, x4 = 0}.
    fn worked_example() -> (Cnf, TrailSnapshot) {
        let cnf = Cnf::new(
            6,
            clauses(&[&[-1, 3], &[1, 2], &[-2, 4], &[1, -4], &[-3, -5], &[-5, 6], &[2, -6]]),
        )
        .unwrap();
        let snap = TrailSnapshot::from_assignment(alpha(6, &[(1, true), (4, false)]), 7);
        (cnf, snap)
    }

    #[test]
    fn bfs_worked_example() {
        let (cnf, snap) = worked_example();
        let occ = Occurrences::build(&cnf);
        let sub = extract_bfs(&cnf, &occ, &snap, SeedClause::Original(2), 8).unwrap();
        assert_eq!(
            sub.global_clauses(),
            clauses(&[&[-2], &[2, -6], &[3], &[-5, 6]])
        );
        assert_eq!(
            sub.var_map,
            vec![Var::new(2), Var::new(3), Var::new(5), Var::new(6)]
        );
        assert_eq!(sub.size(), 8);
        // one more unit of budget admits the next level
        let wider = extract_bfs(&cnf, &occ, &snap, SeedClause::Original(2), 9).unwrap();
        assert_eq!(wider.num_clauses(), 5);
    }

    #[test]
    fn seed_prefers_unsatisfied_learnt_of_max_activity() {
        let cnf = Cnf::new(3, clauses(&[&[1, 2], &[2, 3]])).unwrap();
        let occ = Occurrences::build(&cnf);
        let mut snap = TrailSnapshot::from_assignment(alpha(3, &[(1, true)]), 2);
        snap.learnts = vec![
            (7, Clause::from_dimacs(&[1, 3]), 9.0),
            (6, Clause::from_dimacs(&[-1, 3]), 2.0),
            (5, Clause::from_dimacs(&[2, -3]), 4.0),
        ];
        assert_eq!(select_seed(&cnf, &occ, &snap), Some(SeedClause::Learnt(5)));
        snap.learnts.clear();
        snap.var_activity = vec![0.0, 1.0, 3.0];
        assert_eq!(select_seed(&cnf, &occ, &snap), Some(SeedClause::Original(1)));
    }
}
