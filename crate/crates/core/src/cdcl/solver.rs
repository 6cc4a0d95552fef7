use alloc::vec::Vec;
use core::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::heap::VarHeap;
use super::{check_model, luby, SolveResult, SolveStatus, SolverConfig, Stats};
use crate::dimacs::{Clause, Cnf, Lit, Var};
use crate::hash::Fnv64;

/// Index into the solver's clause arena. Original clauses keep the index
/// they had in the input [`Cnf`].
pub type ClauseRef = u32;

/// Activity above which all variable activities are rescaled.
const ACTIVITY_LIMIT: f64 = 1e100;
const CLAUSE_ACTIVITY_LIMIT: f64 = 1e20;
/// Upper bound for the seeded initial activity jitter.
const INITIAL_JITTER: f64 = 1e-5;
/// Smallest learned-clause cap, so tiny formulas do not reduce constantly.
const MIN_LEARNT_CAP: usize = 100;

/// Callback run by [`Solver::solve_with`] after each conflict has been
/// analyzed, learned and (possibly) followed by a restart.
pub trait SearchHook {
    fn after_conflict(&mut self, solver: &mut Solver);
}

impl SearchHook for () {
    fn after_conflict(&mut self, _: &mut Solver) {}
}

/// Returned by [`Solver::analyze_conflict`] when the conflict does not
/// depend on any decision, i.e. the formula is unsatisfiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("conflict at decision level 0")]
pub struct LevelZeroConflict;

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    activity: f64,
    learnt: bool,
    /// Deleted learned clauses and tautological inputs are never watched.
    dead: bool,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: ClauseRef,
    blocker: Lit,
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

/// CDCL solver state: trail, watch lists, heuristics, clause database and
/// statistics.
#[derive(Debug, Clone)]
pub struct Solver {
    config: SolverConfig,
    formula: Cnf,
    num_original: usize,
    clauses: Vec<ClauseData>,
    num_learnts: usize,
    /// Indexed by the literal that, when it becomes false, wakes the clause.
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    order: VarHeap,
    saved_phase: Vec<bool>,
    seen: Vec<bool>,
    conflicts_since_restart: u64,
    /// False once a level-0 conflict has been found.
    ok: bool,
    stats: Stats,
    rng: ChaCha8Rng,
}

impl Solver {
    /// Loads `cnf`. Tautologies are dropped, unit clauses are asserted at
    /// level 0 and propagated.
    pub fn new(cnf: &Cnf, config: SolverConfig) -> Solver {
        let n = cnf.num_vars();
        let mut rng = ChaCha8Rng::seed_from_u64(config.random_seed);
        let activity: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * INITIAL_JITTER).collect();
        let mut order = VarHeap::with_vars(n);
        for v in 0..n {
            order.insert(v, &activity);
        }
        let mut s = Solver {
            saved_phase: alloc::vec![config.initial_phase; n],
            config,
            formula: cnf.clone(),
            num_original: cnf.num_clauses(),
            clauses: Vec::with_capacity(cnf.num_clauses()),
            num_learnts: 0,
            watches: alloc::vec![Vec::new(); 2 * n],
            assigns: alloc::vec![UNDEF; n],
            level: alloc::vec![0; n],
            reason: alloc::vec![None; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            var_inc: 1.0,
            cla_inc: 1.0,
            order,
            seen: alloc::vec![false; n],
            conflicts_since_restart: 0,
            ok: true,
            stats: Stats::default(),
            rng,
        };
        for (i, clause) in cnf.clauses().iter().enumerate() {
            s.load_clause(i as ClauseRef, clause);
        }
        if s.ok && s.propagate().is_some() {
            s.ok = false;
        }
        s
    }

    fn load_clause(&mut self, cref: ClauseRef, clause: &Clause) {
        let lits = clause.lits().to_vec();
        let dead = clause.is_tautology();
        if !dead {
            match lits.len() {
                0 => self.ok = false,
                1 => match self.lit_value(lits[0]) {
                    UNDEF => self.enqueue(lits[0], None),
                    FALSE => self.ok = false,
                    _ => {}
                },
                _ => {
                    self.watches[(!lits[0]).code()].push(Watcher {
                        cref,
                        blocker: lits[1],
                    });
                    self.watches[(!lits[1]).code()].push(Watcher {
                        cref,
                        blocker: lits[0],
                    });
                }
            }
        }
        debug_assert_eq!(self.clauses.len(), cref as usize);
        self.clauses.push(ClauseData {
            lits,
            activity: 0.0,
            learnt: false,
            dead,
        });
    }

    // ----- accessors -------------------------------------------------------

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn formula(&self) -> &Cnf {
        &self.formula
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn num_original_clauses(&self) -> usize {
        self.num_original
    }

    pub fn num_learnts(&self) -> usize {
        self.num_learnts
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn stats_mut(&mut self) -> &mut Stats {
        &mut self.stats
    }

    pub fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        match self.assigns[var.index()] {
            TRUE => Some(true),
            FALSE => Some(false),
            _ => None,
        }
    }

    pub fn lit_truth(&self, lit: Lit) -> Option<bool> {
        self.value(lit.var()).map(|v| lit.eval(v))
    }

    /// The partial assignment, indexed by `Var::index`.
    pub fn assignment(&self) -> Vec<Option<bool>> {
        (0..self.num_vars())
            .map(|i| self.value(Var::from_index(i)))
            .collect()
    }

    pub fn level_of(&self, var: Var) -> u32 {
        self.level[var.index()]
    }

    pub fn reason_of(&self, var: Var) -> Option<ClauseRef> {
        self.reason[var.index()]
    }

    pub fn clause_lits(&self, cref: ClauseRef) -> &[Lit] {
        &self.clauses[cref as usize].lits
    }

    pub fn clause_activity(&self, cref: ClauseRef) -> f64 {
        self.clauses[cref as usize].activity
    }

    pub fn is_learnt(&self, cref: ClauseRef) -> bool {
        self.clauses[cref as usize].learnt
    }

    pub fn activity(&self, var: Var) -> f64 {
        self.activity[var.index()]
    }

    pub fn activities(&self) -> &[f64] {
        &self.activity
    }

    /// Current VSIDS bump increment.
    pub fn var_inc(&self) -> f64 {
        self.var_inc
    }

    pub fn saved_phase(&self, var: Var) -> bool {
        self.saved_phase[var.index()]
    }

    pub fn set_saved_phase(&mut self, var: Var, phase: bool) {
        self.saved_phase[var.index()] = phase;
    }

    /// Overwrites one activity and restores the order heap.
    pub fn set_activity(&mut self, var: Var, value: f64) {
        assert!(value >= 0.0 && value.is_finite());
        self.activity[var.index()] = value;
        self.order.rebuild(&self.activity);
        if value > ACTIVITY_LIMIT {
            self.rescale_activities();
        }
    }

    /// Multiplies every variable activity (and the bump increment) by
    /// `factor`.
    pub fn scale_activities(&mut self, factor: f64) {
        assert!(factor > 0.0 && factor.is_finite());
        for a in &mut self.activity {
            *a *= factor;
        }
        self.var_inc *= factor;
    }

    /// Adds `amount` to `var`'s activity.
    pub fn bump_activity_by(&mut self, var: Var, amount: f64) {
        let v = var.index();
        self.activity[v] += amount;
        if self.activity[v] > ACTIVITY_LIMIT {
            self.rescale_activities();
        }
        self.order.increased(v, &self.activity);
    }

    /// Live learned clauses, newest first, at most `limit`.
    pub fn recent_learnts(&self, limit: usize) -> Vec<ClauseRef> {
        (self.num_original..self.clauses.len())
            .rev()
            .filter(|&i| !self.clauses[i].dead)
            .take(limit)
            .map(|i| i as ClauseRef)
            .collect()
    }

    /// Fingerprint of every live clause (original and learned) and its
    /// literal set, in arena order. Watch reordering inside a clause does
    /// not change it.
    pub fn clause_db_hash(&self) -> u64 {
        let mut h = Fnv64::default();
        let mut lits = Vec::new();
        for (i, c) in self.clauses.iter().enumerate() {
            if c.dead {
                continue;
            }
            i.hash(&mut h);
            c.learnt.hash(&mut h);
            lits.clear();
            lits.extend_from_slice(&c.lits);
            lits.sort_unstable();
            lits.hash(&mut h);
        }
        h.finish()
    }

    /// A clause with every literal false under the trail, if any. Linear
    /// scan, for assertions in tests.
    pub fn find_falsified_clause(&self) -> Option<ClauseRef> {
        self.clauses
            .iter()
            .position(|c| !c.dead && c.lits.iter().all(|&l| self.lit_value(l) == FALSE))
            .map(|i| i as ClauseRef)
    }

    // ----- assignment ------------------------------------------------------

    #[inline]
    fn lit_value(&self, lit: Lit) -> i8 {
        let v = self.assigns[lit.var().index()];
        if lit.sign() {
            v
        } else {
            -v
        }
    }

    fn enqueue(&mut self, lit: Lit, reason: Option<ClauseRef>) {
        let v = lit.var().index();
        debug_assert_eq!(self.assigns[v], UNDEF);
        self.assigns[v] = if lit.sign() { TRUE } else { FALSE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    /// Opens a new decision level and assigns `lit`.
    pub fn decide(&mut self, lit: Lit) {
        assert_eq!(self.lit_value(lit), UNDEF, "decision on an assigned variable");
        self.trail_lim.push(self.trail.len());
        self.enqueue(lit, None);
    }

    /// Undoes every assignment above `level`, saving phases.
    pub fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().index();
            self.saved_phase[v] = lit.sign();
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.order.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    /// Unit propagation to fixpoint. Returns the first falsified clause.
    pub fn propagate(&mut self) -> Option<ClauseRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = core::mem::take(&mut self.watches[p.code()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.lit_value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].dead {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                let kept = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && self.lit_value(first) == TRUE {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let cand = self.clauses[cref].lits[k];
                    if self.lit_value(cand) != FALSE {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[(!cand).code()].push(kept);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = kept;
                j += 1;
                if self.lit_value(first) == FALSE {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                    self.stats.propagations += 1;
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    // ----- conflict analysis ----------------------------------------------

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > ACTIVITY_LIMIT {
            self.rescale_activities();
        }
        self.order.increased(v, &self.activity);
    }

    fn rescale_activities(&mut self) {
        for a in &mut self.activity {
            *a *= 1e-100;
        }
        self.var_inc *= 1e-100;
    }

    fn bump_clause(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > CLAUSE_ACTIVITY_LIMIT {
            for c in &mut self.clauses {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis of a falsified clause.
    ///
    /// Returns the learned clause, with the asserting literal first and a
    /// literal of the backjump level second, and the backjump level. Bumps
    /// the activities of the variables and clauses involved.
    pub fn analyze_conflict(
        &mut self,
        conflict: ClauseRef,
    ) -> Result<(Clause, u32), LevelZeroConflict> {
        let current = self.decision_level();
        if current == 0 {
            return Err(LevelZeroConflict);
        }
        let mut learnt: Vec<Lit> = alloc::vec![Lit::from_code(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut cref = conflict;
        let mut index = self.trail.len();

        loop {
            self.bump_clause(cref);
            let skip = usize::from(p.is_some());
            for k in skip..self.clauses[cref as usize].lits.len() {
                let q = self.clauses[cref as usize].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            self.seen[lit.var().index()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            cref = self.reason[lit.var().index()].expect("implied literal without a reason");
        }
        learnt[0] = !p.unwrap();

        // basic minimization: drop literals whose reason is covered by the
        // clause
        let marked: Vec<Lit> = learnt[1..].to_vec();
        let mut kept = 1;
        for k in 1..learnt.len() {
            let v = learnt[k].var().index();
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..].iter().all(|l| {
                    let u = l.var().index();
                    self.seen[u] || self.level[u] == 0
                }),
            };
            if !redundant {
                learnt[kept] = learnt[k];
                kept += 1;
            }
        }
        for l in marked {
            self.seen[l.var().index()] = false;
        }
        learnt.truncate(kept);

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var().index()] > self.level[learnt[best].var().index()] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            self.level[learnt[1].var().index()]
        };
        debug_assert!(self.seen.iter().all(|s| !s));
        Ok((Clause::new(learnt), backjump))
    }

    /// Backjumps to `level`, stores `learnt` (unless unit) and asserts its
    /// first literal.
    pub fn learn_and_backjump(&mut self, learnt: Clause, level: u32) {
        self.cancel_until(level);
        let lits = learnt.lits().to_vec();
        if lits.len() == 1 {
            self.enqueue(lits[0], None);
            return;
        }
        let cref = self.clauses.len() as ClauseRef;
        self.watches[(!lits[0]).code()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[(!lits[1]).code()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        let first = lits[0];
        self.clauses.push(ClauseData {
            lits,
            activity: 0.0,
            learnt: true,
            dead: false,
        });
        self.num_learnts += 1;
        self.bump_clause(cref);
        self.enqueue(first, Some(cref));
    }

    fn decay_activities(&mut self) {
        self.var_inc /= self.config.var_decay;
        self.cla_inc /= self.config.clause_activity_decay;
    }

    // ----- branching -------------------------------------------------------

    /// The unassigned variable of highest activity (lowest index on ties),
    /// signed by its saved phase. `None` once every variable is assigned.
    pub fn pick_branch_literal(&mut self) -> Option<Lit> {
        while let Some(v) = self.order.top() {
            if self.assigns[v] == UNDEF {
                return Some(Lit::new(Var::from_index(v), self.saved_phase[v]));
            }
            self.order.pop(&self.activity);
        }
        None
    }

    // ----- clause database -------------------------------------------------

    fn learnt_cap(&self) -> usize {
        (self.config.learnt_cap_factor * self.num_original).max(MIN_LEARNT_CAP)
    }

    fn is_locked(&self, cref: usize) -> bool {
        let first = self.clauses[cref].lits[0];
        self.lit_value(first) == TRUE && self.reason[first.var().index()] == Some(cref as ClauseRef)
    }

    /// Deletes the lower-activity half of the learned clauses, keeping
    /// binary clauses and current reasons.
    fn reduce_db(&mut self) {
        let mut candidates: Vec<usize> = (self.num_original..self.clauses.len())
            .filter(|&i| {
                let c = &self.clauses[i];
                !c.dead && c.lits.len() > 2 && !self.is_locked(i)
            })
            .collect();
        candidates.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .total_cmp(&self.clauses[b].activity)
                .then(a.cmp(&b))
        });
        let remove = self.num_learnts / 2;
        for &i in candidates.iter().take(remove) {
            let c = &mut self.clauses[i];
            c.dead = true;
            c.lits = Vec::new();
            self.num_learnts -= 1;
        }
        self.rebuild_watches();
    }

    fn rebuild_watches(&mut self) {
        for w in &mut self.watches {
            w.clear();
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if c.dead || c.lits.len() < 2 {
                continue;
            }
            self.watches[(!c.lits[0]).code()].push(Watcher {
                cref: i as ClauseRef,
                blocker: c.lits[1],
            });
            self.watches[(!c.lits[1]).code()].push(Watcher {
                cref: i as ClauseRef,
                blocker: c.lits[0],
            });
        }
    }

    // ----- search ----------------------------------------------------------

    fn restart_due(&self) -> bool {
        self.conflicts_since_restart >= self.config.restart_base * luby(self.stats.restarts + 1)
    }

    fn model(&self) -> Vec<bool> {
        self.assigns.iter().map(|&a| a == TRUE).collect()
    }

    fn finish(&mut self, status: SolveStatus) -> SolveResult {
        let model = (status == SolveStatus::Sat).then(|| self.model());
        if let Some(m) = &model {
            assert_eq!(
                check_model(&self.formula, m),
                Ok(true),
                "solver produced a model that violates the input formula"
            );
        }
        SolveResult {
            status,
            model,
            stats: self.stats.clone(),
        }
    }

    /// Runs the plain CDCL search.
    pub fn solve(&mut self) -> SolveResult {
        self.solve_with(&mut ())
    }

    /// Runs the CDCL search, calling `hook` after each conflict.
    pub fn solve_with<H: SearchHook + ?Sized>(&mut self, hook: &mut H) -> SolveResult {
        if !self.ok {
            return self.finish(SolveStatus::Unsat);
        }
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                self.conflicts_since_restart += 1;
                let (learnt, level) = match self.analyze_conflict(conflict) {
                    Ok(x) => x,
                    Err(LevelZeroConflict) => {
                        self.ok = false;
                        return self.finish(SolveStatus::Unsat);
                    }
                };
                self.learn_and_backjump(learnt, level);
                self.decay_activities();
                if self.restart_due() {
                    self.cancel_until(0);
                    self.stats.restarts += 1;
                    self.conflicts_since_restart = 0;
                }
                hook.after_conflict(self);
                if let Some(budget) = self.config.conflict_budget {
                    if self.stats.conflicts >= budget {
                        self.cancel_until(0);
                        return self.finish(SolveStatus::Unknown);
                    }
                }
            } else {
                if self.num_learnts > self.learnt_cap() {
                    self.reduce_db();
                }
                match self.pick_branch_literal() {
                    None => return self.finish(SolveStatus::Sat),
                    Some(lit) => {
                        self.stats.decisions += 1;
                        self.decide(lit);
                    }
                }
            }
        }
    }

    /// Random source owned by this solver, for callers that need
    /// randomness tied to the solver seed.
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
