//! Gate-level CNF oracle: one ancilla per clause, one formula flag.
//!
//! Wires `0..n` hold the variables, `n..n+m` the clause ancillas and `n+m`
//! the flag. For each clause, `X` gates on the wires of its positive
//! literals turn "literal false" into "wire is 1", so a multi-controlled `X`
//! onto the ancilla fires exactly when the clause is violated. The flag is
//! the AND of the negated ancillas. After the phase flip on the flag the
//! flag and clause gadgets are applied again in reverse order, returning
//! every ancilla to zero.

use alloc::vec::Vec;

use super::{GroverError, DEFAULT_GADGET_WIDTH_LIMIT};
use crate::dimacs::Cnf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub wire: usize,
    /// `true`: fires when the wire is 1; `false`: fires when it is 0.
    pub active_high: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Hadamard(usize),
    Not(usize),
    /// Flips `target` when every control is active. No controls means an
    /// unconditional flip.
    MultiControlledNot { controls: Vec<Control>, target: usize },
    /// Multiplies the amplitude by -1 when `control` is 1.
    ControlledPhaseFlip(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitDescription {
    pub num_vars: usize,
    pub num_clauses: usize,
    /// Hadamards on the variable register followed by the oracle.
    pub gates: Vec<Gate>,
}

impl CircuitDescription {
    /// `n + m + 1`.
    pub fn width(&self) -> usize {
        self.num_vars + self.num_clauses + 1
    }

    pub fn ancilla(&self, clause: usize) -> usize {
        self.num_vars + clause
    }

    pub fn flag(&self) -> usize {
        self.num_vars + self.num_clauses
    }

    /// The oracle part, without the initial Hadamard layer.
    pub fn oracle_gates(&self) -> &[Gate] {
        let prep = self
            .gates
            .iter()
            .take_while(|g| matches!(g, Gate::Hadamard(_)))
            .count();
        &self.gates[prep..]
    }
}

fn clause_gadget(cnf: &Cnf, j: usize, ancilla: usize, out: &mut Vec<Gate>) {
    let clause = &cnf.clauses()[j];
    if clause.is_tautology() {
        // never violated: the ancilla stays 0
        return;
    }
    let positive: Vec<usize> = clause
        .lits()
        .iter()
        .filter(|l| l.sign())
        .map(|l| l.var().index())
        .collect();
    out.extend(positive.iter().map(|&w| Gate::Not(w)));
    out.push(Gate::MultiControlledNot {
        controls: clause
            .lits()
            .iter()
            .map(|l| Control {
                wire: l.var().index(),
                active_high: true,
            })
            .collect(),
        target: ancilla,
    });
    out.extend(positive.iter().map(|&w| Gate::Not(w)));
}

/// Builds the compute/phase/uncompute oracle for `cnf` with the default
/// width limit.
pub fn build_gadget_circuit(cnf: &Cnf) -> Result<CircuitDescription, GroverError> {
    build_gadget_circuit_with_limit(cnf, DEFAULT_GADGET_WIDTH_LIMIT)
}

pub fn build_gadget_circuit_with_limit(
    cnf: &Cnf,
    width_limit: usize,
) -> Result<CircuitDescription, GroverError> {
    let (n, m) = (cnf.num_vars(), cnf.num_clauses());
    let width = n + m + 1;
    if width > width_limit {
        return Err(GroverError::CircuitTooWide {
            width,
            limit: width_limit,
        });
    }
    let mut gates: Vec<Gate> = (0..n).map(Gate::Hadamard).collect();
    let mut compute = Vec::new();
    for j in 0..m {
        clause_gadget(cnf, j, n + j, &mut compute);
    }
    let flag = n + m;
    let flag_gate = Gate::MultiControlledNot {
        controls: (0..m)
            .map(|j| Control {
                wire: n + j,
                active_high: false,
            })
            .collect(),
        target: flag,
    };
    gates.extend(compute.iter().cloned());
    gates.push(flag_gate.clone());
    gates.push(Gate::ControlledPhaseFlip(flag));
    gates.push(flag_gate);
    // every gate is self-inverse, so the mirror image uncomputes
    gates.extend(compute.into_iter().rev());
    Ok(CircuitDescription {
        num_vars: n,
        num_clauses: m,
        gates,
    })
}

/// Effect of the oracle on one basis input with clean ancillas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisAction {
    /// +1 or -1.
    pub phase: i8,
    pub ancillas_zero: bool,
    pub register_preserved: bool,
}

/// Runs the oracle (Hadamard layer excluded) on the basis state `x` of the
/// variable register with all ancillas zero. Every oracle gate is a
/// permutation or a diagonal phase, so a classical bit simulation is exact.
pub fn simulate_circuit(circuit: &CircuitDescription, x: u32) -> BasisAction {
    let mut wires = alloc::vec![false; circuit.width()];
    for (i, w) in wires.iter_mut().enumerate().take(circuit.num_vars) {
        *w = x >> i & 1 == 1;
    }
    let mut phase = 1i8;
    for gate in circuit.oracle_gates() {
        match gate {
            Gate::Hadamard(_) => unreachable!("Hadamard inside the oracle"),
            Gate::Not(w) => wires[*w] = !wires[*w],
            Gate::MultiControlledNot { controls, target } => {
                if controls.iter().all(|c| wires[c.wire] == c.active_high) {
                    wires[*target] = !wires[*target];
                }
            }
            Gate::ControlledPhaseFlip(w) => {
                if wires[*w] {
                    phase = -phase;
                }
            }
        }
    }
    BasisAction {
        phase,
        ancillas_zero: wires[circuit.num_vars..].iter().all(|&b| !b),
        register_preserved: (0..circuit.num_vars).all(|i| wires[i] == (x >> i & 1 == 1)),
    }
}
