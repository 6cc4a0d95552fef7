//! Power side-channel proxy instances.
//!
//! Two symbolic executions `A` and `B` share a fixed plaintext and run
//! `S_t = phi(S_{t-1} xor rotl(K, t mod w))` for `t = 1..=T` with their own
//! keys. The formula asks for two distinct keys whose Hamming-weight
//! leakage at the check cycle is related as configured (equal or not).
//!
//! Bit vectors are `Vec<bool>` with index `i` holding bit `i` (least
//! significant first). [`format_word`] and [`parse_word`] print the most
//! significant bit first, so rotating `0001` left by one gives `0010`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dimacs::{Clause, Cnf, Lit, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LeakageRelation {
    Equal,
    NotEqual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaConfig {
    pub width: usize,
    pub cycles: usize,
    /// Apply the nonlinear layer after each key addition.
    pub substitution: bool,
    /// Known key bits `(bit, value)`, fixed in both executions.
    pub fixed_key_bits: Vec<(usize, bool)>,
    pub relation: LeakageRelation,
    /// Cycle whose leakage is compared, in `1..=cycles`.
    pub check_cycle: usize,
    pub plaintext: Vec<bool>,
}

impl ScaConfig {
    /// Not-equal leakage at the last cycle, all-ones plaintext, no
    /// substitution layer and no known key bits.
    pub fn new(width: usize, cycles: usize) -> ScaConfig {
        ScaConfig {
            width,
            cycles,
            substitution: false,
            fixed_key_bits: Vec::new(),
            relation: LeakageRelation::NotEqual,
            check_cycle: cycles,
            plaintext: alloc::vec![true; width],
        }
    }

    pub fn validate(&self) -> Result<(), ScaConfigError> {
        if self.width < 2 {
            return Err(ScaConfigError::Width(self.width));
        }
        if self.check_cycle == 0 || self.check_cycle > self.cycles {
            return Err(ScaConfigError::CheckCycle {
                check: self.check_cycle,
                cycles: self.cycles,
            });
        }
        if self.plaintext.len() != self.width {
            return Err(ScaConfigError::PlaintextWidth {
                got: self.plaintext.len(),
                width: self.width,
            });
        }
        if let Some(&(bit, _)) = self.fixed_key_bits.iter().find(|(b, _)| *b >= self.width) {
            return Err(ScaConfigError::KeyBit { bit, width: self.width });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScaConfigError {
    #[error("width {0} is below 2")]
    Width(usize),
    #[error("check cycle {check} is outside 1..={cycles}")]
    CheckCycle { check: usize, cycles: usize },
    #[error("plaintext has {got} bits, width is {width}")]
    PlaintextWidth { got: usize, width: usize },
    #[error("fixed key bit {bit} is outside the {width}-bit key")]
    KeyBit { bit: usize, width: usize },
}

/// Width mismatch between two bit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("bit vectors have widths {0} and {1}")]
pub struct WidthMismatch(pub usize, pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Xor,
    And,
    /// XNOR.
    Eq,
}

impl GateKind {
    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::Xor => a ^ b,
            GateKind::And => a & b,
            GateKind::Eq => a == b,
        }
    }
}

/// Fresh-variable allocator and clause sink.
#[derive(Debug, Clone, Default)]
pub struct GateContext {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl GateContext {
    pub fn new() -> GateContext {
        GateContext::default()
    }

    /// Continues numbering after `num_vars` existing variables.
    pub fn after(num_vars: usize) -> GateContext {
        GateContext {
            num_vars: num_vars as u32,
            clauses: Vec::new(),
        }
    }

    pub fn fresh(&mut self) -> Var {
        self.num_vars += 1;
        Var::new(self.num_vars)
    }

    pub fn fresh_vec(&mut self, n: usize) -> Vec<Var> {
        (0..n).map(|_| self.fresh()).collect()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars as usize
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        self.clauses.push(Clause::new(lits.iter().copied()));
    }

    pub fn fix(&mut self, var: Var, value: bool) {
        self.add_clause(&[Lit::new(var, value)]);
    }

    pub fn into_cnf(self) -> Cnf {
        Cnf::new(self.num_vars as usize, self.clauses).expect("variables are allocated before use")
    }
}

/// Tseitin encoding of `c = kind(a, b)` on a fresh `c`.
pub fn encode_gate(kind: GateKind, a: Var, b: Var, ctx: &mut GateContext) -> Var {
    let c = ctx.fresh();
    let (pa, na) = (Lit::positive(a), Lit::negative(a));
    let (pb, nb) = (Lit::positive(b), Lit::negative(b));
    let (pc, nc) = (Lit::positive(c), Lit::negative(c));
    match kind {
        GateKind::Xor => {
            ctx.add_clause(&[na, nb, nc]);
            ctx.add_clause(&[pa, pb, nc]);
            ctx.add_clause(&[pa, nb, pc]);
            ctx.add_clause(&[na, pb, pc]);
        }
        GateKind::And => {
            ctx.add_clause(&[nc, pa]);
            ctx.add_clause(&[nc, pb]);
            ctx.add_clause(&[pc, na, nb]);
        }
        GateKind::Eq => {
            ctx.add_clause(&[na, nb, pc]);
            ctx.add_clause(&[pa, pb, pc]);
            ctx.add_clause(&[pa, nb, nc]);
            ctx.add_clause(&[na, pb, nc]);
        }
    }
    c
}

/// Forces `a != b` as vectors: `d_i = a_i xor b_i` and `(d_1 or ... or d_w)`.
pub fn encode_neq(a: &[Var], b: &[Var], ctx: &mut GateContext) -> Result<(), WidthMismatch> {
    if a.len() != b.len() {
        return Err(WidthMismatch(a.len(), b.len()));
    }
    let diffs: Vec<Lit> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| Lit::positive(encode_gate(GateKind::Xor, x, y, ctx)))
        .collect();
    ctx.add_clause(&diffs);
    Ok(())
}

/// Number of bits needed for counts `0..=w`.
pub fn count_width(w: usize) -> usize {
    (usize::BITS - w.leading_zeros()) as usize
}

/// Binary Hamming weight of `bits`, least significant count bit first,
/// computed by a full-adder tree: each column of equal-weight bits is
/// reduced three at a time (two at a time for the last pair), with sums
/// staying in the column and carries moving to the next one.
pub fn encode_popcount(bits: &[Var], ctx: &mut GateContext) -> Vec<Var> {
    assert!(!bits.is_empty(), "popcount of an empty vector");
    let width = count_width(bits.len());
    let mut columns: Vec<Vec<Var>> = alloc::vec![Vec::new(); width];
    columns[0] = bits.to_vec();
    let mut out = Vec::with_capacity(width);
    for j in 0..width {
        let mut col = core::mem::take(&mut columns[j]);
        let mut head = 0;
        while col.len() - head > 1 {
            let (a, b) = (col[head], col[head + 1]);
            let ab = encode_gate(GateKind::Xor, a, b, ctx);
            let and_ab = encode_gate(GateKind::And, a, b, ctx);
            let (sum, carry) = if col.len() - head >= 3 {
                let c = col[head + 2];
                head += 3;
                let sum = encode_gate(GateKind::Xor, ab, c, ctx);
                let and_c = encode_gate(GateKind::And, ab, c, ctx);
                // the two carry terms are never both true, so xor is or
                (sum, encode_gate(GateKind::Xor, and_ab, and_c, ctx))
            } else {
                head += 2;
                (ab, and_ab)
            };
            col.push(sum);
            // a carry out of the top column is always zero
            if j + 1 < width {
                columns[j + 1].push(carry);
            } else {
                ctx.fix(carry, false);
            }
        }
        let bit = match col.get(head) {
            Some(&v) => v,
            None => {
                let zero = ctx.fresh();
                ctx.fix(zero, false);
                zero
            }
        };
        out.push(bit);
    }
    out
}

/// `rotl(word, s)`: bit `i` of the result is bit `i - s mod w` of `word`.
pub fn rotate_left<T: Copy>(word: &[T], s: usize) -> Vec<T> {
    let w = word.len();
    (0..w).map(|i| word[(i + w - s % w) % w]).collect()
}

/// `out_i = in_i xor (in_{i+1} and in_{i+2})`, indices mod `w`.
pub fn chi(word: &[bool]) -> Vec<bool> {
    let w = word.len();
    (0..w)
        .map(|i| word[i] ^ (word[(i + 1) % w] & word[(i + 2) % w]))
        .collect()
}

pub fn hamming_weight(word: &[bool]) -> u32 {
    word.iter().filter(|&&b| b).count() as u32
}

/// State words `S_1..S_T` and their Hamming weights for one key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub states: Vec<Vec<bool>>,
    pub leakage: Vec<u32>,
}

pub fn execute(config: &ScaConfig, key: &[bool]) -> Execution {
    assert_eq!(key.len(), config.plaintext.len(), "key width");
    let w = key.len();
    let mut state = config.plaintext.clone();
    let mut exec = Execution {
        states: Vec::new(),
        leakage: Vec::new(),
    };
    for t in 1..=config.cycles {
        let round_key = rotate_left(key, t % w);
        let mixed: Vec<bool> = state.iter().zip(&round_key).map(|(s, k)| s ^ k).collect();
        state = if config.substitution { chi(&mixed) } else { mixed };
        exec.leakage.push(hamming_weight(&state));
        exec.states.push(state.clone());
    }
    exec
}

/// Plain evaluation of both executions.
pub fn simulate_reference(config: &ScaConfig, key_a: &[bool], key_b: &[bool]) -> (Execution, Execution) {
    (execute(config, key_a), execute(config, key_b))
}

/// Whether `(key_a, key_b)` is a witness for the instance `config` encodes.
pub fn is_witness(config: &ScaConfig, key_a: &[bool], key_b: &[bool]) -> bool {
    if key_a == key_b {
        return false;
    }
    let fixed_ok = |k: &[bool]| config.fixed_key_bits.iter().all(|&(i, v)| k[i] == v);
    if !fixed_ok(key_a) || !fixed_ok(key_b) {
        return false;
    }
    let (a, b) = simulate_reference(config, key_a, key_b);
    let t = config.check_cycle - 1;
    match config.relation {
        LeakageRelation::Equal => a.leakage[t] == b.leakage[t],
        LeakageRelation::NotEqual => a.leakage[t] != b.leakage[t],
    }
}

/// Contiguous block of variables `start..start + len` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarRange {
    pub start: u32,
    pub len: u32,
}

impl VarRange {
    pub fn vars(self) -> Vec<Var> {
        (self.start..self.start + self.len).map(Var::new).collect()
    }

    pub fn contains(self, v: Var) -> bool {
        (self.start..self.start + self.len).contains(&v.get())
    }
}

/// Where each named quantity lives in the emitted formula.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InstanceMeta {
    pub config: ScaConfig,
    pub plaintext: VarRange,
    pub key_a: VarRange,
    pub key_b: VarRange,
    /// `state_a[t - 1][i]` is bit `i` of `S_t` in execution A.
    pub state_a: Vec<Vec<Var>>,
    pub state_b: Vec<Vec<Var>>,
    /// Count bits of the check-cycle Hamming weights, least significant
    /// first.
    pub leak_a: Vec<Var>,
    pub leak_b: Vec<Var>,
    pub num_vars: usize,
    pub num_clauses: usize,
}

fn read(model: &[bool], vars: &[Var]) -> Vec<bool> {
    vars.iter().map(|v| model[v.index()]).collect()
}

fn read_count(model: &[bool], vars: &[Var]) -> u32 {
    vars.iter()
        .enumerate()
        .map(|(i, v)| (model[v.index()] as u32) << i)
        .sum()
}

impl InstanceMeta {
    pub fn decode_keys(&self, model: &[bool]) -> (Vec<bool>, Vec<bool>) {
        (read(model, &self.key_a.vars()), read(model, &self.key_b.vars()))
    }

    pub fn decode_states(&self, model: &[bool]) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
        (
            self.state_a.iter().map(|s| read(model, s)).collect(),
            self.state_b.iter().map(|s| read(model, s)).collect(),
        )
    }

    pub fn decode_leakage(&self, model: &[bool]) -> (u32, u32) {
        (read_count(model, &self.leak_a), read_count(model, &self.leak_b))
    }

    /// Unit clauses fixing both keys.
    pub fn key_units(&self, key_a: &[bool], key_b: &[bool]) -> Vec<Clause> {
        let units = |range: VarRange, key: &[bool]| -> Vec<Clause> {
            range
                .vars()
                .into_iter()
                .zip(key)
                .map(|(v, &b)| Clause::new([Lit::new(v, b)]))
                .collect()
        };
        let mut out = units(self.key_a, key_a);
        out.extend(units(self.key_b, key_b));
        out
    }
}

fn execution_states(config: &ScaConfig, plaintext: &[Var], key: &[Var], ctx: &mut GateContext) -> Vec<Vec<Var>> {
    let w = config.width;
    let mut state = plaintext.to_vec();
    let mut states = Vec::with_capacity(config.cycles);
    for t in 1..=config.cycles {
        let round_key = rotate_left(key, t % w);
        let mixed: Vec<Var> = state
            .iter()
            .zip(&round_key)
            .map(|(&s, &k)| encode_gate(GateKind::Xor, s, k, ctx))
            .collect();
        state = if config.substitution {
            let products: Vec<Var> = (0..w)
                .map(|i| encode_gate(GateKind::And, mixed[(i + 1) % w], mixed[(i + 2) % w], ctx))
                .collect();
            (0..w)
                .map(|i| encode_gate(GateKind::Xor, mixed[i], products[i], ctx))
                .collect()
        } else {
            mixed
        };
        states.push(state.clone());
    }
    states
}

/// Emits the instance: plaintext units, both executions, key disequality
/// and the leakage relation at the check cycle.
///
/// Variables `1..=w` are the plaintext, then `K^A`, then `K^B`; gadget
/// outputs follow in emission order.
pub fn generate_instance(config: &ScaConfig) -> Result<(Cnf, InstanceMeta), ScaConfigError> {
    config.validate()?;
    let w = config.width;
    let mut ctx = GateContext::new();
    let plaintext = ctx.fresh_vec(w);
    let key_a = ctx.fresh_vec(w);
    let key_b = ctx.fresh_vec(w);
    for (&v, &b) in plaintext.iter().zip(&config.plaintext) {
        ctx.fix(v, b);
    }
    for &(bit, value) in &config.fixed_key_bits {
        ctx.fix(key_a[bit], value);
        ctx.fix(key_b[bit], value);
    }
    let state_a = execution_states(config, &plaintext, &key_a, &mut ctx);
    let state_b = execution_states(config, &plaintext, &key_b, &mut ctx);
    encode_neq(&key_a, &key_b, &mut ctx).expect("equal widths");
    let t = config.check_cycle - 1;
    let leak_a = encode_popcount(&state_a[t], &mut ctx);
    let leak_b = encode_popcount(&state_b[t], &mut ctx);
    match config.relation {
        LeakageRelation::Equal => {
            for (&x, &y) in leak_a.iter().zip(&leak_b) {
                let e = encode_gate(GateKind::Eq, x, y, &mut ctx);
                ctx.fix(e, true);
            }
        }
        LeakageRelation::NotEqual => encode_neq(&leak_a, &leak_b, &mut ctx).expect("equal widths"),
    }
    let range = |vars: &[Var]| VarRange {
        start: vars[0].get(),
        len: vars.len() as u32,
    };
    let meta = InstanceMeta {
        config: config.clone(),
        plaintext: range(&plaintext),
        key_a: range(&key_a),
        key_b: range(&key_b),
        state_a,
        state_b,
        leak_a,
        leak_b,
        num_vars: ctx.num_vars(),
        num_clauses: ctx.num_clauses(),
    };
    Ok((ctx.into_cnf(), meta))
}

/// Most significant bit first.
pub fn format_word(word: &[bool]) -> String {
    word.iter().rev().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Inverse of [`format_word`].
pub fn parse_word(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .rev()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Little-endian bits of `value`.
pub fn word_from_u64(value: u64, width: usize) -> Vec<bool> {
    (0..width).map(|i| value >> i & 1 == 1).collect()
}
