//! Simulated Grover subsolver for extracted subformulas.
//!
//! Basis states of the variable register are `u32` indices: bit `i` holds
//! dense variable `i + 1`. Bitstrings are printed `x1 x2 ... xn`, so `"01"`
//! means `x1 = 0, x2 = 1`.
//!
//! The search itself runs on the `n_sub`-qubit variable register with a
//! diagonal oracle built from exhaustive evaluation ([`phase_marks`]). The
//! gate-level oracle of [`circuit`] (clause ancillas plus a formula flag,
//! compute/phase/uncompute) is built separately and checked against the
//! diagonal oracle on every basis input.

pub mod circuit;
mod histogram;
mod search;
mod statevector;

use alloc::string::String;
use alloc::vec::Vec;

use crate::dimacs::Cnf;

pub use circuit::{build_gadget_circuit, simulate_circuit, BasisAction, CircuitDescription, Control, Gate};
pub use histogram::Histogram;
pub use search::{bbht_search, bbht_search_with, score_candidates, Attempt, GroverOutcome, Scored};
pub use statevector::{amplitudes_after, grover_run, grover_run_with, marked_mass, sample_histogram};

/// Default cap on `n_sub` for the statevector path.
pub const DEFAULT_SIM_LIMIT: usize = 20;
/// Default cap on `n_sub + m_sub + 1` for the explicit gadget circuit.
pub const DEFAULT_GADGET_WIDTH_LIMIT: usize = 12;

/// A positive rational `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub const fn new(num: u64, den: u64) -> Ratio {
        Ratio { num, den }
    }

    /// `ceil(self * m)`, in exact integer arithmetic.
    pub fn ceil_mul(self, m: u64) -> u64 {
        (m * self.num).div_ceil(self.den)
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroverConfig {
    /// Measurements per attempt.
    pub shots: u32,
    /// Multiplicative growth of the BBHT range `M`.
    pub growth_factor: Ratio,
    pub max_attempts: u32,
    /// Most frequent outcomes handed to the classical checker per attempt.
    pub top_k: usize,
    /// Weight of the uniform component mixed into the sampling distribution.
    pub noise_epsilon: f64,
    /// Seed for the standalone entry points; the hybrid controller uses its
    /// own generator.
    pub rng_seed: u64,
    /// Largest `n_sub` the statevector path accepts.
    pub sim_limit: usize,
}

impl Default for GroverConfig {
    fn default() -> Self {
        GroverConfig {
            shots: 2000,
            growth_factor: Ratio::new(6, 5),
            max_attempts: 12,
            top_k: 5,
            noise_epsilon: 0.0,
            rng_seed: 0,
            sim_limit: DEFAULT_SIM_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroverError {
    #[error("subformula has {n} variables, simulation limit is {limit}")]
    TooManyVariables { n: usize, limit: usize },
    #[error("oracle circuit needs {width} wires, limit is {limit}")]
    CircuitTooWide { width: usize, limit: usize },
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfUnitInterval { name: &'static str, value: f64 },
    #[error("invalid Grover configuration: {0}")]
    Config(&'static str),
}

impl GroverConfig {
    pub fn validate(&self) -> Result<(), GroverError> {
        if self.shots == 0 {
            return Err(GroverError::Config("shots must be positive"));
        }
        if self.growth_factor.den == 0 || self.growth_factor.num <= self.growth_factor.den {
            return Err(GroverError::Config("growth factor must exceed 1"));
        }
        if self.max_attempts == 0 {
            return Err(GroverError::Config("max_attempts must be positive"));
        }
        if self.top_k == 0 {
            return Err(GroverError::Config("top_k must be positive"));
        }
        check_unit("noise_epsilon", self.noise_epsilon)
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<(), GroverError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(GroverError::OutOfUnitInterval { name, value })
    }
}

/// Probability of measuring a marked state after `r` Grover iterations when
/// the marked states carry initial mass `mu`:
/// `sin^2((2r + 1) * asin(sqrt(mu)))`.
pub fn success_probability(mu: f64, r: u64) -> Result<f64, GroverError> {
    check_unit("mu", mu)?;
    if r == 0 {
        return Ok(mu);
    }
    let theta = libm::asin(libm::sqrt(mu));
    let s = libm::sin((2 * r + 1) as f64 * theta);
    Ok(s * s)
}

/// `true` at index `x` iff the assignment `x` satisfies `cnf`, by exhaustive
/// evaluation.
pub fn phase_marks(cnf: &Cnf, limit: usize) -> Result<Vec<bool>, GroverError> {
    let n = cnf.num_vars();
    if n > limit || n >= 32 {
        return Err(GroverError::TooManyVariables { n, limit });
    }
    let masks: Vec<(u32, u32)> = cnf
        .clauses()
        .iter()
        .map(|c| {
            c.lits().iter().fold((0u32, 0u32), |(pos, neg), l| {
                let bit = 1u32 << l.var().index();
                if l.sign() {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    Ok((0..1u32 << n)
        .map(|x| masks.iter().all(|&(pos, neg)| x & pos != 0 || !x & neg != 0))
        .collect())
}

/// The satisfying assignments of `cnf`, ascending.
pub fn build_phase_marks(cnf: &Cnf, limit: usize) -> Result<Vec<u32>, GroverError> {
    Ok(phase_marks(cnf, limit)?
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(x, _)| x as u32)
        .collect())
}

/// Dense assignment vector of a basis index.
pub fn bits_of(x: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

pub fn index_of(bits: &[bool]) -> u32 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (b as u32) << i)
}

/// `x1 x2 ... xn` as a string of `0`/`1`.
pub fn format_bits(x: u32, n: usize) -> String {
    (0..n)
        .map(|i| if x >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bits(s: &str) -> Option<u32> {
    s.chars().enumerate().try_fold(0u32, |acc, (i, c)| match c {
        '0' => Some(acc),
        '1' => Some(acc | 1 << i),
        _ => None,
    })
}
