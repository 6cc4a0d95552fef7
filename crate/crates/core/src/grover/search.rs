use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::histogram::lex_cmp;
use super::{amplitudes_after, bits_of, phase_marks, sample_histogram, GroverConfig, GroverError, Histogram};
use crate::dimacs::{eval_assignment, Cnf};

/// Best checked candidate of a histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scored {
    pub beta: u32,
    pub q: f64,
    pub violated: usize,
    pub count: u32,
}

/// Evaluates the `top_k` most frequent outcomes on `cnf` and returns the one
/// violating the fewest clauses; ties go to the higher count, then to the
/// lexicographically smaller bitstring. `None` for an empty histogram.
pub fn score_candidates(hist: &Histogram, cnf: &Cnf, top_k: usize) -> Option<Scored> {
    let n = cnf.num_vars();
    hist.top_k(top_k)
        .into_iter()
        .map(|(x, count)| {
            let ev = eval_assignment(cnf, &bits_of(x, n)).expect("histogram width matches formula");
            Scored {
                beta: x,
                q: ev.violated_fraction(),
                violated: ev.violated,
                count,
            }
        })
        .min_by(|a, b| {
            a.violated
                .cmp(&b.violated)
                .then(b.count.cmp(&a.count))
                .then(lex_cmp(a.beta, b.beta, n))
        })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attempt {
    /// Range bound the iteration count was drawn from.
    pub range: u64,
    pub iterations: u64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroverOutcome {
    /// Counts accumulated over all attempts.
    pub histogram: Histogram,
    pub beta_q: u32,
    pub q: f64,
    pub attempts_used: u32,
    /// Oracle applications summed over attempts.
    pub total_iterations: u64,
    pub attempts: Vec<Attempt>,
}

impl GroverOutcome {
    pub fn beta_bits(&self) -> Vec<bool> {
        bits_of(self.beta_q, self.histogram.num_vars())
    }
}

/// Smallest integer `>= sqrt(2^n)`.
pub(crate) fn ceil_sqrt_pow2(n: usize) -> u64 {
    if n.is_multiple_of(2) {
        1 << (n / 2)
    } else {
        // sqrt(2^n) = 2^((n-1)/2) * sqrt(2) is irrational for odd n
        let lo = 1u64 << (n / 2);
        let target = 1u128 << n;
        let mut m = (lo as f64 * core::f64::consts::SQRT_2) as u64;
        while (m as u128) * (m as u128) < target {
            m += 1;
        }
        while m > 1 && ((m - 1) as u128) * ((m - 1) as u128) >= target {
            m -= 1;
        }
        m
    }
}

/// Randomized Grover search for an unknown number of solutions.
///
/// Attempt `i` draws `r` uniformly from `0..M_i` with `M_1 = 1` and
/// `M_{i+1} = min(ceil(growth * M_i), ceil(sqrt(2^n)))`, samples
/// `config.shots` outcomes after `r` iterations and scores the top
/// candidates. Stops at the first candidate with `q = 0`.
pub fn bbht_search_with<R: Rng + ?Sized>(
    cnf: &Cnf,
    config: &GroverConfig,
    rng: &mut R,
) -> Result<GroverOutcome, GroverError> {
    config.validate()?;
    let n = cnf.num_vars();
    let marks = phase_marks(cnf, config.sim_limit)?;
    let cap = ceil_sqrt_pow2(n);
    let mut histogram = Histogram::new(n);
    let mut best: Option<Scored> = None;
    let mut attempts = Vec::new();
    let mut total_iterations = 0;
    let mut range = 1u64;
    for _ in 0..config.max_attempts {
        let r = rng.gen_range(0..range);
        let amp = amplitudes_after(&marks, r);
        let hist = sample_histogram(&amp, n, config.shots, config.noise_epsilon, rng);
        let scored = score_candidates(&hist, cnf, config.top_k).expect("shots > 0");
        histogram.merge(&hist);
        total_iterations += r;
        attempts.push(Attempt {
            range,
            iterations: r,
            q: scored.q,
        });
        if best.is_none_or(|b| scored.violated < b.violated) {
            best = Some(scored);
        }
        if scored.violated == 0 {
            break;
        }
        range = config.growth_factor.ceil_mul(range).min(cap);
    }
    let best = best.expect("max_attempts > 0");
    Ok(GroverOutcome {
        histogram,
        beta_q: best.beta,
        q: best.q,
        attempts_used: attempts.len() as u32,
        total_iterations,
        attempts,
    })
}

/// [`bbht_search_with`] using a generator seeded from `config.rng_seed`.
pub fn bbht_search(cnf: &Cnf, config: &GroverConfig) -> Result<GroverOutcome, GroverError> {
    bbht_search_with(cnf, config, &mut ChaCha8Rng::seed_from_u64(config.rng_seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimacs::Clause;
    use crate::grover::parse_bits;

    fn cnf(n: usize, cs: &[&[i64]]) -> Cnf {
        Cnf::new(n, cs.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap()
    }

    fn hist(n: usize, entries: &[(&str, u32)]) -> Histogram {
        let mut h = Histogram::new(n);
        for &(s, c) in entries {
            h.add(parse_bits(s).unwrap(), c);
        }
        h
    }

    #[test]
    fn ceil_sqrt_matches_float_reference() {
        for n in 0..=40 {
            let exact = libm::ceil(libm::sqrt(libm::pow(2.0, n as f64))) as u64;
            assert_eq!(ceil_sqrt_pow2(n), exact, "n={n}");
        }
    }

    #[test]
    fn scoring_prefers_fewer_violations() {
        let f = cnf(2, &[&[1], &[2]]);
        let s = score_candidates(&hist(2, &[("11", 1500), ("01", 500)]), &f, 2).unwrap();
        assert_eq!((s.beta, s.q), (parse_bits("11").unwrap(), 0.0));

        let spurious = hist(2, &[("00", 900), ("10", 800), ("11", 700), ("01", 10)]);
        let s = score_candidates(&spurious, &f, 3).unwrap();
        assert_eq!((s.beta, s.q), (parse_bits("11").unwrap(), 0.0));
        let s = score_candidates(&spurious, &f, 2).unwrap();
        assert_eq!((s.beta, s.q), (parse_bits("10").unwrap(), 0.5));
    }

    #[test]
    fn scoring_ties_on_unsat_pair() {
        let f = cnf(1, &[&[1], &[-1]]);
        let s = score_candidates(&hist(1, &[("0", 10), ("1", 10)]), &f, 2).unwrap();
        assert_eq!((s.beta, s.q), (0, 0.5));
        assert!(score_candidates(&Histogram::new(1), &f, 2).is_none());
    }

    #[test]
    fn units_are_found() {
        let f = cnf(2, &[&[1], &[2]]);
        for seed in 0..20 {
            let cfg = GroverConfig {
                rng_seed: seed,
                ..Default::default()
            };
            let out = bbht_search(&f, &cfg).unwrap();
            assert_eq!((out.beta_q, out.q), (parse_bits("11").unwrap(), 0.0));
            assert!(out.attempts_used <= 3);
            assert_eq!(out.histogram.total(), 2000 * out.attempts_used as u64);
        }
    }

    #[test]
    fn unsat_pair_reports_half() {
        let out = bbht_search(&cnf(1, &[&[1], &[-1]]), &GroverConfig::default()).unwrap();
        assert_eq!(out.q, 0.5);
        assert_eq!(out.attempts_used, 12);
        assert!(out.attempts.iter().all(|a| a.iterations < a.range && a.range <= 2));
    }

    #[test]
    fn schedule_is_monotone_and_capped() {
        // unsatisfiable in 8 variables: runs every attempt
        let mut cs: Vec<Clause> = (1..=8).map(|v| Clause::from_dimacs(&[v])).collect();
        cs.push(Clause::from_dimacs(&[-1]));
        let f = Cnf::new(8, cs).unwrap();
        let cfg = GroverConfig {
            shots: 10,
            ..Default::default()
        };
        let out = bbht_search(&f, &cfg).unwrap();
        let ranges: Vec<u64> = out.attempts.iter().map(|a| a.range).collect();
        assert_eq!(ranges, [1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 16, 16]);
        assert!(out.q > 0.0);
        assert_eq!(
            out.total_iterations,
            out.attempts.iter().map(|a| a.iterations).sum::<u64>()
        );
    }
}
