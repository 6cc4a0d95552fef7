use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_unit, phase_marks, GroverConfig, GroverError, Histogram};
use crate::dimacs::Cnf;

/// Real amplitudes after `r` Grover iterations from the uniform state.
/// Oracle and diffuser are both real, so no imaginary parts arise.
pub fn amplitudes_after(marks: &[bool], r: u64) -> Vec<f64> {
    let n_states = marks.len();
    let mut amp = alloc::vec![1.0 / libm::sqrt(n_states as f64); n_states];
    for _ in 0..r {
        for (a, &m) in amp.iter_mut().zip(marks) {
            if m {
                *a = -*a;
            }
        }
        let mean = amp.iter().sum::<f64>() / n_states as f64;
        for a in &mut amp {
            *a = 2.0 * mean - *a;
        }
    }
    amp
}

/// Probability mass on the marked states.
pub fn marked_mass(amplitudes: &[f64], marks: &[bool]) -> f64 {
    amplitudes
        .iter()
        .zip(marks)
        .filter(|(_, &m)| m)
        .map(|(a, _)| a * a)
        .sum()
}

/// Draws `shots` outcomes from `|amplitude|^2`, mixed with the uniform
/// distribution at weight `epsilon`.
pub fn sample_histogram<R: Rng + ?Sized>(
    amplitudes: &[f64],
    num_vars: usize,
    shots: u32,
    epsilon: f64,
    rng: &mut R,
) -> Histogram {
    let n_states = amplitudes.len();
    let norm: f64 = amplitudes.iter().map(|a| a * a).sum();
    let uniform = 1.0 / n_states as f64;
    let mut cumulative = Vec::with_capacity(n_states);
    let mut acc = 0.0;
    for a in amplitudes {
        acc += (1.0 - epsilon) * (a * a / norm) + epsilon * uniform;
        cumulative.push(acc);
    }
    let mut hist = Histogram::new(num_vars);
    for _ in 0..shots {
        let u = rng.gen::<f64>() * acc;
        let x = cumulative.partition_point(|&c| c <= u).min(n_states - 1);
        hist.add(x as u32, 1);
    }
    hist
}

/// `r` Grover iterations on `cnf` followed by `config.shots` measurements.
pub fn grover_run_with<R: Rng + ?Sized>(
    cnf: &Cnf,
    r: u64,
    config: &GroverConfig,
    rng: &mut R,
) -> Result<Histogram, GroverError> {
    check_unit("noise_epsilon", config.noise_epsilon)?;
    let marks = phase_marks(cnf, config.sim_limit)?;
    let amp = amplitudes_after(&marks, r);
    Ok(sample_histogram(
        &amp,
        cnf.num_vars(),
        config.shots,
        config.noise_epsilon,
        rng,
    ))
}

/// [`grover_run_with`] using a generator seeded from `config.rng_seed`.
pub fn grover_run(cnf: &Cnf, r: u64, config: &GroverConfig) -> Result<Histogram, GroverError> {
    grover_run_with(cnf, r, config, &mut ChaCha8Rng::seed_from_u64(config.rng_seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimacs::Clause;
    use crate::grover::{parse_bits, success_probability};

    fn cnf(n: usize, cs: &[&[i64]]) -> Cnf {
        Cnf::new(n, cs.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap()
    }

    #[test]
    fn quarter_mass_is_found_with_certainty() {
        let f = cnf(2, &[&[1], &[2]]);
        let h = grover_run(&f, 1, &GroverConfig::default()).unwrap();
        assert_eq!(h.count(parse_bits("11").unwrap()), 2000);
        assert_eq!(h.total(), 2000);
    }

    #[test]
    fn norm_and_mass_track_the_closed_form() {
        let f = cnf(5, &[&[1, 2], &[-3, 4], &[5, -1]]);
        let marks = phase_marks(&f, 20).unwrap();
        let k = marks.iter().filter(|&&m| m).count();
        for r in 0..15 {
            let amp = amplitudes_after(&marks, r);
            let norm: f64 = amp.iter().map(|a| a * a).sum();
            assert!((norm - 1.0).abs() < 1e-9);
            let expect = success_probability(k as f64 / 32.0, r).unwrap();
            assert!((marked_mass(&amp, &marks) - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn full_noise_ignores_amplification() {
        let f = cnf(2, &[&[1], &[2]]);
        let cfg = GroverConfig {
            noise_epsilon: 1.0,
            shots: 4000,
            ..Default::default()
        };
        let h = grover_run(&f, 1, &cfg).unwrap();
        for x in 0..4 {
            let c = h.count(x) as f64;
            // binomial sd = sqrt(4000 * 1/4 * 3/4) ~ 27.4
            assert!((c - 1000.0).abs() < 4.0 * 27.4, "{x}: {c}");
        }
    }
}
