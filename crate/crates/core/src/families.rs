//! Small benchmark formula families.

use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng;

use crate::dimacs::{Clause, Cnf, Lit, Var};

/// Uniform random k-SAT: `m` clauses over `n` variables, each with `k`
/// distinct variables and random signs.
pub fn random_ksat<R: Rng + ?Sized>(n: usize, m: usize, k: usize, rng: &mut R) -> Cnf {
    assert!(k <= n, "clause width exceeds variable count");
    let clauses = (0..m)
        .map(|_| {
            let vars = sample(rng, n, k);
            Clause::new(vars.iter().map(|v| Lit::new(Var::from_index(v), rng.gen())))
        })
        .collect();
    Cnf::new(n, clauses).expect("variables in range")
}

/// Pigeonhole principle with `pigeons` pigeons and `holes` holes; variable
/// `p * holes + h + 1` says pigeon `p` sits in hole `h`. Unsatisfiable iff
/// `pigeons > holes`.
pub fn pigeonhole(pigeons: usize, holes: usize) -> Cnf {
    let var = |p: usize, h: usize| Var::from_index(p * holes + h);
    let mut clauses = Vec::new();
    for p in 0..pigeons {
        clauses.push(Clause::new((0..holes).map(|h| Lit::positive(var(p, h)))));
    }
    for h in 0..holes {
        for p in 0..pigeons {
            for q in p + 1..pigeons {
                clauses.push(Clause::new([Lit::negative(var(p, h)), Lit::negative(var(q, h))]));
            }
        }
    }
    Cnf::new(pigeons * holes, clauses).expect("variables in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ksat_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_ksat(10, 42, 3, &mut rng);
        assert_eq!((f.num_vars(), f.num_clauses()), (10, 42));
        assert!(f.clauses().iter().all(|c| c.len() == 3 && !c.is_tautology()));
    }

    #[test]
    fn pigeonhole_shape() {
        let f = pigeonhole(4, 3);
        assert_eq!(f.num_vars(), 12);
        assert_eq!(f.num_clauses(), 4 + 3 * 6);
    }
}
