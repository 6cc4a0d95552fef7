use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write as _;

use super::format_bits;

/// Measurement counts over basis states of an `n`-variable register.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Histogram {
    num_vars: usize,
    counts: BTreeMap<u32, u32>,
}

/// Lexicographic order of the printed bitstrings `x1 x2 ... xn`.
pub(crate) fn lex_cmp(a: u32, b: u32, n: usize) -> Ordering {
    for i in 0..n {
        let (x, y) = (a >> i & 1, b >> i & 1);
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

impl Histogram {
    pub fn new(num_vars: usize) -> Histogram {
        Histogram {
            num_vars,
            counts: BTreeMap::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn add(&mut self, x: u32, count: u32) {
        if count > 0 {
            *self.counts.entry(x).or_insert(0) += count;
        }
    }

    pub fn count(&self, x: u32) -> u32 {
        self.counts.get(&x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Observed outcomes with their counts, ascending by index.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&x, &c)| (x, c))
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (x, c) in other.iter() {
            self.add(x, c);
        }
    }

    /// The `k` most frequent outcomes; ties go to the lexicographically
    /// smaller bitstring.
    pub fn top_k(&self, k: usize) -> Vec<(u32, u32)> {
        let mut all: Vec<(u32, u32)> = self.iter().collect();
        all.sort_by(|a, b| b.1.cmp(&a.1).then(lex_cmp(a.0, b.0, self.num_vars)));
        all.truncate(k);
        all
    }

    /// `assignment,count` rows with a header, most frequent first.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("assignment,count\n");
        for (x, c) in self.top_k(usize::MAX) {
            let _ = writeln!(out, "{},{}", format_bits(x, self.num_vars), c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grover::parse_bits;
    use alloc::vec;

    #[test]
    fn top_k_orders_by_count_then_bitstring() {
        let mut h = Histogram::new(2);
        for (s, c) in [("11", 5), ("01", 7), ("10", 5), ("00", 1)] {
            h.add(parse_bits(s).unwrap(), c);
        }
        let top: Vec<_> = h
            .top_k(3)
            .into_iter()
            .map(|(x, c)| (format_bits(x, 2), c))
            .collect();
        assert_eq!(top, vec![("01".into(), 7), ("10".into(), 5), ("11".into(), 5)]);
        assert_eq!(h.total(), 18);
        assert!(h.to_csv().starts_with("assignment,count\n01,7\n"));
    }
}
