//! CNF formulas, DIMACS text format and assignment evaluation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A propositional variable, 1-indexed as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Var(u32);

impl Var {
    /// Creates a variable from its 1-based index.
    ///
    /// Panics if `index` is zero.
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variables are 1-indexed");
        Var(index)
    }

    /// Variable from a 0-based array position.
    #[inline]
    pub fn from_index(idx: usize) -> Var {
        Var(idx as u32 + 1)
    }

    /// The 1-based DIMACS index.
    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based position, for indexing per-variable arrays.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn lit(self, positive: bool) -> Lit {
        Lit::new(self, positive)
    }
}

/// A literal: a variable or its negation.
///
/// Encoded as `2 * (var - 1) + negated` so that literals index watch lists
/// directly.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit((var.index() as u32) << 1 | (!positive) as u32)
    }

    pub fn positive(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn negative(var: Var) -> Lit {
        Lit::new(var, false)
    }

    /// Builds a literal from a nonzero signed DIMACS integer.
    pub fn from_dimacs(value: i64) -> Lit {
        assert!(value != 0, "0 is not a literal");
        Lit::new(Var::new(value.unsigned_abs() as u32), value > 0)
    }

    #[inline]
    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn var(self) -> Var {
        Var((self.0 >> 1) + 1)
    }

    /// `true` for a positive occurrence.
    #[inline]
    pub fn sign(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().get() as i64;
        if self.sign() {
            v
        } else {
            -v
        }
    }

    /// Truth value of the literal when its variable takes `value`.
    #[inline]
    pub fn eval(self, value: bool) -> bool {
        value == self.sign()
    }
}

impl core::ops::Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Lit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_dimacs())
    }
}

/// A disjunction of literals.
///
/// Duplicate literals are removed on construction (first occurrence wins);
/// clauses containing a literal and its negation are kept but flagged.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
    tautology: bool,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut out: Vec<Lit> = Vec::new();
        let mut tautology = false;
        for lit in lits {
            if out.contains(&lit) {
                continue;
            }
            if out.contains(&!lit) {
                tautology = true;
            }
            out.push(lit);
        }
        Clause {
            lits: out,
            tautology,
        }
    }

    /// Convenience constructor from signed DIMACS integers.
    pub fn from_dimacs(lits: &[i64]) -> Clause {
        Clause::new(lits.iter().map(|&l| Lit::from_dimacs(l)))
    }

    #[inline]
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.lits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    #[inline]
    pub fn is_tautology(&self) -> bool {
        self.tautology
    }

    pub fn max_var(&self) -> u32 {
        self.lits.iter().map(|l| l.var().get()).max().unwrap_or(0)
    }

    /// Evaluates the clause under a full assignment indexed by `Var::index`.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.lits
            .iter()
            .any(|l| l.eval(assignment[l.var().index()]))
    }
}

/// A formula in conjunctive normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Clause>,
}

/// Errors from constructing or evaluating a [`Cnf`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("clause {clause} mentions variable {var} but the formula has {num_vars} variables")]
    VarOutOfRange {
        clause: usize,
        var: u32,
        num_vars: usize,
    },
    #[error("assignment has length {got}, expected {expected}")]
    AssignmentLength { got: usize, expected: usize },
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Cnf, CnfError> {
        for (i, c) in clauses.iter().enumerate() {
            let var = c.max_var();
            if var as usize > num_vars {
                return Err(CnfError::VarOutOfRange {
                    clause: i,
                    var,
                    num_vars,
                });
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// Empty formula over `num_vars` variables.
    pub fn with_vars(num_vars: usize) -> Cnf {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    /// Appends a clause, growing `num_vars` if needed.
    pub fn push(&mut self, clause: Clause) {
        self.num_vars = self.num_vars.max(clause.max_var() as usize);
        self.clauses.push(clause);
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    #[inline]
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<Evaluation, CnfError> {
        eval_assignment(self, assignment)
    }
}

/// Result of evaluating a formula under a full assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub violated: usize,
    pub total: usize,
}

impl Evaluation {
    #[inline]
    pub fn satisfied(&self) -> bool {
        self.violated == 0
    }

    /// Fraction of clauses with every literal false; 0 for the empty formula.
    pub fn violated_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.violated as f64 / self.total as f64
        }
    }
}

/// Counts the clauses of `cnf` falsified by `assignment`.
///
/// `assignment[i]` is the value of variable `i + 1`.
pub fn eval_assignment(cnf: &Cnf, assignment: &[bool]) -> Result<Evaluation, CnfError> {
    if assignment.len() != cnf.num_vars {
        return Err(CnfError::AssignmentLength {
            got: assignment.len(),
            expected: cnf.num_vars,
        });
    }
    let violated = cnf
        .clauses
        .iter()
        .filter(|c| !c.is_satisfied_by(assignment))
        .count();
    Ok(Evaluation {
        violated,
        total: cnf.clauses.len(),
    })
}

/// A DIMACS parse failure, tagged with the 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("malformed header, expected `p cnf <vars> <clauses>`")]
    MalformedHeader,
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("clause data before the header")]
    MissingHeader,
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("variable {var} exceeds declared count {num_vars}")]
    VarOutOfRange { var: u64, num_vars: usize },
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parses DIMACS CNF text.
///
/// Comment lines (`c ...`) are skipped anywhere. A `%` line ends the clause
/// section (SATLIB footer); anything after it is ignored.
pub fn parse_dimacs(text: &str) -> Result<Cnf, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    let mut clause_open_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, ParseErrorKind::DuplicateHeader));
            }
            let mut parts = line.split_whitespace();
            let (p, fmt, n, m) = (parts.next(), parts.next(), parts.next(), parts.next());
            if p != Some("p") || fmt != Some("cnf") || parts.next().is_some() {
                return Err(err(line_no, ParseErrorKind::MalformedHeader));
            }
            let n = n.and_then(|s| s.parse::<usize>().ok());
            let m = m.and_then(|s| s.parse::<usize>().ok());
            match (n, m) {
                (Some(n), Some(m)) => header = Some((n, m)),
                _ => return Err(err(line_no, ParseErrorKind::MalformedHeader)),
            }
            continue;
        }
        let (num_vars, _) = header.ok_or_else(|| err(line_no, ParseErrorKind::MissingHeader))?;
        for tok in line.split_whitespace() {
            let value: i64 = tok
                .parse()
                .map_err(|_| err(line_no, ParseErrorKind::InvalidToken(tok.into())))?;
            if value == 0 {
                clauses.push(Clause::new(current.drain(..)));
                continue;
            }
            let var = value.unsigned_abs();
            if var > num_vars as u64 || var > u32::MAX as u64 {
                return Err(err(line_no, ParseErrorKind::VarOutOfRange { var, num_vars }));
            }
            if current.is_empty() {
                clause_open_line = line_no;
            }
            current.push(Lit::from_dimacs(value));
        }
    }

    let (num_vars, declared) =
        header.ok_or_else(|| err(last_line.max(1), ParseErrorKind::MissingHeader))?;
    if !current.is_empty() {
        return Err(err(clause_open_line, ParseErrorKind::UnterminatedClause));
    }
    if clauses.len() != declared {
        return Err(err(
            last_line.max(1),
            ParseErrorKind::ClauseCountMismatch {
                declared,
                found: clauses.len(),
            },
        ));
    }
    Ok(Cnf { num_vars, clauses })
}

/// Serializes `cnf` as DIMACS: header, then one clause per line in stored
/// order, single spaces, `0` terminators.
pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut out = String::new();
    write_dimacs_to(cnf, &mut out).expect("writing to a String cannot fail");
    out
}

pub fn write_dimacs_to<W: fmt::Write>(cnf: &Cnf, out: &mut W) -> fmt::Result {
    write!(out, "p cnf {} {}", cnf.num_vars, cnf.clauses.len())?;
    for clause in &cnf.clauses {
        out.write_char('\n')?;
        for lit in clause.lits() {
            write!(out, "{} ", lit.to_dimacs())?;
        }
        out.write_char('0')?;
    }
    if !cnf.clauses.is_empty() {
        out.write_char('\n')?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn cnf(n: usize, clauses: &[&[i64]]) -> Cnf {
        Cnf::new(n, clauses.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap()
    }

    #[test]
    fn parses_smallest_file() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f, cnf(2, &[&[1, -2]]));
        assert!(f.clauses()[0].lits()[0].sign());
        assert!(!f.clauses()[0].lits()[1].sign());
    }

    #[test]
    fn writes_single_clause_and_empty_formula() {
        assert_eq!(write_dimacs(&cnf(2, &[&[1, -2]])), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(write_dimacs(&Cnf::with_vars(0)), "p cnf 0 0");
    }

    #[test]
    fn round_trip_normalizes_whitespace() {
        let text = "c hello\np  cnf 2   1\n  1   -2\n 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(write_dimacs(&f), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn tolerates_satlib_footer_and_comments() {
        let f = parse_dimacs("c x\np cnf 3 2\n1 2 0\nc mid\n-3 0\n%\n0\n\n").unwrap();
        assert_eq!(f.num_clauses(), 2);
    }

    #[test]
    fn dedups_and_flags_tautologies() {
        let f = parse_dimacs("p cnf 2 2\n1 1 -2 0\n1 -1 0\n").unwrap();
        assert_eq!(f.clauses()[0].lits().len(), 2);
        assert!(!f.clauses()[0].is_tautology());
        assert!(f.clauses()[1].is_tautology());
    }

    #[test]
    fn parse_errors_name_lines() {
        let e = parse_dimacs("p cnf x 1\n1 0\n").unwrap_err();
        assert_eq!((e.line, e.kind), (1, ParseErrorKind::MalformedHeader));
        let e = parse_dimacs("p cnf 2 1\n\n1 3 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::VarOutOfRange { var: 3, .. }));
        let e = parse_dimacs("p cnf 2 2\n1 0\n").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::ClauseCountMismatch { declared: 2, found: 1 }
        ));
        let e = parse_dimacs("p cnf 2 1\n1 -2\n").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::UnterminatedClause));
        let e = parse_dimacs("1 2 0\np cnf 2 1\n").unwrap_err();
        assert_eq!((e.line, e.kind), (1, ParseErrorKind::MissingHeader));
        let e = parse_dimacs("p cnf 2 1\n1 a 0\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::InvalidToken(_)));
        assert!(parse_dimacs("").is_err());
    }

    #[test]
    fn eval_examples() {
        let units = cnf(2, &[&[1], &[2]]);
        let e = eval_assignment(&units, &[true, true]).unwrap();
        assert!(e.satisfied());
        assert_eq!(e.violated_fraction(), 0.0);
        let e = eval_assignment(&units, &[true, false]).unwrap();
        assert!(!e.satisfied());
        assert_eq!(e.violated_fraction(), 0.5);
        let e = eval_assignment(&cnf(2, &[&[1, -2]]), &[false, true]).unwrap();
        assert_eq!(e.violated_fraction(), 1.0);
        let e = eval_assignment(&Cnf::with_vars(0), &[]).unwrap();
        assert!(e.satisfied());
        assert_eq!(
            eval_assignment(&units, &[true]),
            Err(CnfError::AssignmentLength { got: 1, expected: 2 })
        );
    }

    #[test]
    fn cnf_rejects_out_of_range_vars() {
        assert!(Cnf::new(1, vec![Clause::from_dimacs(&[2])]).is_err());
    }

    #[test]
    fn literal_negation() {
        let l = Lit::from_dimacs(-5);
        assert_eq!((!l).var(), l.var());
        assert_ne!((!l).sign(), l.sign());
        assert_eq!((!l).to_dimacs(), 5);
    }

    fn arb_cnf() -> impl Strategy<Value = Cnf> {
        (1usize..12).prop_flat_map(|n| {
            let lit = (1..=n as i64, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
            let clause = proptest::collection::vec(lit, 0..5);
            proptest::collection::vec(clause, 0..20).prop_map(move |cs| {
                Cnf::new(n, cs.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn parse_inverts_write(f in arb_cnf()) {
            prop_assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
        }

        #[test]
        fn eval_matches_naive(f in arb_cnf(), bits in any::<u32>()) {
            let assignment: Vec<bool> = (0..f.num_vars()).map(|i| bits >> i & 1 == 1).collect();
            let mut naive = 0;
            for c in f.clauses() {
                let mut sat = false;
                for l in c.lits() {
                    let v = assignment[(l.to_dimacs().unsigned_abs() - 1) as usize];
                    if (l.to_dimacs() > 0) == v { sat = true; }
                }
                if c.is_tautology() { prop_assert!(sat); }
                if !sat { naive += 1; }
            }
            let e = eval_assignment(&f, &assignment).unwrap();
            prop_assert_eq!(e.violated, naive);
            prop_assert_eq!(e.satisfied(), naive == 0);
        }
    }
}
