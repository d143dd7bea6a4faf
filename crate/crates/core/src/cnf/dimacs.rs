//! DIMACS CNF reading and writing.
//!
//! The parser accepts the common dialect found in competition archives:
//! comment lines starting with `c`, blank lines, and a trailing block
//! starting with a `%` line, which some benchmark suites append. The writer
//! is canonical: a given formula always serializes to the same bytes.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::types::{Clause, CnfFormula, Literal};

/// Parse failures, each carrying the 1-based line where it was detected.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: malformed header {found:?}, expected `p cnf <vars> <clauses>`")]
    MalformedHeader { line: usize, found: String },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate `p cnf` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: token {token:?} is not an integer")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {num_vars}")]
    LiteralOutOfRange {
        line: usize,
        lit: i32,
        num_vars: u32,
    },
    #[error("line {line}: clause is empty")]
    EmptyClause { line: usize },
    #[error("line {line}: last clause is missing its terminating 0")]
    MissingTerminator { line: usize },
    #[error("line {line}: header declares {expected} clauses but the file has {found}")]
    ClauseCountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<io::Error> for DimacsError {
    fn from(e: io::Error) -> Self {
        DimacsError::Io(e.to_string())
    }
}

/// Parses a DIMACS CNF document.
///
/// Duplicate literals within a clause are collapsed (clauses are sets);
/// tautological clauses are retained and can be inspected through
/// [`CnfFormula::tautology_indices`].
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0usize;
    let mut line_no = 0usize;

    for line in reader.lines() {
        let line = line?;
        line_no += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        // Competition files may carry a `%`-introduced trailer; everything
        // from that line on is ignored.
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line: line_no });
            }
            let mut parts = trimmed.split_whitespace();
            let p = parts.next();
            let kind = parts.next();
            let nv = parts.next().and_then(|t| t.parse::<u32>().ok());
            let nc = parts.next().and_then(|t| t.parse::<usize>().ok());
            match (p, kind, nv, nc, parts.next()) {
                (Some("p"), Some("cnf"), Some(nv), Some(nc), None) => {
                    header = Some((nv, nc));
                }
                _ => {
                    return Err(DimacsError::MalformedHeader {
                        line: line_no,
                        found: trimmed.to_string(),
                    })
                }
            }
            continue;
        }

        let (num_vars, _) = header.ok_or(DimacsError::MissingHeader { line: line_no })?;
        for token in trimmed.split_whitespace() {
            let value: i32 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if value == 0 {
                if pending.is_empty() {
                    return Err(DimacsError::EmptyClause { line: line_no });
                }
                let clause = Clause::new(std::mem::take(&mut pending))
                    .expect("pending literals are nonempty");
                clauses.push(clause);
            } else {
                if value.unsigned_abs() > num_vars {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: line_no,
                        lit: value,
                        num_vars,
                    });
                }
                if pending.is_empty() {
                    pending_line = line_no;
                }
                pending.push(Literal::from_dimacs(value).expect("nonzero"));
            }
        }
    }

    let (num_vars, num_clauses) = header.ok_or(DimacsError::MissingHeader {
        line: line_no.max(1),
    })?;
    if !pending.is_empty() {
        return Err(DimacsError::MissingTerminator { line: pending_line });
    }
    if clauses.len() != num_clauses {
        return Err(DimacsError::ClauseCountMismatch {
            line: line_no.max(1),
            expected: num_clauses,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula::new(num_vars, clauses).expect("literal range checked during parse"))
}

/// Serializes a formula in canonical DIMACS form.
///
/// Clauses appear in stored order, literals within a clause in canonical
/// order (by variable, positive polarity first), one clause per line. The
/// output is deterministic and `parse_dimacs(write_dimacs(f)) == f`.
pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    out.push_str(&format!("p cnf {} {}\n", f.num_vars(), f.num_clauses()));
    for clause in f.clauses() {
        for lit in clause.literals() {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Writes the canonical DIMACS form to an `io::Write` sink.
pub fn write_dimacs_to<W: Write>(f: &CnfFormula, mut w: W) -> io::Result<()> {
    w.write_all(write_dimacs(f).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<CnfFormula, DimacsError> {
        parse_dimacs(s.as_bytes())
    }

    #[test]
    fn parses_simple_formula() {
        let f = parse("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.num_clauses(), 1);
        assert_eq!(f.clauses()[0], Clause::from_dimacs(&[1, -2]).unwrap());
    }

    #[test]
    fn duplicate_literals_collapse() {
        let f = parse("p cnf 1 1\n1 1 0").unwrap();
        assert_eq!(f.clauses()[0].len(), 1);
    }

    #[test]
    fn clause_count_mismatch_reports_position() {
        let err = parse("p cnf 3 3\n1 0\n2 0\n").unwrap_err();
        assert_eq!(
            err,
            DimacsError::ClauseCountMismatch {
                line: 3,
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn literal_beyond_header_is_an_error() {
        let err = parse("p cnf 2 1\n1 -3 0").unwrap_err();
        assert_eq!(
            err,
            DimacsError::LiteralOutOfRange {
                line: 2,
                lit: -3,
                num_vars: 2
            }
        );
    }

    #[test]
    fn missing_terminator_is_an_error() {
        let err = parse("p cnf 2 1\n1 -2").unwrap_err();
        assert_eq!(err, DimacsError::MissingTerminator { line: 2 });
    }

    #[test]
    fn non_integer_token_is_an_error() {
        let err = parse("p cnf 2 1\n1 x 0").unwrap_err();
        assert_eq!(
            err,
            DimacsError::InvalidToken {
                line: 2,
                token: "x".to_string()
            }
        );
    }

    #[test]
    fn malformed_header_is_an_error() {
        let err = parse("p cnf two 1\n").unwrap_err();
        assert!(matches!(err, DimacsError::MalformedHeader { line: 1, .. }));
    }

    #[test]
    fn comments_blanks_and_percent_trailer_ignored() {
        let f = parse("c a comment\n\np cnf 2 2\n1 2 0\nc mid comment\n-1 -2 0\n%\n0\n").unwrap();
        assert_eq!(f.num_clauses(), 2);
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse("p cnf 3 1\n1\n2\n3 0\n").unwrap();
        assert_eq!(f.clauses()[0].len(), 3);
    }

    #[test]
    fn empty_formula_writes_minimal_header() {
        assert_eq!(write_dimacs(&CnfFormula::empty(0)), "p cnf 0 0\n");
    }

    #[test]
    fn round_trip_is_exact() {
        let f = parse("p cnf 3 2\n-1 3 0\n2 -3 1 0\n").unwrap();
        let g = parse(&write_dimacs(&f)).unwrap();
        assert_eq!(f, g);
    }
}
