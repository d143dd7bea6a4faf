use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Not;

use thiserror::Error;

/// Errors from constructing or transforming CNF values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("clause must contain at least one literal")]
    EmptyClause,
    #[error("variable index 0 is reserved; variables start at 1")]
    ZeroVariable,
    #[error("literal {lit} exceeds the declared variable count {num_vars}")]
    VariableOutOfRange { lit: i32, num_vars: u32 },
    #[error("assignment binds variable {var} but the formula has only {num_vars} variables")]
    BindingOutOfRange { var: u32, num_vars: u32 },
}

/// A propositional literal: a variable (index ≥ 1) or its negation.
///
/// Packed as `var << 1 | sign` with sign bit 0 for the positive literal, so
/// literals order by (variable, positive-before-negative) and `code - 2` is a
/// dense 0-based index with both polarities of every variable materialized.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    /// The positive literal of `var`. Panics if `var == 0`.
    pub fn positive(var: u32) -> Self {
        assert!(var >= 1, "variables start at 1");
        Literal(var << 1)
    }

    /// The negative literal of `var`. Panics if `var == 0`.
    pub fn negative(var: u32) -> Self {
        assert!(var >= 1, "variables start at 1");
        Literal(var << 1 | 1)
    }

    /// Parses the DIMACS integer encoding (`3` is x3, `-3` its negation).
    pub fn from_dimacs(x: i32) -> Result<Self, CnfError> {
        if x == 0 {
            return Err(CnfError::ZeroVariable);
        }
        let var = x.unsigned_abs();
        Ok(if x > 0 {
            Literal::positive(var)
        } else {
            Literal::negative(var)
        })
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var() as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Negation; an involution.
    pub fn negated(self) -> Self {
        Literal(self.0 ^ 1)
    }

    /// Dense 0-based index: x1 → 0, ¬x1 → 1, x2 → 2, ...
    ///
    /// This is also the node id of the literal in graph representations.
    pub fn index(self) -> usize {
        self.0 as usize - 2
    }

    /// Inverse of [`Literal::index`].
    pub fn from_index(index: usize) -> Self {
        Literal(u32::try_from(index).expect("literal index fits in u32") + 2)
    }

    /// Truth value under `value` assigned to the underlying variable.
    pub fn evaluate(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        self.negated()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A clause: a set of literals, stored sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// Builds a clause from literals, collapsing duplicates. Errors on an
    /// empty literal set.
    pub fn new(mut lits: Vec<Literal>) -> Result<Self, CnfError> {
        lits.sort_unstable();
        lits.dedup();
        if lits.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        Ok(Clause { lits })
    }

    /// Convenience constructor from DIMACS integers.
    pub fn from_dimacs(ints: &[i32]) -> Result<Self, CnfError> {
        let lits = ints
            .iter()
            .map(|&x| Literal::from_dimacs(x))
            .collect::<Result<Vec<_>, _>>()?;
        Clause::new(lits)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: nonempty
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// True iff the clause contains some variable in both polarities.
    pub fn is_tautology(&self) -> bool {
        self.lits.windows(2).any(|w| w[0].var() == w[1].var())
    }

    pub fn max_var(&self) -> u32 {
        self.lits.last().map(|l| l.var()).unwrap_or(0)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// A CNF formula: a declared variable count and an ordered clause list.
///
/// Variables beyond the ones that occur are legal (DIMACS allows them), and
/// the clause order is preserved; generators rely on it for reproducible
/// output.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Builds a formula, checking that every literal stays within
    /// `num_vars`.
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for c in &clauses {
            if c.max_var() > num_vars {
                let lit = c.literals().iter().max_by_key(|l| l.var()).unwrap();
                return Err(CnfError::VariableOutOfRange {
                    lit: lit.to_dimacs(),
                    num_vars,
                });
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// A formula with no clauses over `num_vars` variables.
    pub fn empty(num_vars: u32) -> Self {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// The set L(f) of literals that occur in some clause.
    pub fn occurring_literals(&self) -> BTreeSet<Literal> {
        self.clauses
            .iter()
            .flat_map(|c| c.literals().iter().copied())
            .collect()
    }

    /// Number of clauses the literal occurs in.
    pub fn literal_degree(&self, lit: Literal) -> usize {
        self.clauses.iter().filter(|c| c.contains(lit)).count()
    }

    /// Occurrence count per literal, indexed by [`Literal::index`] over both
    /// polarities of all `num_vars` variables.
    pub fn literal_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; 2 * self.num_vars as usize];
        for c in &self.clauses {
            for l in c.literals() {
                deg[l.index()] += 1;
            }
        }
        deg
    }

    /// Indices of tautological clauses (x ∨ ¬x ∨ …); kept, not deleted.
    pub fn tautology_indices(&self) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_tautology())
            .map(|(i, _)| i)
            .collect()
    }

    /// True iff the (total or partial) assignment satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &PartialAssignment) -> bool {
        self.clauses.iter().all(|c| {
            c.literals()
                .iter()
                .any(|l| assignment.value_of(*l) == Some(true))
        })
    }

    /// Applies a partial assignment: satisfied clauses are removed, false
    /// literals are deleted from the remaining clauses, and a clause with
    /// all literals false yields the explicit [`Residual::Unsat`] marker.
    /// Unbound variables (and the declared variable count) are unchanged.
    pub fn apply_assignment(&self, sigma: &PartialAssignment) -> Result<Residual, CnfError> {
        if let Some((&var, _)) = sigma.bindings().iter().next_back() {
            if var > self.num_vars {
                return Err(CnfError::BindingOutOfRange {
                    var,
                    num_vars: self.num_vars,
                });
            }
        }
        let mut residual = Vec::new();
        for clause in &self.clauses {
            let mut kept = Vec::new();
            let mut satisfied = false;
            for &lit in clause.literals() {
                match sigma.value_of(lit) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => kept.push(lit),
                }
            }
            if satisfied {
                continue;
            }
            if kept.is_empty() {
                return Ok(Residual::Unsat);
            }
            residual.push(Clause::new(kept).expect("kept literals are nonempty"));
        }
        Ok(Residual::Formula(CnfFormula {
            num_vars: self.num_vars,
            clauses: residual,
        }))
    }

    /// Clause multiset comparison, ignoring clause order.
    pub fn same_clauses(&self, other: &CnfFormula) -> bool {
        if self.num_vars != other.num_vars || self.clauses.len() != other.clauses.len() {
            return false;
        }
        let mut a = self.clauses.clone();
        let mut b = other.clauses.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl fmt::Debug for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CnfFormula[{} vars", self.num_vars)?;
        for c in &self.clauses {
            write!(f, " {c:?}")?;
        }
        write!(f, "]")
    }
}

/// Result of applying a partial assignment to a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residual {
    /// The simplified formula; no clauses left means trivially satisfiable.
    Formula(CnfFormula),
    /// Some clause had every literal falsified.
    Unsat,
}

impl Residual {
    pub fn is_unsat_marker(&self) -> bool {
        matches!(self, Residual::Unsat)
    }

    pub fn formula(&self) -> Option<&CnfFormula> {
        match self {
            Residual::Formula(f) => Some(f),
            Residual::Unsat => None,
        }
    }
}

/// A partial truth assignment: at most one binding per variable.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct PartialAssignment {
    bindings: BTreeMap<u32, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, bool)>) -> Self {
        PartialAssignment {
            bindings: pairs.into_iter().collect(),
        }
    }

    /// Total assignment over `num_vars` variables from the low bits of
    /// `bits` (variable i bound to bit i−1). Used by the brute-force oracle.
    pub fn from_bits(bits: u64, num_vars: u32) -> Self {
        PartialAssignment {
            bindings: (1..=num_vars)
                .map(|v| (v, bits >> (v - 1) & 1 == 1))
                .collect(),
        }
    }

    /// Binds or rebinds a variable.
    pub fn set(&mut self, var: u32, value: bool) {
        assert!(var >= 1, "variables start at 1");
        self.bindings.insert(var, value);
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    /// Truth value of a literal, if its variable is bound.
    pub fn value_of(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var()).map(|v| lit.evaluate(v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bindings(&self) -> &BTreeMap<u32, bool> {
        &self.bindings
    }

    /// True iff every variable 1..=num_vars is bound.
    pub fn is_total(&self, num_vars: u32) -> bool {
        self.bindings.len() == num_vars as usize
            && self
                .bindings
                .keys()
                .next_back()
                .map_or(num_vars == 0, |&v| v <= num_vars)
    }
}
