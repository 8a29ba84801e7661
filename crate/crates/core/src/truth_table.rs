//! Complete Boolean functions over a small ordered variable set.
//!
//! Minterm index `k` packs an assignment with variable 0 as the most
//! significant bit: over `(A, B, C)`, minterm 6 is `A=1, B=1, C=0`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const MAX_VARS: usize = 8;

/// Human-readable statement of the minterm bit-order convention.
pub const VARIABLE_ORDER_NOTE: &str =
    "minterm index packs variable 0 as the most significant bit";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthTableError {
    #[error("variable count {0} outside supported range 1..={MAX_VARS}")]
    Domain(usize),
    #[error("minterm {index} out of range for {n_vars} variables (max {max})")]
    Range { index: usize, n_vars: usize, max: usize },
    #[error("assignment has {got} bits, function has {expected} variables")]
    Arity { expected: usize, got: usize },
    #[error("bad minterm list at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    n_vars: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn from_bits(n_vars: usize, bits: Vec<bool>) -> Result<Self, TruthTableError> {
        check_vars(n_vars)?;
        if bits.len() != 1 << n_vars {
            return Err(TruthTableError::Arity { expected: 1 << n_vars, got: bits.len() });
        }
        Ok(Self { n_vars, bits })
    }

    pub fn from_minterms<I>(n_vars: usize, minterms: I) -> Result<Self, TruthTableError>
    where
        I: IntoIterator<Item = usize>,
    {
        check_vars(n_vars)?;
        let rows = 1 << n_vars;
        let mut bits = vec![false; rows];
        for k in minterms {
            if k >= rows {
                return Err(TruthTableError::Range { index: k, n_vars, max: rows - 1 });
            }
            bits[k] = true;
        }
        Ok(Self { n_vars, bits })
    }

    pub fn constant(n_vars: usize, value: bool) -> Result<Self, TruthTableError> {
        check_vars(n_vars)?;
        Ok(Self { n_vars, bits: vec![value; 1 << n_vars] })
    }

    /// Truth table of the projection onto variable `var`.
    pub fn variable(n_vars: usize, var: usize) -> Result<Self, TruthTableError> {
        check_vars(n_vars)?;
        if var >= n_vars {
            return Err(TruthTableError::Range { index: var, n_vars, max: n_vars - 1 });
        }
        let bits = (0..1usize << n_vars).map(|k| bit_of(k, var, n_vars)).collect();
        Ok(Self { n_vars, bits })
    }

    /// Builds a table by evaluating `f` on every assignment in minterm order.
    pub fn from_fn<F>(n_vars: usize, mut f: F) -> Result<Self, TruthTableError>
    where
        F: FnMut(&[bool]) -> bool,
    {
        check_vars(n_vars)?;
        let bits = (0..1usize << n_vars)
            .map(|k| f(&assignment_of(k, n_vars)))
            .collect();
        Ok(Self { n_vars, bits })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<bool, TruthTableError> {
        if assignment.len() != self.n_vars {
            return Err(TruthTableError::Arity { expected: self.n_vars, got: assignment.len() });
        }
        Ok(self.bits[index_of(assignment)])
    }

    pub fn minterms(&self) -> BTreeSet<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(k, &b)| b.then_some(k))
            .collect()
    }

    pub fn complement(&self) -> Self {
        Self { n_vars: self.n_vars, bits: self.bits.iter().map(|b| !b).collect() }
    }

    /// Minterms on which `self` and `other` disagree. Panics if arities differ.
    pub fn difference(&self, other: &TruthTable) -> BTreeSet<usize> {
        assert_eq!(self.n_vars, other.n_vars, "arity mismatch");
        self.bits
            .iter()
            .zip(&other.bits)
            .enumerate()
            .filter_map(|(k, (a, b))| (a != b).then_some(k))
            .collect()
    }

    /// Packs the table into an integer, bit `k` = value on minterm `k`.
    /// Only defined for `n_vars <= 6`.
    pub fn to_mask(&self) -> u64 {
        assert!(self.n_vars <= 6, "mask form needs at most 6 variables");
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |m, (k, &b)| if b { m | (1 << k) } else { m })
    }

    pub fn from_mask(n_vars: usize, mask: u64) -> Result<Self, TruthTableError> {
        check_vars(n_vars)?;
        if n_vars > 6 {
            return Err(TruthTableError::Domain(n_vars));
        }
        let bits = (0..1usize << n_vars).map(|k| mask >> k & 1 == 1).collect();
        Ok(Self { n_vars, bits })
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sum(")?;
        for (i, k) in self.minterms().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

fn check_vars(n_vars: usize) -> Result<(), TruthTableError> {
    if (1..=MAX_VARS).contains(&n_vars) {
        Ok(())
    } else {
        Err(TruthTableError::Domain(n_vars))
    }
}

/// Value of variable `var` in minterm `k`.
pub fn bit_of(k: usize, var: usize, n_vars: usize) -> bool {
    k >> (n_vars - 1 - var) & 1 == 1
}

pub fn assignment_of(k: usize, n_vars: usize) -> Vec<bool> {
    (0..n_vars).map(|v| bit_of(k, v, n_vars)).collect()
}

pub fn index_of(assignment: &[bool]) -> usize {
    assignment.iter().fold(0, |k, &b| k << 1 | b as usize)
}

/// A parsed `sum(...)` minterm list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MintermSet(pub BTreeSet<usize>);

impl MintermSet {
    pub fn to_table(&self, n_vars: usize) -> Result<TruthTable, TruthTableError> {
        TruthTable::from_minterms(n_vars, self.0.iter().copied())
    }
}

impl FromStr for MintermSet {
    type Err = TruthTableError;

    /// Accepts `sum(3,4,5)`, case-insensitive, whitespace ignored. `Σ(…)`
    /// is accepted as an alias.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: Vec<(usize, char)> =
            s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let text: String = compact.iter().map(|&(_, c)| c).collect::<String>().to_lowercase();
        let pos_at = |i: usize| compact.get(i).map_or(s.len(), |&(p, _)| p);
        let syntax = |i: usize, msg: &str| TruthTableError::Syntax { pos: pos_at(i), msg: msg.into() };

        let body_start = if text.starts_with("sum(") {
            4
        } else if text.starts_with("σ(") {
            2
        } else {
            return Err(syntax(0, "expected `sum(`"));
        };
        let chars: Vec<char> = text.chars().collect();
        if chars.last() != Some(&')') {
            return Err(syntax(chars.len(), "expected closing `)`"));
        }
        let body: String = chars[body_start..chars.len() - 1].iter().collect();
        let mut set = BTreeSet::new();
        if body.is_empty() {
            return Ok(Self(set));
        }
        let mut idx = body_start;
        for item in body.split(',') {
            let n = item.chars().count();
            if n == 0 {
                return Err(syntax(idx, "empty minterm"));
            }
            let k: usize = item.parse().map_err(|_| syntax(idx, "minterm is not a number"))?;
            set.insert(k);
            idx += n + 1;
        }
        Ok(Self(set))
    }
}
