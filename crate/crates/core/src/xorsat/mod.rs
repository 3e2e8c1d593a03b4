//! Planted 3-regular 3-XORSAT instances over GF(2).
//!
//! An instance is a system of `m` parity equations `x_i ^ x_j ^ x_k = b` over
//! `v` boolean variables where every equation touches three distinct
//! variables and every variable occurs in exactly three equations, so
//! `m == v`. A planted assignment is drawn first and parities are chosen so
//! that it satisfies every clause.

mod format;
mod generate;
mod gf2;

pub use format::{parse, serialize};
pub use generate::{generate_3r3x, MAX_FULL_RESTARTS, MAX_LOCAL_RETRIES};
pub use gf2::{gf2_solve, solve_system, BitRow, SolutionSpace};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XorSatError {
    #[error("spin count {0} is odd; instances need an even number of spins")]
    OddSize(usize),
    #[error("spin count {0} is too small; at least 8 spins (4 variables) are required")]
    TooSmall(usize),
    #[error("configuration-model repair failed after {restarts} full restarts")]
    GenerationStall { restarts: usize },
    #[error("assignment has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("system is inconsistent over GF(2)")]
    Inconsistent,
    #[error("syntax error on line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

/// One parity clause `x[vars[0]] ^ x[vars[1]] ^ x[vars[2]] == parity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause {
    pub vars: [usize; 3],
    pub parity: bool,
}

impl Clause {
    pub fn new(vars: [usize; 3], parity: bool) -> Self {
        Self { vars, parity }
    }

    /// Whether the clause holds under `assignment`.
    #[inline]
    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        let [i, j, k] = self.vars;
        (assignment[i] ^ assignment[j] ^ assignment[k]) == self.parity
    }
}

/// A validated 3-regular 3-XORSAT instance.
///
/// Construction goes through [`XorSatInstance::new`], which checks every
/// structural invariant; values are immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorSatInstance {
    num_vars: usize,
    clauses: Vec<Clause>,
    planted: Option<Vec<bool>>,
    seed: u64,
}

impl XorSatInstance {
    pub fn new(
        num_vars: usize,
        clauses: Vec<Clause>,
        planted: Option<Vec<bool>>,
        seed: u64,
    ) -> Result<Self, XorSatError> {
        let instance = Self {
            num_vars,
            clauses,
            planted,
            seed,
        };
        instance.validate()?;
        Ok(instance)
    }

    fn validate(&self) -> Result<(), XorSatError> {
        if self.clauses.len() != self.num_vars {
            return Err(XorSatError::InvariantViolation(format!(
                "clause count {} differs from variable count {}",
                self.clauses.len(),
                self.num_vars
            )));
        }
        let mut degree = vec![0usize; self.num_vars];
        for (c, clause) in self.clauses.iter().enumerate() {
            let [i, j, k] = clause.vars;
            if let Some(&bad) = clause.vars.iter().find(|&&v| v >= self.num_vars) {
                return Err(XorSatError::InvariantViolation(format!(
                    "clause {c} references variable {bad} outside 0..{}",
                    self.num_vars
                )));
            }
            if i == j || j == k || i == k {
                return Err(XorSatError::InvariantViolation(format!(
                    "clause {c} repeats a variable ({i}, {j}, {k})"
                )));
            }
            for &v in &clause.vars {
                degree[v] += 1;
            }
        }
        // over-full variables are reported before under-full ones
        let bad = degree
            .iter()
            .enumerate()
            .find(|(_, &d)| d > 3)
            .or_else(|| degree.iter().enumerate().find(|(_, &d)| d != 3));
        if let Some((v, &d)) = bad {
            return Err(XorSatError::InvariantViolation(format!(
                "variable {v} appears in {d} clauses, expected 3"
            )));
        }
        if let Some(planted) = &self.planted {
            if planted.len() != self.num_vars {
                return Err(XorSatError::InvariantViolation(format!(
                    "planted assignment has length {}, expected {}",
                    planted.len(),
                    self.num_vars
                )));
            }
            let unsat = self.count_unsat(planted);
            if unsat != 0 {
                return Err(XorSatError::InvariantViolation(format!(
                    "planted assignment violates {unsat} clauses"
                )));
            }
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of spins in the quadratized Ising model (one ancilla per clause).
    pub fn num_spins(&self) -> usize {
        self.num_vars + self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn planted(&self) -> Option<&[bool]> {
        self.planted.as_deref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Text id derived from the spin count and seed.
    pub fn label(&self) -> String {
        format!("3r3x-n{}-s{}", self.num_spins(), self.seed)
    }

    /// Per-variable clause count.
    pub fn degrees(&self) -> Vec<usize> {
        let mut degree = vec![0usize; self.num_vars];
        for clause in &self.clauses {
            for &v in &clause.vars {
                degree[v] += 1;
            }
        }
        degree
    }

    fn count_unsat(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| !c.is_satisfied(assignment))
            .count()
    }
}

/// Number of clauses violated by `assignment`.
pub fn evaluate(instance: &XorSatInstance, assignment: &[bool]) -> Result<usize, XorSatError> {
    if assignment.len() != instance.num_vars {
        return Err(XorSatError::LengthMismatch {
            expected: instance.num_vars,
            got: assignment.len(),
        });
    }
    Ok(instance.count_unsat(assignment))
}

/// Clause evaluation for systems that are not 3-regular (hand-built or partial).
pub fn evaluate_clauses(clauses: &[Clause], assignment: &[bool]) -> usize {
    clauses.iter().filter(|c| !c.is_satisfied(assignment)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_true_literal_satisfies_odd_parity() {
        let c = Clause::new([0, 1, 2], true);
        assert_eq!(evaluate_clauses(&[c], &[true, false, false]), 0);
        assert_eq!(evaluate_clauses(&[c], &[true, true, false]), 1);
        assert_eq!(evaluate_clauses(&[c], &[true, true, true]), 0);
    }

    #[test]
    fn evaluate_rejects_wrong_length() {
        let inst = generate_3r3x(8, 1).unwrap();
        assert_eq!(
            evaluate(&inst, &[false; 3]),
            Err(XorSatError::LengthMismatch {
                expected: 4,
                got: 3
            })
        );
    }

    #[test]
    fn new_rejects_degree_violation() {
        // all four triples of {0,1,2,3} is 3-regular; swap one slot to break it
        let mut clauses = vec![
            Clause::new([0, 1, 2], false),
            Clause::new([0, 1, 3], false),
            Clause::new([0, 2, 3], false),
            Clause::new([1, 2, 3], false),
        ];
        assert!(XorSatInstance::new(4, clauses.clone(), None, 0).is_ok());
        clauses[3].vars = [0, 2, 3];
        let err = XorSatInstance::new(4, clauses, None, 0).unwrap_err();
        assert!(matches!(err, XorSatError::InvariantViolation(m) if m.contains("variable 0")));
    }

    #[test]
    fn new_rejects_repeated_variable_and_bad_planting() {
        let clauses = vec![
            Clause::new([0, 0, 2], false),
            Clause::new([1, 1, 3], false),
            Clause::new([2, 3, 1], false),
            Clause::new([0, 2, 3], false),
        ];
        assert!(XorSatInstance::new(4, clauses, None, 0).is_err());

        let clauses = vec![
            Clause::new([0, 1, 2], true),
            Clause::new([0, 1, 3], false),
            Clause::new([0, 2, 3], false),
            Clause::new([1, 2, 3], false),
        ];
        let err = XorSatInstance::new(4, clauses, Some(vec![false; 4]), 0).unwrap_err();
        assert!(matches!(err, XorSatError::InvariantViolation(m) if m.contains("planted")));
    }
}
