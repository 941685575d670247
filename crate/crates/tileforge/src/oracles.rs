//! Brute-force model counters and the parsimony check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sat::{Expr2SAT, Expression1in3};

pub const MAX_ORACLE_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} variables exceed the enumeration limit of {MAX_ORACLE_VARS}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentCount {
    pub count: u64,
    /// Satisfying assignments as bit masks (bit `v` = value of variable `v`).
    pub assignments: Option<Vec<u32>>,
}

fn enumerate(vars: usize, list: bool, sat: impl Fn(u32) -> bool) -> Result<AssignmentCount, OracleError> {
    if vars > MAX_ORACLE_VARS {
        return Err(OracleError::TooLarge(vars));
    }
    let mut count = 0;
    let mut found = Vec::new();
    for a in 0..(1u32 << vars) {
        if sat(a) {
            count += 1;
            if list {
                found.push(a);
            }
        }
    }
    Ok(AssignmentCount { count, assignments: list.then_some(found) })
}

/// Each clause needs exactly one true occurrence; repeated variables count once per occurrence.
pub fn count_1in3(e: &Expression1in3, list: bool) -> Result<AssignmentCount, OracleError> {
    enumerate(e.n, list, |a| e.clauses.iter().all(|c| c.iter().filter(|&&v| a >> v & 1 == 1).count() == 1))
}

/// Each clause needs at least one true literal.
pub fn count_2sat(e: &Expr2SAT, list: bool) -> Result<AssignmentCount, OracleError> {
    enumerate(e.vars, list, |a| e.clauses.iter().all(|c| c.iter().any(|&(v, neg)| (a >> v & 1 == 1) != neg)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsimonyEntry {
    pub context: String,
    pub stage_a: String,
    pub stage_b: String,
    pub pass: bool,
}

/// Compares two counts; on failure the entry carries both values and the context.
pub fn verify_parsimony<A: std::fmt::Display, B: std::fmt::Display>(a: A, b: B, context: &str) -> ParsimonyEntry {
    let (sa, sb) = (a.to_string(), b.to_string());
    ParsimonyEntry { pass: sa == sb, context: context.to_string(), stage_a: sa, stage_b: sb }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_in_three_examples() {
        let e = Expression1in3::new(1, vec![[0, 0, 0]]).unwrap();
        assert_eq!(count_1in3(&e, false).unwrap().count, 0);
        let e = Expression1in3::new(3, vec![[0, 1, 2]; 3]).unwrap();
        assert_eq!(count_1in3(&e, false).unwrap().count, 3);
        // (x,y,x),(x,y,y): x=0,y=1 violates the second clause (two y's); x=1 gives two x's
        let e = Expression1in3::new(2, vec![[0, 1, 0], [0, 1, 1]]).unwrap();
        let c = count_1in3(&e, true).unwrap();
        assert_eq!(c.count, c.assignments.unwrap().len() as u64);
    }

    #[test]
    fn two_sat_examples() {
        assert_eq!(count_2sat(&Expr2SAT::new(1, vec![]).unwrap(), false).unwrap().count, 2);
        let e = Expr2SAT::new(2, vec![[(0, false), (1, false)]]).unwrap();
        assert_eq!(count_2sat(&e, false).unwrap().count, 3);
        let e = Expr2SAT::new(2, vec![[(0, false), (1, false)], [(0, true), (1, true)]]).unwrap();
        assert_eq!(count_2sat(&e, true).unwrap().count, 2);
    }

    #[test]
    fn parsimony_entries() {
        assert!(verify_parsimony(3, 3, "x").pass);
        assert!(!verify_parsimony(3, 2, "x").pass);
    }

    #[test]
    fn too_large() {
        let e = Expr2SAT::new(25, vec![]).unwrap();
        assert_eq!(count_2sat(&e, false), Err(OracleError::TooLarge(25)));
    }
}
