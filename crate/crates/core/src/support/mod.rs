//! Support over finite bases: the clauses of the base-extension semantics
//! evaluated exactly by enumerating extensions within a fixed basis.

mod basis;
mod eval;
mod format;
mod harness;

pub use basis::Basis;
pub use eval::Evaluator;
pub use format::{basis_source_texts, parse_basis};
pub use harness::{
    check_atcomp, check_atomic_cut, check_monotonicity, BiconditionalReport, Harness, MonotonicityReport,
    MonotonicityViolation, Row,
};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{Atom, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupportError {
    #[error("system is not a member of the basis")]
    NotInBasis,
    #[error("basis is not zero-level complete over the required atoms")]
    NotZeroComplete,
    #[error("atom {atom} is outside the basis universe")]
    OutOfUniverse { atom: Atom },
    #[error("basis file line {line}: {msg}")]
    Format { line: usize, msg: String },
}

/// `context ⊩_B goal` for the member `base` of `basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportQuery {
    pub base: usize,
    pub context: Vec<Formula>,
    pub goal: Formula,
}

fn check_universe(basis: &Basis, formulas: &[&Formula]) -> Result<(), SupportError> {
    let universe: BTreeSet<&str> = basis.universe().iter().map(|a| a.pred.as_str()).collect();
    let mut missing = None;
    for f in formulas {
        f.visit_atoms(&mut |a| {
            if missing.is_none() && !universe.contains(a.pred.as_str()) {
                missing = Some(a.clone());
            }
        });
    }
    match missing {
        Some(atom) => Err(SupportError::OutOfUniverse { atom }),
        None => Ok(()),
    }
}

pub fn supports(basis: &Basis, query: &SupportQuery) -> Result<bool, SupportError> {
    if query.base >= basis.len() {
        return Err(SupportError::NotInBasis);
    }
    let mut all: Vec<&Formula> = query.context.iter().collect();
    all.push(&query.goal);
    check_universe(basis, &all)?;
    Ok(Evaluator::new(basis).supports(query.base, &query.context, &query.goal))
}

pub fn supports_valid(basis: &Basis, context: &[Formula], goal: &Formula) -> Result<bool, SupportError> {
    let mut all: Vec<&Formula> = context.iter().collect();
    all.push(goal);
    check_universe(basis, &all)?;
    Ok(Evaluator::new(basis).supports_valid(context, goal))
}
