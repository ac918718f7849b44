//! Hilbert systems for classical and intuitionistic first-order logic: proof
//! checking and proof transformations.

mod axioms;
mod builder;
mod elaborate;
mod format;
mod proof;

pub use axioms::{is_axiom_instance, matches_scheme, SchemeId, SystemId};
pub(crate) use builder::ProofBuilder;
pub use elaborate::{deduction_elaborate, derive_efq, derive_exists_elim, derive_or_elim};
pub use format::{format_proof, parse_proof};
pub use proof::{check_proof, CheckReport, Diagnostic, DiagnosticKind, HilbertProof, Justification, Line};

use thiserror::Error;

use crate::syntax::{Formula, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("input proof does not check: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Rejected(Vec<Diagnostic>),
    #[error("line {line} generalizes over {var}, which is free in the discharged hypothesis")]
    DischargedVariable { line: usize, var: String },
    #[error("proofs are in different systems")]
    SystemMismatch,
    #[error("{0}")]
    Shape(String),
    #[error("witness hypothesis {formula} is not in the context")]
    MissingWitness { formula: Formula },
    #[error("term {term} is not fresh: it occurs in {place}")]
    NotFresh { term: String, place: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("internal construction error: {0}")]
    Internal(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proof file line {line}: {msg}")]
pub struct ProofFormatError {
    pub line: usize,
    pub msg: String,
}
