//! Flattening of formulas into atoms, the natural bases K and J, simulation
//! of Hilbert proofs as base derivations and extraction of Hilbert proofs
//! from base derivations.

mod clauses;
mod extract;
mod flat;
mod natural;
mod pipeline;
mod simulate;


use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hilbert::{Diagnostic, ElabError, SchemeId, SystemId};
use crate::syntax::{Formula, SyntaxError};

pub use clauses::{check_flat_clauses, Clause, ClauseInstance, ClauseReport};
pub use extract::extract_hilbert;
pub use flat::{classical_translation, in_classical_fragment, make_flat_map, make_flat_map_with, FlatMap};
pub use natural::{build_natural_base, NaturalBase, Schema};
pub use pipeline::{completeness_pipeline, PipelineOptions, PipelineOutcome, Source, Transcript, Verdict};
pub use simulate::simulate_hilbert;

/// Which natural base to build: K simulates C, J simulates I.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    K,
    J,
}

impl Variant {
    pub fn system(self) -> SystemId {
        match self {
            Variant::K => SystemId::C,
            Variant::J => SystemId::I,
        }
    }

    /// The rule schemas generated for this variant, in generation order.
    pub fn schemas(self) -> &'static [Schema] {
        use Schema::*;
        match self {
            Variant::K => &[K, S, AllE, Dne, Mp, Gen],
            Variant::J => &[K, S, AllE, AndI, AndE1, AndE2, OrI1, OrI2, ExI, NegI, Mp, Gen, Efq, OrE, ExE],
        }
    }

    pub fn has(self, schema: Schema) -> bool {
        self.schemas().contains(&schema)
    }

    /// Whether an axiom scheme of the Hilbert systems has a zero-level
    /// counterpart in this variant.
    pub fn simulates_axiom(self, scheme: SchemeId) -> bool {
        Schema::from_scheme(scheme).is_some_and(|s| self.has(s))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::K => "K",
            Variant::J => "J",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "K" => Ok(Variant::K),
            "J" => Ok(Variant::J),
            _ => Err(format!("unknown variant `{s}` (expected K or J)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("no unused name available for {0}")]
    NamePoolExhausted(String),
    #[error("flat domain exceeds {limit} formulas")]
    DomainTooLarge { limit: usize },
    #[error("formula {formula} uses `{sign}`, outside the fragment of variant K")]
    Fragment { formula: Formula, sign: &'static str },
    #[error("input proof does not check: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    ProofRejected(Vec<Diagnostic>),
    #[error("line {line}: {formula} has no flat in the base")]
    OutsideDomain { line: usize, formula: Formula },
    #[error("line {line}: scheme {scheme} has no rule in variant {variant}")]
    SchemeNotInVariant { line: usize, scheme: SchemeId, variant: Variant },
    #[error("line {line}: {rule} cannot be simulated")]
    UnsupportedRule { line: usize, rule: &'static str },
    #[error("node {node}: cannot decode {atom}: {msg}")]
    Decoder { node: String, atom: String, msg: String },
    #[error("node {node}: {msg}")]
    SideCondition { node: String, msg: String },
    #[error("node {node}: {source}")]
    Elab { node: String, source: ElabError },
    #[error("base derivation does not validate: {0}")]
    InvalidDerivation(String),
    #[error("proof conclusion {found} differs from the goal {expected}")]
    GoalMismatch { expected: Formula, found: Formula },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
