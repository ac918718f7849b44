//! Atomic rules and systems, derivability, and the closure of open systems.

mod derive;
mod format;
mod open;
mod oracle;
mod rule;

pub use derive::{consequences, derives, is_derivable, Engine};
pub use format::parse_base;
pub(crate) use format::{content_lines, parse_atom, parse_rule, rule_atom_texts, split_top};
pub use open::{close_open_system, open_correspondence_check, OpenCorrespondence};
pub use oracle::brute_force_derives;
pub use rule::{validate_derivation, AtomicRule, AtomicSystem, BaseDerivation, Level, OpenAtomicRule, Premise, Step};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("base file line {line}: {msg}")]
pub struct BaseFormatError {
    pub line: usize,
    pub msg: String,
}

#[cfg(test)]
mod tests;
