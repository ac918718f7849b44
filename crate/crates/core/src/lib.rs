//! A workbench for the base-extension semantics of first-order classical and
//! intuitionistic logic: Hilbert proof checking, derivability in atomic
//! systems, support evaluation over finite bases, and the translation between
//! derivations in the simulation bases and Hilbert proofs.

pub mod atomic;
pub mod generate;
pub mod hilbert;
pub mod support;
pub mod simulation;
pub mod syntax;
