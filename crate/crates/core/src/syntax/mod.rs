//! First-order terms and formulas, schemes and the concrete grammar.

mod formula;
mod parser;
mod scheme;
mod signature;
mod term;

pub use formula::{Atom, BinOp, Formula, Quant};
pub use parser::{infer_signature, parse_formula, parse_term};
pub use scheme::{FormulaScheme, Instantiation};
pub use signature::Signature;
pub use term::Term;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unexpected character `{found}` at offset {pos}")]
    Lexical { pos: usize, found: char },
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("`{name}` expects {expected} argument(s), found {found} (offset {pos})")]
    Arity { name: String, expected: usize, found: usize, pos: usize },
    #[error("unknown symbol `{name}` at offset {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("symbol `{name}` declared twice")]
    DuplicateSymbol { name: String },
    #[error("signature line {line} malformed: {text}")]
    BadSignatureLine { line: usize, text: String },
    #[error("signature declares no constants, so there are no closed terms")]
    NoConstants,
    #[error("cannot substitute the open term {term}")]
    OpenSubstitution { term: String },
    #[error("formula {formula} is not closed")]
    OpenFormula { formula: String },
    #[error("no binding for scheme slot `{slot}`")]
    MissingBinding { slot: String },
    #[error("substituting {term} would capture `{var}`")]
    Capture { term: String, var: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig() -> Signature {
        Signature::new()
            .with_constant("c")
            .unwrap()
            .with_constant("d")
            .unwrap()
            .with_function("f", 1)
            .unwrap()
            .with_predicate("P", 1)
            .unwrap()
            .with_predicate("R", 2)
            .unwrap()
            .with_predicate("p", 0)
            .unwrap()
            .with_predicate("q", 0)
            .unwrap()
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::constant("c")),
            Just(Term::constant("d")),
            Just(Term::var("x")),
            Just(Term::var("y")),
        ];
        leaf.prop_recursive(2, 4, 1, |inner| inner.prop_map(|t| Term::app("f", vec![t])))
    }

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::prop("p")),
            Just(Formula::prop("q")),
            Just(Formula::Bot),
            arb_term().prop_map(|t| Formula::atom("P", vec![t])),
            (arb_term(), arb_term()).prop_map(|(a, b)| Formula::atom("R", vec![a, b])),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                (prop_oneof![Just("x"), Just("y")], inner.clone()).prop_map(|(x, b)| Formula::forall(x, b)),
                (prop_oneof![Just("x"), Just("y")], inner).prop_map(|(x, b)| Formula::exists(x, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_formula()) {
            let printed = f.to_string();
            prop_assert_eq!(parse_formula(&printed, &sig()).unwrap(), f);
        }

        #[test]
        fn substitution_of_absent_variable_is_identity(f in arb_formula()) {
            let c = Term::constant("c");
            if !f.free_vars().contains("x") {
                prop_assert_eq!(f.substitute("x", &c).unwrap(), f);
            }
        }

        #[test]
        fn closure_is_closed(f in arb_formula()) {
            prop_assert!(f.universal_closure().free_vars().is_empty());
        }

        #[test]
        fn substitution_preserves_weight(f in arb_formula()) {
            let t = Term::app("f", vec![Term::constant("d")]);
            prop_assert_eq!(f.substitute("x", &t).unwrap().weight(), f.weight());
        }

        #[test]
        fn subformulae_invariants(f in arb_formula()) {
            let closed = f.universal_closure();
            let small = [Term::constant("c")];
            let large = [Term::constant("c"), Term::constant("d")];
            let s1 = closed.subformulae(&small).unwrap();
            let s2 = closed.subformulae(&large).unwrap();
            prop_assert!(s1.contains(&closed));
            prop_assert!(s1.is_subset(&s2));
            for g in &s2 {
                prop_assert!(g.is_closed());
                if let Formula::Quant(_, x, body) = g {
                    for t in &large {
                        prop_assert!(body.substitute(x, t).unwrap().weight() < g.weight());
                    }
                }
            }
        }
    }
}
