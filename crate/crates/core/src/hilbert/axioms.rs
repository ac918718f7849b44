use std::fmt;
use std::str::FromStr;

use crate::syntax::{Formula, FormulaScheme, Instantiation, Quant, SyntaxError, Term};

/// The two axiomatizations: `C` has every scheme, `I` all but DNE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemId {
    C,
    I,
}

impl SystemId {
    pub fn admits(self, scheme: SchemeId) -> bool {
        self == SystemId::C || scheme != SchemeId::Dne
    }

    pub fn schemes(self) -> impl Iterator<Item = SchemeId> {
        SchemeId::ALL.into_iter().filter(move |s| self.admits(*s))
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemId::C => "C",
            SystemId::I => "I",
        })
    }
}

impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "C" | "c" => Ok(SystemId::C),
            "I" | "i" => Ok(SystemId::I),
            other => Err(format!("unknown system `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    K,
    S,
    AllE,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ExI,
    NegI,
    Efq,
    Dne,
}

impl SchemeId {
    pub const ALL: [SchemeId; 13] = [
        SchemeId::K,
        SchemeId::S,
        SchemeId::AllE,
        SchemeId::AndI,
        SchemeId::AndE1,
        SchemeId::AndE2,
        SchemeId::OrI1,
        SchemeId::OrI2,
        SchemeId::OrE,
        SchemeId::ExI,
        SchemeId::NegI,
        SchemeId::Efq,
        SchemeId::Dne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::K => "K",
            SchemeId::S => "S",
            SchemeId::AllE => "AllE",
            SchemeId::AndI => "AndI",
            SchemeId::AndE1 => "AndE1",
            SchemeId::AndE2 => "AndE2",
            SchemeId::OrI1 => "OrI1",
            SchemeId::OrI2 => "OrI2",
            SchemeId::OrE => "OrE",
            SchemeId::ExI => "ExI",
            SchemeId::NegI => "NegI",
            SchemeId::Efq => "EFQ",
            SchemeId::Dne => "DNE",
        }
    }

    /// Whether the scheme quantifies a variable and substitutes a term.
    pub fn is_quantified(self) -> bool {
        matches!(self, SchemeId::AllE | SchemeId::ExI)
    }

    pub fn scheme(self) -> FormulaScheme {
        use FormulaScheme as S;
        let (x, y, z) = (S::var("X"), S::var("Y"), S::var("Z"));
        match self {
            SchemeId::K => S::imp(x.clone(), S::imp(y, x)),
            SchemeId::S => S::imp(
                S::imp(x.clone(), S::imp(y.clone(), z.clone())),
                S::imp(S::imp(x.clone(), y), S::imp(x, z)),
            ),
            SchemeId::AllE => S::imp(S::quant(Quant::Forall, "x", x.clone()), S::subst(x, "x", "t")),
            SchemeId::AndI => S::imp(x.clone(), S::imp(y.clone(), S::and(x, y))),
            SchemeId::AndE1 => S::imp(S::and(x.clone(), y), x),
            SchemeId::AndE2 => S::imp(S::and(x, y.clone()), y),
            SchemeId::OrI1 => S::imp(x.clone(), S::or(x, y)),
            SchemeId::OrI2 => S::imp(y.clone(), S::or(x, y)),
            SchemeId::OrE => S::imp(
                S::imp(x.clone(), z.clone()),
                S::imp(S::imp(y.clone(), z.clone()), S::imp(S::or(x, y), z)),
            ),
            SchemeId::ExI => S::imp(S::subst(x.clone(), "x", "t"), S::quant(Quant::Exists, "x", x)),
            SchemeId::NegI => S::imp(
                S::imp(x.clone(), y.clone()),
                S::imp(S::imp(x.clone(), S::not(y)), S::not(x)),
            ),
            SchemeId::Efq => S::imp(S::imp(x.clone(), S::Bot), S::imp(x, y)),
            SchemeId::Dne => S::imp(S::not(S::not(x.clone())), x),
        }
    }

    /// Instantiates the propositional slots `X`, `Y`, `Z` in that order.
    pub fn instance(self, parts: &[&Formula]) -> Result<(Formula, Instantiation), SyntaxError> {
        let mut inst = Instantiation::new();
        for (slot, f) in ["X", "Y", "Z"].iter().zip(parts) {
            inst = inst.with_formula(slot, (*f).clone());
        }
        Ok((self.scheme().instantiate(&inst)?, inst))
    }

    /// Instantiates a quantifier scheme with body `X`, variable `x` and term `t`.
    pub fn quantified_instance(self, body: &Formula, x: &str, t: &Term) -> Result<(Formula, Instantiation), SyntaxError> {
        let inst = Instantiation::new().with_formula("X", body.clone()).with_var("x", x).with_term("t", t.clone());
        Ok((self.scheme().instantiate(&inst)?, inst))
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown axiom scheme `{}`", s.trim()))
    }
}

/// Finds a scheme of `system` and an instantiation producing `formula`.
pub fn is_axiom_instance(formula: &Formula, system: SystemId) -> Option<(SchemeId, Instantiation)> {
    system.schemes().find_map(|id| matches_scheme(formula, id).map(|inst| (id, inst)))
}

pub fn matches_scheme(formula: &Formula, id: SchemeId) -> Option<Instantiation> {
    let scheme = id.scheme();
    let inst = scheme.match_formula(formula)?;
    (scheme.instantiate(&inst).ok()? == *formula).then_some(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::new()
            .with_constant("c")
            .unwrap()
            .with_predicate("P", 1)
            .unwrap()
            .with_predicate("Q", 1)
            .unwrap()
            .with_predicate("p", 0)
            .unwrap()
    }

    #[test]
    fn recognizes_k_over_bottom() {
        let f = parse_formula("bot -> bot -> bot", &sig()).unwrap();
        assert_eq!(is_axiom_instance(&f, SystemId::I).unwrap().0, SchemeId::K);
    }

    #[test]
    fn recognizes_universal_elimination() {
        let f = parse_formula("forall x (P(x) & Q(c)) -> P(c) & Q(c)", &sig()).unwrap();
        let (id, inst) = is_axiom_instance(&f, SystemId::I).unwrap();
        assert_eq!(id, SchemeId::AllE);
        assert_eq!(inst.terms["t"], Term::constant("c"));
        assert_eq!(id.scheme().instantiate(&inst).unwrap(), f);
    }

    #[test]
    fn dne_only_in_classical() {
        let f = parse_formula("~~p -> p", &sig()).unwrap();
        assert!(is_axiom_instance(&f, SystemId::I).is_none());
        assert_eq!(is_axiom_instance(&f, SystemId::C).unwrap().0, SchemeId::Dne);
    }

    #[test]
    fn scheme_names_round_trip() {
        for id in SchemeId::ALL {
            assert_eq!(id.name().parse::<SchemeId>().unwrap(), id);
        }
    }
}
