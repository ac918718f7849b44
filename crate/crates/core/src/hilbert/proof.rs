use std::fmt;

use super::axioms::{matches_scheme, SchemeId, SystemId};
use crate::syntax::{Formula, Instantiation};

/// How a proof line is obtained. Line references are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    /// An axiom instance. Without an explicit instantiation the checker
    /// searches for one.
    Axiom { scheme: SchemeId, inst: Option<Instantiation> },
    Hypothesis,
    /// `ModusPonens(minor, major)` where `major` is `minor -> conclusion`.
    ModusPonens(usize, usize),
    /// From `psi -> phi` infer `psi -> forall x phi`.
    Generalization(usize, String),
    /// From `phi -> psi` infer `exists x phi -> psi`.
    ExistentialInstantiation(usize, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertProof {
    pub system: SystemId,
    pub context: Vec<Formula>,
    pub lines: Vec<Line>,
}

impl HilbertProof {
    pub fn new(system: SystemId, context: Vec<Formula>) -> Self {
        HilbertProof { system, context, lines: Vec::new() }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// The formula on 1-based line `n`.
    pub fn formula(&self, n: usize) -> Option<&Formula> {
        n.checked_sub(1).and_then(|i| self.lines.get(i)).map(|l| &l.formula)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    EmptyProof,
    SchemeNotInSystem { scheme: SchemeId, system: SystemId },
    NotAnInstance { scheme: SchemeId },
    NotInContext,
    BadReference { target: usize },
    MajorNotImplication { target: usize },
    MinorMismatch { minor: usize, major: usize },
    ConclusionMismatch { expected: Formula },
    BadShape { target: usize },
    VariableFree { var: String, place: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based line, or 0 for whole-proof problems.
    pub line: usize,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: ", self.line)?;
        }
        match &self.kind {
            DiagnosticKind::EmptyProof => write!(f, "proof has no lines"),
            DiagnosticKind::SchemeNotInSystem { scheme, system } => {
                write!(f, "scheme {scheme} is not an axiom of {system}")
            }
            DiagnosticKind::NotAnInstance { scheme } => write!(f, "formula is not an instance of {scheme}"),
            DiagnosticKind::NotInContext => write!(f, "hypothesis not in context"),
            DiagnosticKind::BadReference { target } => write!(f, "reference to line {target} is not an earlier line"),
            DiagnosticKind::MajorNotImplication { target } => write!(f, "line {target} is not an implication"),
            DiagnosticKind::MinorMismatch { minor, major } => {
                write!(f, "line {minor} is not the antecedent of line {major}")
            }
            DiagnosticKind::ConclusionMismatch { expected } => write!(f, "expected {expected}"),
            DiagnosticKind::BadShape { target } => write!(f, "line {target} has the wrong shape for this rule"),
            DiagnosticKind::VariableFree { var, place } => write!(f, "{var} free in {place}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Checks every line of `proof` against `system`, collecting all problems.
pub fn check_proof(proof: &HilbertProof, system: SystemId) -> CheckReport {
    let mut diagnostics = Vec::new();
    if proof.lines.is_empty() {
        diagnostics.push(Diagnostic { line: 0, kind: DiagnosticKind::EmptyProof });
    }
    for (i, line) in proof.lines.iter().enumerate() {
        let n = i + 1;
        if let Err(kind) = check_line(proof, system, n, line) {
            diagnostics.push(Diagnostic { line: n, kind });
        }
    }
    CheckReport { diagnostics }
}

fn earlier(proof: &HilbertProof, n: usize, target: usize) -> Result<&Formula, DiagnosticKind> {
    if target == 0 || target >= n {
        return Err(DiagnosticKind::BadReference { target });
    }
    Ok(&proof.lines[target - 1].formula)
}

fn check_line(proof: &HilbertProof, system: SystemId, n: usize, line: &Line) -> Result<(), DiagnosticKind> {
    let phi = &line.formula;
    match &line.justification {
        Justification::Axiom { scheme, inst } => {
            if !system.admits(*scheme) {
                return Err(DiagnosticKind::SchemeNotInSystem { scheme: *scheme, system });
            }
            let ok = match inst {
                Some(inst) => scheme.scheme().instantiate(inst).is_ok_and(|f| f == *phi),
                None => matches_scheme(phi, *scheme).is_some(),
            };
            if ok {
                Ok(())
            } else {
                Err(DiagnosticKind::NotAnInstance { scheme: *scheme })
            }
        }
        Justification::Hypothesis => {
            if proof.context.contains(phi) {
                Ok(())
            } else {
                Err(DiagnosticKind::NotInContext)
            }
        }
        Justification::ModusPonens(minor, major) => {
            let a = earlier(proof, n, *minor)?;
            let m = earlier(proof, n, *major)?;
            let (ant, cons) = m.as_imp().ok_or(DiagnosticKind::MajorNotImplication { target: *major })?;
            if ant != a {
                return Err(DiagnosticKind::MinorMismatch { minor: *minor, major: *major });
            }
            if cons != phi {
                return Err(DiagnosticKind::ConclusionMismatch { expected: cons.clone() });
            }
            Ok(())
        }
        Justification::Generalization(j, x) => {
            let prem = earlier(proof, n, *j)?;
            let (psi, body) = prem.as_imp().ok_or(DiagnosticKind::BadShape { target: *j })?;
            let expected = Formula::imp(psi.clone(), Formula::forall(x.clone(), body.clone()));
            if *phi != expected {
                return Err(DiagnosticKind::ConclusionMismatch { expected });
            }
            if psi.has_free(x) {
                return Err(DiagnosticKind::VariableFree { var: x.clone(), place: "antecedent" });
            }
            Ok(())
        }
        Justification::ExistentialInstantiation(j, x) => {
            let prem = earlier(proof, n, *j)?;
            let (body, psi) = prem.as_imp().ok_or(DiagnosticKind::BadShape { target: *j })?;
            let expected = Formula::imp(Formula::exists(x.clone(), body.clone()), psi.clone());
            if *phi != expected {
                return Err(DiagnosticKind::ConclusionMismatch { expected });
            }
            if psi.has_free(x) {
                return Err(DiagnosticKind::VariableFree { var: x.clone(), place: "consequent" });
            }
            Ok(())
        }
    }
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
            .with_predicate("p", 0)
            .unwrap()
            .with_predicate("q", 0)
            .unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    fn line(s: &str, j: Justification) -> Line {
        Line { formula: f(s), justification: j }
    }

    fn ax(s: SchemeId) -> Justification {
        Justification::Axiom { scheme: s, inst: None }
    }

    #[test]
    fn accepts_modus_ponens_from_context() {
        let mut pf = HilbertProof::new(SystemId::I, vec![f("p"), f("p -> q")]);
        pf.lines.push(line("p", Justification::Hypothesis));
        pf.lines.push(line("p -> q", Justification::Hypothesis));
        pf.lines.push(line("q", Justification::ModusPonens(1, 2)));
        assert!(check_proof(&pf, SystemId::I).accepted());
    }

    #[test]
    fn generalization_side_condition() {
        let mut pf = HilbertProof::new(SystemId::I, vec![f("P(x) -> P(x)")]);
        pf.lines.push(line("P(x) -> P(x)", Justification::Hypothesis));
        pf.lines.push(line("P(x) -> forall x P(x)", Justification::Generalization(1, "x".into())));
        let report = check_proof(&pf, SystemId::I);
        assert_eq!(report.diagnostics.len(), 1);
        assert_eq!(report.diagnostics[0].line, 2);
        assert_eq!(report.diagnostics[0].to_string(), "line 2: x free in antecedent");
    }

    #[test]
    fn rejects_dne_in_intuitionistic_system() {
        let mut pf = HilbertProof::new(SystemId::I, vec![]);
        pf.lines.push(line("~~p -> p", ax(SchemeId::Dne)));
        assert!(!check_proof(&pf, SystemId::I).accepted());
        assert!(check_proof(&pf, SystemId::C).accepted());
    }

    #[test]
    fn rejects_forward_references() {
        let mut pf = HilbertProof::new(SystemId::I, vec![f("p")]);
        pf.lines.push(line("p", Justification::ModusPonens(1, 2)));
        assert!(!check_proof(&pf, SystemId::I).accepted());
        assert!(!check_proof(&HilbertProof::new(SystemId::I, vec![]), SystemId::I).accepted());
    }
}
