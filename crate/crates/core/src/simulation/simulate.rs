use std::collections::BTreeSet;

use super::natural::{NaturalBase, Schema};
use super::SimulationError;
use crate::atomic::{validate_derivation, AtomicRule, BaseDerivation, Step};
use crate::hilbert::{check_proof, HilbertProof, Justification};
use crate::syntax::{Atom, Formula};

/// Translates a checked Hilbert proof into a derivation of the flat of its
/// conclusion from the flats of its context. Axiom lines become zero-level
/// rule applications, modus ponens `flat(MP)` and generalization `flat(GEN)`.
pub fn simulate_hilbert(pf: &HilbertProof, nb: &NaturalBase) -> Result<BaseDerivation, SimulationError> {
    let report = check_proof(pf, nb.variant().system());
    if !report.accepted() {
        return Err(SimulationError::ProofRejected(report.diagnostics));
    }
    let fm = nb.flat_map();
    let flat = |line: usize, f: &Formula| fm.flat(f).ok_or_else(|| SimulationError::OutsideDomain { line, formula: f.clone() });
    let context: BTreeSet<Atom> = pf.context.iter().map(|g| flat(0, g)).collect::<Result<_, _>>()?;

    let mut ders: Vec<BaseDerivation> = Vec::with_capacity(pf.lines.len());
    for (i, line) in pf.lines.iter().enumerate() {
        let n = i + 1;
        let conclusion = flat(n, &line.formula)?;
        let app = |rule: AtomicRule, premises: Vec<BaseDerivation>| {
            let rule = nb.rule_index(&rule).ok_or_else(|| SimulationError::OutsideDomain { line: n, formula: line.formula.clone() })?;
            Ok::<Step, SimulationError>(Step::App { rule, premises })
        };
        let step = match &line.justification {
            Justification::Hypothesis => Step::Ref,
            Justification::Axiom { scheme, .. } => {
                if !nb.variant().simulates_axiom(*scheme) {
                    return Err(SimulationError::SchemeNotInVariant { line: n, scheme: *scheme, variant: nb.variant() });
                }
                app(AtomicRule::fact(conclusion.clone()), vec![])?
            }
            Justification::ModusPonens(minor, major) => {
                let (a, b) = (&ders[minor - 1], &ders[major - 1]);
                let rule = AtomicRule::first([a.conclusion.clone(), b.conclusion.clone()], conclusion.clone());
                app(rule, vec![a.clone(), b.clone()])?
            }
            Justification::Generalization(k, _) => {
                let a = &ders[k - 1];
                let rule = AtomicRule::first([a.conclusion.clone()], conclusion.clone());
                let step = app(rule, vec![a.clone()])?;
                if let Step::App { rule, .. } = &step {
                    debug_assert_eq!(nb.origin(*rule), Schema::Gen);
                }
                step
            }
            Justification::ExistentialInstantiation(..) => {
                return Err(SimulationError::UnsupportedRule { line: n, rule: "existential instantiation" });
            }
        };
        ders.push(BaseDerivation { context: context.clone(), conclusion, step });
    }
    let d = ders.pop().ok_or(SimulationError::ProofRejected(report.diagnostics))?;
    validate_derivation(nb.system(), &d).map_err(SimulationError::InvalidDerivation)?;
    Ok(d)
}
