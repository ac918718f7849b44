use std::collections::BTreeSet;

use super::natural::{NaturalBase, Schema};
use super::SimulationError;
use crate::atomic::{BaseDerivation, Step};
use crate::hilbert::{
    check_proof, derive_efq, derive_exists_elim, derive_or_elim, is_axiom_instance, ElabError, HilbertProof, Justification,
    Line, ProofBuilder,
};
use crate::syntax::{Atom, Formula, Quant};

/// Compiles a derivation in a natural base into a Hilbert proof of the
/// decoded sequent: the left decoding of the context proves the right
/// decoding of the conclusion, in C for variant K and in I for variant J.
///
/// Context atoms must be flats of closed formulas without eigenvariables, or
/// atoms outside the image of the flat map.
pub fn extract_hilbert(d: &BaseDerivation, nb: &NaturalBase) -> Result<HilbertProof, SimulationError> {
    let fm = nb.flat_map();
    for a in &d.context {
        if fm.formula_of(a).is_some_and(|f| fm.has_eigen(f)) {
            return Err(SimulationError::SideCondition {
                node: "root".into(),
                msg: format!("context atom {a} flattens a formula with eigenvariables"),
            });
        }
    }
    let pf = Extractor { nb }.node(d, "root")?;
    let report = check_proof(&pf, pf.system);
    if !report.accepted() {
        return Err(SimulationError::Elab { node: "root".into(), source: ElabError::Rejected(report.diagnostics) });
    }
    Ok(pf)
}

struct Extractor<'a> {
    nb: &'a NaturalBase,
}

impl Extractor<'_> {
    fn sharp_l(&self, a: &Atom, node: &str) -> Result<Formula, SimulationError> {
        self.nb.flat_map().sharp_l(a).map_err(|msg| decoder(node, a, msg))
    }

    fn sharp_r(&self, a: &Atom, node: &str) -> Result<Formula, SimulationError> {
        self.nb.flat_map().sharp_r(a).map_err(|msg| decoder(node, a, msg))
    }

    fn context(&self, atoms: &BTreeSet<Atom>, node: &str) -> Result<Vec<Formula>, SimulationError> {
        let set: BTreeSet<Formula> = atoms.iter().map(|a| self.sharp_l(a, node)).collect::<Result<_, _>>()?;
        Ok(set.into_iter().collect())
    }

    fn node(&self, d: &BaseDerivation, node: &str) -> Result<HilbertProof, SimulationError> {
        let system = self.nb.variant().system();
        let context = self.context(&d.context, node)?;
        let goal = self.sharp_r(&d.conclusion, node)?;
        let side = |msg: String| SimulationError::SideCondition { node: node.to_string(), msg };
        let elab = |source: ElabError| SimulationError::Elab { node: node.to_string(), source };

        let Step::App { rule, premises } = &d.step else {
            if !context.contains(&goal) {
                return Err(side(format!("{goal} is not among the decoded hypotheses")));
            }
            let mut pf = HilbertProof::new(system, context);
            pf.lines.push(Line { formula: goal, justification: Justification::Hypothesis });
            return Ok(pf);
        };
        let sub = |i: usize| self.node(&premises[i], &format!("{node}.{i}"));
        let schema = self.nb.origin(*rule);
        let mut pf = match schema {
            Schema::Mp => {
                let (minor, major) = (sub(0)?, sub(1)?);
                let mut b = ProofBuilder::new(system, context.clone());
                let l0 = b.append(&minor);
                let l1 = b.append(&major);
                b.mp(l0, l1).map_err(elab)?;
                b.finish()
            }
            Schema::Gen => {
                let premise = sub(0)?;
                let Some((ant, Formula::Quant(Quant::Forall, x, _))) = goal.as_imp() else {
                    return Err(side(format!("{goal} is not a generalization")));
                };
                if ant.has_free(x) {
                    return Err(side(format!("{x} is free in {ant}")));
                }
                let mut b = ProofBuilder::new(system, context.clone());
                let l = b.append(&premise);
                b.gen(l, x).map_err(elab)?;
                b.finish()
            }
            Schema::Efq => derive_efq(&sub(0)?, &goal).map_err(elab)?,
            Schema::OrE => {
                let (left, right, disj) = (sub(0)?, sub(1)?, sub(2)?);
                derive_or_elim(&disj, &left, &right).map_err(elab)?
            }
            Schema::ExE => {
                let (ex, case) = (sub(0)?, sub(1)?);
                let Some(Formula::Quant(Quant::Exists, x, body)) = ex.conclusion() else {
                    return Err(side("major premise is not an existential".into()));
                };
                let witness = self.nb.system().rule(*rule).premises[1]
                    .hyps
                    .iter()
                    .filter_map(|a| self.nb.flat_map().formula_of(a))
                    .find_map(|w| self.nb.flat_map().witnesses().iter().find(|t| body.subst_closed(x, t) == *w))
                    .ok_or_else(|| side("no witness hypothesis in the minor premise".into()))?;
                if context.contains(&body.subst_closed(x, witness)) {
                    // The witness hypothesis is already available.
                    case
                } else {
                    derive_exists_elim(&ex, &case, witness).map_err(elab)?
                }
            }
            _ => {
                let Some((scheme, inst)) = is_axiom_instance(&goal, system) else {
                    return Err(side(format!("{goal} is not an axiom of {system}")));
                };
                let mut b = ProofBuilder::new(system, context.clone());
                b.axiom_with(goal.clone(), scheme, Some(inst));
                b.finish()
            }
        };
        if pf.conclusion() != Some(&goal) {
            let found = pf.conclusion().cloned().unwrap_or(Formula::Bot);
            return Err(side(format!("extracted {found} where {goal} was expected")));
        }
        pf.context = context;
        Ok(pf)
    }
}

fn decoder(node: &str, atom: &Atom, msg: String) -> SimulationError {
    SimulationError::Decoder { node: node.to_string(), atom: atom.to_string(), msg }
}
