use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use super::extract::extract_hilbert;
use super::flat::{in_classical_fragment, make_flat_map_with, FlatMap};
use super::natural::{build_natural_base, NaturalBase};
use super::simulate::simulate_hilbert;
use super::{SimulationError, Variant};
use crate::atomic::{validate_derivation, BaseDerivation, Engine, Level};
use crate::hilbert::{check_proof, deduction_elaborate, format_proof, Diagnostic, HilbertProof};
use crate::syntax::{Atom, Formula, Signature};

/// Where the base derivation comes from.
#[derive(Debug, Clone)]
pub enum Source {
    /// Simulate this Hilbert proof.
    Proof(HilbertProof),
    /// Search the natural base exhaustively.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOptions {
    /// When the direct search fails on an implication, move its antecedent
    /// into the context and search again; antecedents are discharged on the
    /// Hilbert side by the deduction theorem.
    pub curry: bool,
    /// Admit `&` in the fragment of variant K.
    pub allow_conjunction_in_k: bool,
    /// Closed formulas whose subformulas join the slot set. Slots bound
    /// which axiom instances the finite base contains, so a theorem whose
    /// proofs need formulas outside the subformula closure of the sequent
    /// is derivable only once those formulas are added here.
    pub extra: Vec<Formula>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { curry: true, allow_conjunction_in_k: false, extra: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The extracted proof checks and proves the input sequent.
    Verified,
    /// The natural base has no derivation of the flat sequent.
    NoDerivation,
    /// The extracted proof does not check.
    Rejected(Vec<Diagnostic>),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => f.write_str("verified"),
            Verdict::NoDerivation => f.write_str("no derivation"),
            Verdict::Rejected(ds) => {
                write!(f, "rejected: {}", ds.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
            }
        }
    }
}

/// The sectioned report of a pipeline run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub sections: Vec<(&'static str, String)>,
}

impl Transcript {
    pub fn section(&self, name: &str) -> Option<&str> {
        self.sections.iter().find(|(n, _)| *n == name).map(|(_, body)| body.as_str())
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, body) in &self.sections {
            writeln!(f, "== {name} ==")?;
            f.write_str(body)?;
            if !body.ends_with('\n') {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub verdict: Verdict,
    pub proof: Option<HilbertProof>,
    pub derivation: Option<BaseDerivation>,
    pub base: NaturalBase,
    pub transcript: Transcript,
}

fn flats(fm: &FlatMap, fs: &[Formula]) -> Result<BTreeSet<Atom>, SimulationError> {
    fs.iter().map(|f| fm.flat(f).ok_or_else(|| SimulationError::OutsideDomain { line: 0, formula: f.clone() })).collect()
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Runs flattening, base construction, derivation, extraction and checking
/// for `gamma |> phi` and records every stage in a transcript.
///
/// Inputs are read as their universal closures. Variant K accepts only the
/// fragment `{bot, ->, forall}`. A proof source must prove `phi` from
/// hypotheses in `gamma`; a search that finds nothing yields
/// [`Verdict::NoDerivation`].
pub fn completeness_pipeline(
    gamma: &[Formula],
    phi: &Formula,
    variant: Variant,
    source: &Source,
    sig: &Signature,
    opts: &PipelineOptions,
) -> Result<PipelineOutcome, SimulationError> {
    let mut gamma: Vec<Formula> = gamma.iter().map(Formula::universal_closure).collect();
    let phi = phi.universal_closure();
    let mut extra: Vec<Formula> = opts.extra.iter().map(Formula::universal_closure).collect();
    if let Source::Proof(pf) = source {
        let found = pf.conclusion().cloned().unwrap_or(Formula::Bot);
        if found != phi {
            return Err(SimulationError::GoalMismatch { expected: phi, found });
        }
        for g in &pf.context {
            if !gamma.contains(g) {
                gamma.push(g.clone());
            }
        }
        extra.extend(pf.lines.iter().map(|l| l.formula.clone()));
    }
    if variant == Variant::K {
        for f in gamma.iter().chain(std::iter::once(&phi)).chain(&extra) {
            in_classical_fragment(f, opts.allow_conjunction_in_k)
                .map_err(|sign| SimulationError::Fragment { formula: f.clone(), sign })?;
        }
    }

    let fm = make_flat_map_with(&gamma, &phi, &extra, sig)?;
    let nb = build_natural_base(&fm, variant)?;
    let mut transcript = Transcript::default();
    transcript.sections.push(("FLATMAP", flatmap_section(&fm)));
    transcript.sections.push(("BASE", base_section(&nb)));

    let mut ctx = gamma.clone();
    let mut goal = phi.clone();
    let mut discharge: Vec<Formula> = Vec::new();
    let mut notes = String::new();
    let derivation = match source {
        Source::Proof(pf) => {
            let _ = writeln!(notes, "source: simulation of a {}-line proof", pf.len());
            Some(simulate_hilbert(pf, &nb)?)
        }
        Source::Search => {
            let mut engine = Engine::new(nb.system());
            // Second-level rules make every search expensive, and MP makes the
            // curried sequent derivable whenever the implication is, so such
            // bases curry before searching.
            let eager = opts.curry && !nb.is_first_level();
            loop {
                let (c, g) = (flats(nb.flat_map(), &ctx)?, flats(nb.flat_map(), std::slice::from_ref(&goal))?);
                let g = g.into_iter().next().expect("one goal");
                if !(eager && goal.as_imp().is_some()) {
                    let _ = writeln!(notes, "search: [{}] |- {g}", join(&c));
                    if let Some(d) = engine.derive(&c, &g) {
                        break Some(d);
                    }
                    let _ = writeln!(notes, "  not derivable ({} contexts saturated)", engine.contexts_explored());
                }
                match goal.as_imp() {
                    Some((a, b)) if opts.curry => {
                        let (a, b) = (a.clone(), b.clone());
                        let _ = writeln!(notes, "  moving antecedent {a} into the context");
                        if !ctx.contains(&a) {
                            ctx.push(a.clone());
                        }
                        discharge.push(a);
                        goal = b;
                    }
                    _ => break None,
                }
            }
        }
    };

    let Some(d) = derivation else {
        transcript.sections.push(("DERIVATION", notes + "no base derivation exists\n"));
        transcript.sections.push(("EXTRACTED-PROOF", "none\n".into()));
        transcript.sections.push(("VERDICT", format!("{}\n", Verdict::NoDerivation)));
        return Ok(PipelineOutcome { verdict: Verdict::NoDerivation, proof: None, derivation: None, base: nb, transcript });
    };
    validate_derivation(nb.system(), &d).map_err(SimulationError::InvalidDerivation)?;
    let _ = writeln!(notes, "{} nodes", d.size());
    notes.push_str(&d.render(nb.system()));
    transcript.sections.push(("DERIVATION", notes));

    let mut pf = extract_hilbert(&d, &nb)?;
    for a in discharge.iter().rev() {
        pf = deduction_elaborate(&pf, a).map_err(|source| SimulationError::Elab { node: "discharge".into(), source })?;
    }
    pf.context = gamma.clone();
    transcript.sections.push(("EXTRACTED-PROOF", format_proof(&pf)));

    let report = check_proof(&pf, variant.system());
    let verdict = if !report.accepted() {
        Verdict::Rejected(report.diagnostics)
    } else if pf.conclusion() != Some(&phi) {
        let found = pf.conclusion().cloned().unwrap_or(Formula::Bot);
        return Err(SimulationError::GoalMismatch { expected: phi, found });
    } else {
        Verdict::Verified
    };
    let mut v = format!("{verdict}");
    if verdict == Verdict::Verified {
        let lhs = join(&gamma);
        let _ = write!(v, ": {lhs}{}|- {} in {}", if lhs.is_empty() { "" } else { " " }, phi, variant.system());
    }
    transcript.sections.push(("VERDICT", v + "\n"));
    Ok(PipelineOutcome { verdict, proof: Some(pf), derivation: Some(d), base: nb, transcript })
}

fn flatmap_section(fm: &FlatMap) -> String {
    let mut s = String::new();
    let eigen = fm.eigenvariables().iter().map(|(x, c)| format!("{x} := {c}"));
    let _ = writeln!(s, "eigenvariables: {}", join(eigen));
    let _ = writeln!(s, "witnesses: {}", join(fm.witnesses()));
    let _ = writeln!(s, "terms: {}", join(fm.terms()));
    for f in fm.xi() {
        let _ = writeln!(s, "{} := {f}", fm.flat(f).expect("slot formulas are flattened"));
    }
    s
}

fn base_section(nb: &NaturalBase) -> String {
    let mut s = String::new();
    let second = nb.system().rules().iter().filter(|r| r.level() == Level::Second).count();
    let _ = writeln!(
        s,
        "variant {}: {} rules ({} second-level) over {} flattened formulas",
        nb.variant(),
        nb.len(),
        second,
        nb.flat_map().len()
    );
    for (schema, n) in nb.schema_counts() {
        let _ = writeln!(s, "{schema}: {n}");
    }
    s
}
