use std::collections::BTreeSet;

use super::axioms::SchemeId;
use super::builder::ProofBuilder;
use super::proof::{check_proof, HilbertProof, Justification, Line};
use super::ElabError;
use crate::syntax::{Formula, Term};

fn checked(pf: &HilbertProof) -> Result<&Formula, ElabError> {
    let report = check_proof(pf, pf.system);
    if !report.accepted() {
        return Err(ElabError::Rejected(report.diagnostics));
    }
    Ok(pf.conclusion().expect("accepted proofs are non-empty"))
}

fn without(context: &[Formula], f: &Formula) -> Vec<Formula> {
    context.iter().filter(|g| *g != f).cloned().collect()
}

/// Turns a proof of `psi` from `context` into a proof of `hyp -> psi` from
/// `context` without `hyp`. Lines that do not depend on `hyp` are copied and
/// weakened only when needed, so generalizing over a variable free in `hyp`
/// fails only when the generalized line actually uses `hyp`.
pub fn deduction_elaborate(pf: &HilbertProof, hyp: &Formula) -> Result<HilbertProof, ElabError> {
    checked(pf)?;
    let mut b = ProofBuilder::new(pf.system, without(&pf.context, hyp));
    let n = pf.lines.len();
    // plain[k]: new line proving line k itself (independent lines only).
    // imp[k]: new line proving hyp -> line k.
    let mut plain: Vec<Option<usize>> = vec![None; n + 1];
    let mut imp: Vec<Option<usize>> = vec![None; n + 1];

    let lift = |b: &mut ProofBuilder, plain: &[Option<usize>], imp: &mut [Option<usize>], k: usize| {
        if let Some(l) = imp[k] {
            return Ok(l);
        }
        let l = b.weaken(hyp, plain[k].expect("independent line"))?;
        imp[k] = Some(l);
        Ok::<usize, ElabError>(l)
    };

    for (idx, Line { formula, justification }) in pf.lines.iter().enumerate() {
        let k = idx + 1;
        match justification {
            Justification::Hypothesis if formula == hyp => {
                imp[k] = Some(b.identity(hyp)?);
            }
            Justification::Hypothesis => plain[k] = Some(b.hyp(formula)),
            Justification::Axiom { scheme, inst } => {
                plain[k] = Some(b.axiom_with(formula.clone(), *scheme, inst.clone()));
            }
            Justification::ModusPonens(i, j) => {
                if let (Some(pi), Some(pj)) = (plain[*i], plain[*j]) {
                    plain[k] = Some(b.mp(pi, pj)?);
                } else {
                    let li = lift(&mut b, &plain, &mut imp, *i)?;
                    let lj = lift(&mut b, &plain, &mut imp, *j)?;
                    imp[k] = Some(b.s_apply(lj, li)?);
                }
            }
            Justification::Generalization(i, x) => {
                if let Some(pi) = plain[*i] {
                    plain[k] = Some(b.gen(pi, x)?);
                    continue;
                }
                if hyp.has_free(x) {
                    return Err(ElabError::DischargedVariable { line: k, var: x.clone() });
                }
                // Line i is psi -> a; from hyp -> (psi -> a) build
                // hyp -> (psi -> forall x a) through c = hyp & psi.
                let li = imp[*i].expect("dependent line");
                let psi = pf.lines[*i - 1].formula.as_imp().expect("checked").0.clone();
                let c = Formula::and(hyp.clone(), psi.clone());
                let c1 = b.axiom(SchemeId::AndE1, &[hyp, &psi])?;
                let c2 = b.axiom(SchemeId::AndE2, &[hyp, &psi])?;
                let l = b.compose(c1, li)?;
                let m = b.s_apply(l, c2)?;
                let g = b.gen(m, x)?;
                let pair = b.axiom(SchemeId::AndI, &[hyp, &psi])?;
                let lifted = b.weaken(&psi, g)?;
                let s_target = b.formula(g).as_imp().expect("gen output").1.clone();
                let s = b.axiom(SchemeId::S, &[&psi, &c, &s_target])?;
                let s2 = b.mp(lifted, s)?;
                imp[k] = Some(b.compose(pair, s2)?);
            }
            Justification::ExistentialInstantiation(i, x) => {
                if let Some(pi) = plain[*i] {
                    plain[k] = Some(b.exi(pi, x)?);
                    continue;
                }
                if hyp.has_free(x) {
                    return Err(ElabError::DischargedVariable { line: k, var: x.clone() });
                }
                let li = imp[*i].expect("dependent line");
                let p = b.perm(li)?;
                let e = b.exi(p, x)?;
                imp[k] = Some(b.perm(e)?);
            }
        }
    }
    lift(&mut b, &plain, &mut imp, n)?;
    Ok(b.finish())
}

fn union(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
    let mut out = a.to_vec();
    for f in b {
        if !out.contains(f) {
            out.push(f.clone());
        }
    }
    out
}

fn same_system(pfs: &[&HilbertProof]) -> Result<(), ElabError> {
    if pfs.windows(2).all(|w| w[0].system == w[1].system) {
        Ok(())
    } else {
        Err(ElabError::SystemMismatch)
    }
}

/// From proofs of `phi | psi`, of `chi` using `phi`, and of `chi` using
/// `psi`, builds a proof of `chi`. The context is the union of the three
/// contexts with the discharged hypotheses removed.
pub fn derive_or_elim(pf0: &HilbertProof, pf1: &HilbertProof, pf2: &HilbertProof) -> Result<HilbertProof, ElabError> {
    same_system(&[pf0, pf1, pf2])?;
    let disj = checked(pf0)?;
    let Formula::Bin(crate::syntax::BinOp::Or, phi, psi) = disj else {
        return Err(ElabError::Shape(format!("expected a disjunction, found {disj}")));
    };
    let chi = checked(pf1)?;
    if checked(pf2)? != chi {
        return Err(ElabError::Shape("the two case proofs have different conclusions".into()));
    }
    let d1 = deduction_elaborate(pf1, phi)?;
    let d2 = deduction_elaborate(pf2, psi)?;
    let mut b = ProofBuilder::new(pf0.system, union(&union(&pf0.context, &d1.context), &d2.context));
    let l0 = b.append(pf0);
    let l1 = b.append(&d1);
    let l2 = b.append(&d2);
    let ax = b.axiom(SchemeId::OrE, &[phi, psi, chi])?;
    let m1 = b.mp(l1, ax)?;
    let m2 = b.mp(l2, m1)?;
    b.mp(l0, m2)?;
    Ok(b.finish())
}

/// From a proof of `bot` builds a proof of `phi`.
pub fn derive_efq(pf: &HilbertProof, phi: &Formula) -> Result<HilbertProof, ElabError> {
    if *checked(pf)? != Formula::Bot {
        return Err(ElabError::Shape("expected a proof of bot".into()));
    }
    let mut b = ProofBuilder::new(pf.system, pf.context.clone());
    let l0 = b.append(pf);
    let id = b.identity(&Formula::Bot)?;
    let efq = b.axiom(SchemeId::Efq, &[&Formula::Bot, phi])?;
    let m = b.mp(id, efq)?;
    b.mp(l0, m)?;
    Ok(b.finish())
}

fn fresh_var(avoid: &BTreeSet<String>) -> String {
    (0..).map(|i| format!("v{i}")).find(|v| !avoid.contains(v)).expect("infinitely many names")
}

/// From a proof of `exists x phi` and a proof of `chi` that uses the
/// hypothesis `phi[x := t]`, builds a proof of `chi`. The closed term `t`
/// must not occur in `chi`, in `exists x phi`, or in any other hypothesis.
pub fn derive_exists_elim(pf0: &HilbertProof, pf1: &HilbertProof, t: &Term) -> Result<HilbertProof, ElabError> {
    same_system(&[pf0, pf1])?;
    let ex = checked(pf0)?;
    let Formula::Quant(crate::syntax::Quant::Exists, x, phi) = ex else {
        return Err(ElabError::Shape(format!("expected an existential, found {ex}")));
    };
    let chi = checked(pf1)?;
    if !t.is_closed() {
        return Err(ElabError::Shape(format!("witness {t} is not closed")));
    }
    let witness = phi.subst_closed(x, t);
    if !pf1.context.contains(&witness) {
        return Err(ElabError::MissingWitness { formula: witness });
    }
    let not_fresh = |place: String| ElabError::NotFresh { term: t.to_string(), place };
    if ex.contains_term(t) {
        return Err(not_fresh(ex.to_string()));
    }
    if chi.contains_term(t) {
        return Err(not_fresh(chi.to_string()));
    }
    let rest = union(&pf0.context, &without(&pf1.context, &witness));
    if let Some(g) = rest.iter().find(|g| g.contains_term(t)) {
        return Err(not_fresh(g.to_string()));
    }

    let d = deduction_elaborate(pf1, &witness)?;
    let mut avoid = BTreeSet::new();
    for l in pf0.lines.iter().chain(&d.lines) {
        avoid.extend(l.formula.all_vars());
    }
    avoid.insert(x.clone());
    let y = fresh_var(&avoid);
    let yv = Term::var(y.clone());
    let rewritten = replace_in_proof(&d, t, &yv)?;

    let phi_y = phi.subst_open(x, &yv).map_err(|_| ElabError::Internal("fresh variable captured"))?;
    let mut b = ProofBuilder::new(pf0.system, union(&pf0.context, &rewritten.context));
    let l0 = b.append(pf0);
    let r = b.append(&rewritten);
    let e1 = b.exi(r, &y)?;
    let intro = b.quantified_axiom(SchemeId::ExI, &phi_y, &y, &Term::var(x.clone()))?;
    let e2 = b.exi(intro, x)?;
    let c = b.compose(e2, e1)?;
    b.mp(l0, c)?;
    Ok(b.finish())
}

/// Replaces a closed term by a variable throughout a proof, including the
/// recorded instantiations.
fn replace_in_proof(pf: &HilbertProof, from: &Term, to: &Term) -> Result<HilbertProof, ElabError> {
    let rep = |f: &Formula| f.replace_term(from, to).map_err(|_| ElabError::Internal("replacement captured"));
    let mut out = HilbertProof::new(pf.system, pf.context.iter().map(rep).collect::<Result<_, _>>()?);
    for l in &pf.lines {
        let justification = match &l.justification {
            Justification::Axiom { scheme, inst } => {
                let inst = match inst {
                    Some(i) => Some(
                        i.try_map(|f| f.replace_term(from, to).ok(), |s| s.replace(from, to))
                            .ok_or(ElabError::Internal("replacement captured"))?,
                    ),
                    None => None,
                };
                Justification::Axiom { scheme: *scheme, inst }
            }
            j => j.clone(),
        };
        out.lines.push(Line { formula: rep(&l.formula)?, justification });
    }
    Ok(out)
}
