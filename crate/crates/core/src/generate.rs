//! Exhaustive and seeded random generators for formulas, Hilbert proofs,
//! elaborator inputs and atomic systems.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::atomic::{AtomicRule, AtomicSystem, Premise};
use crate::hilbert::{HilbertProof, ProofBuilder, SchemeId, SystemId};
use crate::syntax::{Atom, BinOp, Formula, Term};

/// Every propositional formula over `atoms` built from `bot`, `&`, `|` and
/// `->` whose weight is at most `max`, in order of weight.
pub fn formulas_up_to_weight(atoms: &[Atom], max: usize) -> Vec<Formula> {
    let mut by_weight: Vec<Vec<Formula>> = Vec::with_capacity(max + 1);
    for w in 0..=max {
        let mut layer = Vec::new();
        if w == 0 {
            layer.extend(atoms.iter().cloned().map(Formula::Atom));
        }
        if w == 1 {
            layer.push(Formula::Bot);
        }
        if w >= 1 {
            for wl in 0..w {
                let wr = w - 1 - wl;
                for op in [BinOp::And, BinOp::Or, BinOp::Imp] {
                    for l in &by_weight[wl] {
                        for r in &by_weight[wr] {
                            layer.push(Formula::Bin(op, Box::new(l.clone()), Box::new(r.clone())));
                        }
                    }
                }
            }
        }
        by_weight.push(layer);
    }
    by_weight.into_iter().flatten().collect()
}

/// A random propositional formula over `atoms` of depth at most `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[Atom], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.1) { Formula::Bot } else { Formula::Atom(atoms.choose(rng).expect("atoms").clone()) };
    }
    let op = *[BinOp::And, BinOp::Or, BinOp::Imp].choose(rng).expect("ops");
    Formula::Bin(op, Box::new(random_formula(rng, atoms, depth - 1)), Box::new(random_formula(rng, atoms, depth - 1)))
}

/// A random atomic system over `atoms` with at most `rules` rules, each with
/// at most `premises` premises carrying at most `hyps` hypotheses.
pub fn random_system<R: Rng>(rng: &mut R, atoms: &[Atom], rules: usize, premises: usize, hyps: usize) -> AtomicSystem {
    let n = rng.gen_range(0..=rules);
    let rules: Vec<AtomicRule> = (0..n)
        .map(|_| {
            let ps: Vec<Premise> = (0..rng.gen_range(0..=premises))
                .map(|_| {
                    let k = rng.gen_range(0..=hyps);
                    let hs: Vec<Atom> = atoms.choose_multiple(rng, k).cloned().collect();
                    Premise::new(hs, atoms.choose(rng).expect("atoms").clone())
                })
                .collect();
            AtomicRule::new(ps, atoms.choose(rng).expect("atoms").clone())
        })
        .collect();
    AtomicSystem::from_rules(rules)
}

/// Grows a checking proof from `context` by `steps` random moves: stating
/// hypotheses, weakening lines with `K`, distributing with `S`, introducing
/// conjunctions and disjunctions, applying modus ponens, and vacuous
/// generalization and instantiation over `x`.
pub fn random_proof<R: Rng>(rng: &mut R, system: SystemId, context: &[Formula], atoms: &[Atom], steps: usize) -> HilbertProof {
    let mut b = ProofBuilder::new(system, context.to_vec());
    extend_random(rng, &mut b, context, atoms, steps);
    if b.len() == 0 {
        let f = random_formula(rng, atoms, 1);
        b.identity(&f).expect("identity");
    }
    b.finish()
}

fn extend_random<R: Rng>(rng: &mut R, b: &mut ProofBuilder, context: &[Formula], atoms: &[Atom], steps: usize) {
    for _ in 0..steps {
        let n = b.len();
        let pick = |rng: &mut R| rng.gen_range(1..=n);
        let other = random_formula(rng, atoms, 1);
        let done = match rng.gen_range(0..8) {
            0 if !context.is_empty() => Some(b.hyp(context.choose(rng).expect("context"))),
            1 if n > 0 => b.weaken(&other, pick(rng)).ok(),
            2 if n > 0 => s_anywhere(rng, b),
            3 if n > 0 => {
                let (i, j) = (pick(rng), pick(rng));
                let (fi, fj) = (b.formula(i).clone(), b.formula(j).clone());
                let pair = b.axiom(SchemeId::AndI, &[&fi, &fj]).ok();
                pair.and_then(|p| b.mp(i, p).ok()).and_then(|m| b.mp(j, m).ok())
            }
            4 if n > 0 => {
                let i = pick(rng);
                let f = b.formula(i).clone();
                let (scheme, parts) =
                    if rng.gen_bool(0.5) { (SchemeId::OrI1, [&f, &other]) } else { (SchemeId::OrI2, [&other, &f]) };
                b.axiom(scheme, &parts).ok().and_then(|a| b.mp(i, a).ok())
            }
            5 if n > 0 => {
                let i = pick(rng);
                if b.formula(i).as_imp().is_some() {
                    if rng.gen_bool(0.5) {
                        b.gen(i, "x").ok()
                    } else {
                        b.exi(i, "x").ok()
                    }
                } else {
                    None
                }
            }
            6 => {
                let f = random_formula(rng, atoms, 1);
                b.identity(&f).ok()
            }
            _ => mp_anywhere(rng, b),
        };
        if done.is_none() && n > 0 {
            let f = b.formula(rng.gen_range(1..=n)).clone();
            let _ = b.weaken(&other, n).ok().or_else(|| b.identity(&f).ok());
        }
    }
}

/// Combines a line `a -> (b -> c)` with a line `a -> b` through `S`.
fn s_anywhere<R: Rng>(rng: &mut R, b: &mut ProofBuilder) -> Option<usize> {
    let n = b.len();
    let mut pairs = Vec::new();
    for l in 1..=n {
        let Some((a, bc)) = b.formula(l).as_imp() else { continue };
        let Some((bf, _)) = bc.as_imp() else { continue };
        let ab = Formula::imp(a.clone(), bf.clone());
        pairs.extend((1..=n).filter(|&m| *b.formula(m) == ab).map(|m| (l, m)));
    }
    let &(l, m) = pairs.choose(rng)?;
    b.s_apply(l, m).ok()
}

/// Applies modus ponens to a random pair of lines that admits it.
fn mp_anywhere<R: Rng>(rng: &mut R, b: &mut ProofBuilder) -> Option<usize> {
    let n = b.len();
    let mut pairs = Vec::new();
    for j in 1..=n {
        if let Some((a, _)) = b.formula(j).as_imp() {
            for i in 1..=n {
                if b.formula(i) == a {
                    pairs.push((i, j));
                }
            }
        }
    }
    let &(i, j) = pairs.choose(rng)?;
    b.mp(i, j).ok()
}

/// Inputs for the deduction elaborator: a proof whose context holds `hyp`.
#[derive(Debug, Clone)]
pub struct DeductionCase {
    pub proof: HilbertProof,
    pub hyp: Formula,
}

pub fn random_deduction_case<R: Rng>(rng: &mut R, system: SystemId, atoms: &[Atom], steps: usize) -> DeductionCase {
    let hyp = random_formula(rng, atoms, 2);
    let mut context = vec![hyp.clone()];
    if rng.gen_bool(0.5) {
        let extra = random_formula(rng, atoms, 1);
        if extra != hyp {
            context.push(extra);
        }
    }
    let mut b = ProofBuilder::new(system, context.clone());
    b.hyp(&hyp);
    extend_random(rng, &mut b, &context, atoms, steps);
    DeductionCase { proof: b.finish(), hyp }
}

/// Inputs for disjunction elimination: proofs of `a | b`, of `chi` from `a`
/// and of `chi` from `b`.
#[derive(Debug, Clone)]
pub struct OrElimCase {
    pub disjunction: HilbertProof,
    pub left: HilbertProof,
    pub right: HilbertProof,
}

pub fn random_or_elim_case<R: Rng>(rng: &mut R, system: SystemId, atoms: &[Atom], steps: usize) -> OrElimCase {
    let a = random_formula(rng, atoms, 1);
    let bf = random_formula(rng, atoms, 1);
    let disj = Formula::or(a.clone(), bf.clone());
    let disjunction = if rng.gen_bool(0.5) {
        let mut b = ProofBuilder::new(system, vec![disj.clone()]);
        b.hyp(&disj);
        b.finish()
    } else {
        let mut b = ProofBuilder::new(system, vec![a.clone()]);
        let l = b.hyp(&a);
        let i = b.axiom(SchemeId::OrI1, &[&a, &bf]).expect("instance");
        b.mp(l, i).expect("mp");
        b.finish()
    };
    let case = |rng: &mut R, h: &Formula| {
        let mut b = ProofBuilder::new(system, vec![h.clone()]);
        b.hyp(h);
        extend_random(rng, &mut b, std::slice::from_ref(h), atoms, steps);
        b
    };
    let (mut lb, mut rb) = (case(rng, &a), case(rng, &bf));
    let (psi1, psi2) = (lb.formula(lb.len()).clone(), rb.formula(rb.len()).clone());
    let i1 = lb.axiom(SchemeId::OrI1, &[&psi1, &psi2]).expect("instance");
    lb.mp(i1 - 1, i1).expect("mp");
    let i2 = rb.axiom(SchemeId::OrI2, &[&psi1, &psi2]).expect("instance");
    rb.mp(i2 - 1, i2).expect("mp");
    OrElimCase { disjunction, left: lb.finish(), right: rb.finish() }
}

/// Inputs for ex falso: a proof of `bot` and the formula to conclude.
#[derive(Debug, Clone)]
pub struct EfqCase {
    pub proof: HilbertProof,
    pub goal: Formula,
}

pub fn random_efq_case<R: Rng>(rng: &mut R, system: SystemId, atoms: &[Atom], steps: usize) -> EfqCase {
    let q = random_formula(rng, atoms, 1);
    let neg = Formula::not(q.clone());
    let context = vec![q.clone(), neg.clone()];
    let mut b = ProofBuilder::new(system, context.clone());
    extend_random(rng, &mut b, &context, atoms, steps);
    let l = b.hyp(&q);
    let r = b.hyp(&neg);
    b.mp(l, r).expect("mp");
    EfqCase { proof: b.finish(), goal: random_formula(rng, atoms, 2) }
}

/// Inputs for existential elimination: a proof of `exists x P(x)`, a proof
/// of `chi` from `P(w)`, and the witness `w`.
#[derive(Debug, Clone)]
pub struct ExistsElimCase {
    pub existential: HilbertProof,
    pub case: HilbertProof,
    pub witness: Term,
}

pub fn random_exists_elim_case<R: Rng>(rng: &mut R, system: SystemId, atoms: &[Atom], steps: usize) -> ExistsElimCase {
    let witness = Term::constant("w");
    let body = Formula::atom("P", vec![Term::var("x")]);
    let ex = Formula::exists("x", body.clone());
    let existential = if rng.gen_bool(0.5) {
        let mut b = ProofBuilder::new(system, vec![ex.clone()]);
        b.hyp(&ex);
        b.finish()
    } else {
        let c = Term::constant("c");
        let pc = body.subst_closed("x", &c);
        let mut b = ProofBuilder::new(system, vec![pc.clone()]);
        let l = b.hyp(&pc);
        let i = b.quantified_axiom(SchemeId::ExI, &body, "x", &c).expect("instance");
        b.mp(l, i).expect("mp");
        b.finish()
    };
    let pw = body.subst_closed("x", &witness);
    let mut b = ProofBuilder::new(system, vec![pw.clone()]);
    let l = b.hyp(&pw);
    let i = b.quantified_axiom(SchemeId::ExI, &body, "x", &witness).expect("instance");
    b.mp(l, i).expect("mp");
    extend_random(rng, &mut b, std::slice::from_ref(&pw), atoms, steps);
    // Cut back to the last line free of the witness.
    let mut case = b.finish();
    let keep = case.lines.iter().rposition(|l| !l.formula.contains_term(&witness)).expect("line 3 is witness-free");
    case.lines.truncate(keep + 1);
    ExistsElimCase { existential, case, witness }
}

/// `n` nullary atoms named `p`, `q`, `r`, `s`, ... then `a4`, `a5`, ...
pub fn prop_atoms(n: usize) -> Vec<Atom> {
    const NAMES: [&str; 4] = ["p", "q", "r", "s"];
    (0..n).map(|i| Atom::prop(NAMES.get(i).map_or_else(|| format!("a{i}"), |s| s.to_string()))).collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use std::collections::BTreeSet;

    use super::*;
    use crate::hilbert::check_proof;

    #[test]
    fn weight_layers() {
        let atoms = prop_atoms(1);
        let fs = formulas_up_to_weight(&atoms, 1);
        // p, bot, and the three connectives over p.
        assert_eq!(fs.len(), 5);
        assert!(fs.iter().all(|f| f.weight() <= 1));
        let fs = formulas_up_to_weight(&prop_atoms(3), 2);
        assert_eq!(fs.len(), 3 + 28 + 504);
        assert_eq!(fs.iter().collect::<BTreeSet<_>>().len(), fs.len());
    }

    #[test]
    fn random_proofs_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let atoms = prop_atoms(3);
        for _ in 0..50 {
            let pf = random_proof(&mut rng, SystemId::I, &[Formula::Atom(atoms[0].clone())], &atoms, 8);
            assert!(check_proof(&pf, SystemId::I).accepted(), "{pf:?}");
            let d = random_deduction_case(&mut rng, SystemId::I, &atoms, 6);
            assert!(check_proof(&d.proof, SystemId::I).accepted());
            let o = random_or_elim_case(&mut rng, SystemId::I, &atoms, 4);
            for p in [&o.disjunction, &o.left, &o.right] {
                assert!(check_proof(p, SystemId::I).accepted());
            }
            let e = random_efq_case(&mut rng, SystemId::I, &atoms, 4);
            assert!(check_proof(&e.proof, SystemId::I).accepted());
            let x = random_exists_elim_case(&mut rng, SystemId::I, &atoms, 4);
            assert!(check_proof(&x.existential, SystemId::I).accepted());
            assert!(check_proof(&x.case, SystemId::I).accepted());
        }
    }

    #[test]
    fn random_systems_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let atoms = prop_atoms(6);
        for _ in 0..100 {
            let sys = random_system(&mut rng, &atoms, 10, 2, 2);
            assert!(sys.len() <= 10);
            assert!(sys.rules().iter().all(|r| r.premises.len() <= 2 && r.premises.iter().all(|p| p.hyps.len() <= 2)));
        }
    }
}
