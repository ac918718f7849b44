//! Acceptance suite. Runs every criterion at its stated threshold and prints
//! one PASS or FAIL line per criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use bes_core::atomic::{brute_force_derives, validate_derivation, AtomicRule, AtomicSystem, Engine};
use bes_core::generate::{
    formulas_up_to_weight, prop_atoms, random_deduction_case, random_efq_case, random_exists_elim_case,
    random_or_elim_case, random_system,
};
use bes_core::hilbert::{
    check_proof, deduction_elaborate, derive_efq, derive_exists_elim, derive_or_elim, parse_proof, HilbertProof,
    SchemeId, SystemId,
};
use bes_core::simulation::{
    build_natural_base, check_flat_clauses, completeness_pipeline, make_flat_map, Clause, PipelineOptions, Source,
    Variant, Verdict,
};
use bes_core::support::{Basis, Harness};
use bes_core::syntax::{infer_signature, parse_formula, Atom, Formula, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

/// Name, time limit and check.
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden Hilbert suite", Some(Duration::from_secs(1)), golden_suite),
        ("elaborator soundness", Some(Duration::from_secs(30)), elaborators),
        ("derivability oracle equivalence", Some(Duration::from_secs(60)), oracle_equivalence),
        ("monotonicity", None, monotonicity),
        ("atomic cut and AtComp", None, atomic_cut),
        ("flat clause checks", Some(Duration::from_secs(120)), flat_clauses),
        ("completeness round trip", Some(Duration::from_secs(120)), round_trip),
        ("DNE separation", Some(Duration::from_secs(60)), dne_separation),
        ("soundness spot suite", None, soundness),
    ];
    println!("acceptance suite, seed {SEED}");
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = limit.filter(|l| elapsed > *l);
        let (status, detail) = match (&result, over) {
            (Ok(d), None) => ("PASS", d.clone()),
            (Ok(d), Some(l)) => ("FAIL", format!("{d}; took longer than {l:?}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        let bound = limit.map_or(String::new(), |l| format!(", limit {l:?}"));
        println!("{status} [{}] {name}: {detail} ({:.2?}{bound})", i + 1, elapsed);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_dir(kind: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(kind);
    let mut files: Vec<_> = fs::read_dir(&dir).expect("golden dir").map(|e| e.expect("entry").path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).expect("read")))
        .collect()
}

fn golden_suite() -> Outcome {
    let accept = golden_dir("accept");
    let reject = golden_dir("reject");
    ensure(accept.len() >= 15 && reject.len() == 10, || format!("{} accept and {} reject files", accept.len(), reject.len()))?;
    let mut used = BTreeSet::new();
    for (name, text) in &accept {
        let pf = parse_proof(text, None).map_err(|e| format!("{name}: {e}"))?;
        let report = check_proof(&pf, pf.system);
        ensure(report.accepted(), || format!("{name} rejected: {:?}", report.diagnostics))?;
        for l in &pf.lines {
            if let bes_core::hilbert::Justification::Axiom { scheme, .. } = l.justification {
                used.insert(scheme);
            }
        }
    }
    let missing: Vec<_> = SchemeId::ALL.iter().filter(|s| !used.contains(s)).collect();
    ensure(missing.is_empty(), || format!("schemes never used: {missing:?}"))?;
    for (name, text) in &reject {
        let want: usize = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("# diagnostic at line "))
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| format!("{name}: missing expected line"))?;
        let pf = parse_proof(text, None).map_err(|e| format!("{name}: {e}"))?;
        let report = check_proof(&pf, pf.system);
        ensure(!report.accepted(), || format!("{name} accepted"))?;
        ensure(report.diagnostics.iter().any(|d| d.line == want), || {
            format!("{name}: expected a diagnostic at line {want}, got {:?}", report.diagnostics)
        })?;
    }
    Ok(format!("{} accepted, {} rejected at the right line, all 13 schemes used", accept.len(), reject.len()))
}

fn subset(a: &[Formula], b: &[Formula]) -> bool {
    a.iter().all(|f| b.contains(f))
}

fn rechecks(pf: &HilbertProof) -> bool {
    check_proof(pf, pf.system).accepted()
}

fn elaborators() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let atoms = prop_atoms(3);
    const N: usize = 500;
    for k in 0..N {
        let system = if k % 2 == 0 { SystemId::I } else { SystemId::C };
        let steps = rng.gen_range(1..=10);

        let d = random_deduction_case(&mut rng, system, &atoms, steps);
        let out = deduction_elaborate(&d.proof, &d.hyp).map_err(|e| format!("deduction {k}: {e}"))?;
        let want = Formula::imp(d.hyp.clone(), d.proof.conclusion().unwrap().clone());
        let rest: Vec<Formula> = d.proof.context.iter().filter(|g| **g != d.hyp).cloned().collect();
        ensure(rechecks(&out) && out.conclusion() == Some(&want) && subset(&out.context, &rest), || {
            format!("deduction case {k} does not match its statement")
        })?;

        let o = random_or_elim_case(&mut rng, system, &atoms, steps);
        let out = derive_or_elim(&o.disjunction, &o.left, &o.right).map_err(|e| format!("or-elim {k}: {e}"))?;
        let Some(Formula::Bin(_, a, b)) = o.disjunction.conclusion() else { unreachable!() };
        let mut allowed = o.disjunction.context.clone();
        allowed.extend(o.left.context.iter().filter(|g| **g != **a).cloned());
        allowed.extend(o.right.context.iter().filter(|g| **g != **b).cloned());
        ensure(rechecks(&out) && out.conclusion() == o.left.conclusion() && subset(&out.context, &allowed), || {
            format!("or-elim case {k} does not match its statement")
        })?;

        let e = random_efq_case(&mut rng, system, &atoms, steps);
        let out = derive_efq(&e.proof, &e.goal).map_err(|err| format!("efq {k}: {err}"))?;
        ensure(rechecks(&out) && out.conclusion() == Some(&e.goal) && subset(&out.context, &e.proof.context), || {
            format!("efq case {k} does not match its statement")
        })?;

        let x = random_exists_elim_case(&mut rng, system, &atoms, steps);
        let out = derive_exists_elim(&x.existential, &x.case, &x.witness).map_err(|err| format!("exists-elim {k}: {err}"))?;
        let mut allowed = x.existential.context.clone();
        allowed.extend(x.case.context.iter().filter(|g| !g.contains_term(&x.witness)).cloned());
        ensure(rechecks(&out) && out.conclusion() == x.case.conclusion() && subset(&out.context, &allowed), || {
            format!("exists-elim case {k} does not match its statement")
        })?;
    }
    Ok(format!("{N} cases for each of deduction, or-elim, efq, exists-elim re-check"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let atoms = prop_atoms(6);
    const N: usize = 1000;
    let (mut queries, mut positive) = (0, 0);
    for k in 0..N {
        let n = rng.gen_range(1..=6);
        let pool = &atoms[..n];
        let sys = random_system(&mut rng, pool, 10, 2, 2);
        let mut engine = Engine::new(&sys);
        for _ in 0..4 {
            let size = rng.gen_range(0..=2);
            let ctx: BTreeSet<Atom> = pool.choose_multiple(&mut rng, size).cloned().collect();
            for goal in pool {
                queries += 1;
                let fast = engine.derive(&ctx, goal);
                let slow = brute_force_derives(&sys, &ctx, goal);
                ensure(fast.is_some() == slow, || format!("system {k}: engine and oracle disagree on {goal}"))?;
                if let Some(d) = fast {
                    positive += 1;
                    validate_derivation(&sys, &d).map_err(|e| format!("system {k}: bad witness: {e}"))?;
                    ensure(d.context == ctx && d.conclusion == *goal, || format!("system {k}: witness proves another sequent"))?;
                }
            }
        }
    }
    Ok(format!("{N} systems, {queries} queries agree, {positive} witnesses re-validate"))
}

fn p(name: &str) -> Atom {
    Atom::prop(name)
}

fn monotonicity() -> Outcome {
    let (pp, q, r) = (p("p"), p("q"), p("r"));
    let pool = vec![
        AtomicRule::fact(pp.clone()),
        AtomicRule::first([pp.clone()], q.clone()),
        AtomicRule::new(vec![bes_core::atomic::Premise::new([q.clone()], r.clone())], r.clone()),
        AtomicRule::first([q.clone(), r.clone()], pp.clone()),
    ];
    let atoms = vec![pp, q, r];
    let basis = Basis::powerset_of_pool(&pool, atoms.clone(), vec![]);
    let formulas = formulas_up_to_weight(&atoms, 4);
    let report = Harness::new(&basis).check_monotonicity(&formulas);
    ensure(report.holds(), || format!("{} violations, first {:?}", report.violations.len(), report.violations.first()))?;
    Ok(format!("{} formulas over {} bases, {} pairs, zero violations", report.formulas, basis.len(), report.pairs_checked))
}

fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1u32 << items.len())
        .map(|m| items.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| x.clone()).collect())
        .collect()
}

fn atomic_cut() -> Outcome {
    let atoms: Vec<Atom> = ["p", "q", "r", "s"].map(p).to_vec();
    let [a, b, c, d] = [0, 1, 2, 3].map(|i| atoms[i].clone());
    let pool = vec![
        AtomicRule::first([a.clone()], b.clone()),
        AtomicRule::first([b.clone(), c.clone()], d.clone()),
        AtomicRule::new(vec![bes_core::atomic::Premise::new([a.clone()], c.clone())], d.clone()),
        AtomicRule::new(
            vec![bes_core::atomic::Premise::new([c.clone()], a.clone()), bes_core::atomic::Premise::new([], d.clone())],
            b.clone(),
        ),
        AtomicRule::first([d.clone()], a.clone()),
    ];
    let atom_sets: Vec<BTreeSet<Atom>> = subsets(&atoms).into_iter().map(|s| s.into_iter().collect()).collect();
    let (mut bases, mut rows) = (0, 0);
    for extra in subsets(&pool).into_iter().filter(|s| s.len() <= 3) {
        let basis = Basis::zero_complete(vec![AtomicSystem::from_rules(extra)], &atoms, atoms.clone(), vec![]);
        let mut h = Harness::new(&basis);
        bases += 1;
        for ps in &atom_sets {
            for goal in &atoms {
                let r = h.check_atcomp(ps, goal).map_err(|e| e.to_string())?;
                ensure(r.holds(), || format!("AtComp fails for {ps:?} |- {goal}"))?;
                rows += r.rows.len();
                for qs in &atom_sets {
                    let r = h.check_atomic_cut(qs, ps, goal).map_err(|e| e.to_string())?;
                    ensure(r.holds(), || format!("atomic cut fails for {qs:?}, {ps:?} |- {goal}"))?;
                    rows += r.rows.len();
                }
            }
        }
    }
    Ok(format!("{bases} zero-complete bases, {rows} biconditional instances hold"))
}

fn sequent(gamma: &[&str], goal: &str) -> (Vec<Formula>, Formula, bes_core::syntax::Signature) {
    let mut texts = gamma.to_vec();
    texts.push(goal);
    let sig = infer_signature(texts.iter().copied(), 0).expect("signature");
    let g = gamma.iter().map(|t| parse_formula(t, &sig).expect("formula")).collect();
    (g, parse_formula(goal, &sig).expect("formula"), sig)
}

const K_CLAUSE_GOALS: [&str; 10] = [
    "p -> p",
    "~~p -> p",
    "p -> (q -> p)",
    "forall x P(x) -> P(c)",
    "forall x (P(x) -> q)",
    "~~~p -> ~p",
    "forall x P(x) -> forall x P(x)",
    "bot -> p",
    "forall x ~P(x)",
    "(p -> bot) -> p -> q",
];

const J_CLAUSE_GOALS: [&str; 10] = [
    "p & q -> q & p",
    "p & q",
    "(p & q) & r",
    "forall x (P(x) & q)",
    "p -> p & p",
    "forall x P(x) & p",
    "p | q -> q | p",
    "exists x P(x) -> p",
    "(p -> q) & (q -> p)",
    "forall x (P(x) & Q(x))",
];

fn flat_clauses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut counts = [0usize; 3];
    let mut bases = 0;
    for (variant, goals) in [(Variant::K, K_CLAUSE_GOALS), (Variant::J, J_CLAUSE_GOALS)] {
        for goal in goals {
            let (_, phi, sig) = sequent(&[], goal);
            let fm = make_flat_map(&[], &phi, &sig).map_err(|e| e.to_string())?;
            ensure(fm.xi().len() <= 8 && fm.terms().len() <= 3, || {
                format!("{goal}: {} slot formulas, {} terms", fm.xi().len(), fm.terms().len())
            })?;
            let nb = build_natural_base(&fm, variant).map_err(|e| e.to_string())?;
            bases += 1;
            let xi: Vec<Formula> = fm.xi().to_vec();
            for facts in subsets(&xi) {
                let report = check_flat_clauses(&nb, &facts, 8, &mut rng);
                for i in &report.instances {
                    // J has no deduction for flats; implication is checked in K.
                    if variant == Variant::J && i.clause == Clause::Implication {
                        continue;
                    }
                    ensure(i.lhs == i.rhs, || format!("{variant} {goal}: {} clause fails for {}", i.clause, i.formula))?;
                    counts[i.clause as usize] += 1;
                }
            }
        }
    }
    let total: usize = counts.iter().sum();
    ensure(total >= 200 && counts.iter().all(|&c| c > 0), || format!("too few samples: {counts:?}"))?;
    Ok(format!(
        "{bases} natural bases, {total} samples hold (conjunction {}, implication {}, universal {})",
        counts[0], counts[1], counts[2]
    ))
}

const K_ROUND_TRIP: [(&[&str], &str); 12] = [
    (&[], "~~p -> p"),
    (&[], "forall x P(x) -> P(c)"),
    (&[], "p -> (q -> p)"),
    (&[], "(p -> (q -> r)) -> ((p -> q) -> (p -> r))"),
    (&[], "p -> p"),
    (&[], "(~q -> ~p) -> (p -> q)"),
    (&[], "forall x P(x) -> forall x P(x)"),
    (&[], "~~(p -> q) -> (p -> q)"),
    (&["p", "p -> q"], "q"),
    (&["forall x P(x)"], "P(c)"),
    (&["~~p"], "p"),
    (&[], "(p -> q) -> ((q -> r) -> (p -> r))"),
];

const J_ROUND_TRIP: [(&[&str], &str); 12] = [
    (&[], "(p | q) -> (q | p)"),
    (&[], "P(c) -> exists x P(x)"),
    (&[], "p & q -> q & p"),
    (&[], "bot -> p"),
    (&[], "exists x (P(x) & Q(x)) -> exists x P(x)"),
    (&[], "p -> p | q"),
    (&[], "p -> (q -> p & q)"),
    (&[], "(p -> q) -> ((p -> ~q) -> ~p)"),
    (&["p"], "p | q"),
    (&["P(c)"], "exists x P(x)"),
    (&["p & q"], "q"),
    (&[], "forall x P(x) -> exists x P(x)"),
];

fn round_trip() -> Outcome {
    let opts = PipelineOptions::default();
    let mut n = 0;
    for (variant, corpus) in [(Variant::K, K_ROUND_TRIP), (Variant::J, J_ROUND_TRIP)] {
        for (gamma, goal) in corpus {
            let (g, phi, sig) = sequent(gamma, goal);
            let out = completeness_pipeline(&g, &phi, variant, &Source::Search, &sig, &opts)
                .map_err(|e| format!("{variant} {goal}: {e}"))?;
            ensure(out.verdict == Verdict::Verified, || format!("{variant} {goal}: {}", out.verdict))?;
            let pf = out.proof.expect("verified outcome has a proof");
            let closure: Vec<Formula> = g.iter().map(Formula::universal_closure).collect();
            ensure(pf.conclusion() == Some(&phi.universal_closure()) && subset(&pf.context, &closure), || {
                format!("{variant} {goal}: extracted proof proves another sequent")
            })?;
            n += 1;
        }
    }
    // Simulation of given proofs, not only search.
    for (variant, name) in [(Variant::K, "identity"), (Variant::K, "dne"), (Variant::K, "generalization")] {
        let text = golden_dir("accept").into_iter().find(|(n, _)| n == name).expect("golden proof").1;
        let mut pf = parse_proof(&text, None).map_err(|e| e.to_string())?;
        pf.system = variant.system();
        let goal = pf.conclusion().cloned().expect("non-empty");
        let sig = infer_signature(std::iter::empty(), 0).expect("signature");
        let out = completeness_pipeline(&pf.context.clone(), &goal, variant, &Source::Proof(pf), &sig, &opts)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(out.verdict == Verdict::Verified, || format!("simulated {name}: {}", out.verdict))?;
        n += 1;
    }
    Ok(format!("{n} sequents verified ({} by search in K, {} in J, 3 by simulation)", K_ROUND_TRIP.len(), J_ROUND_TRIP.len()))
}

fn dne_separation() -> Outcome {
    let (_, phi, sig) = sequent(&[], "~~p -> p");
    let opts = PipelineOptions::default();
    let run = |variant| completeness_pipeline(&[], &phi, variant, &Source::Search, &sig, &opts).map_err(|e| e.to_string());
    let (j1, j2, k1, k2) = (run(Variant::J)?, run(Variant::J)?, run(Variant::K)?, run(Variant::K)?);
    ensure(j1.verdict == Verdict::NoDerivation, || format!("J: {}", j1.verdict))?;
    ensure(k1.verdict == Verdict::Verified, || format!("K: {}", k1.verdict))?;
    ensure(j1.transcript == j2.transcript && k1.transcript == k2.transcript, || "transcripts differ between runs".into())?;
    let uses_dne = k1.proof.as_ref().is_some_and(|pf| {
        pf.lines.iter().any(|l| matches!(l.justification, bes_core::hilbert::Justification::Axiom { scheme: SchemeId::Dne, .. }))
    });
    ensure(uses_dne, || "K proof does not use DNE".into())?;
    Ok(format!("J: no derivation over {} rules; K: verified with DNE; both deterministic", j1.base.len()))
}

/// Instances of every scheme of `system` with slots over `atoms`; the
/// quantifier schemes use the body `P(x)` and the vacuous body `p`.
fn scheme_instances(system: SystemId, atoms: &[Formula], terms: &[Term]) -> Vec<(SchemeId, Formula)> {
    let mut out = Vec::new();
    let body = Formula::atom("P", vec![Term::var("x")]);
    for id in system.schemes() {
        if id.is_quantified() {
            for b in [&body, &atoms[0]] {
                for t in terms {
                    out.push((id, id.quantified_instance(b, "x", t).expect("instance").0));
                }
            }
            continue;
        }
        for x in atoms {
            for y in atoms {
                for z in atoms {
                    out.push((id, id.instance(&[x, y, z]).expect("instance").0));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn soundness() -> Outcome {
    let terms = vec![Term::constant("c"), Term::constant("d")];
    let props = prop_atoms(3);
    let mut universe = props.clone();
    universe.extend(terms.iter().map(|t| Atom::new("P", vec![t.clone()])));
    let slots: Vec<Formula> = props.iter().cloned().map(Formula::Atom).collect();
    let [a, b, c] = [0, 1, 2].map(|i| props[i].clone());
    let pc = Atom::new("P", vec![terms[0].clone()]);
    let seeds: [Vec<AtomicRule>; 3] = [
        vec![],
        vec![AtomicRule::first([a.clone()], b.clone()), AtomicRule::first([pc.clone()], c.clone())],
        vec![
            AtomicRule::new(vec![bes_core::atomic::Premise::new([a.clone()], b.clone())], c.clone()),
            AtomicRule::first([b.clone(), c.clone()], pc.clone()),
        ],
    ];
    let instances = scheme_instances(SystemId::I, &slots, &terms);
    let mut checked = 0;
    for (k, seed) in seeds.iter().enumerate() {
        let basis = Basis::zero_complete(vec![AtomicSystem::from_rules(seed.clone())], &universe, universe.clone(), terms.clone());
        let mut h = Harness::new(&basis);
        for (id, f) in &instances {
            ensure(h.evaluator().supports_valid(&[], f), || format!("basis {k}: {id} instance {f} not supported"))?;
            checked += 1;
        }
    }
    // DNE over bases built from zero- and first-level pools.
    let dne: Vec<Formula> = scheme_instances(SystemId::C, &slots, &terms)
        .into_iter()
        .filter(|(id, _)| *id == SchemeId::Dne)
        .map(|(_, f)| f)
        .collect();
    let pools: [Vec<AtomicRule>; 2] = [
        props.iter().cloned().map(AtomicRule::fact).collect(),
        vec![
            AtomicRule::fact(a.clone()),
            AtomicRule::first([a.clone()], b.clone()),
            AtomicRule::first([b.clone()], c.clone()),
            AtomicRule::first([c.clone(), a.clone()], b.clone()),
        ],
    ];
    let mut dne_checked = 0;
    for (k, pool) in pools.iter().enumerate() {
        let basis = Basis::powerset_of_pool(pool, props.clone(), vec![]);
        let mut h = Harness::new(&basis);
        for f in &dne {
            ensure(h.evaluator().supports_valid(&[], f), || format!("pool {k}: {f} not supported"))?;
            dne_checked += 1;
        }
    }
    Ok(format!("{checked} scheme instances over 3 zero-complete bases, {dne_checked} DNE instances over 2 pools"))
}
