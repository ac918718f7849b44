use bes_core::hilbert::{check_proof, parse_proof, SystemId};
use bes_core::simulation::{completeness_pipeline, PipelineOptions, Source, Variant, Verdict};
use bes_core::syntax::{infer_signature, parse_formula, Formula};

fn run(gamma: &[&str], goal: &str, variant: Variant, opts: &PipelineOptions) -> Verdict {
    let mut texts = gamma.to_vec();
    texts.push(goal);
    let sig = infer_signature(texts.iter().copied(), 0).unwrap();
    let g: Vec<Formula> = gamma.iter().map(|t| parse_formula(t, &sig).unwrap()).collect();
    let phi = parse_formula(goal, &sig).unwrap();
    let out = completeness_pipeline(&g, &phi, variant, &Source::Search, &sig, opts).unwrap();
    if let Some(pf) = &out.proof {
        assert!(check_proof(pf, variant.system()).accepted());
        assert_eq!(pf.conclusion(), Some(&phi.universal_closure()));
    }
    out.verdict
}

#[test]
fn open_goals_are_read_as_closures() {
    assert_eq!(run(&[], "P(x) -> P(x)", Variant::K, &PipelineOptions::default()), Verdict::Verified);
    assert_eq!(run(&["forall x P(x)"], "P(c)", Variant::J, &PipelineOptions::default()), Verdict::Verified);
}

#[test]
fn currying_can_be_disabled() {
    let opts = PipelineOptions { curry: false, ..PipelineOptions::default() };
    assert_eq!(run(&[], "p -> p", Variant::K, &opts), Verdict::Verified);
    assert_eq!(run(&["p -> q", "q -> r"], "p -> r", Variant::K, &PipelineOptions::default()), Verdict::Verified);
}

#[test]
fn conjunction_in_k_is_behind_a_flag() {
    let opts = PipelineOptions { allow_conjunction_in_k: true, ..PipelineOptions::default() };
    let sig = infer_signature(["p & q -> p"], 0).unwrap();
    let phi = parse_formula("p & q -> p", &sig).unwrap();
    assert!(completeness_pipeline(&[], &phi, Variant::K, &Source::Search, &sig, &PipelineOptions::default()).is_err());
    assert!(completeness_pipeline(&[], &phi, Variant::K, &Source::Search, &sig, &opts).is_ok());
}

#[test]
fn explosion_needs_an_extra_slot() {
    let goal = "~p -> (p -> q)";
    assert_eq!(run(&[], goal, Variant::K, &PipelineOptions::default()), Verdict::NoDerivation);
    let sig = infer_signature([goal], 0).unwrap();
    let opts = PipelineOptions { extra: vec![parse_formula("~q", &sig).unwrap()], ..PipelineOptions::default() };
    assert_eq!(run(&[], goal, Variant::K, &opts), Verdict::Verified);
}

#[test]
fn simulated_proofs_round_trip_in_j() {
    let text = "system I
context: p; q
1. p by hyp
2. q by hyp
3. p -> q -> p & q by axiom(AndI)
4. q -> p & q by mp(1, 3)
5. p & q by mp(2, 4)
";
    let pf = parse_proof(text, None).unwrap();
    let sig = infer_signature(["p", "q"], 0).unwrap();
    let goal = pf.conclusion().unwrap().clone();
    let out =
        completeness_pipeline(&pf.context, &goal, Variant::J, &Source::Proof(pf.clone()), &sig, &PipelineOptions::default())
            .unwrap();
    assert_eq!(out.verdict, Verdict::Verified, "{}", out.transcript);
    let extracted = out.proof.unwrap();
    assert_eq!(extracted.context, pf.context);
    assert!(check_proof(&extracted, SystemId::I).accepted());
}
