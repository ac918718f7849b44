use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::syntax::{Atom, Term};

fn a(name: &str) -> Atom {
    Atom::prop(name)
}

fn h(x: &str) -> Atom {
    Atom::new("H", vec![Term::constant(x)])
}

fn m(x: &str) -> Atom {
    Atom::new("M", vec![Term::constant(x)])
}

fn set(atoms: &[Atom]) -> BTreeSet<Atom> {
    atoms.iter().cloned().collect()
}

#[test]
fn levels() {
    assert_eq!(AtomicRule::fact(h("s")).level(), Level::Zero);
    assert_eq!(AtomicRule::first([h("s")], m("s")).level(), Level::First);
    let second = AtomicRule::new(vec![Premise::new([a("p")], a("q"))], a("r"));
    assert_eq!(second.level(), Level::Second);
}

#[test]
fn aristotle() {
    let sys = AtomicSystem::from_rules([AtomicRule::fact(h("s")), AtomicRule::first([h("s")], m("s"))]);
    let d = derives(&sys, &BTreeSet::new(), &m("s")).unwrap();
    validate_derivation(&sys, &d).unwrap();
    assert!(is_derivable(&AtomicSystem::new(), &set(&[a("p")]), &a("p")));
}

#[test]
fn discharge_needs_premise_derivation() {
    let rule = AtomicRule::new(vec![Premise::new([a("p")], a("q"))], a("r"));
    let sys = AtomicSystem::from_rules([rule.clone()]);
    assert!(!is_derivable(&sys, &BTreeSet::new(), &a("r")));
    let sys = AtomicSystem::from_rules([rule, AtomicRule::first([a("p")], a("q"))]);
    let d = derives(&sys, &BTreeSet::new(), &a("r")).unwrap();
    validate_derivation(&sys, &d).unwrap();
}

#[test]
fn nested_discharge() {
    // { [p] => s } => t, { [q] => r } => s, p, q => r
    let sys = AtomicSystem::from_rules([
        AtomicRule::new(vec![Premise::new([a("p")], a("s"))], a("t")),
        AtomicRule::new(vec![Premise::new([a("q")], a("r"))], a("s")),
        AtomicRule::first([a("p"), a("q")], a("r")),
    ]);
    let d = derives(&sys, &BTreeSet::new(), &a("t")).unwrap();
    validate_derivation(&sys, &d).unwrap();
    assert!(brute_force_derives(&sys, &BTreeSet::new(), &a("t")));
}

#[test]
fn closure_over_terms() {
    let x = Term::var("x");
    let hx = Atom::new("H", vec![x.clone()]);
    let mx = Atom::new("M", vec![x]);
    let open = AtomicSystem::from_rules([AtomicRule::first([hx.clone()], mx.clone())]);
    let one = close_open_system(&open, &[Term::constant("s")]);
    assert_eq!(one.rules(), &[AtomicRule::first([h("s")], m("s"))]);
    assert_eq!(close_open_system(&open, &[Term::constant("s"), Term::constant("t")]).len(), 2);
    let ground = AtomicSystem::from_rules([AtomicRule::fact(h("s"))]);
    assert_eq!(close_open_system(&ground, &[Term::constant("s")]), ground);

    let open = AtomicSystem::from_rules([AtomicRule::fact(hx.clone()), AtomicRule::first([hx], mx.clone())]);
    let report = open_correspondence_check(&open, &mx, &[Term::constant("s")]);
    assert!(report.open_derivable && report.agree);
    assert_eq!(report.witness.unwrap()["x"], Term::constant("s"));
    let empty = open_correspondence_check(&AtomicSystem::new(), &mx, &[Term::constant("s")]);
    assert!(!empty.open_derivable && empty.agree);
}

#[test]
fn base_file_round_trip() {
    let text = "=> H(s)\nH(s), H(t) => M(s)\n{ [p, q] => r ; [] => u } => w\n";
    let sys = parse_base(text, None).unwrap();
    assert_eq!(sys.len(), 3);
    assert_eq!(sys.rule(2).level(), Level::Second);
    assert_eq!(sys.to_string(), text);
    assert_eq!(parse_base("p q", None).unwrap_err().line, 1);
}

const ATOMS: [&str; 6] = ["p0", "p1", "p2", "p3", "p4", "p5"];

fn arb_atom() -> impl Strategy<Value = Atom> {
    (0..ATOMS.len()).prop_map(|i| Atom::prop(ATOMS[i]))
}

fn arb_rule() -> impl Strategy<Value = AtomicRule> {
    let premise = (proptest::collection::btree_set(arb_atom(), 0..=2), arb_atom())
        .prop_map(|(hyps, c)| Premise { hyps, conclusion: c });
    (proptest::collection::vec(premise, 0..=2), arb_atom()).prop_map(|(ps, c)| AtomicRule::new(ps, c))
}

fn arb_system() -> impl Strategy<Value = AtomicSystem> {
    proptest::collection::vec(arb_rule(), 0..=10).prop_map(AtomicSystem::from_rules)
}

proptest! {
    #[test]
    fn engine_matches_oracle(sys in arb_system(), ctx in proptest::collection::btree_set(arb_atom(), 0..=2), goal in arb_atom()) {
        let fast = derives(&sys, &ctx, &goal);
        prop_assert_eq!(fast.is_some(), brute_force_derives(&sys, &ctx, &goal));
        if let Some(d) = fast {
            prop_assert!(validate_derivation(&sys, &d).is_ok());
            prop_assert_eq!(&d.context, &ctx);
        }
    }

    #[test]
    fn weakening(sys in arb_system(), extra in arb_system(), ctx in proptest::collection::btree_set(arb_atom(), 0..=2), more in proptest::collection::btree_set(arb_atom(), 0..=2), goal in arb_atom()) {
        if is_derivable(&sys, &ctx, &goal) {
            let bigger: BTreeSet<Atom> = ctx.union(&more).cloned().collect();
            prop_assert!(is_derivable(&sys, &bigger, &goal));
            prop_assert!(is_derivable(&sys.union(&extra), &ctx, &goal));
        }
    }
}
