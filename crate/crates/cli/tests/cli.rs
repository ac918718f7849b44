use std::path::PathBuf;
use std::process::Command;

use bes_cli::{run, EXIT_FALSE, EXIT_INPUT, EXIT_OK};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn bes(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("bes").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn derive_prints_a_witness() {
    let (code, out, _) = bes(&["derive", "--base", &data("aristotle.base"), "--goal", "M(s)"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("derivable: [] |- M(s)"), "{out}");
    assert!(out.contains("by app H(s) => M(s)"));
}

#[test]
fn derive_reports_underivable_goals() {
    let (code, out, _) = bes(&["derive", "--base", &data("aristotle.base"), "--goal", "H(t)"]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.starts_with("not derivable"));
    let (code, _, _) = bes(&["derive", "--base", &data("aristotle.base"), "-c", "H(t)", "--goal", "H(t)"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn dne_is_rejected_in_i() {
    let (code, out, _) = bes(&["check-proof", "--system", "I", &data("dne.hproof")]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.contains("line 2"), "{out}");
    let (code, out, _) = bes(&["check-proof", &data("dne.hproof")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("accepted in C"));
}

#[test]
fn roundtrip_identity_in_k() {
    let (code, out, _) = bes(&["roundtrip", "--variant", "K", "--goal", "p -> p"]);
    assert_eq!(code, EXIT_OK);
    for section in ["== FLATMAP ==", "== BASE ==", "== DERIVATION ==", "== EXTRACTED-PROOF ==", "== VERDICT =="] {
        assert!(out.contains(section), "missing {section}");
    }
    assert!(out.contains("verified: |- p -> p in C"));
}

#[test]
fn roundtrip_of_a_proof_file() {
    let (code, out, _) = bes(&["roundtrip", "--proof", &data("identity.hproof")]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("simulation of a 5-line proof"));
}

#[test]
fn dne_has_no_derivation_in_j() {
    let (code, out, _) = bes(&["roundtrip", "--variant", "J", "--goal", "~~p -> p"]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.contains("no derivation"));
}

#[test]
fn extracted_proofs_recheck() {
    let (code, proof, _) = bes(&["extract", "--variant", "J", "--goal", "p & q -> q & p"]);
    assert_eq!(code, EXIT_OK);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("swap.hproof");
    std::fs::write(&path, &proof).unwrap();
    let (code, out, _) = bes(&["check-proof", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("concludes p & q -> q & p"));
}

#[test]
fn simulate_prints_the_derivation() {
    let (code, out, _) = bes(&["simulate", "--variant", "K", &data("identity.hproof")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("== DERIVATION ==\nsource: simulation of a 5-line proof\n5 nodes"), "{out}");
    let (code, _, err) = bes(&["simulate", "--variant", "J", &data("dne.hproof")]);
    assert_eq!(code, EXIT_FALSE);
    assert!(err.contains("DNE"), "{err}");
}

#[test]
fn support_over_a_basis_file() {
    let (code, out, _) = bes(&["support", "--basis", &data("small.basis"), "--goal", "p -> q", "--base", "2"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out, _) = bes(&["support", "--basis", &data("small.basis"), "--goal", "p -> q"]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.contains("base 0 {}: not supported"));
    let (code, _, err) = bes(&["support", "--basis", &data("small.basis"), "--goal", "z"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("outside the basis universe"), "{err}");
}

#[test]
fn parse_normalizes() {
    let (code, out, _) = bes(&["parse", "(p -> (q -> p))", "forall x (P(x))"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "p -> q -> p\nforall x P(x)\n");
    let (code, out, _) = bes(&["parse", "--base", &data("aristotle.base")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "=> H(s)\nH(s) => M(s)\n");
    let (code, _, _) = bes(&["parse", "p ->"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn props_print_their_seed_and_repeat() {
    let args = ["props", "--seed", "11", "--atoms", "2", "--depth", "3"];
    let (code, first, _) = bes(&args);
    assert_eq!(code, EXIT_OK, "{first}");
    assert!(first.starts_with("seed 11\n"));
    assert!(first.ends_with("all properties hold\n"));
    assert_eq!(bes(&args).1, first);
}

#[test]
fn bad_flags_are_input_errors() {
    assert_eq!(bes(&["roundtrip", "--variant", "X", "--goal", "p"]).0, EXIT_INPUT);
    assert_eq!(bes(&["props", "--atoms", "9"]).0, EXIT_INPUT);
    assert_eq!(bes(&["check-proof", "/nonexistent.hproof"]).0, EXIT_INPUT);
    assert_eq!(bes(&["roundtrip", "--variant", "K", "--goal", "p | q"]).0, EXIT_INPUT);
    assert_eq!(bes(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(bes(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_output_is_deterministic() {
    let exe = env!("CARGO_BIN_EXE_bes");
    let once = || Command::new(exe).args(["roundtrip", "--variant", "J", "--goal", "(p | q) -> (q | p)"]).output().unwrap();
    let (a, b) = (once(), once());
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
}
