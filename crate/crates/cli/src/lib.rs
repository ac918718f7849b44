//! The `bes` command line: parsing, proof checking, atomic derivability,
//! support evaluation, the simulation pipeline and the property harnesses.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use bes_core::atomic::{derives, parse_base, AtomicSystem};
use bes_core::generate::{formulas_up_to_weight, prop_atoms, random_system};
use bes_core::hilbert::{check_proof, format_proof, parse_proof, SystemId};
use bes_core::simulation::{
    build_natural_base, check_flat_clauses, completeness_pipeline, make_flat_map, Clause, PipelineOptions,
    PipelineOutcome, SimulationError, Source, Variant, Verdict,
};
use bes_core::support::{basis_source_texts, parse_basis, Basis, Evaluator, Harness, SupportQuery};
use bes_core::syntax::{infer_signature, parse_formula, Atom, Formula, Signature};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bes", version, about = "Base-extension semantics workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Echo formulas, a proof file or a base file in normal form.
    Parse(ParseArgs),
    /// Check a Hilbert proof file.
    CheckProof(CheckArgs),
    /// Decide derivability of an atom in a base and print a witness.
    Derive(DeriveArgs),
    /// Decide support of a sequent over the bases of a basis file.
    Support(SupportArgs),
    /// Simulate a Hilbert proof in the natural base.
    Simulate(SimulateArgs),
    /// Search the natural base and extract a Hilbert proof.
    Extract(SequentArgs),
    /// Run the full pipeline and print its transcript.
    Roundtrip(RoundtripArgs),
    /// Run the seeded property harnesses.
    Props(PropsArgs),
}

#[derive(Debug, Args)]
struct SigArgs {
    /// Signature file (`const c`, `fun f/1`, `pred P/1`, `depth N`).
    #[arg(long)]
    sig: Option<PathBuf>,
    /// Term depth for inferred signatures.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Debug, Args)]
struct ParseArgs {
    /// Formulas to normalize.
    formulas: Vec<String>,
    /// A Hilbert proof file to normalize.
    #[arg(long, conflicts_with_all = ["base", "formulas"])]
    proof: Option<PathBuf>,
    /// A base file to normalize.
    #[arg(long, conflicts_with = "formulas")]
    base: Option<PathBuf>,
    #[command(flatten)]
    sig: SigArgs,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// The proof file.
    proof: PathBuf,
    /// Check against this system instead of the one the file declares.
    #[arg(long)]
    system: Option<SystemId>,
    #[command(flatten)]
    sig: SigArgs,
}

#[derive(Debug, Args)]
struct DeriveArgs {
    /// The base file.
    #[arg(long)]
    base: PathBuf,
    /// The atom to derive.
    #[arg(long)]
    goal: String,
    /// Hypothesis atoms (repeatable).
    #[arg(long = "context", short = 'c')]
    context: Vec<String>,
    #[command(flatten)]
    sig: SigArgs,
}

#[derive(Debug, Args)]
struct SupportArgs {
    /// The basis file.
    #[arg(long)]
    basis: PathBuf,
    /// Index of the base to evaluate at; every base when absent.
    #[arg(long = "base")]
    base: Option<usize>,
    #[arg(long)]
    goal: String,
    /// Context formulas (repeatable).
    #[arg(long = "context", short = 'c')]
    context: Vec<String>,
    #[command(flatten)]
    sig: SigArgs,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// K simulates classical logic, J intuitionistic logic.
    #[arg(long, default_value = "K")]
    variant: Variant,
    /// Extra formulas whose subformulas join the slot set (repeatable).
    #[arg(long)]
    extra: Vec<String>,
    /// Do not move antecedents into the context when the search fails.
    #[arg(long)]
    no_curry: bool,
    /// Admit `&` in the fragment of variant K.
    #[arg(long)]
    allow_and: bool,
    #[command(flatten)]
    sig: SigArgs,
}

#[derive(Debug, Args)]
struct SequentArgs {
    #[arg(long)]
    goal: String,
    /// Context formulas (repeatable).
    #[arg(long = "context", short = 'c')]
    context: Vec<String>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// The proof file.
    proof: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
struct RoundtripArgs {
    /// The goal; searched for when no proof is given.
    #[arg(long, required_unless_present = "proof")]
    goal: Option<String>,
    /// Context formulas (repeatable).
    #[arg(long = "context", short = 'c')]
    context: Vec<String>,
    /// Simulate this proof instead of searching.
    #[arg(long, conflicts_with_all = ["goal", "context"])]
    proof: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
struct PropsArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of propositional atoms for generated bases.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=5))]
    atoms: u32,
    /// Maximum formula weight in the monotonicity sample.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=4))]
    depth: u32,
    /// Rules in the generated pool.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(0..=6))]
    rules: u32,
    /// Use this basis file instead of a generated one.
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Variant of the natural base for the flat clause checks.
    #[arg(long, default_value = "K")]
    variant: Variant,
    /// Goal whose natural base the flat clause checks run over.
    #[arg(long, default_value = "~~p -> p")]
    goal: String,
    /// Samples per clause and fact set.
    #[arg(long, default_value_t = 8)]
    samples: usize,
}

/// A failed command: exit code and message.
struct Failure(i32, String);

type Outcome = Result<(i32, String), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure(EXIT_INPUT, e.to_string())
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure(EXIT_INTERNAL, e.to_string())
}

/// Input errors and missing rules exit 2; failures of the translation
/// itself are invariant violations.
fn simulation_failure(e: SimulationError) -> Failure {
    match e {
        SimulationError::Fragment { .. }
        | SimulationError::Syntax(_)
        | SimulationError::DomainTooLarge { .. }
        | SimulationError::NamePoolExhausted(_)
        | SimulationError::GoalMismatch { .. }
        | SimulationError::OutsideDomain { .. } => input(e),
        SimulationError::ProofRejected(_) | SimulationError::SchemeNotInVariant { .. } => Failure(EXIT_FALSE, e.to_string()),
        _ => internal(e),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
}

/// The declared signature, or one inferred from `texts`.
fn signature(args: &SigArgs, texts: &[String], default_depth: usize) -> Result<Signature, Failure> {
    match &args.sig {
        Some(path) => {
            let sig = Signature::parse(&read(path)?).map_err(input)?;
            Ok(match args.depth {
                Some(d) => sig.with_depth(d),
                None => sig,
            })
        }
        None => infer_signature(texts.iter().map(String::as_str), args.depth.unwrap_or(default_depth)).map_err(input),
    }
}

fn formulas(texts: &[String], sig: &Signature) -> Result<Vec<Formula>, Failure> {
    texts.iter().map(|t| parse_formula(t, sig).map_err(|e| Failure(EXIT_INPUT, format!("`{t}`: {e}")))).collect()
}

fn atom(text: &str, sig: &Signature) -> Result<Atom, Failure> {
    match parse_formula(text, sig).map_err(input)? {
        Formula::Atom(a) => Ok(a),
        other => Err(Failure(EXIT_INPUT, format!("`{other}` is not an atom"))),
    }
}

/// Runs the command line `argv` (program name first), writing the report to
/// `out` and errors to `err`, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Parse(a) => cmd_parse(a),
        Command::CheckProof(a) => cmd_check(a),
        Command::Derive(a) => cmd_derive(a),
        Command::Support(a) => cmd_support(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Roundtrip(a) => cmd_roundtrip(a),
        Command::Props(a) => cmd_props(a),
    };
    match result {
        Ok((code, report)) => {
            let _ = out.write_all(report.as_bytes());
            code
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn cmd_parse(a: ParseArgs) -> Outcome {
    let mut s = String::new();
    if let Some(path) = &a.proof {
        let text = read(path)?;
        let sig = a.sig.sig.as_ref().map(|p| read(p).and_then(|t| Signature::parse(&t).map_err(input))).transpose()?;
        let pf = parse_proof(&text, sig.as_ref()).map_err(input)?;
        s.push_str(&format_proof(&pf));
        return Ok((EXIT_OK, s));
    }
    if let Some(path) = &a.base {
        let text = read(path)?;
        let sig = a.sig.sig.as_ref().map(|p| read(p).and_then(|t| Signature::parse(&t).map_err(input))).transpose()?;
        let sys = parse_base(&text, sig.as_ref()).map_err(input)?;
        for r in sys.rules() {
            let _ = writeln!(s, "{r}");
        }
        return Ok((EXIT_OK, s));
    }
    if a.formulas.is_empty() {
        return Err(Failure(EXIT_INPUT, "nothing to parse: give formulas, --proof or --base".into()));
    }
    let sig = signature(&a.sig, &a.formulas, 0)?;
    for f in formulas(&a.formulas, &sig)? {
        let _ = writeln!(s, "{f}");
    }
    Ok((EXIT_OK, s))
}

fn cmd_check(a: CheckArgs) -> Outcome {
    let text = read(&a.proof)?;
    let sig = a.sig.sig.as_ref().map(|p| read(p).and_then(|t| Signature::parse(&t).map_err(input))).transpose()?;
    let pf = parse_proof(&text, sig.as_ref()).map_err(input)?;
    let system = a.system.unwrap_or(pf.system);
    let report = check_proof(&pf, system);
    let mut s = String::new();
    if report.accepted() {
        let goal = pf.conclusion().map_or_else(|| "nothing".to_string(), ToString::to_string);
        let _ = writeln!(s, "accepted in {system}: {} lines, concludes {goal}", pf.len());
        Ok((EXIT_OK, s))
    } else {
        let _ = writeln!(s, "rejected in {system}");
        for d in &report.diagnostics {
            let _ = writeln!(s, "{d}");
        }
        Ok((EXIT_FALSE, s))
    }
}

fn cmd_derive(a: DeriveArgs) -> Outcome {
    let text = read(&a.base)?;
    let sig = match &a.sig.sig {
        Some(p) => Some(Signature::parse(&read(p)?).map_err(input)?),
        None => None,
    };
    let sys = parse_base(&text, sig.as_ref()).map_err(input)?;
    let sig = match sig {
        Some(s) => s,
        None => {
            let mut texts: Vec<String> = sys.atoms().iter().map(ToString::to_string).collect();
            texts.extend(a.context.iter().cloned());
            texts.push(a.goal.clone());
            signature(&a.sig, &texts, 1)?
        }
    };
    let goal = atom(&a.goal, &sig)?;
    let ctx: BTreeSet<Atom> = a.context.iter().map(|c| atom(c, &sig)).collect::<Result<_, _>>()?;
    let mut s = String::new();
    let ctx_text = ctx.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    match derives(&sys, &ctx, &goal) {
        Some(d) => {
            let _ = writeln!(s, "derivable: [{ctx_text}] |- {goal} ({} nodes)", d.size());
            s.push_str(&d.render(&sys));
            Ok((EXIT_OK, s))
        }
        None => {
            let _ = writeln!(s, "not derivable: [{ctx_text}] |- {goal}");
            Ok((EXIT_FALSE, s))
        }
    }
}

fn cmd_support(a: SupportArgs) -> Outcome {
    let text = read(&a.basis)?;
    let dir = a.basis.parent();
    let sig = match &a.sig.sig {
        Some(p) => Signature::parse(&read(p)?).map_err(input)?,
        None => {
            let mut texts = basis_source_texts(&text, dir).map_err(input)?;
            texts.extend(a.context.iter().cloned());
            texts.push(a.goal.clone());
            signature(&a.sig, &texts, 1)?
        }
    };
    let basis = parse_basis(&text, dir, Some(&sig)).map_err(input)?;
    let context = formulas(&a.context, &sig)?;
    let goal = parse_formula(&a.goal, &sig).map_err(input)?;
    let bases: Vec<usize> = match a.base {
        Some(b) => vec![b],
        None => (0..basis.len()).collect(),
    };
    // Validates the query once; the shared evaluator reuses its tables.
    let first = SupportQuery { base: bases[0], context: context.clone(), goal: goal.clone() };
    bes_core::support::supports(&basis, &first).map_err(input)?;
    let mut eval = Evaluator::new(&basis);
    let mut s = String::new();
    let ctx_text = context.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let _ = writeln!(s, "basis: {} bases, {} atoms, {} terms", basis.len(), basis.universe().len(), basis.terms().len());
    let mut all = true;
    for b in bases {
        let yes = eval.supports(b, &context, &goal);
        all &= yes;
        let _ = writeln!(s, "base {b} {{{}}}: {}", system_text(&basis.systems()[b]), if yes { "supported" } else { "not supported" });
    }
    let _ = writeln!(s, "{}: [{ctx_text}] ||- {goal}", if all { "supported" } else { "not supported" });
    Ok((if all { EXIT_OK } else { EXIT_FALSE }, s))
}

fn system_text(sys: &AtomicSystem) -> String {
    sys.rules().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ; ")
}

fn options(p: &PipelineArgs, sig: &Signature) -> Result<PipelineOptions, Failure> {
    Ok(PipelineOptions { curry: !p.no_curry, allow_conjunction_in_k: p.allow_and, extra: formulas(&p.extra, sig)? })
}

/// Parses the sequent and runs the pipeline.
fn pipeline(goal: &str, context: &[String], proof: Option<&Path>, p: &PipelineArgs) -> Result<PipelineOutcome, Failure> {
    let (gamma, phi, source, sig) = match proof {
        Some(path) => {
            let text = read(path)?;
            let sig = match &p.sig.sig {
                Some(s) => Some(Signature::parse(&read(s)?).map_err(input)?),
                None => None,
            };
            let pf = parse_proof(&text, sig.as_ref()).map_err(input)?;
            let goal = pf.conclusion().cloned().ok_or_else(|| Failure(EXIT_INPUT, "the proof is empty".into()))?;
            let sig = match sig {
                Some(s) => s,
                None => {
                    let mut texts: Vec<String> = pf.lines.iter().map(|l| l.formula.to_string()).collect();
                    texts.extend(p.extra.iter().cloned());
                    signature(&p.sig, &texts, 0)?
                }
            };
            (pf.context.clone(), goal, Source::Proof(pf), sig)
        }
        None => {
            let mut texts: Vec<String> = context.to_vec();
            texts.push(goal.to_string());
            texts.extend(p.extra.iter().cloned());
            let sig = signature(&p.sig, &texts, 0)?;
            let gamma = formulas(context, &sig)?;
            let phi = parse_formula(goal, &sig).map_err(input)?;
            (gamma, phi, Source::Search, sig)
        }
    };
    let opts = options(p, &sig)?;
    completeness_pipeline(&gamma, &phi, p.variant, &source, &sig, &opts).map_err(simulation_failure)
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Verified => EXIT_OK,
        Verdict::NoDerivation => EXIT_FALSE,
        // A simulated or searched derivation always decodes to a checking
        // proof; anything else is a bug.
        Verdict::Rejected(_) => EXIT_INTERNAL,
    }
}

fn sections(out: &PipelineOutcome, names: &[&str]) -> String {
    let mut s = String::new();
    for name in names {
        if let Some(body) = out.transcript.section(name) {
            let _ = writeln!(s, "== {name} ==");
            s.push_str(body);
        }
    }
    s
}

fn cmd_simulate(a: SimulateArgs) -> Outcome {
    let out = pipeline("", &[], Some(&a.proof), &a.pipeline)?;
    let code = if out.derivation.is_some() { EXIT_OK } else { EXIT_INTERNAL };
    Ok((code, sections(&out, &["FLATMAP", "BASE", "DERIVATION"])))
}

fn cmd_extract(a: SequentArgs) -> Outcome {
    let out = pipeline(&a.goal, &a.context, None, &a.pipeline)?;
    let code = verdict_code(&out.verdict);
    let report = match &out.proof {
        Some(pf) if code == EXIT_OK => format_proof(pf),
        _ => format!("{}\n", out.verdict),
    };
    Ok((code, report))
}

fn cmd_roundtrip(a: RoundtripArgs) -> Outcome {
    let goal = a.goal.as_deref().unwrap_or("");
    let out = pipeline(goal, &a.context, a.proof.as_deref(), &a.pipeline)?;
    Ok((verdict_code(&out.verdict), out.transcript.to_string()))
}

fn cmd_props(a: PropsArgs) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut s = String::new();
    let _ = writeln!(s, "seed {}", a.seed);
    let mut ok = true;

    let (basis, atoms) = match &a.basis {
        Some(path) => {
            let text = read(path)?;
            let basis = parse_basis(&text, path.parent(), None).map_err(input)?;
            let atoms: Vec<Atom> = basis.universe().iter().filter(|x| x.args.is_empty()).cloned().collect();
            (basis, atoms)
        }
        None => {
            let atoms = prop_atoms(a.atoms as usize);
            let pool = random_system(&mut rng, &atoms, a.rules as usize, 2, 1);
            let _ = writeln!(s, "pool: {}", system_text(&pool));
            let basis = Basis::zero_complete(vec![pool], &atoms, atoms.clone(), vec![]);
            (basis, atoms)
        }
    };
    if atoms.is_empty() {
        return Err(Failure(EXIT_INPUT, "the basis has no propositional atoms".into()));
    }
    let mut h = Harness::new(&basis);

    let sample = formulas_up_to_weight(&atoms, a.depth as usize);
    let m = h.check_monotonicity(&sample);
    ok &= m.holds();
    let _ = writeln!(
        s,
        "monotonicity: {} formulas, {} pairs, {} violations",
        m.formulas,
        m.pairs_checked,
        m.violations.len()
    );
    for v in m.violations.iter().take(5) {
        let _ = writeln!(s, "  {} holds at base {} but not at {}", v.formula, v.smaller, v.larger);
    }

    match basis.zero_complete_atoms().cloned() {
        Some(zc) => {
            let zc: Vec<Atom> = zc.into_iter().collect();
            let sets = subsets(&zc);
            let (mut rows, mut bad) = (0usize, 0usize);
            for p in &sets {
                for goal in &zc {
                    let r = h.check_atcomp(p, goal).map_err(internal)?;
                    rows += r.rows.len();
                    bad += r.failures().count();
                    for q in &sets {
                        let r = h.check_atomic_cut(q, p, goal).map_err(internal)?;
                        rows += r.rows.len();
                        bad += r.failures().count();
                    }
                }
            }
            ok &= bad == 0;
            let _ = writeln!(s, "atomic cut and AtComp: {rows} instances, {bad} failures");
        }
        None => {
            let _ = writeln!(s, "atomic cut and AtComp: skipped, the basis is not zero-level complete");
        }
    }

    let sig = infer_signature([a.goal.as_str()], 0).map_err(input)?;
    let phi = parse_formula(&a.goal, &sig).map_err(input)?;
    let fm = make_flat_map(&[], &phi, &sig).map_err(simulation_failure)?;
    let nb = build_natural_base(&fm, a.variant).map_err(simulation_failure)?;
    let xi: Vec<Formula> = fm.xi().to_vec();
    if xi.len() > 10 {
        return Err(Failure(EXIT_INPUT, format!("{} slot formulas; the clause checks take at most 10", xi.len())));
    }
    let (mut held, mut skipped) = (0usize, 0usize);
    let mut failures = Vec::new();
    for facts in subsets(&xi) {
        let facts: Vec<Formula> = facts.into_iter().collect();
        for i in check_flat_clauses(&nb, &facts, a.samples, &mut rng).instances {
            if a.variant == Variant::J && i.clause == Clause::Implication {
                skipped += 1;
            } else if i.lhs == i.rhs {
                held += 1;
            } else {
                failures.push(format!("  {} clause fails for {} (facts: {})", i.clause, i.formula, join(&facts)));
            }
        }
    }
    ok &= failures.is_empty();
    let _ = write!(s, "flat clauses ({} {}): {held} hold, {} fail", a.variant, phi, failures.len());
    if skipped > 0 {
        let _ = write!(s, ", {skipped} implication samples skipped (J has no flat deduction)");
    }
    s.push('\n');
    for f in failures.iter().take(5) {
        let _ = writeln!(s, "{f}");
    }
    let _ = writeln!(s, "{}", if ok { "all properties hold" } else { "violations found" });
    Ok((if ok { EXIT_OK } else { EXIT_FALSE }, s))
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    (0..1u32 << items.len())
        .map(|m| items.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| x.clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate_the_powerset() {
        let s = subsets(&[1, 2, 3]);
        assert_eq!(s.len(), 8);
        assert!(s.contains(&BTreeSet::from([1, 3])));
    }

    #[test]
    fn simulation_errors_map_to_exit_codes() {
        let f = Formula::Bot;
        assert_eq!(simulation_failure(SimulationError::Fragment { formula: f.clone(), sign: "|" }).0, EXIT_INPUT);
        assert_eq!(simulation_failure(SimulationError::ProofRejected(vec![])).0, EXIT_FALSE);
        assert_eq!(simulation_failure(SimulationError::InvalidDerivation("x".into())).0, EXIT_INTERNAL);
    }
}
