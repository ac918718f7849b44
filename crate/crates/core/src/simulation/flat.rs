use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::SimulationError;
use crate::syntax::{Atom, BinOp, Formula, Quant, Signature, Term};

/// Upper bound on the number of flattened formulas.
pub(crate) const DOMAIN_LIMIT: usize = 200_000;

const NAME_ATTEMPTS: usize = 1000;

/// The flattening of a sequent: slot formulas `Ξ`, an injection of closed
/// formulas into fresh nullary atoms, eigenvariable constants standing for
/// variables, and the two decoders.
///
/// Open formulas are flattened through their eigen instance: every free `x`
/// is replaced by the constant `α(x)` first. The injection is extended on
/// demand while a natural base is generated; `Ξ` occupies its first indices.
#[derive(Debug, Clone)]
pub struct FlatMap {
    xi: Vec<Formula>,
    domain: Vec<Formula>,
    ids: HashMap<Formula, usize>,
    prefix: String,
    eigen: BTreeMap<String, Term>,
    witnesses: Vec<Term>,
    terms: Vec<Term>,
    source_atoms: BTreeSet<Atom>,
    signature: Signature,
}

fn pick(base: &str, used: &mut BTreeSet<String>) -> Result<String, SimulationError> {
    let candidate = std::iter::once(base.to_string())
        .chain((1..NAME_ATTEMPTS).map(|i| format!("{base}_{i}")))
        .find(|n| !used.contains(n))
        .ok_or_else(|| SimulationError::NamePoolExhausted(base.to_string()))?;
    used.insert(candidate.clone());
    Ok(candidate)
}

fn pick_prefix(used: &BTreeSet<String>) -> Result<String, SimulationError> {
    std::iter::once("flat_".to_string())
        .chain((1..NAME_ATTEMPTS).map(|i| format!("flat{i}_")))
        .find(|p| !used.iter().any(|n| n.starts_with(p.as_str())))
        .ok_or_else(|| SimulationError::NamePoolExhausted("flat atoms".into()))
}

fn count_exists(f: &Formula) -> usize {
    match f {
        Formula::Atom(_) | Formula::Bot => 0,
        Formula::Bin(_, l, r) => count_exists(l) + count_exists(r),
        Formula::Quant(q, _, body) => count_exists(body) + usize::from(*q == Quant::Exists),
    }
}

fn has_quantifier(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) | Formula::Bot => false,
        Formula::Bin(_, l, r) => has_quantifier(l) || has_quantifier(r),
        Formula::Quant(..) => true,
    }
}

/// `bot -> (bot -> bot)`, a formula whose flat is an axiom of both bases.
pub(crate) fn top() -> Formula {
    Formula::imp(Formula::Bot, Formula::imp(Formula::Bot, Formula::Bot))
}

/// Flattening for the sequent `gamma |> phi`.
pub fn make_flat_map(gamma: &[Formula], phi: &Formula, sig: &Signature) -> Result<FlatMap, SimulationError> {
    make_flat_map_with(gamma, phi, &[], sig)
}

/// Flattening for `gamma |> phi` whose slot set also covers the subformulas
/// of `extra`, such as the lines of a proof to be simulated.
pub fn make_flat_map_with(
    gamma: &[Formula],
    phi: &Formula,
    extra: &[Formula],
    sig: &Signature,
) -> Result<FlatMap, SimulationError> {
    let sequent: Vec<&Formula> = gamma.iter().chain(std::iter::once(phi)).collect();
    let inputs: Vec<&Formula> = sequent.iter().copied().chain(extra).collect();

    let mut used: BTreeSet<String> = sig.constants().iter().cloned().collect();
    used.extend(sig.functions().iter().map(|(f, _)| f.clone()));
    used.extend(sig.predicates().iter().map(|(p, _)| p.clone()));
    let mut vars = BTreeSet::new();
    for f in &inputs {
        used.extend(f.symbols());
        vars.extend(f.all_vars());
    }
    used.extend(vars.iter().cloned());
    let prefix = pick_prefix(&used)?;

    let mut eigen = BTreeMap::new();
    for x in &vars {
        let c = Term::constant(pick(&format!("ev_{x}"), &mut used)?);
        eigen.insert(x.clone(), c);
    }
    let n_exists: usize = sequent.iter().map(|f| count_exists(f)).sum();
    let mut signature = sig.clone();
    let mut witnesses = Vec::new();
    for k in 0..n_exists {
        let name = pick(&format!("wit_{k}"), &mut used)?;
        signature.ensure_constant(&name);
        witnesses.push(Term::constant(name));
    }

    let mut fm = FlatMap {
        xi: Vec::new(),
        domain: Vec::new(),
        ids: HashMap::new(),
        prefix,
        eigen,
        witnesses,
        terms: Vec::new(),
        source_atoms: BTreeSet::new(),
        signature: signature.clone(),
    };
    let barred: Vec<Formula> = inputs.iter().map(|f| fm.bar(f).expect("eigen constants cover every variable")).collect();

    let mut terms: Vec<Term> = signature.closed_terms().unwrap_or_default();
    terms.extend(fm.eigen.values().cloned());
    for f in &barred {
        terms.extend(f.subterms().into_iter().filter(Term::is_closed));
    }
    let mut seen = BTreeSet::new();
    terms.retain(|t| seen.insert(t.clone()));
    fm.terms = terms;
    for c in fm.eigen.values() {
        fm.signature.ensure_constant(&c.to_string());
    }

    let mut xi = BTreeSet::new();
    for f in &barred {
        f.subformulae_into(&fm.terms, &mut xi);
    }
    if inputs.iter().any(|f| has_quantifier(f)) {
        top().subformulae_into(&fm.terms, &mut xi);
    }
    for f in &xi {
        f.visit_atoms(&mut |a| {
            if a.is_closed() && !fm.atom_has_eigen(a) {
                fm.source_atoms.insert(a.clone());
            }
        });
    }
    fm.xi = xi.into_iter().collect();
    for f in fm.xi.clone() {
        fm.allocate(&f)?;
    }
    Ok(fm)
}

impl FlatMap {
    /// The slot formulas, in the order of their flat indices.
    pub fn xi(&self) -> &[Formula] {
        &self.xi
    }

    /// Every flattened formula; `Ξ` comes first.
    pub fn domain(&self) -> &[Formula] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// The closed terms quantifier instances range over: the signature's
    /// closed terms, the eigenvariable constants and closed terms of the input.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Fresh constants reserved as existential witnesses.
    pub fn witnesses(&self) -> &[Term] {
        &self.witnesses
    }

    /// The eigenvariable constant of each variable.
    pub fn eigenvariables(&self) -> &BTreeMap<String, Term> {
        &self.eigen
    }

    /// Closed, eigenvariable-free atoms occurring in `Ξ`.
    pub fn source_atoms(&self) -> &BTreeSet<Atom> {
        &self.source_atoms
    }

    /// The input signature extended with eigenvariables, witnesses and every
    /// flat predicate.
    pub fn signature(&self) -> Signature {
        let mut sig = self.signature.clone();
        for i in 0..self.domain.len() {
            sig.ensure_predicate(&self.name(i), 0);
        }
        sig
    }

    fn name(&self, i: usize) -> String {
        format!("{}{i}", self.prefix)
    }

    /// The eigen instance of `f`: every free variable replaced by its
    /// eigenvariable constant. `None` when a free variable has none.
    pub fn bar(&self, f: &Formula) -> Option<Formula> {
        let mut out = f.clone();
        for x in f.free_vars() {
            out = out.subst_closed(&x, self.eigen.get(&x)?);
        }
        Some(out)
    }

    fn atom_has_eigen(&self, a: &Atom) -> bool {
        a.args.iter().any(|t| self.eigen.values().any(|c| t.contains_term(c)))
    }

    pub fn has_eigen(&self, f: &Formula) -> bool {
        self.eigen.values().any(|c| f.contains_term(c))
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.flat(f).is_some()
    }

    /// The flat of `f`, if `f` (or its eigen instance) is in the domain.
    pub fn flat(&self, f: &Formula) -> Option<Atom> {
        let closed;
        let key = if f.is_closed() {
            f
        } else {
            closed = self.bar(f)?;
            &closed
        };
        self.ids.get(key).map(|&i| Atom::prop(self.name(i)))
    }

    /// The formula a flat atom stands for.
    pub fn formula_of(&self, atom: &Atom) -> Option<&Formula> {
        if !atom.args.is_empty() {
            return None;
        }
        let i: usize = atom.pred.strip_prefix(self.prefix.as_str())?.parse().ok()?;
        let f = self.domain.get(i)?;
        (self.name(i) == atom.pred).then_some(f)
    }

    /// Adds a closed formula and, recursively, its immediate subformulas.
    pub(crate) fn allocate(&mut self, f: &Formula) -> Result<Atom, SimulationError> {
        debug_assert!(f.is_closed());
        if let Some(&i) = self.ids.get(f) {
            return Ok(Atom::prop(self.name(i)));
        }
        if self.domain.len() >= DOMAIN_LIMIT {
            return Err(SimulationError::DomainTooLarge { limit: DOMAIN_LIMIT });
        }
        let i = self.domain.len();
        self.ids.insert(f.clone(), i);
        self.domain.push(f.clone());
        match f {
            Formula::Atom(_) | Formula::Bot => {}
            Formula::Bin(_, l, r) => {
                self.allocate(l)?;
                self.allocate(r)?;
            }
            Formula::Quant(_, x, body) => {
                for t in self.terms.clone() {
                    self.allocate(&body.subst_closed(x, &t))?;
                }
            }
        }
        Ok(Atom::prop(self.name(i)))
    }

    /// Replaces every eigenvariable constant by its variable.
    pub fn decode(&self, f: &Formula) -> Result<Formula, String> {
        let mut out = f.clone();
        for (x, c) in &self.eigen {
            if out.contains_term(c) {
                out = out.replace_term(c, &Term::var(x.clone())).map_err(|e| format!("decoding {c} captures {}", e.var))?;
            }
        }
        Ok(out)
    }

    /// The left decoder: closed formulas decode to themselves, formulas with
    /// eigenvariables to the universal closure of their decoding, and atoms
    /// outside the image to themselves.
    pub fn sharp_l(&self, atom: &Atom) -> Result<Formula, String> {
        match self.formula_of(atom) {
            None => Ok(Formula::Atom(atom.clone())),
            Some(f) if !self.has_eigen(f) => Ok(f.clone()),
            Some(f) => Ok(self.decode(f)?.universal_closure()),
        }
    }

    /// The right decoder: as the left one, but without the closure.
    pub fn sharp_r(&self, atom: &Atom) -> Result<Formula, String> {
        match self.formula_of(atom) {
            None => Ok(Formula::Atom(atom.clone())),
            Some(f) => self.decode(f),
        }
    }

    /// Checks the decoder laws on every atom of the domain and on the source
    /// atoms. Returns the first violation.
    pub fn check_decoder_laws(&self) -> Result<(), String> {
        for (i, f) in self.domain.iter().enumerate() {
            let a = Atom::prop(self.name(i));
            if self.formula_of(&a) != Some(f) || self.flat(f).as_ref() != Some(&a) {
                return Err(format!("{a} is not the flat of {f}"));
            }
            let (Ok(l), Ok(r)) = (self.sharp_l(&a), self.sharp_r(&a)) else {
                // Decoding may capture; such atoms are reported at use.
                continue;
            };
            if !self.has_eigen(f) {
                if l != *f || r != *f {
                    return Err(format!("decoders of {a} do not return {f}"));
                }
            } else {
                if l != r.universal_closure() {
                    return Err(format!("left decoder of {a} is not the closure of the right one"));
                }
                if self.flat(&r).as_ref() != Some(&a) {
                    return Err(format!("{a} does not re-flatten from its right decoding {r}"));
                }
            }
        }
        for a in &self.source_atoms {
            if self.formula_of(a).is_some() {
                return Err(format!("source atom {a} collides with a flat"));
            }
            if self.sharp_l(a) != self.sharp_r(a) {
                return Err(format!("decoders disagree on {a}"));
            }
        }
        Ok(())
    }
}

/// Whether `f` lies in the fragment `{bot, ->, forall}` (optionally with
/// `&`). On failure returns the offending sign.
pub fn in_classical_fragment(f: &Formula, allow_and: bool) -> Result<(), &'static str> {
    match f {
        Formula::Atom(_) | Formula::Bot => Ok(()),
        Formula::Bin(op, l, r) => {
            match op {
                BinOp::Imp => {}
                BinOp::And if allow_and => {}
                BinOp::And => return Err("&"),
                BinOp::Or => return Err("|"),
            }
            in_classical_fragment(l, allow_and)?;
            in_classical_fragment(r, allow_and)
        }
        Formula::Quant(Quant::Forall, _, body) => in_classical_fragment(body, allow_and),
        Formula::Quant(Quant::Exists, ..) => Err("exists"),
    }
}

/// Classically equivalent rewriting into `{bot, ->, forall}`:
/// `a & b` to `~(a -> ~b)`, `a | b` to `~a -> b`, `exists x a` to
/// `~forall x ~a`.
pub fn classical_translation(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Bot => f.clone(),
        Formula::Bin(op, l, r) => {
            let (l, r) = (classical_translation(l), classical_translation(r));
            match op {
                BinOp::Imp => Formula::imp(l, r),
                BinOp::And => Formula::not(Formula::imp(l, Formula::not(r))),
                BinOp::Or => Formula::imp(Formula::not(l), r),
            }
        }
        Formula::Quant(Quant::Forall, x, body) => Formula::forall(x.clone(), classical_translation(body)),
        Formula::Quant(Quant::Exists, x, body) => {
            Formula::not(Formula::forall(x.clone(), Formula::not(classical_translation(body))))
        }
    }
}
