use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::flat::FlatMap;
use super::{SimulationError, Variant};
use crate::atomic::{AtomicRule, AtomicSystem, Level, Premise};
use crate::hilbert::SchemeId;
use crate::syntax::{Atom, Formula, Quant, Term};

/// The rule schemas of the natural bases. Axiom schemas yield zero-level
/// rules; `Mp` and `Gen` are first-level; `Efq`, `OrE` and `ExE` have a
/// free atom `P` as conclusion and the last two discharge hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    K,
    S,
    AllE,
    Mp,
    Gen,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ExI,
    NegI,
    Efq,
    ExE,
    Dne,
}

impl Schema {
    /// The Hilbert axiom scheme a zero-level schema flattens.
    pub fn axiom(self) -> Option<SchemeId> {
        Some(match self {
            Schema::K => SchemeId::K,
            Schema::S => SchemeId::S,
            Schema::AllE => SchemeId::AllE,
            Schema::AndI => SchemeId::AndI,
            Schema::AndE1 => SchemeId::AndE1,
            Schema::AndE2 => SchemeId::AndE2,
            Schema::OrI1 => SchemeId::OrI1,
            Schema::OrI2 => SchemeId::OrI2,
            Schema::ExI => SchemeId::ExI,
            Schema::NegI => SchemeId::NegI,
            Schema::Dne => SchemeId::Dne,
            Schema::Mp | Schema::Gen | Schema::OrE | Schema::Efq | Schema::ExE => return None,
        })
    }

    /// The zero-level schema for an axiom scheme. `OrE` and `EFQ` have rule
    /// forms instead and map to nothing.
    pub fn from_scheme(scheme: SchemeId) -> Option<Schema> {
        Some(match scheme {
            SchemeId::K => Schema::K,
            SchemeId::S => Schema::S,
            SchemeId::AllE => Schema::AllE,
            SchemeId::AndI => Schema::AndI,
            SchemeId::AndE1 => Schema::AndE1,
            SchemeId::AndE2 => Schema::AndE2,
            SchemeId::OrI1 => Schema::OrI1,
            SchemeId::OrI2 => Schema::OrI2,
            SchemeId::ExI => Schema::ExI,
            SchemeId::NegI => Schema::NegI,
            SchemeId::Dne => Schema::Dne,
            SchemeId::OrE | SchemeId::Efq => return None,
        })
    }

    fn slots(self) -> usize {
        match self {
            Schema::Dne => 1,
            Schema::S => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Schema::Mp => "MP",
            Schema::Gen => "GEN",
            Schema::OrE => "OrE",
            Schema::Efq => "EFQ",
            Schema::ExE => "ExE",
            other => return write!(f, "flat({})", other.axiom().expect("axiom schema")),
        };
        write!(f, "flat({name})")
    }
}

/// A natural base: the generated atomic system, the schema each rule
/// instantiates, and the flat map extended to every formula the rules
/// mention.
#[derive(Debug, Clone)]
pub struct NaturalBase {
    variant: Variant,
    flat: FlatMap,
    system: AtomicSystem,
    origins: Vec<Schema>,
    index: HashMap<AtomicRule, usize>,
    p_universe: Vec<Atom>,
}

impl NaturalBase {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn flat_map(&self) -> &FlatMap {
        &self.flat
    }

    pub fn system(&self) -> &AtomicSystem {
        &self.system
    }

    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_empty()
    }

    /// The schema rule `i` was generated from.
    pub fn origin(&self, i: usize) -> Schema {
        self.origins[i]
    }

    pub fn rule_index(&self, rule: &AtomicRule) -> Option<usize> {
        self.index.get(rule).copied()
    }

    /// The atoms the `P` slot of `EFQ`, `OrE` and `ExE` ranges over.
    pub fn p_universe(&self) -> &[Atom] {
        &self.p_universe
    }

    pub fn schema_counts(&self) -> BTreeMap<Schema, usize> {
        let mut out = BTreeMap::new();
        for s in &self.origins {
            *out.entry(*s).or_insert(0) += 1;
        }
        out
    }

    /// Whether every rule is zero- or first-level.
    pub fn is_first_level(&self) -> bool {
        self.system.rules().iter().all(|r| r.level() != Level::Second)
    }

    fn add(&mut self, rule: AtomicRule, schema: Schema) {
        if self.system.insert(rule.clone()) {
            self.index.insert(rule, self.origins.len());
            self.origins.push(schema);
        }
    }

    fn flat_of(&self, f: &Formula) -> Atom {
        self.flat.flat(f).expect("subformulas are flattened with their parents")
    }
}

/// Generates the natural base of `variant` over `fm`.
///
/// Axiom schemas are instantiated with slots ranging over `Ξ` and terms over
/// the flat map's terms. `MP` is instantiated for every flattened
/// implication and `GEN` for every flattened implication whose consequent
/// mentions an eigenvariable absent from its antecedent; instances whose
/// premises have no flat could never fire and are omitted. The `P` slot
/// ranges over the flats of `Ξ` and the source atoms.
pub fn build_natural_base(fm: &FlatMap, variant: Variant) -> Result<NaturalBase, SimulationError> {
    let xi = fm.xi().to_vec();
    let mut p_universe: Vec<Atom> = xi.iter().map(|f| fm.flat(f).expect("slot formulas are flattened")).collect();
    p_universe.extend(fm.source_atoms().iter().cloned());
    let mut nb = NaturalBase {
        variant,
        flat: fm.clone(),
        system: AtomicSystem::new(),
        origins: Vec::new(),
        index: HashMap::new(),
        p_universe,
    };
    let terms = fm.terms().to_vec();

    for &schema in variant.schemas() {
        let Some(scheme) = schema.axiom() else { continue };
        let mut instances = Vec::new();
        match schema {
            Schema::AllE | Schema::ExI => {
                let q = if schema == Schema::AllE { Quant::Forall } else { Quant::Exists };
                for f in &xi {
                    if let Formula::Quant(fq, x, body) = f {
                        if *fq == q {
                            for t in &terms {
                                instances.push(scheme.quantified_instance(body, x, t)?.0);
                            }
                        }
                    }
                }
            }
            _ => {
                for parts in tuples(&xi, schema.slots()) {
                    instances.push(scheme.instance(&parts)?.0);
                }
            }
        }
        for f in instances {
            let a = nb.flat.allocate(&f)?;
            nb.add(AtomicRule::fact(a), schema);
        }
    }

    let eigen: Vec<(String, Term)> = fm.eigenvariables().iter().map(|(x, c)| (x.clone(), c.clone())).collect();
    let mut cursor = 0;
    while cursor < nb.flat.len() {
        let f = nb.flat.domain()[cursor].clone();
        cursor += 1;
        let Some((a, b)) = f.as_imp() else { continue };
        let fa = nb.flat_of(&f);
        nb.add(AtomicRule::first([nb.flat_of(a), fa.clone()], nb.flat_of(b)), Schema::Mp);
        for (x, c) in &eigen {
            if a.contains_term(c) {
                continue;
            }
            let Ok(body) = b.replace_term(c, &Term::var(x.clone())) else { continue };
            let q = Formula::forall(x.clone(), body);
            if !b.contains_term(c) && !nb.flat.contains(&q) {
                continue;
            }
            let target = nb.flat.allocate(&Formula::imp(a.clone(), q))?;
            nb.add(AtomicRule::first([fa.clone()], target), Schema::Gen);
        }
    }

    if variant.has(Schema::Efq) {
        if let Some(bot) = nb.flat.flat(&Formula::Bot) {
            for p in nb.p_universe.clone() {
                nb.add(AtomicRule::first([bot.clone()], p), Schema::Efq);
            }
        }
    }
    if variant.has(Schema::OrE) {
        let plain: Vec<&Formula> = xi.iter().filter(|f| !fm.has_eigen(f)).collect();
        for a in &plain {
            for b in &plain {
                let Some(d) = nb.flat.flat(&Formula::or((*a).clone(), (*b).clone())) else { continue };
                let (fa, fb) = (nb.flat_of(a), nb.flat_of(b));
                for p in nb.p_universe.clone() {
                    let premises = vec![
                        Premise::new([fa.clone()], p.clone()),
                        Premise::new([fb.clone()], p.clone()),
                        Premise::new([], d.clone()),
                    ];
                    nb.add(AtomicRule::new(premises, p), Schema::OrE);
                }
            }
        }
    }
    if variant.has(Schema::ExE) {
        for f in &xi {
            let Formula::Quant(Quant::Exists, x, body) = f else { continue };
            if fm.has_eigen(f) {
                continue;
            }
            let ex = nb.flat_of(f);
            for t in fm.witnesses() {
                let inst = nb.flat.allocate(&body.subst_closed(x, t))?;
                for p in nb.p_universe.clone() {
                    // The witness must stay out of the conclusion.
                    if nb.flat.formula_of(&p).is_some_and(|g| g.contains_term(t)) {
                        continue;
                    }
                    let premises = vec![Premise::new([], ex.clone()), Premise::new([inst.clone()], p.clone())];
                    nb.add(AtomicRule::new(premises, p), Schema::ExE);
                }
            }
        }
    }
    Ok(nb)
}

/// All `k`-tuples over `items`, in lexicographic index order.
fn tuples(items: &[Formula], k: usize) -> Vec<Vec<&Formula>> {
    let mut out: Vec<Vec<&Formula>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |f| {
                    let mut next = prefix.clone();
                    next.push(f);
                    next
                })
            })
            .collect();
    }
    out
}
