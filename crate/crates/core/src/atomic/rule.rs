use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::syntax::{Atom, Term};

/// One premise `hyps => conclusion` of an atomic rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Premise {
    pub hyps: BTreeSet<Atom>,
    pub conclusion: Atom,
}

impl Premise {
    pub fn new(hyps: impl IntoIterator<Item = Atom>, conclusion: Atom) -> Self {
        Premise { hyps: hyps.into_iter().collect(), conclusion }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Zero,
    First,
    Second,
}

/// An atomic rule `{H1 => P1, ..., Hn => Pn} => P`. Atoms may be open, in
/// which case the rule is an open rule and only its closure is meaningful for
/// closed derivability.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicRule {
    pub premises: Vec<Premise>,
    pub conclusion: Atom,
}

pub type OpenAtomicRule = AtomicRule;

impl AtomicRule {
    pub fn new(premises: Vec<Premise>, conclusion: Atom) -> Self {
        AtomicRule { premises, conclusion }
    }

    pub fn fact(conclusion: Atom) -> Self {
        AtomicRule { premises: Vec::new(), conclusion }
    }

    /// A first-level rule from plain atom premises.
    pub fn first(premises: impl IntoIterator<Item = Atom>, conclusion: Atom) -> Self {
        AtomicRule { premises: premises.into_iter().map(|p| Premise::new([], p)).collect(), conclusion }
    }

    pub fn level(&self) -> Level {
        if self.premises.is_empty() {
            Level::Zero
        } else if self.premises.iter().all(|p| p.hyps.is_empty()) {
            Level::First
        } else {
            Level::Second
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.premises
            .iter()
            .flat_map(|p| p.hyps.iter().chain(std::iter::once(&p.conclusion)))
            .chain(std::iter::once(&self.conclusion))
    }

    pub fn is_closed(&self) -> bool {
        self.atoms().all(Atom::is_closed)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            for t in &a.args {
                t.vars_into(&mut out);
            }
        }
        out
    }

    pub fn subst_var(&self, x: &str, t: &Term) -> AtomicRule {
        AtomicRule {
            premises: self
                .premises
                .iter()
                .map(|p| Premise {
                    hyps: p.hyps.iter().map(|a| a.subst_var(x, t)).collect(),
                    conclusion: p.conclusion.subst_var(x, t),
                })
                .collect(),
            conclusion: self.conclusion.subst_var(x, t),
        }
    }
}

fn join(atoms: impl IntoIterator<Item = impl fmt::Display>) -> String {
    atoms.into_iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for AtomicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level() {
            Level::Zero => write!(f, "=> {}", self.conclusion),
            Level::First => write!(f, "{} => {}", join(self.premises.iter().map(|p| &p.conclusion)), self.conclusion),
            Level::Second => {
                let prems: Vec<String> =
                    self.premises.iter().map(|p| format!("[{}] => {}", join(&p.hyps), p.conclusion)).collect();
                write!(f, "{{ {} }} => {}", prems.join(" ; "), self.conclusion)
            }
        }
    }
}

/// A finite set of atomic rules, kept in insertion order without duplicates.
#[derive(Debug, Clone, Default)]
pub struct AtomicSystem {
    rules: Vec<AtomicRule>,
    index: HashSet<AtomicRule>,
}

impl PartialEq for AtomicSystem {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

impl Eq for AtomicSystem {}

impl AtomicSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rules(rules: impl IntoIterator<Item = AtomicRule>) -> Self {
        let mut s = Self::new();
        for r in rules {
            s.insert(r);
        }
        s
    }

    /// Adds a rule; returns false if it was already present.
    pub fn insert(&mut self, rule: AtomicRule) -> bool {
        if !self.index.insert(rule.clone()) {
            return false;
        }
        self.rules.push(rule);
        true
    }

    pub fn contains(&self, rule: &AtomicRule) -> bool {
        self.index.contains(rule)
    }

    pub fn rules(&self) -> &[AtomicRule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> &AtomicRule {
        &self.rules[i]
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn union(&self, other: &AtomicSystem) -> AtomicSystem {
        let mut out = self.clone();
        for r in &other.rules {
            out.insert(r.clone());
        }
        out
    }

    pub fn is_subsystem_of(&self, other: &AtomicSystem) -> bool {
        self.rules.iter().all(|r| other.index.contains(r))
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(|r| r.atoms().cloned()).collect()
    }
}

impl fmt::Display for AtomicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// How a judgment `context |- conclusion` was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Ref,
    /// Application of the rule with this index in the system.
    App { rule: usize, premises: Vec<BaseDerivation> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseDerivation {
    pub context: BTreeSet<Atom>,
    pub conclusion: Atom,
    pub step: Step,
}

impl BaseDerivation {
    /// Adds `extra` to every context in the tree.
    pub fn weaken(&self, extra: &BTreeSet<Atom>) -> BaseDerivation {
        BaseDerivation {
            context: self.context.union(extra).cloned().collect(),
            conclusion: self.conclusion.clone(),
            step: match &self.step {
                Step::Ref => Step::Ref,
                Step::App { rule, premises } => {
                    Step::App { rule: *rule, premises: premises.iter().map(|p| p.weaken(extra)).collect() }
                }
            },
        }
    }

    pub fn size(&self) -> usize {
        match &self.step {
            Step::Ref => 1,
            Step::App { premises, .. } => 1 + premises.iter().map(BaseDerivation::size).sum::<usize>(),
        }
    }

    fn write_indented(&self, sys: &AtomicSystem, depth: usize, out: &mut String) {
        use std::fmt::Write as _;
        let pad = "  ".repeat(depth);
        let ctx = join(&self.context);
        match &self.step {
            Step::Ref => {
                let _ = writeln!(out, "{pad}[{ctx}] |- {}  by ref", self.conclusion);
            }
            Step::App { rule, premises } => {
                let _ = writeln!(out, "{pad}[{ctx}] |- {}  by app {}", self.conclusion, sys.rule(*rule));
                for p in premises {
                    p.write_indented(sys, depth + 1, out);
                }
            }
        }
    }

    /// An indented rendering citing the rules of `sys`.
    pub fn render(&self, sys: &AtomicSystem) -> String {
        let mut out = String::new();
        self.write_indented(sys, 0, &mut out);
        out
    }
}

/// Re-checks a derivation against the inductive definition of derivability.
pub fn validate_derivation(sys: &AtomicSystem, d: &BaseDerivation) -> Result<(), String> {
    match &d.step {
        Step::Ref => {
            if d.context.contains(&d.conclusion) {
                Ok(())
            } else {
                Err(format!("ref node for {} outside its context", d.conclusion))
            }
        }
        Step::App { rule, premises } => {
            let r = sys.rules().get(*rule).ok_or_else(|| format!("rule index {rule} out of range"))?;
            if r.conclusion != d.conclusion {
                return Err(format!("rule {r} does not conclude {}", d.conclusion));
            }
            if r.premises.len() != premises.len() {
                return Err(format!("rule {r} applied to {} subderivations", premises.len()));
            }
            for (p, sub) in r.premises.iter().zip(premises) {
                let ctx: BTreeSet<Atom> = d.context.union(&p.hyps).cloned().collect();
                if sub.context != ctx || sub.conclusion != p.conclusion {
                    return Err(format!("subderivation of {} does not match premise of {r}", sub.conclusion));
                }
                validate_derivation(sys, sub)?;
            }
            Ok(())
        }
    }
}
