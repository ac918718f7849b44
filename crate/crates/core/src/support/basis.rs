use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use super::SupportError;
use crate::atomic::{AtomicRule, AtomicSystem, Engine};
use crate::syntax::{Atom, Term};

/// A finite basis: a set of atomic systems closed under nothing in
/// particular, with the atom universe that the (At), (⊥), (∨) and (∃)
/// clauses range over and the closed terms that quantifiers range over.
#[derive(Debug, Clone)]
pub struct Basis {
    systems: Vec<AtomicSystem>,
    universe: Vec<Atom>,
    terms: Vec<Term>,
    /// `ext[i]` holds every `j` with `systems[j] ⊇ systems[i]`.
    ext: Vec<FixedBitSet>,
    /// Atoms derivable from the empty context, per system.
    theorems: Vec<BTreeSet<Atom>>,
    zero_complete_over: Option<BTreeSet<Atom>>,
    union_closed: bool,
}

fn key(sys: &AtomicSystem) -> BTreeSet<AtomicRule> {
    sys.rules().iter().cloned().collect()
}

impl Basis {
    /// Builds a basis. The universe is `declared` plus every atom occurring
    /// in a rule. Duplicate systems are merged.
    pub fn new(systems: Vec<AtomicSystem>, declared: impl IntoIterator<Item = Atom>, terms: Vec<Term>) -> Self {
        let mut seen = HashMap::new();
        let mut unique = Vec::new();
        for s in systems {
            if seen.insert(key(&s), unique.len()).is_none() {
                unique.push(s);
            }
        }
        let mut universe: BTreeSet<Atom> = declared.into_iter().collect();
        for s in &unique {
            universe.extend(s.atoms());
        }
        let m = unique.len();
        let mut ext = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            for j in 0..m {
                if unique[i].is_subsystem_of(&unique[j]) {
                    ext[i].insert(j);
                }
            }
        }
        let theorems = unique.iter().map(|s| Engine::new(s).consequences(&BTreeSet::new())).collect();
        let union_closed = (0..m).all(|i| {
            (i + 1..m).all(|j| {
                let u = key(&unique[i].union(&unique[j]));
                seen.contains_key(&u)
            })
        });
        Basis {
            systems: unique,
            universe: universe.into_iter().collect(),
            terms,
            ext,
            theorems,
            zero_complete_over: None,
            union_closed,
        }
    }

    /// All subsets of `pool`.
    pub fn powerset_of_pool(pool: &[AtomicRule], declared: impl IntoIterator<Item = Atom>, terms: Vec<Term>) -> Self {
        Basis::new(powerset(pool), declared, terms)
    }

    /// Closes `seeds` under adding `=> q` for `q` in `atoms`, and records
    /// the zero-level completeness flag.
    pub fn zero_complete(
        seeds: Vec<AtomicSystem>,
        atoms: &[Atom],
        declared: impl IntoIterator<Item = Atom>,
        terms: Vec<Term>,
    ) -> Self {
        let mut basis = Basis::new(zero_closure(seeds, atoms), declared, terms);
        basis.zero_complete_over = Some(atoms.iter().cloned().collect());
        debug_assert!(basis.is_zero_complete_over(atoms));
        basis
    }

    /// Declares zero-level completeness over `atoms`, verifying it.
    pub fn declare_zero_complete(mut self, atoms: &[Atom]) -> Result<Self, SupportError> {
        if !self.is_zero_complete_over(atoms) {
            return Err(SupportError::NotZeroComplete);
        }
        self.zero_complete_over = Some(atoms.iter().cloned().collect());
        Ok(self)
    }

    pub fn is_zero_complete_over(&self, atoms: &[Atom]) -> bool {
        let keys: std::collections::HashSet<BTreeSet<AtomicRule>> = self.systems.iter().map(key).collect();
        self.systems.iter().all(|s| {
            atoms.iter().all(|q| {
                let mut k = key(s);
                k.insert(AtomicRule::fact(q.clone()));
                keys.contains(&k)
            })
        })
    }

    /// The atoms the basis was declared zero-level complete over.
    pub fn zero_complete_atoms(&self) -> Option<&BTreeSet<Atom>> {
        self.zero_complete_over.as_ref()
    }

    pub fn is_union_closed(&self) -> bool {
        self.union_closed
    }

    pub fn systems(&self) -> &[AtomicSystem] {
        &self.systems
    }

    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    pub fn universe(&self) -> &[Atom] {
        &self.universe
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn index_of(&self, sys: &AtomicSystem) -> Option<usize> {
        self.systems.iter().position(|s| s == sys)
    }

    /// Indices of the members extending member `i`, including `i`.
    pub fn extension_mask(&self, i: usize) -> &FixedBitSet {
        &self.ext[i]
    }

    /// Every member of the basis extending `sys`.
    pub fn extensions(&self, sys: &AtomicSystem) -> Result<Vec<&AtomicSystem>, SupportError> {
        let i = self.index_of(sys).ok_or(SupportError::NotInBasis)?;
        Ok(self.ext[i].ones().map(|j| &self.systems[j]).collect())
    }

    pub(crate) fn theorems(&self, i: usize) -> &BTreeSet<Atom> {
        &self.theorems[i]
    }
}

pub(crate) fn powerset(pool: &[AtomicRule]) -> Vec<AtomicSystem> {
    assert!(pool.len() < 24, "pool too large for a powerset basis");
    (0u32..1 << pool.len())
        .map(|bits| AtomicSystem::from_rules(pool.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, r)| r.clone())))
        .collect()
}

pub(crate) fn zero_closure(seeds: Vec<AtomicSystem>, atoms: &[Atom]) -> Vec<AtomicSystem> {
    let mut seen: std::collections::HashSet<BTreeSet<AtomicRule>> = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut queue: std::collections::VecDeque<AtomicSystem> = seeds.into();
    while let Some(s) = queue.pop_front() {
        if !seen.insert(key(&s)) {
            continue;
        }
        for q in atoms {
            let fact = AtomicRule::fact(q.clone());
            if !s.contains(&fact) {
                let mut t = s.clone();
                t.insert(fact);
                queue.push_back(t);
            }
        }
        out.push(s);
    }
    out
}
