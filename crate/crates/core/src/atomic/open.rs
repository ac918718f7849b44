use std::collections::{BTreeMap, BTreeSet};

use super::derive::Engine;
use super::rule::AtomicSystem;
use crate::syntax::{Atom, Term};

fn assignments(vars: &[String], terms: &[Term]) -> Vec<BTreeMap<String, Term>> {
    let mut out = vec![BTreeMap::new()];
    for x in vars {
        out = out
            .into_iter()
            .flat_map(|m| {
                terms.iter().map(move |t| {
                    let mut m = m.clone();
                    m.insert(x.clone(), t.clone());
                    m
                })
            })
            .collect();
    }
    out
}

fn apply(atom: &Atom, theta: &BTreeMap<String, Term>) -> Atom {
    theta.iter().fold(atom.clone(), |a, (x, t)| a.subst_var(x, t))
}

/// Every instance of every rule under maps from its variables into `terms`.
/// Maps need not be injective.
pub fn close_open_system(open: &AtomicSystem, terms: &[Term]) -> AtomicSystem {
    let mut out = AtomicSystem::new();
    for r in open.rules() {
        let vars: Vec<String> = r.vars().into_iter().collect();
        for theta in assignments(&vars, terms) {
            out.insert(theta.iter().fold(r.clone(), |r, (x, t)| r.subst_var(x, t)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenCorrespondence {
    /// Derivability of the open atom, reading open atoms literally.
    pub open_derivable: bool,
    /// The first instantiation whose instance is derivable in the closure.
    pub witness: Option<BTreeMap<String, Term>>,
    pub agree: bool,
}

/// Compares derivability of `goal` in the open system with derivability of
/// some instance of `goal` in the closure over `terms`.
pub fn open_correspondence_check(open: &AtomicSystem, goal: &Atom, terms: &[Term]) -> OpenCorrespondence {
    let open_derivable = Engine::new(open).derivable(&BTreeSet::new(), goal);
    let closure = close_open_system(open, terms);
    let mut engine = Engine::new(&closure);
    let mut vars = BTreeSet::new();
    for t in &goal.args {
        t.vars_into(&mut vars);
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let witness =
        assignments(&vars, terms).into_iter().find(|theta| engine.derivable(&BTreeSet::new(), &apply(goal, theta)));
    OpenCorrespondence { open_derivable, agree: open_derivable == witness.is_some(), witness }
}
