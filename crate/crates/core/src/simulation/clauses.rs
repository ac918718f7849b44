use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::natural::NaturalBase;
use crate::atomic::{AtomicRule, Engine};
use crate::syntax::{BinOp, Formula, Quant};

/// The flat clauses checked at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    /// `|- flat(a & b)` iff `|- flat a` and `|- flat b`.
    Conjunction,
    /// `|- flat(a -> b)` iff `flat a |- flat b`.
    Implication,
    /// `|- flat(forall x a)` iff `|- flat(a[x := t])` for every term `t`.
    Universal,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Conjunction => "conjunction",
            Clause::Implication => "implication",
            Clause::Universal => "universal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseInstance {
    pub clause: Clause,
    pub formula: Formula,
    pub lhs: bool,
    pub rhs: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClauseReport {
    pub instances: Vec<ClauseInstance>,
}

impl ClauseReport {
    pub fn holds(&self) -> bool {
        self.instances.iter().all(|i| i.lhs == i.rhs)
    }

    pub fn failures(&self) -> Vec<&ClauseInstance> {
        self.instances.iter().filter(|i| i.lhs != i.rhs).collect()
    }

    pub fn count(&self, clause: Clause) -> usize {
        self.instances.iter().filter(|i| i.clause == clause).count()
    }
}

/// Checks the flat clauses in the extension of `nb` by the zero-level rules
/// `=> flat c` for `c` in `facts`. Up to `samples` formulas per clause are
/// drawn from the flattened formulas the clause applies to: conjunctions
/// without eigenvariables, implications whose antecedent has none, and
/// universals. Clauses whose connective the base lacks are skipped.
pub fn check_flat_clauses<R: Rng>(nb: &NaturalBase, facts: &[Formula], samples: usize, rng: &mut R) -> ClauseReport {
    let fm = nb.flat_map();
    let mut system = nb.system().clone();
    for c in facts {
        if let Some(a) = fm.flat(c) {
            system.insert(AtomicRule::fact(a));
        }
    }
    let mut engine = Engine::new(&system);
    let empty = BTreeSet::new();
    let proves = |engine: &mut Engine, f: &Formula| fm.flat(f).is_some_and(|a| engine.derivable(&empty, &a));

    let mut report = ClauseReport::default();
    let has_and = nb.variant().has(super::Schema::AndI);
    for clause in [Clause::Conjunction, Clause::Implication, Clause::Universal] {
        if clause == Clause::Conjunction && !has_and {
            continue;
        }
        let candidates: Vec<&Formula> = fm
            .xi()
            .iter()
            .filter(|f| match (clause, f) {
                (Clause::Conjunction, Formula::Bin(BinOp::And, ..)) => !fm.has_eigen(f),
                (Clause::Implication, Formula::Bin(BinOp::Imp, a, _)) => !fm.has_eigen(a),
                (Clause::Universal, Formula::Quant(Quant::Forall, ..)) => true,
                _ => false,
            })
            .collect();
        for f in candidates.choose_multiple(rng, samples) {
            let lhs = proves(&mut engine, f);
            let rhs = match f {
                Formula::Bin(BinOp::And, a, b) => proves(&mut engine, a) && proves(&mut engine, b),
                Formula::Bin(BinOp::Imp, a, b) => {
                    let ctx: BTreeSet<_> = fm.flat(a).into_iter().collect();
                    fm.flat(b).is_some_and(|g| engine.derivable(&ctx, &g))
                }
                Formula::Quant(_, x, body) => fm.terms().iter().all(|t| proves(&mut engine, &body.subst_closed(x, t))),
                _ => unreachable!("candidates are filtered by shape"),
            };
            report.instances.push(ClauseInstance { clause, formula: (*f).clone(), lhs, rhs });
        }
    }
    report
}
