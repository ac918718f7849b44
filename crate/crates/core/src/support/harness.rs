use std::collections::BTreeSet;

use super::basis::Basis;
use super::eval::Evaluator;
use super::SupportError;
use crate::atomic::Engine;
use crate::syntax::{Atom, Formula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub formula: Formula,
    pub smaller: usize,
    pub larger: usize,
}

#[derive(Debug, Clone, Default)]
pub struct MonotonicityReport {
    pub formulas: usize,
    pub pairs_checked: usize,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One row per member: the two sides of a biconditional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub base: usize,
    pub lhs: bool,
    pub rhs: bool,
}

#[derive(Debug, Clone, Default)]
pub struct BiconditionalReport {
    pub rows: Vec<Row>,
}

impl BiconditionalReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.lhs == r.rhs)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.lhs != r.rhs)
    }
}

/// Property checks over one basis, sharing derivability engines and the
/// support memo between calls.
pub struct Harness<'a> {
    eval: Evaluator<'a>,
    engines: Vec<Engine>,
}

impl<'a> Harness<'a> {
    pub fn new(basis: &'a Basis) -> Self {
        Harness { eval: Evaluator::new(basis), engines: basis.systems().iter().map(Engine::new).collect() }
    }

    pub fn evaluator(&mut self) -> &mut Evaluator<'a> {
        &mut self.eval
    }

    /// For every sampled formula and every pair `B ⊑ C`, support at `B`
    /// implies support at `C`.
    pub fn check_monotonicity(&mut self, sample: &[Formula]) -> MonotonicityReport {
        let basis = self.eval.basis();
        let mut report = MonotonicityReport { formulas: sample.len(), ..Default::default() };
        for phi in sample {
            let m = self.eval.mask(phi);
            for b in m.ones() {
                let ext = basis.extension_mask(b);
                report.pairs_checked += ext.count_ones(..);
                for c in ext.ones() {
                    if !m.contains(c) {
                        report.violations.push(MonotonicityViolation { formula: phi.clone(), smaller: b, larger: c });
                    }
                }
            }
        }
        report
    }

    fn require_zero_complete(&self, atoms: &BTreeSet<Atom>) -> Result<(), SupportError> {
        match self.eval.basis().zero_complete_atoms() {
            Some(z) if atoms.is_subset(z) => Ok(()),
            _ => Err(SupportError::NotZeroComplete),
        }
    }

    /// `Q, P ⊢_B goal` iff for every `C ⊒ B` deriving all of `Q`,
    /// `P ⊢_C goal`.
    pub fn check_atomic_cut(
        &mut self,
        q: &BTreeSet<Atom>,
        p: &BTreeSet<Atom>,
        goal: &Atom,
    ) -> Result<BiconditionalReport, SupportError> {
        self.require_zero_complete(q)?;
        let basis = self.eval.basis();
        let qp: BTreeSet<Atom> = q.union(p).cloned().collect();
        let empty = BTreeSet::new();
        let mut rows = Vec::with_capacity(basis.len());
        for b in 0..basis.len() {
            let lhs = self.engines[b].derivable(&qp, goal);
            let ext: Vec<usize> = basis.extension_mask(b).ones().collect();
            let rhs = ext.into_iter().all(|c| {
                let e = &mut self.engines[c];
                !q.iter().all(|a| e.derivable(&empty, a)) || e.derivable(p, goal)
            });
            rows.push(Row { base: b, lhs, rhs });
        }
        Ok(BiconditionalReport { rows })
    }

    /// `P ⊩_B goal` iff `P ⊢_B goal`.
    pub fn check_atcomp(&mut self, p: &BTreeSet<Atom>, goal: &Atom) -> Result<BiconditionalReport, SupportError> {
        self.require_zero_complete(p)?;
        let ctx: Vec<Formula> = p.iter().cloned().map(Formula::Atom).collect();
        let sem = self.eval.inference_mask(&ctx, &Formula::Atom(goal.clone()));
        let rows = (0..self.engines.len())
            .map(|b| Row { base: b, lhs: sem.contains(b), rhs: self.engines[b].derivable(p, goal) })
            .collect();
        Ok(BiconditionalReport { rows })
    }
}

pub fn check_monotonicity(basis: &Basis, sample: &[Formula]) -> MonotonicityReport {
    Harness::new(basis).check_monotonicity(sample)
}

pub fn check_atomic_cut(
    basis: &Basis,
    q: &BTreeSet<Atom>,
    p: &BTreeSet<Atom>,
    goal: &Atom,
) -> Result<BiconditionalReport, SupportError> {
    Harness::new(basis).check_atomic_cut(q, p, goal)
}

pub fn check_atcomp(basis: &Basis, p: &BTreeSet<Atom>, goal: &Atom) -> Result<BiconditionalReport, SupportError> {
    Harness::new(basis).check_atcomp(p, goal)
}
