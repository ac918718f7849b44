use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::basis::Basis;
use crate::syntax::{Atom, BinOp, Formula, Quant};

/// Evaluates support over every member of a basis at once. The value of a
/// formula is the set of member indices supporting it; results are memoized
/// per formula, so one evaluator answers many queries over the same basis.
pub struct Evaluator<'a> {
    basis: &'a Basis,
    memo: HashMap<Formula, FixedBitSet>,
    atom_masks: HashMap<Atom, FixedBitSet>,
    bottom: FixedBitSet,
    calls: usize,
    descent_violations: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(basis: &'a Basis) -> Self {
        let m = basis.len();
        let mut ev = Evaluator {
            basis,
            memo: HashMap::new(),
            atom_masks: HashMap::new(),
            bottom: FixedBitSet::with_capacity(m),
            calls: 0,
            descent_violations: 0,
        };
        let mut bottom = ev.all();
        for p in basis.universe() {
            bottom.intersect_with(&ev.atom_mask(p));
        }
        ev.bottom = bottom;
        ev
    }

    pub fn basis(&self) -> &'a Basis {
        self.basis
    }

    fn all(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.basis.len());
        s.insert_range(..);
        s
    }

    pub fn atom_mask(&mut self, p: &Atom) -> FixedBitSet {
        if let Some(m) = self.atom_masks.get(p) {
            return m.clone();
        }
        let mut m = FixedBitSet::with_capacity(self.basis.len());
        for i in 0..self.basis.len() {
            if self.basis.theorems(i).contains(p) {
                m.insert(i);
            }
        }
        self.atom_masks.insert(p.clone(), m.clone());
        m
    }

    /// Members `B` such that every extension in `a` lies in `b`.
    pub fn inf_mask(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.basis.len());
        for i in 0..self.basis.len() {
            let ext = self.basis.extension_mask(i);
            if ext.intersection(a).all(|j| b.contains(j)) {
                out.insert(i);
            }
        }
        out
    }

    /// Members none of whose extensions lie in `bad`.
    fn avoid_mask(&self, bad: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.basis.len());
        for i in 0..self.basis.len() {
            if self.basis.extension_mask(i).is_disjoint(bad) {
                out.insert(i);
            }
        }
        out
    }

    /// Number of clause evaluations performed so far.
    pub fn calls(&self) -> usize {
        self.calls
    }

    /// Recursive calls whose goal was not lighter than the caller's. Always
    /// zero; exposed so tests can assert the induction measure.
    pub fn descent_violations(&self) -> usize {
        self.descent_violations
    }

    fn descend(&mut self, parent: &Formula, child: &Formula) -> FixedBitSet {
        if !matches!(child, Formula::Atom(_)) && child.weight() >= parent.weight() {
            self.descent_violations += 1;
        }
        self.mask(child)
    }

    /// The members supporting `phi`. Open formulas are read as their
    /// universal closure.
    pub fn mask(&mut self, phi: &Formula) -> FixedBitSet {
        if !phi.is_closed() {
            return self.mask(&phi.universal_closure());
        }
        if let Some(m) = self.memo.get(phi) {
            return m.clone();
        }
        self.calls += 1;
        let out = match phi {
            Formula::Atom(p) => self.atom_mask(p),
            Formula::Bot => self.bottom.clone(),
            Formula::Bin(BinOp::And, a, b) => {
                let mut m = self.descend(phi, a);
                m.intersect_with(&self.descend(phi, b));
                m
            }
            Formula::Bin(BinOp::Imp, a, b) => {
                let ma = self.descend(phi, a);
                let mb = self.descend(phi, b);
                self.inf_mask(&ma, &mb)
            }
            Formula::Bin(BinOp::Or, a, b) => {
                let ma = self.descend(phi, a);
                let mb = self.descend(phi, b);
                let bad = self.eliminations_failing(&[ma, mb]);
                self.avoid_mask(&bad)
            }
            Formula::Quant(Quant::Forall, x, body) => {
                let mut m = self.all();
                for t in self.basis.terms().to_vec() {
                    let inst = body.subst_closed(x, &t);
                    m.intersect_with(&self.descend(phi, &inst));
                }
                m
            }
            Formula::Quant(Quant::Exists, x, body) => {
                let cases: Vec<FixedBitSet> = self
                    .basis
                    .terms()
                    .to_vec()
                    .iter()
                    .map(|t| {
                        let inst = body.subst_closed(x, t);
                        self.descend(phi, &inst)
                    })
                    .collect();
                let bad = self.eliminations_failing(&cases);
                self.avoid_mask(&bad)
            }
        };
        self.memo.insert(phi.clone(), out.clone());
        out
    }

    /// Members `C` with an atom `P` such that every case supports `P` at `C`
    /// by (Inf) while `P` itself is not supported at `C`.
    fn eliminations_failing(&mut self, cases: &[FixedBitSet]) -> FixedBitSet {
        let mut bad = FixedBitSet::with_capacity(self.basis.len());
        for p in self.basis.universe().to_vec() {
            let mp = self.atom_mask(&p);
            let mut all_cases = self.all();
            for c in cases {
                all_cases.intersect_with(&self.inf_mask(c, &mp));
            }
            all_cases.difference_with(&mp);
            bad.union_with(&all_cases);
        }
        bad
    }

    /// Members `B` with `context ⊩_B goal` by (Inf).
    pub fn inference_mask(&mut self, context: &[Formula], goal: &Formula) -> FixedBitSet {
        let mut hyps = self.all();
        for g in context {
            hyps.intersect_with(&self.mask(g));
        }
        let goal = self.mask(goal);
        self.inf_mask(&hyps, &goal)
    }

    pub fn supports(&mut self, base: usize, context: &[Formula], goal: &Formula) -> bool {
        if context.is_empty() {
            self.mask(goal).contains(base)
        } else {
            self.inference_mask(context, goal).contains(base)
        }
    }

    /// `context ⊩ goal`: support in every member.
    pub fn supports_valid(&mut self, context: &[Formula], goal: &Formula) -> bool {
        let m = self.inference_mask(context, goal);
        m.count_ones(..) == self.basis.len()
    }
}
