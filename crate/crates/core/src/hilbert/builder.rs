use super::axioms::{SchemeId, SystemId};
use super::proof::{HilbertProof, Justification, Line};
use super::ElabError;
use crate::syntax::{Formula, Instantiation, Term};

/// Appends lines to a proof and returns 1-based line numbers. Every helper
/// records explicit instantiations so the output checks without search.
pub(crate) struct ProofBuilder {
    proof: HilbertProof,
}

impl ProofBuilder {
    pub fn new(system: SystemId, context: Vec<Formula>) -> Self {
        ProofBuilder { proof: HilbertProof::new(system, context) }
    }

    pub fn finish(self) -> HilbertProof {
        self.proof
    }

    pub fn len(&self) -> usize {
        self.proof.lines.len()
    }

    pub fn formula(&self, n: usize) -> &Formula {
        &self.proof.lines[n - 1].formula
    }

    fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.proof.lines.push(Line { formula, justification });
        self.proof.lines.len()
    }

    pub fn hyp(&mut self, f: &Formula) -> usize {
        self.push(f.clone(), Justification::Hypothesis)
    }

    pub fn axiom(&mut self, scheme: SchemeId, parts: &[&Formula]) -> Result<usize, ElabError> {
        let (f, inst) = scheme.instance(parts)?;
        Ok(self.push(f, Justification::Axiom { scheme, inst: Some(inst) }))
    }

    pub fn quantified_axiom(&mut self, scheme: SchemeId, body: &Formula, x: &str, t: &Term) -> Result<usize, ElabError> {
        let (f, inst) = scheme.quantified_instance(body, x, t)?;
        Ok(self.push(f, Justification::Axiom { scheme, inst: Some(inst) }))
    }

    pub fn axiom_with(&mut self, formula: Formula, scheme: SchemeId, inst: Option<Instantiation>) -> usize {
        self.push(formula, Justification::Axiom { scheme, inst })
    }

    pub fn mp(&mut self, minor: usize, major: usize) -> Result<usize, ElabError> {
        let (ant, cons) = self.formula(major).as_imp().ok_or(ElabError::Internal("modus ponens on non-implication"))?;
        if ant != self.formula(minor) {
            return Err(ElabError::Internal("modus ponens antecedent mismatch"));
        }
        let cons = cons.clone();
        Ok(self.push(cons, Justification::ModusPonens(minor, major)))
    }

    pub fn gen(&mut self, n: usize, x: &str) -> Result<usize, ElabError> {
        let (psi, body) = self.formula(n).as_imp().ok_or(ElabError::Internal("generalization on non-implication"))?;
        let f = Formula::imp(psi.clone(), Formula::forall(x, body.clone()));
        Ok(self.push(f, Justification::Generalization(n, x.to_string())))
    }

    pub fn exi(&mut self, n: usize, x: &str) -> Result<usize, ElabError> {
        let (body, psi) = self.formula(n).as_imp().ok_or(ElabError::Internal("instantiation on non-implication"))?;
        let f = Formula::imp(Formula::exists(x, body.clone()), psi.clone());
        Ok(self.push(f, Justification::ExistentialInstantiation(n, x.to_string())))
    }

    /// Copies all lines of `other`, shifting references. Returns the line of
    /// its conclusion.
    pub fn append(&mut self, other: &HilbertProof) -> usize {
        let offset = self.proof.lines.len();
        for l in &other.lines {
            let justification = match &l.justification {
                Justification::ModusPonens(i, j) => Justification::ModusPonens(i + offset, j + offset),
                Justification::Generalization(i, x) => Justification::Generalization(i + offset, x.clone()),
                Justification::ExistentialInstantiation(i, x) => {
                    Justification::ExistentialInstantiation(i + offset, x.clone())
                }
                j => j.clone(),
            };
            self.push(l.formula.clone(), justification);
        }
        self.proof.lines.len()
    }

    /// `a -> a`.
    pub fn identity(&mut self, a: &Formula) -> Result<usize, ElabError> {
        let aa = Formula::imp(a.clone(), a.clone());
        let s = self.axiom(SchemeId::S, &[a, &aa, a])?;
        let k1 = self.axiom(SchemeId::K, &[a, &aa])?;
        let m = self.mp(k1, s)?;
        let k2 = self.axiom(SchemeId::K, &[a, a])?;
        self.mp(k2, m)
    }

    /// From line `b` derive `a -> b`.
    pub fn weaken(&mut self, a: &Formula, b: usize) -> Result<usize, ElabError> {
        let bf = self.formula(b).clone();
        let k = self.axiom(SchemeId::K, &[&bf, a])?;
        self.mp(b, k)
    }

    /// From `a -> (b -> c)` and `a -> b` derive `a -> c`.
    pub fn s_apply(&mut self, abc: usize, ab: usize) -> Result<usize, ElabError> {
        let (a, bc) = self.formula(abc).as_imp().ok_or(ElabError::Internal("s_apply shape"))?;
        let (b, c) = bc.as_imp().ok_or(ElabError::Internal("s_apply shape"))?;
        let (a, b, c) = (a.clone(), b.clone(), c.clone());
        let s = self.axiom(SchemeId::S, &[&a, &b, &c])?;
        let m = self.mp(abc, s)?;
        self.mp(ab, m)
    }

    /// From `a -> b` and `b -> c` derive `a -> c`.
    pub fn compose(&mut self, ab: usize, bc: usize) -> Result<usize, ElabError> {
        let a = self.formula(ab).as_imp().ok_or(ElabError::Internal("compose shape"))?.0.clone();
        let lifted = self.weaken(&a, bc)?;
        self.s_apply(lifted, ab)
    }

    /// From `p -> (q -> r)` derive `q -> (p -> r)`.
    pub fn perm(&mut self, pqr: usize) -> Result<usize, ElabError> {
        let (p, qr) = self.formula(pqr).as_imp().ok_or(ElabError::Internal("perm shape"))?;
        let (q, r) = qr.as_imp().ok_or(ElabError::Internal("perm shape"))?;
        let (p, q, r) = (p.clone(), q.clone(), r.clone());
        let s = self.axiom(SchemeId::S, &[&p, &q, &r])?;
        let m = self.mp(pqr, s)?;
        let k = self.axiom(SchemeId::K, &[&q, &p])?;
        self.compose(k, m)
    }
}
