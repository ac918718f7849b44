use std::collections::BTreeMap;
use std::fmt;

use super::formula::{BinOp, Formula, Quant};
use super::term::Term;
use super::SyntaxError;

/// A formula scheme. Quantified variables and substituted terms are slots
/// named by the instantiation, so one scheme describes the whole family
/// `forall x X -> X[x := t]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FormulaScheme {
    Var(String),
    Bot,
    Bin(BinOp, Box<FormulaScheme>, Box<FormulaScheme>),
    Quant(Quant, String, Box<FormulaScheme>),
    /// `s[x := t]` kept unevaluated.
    Subst(Box<FormulaScheme>, String, String),
}

impl FormulaScheme {
    pub fn var(name: &str) -> Self {
        FormulaScheme::Var(name.to_string())
    }

    pub fn imp(a: FormulaScheme, b: FormulaScheme) -> Self {
        FormulaScheme::Bin(BinOp::Imp, Box::new(a), Box::new(b))
    }

    pub fn and(a: FormulaScheme, b: FormulaScheme) -> Self {
        FormulaScheme::Bin(BinOp::And, Box::new(a), Box::new(b))
    }

    pub fn or(a: FormulaScheme, b: FormulaScheme) -> Self {
        FormulaScheme::Bin(BinOp::Or, Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: FormulaScheme) -> Self {
        FormulaScheme::imp(a, FormulaScheme::Bot)
    }

    pub fn quant(q: Quant, x: &str, body: FormulaScheme) -> Self {
        FormulaScheme::Quant(q, x.to_string(), Box::new(body))
    }

    pub fn subst(body: FormulaScheme, x: &str, t: &str) -> Self {
        FormulaScheme::Subst(Box::new(body), x.to_string(), t.to_string())
    }

    pub fn instantiate(&self, inst: &Instantiation) -> Result<Formula, SyntaxError> {
        Ok(match self {
            FormulaScheme::Var(x) => inst.formula(x)?.clone(),
            FormulaScheme::Bot => Formula::Bot,
            FormulaScheme::Bin(op, a, b) => Formula::Bin(*op, Box::new(a.instantiate(inst)?), Box::new(b.instantiate(inst)?)),
            FormulaScheme::Quant(q, x, body) => Formula::Quant(*q, inst.var(x)?.to_string(), Box::new(body.instantiate(inst)?)),
            FormulaScheme::Subst(body, x, t) => {
                let f = body.instantiate(inst)?;
                let var = inst.var(x)?;
                let term = inst.term(t)?;
                f.subst_open(var, term)
                    .map_err(|c| SyntaxError::Capture { term: term.to_string(), var: c.var })?
            }
        })
    }

    /// Matches a formula against the scheme. Substitution nodes are solved
    /// after the rest of the scheme is matched; candidate terms are the
    /// subterms of the formula, then the substituted variable itself.
    pub fn match_formula(&self, target: &Formula) -> Option<Instantiation> {
        let mut inst = Instantiation::default();
        let mut pending = Vec::new();
        if !self.match_into(target, &mut inst, &mut pending) {
            return None;
        }
        let candidates = {
            let mut c = target.subterms();
            for (_, x, _, _) in &pending {
                let v = Term::var(inst.vars.get(x)?.clone());
                if !c.contains(&v) {
                    c.push(v);
                }
            }
            c
        };
        for (body, x, t, sub_target) in pending {
            let base = body.instantiate(&inst).ok()?;
            let var = inst.vars.get(&x)?.clone();
            if let Some(bound) = inst.terms.get(&t) {
                if base.subst_open(&var, bound).ok()? != sub_target {
                    return None;
                }
                continue;
            }
            let found = candidates
                .iter()
                .find(|cand| base.subst_open(&var, cand).is_ok_and(|r| r == sub_target))?;
            inst.terms.insert(t, found.clone());
        }
        Some(inst)
    }

    fn match_into<'a>(
        &'a self,
        target: &Formula,
        inst: &mut Instantiation,
        pending: &mut Vec<(&'a FormulaScheme, String, String, Formula)>,
    ) -> bool {
        match (self, target) {
            (FormulaScheme::Var(x), f) => match inst.formulas.get(x) {
                Some(bound) => bound == f,
                None => {
                    inst.formulas.insert(x.clone(), f.clone());
                    true
                }
            },
            (FormulaScheme::Bot, Formula::Bot) => true,
            (FormulaScheme::Bin(op, a, b), Formula::Bin(op2, fa, fb)) if op == op2 => {
                a.match_into(fa, inst, pending) && b.match_into(fb, inst, pending)
            }
            (FormulaScheme::Quant(q, x, body), Formula::Quant(q2, y, fbody)) if q == q2 => {
                match inst.vars.get(x) {
                    Some(bound) if bound != y => return false,
                    Some(_) => {}
                    None => {
                        inst.vars.insert(x.clone(), y.clone());
                    }
                }
                body.match_into(fbody, inst, pending)
            }
            (FormulaScheme::Subst(body, x, t), f) => {
                pending.push((body, x.clone(), t.clone(), f.clone()));
                true
            }
            _ => false,
        }
    }
}

impl fmt::Display for FormulaScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaScheme::Var(x) => write!(f, "{x}"),
            FormulaScheme::Bot => write!(f, "bot"),
            FormulaScheme::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::And => "&",
                    BinOp::Or => "|",
                    BinOp::Imp => "->",
                };
                write!(f, "({a} {sym} {b})")
            }
            FormulaScheme::Quant(q, x, body) => {
                let kw = if *q == Quant::Forall { "forall" } else { "exists" };
                write!(f, "{kw} {x} {body}")
            }
            FormulaScheme::Subst(body, x, t) => write!(f, "{body}[{x}:={t}]"),
        }
    }
}

/// Bindings for the formula variables, quantifier slots and term slots of a
/// scheme.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Instantiation {
    pub formulas: BTreeMap<String, Formula>,
    pub vars: BTreeMap<String, String>,
    pub terms: BTreeMap<String, Term>,
}

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_formula(mut self, x: &str, f: Formula) -> Self {
        self.formulas.insert(x.to_string(), f);
        self
    }

    pub fn with_var(mut self, slot: &str, var: &str) -> Self {
        self.vars.insert(slot.to_string(), var.to_string());
        self
    }

    pub fn with_term(mut self, slot: &str, t: Term) -> Self {
        self.terms.insert(slot.to_string(), t);
        self
    }

    fn formula(&self, x: &str) -> Result<&Formula, SyntaxError> {
        self.formulas.get(x).ok_or_else(|| SyntaxError::MissingBinding { slot: x.to_string() })
    }

    fn var(&self, x: &str) -> Result<&str, SyntaxError> {
        self.vars.get(x).map(String::as_str).ok_or_else(|| SyntaxError::MissingBinding { slot: x.to_string() })
    }

    fn term(&self, x: &str) -> Result<&Term, SyntaxError> {
        self.terms.get(x).ok_or_else(|| SyntaxError::MissingBinding { slot: x.to_string() })
    }

    /// Applies a formula transformation to every bound formula and term.
    pub(crate) fn try_map(
        &self,
        mut f: impl FnMut(&Formula) -> Option<Formula>,
        mut t: impl FnMut(&Term) -> Term,
    ) -> Option<Instantiation> {
        let mut out = self.clone();
        for v in out.formulas.values_mut() {
            *v = f(v)?;
        }
        for v in out.terms.values_mut() {
            *v = t(v);
        }
        Some(out)
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            Ok(())
        };
        for (k, v) in &self.formulas {
            sep(f)?;
            write!(f, "{k}:={v}")?;
        }
        for (k, v) in &self.vars {
            sep(f)?;
            write!(f, "{k}:={v}")?;
        }
        for (k, v) in &self.terms {
            sep(f)?;
            write!(f, "{k}:={v}")?;
        }
        Ok(())
    }
}
