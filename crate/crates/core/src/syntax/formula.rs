use std::collections::BTreeSet;
use std::fmt;

use super::term::Term;
use super::SyntaxError;

/// A (possibly open) atomic formula `P(t1,...,tn)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    pub fn prop(pred: impl Into<String>) -> Self {
        Atom::new(pred, Vec::new())
    }

    pub fn is_closed(&self) -> bool {
        self.args.iter().all(Term::is_closed)
    }

    pub fn subst_var(&self, x: &str, t: &Term) -> Atom {
        Atom::new(self.pred.clone(), self.args.iter().map(|a| a.subst_var(x, t)).collect())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Imp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quant {
    Forall,
    Exists,
}

/// First-order formulas. `~A` is sugar for `A -> bot`; `bot` is not an atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Bot,
    Bin(BinOp, Box<Formula>, Box<Formula>),
    Quant(Quant, String, Box<Formula>),
}

/// Raised internally when a substitution would capture a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Capture {
    pub var: String,
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(pred, args))
    }

    pub fn prop(pred: impl Into<String>) -> Self {
        Formula::Atom(Atom::prop(pred))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::Bin(BinOp::And, Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Bin(BinOp::Or, Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Bin(BinOp::Imp, Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::imp(a, Formula::Bot)
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Self {
        Formula::Quant(Quant::Forall, x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Self {
        Formula::Quant(Quant::Exists, x.into(), Box::new(body))
    }

    /// Splits `A -> B` into its parts.
    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Bin(BinOp::Imp, a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for t in &a.args {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Bot => {}
            Formula::Bin(_, l, r) => {
                l.free_vars_into(bound, out);
                r.free_vars_into(bound, out);
            }
            Formula::Quant(_, x, body) => {
                bound.push(x.clone());
                body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Atom(a) => a.args.iter().any(|t| t.contains_var(x)),
            Formula::Bot => false,
            Formula::Bin(_, l, r) => l.has_free(x) || r.has_free(x),
            Formula::Quant(_, y, body) => y != x && body.has_free(x),
        }
    }

    /// Free variables in order of first occurrence in the printed form.
    pub fn free_vars_ordered(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.free_ordered_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_ordered_into(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Atom(a) => {
                let mut vs = Vec::new();
                a.args.iter().for_each(|t| t.vars_ordered(&mut vs));
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Bot => {}
            Formula::Bin(_, l, r) => {
                l.free_ordered_into(bound, out);
                r.free_ordered_into(bound, out);
            }
            Formula::Quant(_, x, body) => {
                bound.push(x.clone());
                body.free_ordered_into(bound, out);
                bound.pop();
            }
        }
    }

    /// All variables, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.all_vars_into(&mut out);
        out
    }

    fn all_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => a.args.iter().for_each(|t| t.vars_into(out)),
            Formula::Bot => {}
            Formula::Bin(_, l, r) => {
                l.all_vars_into(out);
                r.all_vars_into(out);
            }
            Formula::Quant(_, x, body) => {
                out.insert(x.clone());
                body.all_vars_into(out);
            }
        }
    }

    /// Constant and function symbols occurring anywhere in the formula.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| a.args.iter().for_each(|t| t.symbols_into(&mut out)));
        out
    }

    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            out.insert(a.pred.clone());
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Bot => {}
            Formula::Bin(_, l, r) => {
                l.visit_atoms(f);
                r.visit_atoms(f);
            }
            Formula::Quant(_, _, body) => body.visit_atoms(f),
        }
    }

    pub fn contains_term(&self, t: &Term) -> bool {
        let mut found = false;
        self.visit_atoms(&mut |a| found |= a.args.iter().any(|s| s.contains_term(t)));
        found
    }

    /// All subterms of the formula, in order of first occurrence.
    pub fn subterms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| a.args.iter().for_each(|t| t.subterms_into(&mut out)));
        out
    }

    /// Replaces the free occurrences of `x` by the closed term `t`.
    pub fn substitute(&self, x: &str, t: &Term) -> Result<Formula, SyntaxError> {
        if !t.is_closed() {
            return Err(SyntaxError::OpenSubstitution { term: t.to_string() });
        }
        Ok(self.subst_closed(x, t))
    }

    pub(crate) fn subst_closed(&self, x: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.subst_var(x, t)),
            Formula::Bot => Formula::Bot,
            Formula::Bin(op, l, r) => Formula::Bin(*op, Box::new(l.subst_closed(x, t)), Box::new(r.subst_closed(x, t))),
            Formula::Quant(q, y, body) => {
                if y == x {
                    self.clone()
                } else {
                    Formula::Quant(*q, y.clone(), Box::new(body.subst_closed(x, t)))
                }
            }
        }
    }

    /// Substitution of a possibly open term; fails instead of capturing.
    pub(crate) fn subst_open(&self, x: &str, t: &Term) -> Result<Formula, Capture> {
        match self {
            Formula::Atom(a) => Ok(Formula::Atom(a.subst_var(x, t))),
            Formula::Bot => Ok(Formula::Bot),
            Formula::Bin(op, l, r) => Ok(Formula::Bin(*op, Box::new(l.subst_open(x, t)?), Box::new(r.subst_open(x, t)?))),
            Formula::Quant(q, y, body) => {
                if y == x || !body.has_free(x) {
                    Ok(self.clone())
                } else if t.contains_var(y) {
                    Err(Capture { var: y.clone() })
                } else {
                    Ok(Formula::Quant(*q, y.clone(), Box::new(body.subst_open(x, t)?)))
                }
            }
        }
    }

    /// Replaces every occurrence of the closed term `from` by `to`; fails
    /// instead of capturing a variable of `to`.
    pub(crate) fn replace_term(&self, from: &Term, to: &Term) -> Result<Formula, Capture> {
        match self {
            Formula::Atom(a) => Ok(Formula::Atom(Atom::new(
                a.pred.clone(),
                a.args.iter().map(|s| s.replace(from, to)).collect(),
            ))),
            Formula::Bot => Ok(Formula::Bot),
            Formula::Bin(op, l, r) => Ok(Formula::Bin(*op, Box::new(l.replace_term(from, to)?), Box::new(r.replace_term(from, to)?))),
            Formula::Quant(q, y, body) => {
                if to.contains_var(y) && body.contains_term(from) {
                    return Err(Capture { var: y.clone() });
                }
                Ok(Formula::Quant(*q, y.clone(), Box::new(body.replace_term(from, to)?)))
            }
        }
    }

    /// Binds every free variable, in reverse order of first occurrence.
    pub fn universal_closure(&self) -> Formula {
        let mut out = self.clone();
        for x in self.free_vars_ordered() {
            out = Formula::forall(x, out);
        }
        out
    }

    /// The logical weight used to well-found the support clauses.
    pub fn weight(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Bot => 1,
            Formula::Bin(_, l, r) => l.weight() + r.weight() + 1,
            Formula::Quant(_, _, body) => body.weight() + 1,
        }
    }

    /// The closed subformulas of a closed formula, quantifier bodies
    /// instantiated over `terms`.
    pub fn subformulae(&self, terms: &[Term]) -> Result<BTreeSet<Formula>, SyntaxError> {
        if !self.is_closed() {
            return Err(SyntaxError::OpenFormula { formula: self.to_string() });
        }
        let mut out = BTreeSet::new();
        self.subformulae_into(terms, &mut out);
        Ok(out)
    }

    pub(crate) fn subformulae_into(&self, terms: &[Term], out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Atom(_) | Formula::Bot => {}
            Formula::Bin(_, l, r) => {
                l.subformulae_into(terms, out);
                r.subformulae_into(terms, out);
            }
            Formula::Quant(_, x, body) => {
                for t in terms {
                    body.subst_closed(x, t).subformulae_into(terms, out);
                }
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Bin(BinOp::Imp, _, r) if **r == Formula::Bot => 4,
            Formula::Bin(BinOp::Imp, ..) => 1,
            Formula::Bin(BinOp::Or, ..) => 2,
            Formula::Bin(BinOp::And, ..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        if self.prec() < ctx {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Bot => write!(f, "bot"),
            Formula::Bin(BinOp::Imp, l, r) if **r == Formula::Bot => {
                write!(f, "~")?;
                l.fmt_prec(f, 4)
            }
            Formula::Bin(op, l, r) => {
                let (sym, lp, rp) = match op {
                    BinOp::Imp => ("->", 2, 1),
                    BinOp::Or => ("|", 2, 3),
                    BinOp::And => ("&", 3, 4),
                };
                l.fmt_prec(f, lp)?;
                write!(f, " {sym} ")?;
                r.fmt_prec(f, rp)
            }
            Formula::Quant(q, x, body) => {
                let kw = match q {
                    Quant::Forall => "forall",
                    Quant::Exists => "exists",
                };
                write!(f, "{kw} {x} ")?;
                body.fmt_prec(f, 4)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
