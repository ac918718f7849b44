use std::collections::BTreeSet;
use std::fmt;

/// A first-order term. Constants are applications with no arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    /// Variables in order of first occurrence, left to right.
    pub(crate) fn vars_ordered(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_ordered(out)),
        }
    }

    pub fn contains_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub fn contains_term(&self, t: &Term) -> bool {
        self == t
            || match self {
                Term::Var(_) => false,
                Term::App(_, args) => args.iter().any(|a| a.contains_term(t)),
            }
    }

    /// Function and constant symbols occurring in the term.
    pub fn symbols_into(&self, out: &mut BTreeSet<String>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.symbols_into(out));
        }
    }

    pub fn subterms_into(&self, out: &mut Vec<Term>) {
        if !out.contains(self) {
            out.push(self.clone());
        }
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.subterms_into(out));
        }
    }

    pub fn subst_var(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => t.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.subst_var(x, t)).collect()),
        }
    }

    pub fn replace(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        match self {
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.replace(from, to)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closedness_and_depth() {
        let t = Term::app("f", vec![Term::constant("c")]);
        assert!(t.is_closed());
        assert_eq!(t.depth(), 1);
        assert!(!Term::app("f", vec![Term::var("x")]).is_closed());
        assert_eq!(t.to_string(), "f(c)");
    }
}
