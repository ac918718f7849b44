use std::collections::BTreeSet;

use super::term::Term;
use super::SyntaxError;

/// A finite first-order signature. Every identifier that is not declared is
/// read as a variable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    constants: Vec<String>,
    functions: Vec<(String, usize)>,
    predicates: Vec<(String, usize)>,
    depth: usize,
}

impl Signature {
    pub fn new() -> Self {
        Signature { depth: 1, ..Default::default() }
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, SyntaxError> {
        self.check_fresh(name)?;
        self.constants.push(name.to_string());
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Self, SyntaxError> {
        self.check_fresh(name)?;
        if arity == 0 {
            self.constants.push(name.to_string());
        } else {
            self.functions.push((name.to_string(), arity));
        }
        Ok(self)
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Result<Self, SyntaxError> {
        self.check_fresh(name)?;
        self.predicates.push((name.to_string(), arity));
        Ok(self)
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    fn check_fresh(&self, name: &str) -> Result<(), SyntaxError> {
        if self.is_declared(name) {
            Err(SyntaxError::DuplicateSymbol { name: name.to_string() })
        } else {
            Ok(())
        }
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
            || self.functions.iter().any(|(f, _)| f == name)
            || self.predicates.iter().any(|(p, _)| p == name)
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn functions(&self) -> &[(String, usize)] {
        &self.functions
    }

    pub fn predicates(&self) -> &[(String, usize)] {
        &self.predicates
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.iter().find(|(f, _)| f == name).map(|(_, n)| *n)
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.iter().find(|(p, _)| p == name).map(|(_, n)| *n)
    }

    /// Adds a constant unless already present; used for eigenvariables.
    pub(crate) fn ensure_constant(&mut self, name: &str) {
        if !self.is_constant(name) {
            self.constants.push(name.to_string());
        }
    }

    pub(crate) fn ensure_predicate(&mut self, name: &str, arity: usize) {
        if self.predicate_arity(name).is_none() {
            self.predicates.push((name.to_string(), arity));
        }
    }

    /// Closed terms up to the depth bound, by depth level then declaration
    /// order.
    pub fn closed_terms(&self) -> Result<Vec<Term>, SyntaxError> {
        if self.constants.is_empty() {
            return Err(SyntaxError::NoConstants);
        }
        let mut all: Vec<Term> = self.constants.iter().map(Term::constant).collect();
        let mut seen: BTreeSet<Term> = all.iter().cloned().collect();
        for _ in 0..self.depth {
            let previous = all.clone();
            for (f, arity) in &self.functions {
                for args in tuples(&previous, *arity) {
                    let t = Term::app(f.clone(), args);
                    if seen.insert(t.clone()) {
                        all.push(t);
                    }
                }
            }
        }
        Ok(all)
    }

    /// Parses the line-oriented signature format
    /// (`const c`, `fun f/1`, `pred P/2`, `depth 1`).
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let mut sig = Signature::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || SyntaxError::BadSignatureLine { line: n + 1, text: raw.to_string() };
            let mut words = line.split_whitespace();
            let kw = words.next().ok_or_else(bad)?;
            let arg = words.next().ok_or_else(bad)?;
            if words.next().is_some() {
                return Err(bad());
            }
            let with_arity = |s: &str| -> Result<(String, usize), SyntaxError> {
                let (name, ar) = s.split_once('/').ok_or_else(bad)?;
                Ok((name.to_string(), ar.parse().map_err(|_| bad())?))
            };
            sig = match kw {
                "const" => sig.with_constant(arg)?,
                "fun" => {
                    let (name, ar) = with_arity(arg)?;
                    sig.with_function(&name, ar)?
                }
                "pred" => {
                    let (name, ar) = with_arity(arg)?;
                    sig.with_predicate(&name, ar)?
                }
                "depth" => sig.with_depth(arg.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            };
        }
        Ok(sig)
    }
}

fn tuples(items: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    v
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_term_examples() {
        let sig = Signature::new().with_constant("c").unwrap();
        assert_eq!(sig.closed_terms().unwrap(), vec![Term::constant("c")]);

        let sig = Signature::new()
            .with_constant("c")
            .unwrap()
            .with_constant("d")
            .unwrap()
            .with_function("f", 1)
            .unwrap();
        let printed: Vec<String> = sig.closed_terms().unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(printed, ["c", "d", "f(c)", "f(d)"]);

        let shallow = Signature::new().with_constant("c").unwrap().with_function("f", 1).unwrap().with_depth(0);
        assert_eq!(shallow.closed_terms().unwrap(), vec![Term::constant("c")]);
        assert!(matches!(Signature::new().closed_terms(), Err(SyntaxError::NoConstants)));
    }

    #[test]
    fn names_are_distinct() {
        let sig = Signature::new().with_constant("c").unwrap();
        assert!(sig.with_predicate("c", 0).is_err());
    }

    #[test]
    fn parses_signature_file() {
        let sig = Signature::parse("const c\nfun f/1 # unary\npred P/2\ndepth 2\n").unwrap();
        assert_eq!(sig.function_arity("f"), Some(1));
        assert_eq!(sig.predicate_arity("P"), Some(2));
        assert_eq!(sig.depth(), 2);
        assert!(Signature::parse("fun f").is_err());
    }
}
