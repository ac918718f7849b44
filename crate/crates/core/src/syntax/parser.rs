//! Concrete grammar:
//!
//! ```text
//! F ::= forall x F | exists x F | F -> F | F & F | F | F | ~F | bot | P(t,...) | P | (F)
//! ```
//!
//! `~` and the quantifiers bind tightest (a quantifier scopes over the
//! smallest following formula), then `&`, then `|` (both left associative),
//! then `->` (right associative).

use std::collections::BTreeSet;

use super::formula::{BinOp, Formula, Quant};
use super::signature::Signature;
use super::term::Term;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Arrow,
    And,
    Or,
    Not,
    Forall,
    Exists,
    Bot,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => {}
            '(' => out.push((Tok::LParen, pos)),
            ')' => out.push((Tok::RParen, pos)),
            ',' => out.push((Tok::Comma, pos)),
            '&' | '∧' => out.push((Tok::And, pos)),
            '|' | '∨' => out.push((Tok::Or, pos)),
            '~' | '¬' => out.push((Tok::Not, pos)),
            '→' => out.push((Tok::Arrow, pos)),
            '∀' => out.push((Tok::Forall, pos)),
            '∃' => out.push((Tok::Exists, pos)),
            '⊥' => out.push((Tok::Bot, pos)),
            '-' => {
                if chars.get(i + 1).map(|&(_, c)| c) == Some('>') {
                    out.push((Tok::Arrow, pos));
                    i += 1;
                } else {
                    return Err(SyntaxError::Lexical { pos, found: c });
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].1.is_alphanumeric() || matches!(chars[i + 1].1, '_' | '\'')) {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().map(|&(_, c)| c).collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(word),
                };
                out.push((tok, pos));
            }
            _ => return Err(SyntaxError::Lexical { pos, found: c }),
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
struct RawTerm {
    name: String,
    args: Option<Vec<RawTerm>>,
    pos: usize,
}

#[derive(Debug, Clone)]
enum Raw {
    Pred(RawTerm),
    Bot,
    Not(Box<Raw>),
    Bin(BinOp, Box<Raw>, Box<Raw>),
    Quant(Quant, String, Box<Raw>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.len)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, msg: String) -> SyntaxError {
        SyntaxError::Parse { pos: self.pos(), msg }
    }

    fn imp(&mut self) -> Result<Raw, SyntaxError> {
        let left = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let right = self.imp()?;
            return Ok(Raw::Bin(BinOp::Imp, Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Raw, SyntaxError> {
        let mut left = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            let right = self.and()?;
            left = Raw::Bin(BinOp::Or, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Raw, SyntaxError> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            let right = self.unary()?;
            left = Raw::Bin(BinOp::And, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Raw, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Raw::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let q = if self.peek() == Some(&Tok::Forall) { Quant::Forall } else { Quant::Exists };
                self.at += 1;
                let var = match self.peek().cloned() {
                    Some(Tok::Ident(x)) => x,
                    _ => return Err(self.error("expected bound variable".into())),
                };
                self.at += 1;
                Ok(Raw::Quant(q, var, Box::new(self.unary()?)))
            }
            Some(Tok::Bot) => {
                self.at += 1;
                Ok(Raw::Bot)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.imp()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => Ok(Raw::Pred(self.term()?)),
            _ => Err(self.error("expected formula".into())),
        }
    }

    fn term(&mut self) -> Result<RawTerm, SyntaxError> {
        let pos = self.pos();
        let name = match self.peek().cloned() {
            Some(Tok::Ident(x)) => x,
            _ => return Err(self.error("expected term".into())),
        };
        self.at += 1;
        if self.peek() != Some(&Tok::LParen) {
            return Ok(RawTerm { name, args: None, pos });
        }
        self.at += 1;
        let mut args = vec![self.term()?];
        while self.peek() == Some(&Tok::Comma) {
            self.at += 1;
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "')' or ','")?;
        Ok(RawTerm { name, args: Some(args), pos })
    }
}

fn parse_raw(text: &str) -> Result<Raw, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, len: text.len() };
    let f = p.imp()?;
    if p.at != p.toks.len() {
        return Err(p.error("unexpected trailing input".into()));
    }
    Ok(f)
}

fn resolve_term(t: &RawTerm, sig: &Signature) -> Result<Term, SyntaxError> {
    let nargs = t.args.as_ref().map_or(0, Vec::len);
    if sig.is_constant(&t.name) {
        if nargs != 0 {
            return Err(SyntaxError::Arity { name: t.name.clone(), expected: 0, found: nargs, pos: t.pos });
        }
        return Ok(Term::constant(t.name.clone()));
    }
    if let Some(arity) = sig.function_arity(&t.name) {
        if arity != nargs {
            return Err(SyntaxError::Arity { name: t.name.clone(), expected: arity, found: nargs, pos: t.pos });
        }
        let args = t.args.iter().flatten().map(|a| resolve_term(a, sig)).collect::<Result<_, _>>()?;
        return Ok(Term::app(t.name.clone(), args));
    }
    if t.args.is_some() || sig.predicate_arity(&t.name).is_some() {
        return Err(SyntaxError::UnknownSymbol { name: t.name.clone(), pos: t.pos });
    }
    Ok(Term::var(t.name.clone()))
}

fn resolve(raw: &Raw, sig: &Signature) -> Result<Formula, SyntaxError> {
    Ok(match raw {
        Raw::Pred(t) => {
            let arity = sig
                .predicate_arity(&t.name)
                .ok_or_else(|| SyntaxError::UnknownSymbol { name: t.name.clone(), pos: t.pos })?;
            let nargs = t.args.as_ref().map_or(0, Vec::len);
            if arity != nargs {
                return Err(SyntaxError::Arity { name: t.name.clone(), expected: arity, found: nargs, pos: t.pos });
            }
            let args = t.args.iter().flatten().map(|a| resolve_term(a, sig)).collect::<Result<_, _>>()?;
            Formula::atom(t.name.clone(), args)
        }
        Raw::Bot => Formula::Bot,
        Raw::Not(f) => Formula::not(resolve(f, sig)?),
        Raw::Bin(op, l, r) => Formula::Bin(*op, Box::new(resolve(l, sig)?), Box::new(resolve(r, sig)?)),
        Raw::Quant(q, x, body) => {
            if sig.is_declared(x) {
                return Err(SyntaxError::Parse { pos: 0, msg: format!("`{x}` is declared and cannot be bound") });
            }
            Formula::Quant(*q, x.clone(), Box::new(resolve(body, sig)?))
        }
    })
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    resolve(&parse_raw(text)?, sig)
}

/// Parses a standalone term against the signature.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, len: text.len() };
    let t = p.term()?;
    if p.at != p.toks.len() {
        return Err(p.error("unexpected trailing input".into()));
    }
    resolve_term(&t, sig)
}

/// Builds a signature from formula texts: applied names in formula position
/// are predicates, applied names in term position are functions, names bound
/// by a quantifier are variables and every other bare term name is a
/// constant.
pub fn infer_signature<'a>(texts: impl IntoIterator<Item = &'a str>, depth: usize) -> Result<Signature, SyntaxError> {
    let raws = texts.into_iter().map(parse_raw).collect::<Result<Vec<_>, _>>()?;
    let mut bound = BTreeSet::new();
    for r in &raws {
        collect_bound(r, &mut bound);
    }
    let mut preds = Vec::new();
    let mut funs = Vec::new();
    let mut consts = Vec::new();
    for r in &raws {
        collect_symbols(r, &bound, &mut preds, &mut funs, &mut consts);
    }
    let mut sig = Signature::new().with_depth(depth);
    for (p, n) in preds {
        sig = sig.with_predicate(&p, n)?;
    }
    for (f, n) in funs {
        sig = sig.with_function(&f, n)?;
    }
    for c in consts {
        sig = sig.with_constant(&c)?;
    }
    Ok(sig)
}

fn collect_bound(r: &Raw, out: &mut BTreeSet<String>) {
    match r {
        Raw::Pred(_) | Raw::Bot => {}
        Raw::Not(f) => collect_bound(f, out),
        Raw::Bin(_, a, b) => {
            collect_bound(a, out);
            collect_bound(b, out);
        }
        Raw::Quant(_, x, body) => {
            out.insert(x.clone());
            collect_bound(body, out);
        }
    }
}

fn push_unique(v: &mut Vec<(String, usize)>, name: &str, n: usize) {
    if !v.iter().any(|(m, _)| m == name) {
        v.push((name.to_string(), n));
    }
}

fn collect_term(t: &RawTerm, bound: &BTreeSet<String>, funs: &mut Vec<(String, usize)>, consts: &mut Vec<String>) {
    match &t.args {
        Some(args) => {
            push_unique(funs, &t.name, args.len());
            args.iter().for_each(|a| collect_term(a, bound, funs, consts));
        }
        None => {
            if !bound.contains(&t.name) && !consts.contains(&t.name) {
                consts.push(t.name.clone());
            }
        }
    }
}

fn collect_symbols(
    r: &Raw,
    bound: &BTreeSet<String>,
    preds: &mut Vec<(String, usize)>,
    funs: &mut Vec<(String, usize)>,
    consts: &mut Vec<String>,
) {
    match r {
        Raw::Pred(t) => {
            push_unique(preds, &t.name, t.args.as_ref().map_or(0, Vec::len));
            t.args.iter().flatten().for_each(|a| collect_term(a, bound, funs, consts));
        }
        Raw::Bot => {}
        Raw::Not(f) => collect_symbols(f, bound, preds, funs, consts),
        Raw::Bin(_, a, b) => {
            collect_symbols(a, bound, preds, funs, consts);
            collect_symbols(b, bound, preds, funs, consts);
        }
        Raw::Quant(_, _, body) => collect_symbols(body, bound, preds, funs, consts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new()
            .with_constant("c")
            .unwrap()
            .with_constant("d")
            .unwrap()
            .with_function("f", 1)
            .unwrap()
            .with_predicate("P", 1)
            .unwrap()
            .with_predicate("Q", 1)
            .unwrap()
            .with_predicate("p", 0)
            .unwrap()
    }

    #[test]
    fn grammar_examples() {
        let f = parse_formula("forall x (P(x) -> P(x))", &sig()).unwrap();
        let px = Formula::atom("P", vec![Term::var("x")]);
        assert_eq!(f, Formula::forall("x", Formula::imp(px.clone(), px.clone())));

        let g = parse_formula("~P(c)", &sig()).unwrap();
        assert_eq!(g, Formula::not(Formula::atom("P", vec![Term::constant("c")])));

        assert!(matches!(parse_formula("P(f(c,d))", &sig()), Err(SyntaxError::Arity { .. })));
        assert!(matches!(parse_formula("R(c)", &sig()), Err(SyntaxError::UnknownSymbol { .. })));
        assert!(matches!(parse_formula("P(c) $ p", &sig()), Err(SyntaxError::Lexical { pos: 5, .. })));
    }

    #[test]
    fn quantifier_scope_is_narrow() {
        let f = parse_formula("forall x P(x) & Q(x)", &sig()).unwrap();
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["x"]);
        assert!(matches!(f, Formula::Bin(BinOp::And, ..)));
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("p -> p -> p", &sig()).unwrap();
        let p = Formula::prop("p");
        assert_eq!(f, Formula::imp(p.clone(), Formula::imp(p.clone(), p)));
    }

    #[test]
    fn inference() {
        let sig = infer_signature(["forall x (H(x) -> M(x))", "H(s)", "p & q"], 1).unwrap();
        assert_eq!(sig.predicate_arity("H"), Some(1));
        assert!(sig.is_constant("s"));
        assert!(!sig.is_declared("x"));
        assert_eq!(sig.predicate_arity("q"), Some(0));
    }
}
