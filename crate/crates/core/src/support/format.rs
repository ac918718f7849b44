use std::path::Path;

use super::basis::{powerset, zero_closure, Basis};
use super::SupportError;
use crate::atomic::{content_lines, parse_atom, parse_base, parse_rule, rule_atom_texts, split_top, AtomicRule, AtomicSystem};
use crate::syntax::{infer_signature, parse_term, Atom, Signature};

enum Source {
    File(String),
    Inline(String),
}

fn source(arg: &str) -> Source {
    let arg = arg.trim();
    match arg.strip_prefix('{').and_then(|a| a.strip_suffix('}')) {
        Some(inner) => Source::Inline(inner.to_string()),
        None => Source::File(arg.to_string()),
    }
}

fn load(src: &Source, dir: Option<&Path>) -> Result<Vec<String>, SupportError> {
    match src {
        Source::Inline(inner) => {
            Ok(split_top(inner, ';').into_iter().map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
        }
        Source::File(name) => {
            let path = dir.map_or_else(|| Path::new(name).to_path_buf(), |d| d.join(name));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| SupportError::Format { line: 0, msg: format!("{}: {e}", path.display()) })?;
            Ok(content_lines(&text).map(|(_, l)| l.to_string()).collect())
        }
    }
}

fn list(text: &str) -> Vec<String> {
    split_top(text, ',').into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// Every atom and term text in a basis file and the base files it names,
/// for signature inference.
pub fn basis_source_texts(text: &str, dir: Option<&Path>) -> Result<Vec<String>, SupportError> {
    let mut out = Vec::new();
    for (_, line) in content_lines(text) {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "base" | "pool" => {
                for rule in load(&source(rest), dir)? {
                    out.extend(rule_atom_texts(&rule));
                }
            }
            "universe" => out.extend(list(rest)),
            "zero-complete" => out.extend(list(rest.trim().strip_prefix("over").unwrap_or(rest))),
            _ => {}
        }
    }
    Ok(out)
}

/// Parses a basis file:
///
/// ```text
/// base {=> p ; p => q}       # an inline system
/// base extra.base            # a base file, relative to `dir`
/// pool {=> p ; => q ; p => r}
/// powerset-of-pool           # every subset of the pool
/// zero-complete over p, q    # close under adding => p and => q
/// universe r                 # extra atoms for the atom clauses
/// terms c, d                 # closed terms for the quantifier clauses
/// ```
///
/// Without `terms`, the closed terms are the signature's constants.
pub fn parse_basis(text: &str, dir: Option<&Path>, sig: Option<&Signature>) -> Result<Basis, SupportError> {
    let sig = match sig {
        Some(s) => s.clone(),
        None => {
            let texts = basis_source_texts(text, dir)?;
            infer_signature(texts.iter().map(String::as_str), 1)
                .map_err(|e| SupportError::Format { line: 0, msg: e.to_string() })?
        }
    };
    let mut systems: Vec<AtomicSystem> = Vec::new();
    let mut pool: Vec<AtomicRule> = Vec::new();
    let mut use_powerset = false;
    let mut zero: Option<Vec<Atom>> = None;
    let mut universe: Vec<Atom> = Vec::new();
    let mut terms = None;
    for (ln, line) in content_lines(text) {
        let err = |msg: String| SupportError::Format { line: ln, msg };
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rules = |rest: &str| -> Result<Vec<AtomicRule>, SupportError> {
            load(&source(rest), dir)?.iter().map(|r| parse_rule(r, &sig).map_err(err)).collect()
        };
        match kw {
            "base" => {
                let src = source(rest);
                let sys = match &src {
                    Source::File(_) => {
                        let text = load(&src, dir)?.join("\n");
                        parse_base(&text, Some(&sig)).map_err(|e| err(e.to_string()))?
                    }
                    Source::Inline(_) => AtomicSystem::from_rules(rules(rest)?),
                };
                systems.push(sys);
            }
            "pool" => pool.extend(rules(rest)?),
            "powerset-of-pool" => use_powerset = true,
            "zero-complete" => {
                let atoms = rest.trim().strip_prefix("over").ok_or_else(|| err("expected `zero-complete over ATOMS`".into()))?;
                let atoms = list(atoms).iter().map(|a| parse_atom(a, &sig)).collect::<Result<Vec<_>, _>>().map_err(err)?;
                zero = Some(atoms);
            }
            "universe" => {
                universe.extend(list(rest).iter().map(|a| parse_atom(a, &sig)).collect::<Result<Vec<_>, _>>().map_err(err)?);
            }
            "terms" => {
                let ts = list(rest).iter().map(|t| parse_term(t, &sig)).collect::<Result<Vec<_>, _>>();
                terms = Some(ts.map_err(|e| err(e.to_string()))?);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    if use_powerset {
        systems.extend(powerset(&pool));
    }
    if systems.is_empty() {
        systems.push(AtomicSystem::new());
    }
    let terms = match terms {
        Some(t) => t,
        None => sig.closed_terms().unwrap_or_default(),
    };
    Ok(match zero {
        Some(atoms) => Basis::zero_complete(zero_closure(systems, &atoms), &atoms, universe, terms),
        None => Basis::new(systems, universe, terms),
    })
}
