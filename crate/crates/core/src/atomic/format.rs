use super::rule::{AtomicRule, AtomicSystem, Premise};
use super::BaseFormatError;
use crate::syntax::{infer_signature, parse_formula, Atom, Formula, Signature};

/// Splits at `sep` outside of any brackets.
pub(crate) fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Position of the last `=>` outside of any brackets.
fn last_arrow(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            b'=' if depth == 0 && bytes.get(i + 1) == Some(&b'>') => found = Some(i),
            _ => {}
        }
    }
    found
}

fn atom_list(text: &str) -> Vec<String> {
    let t = text.trim();
    if t.is_empty() {
        return Vec::new();
    }
    split_top(t, ',').into_iter().map(|s| s.trim().to_string()).collect()
}

/// A rule with its atoms still as text.
struct RawRule {
    premises: Vec<(Vec<String>, String)>,
    conclusion: String,
}

fn raw_rule(line: &str) -> Result<RawRule, String> {
    let arrow = last_arrow(line).ok_or("expected `=>`")?;
    let (lhs, rhs) = (line[..arrow].trim(), line[arrow + 2..].trim());
    if rhs.is_empty() {
        return Err("missing conclusion".into());
    }
    let premises = if let Some(inner) = lhs.strip_prefix('{') {
        let inner = inner.strip_suffix('}').ok_or("unclosed `{`")?;
        split_top(inner, ';')
            .into_iter()
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|p| {
                let arrow = last_arrow(p).ok_or_else(|| format!("premise `{p}` lacks `=>`"))?;
                let hyps = p[..arrow].trim();
                let hyps = hyps
                    .strip_prefix('[')
                    .and_then(|h| h.strip_suffix(']'))
                    .ok_or_else(|| format!("hypotheses of `{p}` must be bracketed"))?;
                Ok((atom_list(hyps), p[arrow + 2..].trim().to_string()))
            })
            .collect::<Result<Vec<_>, String>>()?
    } else {
        atom_list(lhs).into_iter().map(|a| (Vec::new(), a)).collect()
    };
    Ok(RawRule { premises, conclusion: rhs.to_string() })
}

pub(crate) fn parse_atom(text: &str, sig: &Signature) -> Result<Atom, String> {
    match parse_formula(text, sig).map_err(|e| e.to_string())? {
        Formula::Atom(a) => Ok(a),
        other => Err(format!("`{other}` is not an atom")),
    }
}

/// Reads the texts of all atoms in a base file, for signature inference.
pub(crate) fn rule_atom_texts(line: &str) -> Vec<String> {
    match raw_rule(line) {
        Ok(r) => {
            let mut out = vec![r.conclusion];
            for (h, c) in r.premises {
                out.extend(h);
                out.push(c);
            }
            out
        }
        Err(_) => Vec::new(),
    }
}

pub(crate) fn parse_rule(line: &str, sig: &Signature) -> Result<AtomicRule, String> {
    let raw = raw_rule(line)?;
    let premises = raw
        .premises
        .iter()
        .map(|(h, c)| {
            Ok(Premise::new(h.iter().map(|a| parse_atom(a, sig)).collect::<Result<Vec<_>, String>>()?, parse_atom(c, sig)?))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(AtomicRule::new(premises, parse_atom(&raw.conclusion, sig)?))
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses a base file, one rule per line:
///
/// ```text
/// => H(s)
/// H(s) => M(s)
/// { [p, q] => r ; [] => s } => t
/// ```
///
/// Without a signature, symbols are inferred and bare names are constants.
pub fn parse_base(text: &str, sig: Option<&Signature>) -> Result<AtomicSystem, BaseFormatError> {
    let sig = match sig {
        Some(s) => s.clone(),
        None => {
            let texts: Vec<String> = content_lines(text).flat_map(|(_, l)| rule_atom_texts(l)).collect();
            infer_signature(texts.iter().map(String::as_str), 1).map_err(|e| BaseFormatError { line: 0, msg: e.to_string() })?
        }
    };
    let mut sys = AtomicSystem::new();
    for (ln, line) in content_lines(text) {
        sys.insert(parse_rule(line, &sig).map_err(|msg| BaseFormatError { line: ln, msg })?);
    }
    Ok(sys)
}
