use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::axioms::{SchemeId, SystemId};
use super::proof::{HilbertProof, Justification, Line};
use super::ProofFormatError;
use crate::syntax::{infer_signature, parse_formula, parse_term, Formula, Instantiation, Signature, Term};

/// Parses a proof file:
///
/// ```text
/// system I
/// pred P/1
/// const c
/// context: forall x P(x)
/// 1. forall x P(x) by hyp
/// 2. forall x P(x) -> P(c) by axiom(AllE, X:=P(x), x:=x, t:=c)
/// 3. P(c) by mp(1,2)
/// ```
///
/// Symbol declarations are optional. Without them and without an explicit
/// signature, symbols are inferred and names that are never bound are read
/// as constants.
pub fn parse_proof(text: &str, sig: Option<&Signature>) -> Result<HilbertProof, ProofFormatError> {
    let mut system = None;
    let mut decls = String::new();
    let mut context_text: Vec<(usize, String)> = Vec::new();
    let mut raw_lines: Vec<(usize, usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let err = |msg: String| ProofFormatError { line: ln, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("system") {
            system = Some(rest.parse::<SystemId>().map_err(err)?);
        } else if let Some(rest) = line.strip_prefix("context:") {
            context_text.extend(rest.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| (ln, s.to_string())));
        } else if ["const ", "fun ", "pred ", "depth "].iter().any(|k| line.starts_with(k)) {
            decls.push_str(line);
            decls.push('\n');
        } else {
            let (num, rest) = line.split_once('.').ok_or_else(|| err("expected `n. FORMULA by RULE`".into()))?;
            let num: usize = num.trim().parse().map_err(|_| err(format!("bad line number `{}`", num.trim())))?;
            let (formula, just) = rest.rsplit_once(" by ").ok_or_else(|| err("missing ` by `".into()))?;
            if num != raw_lines.len() + 1 {
                return Err(err(format!("expected line number {}", raw_lines.len() + 1)));
            }
            raw_lines.push((ln, num, formula.trim().to_string(), just.trim().to_string()));
        }
    }
    let system = system.ok_or(ProofFormatError { line: 0, msg: "missing `system C` or `system I` header".into() })?;

    let sig = match sig {
        Some(s) => s.clone(),
        None if !decls.is_empty() => Signature::parse(&decls).map_err(|e| ProofFormatError { line: 0, msg: e.to_string() })?,
        None => {
            let mut texts: Vec<String> = context_text.iter().map(|(_, s)| s.clone()).collect();
            for (_, _, f, j) in &raw_lines {
                texts.push(f.clone());
                if let Some(args) = axiom_args(j) {
                    texts.extend(args.iter().skip(1).filter_map(|a| {
                        let (k, v) = a.split_once(":=")?;
                        is_formula_slot(k.trim()).then(|| v.trim().to_string())
                    }));
                }
            }
            infer_signature(texts.iter().map(String::as_str), 1).map_err(|e| ProofFormatError { line: 0, msg: e.to_string() })?
        }
    };

    let parse_f = |ln: usize, s: &str| parse_formula(s, &sig).map_err(|e| ProofFormatError { line: ln, msg: e.to_string() });
    let context = context_text.iter().map(|(ln, s)| parse_f(*ln, s)).collect::<Result<Vec<_>, _>>()?;
    let mut proof = HilbertProof::new(system, context);
    for (ln, _, f, j) in raw_lines {
        let formula = parse_f(ln, &f)?;
        let justification = parse_justification(&j, &sig).map_err(|msg| ProofFormatError { line: ln, msg })?;
        proof.lines.push(Line { formula, justification });
    }
    Ok(proof)
}

fn is_formula_slot(k: &str) -> bool {
    k.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

/// Splits `name(a, b(c, d), e)` into `[name, a, b(c, d), e]`.
fn call(text: &str) -> Option<(String, Vec<String>)> {
    let open = text.find('(')?;
    let inner = text[open + 1..].strip_suffix(')')?;
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                args.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        args.push(cur.trim().to_string());
    }
    Some((text[..open].trim().to_string(), args))
}

fn axiom_args(j: &str) -> Option<Vec<String>> {
    match call(j)? {
        (name, args) if name == "axiom" => Some(args),
        _ => None,
    }
}

fn parse_justification(j: &str, sig: &Signature) -> Result<Justification, String> {
    if j == "hyp" {
        return Ok(Justification::Hypothesis);
    }
    let (name, args) = call(j).ok_or_else(|| format!("cannot read justification `{j}`"))?;
    let index = |s: &str| s.parse::<usize>().map_err(|_| format!("bad line reference `{s}`"));
    let two = || -> Result<(&str, &str), String> {
        match args.as_slice() {
            [a, b] => Ok((a.as_str(), b.as_str())),
            _ => Err(format!("`{name}` takes two arguments")),
        }
    };
    match name.as_str() {
        "mp" => {
            let (a, b) = two()?;
            Ok(Justification::ModusPonens(index(a)?, index(b)?))
        }
        "gen" => {
            let (a, x) = two()?;
            Ok(Justification::Generalization(index(a)?, x.to_string()))
        }
        "exi" => {
            let (a, x) = two()?;
            Ok(Justification::ExistentialInstantiation(index(a)?, x.to_string()))
        }
        "axiom" => {
            let scheme: SchemeId = args.first().ok_or("axiom needs a scheme name")?.parse()?;
            if args.len() == 1 {
                return Ok(Justification::Axiom { scheme, inst: None });
            }
            let mut inst = Instantiation::new();
            for a in &args[1..] {
                let (k, v) = a.split_once(":=").ok_or_else(|| format!("expected `slot:=value`, found `{a}`"))?;
                let (k, v) = (k.trim(), v.trim());
                inst = if is_formula_slot(k) {
                    inst.with_formula(k, parse_formula(v, sig).map_err(|e| e.to_string())?)
                } else if k == "x" {
                    inst.with_var(k, v)
                } else if k == "t" {
                    inst.with_term(k, parse_term(v, sig).map_err(|e| e.to_string())?)
                } else {
                    return Err(format!("unknown slot `{k}`"));
                };
            }
            Ok(Justification::Axiom { scheme, inst: Some(inst) })
        }
        other => Err(format!("unknown rule `{other}`")),
    }
}

fn collect_term(t: &Term, funs: &mut BTreeMap<String, usize>) {
    if let Term::App(name, args) = t {
        funs.insert(name.clone(), args.len());
        args.iter().for_each(|a| collect_term(a, funs));
    }
}

fn collect_symbols(f: &Formula, preds: &mut BTreeMap<String, usize>, funs: &mut BTreeMap<String, usize>) {
    f.visit_atoms(&mut |a| {
        preds.insert(a.pred.clone(), a.args.len());
        a.args.iter().for_each(|t| collect_term(t, funs));
    });
}

/// Prints a proof in the file format, with declarations for every symbol so
/// that free variables read back as variables.
pub fn format_proof(proof: &HilbertProof) -> String {
    let mut preds = BTreeMap::new();
    let mut funs = BTreeMap::new();
    for f in proof.context.iter().chain(proof.lines.iter().map(|l| &l.formula)) {
        collect_symbols(f, &mut preds, &mut funs);
    }
    for l in &proof.lines {
        if let Justification::Axiom { inst: Some(inst), .. } = &l.justification {
            inst.formulas.values().for_each(|f| collect_symbols(f, &mut preds, &mut funs));
            inst.terms.values().for_each(|t| collect_term(t, &mut funs));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "system {}", proof.system);
    for (f, n) in &funs {
        if *n == 0 {
            let _ = writeln!(out, "const {f}");
        } else {
            let _ = writeln!(out, "fun {f}/{n}");
        }
    }
    for (p, n) in &preds {
        let _ = writeln!(out, "pred {p}/{n}");
    }
    let ctx: Vec<String> = proof.context.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "context: {}", ctx.join("; "));
    for (i, l) in proof.lines.iter().enumerate() {
        let j = match &l.justification {
            Justification::Hypothesis => "hyp".to_string(),
            Justification::ModusPonens(a, b) => format!("mp({a},{b})"),
            Justification::Generalization(a, x) => format!("gen({a},{x})"),
            Justification::ExistentialInstantiation(a, x) => format!("exi({a},{x})"),
            Justification::Axiom { scheme, inst: None } => format!("axiom({scheme})"),
            Justification::Axiom { scheme, inst: Some(inst) } => format!("axiom({scheme}, {inst})"),
        };
        let _ = writeln!(out, "{}. {} by {}", i + 1, l.formula, j);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::check_proof;

    const SAMPLE: &str = "\
system I
context: forall x P(x)
1. forall x P(x) by hyp
2. forall x P(x) -> P(c) by axiom(AllE, X:=P(x), x:=x, t:=c)
3. P(c) by mp(1,2)
";

    #[test]
    fn parses_and_checks_sample() {
        let pf = parse_proof(SAMPLE, None).unwrap();
        assert_eq!(pf.lines.len(), 3);
        assert!(check_proof(&pf, SystemId::I).accepted());
    }

    #[test]
    fn format_round_trips() {
        let pf = parse_proof(SAMPLE, None).unwrap();
        let again = parse_proof(&format_proof(&pf), None).unwrap();
        assert_eq!(pf, again);
    }

    #[test]
    fn reports_line_of_format_error() {
        let err = parse_proof("system I\n1. p by frobnicate(1)\n", None).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(parse_proof("1. p by hyp\n", None).is_err());
    }
}
