//! Declarative text format for algebra specs, plus element parsing.
//!
//! ```text
//! algebra weyl-a
//! symbol extra dim(0,0,0)          # optional scalar symbols
//! gen q_A dim(1,0,0)
//! gen p_A dim(1,-1,1)
//! gen E_A dim(0,0,0) exp(alpha, p_A)
//! comm [q_A, p_A] = i*kappa
//! comm [q_A, E_A] = i*kappa*alpha * E_A
//! ```
//!
//! Commutator right-hand sides must be written in normal order (generator
//! factors nondecreasing in the declared order); unlisted pairs commute.

use super::{AlgebraSpec, Expo, NCElement, NcError, SpecBuilder, TermMap};
use crate::scalar::{lex, register_symbol, Ast, Dimension, Parser, Scalar};
use std::sync::Arc;

fn parse_dim(text: &str) -> Result<Dimension, NcError> {
    let inner = text
        .trim()
        .strip_prefix("dim(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| NcError::Parse(format!("expected dim(l,t,m), got `{text}`")))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(NcError::Parse(format!("expected three dimension exponents in `{text}`")));
    }
    let mut vals = [0i32; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse()
            .map_err(|_| NcError::Parse(format!("bad dimension exponent `{p}`")))?;
    }
    Ok(Dimension::new(vals[0], vals[1], vals[2]))
}

/// Split `exp(rate, base)` at its top-level comma.
fn parse_exp_clause(text: &str) -> Result<(String, String), NcError> {
    let inner = text
        .trim()
        .strip_prefix("exp(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| NcError::Parse(format!("expected exp(rate, base), got `{text}`")))?;
    let mut depth = 0usize;
    for (pos, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                return Ok((inner[..pos].trim().to_string(), inner[pos + 1..].trim().to_string()))
            }
            _ => {}
        }
    }
    Err(NcError::Parse(format!("missing comma in `{text}`")))
}

/// Normal-ordered polynomial under construction: the algebra is not finished
/// yet, so products must already be ordered.
struct OrderedPoly {
    terms: Vec<(Scalar, Vec<i32>)>,
}

fn eval_ordered(
    ast: &Ast,
    gens: &[(String, bool)], // (name, invertible)
) -> Result<OrderedPoly, NcError> {
    let arity = gens.len();
    let gen_index = |name: &str| gens.iter().position(|(n, _)| n == name);
    match ast {
        Ast::Num(n, d) => {
            Ok(OrderedPoly { terms: vec![(Scalar::from_ratio(*n, *d), vec![0; arity])] })
        }
        Ast::I => Ok(OrderedPoly { terms: vec![(Scalar::i(), vec![0; arity])] }),
        Ast::Sym(name) => match gen_index(name) {
            Some(idx) => {
                let mut e = vec![0; arity];
                e[idx] = 1;
                Ok(OrderedPoly { terms: vec![(Scalar::one(), e)] })
            }
            None => {
                let s = Scalar::parse(name).map_err(NcError::Scalar)?;
                Ok(OrderedPoly { terms: vec![(s, vec![0; arity])] })
            }
        },
        Ast::Pow(base, e) => {
            if let Ast::Sym(name) = base.as_ref() {
                if let Some(idx) = gen_index(name) {
                    if *e < 0 && !gens[idx].1 {
                        return Err(NcError::NegativeExponent { gen: name.clone() });
                    }
                    let mut expo = vec![0; arity];
                    expo[idx] = *e;
                    return Ok(OrderedPoly { terms: vec![(Scalar::one(), expo)] });
                }
            }
            // scalar-only base
            let inner = eval_ordered(base, gens)?;
            let mut acc = Scalar::zero();
            for (c, expo) in &inner.terms {
                if expo.iter().any(|&x| x != 0) {
                    return Err(NcError::Parse(
                        "powers of generator sums are not allowed in table entries".into(),
                    ));
                }
                acc = acc.add_ref(c);
            }
            Ok(OrderedPoly { terms: vec![(acc.pow(*e).map_err(NcError::Scalar)?, vec![0; arity])] })
        }
        Ast::Neg(inner) => {
            let mut p = eval_ordered(inner, gens)?;
            for (c, _) in &mut p.terms {
                *c = c.neg_ref();
            }
            Ok(p)
        }
        Ast::Sum(parts) => {
            let mut terms = Vec::new();
            for p in parts {
                terms.extend(eval_ordered(p, gens)?.terms);
            }
            Ok(OrderedPoly { terms })
        }
        Ast::Prod(factors) => {
            let mut terms: Vec<(Scalar, Vec<i32>)> = vec![(Scalar::one(), vec![0; arity])];
            for f in factors {
                let fp = eval_ordered(f, gens)?;
                let mut next = Vec::new();
                for (c1, e1) in &terms {
                    for (c2, e2) in &fp.terms {
                        // the factor's generators must not precede anything
                        // already accumulated
                        let last = e1.iter().rposition(|&x| x != 0);
                        let first = e2.iter().position(|&x| x != 0);
                        if let (Some(l), Some(fgen)) = (last, first) {
                            if fgen < l {
                                return Err(NcError::Parse(format!(
                                    "table entry products must be normal-ordered: `{}` after `{}`",
                                    gens[fgen].0, gens[l].0
                                )));
                            }
                        }
                        let mut e = e1.clone();
                        for (x, y) in e.iter_mut().zip(e2) {
                            *x += *y;
                        }
                        next.push((c1.mul_ref(c2), e));
                    }
                }
                terms = next;
            }
            Ok(OrderedPoly { terms })
        }
    }
}

pub fn parse_spec(text: &str) -> Result<Arc<AlgebraSpec>, NcError> {
    let mut name = String::new();
    let mut gens: Vec<(String, bool)> = Vec::new();
    let mut builder: Option<SpecBuilder> = None;
    let mut pending_comms: Vec<(String, String, TermMap)> = Vec::new();

    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("algebra ") {
            name = rest.trim().to_string();
            builder = Some(AlgebraSpec::builder(&name));
        } else if let Some(rest) = line.strip_prefix("symbol ") {
            let mut parts = rest.trim().splitn(2, char::is_whitespace);
            let sym = parts.next().unwrap_or("").to_string();
            let dim = parse_dim(parts.next().unwrap_or(""))?;
            register_symbol(&sym, dim);
        } else if let Some(rest) = line.strip_prefix("gen ") {
            if !pending_comms.is_empty() {
                return Err(NcError::Parse("declare all generators before commutators".into()));
            }
            let rest = rest.trim();
            let mut parts = rest.splitn(3, char::is_whitespace);
            let gname = parts.next().unwrap_or("").to_string();
            let dim = parse_dim(parts.next().unwrap_or(""))?;
            let tail = parts.next().unwrap_or("").trim();
            let b = builder.take().ok_or_else(|| NcError::Parse("missing `algebra` line".into()))?;
            if tail.is_empty() {
                builder = Some(b.gen(&gname, dim));
                gens.push((gname, false));
            } else {
                let (rate_text, base) = parse_exp_clause(tail)?;
                let rate = Scalar::parse(&rate_text).map_err(NcError::Scalar)?;
                builder = Some(b.exp_gen(&gname, dim, &base, rate));
                gens.push((gname, true));
            }
        } else if let Some(rest) = line.strip_prefix("comm ") {
            let rest = rest.trim();
            let (bracket, rhs_text) = rest
                .split_once('=')
                .ok_or_else(|| NcError::Parse(format!("missing `=` in `{line}`")))?;
            let inner = bracket
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.trim_end().strip_suffix(']'))
                .ok_or_else(|| NcError::Parse(format!("expected [a, b] in `{line}`")))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| NcError::Parse(format!("expected two generators in `{line}`")))?;
            let mut parser = Parser::new(rhs_text).map_err(NcError::Scalar)?;
            let ast = parser.parse_expr().map_err(NcError::Scalar)?;
            if !parser.at_end() {
                return Err(NcError::Parse(format!("trailing input in `{rhs_text}`")));
            }
            let poly = eval_ordered(&ast, &gens)?;
            let mut table = TermMap::new();
            for (c, e) in poly.terms {
                super::add_term(&mut table, Expo(e), c);
            }
            pending_comms.push((a.trim().to_string(), b.trim().to_string(), table));
        } else {
            return Err(NcError::Parse(format!("unrecognized line `{line}`")));
        }
    }
    let mut b = builder.ok_or_else(|| NcError::Parse("missing `algebra` line".into()))?;
    for (a, bb, t) in pending_comms {
        b = b.comm_terms(&a, &bb, t);
    }
    let _ = lex(""); // keep the lexer linked for error paths
    let _ = name;
    b.finish()
}

fn as_pure_scalar(x: &NCElement) -> Option<Scalar> {
    let mut acc = Scalar::zero();
    for (expo, c) in x.terms() {
        if !expo.is_unit() {
            return None;
        }
        acc = acc.add_ref(c);
    }
    Some(acc)
}

fn eval_element(spec: &Arc<AlgebraSpec>, ast: &Ast) -> Result<NCElement, NcError> {
    match ast {
        Ast::Num(n, d) => Ok(NCElement::scalar(spec, Scalar::from_ratio(*n, *d))),
        Ast::I => Ok(NCElement::scalar(spec, Scalar::i())),
        Ast::Sym(name) => match spec.gen_index(name) {
            Some(idx) => Ok(NCElement::gen_pow(spec, idx, 1)),
            None => Ok(NCElement::scalar(spec, Scalar::parse(name).map_err(NcError::Scalar)?)),
        },
        Ast::Pow(base, e) => {
            if let Ast::Sym(name) = base.as_ref() {
                if let Some(idx) = spec.gen_index(name) {
                    if *e < 0 && !spec.is_invertible(idx) {
                        return Err(NcError::NegativeExponent { gen: name.clone() });
                    }
                    return Ok(NCElement::gen_pow(spec, idx, *e));
                }
            }
            let inner = eval_element(spec, base)?;
            if let Some(s) = as_pure_scalar(&inner) {
                return Ok(NCElement::scalar(spec, s.pow(*e).map_err(NcError::Scalar)?));
            }
            if *e < 0 {
                return Err(NcError::Parse("negative powers only on invertible generators".into()));
            }
            inner.pow(*e as u32)
        }
        Ast::Neg(inner) => Ok(eval_element(spec, inner)?.neg()),
        Ast::Sum(parts) => {
            let mut acc = NCElement::zero(spec);
            for p in parts {
                acc = acc.add(&eval_element(spec, p)?)?;
            }
            Ok(acc)
        }
        Ast::Prod(factors) => {
            let mut acc = NCElement::one(spec);
            for f in factors {
                acc = acc.mul(&eval_element(spec, f)?)?;
            }
            Ok(acc)
        }
    }
}

/// Parse an element of a finished spec; products may appear in any order and
/// are normalized.
pub(super) fn parse_element(spec: &Arc<AlgebraSpec>, text: &str) -> Result<NCElement, NcError> {
    let mut p = Parser::new(text).map_err(NcError::Scalar)?;
    let ast = p.parse_expr().map_err(NcError::Scalar)?;
    if !p.at_end() {
        return Err(NcError::Parse(format!("trailing input in `{text}`")));
    }
    eval_element(spec, &ast)
}
