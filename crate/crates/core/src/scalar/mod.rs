//! Exact scalar arithmetic: Gaussian-rational coefficients times Laurent
//! monomials in registered physical parameter symbols.
//!
//! Every symbolic module in the workspace sits on top of this ring. There is
//! no floating point here: coefficients are pairs of exact rationals (real and
//! imaginary part) and exponents are integers, possibly negative.

mod gauss;
mod parse;

pub use gauss::GaussRat;
pub use parse::parse_scalar;
pub(crate) use parse::{lex, Ast, Parser};


use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

/// Physical dimension as (length, time, mass) exponents.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Dimension {
    pub length: i32,
    pub time: i32,
    pub mass: i32,
}

impl Dimension {
    pub const NONE: Dimension = Dimension { length: 0, time: 0, mass: 0 };

    pub const fn new(length: i32, time: i32, mass: i32) -> Self {
        Dimension { length, time, mass }
    }

    pub fn scaled(self, k: i32) -> Self {
        Dimension::new(self.length * k, self.time * k, self.mass * k)
    }

    pub fn is_none(self) -> bool {
        self == Dimension::NONE
    }
}

impl Add for Dimension {
    type Output = Dimension;
    fn add(self, rhs: Dimension) -> Dimension {
        Dimension::new(self.length + rhs.length, self.time + rhs.time, self.mass + rhs.mass)
    }
}

impl Sub for Dimension {
    type Output = Dimension;
    fn sub(self, rhs: Dimension) -> Dimension {
        Dimension::new(self.length - rhs.length, self.time - rhs.time, self.mass - rhs.mass)
    }
}

impl Neg for Dimension {
    type Output = Dimension;
    fn neg(self) -> Dimension {
        self.scaled(-1)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_none() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (sym, e) in [("L", self.length), ("T", self.time), ("M", self.mass)] {
            if e == 1 {
                parts.push(sym.to_string());
            } else if e != 0 {
                parts.push(format!("{sym}^{e}"));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Interned identifier of a registered parameter symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct SymbolId(pub u32);

/// A symbol that is formally the exponential of another one, with
/// d(self)/d(base) = rate * self. Used by the classical Poisson module.
#[derive(Clone, Debug)]
pub struct ExpRule {
    pub base: SymbolId,
    pub rate: Scalar,
}

struct SymbolData {
    name: String,
    dimension: Dimension,
    exp_rule: Option<ExpRule>,
}

struct Registry {
    symbols: Vec<SymbolData>,
    by_name: BTreeMap<String, SymbolId>,
}

fn registry() -> &'static RwLock<Registry> {
    static REG: OnceLock<RwLock<Registry>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut reg = Registry { symbols: Vec::new(), by_name: BTreeMap::new() };
        // Deformation, quantization and realization parameters. alpha is an
        // inverse momentum; kappa and hbar are actions; lambda is the
        // dimensionful (length) parameter of the abstract coordinate algebra,
        // which maps onto i*kappa*alpha in the physical normalization.
        let builtins: &[(&str, Dimension)] = &[
            ("alpha", Dimension::new(-1, 1, -1)),
            ("kappa", Dimension::new(2, -1, 1)),
            ("hbar", Dimension::new(2, -1, 1)),
            ("lambda", Dimension::new(1, 0, 0)),
            ("m_A", Dimension::new(0, 0, 1)),
            ("m_B", Dimension::new(0, 0, 1)),
            ("phi", Dimension::new(1, -1, 0)),
            ("t", Dimension::new(0, 1, 0)),
            ("gamma", Dimension::new(1, 0, 0)),
            ("delta", Dimension::new(0, 1, 0)),
            ("xi", Dimension::new(2, -2, 1)),
            // dimension forced by homogeneity of {a, theta} = alpha*theta + beta1*alpha^2*v
            ("beta1", Dimension::new(2, -1, 1)),
        ];
        for (name, dim) in builtins {
            let id = SymbolId(reg.symbols.len() as u32);
            reg.symbols.push(SymbolData {
                name: (*name).to_string(),
                dimension: *dim,
                exp_rule: None,
            });
            reg.by_name.insert((*name).to_string(), id);
        }
        RwLock::new(reg)
    })
}

/// Register a symbol (idempotent). Panics on a dimension conflict, which is a
/// programming error, never data-driven.
pub fn register_symbol(name: &str, dimension: Dimension) -> SymbolId {
    let reg = registry();
    if let Some(&id) = reg.read().unwrap().by_name.get(name) {
        let existing = reg.read().unwrap().symbols[id.0 as usize].dimension;
        assert_eq!(
            existing, dimension,
            "symbol `{name}` already registered with dimension {existing}"
        );
        return id;
    }
    let mut w = reg.write().unwrap();
    if let Some(&id) = w.by_name.get(name) {
        return id;
    }
    let id = SymbolId(w.symbols.len() as u32);
    w.symbols.push(SymbolData { name: name.to_string(), dimension, exp_rule: None });
    w.by_name.insert(name.to_string(), id);
    id
}

/// Attach an exponential derivation rule to an already registered symbol.
pub fn set_exp_rule(sym: SymbolId, base: SymbolId, rate: Scalar) {
    let mut w = registry().write().unwrap();
    w.symbols[sym.0 as usize].exp_rule = Some(ExpRule { base, rate });
}

pub fn lookup_symbol(name: &str) -> Option<SymbolId> {
    registry().read().unwrap().by_name.get(name).copied()
}

pub fn symbol(name: &str) -> SymbolId {
    lookup_symbol(name).unwrap_or_else(|| panic!("symbol `{name}` is not registered"))
}

pub fn symbol_name(id: SymbolId) -> String {
    registry().read().unwrap().symbols[id.0 as usize].name.clone()
}

pub fn symbol_dimension(id: SymbolId) -> Dimension {
    registry().read().unwrap().symbols[id.0 as usize].dimension
}

pub fn symbol_exp_rule(id: SymbolId) -> Option<ExpRule> {
    registry().read().unwrap().symbols[id.0 as usize].exp_rule.clone()
}

pub fn alpha() -> SymbolId {
    static ID: OnceLock<SymbolId> = OnceLock::new();
    *ID.get_or_init(|| symbol("alpha"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    /// Division requested by something that is not a nonzero monomial.
    DivisionByNonMonomial(String),
    /// Substituting zero (or a non-invertible value) into a negative power.
    NegativePower(String),
    UnknownSymbol(String),
    /// Two terms of the same scalar carry different physical dimensions.
    Inhomogeneous { first: String, second: String },
    Parse(String),
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::DivisionByNonMonomial(s) => {
                write!(f, "division only by nonzero monomials, got `{s}`")
            }
            ScalarError::NegativePower(s) => {
                write!(f, "cannot raise `{s}` to a negative power")
            }
            ScalarError::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ScalarError::Inhomogeneous { first, second } => {
                write!(f, "inhomogeneous dimensions: `{first}` vs `{second}`")
            }
            ScalarError::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl std::error::Error for ScalarError {}

/// A Laurent monomial in registered symbols: sorted (symbol, exponent) pairs,
/// exponents nonzero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
pub struct Mono(Vec<(SymbolId, i32)>);

impl Mono {
    pub fn one() -> Mono {
        Mono(Vec::new())
    }

    pub fn symbol(id: SymbolId) -> Mono {
        Mono(vec![(id, 1)])
    }

    pub fn sym_pow(id: SymbolId, e: i32) -> Mono {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(id, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent_of(&self, id: SymbolId) -> i32 {
        self.0.iter().find(|(s, _)| *s == id).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn factors(&self) -> &[(SymbolId, i32)] {
        &self.0
    }

    pub fn mul(&self, rhs: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + rhs.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < rhs.0.len() {
            match self.0[i].0.cmp(&rhs.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(rhs.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = self.0[i].1 + rhs.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&rhs.0[j..]);
        Mono(out)
    }

    pub fn inv(&self) -> Mono {
        Mono(self.0.iter().map(|&(s, e)| (s, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|&(s, e)| (s, e * k)).collect())
    }

    pub fn dimension(&self) -> Dimension {
        let mut d = Dimension::NONE;
        for &(s, e) in &self.0 {
            d = d + symbol_dimension(s).scaled(e);
        }
        d
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(s, e)| {
                let name = symbol_name(s);
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Exact scalar: a finite sum of Gaussian-rational multiples of Laurent
/// monomials, with an optional upper bound on the retained alpha-degree.
///
/// Equality compares terms only; the truncation order is an operational
/// annotation, not part of the value.
#[derive(Clone, Debug, Default)]
pub struct Scalar {
    terms: BTreeMap<Mono, GaussRat>,
    trunc: Option<u32>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Scalar {}

fn min_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::default()
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    pub fn i() -> Scalar {
        Scalar::from_coeff(GaussRat::i())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_coeff(GaussRat::from_int(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Scalar {
        Scalar::from_coeff(GaussRat::from_ratio(p, q))
    }

    pub fn from_coeff(c: GaussRat) -> Scalar {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        Scalar { terms, trunc: None }
    }

    pub fn from_symbol(id: SymbolId) -> Scalar {
        Scalar::term(GaussRat::one(), Mono::symbol(id))
    }

    pub fn sym(name: &str) -> Scalar {
        Scalar::from_symbol(symbol(name))
    }

    pub fn sym_pow(name: &str, e: i32) -> Scalar {
        Scalar::term(GaussRat::one(), Mono::sym_pow(symbol(name), e))
    }

    pub fn term(c: GaussRat, m: Mono) -> Scalar {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Scalar { terms, trunc: None }
    }

    pub fn parse(text: &str) -> Result<Scalar, ScalarError> {
        parse_scalar(text)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&Mono::one()).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRat)> {
        self.terms.iter()
    }

    pub fn truncation_order(&self) -> Option<u32> {
        self.trunc
    }

    pub fn with_truncation(mut self, order: Option<u32>) -> Scalar {
        self.trunc = order;
        self.apply_trunc();
        self
    }

    /// Strip the truncation annotation without touching the terms.
    pub fn untruncated(mut self) -> Scalar {
        self.trunc = None;
        self
    }

    fn apply_trunc(&mut self) {
        if let Some(n) = self.trunc {
            let a = alpha();
            self.terms.retain(|m, _| m.exponent_of(a) <= n as i32);
        }
    }

    fn insert(terms: &mut BTreeMap<Mono, GaussRat>, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_ref(&self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Scalar::insert(&mut terms, m.clone(), c.clone());
        }
        let mut out = Scalar { terms, trunc: min_trunc(self.trunc, rhs.trunc) };
        out.apply_trunc();
        out
    }

    pub fn sub_ref(&self, rhs: &Scalar) -> Scalar {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn mul_ref(&self, rhs: &Scalar) -> Scalar {
        let trunc = min_trunc(self.trunc, rhs.trunc);
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                Scalar::insert(&mut terms, m1.mul(m2), c1.mul(c2));
            }
        }
        let mut out = Scalar { terms, trunc };
        out.apply_trunc();
        out
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        let mut out = Scalar {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
            trunc: self.trunc,
        };
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// Exact division by a single-term scalar.
    pub fn div_monomial(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if rhs.terms.len() != 1 {
            return Err(ScalarError::DivisionByNonMonomial(rhs.to_string()));
        }
        let (m, c) = rhs.terms.iter().next().unwrap();
        let minv = m.inv();
        let cinv = c.recip();
        let mut out = Scalar {
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(&minv), tc.mul(&cinv)))
                .collect(),
            trunc: min_trunc(self.trunc, rhs.trunc),
        };
        out.apply_trunc();
        Ok(out)
    }

    pub fn pow(&self, k: i32) -> Result<Scalar, ScalarError> {
        if k < 0 {
            if self.terms.len() != 1 {
                return Err(ScalarError::NegativePower(self.to_string()));
            }
            let (m, c) = self.terms.iter().next().unwrap();
            return Ok(Scalar {
                terms: BTreeMap::from([(m.pow(k), c.recip().pow((-k) as u32))]),
                trunc: self.trunc,
            });
        }
        let mut out = Scalar::one().with_truncation(self.trunc);
        for _ in 0..k {
            out = out.mul_ref(self);
        }
        Ok(out)
    }

    /// Drop every term whose alpha-degree exceeds `order` and remember the
    /// bound for subsequent arithmetic. Negative alpha-degrees are retained.
    pub fn alpha_truncate(&self, order: u32) -> Scalar {
        self.clone().with_truncation(Some(order))
    }

    pub fn degree_range(&self, sym: SymbolId) -> Option<(i32, i32)> {
        let mut range: Option<(i32, i32)> = None;
        for m in self.terms.keys() {
            let e = m.exponent_of(sym);
            range = Some(match range {
                None => (e, e),
                Some((lo, hi)) => (lo.min(e), hi.max(e)),
            });
        }
        range
    }

    pub fn has_negative_degree(&self, sym: SymbolId) -> bool {
        self.degree_range(sym).map(|(lo, _)| lo < 0).unwrap_or(false)
    }

    /// Substitute `value` for `sym`. Negative powers of `sym` require `value`
    /// to be a nonzero monomial; terms with positive powers vanish when
    /// `value` is zero.
    pub fn substitute(&self, sym: SymbolId, value: &Scalar) -> Result<Scalar, ScalarError> {
        let mut out = Scalar::zero().with_truncation(min_trunc(self.trunc, value.trunc));
        for (m, c) in &self.terms {
            let e = m.exponent_of(sym);
            if e == 0 {
                out = out.add_ref(&Scalar::term(c.clone(), m.clone()));
                continue;
            }
            if value.is_zero() {
                if e < 0 {
                    return Err(ScalarError::NegativePower(format!(
                        "{} -> 0 in {}",
                        symbol_name(sym),
                        self
                    )));
                }
                continue;
            }
            let rest = m.mul(&Mono::sym_pow(sym, -e));
            let v = value.pow(e)?;
            out = out.add_ref(&v.mul_ref(&Scalar::term(c.clone(), rest)));
        }
        Ok(out)
    }

    pub fn substitute_zero(&self, sym: SymbolId) -> Result<Scalar, ScalarError> {
        self.substitute(sym, &Scalar::zero())
    }

    /// Simultaneous substitution: symbols introduced by one image are never
    /// re-substituted by another.
    pub fn substitute_many(
        &self,
        images: &BTreeMap<SymbolId, Scalar>,
    ) -> Result<Scalar, ScalarError> {
        let mut out = Scalar::zero().with_truncation(self.trunc);
        for (m, c) in &self.terms {
            let mut term = Scalar::from_coeff(c.clone());
            let mut rest = Vec::new();
            for &(s, e) in m.factors() {
                match images.get(&s) {
                    Some(v) => {
                        if v.is_zero() && e < 0 {
                            return Err(ScalarError::NegativePower(format!(
                                "{} -> 0 in {}",
                                symbol_name(s),
                                self
                            )));
                        }
                        term = term.mul_ref(&v.pow(e)?);
                    }
                    None => rest.push((s, e)),
                }
            }
            out = out.add_ref(&term.mul_ref(&Scalar::term(GaussRat::one(), Mono(rest))));
        }
        Ok(out)
    }

    /// Partial derivative, honoring exponential symbol rules
    /// (d E / d base = rate * E).
    pub fn derivative(&self, sym: SymbolId) -> Scalar {
        let mut out = Scalar::zero().with_truncation(self.trunc);
        for (m, c) in &self.terms {
            for &(s, e) in m.factors() {
                if s == sym {
                    let lowered = m.mul(&Mono::sym_pow(sym, -1));
                    out = out.add_ref(&Scalar::term(c.mul(&GaussRat::from_int(e as i64)), lowered));
                } else if let Some(rule) = symbol_exp_rule(s) {
                    if rule.base == sym {
                        let term = Scalar::term(c.mul(&GaussRat::from_int(e as i64)), m.clone());
                        out = out.add_ref(&rule.rate.mul_ref(&term));
                    }
                }
            }
        }
        out
    }

    /// Common dimension of all terms, or the first offending pair.
    pub fn dimension(&self) -> Result<Option<Dimension>, ScalarError> {
        let mut result: Option<(Dimension, &Mono)> = None;
        for m in self.terms.keys() {
            let d = m.dimension();
            match result {
                None => result = Some((d, m)),
                Some((d0, m0)) if d0 != d => {
                    return Err(ScalarError::Inhomogeneous {
                        first: m0.to_string(),
                        second: m.to_string(),
                    })
                }
                _ => {}
            }
        }
        Ok(result.map(|(d, _)| d))
    }

    /// Exact polynomial division; `None` when `self` is not divisible.
    pub fn exact_div(&self, divisor: &Scalar) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if divisor.is_zero() {
            return None;
        }
        if divisor.terms.len() == 1 {
            return self.div_monomial(divisor).ok();
        }
        // Shift both operands into true polynomials over the involved
        // symbols, divide there, then shift back.
        let mut syms = BTreeMap::new();
        for m in self.terms.keys().chain(divisor.terms.keys()) {
            for &(s, e) in m.factors() {
                let entry = syms.entry(s).or_insert(0);
                *entry = (*entry).min(e);
            }
        }
        let shift_self = Mono(
            syms.iter().filter(|(_, &e)| e < 0).map(|(&s, &e)| (s, -e)).collect::<Vec<_>>(),
        );
        let num = self.mul_ref(&Scalar::term(GaussRat::one(), shift_self.clone()));
        let den_shift = Mono(
            divisor
                .terms
                .keys()
                .flat_map(|m| m.factors().iter().copied())
                .fold(BTreeMap::new(), |mut acc, (s, e)| {
                    let entry = acc.entry(s).or_insert(0);
                    *entry = (*entry).min(e);
                    acc
                })
                .into_iter()
                .filter(|&(_, e)| e < 0)
                .map(|(s, e)| (s, -e))
                .collect(),
        );
        let den = divisor.mul_ref(&Scalar::term(GaussRat::one(), den_shift.clone()));
        let q = poly_exact_div(&num, &den)?;
        let back = Scalar::term(GaussRat::one(), shift_self.inv().mul(&den_shift));
        Some(q.mul_ref(&back))
    }
}

/// Graded-lex order on nonnegative-exponent monomials over a shared symbol
/// list; used only inside exact polynomial division.
fn grlex_key(m: &Mono, symbols: &[SymbolId]) -> (i64, Vec<i32>) {
    let total: i64 = m.factors().iter().map(|&(_, e)| e as i64).sum();
    let exps = symbols.iter().map(|&s| m.exponent_of(s)).collect();
    (total, exps)
}

fn poly_exact_div(num: &Scalar, den: &Scalar) -> Option<Scalar> {
    let mut symbols: Vec<SymbolId> = Vec::new();
    for m in num.terms.keys().chain(den.terms.keys()) {
        for &(s, _) in m.factors() {
            if !symbols.contains(&s) {
                symbols.push(s);
            }
        }
    }
    symbols.sort();
    let lead = |s: &Scalar| -> Option<(Mono, GaussRat)> {
        s.terms
            .iter()
            .max_by(|a, b| grlex_key(a.0, &symbols).cmp(&grlex_key(b.0, &symbols)))
            .map(|(m, c)| (m.clone(), c.clone()))
    };
    let (dm, dc) = lead(den)?;
    let mut rem = num.clone().untruncated();
    let mut quot = Scalar::zero();
    let mut guard = 0usize;
    while !rem.is_zero() {
        guard += 1;
        if guard > 100_000 {
            return None;
        }
        let (rm, rc) = lead(&rem)?;
        // leading-term divisibility in the shifted (polynomial) setting
        let qm = rm.mul(&dm.inv());
        if qm.factors().iter().any(|&(_, e)| e < 0) {
            return None;
        }
        let qc = rc.div(&dc);
        let qt = Scalar::term(qc, qm);
        rem = rem.sub_ref(&qt.mul_ref(den));
        quot = quot.add_ref(&qt);
    }
    Some(quot)
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.sub_ref(rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (sign, mag) = c.signed_display();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        Scalar::parse(text).unwrap()
    }

    #[test]
    fn monomial_product_and_inverse_cancel() {
        let x = s("kappa*alpha * 1/1 * hbar^-1");
        let y = x.pow(-1).unwrap();
        assert!(x.mul_ref(&y).is_one());
    }

    #[test]
    fn product_with_unit_coefficient() {
        // (i*kappa*alpha) * 1 = i*kappa*alpha
        let x = s("i*kappa*alpha");
        assert_eq!(x.mul_ref(&Scalar::one()), x);
    }

    #[test]
    fn truncated_square_drops_second_order() {
        let x = s("1 + alpha*phi").alpha_truncate(1);
        let sq = x.mul_ref(&x);
        assert_eq!(sq, s("1 + 2*alpha*phi"));
    }

    #[test]
    fn alpha_truncate_keeps_negative_degrees() {
        let x = s("alpha^-1*phi^-1 + alpha^2*phi");
        let t = x.alpha_truncate(1);
        assert_eq!(t, s("alpha^-1*phi^-1"));
        assert!(t.has_negative_degree(alpha()));
    }

    #[test]
    fn alpha_square_vanishes_at_order_one() {
        assert!(s("alpha^2*phi").alpha_truncate(1).is_zero());
    }

    #[test]
    fn dimension_of_kappa_alpha_is_length() {
        let d = s("kappa*alpha").dimension().unwrap().unwrap();
        assert_eq!(d, Dimension::new(1, 0, 0));
    }

    #[test]
    fn dimension_of_kappa_alpha_v_matches_theta() {
        register_symbol("v", Dimension::new(1, -1, 0));
        let d = s("kappa*alpha*v").dimension().unwrap().unwrap();
        assert_eq!(d, Dimension::new(2, -1, 0));
    }

    #[test]
    fn kappa_plus_alpha_is_inhomogeneous() {
        assert!(matches!(
            s("kappa + alpha").dimension(),
            Err(ScalarError::Inhomogeneous { .. })
        ));
    }

    #[test]
    fn division_by_sum_is_rejected() {
        let e = s("kappa").div_monomial(&s("1 + alpha"));
        assert!(matches!(e, Err(ScalarError::DivisionByNonMonomial(_))));
    }

    #[test]
    fn substitute_monomial_into_negative_power() {
        // m_A -> 1/(alpha*phi), so 1/m_A -> alpha*phi
        let inv_ma = s("m_A^-1");
        let val = s("alpha^-1*phi^-1");
        let got = inv_ma.substitute(symbol("m_A"), &val).unwrap();
        assert_eq!(got, s("alpha*phi"));
    }

    #[test]
    fn substitute_zero_rejects_negative_power() {
        assert!(s("alpha^-1").substitute_zero(alpha()).is_err());
        assert_eq!(s("1 + alpha*phi").substitute_zero(alpha()).unwrap(), s("1"));
    }

    #[test]
    fn exact_division_of_polynomials() {
        let a = s("1 + 2*alpha*phi + alpha^2*phi^2");
        let b = s("1 + alpha*phi");
        assert_eq!(a.exact_div(&b).unwrap(), b);
        assert!(s("1 + alpha").exact_div(&s("1 + phi")).is_none());
    }

    #[test]
    fn exact_division_with_laurent_shift() {
        let a = s("kappa^-1 + alpha*kappa^-1");
        let b = s("1 + alpha");
        assert_eq!(a.exact_div(&b).unwrap(), s("kappa^-1"));
    }

    #[test]
    fn derivative_uses_exp_rule() {
        let p = register_symbol("p_cl", Dimension::new(1, -1, 1));
        let e = register_symbol("E_cl", Dimension::NONE);
        set_exp_rule(e, p, Scalar::sym("alpha"));
        let f = Scalar::from_symbol(e).mul_ref(&Scalar::from_symbol(p));
        // d(p E)/dp = E + alpha p E
        let expect = s("E_cl + alpha*p_cl*E_cl");
        assert_eq!(f.derivative(p), expect);
    }
}
