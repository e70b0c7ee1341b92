//! Noncommutative polynomial algebra with normal ordering driven by a
//! declarative commutator table.
//!
//! An [`AlgebraSpec`] fixes an ordered list of generators and the value of
//! `[g_i, g_j]` for every `i < j` (missing entries are zero). Elements are
//! sparse maps from ordered exponent vectors to [`Scalar`] coefficients.
//! Products are normalized by adjacent transpositions: every swap of an
//! out-of-order pair inserts the commutator correction, which by the
//! termination condition on the table has lower degree or fewer inversions.
//!
//! Generators flagged as formal exponentials (`E = exp(rate * base)`) admit
//! negative exponents; `E * E^-1` cancels during normalization and the swap
//! rules for inverse powers follow from `[g, E^-1] = -E^-1 [g, E] E^-1`.

mod parse;
mod solve;

pub use parse::parse_spec;
pub use solve::{span_solve, RingFraction, SpanOutcome};

use crate::scalar::{Dimension, Scalar, ScalarError, SymbolId};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub enum NcError {
    SpecMismatch { left: String, right: String },
    RewriteBudgetExceeded { budget: u64 },
    UnknownGenerator(String),
    NegativeExponent { gen: String },
    MissingImage { gen: String },
    DependentBasis { index: usize },
    Scalar(ScalarError),
    Parse(String),
}

impl fmt::Display for NcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NcError::SpecMismatch { left, right } => {
                write!(f, "elements belong to different algebras: `{left}` vs `{right}`")
            }
            NcError::RewriteBudgetExceeded { budget } => {
                write!(f, "normal ordering exceeded the swap budget of {budget}")
            }
            NcError::UnknownGenerator(g) => write!(f, "unknown generator `{g}`"),
            NcError::NegativeExponent { gen } => {
                write!(f, "negative exponent on non-invertible generator `{gen}`")
            }
            NcError::MissingImage { gen } => {
                write!(f, "substitution has no image for generator `{gen}`")
            }
            NcError::DependentBasis { index } => {
                write!(f, "basis element {index} is linearly dependent on the others")
            }
            NcError::Scalar(e) => write!(f, "{e}"),
            NcError::Parse(msg) => write!(f, "spec parse error: {msg}"),
        }
    }
}

impl std::error::Error for NcError {}

impl From<ScalarError> for NcError {
    fn from(e: ScalarError) -> Self {
        NcError::Scalar(e)
    }
}

/// A generator that is formally `exp(rate * base)` for another generator
/// `base` of the same spec. Such generators are invertible and can be
/// expanded into truncated power series.
#[derive(Clone, Debug)]
pub struct ExpGen {
    pub base: usize,
    pub rate: Scalar,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub dimension: Dimension,
    pub exp: Option<ExpGen>,
}

/// Exponent vector over the generators of one spec, in generator order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Expo(pub Vec<i32>);

impl Expo {
    pub fn unit(n: usize) -> Expo {
        Expo(vec![0; n])
    }

    pub fn of_gen(n: usize, idx: usize, e: i32) -> Expo {
        let mut v = vec![0; n];
        v[idx] = e;
        Expo(v)
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e.abs() as i64).sum()
    }
}

pub type TermMap = BTreeMap<Expo, Scalar>;

fn add_term(map: &mut TermMap, expo: Expo, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(expo) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add_ref(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub struct AlgebraSpec {
    name: String,
    gens: Vec<Generator>,
    /// [g_i, g_j] for i < j, keyed by (i, j); absent means zero.
    comm: BTreeMap<(usize, usize), TermMap>,
}

pub const DEFAULT_SWAP_BUDGET: u64 = 1_000_000;

impl AlgebraSpec {
    pub fn builder(name: &str) -> SpecBuilder {
        SpecBuilder { name: name.to_string(), gens: Vec::new(), comms: Vec::new() }
    }

    pub fn parse(text: &str) -> Result<Arc<AlgebraSpec>, NcError> {
        parse_spec(text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn generator(&self, idx: usize) -> &Generator {
        &self.gens[idx]
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn is_invertible(&self, idx: usize) -> bool {
        self.gens[idx].exp.is_some()
    }

    /// [g_i, g_j] with i < j; `None` when the generators commute.
    pub fn comm_table(&self, i: usize, j: usize) -> Option<&TermMap> {
        debug_assert!(i < j);
        self.comm.get(&(i, j))
    }

    fn units_of(&self, expo: &Expo) -> Vec<(usize, i8)> {
        let mut w = Vec::with_capacity(expo.total_degree() as usize);
        for (idx, &e) in expo.0.iter().enumerate() {
            let sign: i8 = if e >= 0 { 1 } else { -1 };
            for _ in 0..e.abs() {
                w.push((idx, sign));
            }
        }
        w
    }

    /// Dimensional homogeneity of every table entry:
    /// dim([g_i, g_j]) must equal dim(g_i) + dim(g_j) termwise.
    pub fn check_dimensions(&self) -> Result<(), String> {
        for (&(i, j), table) in &self.comm {
            let want = self.gens[i].dimension + self.gens[j].dimension;
            for (expo, coeff) in table {
                let mut d = coeff
                    .dimension()
                    .map_err(|e| format!("[{}, {}]: {e}", self.gens[i].name, self.gens[j].name))?
                    .unwrap_or(Dimension::NONE);
                for (idx, &e) in expo.0.iter().enumerate() {
                    d = d + self.gens[idx].dimension.scaled(e);
                }
                if d != want {
                    return Err(format!(
                        "[{}, {}] is dimensionally inhomogeneous: term has {d}, expected {want}",
                        self.gens[i].name, self.gens[j].name
                    ));
                }
            }
        }
        // exponential rates must make the exponent dimensionless
        for g in &self.gens {
            if let Some(exp) = &g.exp {
                let rate_dim = exp
                    .rate
                    .dimension()
                    .map_err(|e| format!("rate of {}: {e}", g.name))?
                    .unwrap_or(Dimension::NONE);
                let d = rate_dim + self.gens[exp.base].dimension;
                if !d.is_none() {
                    return Err(format!("exponent of `{}` has dimension {d}", g.name));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraSpec({})", self.name)
    }
}

pub struct SpecBuilder {
    name: String,
    gens: Vec<Generator>,
    comms: Vec<(String, String, TermMap)>,
}

impl SpecBuilder {
    pub fn gen(mut self, name: &str, dimension: Dimension) -> Self {
        self.gens.push(Generator { name: name.to_string(), dimension, exp: None });
        self
    }

    pub fn exp_gen(mut self, name: &str, dimension: Dimension, base: &str, rate: Scalar) -> Self {
        let base_idx = self
            .gens
            .iter()
            .position(|g| g.name == base)
            .unwrap_or_else(|| panic!("exp base `{base}` must be declared before `{name}`"));
        self.gens.push(Generator {
            name: name.to_string(),
            dimension,
            exp: Some(ExpGen { base: base_idx, rate }),
        });
        self
    }

    /// Record [a, b] = rhs, where rhs is a normal-ordered term map.
    pub fn comm_terms(mut self, a: &str, b: &str, rhs: TermMap) -> Self {
        self.comms.push((a.to_string(), b.to_string(), rhs));
        self
    }

    pub fn finish(self) -> Result<Arc<AlgebraSpec>, NcError> {
        let mut comm = BTreeMap::new();
        let n = self.gens.len();
        let index = |name: &str| {
            self.gens
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| NcError::UnknownGenerator(name.to_string()))
        };
        for (a, b, rhs) in self.comms {
            let (ia, ib) = (index(&a)?, index(&b)?);
            if ia == ib {
                return Err(NcError::Parse(format!("commutator [{a}, {a}] must be zero")));
            }
            let (key, table): ((usize, usize), TermMap) = if ia < ib {
                ((ia, ib), rhs)
            } else {
                // store [g_i, g_j] for i < j; flip the sign when given backwards
                ((ib, ia), rhs.into_iter().map(|(e, c)| (e, c.neg_ref())).collect())
            };
            for expo in table.keys() {
                if expo.0.len() != n {
                    return Err(NcError::Parse(format!(
                        "commutator [{a}, {b}] has a term of wrong arity"
                    )));
                }
                for (idx, &e) in expo.0.iter().enumerate() {
                    if e < 0 && self.gens[idx].exp.is_none() {
                        return Err(NcError::NegativeExponent {
                            gen: self.gens[idx].name.clone(),
                        });
                    }
                }
            }
            if comm.insert(key, table).is_some() {
                return Err(NcError::Parse(format!("duplicate commutator [{a}, {b}]")));
            }
        }
        comm.retain(|_, t: &mut TermMap| !t.is_empty());
        Ok(Arc::new(AlgebraSpec { name: self.name, gens: self.gens, comm }))
    }
}

/// Which inversion to resolve next during normal ordering. All choices agree
/// on the final normal form (confluence); the default is deterministic.
#[derive(Clone, Copy, Debug)]
pub enum SwapOrder {
    Leftmost,
    Rightmost,
    Seeded(u64),
}

struct SwapPicker {
    order: SwapOrder,
    state: u64,
}

impl SwapPicker {
    fn new(order: SwapOrder) -> SwapPicker {
        let state = match order {
            SwapOrder::Seeded(s) => s | 1,
            _ => 1,
        };
        SwapPicker { order, state }
    }

    fn pick(&mut self, n_choices: usize) -> usize {
        match self.order {
            SwapOrder::Leftmost => 0,
            SwapOrder::Rightmost => n_choices - 1,
            SwapOrder::Seeded(_) => {
                // xorshift64
                let mut x = self.state;
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                self.state = x;
                (x % n_choices as u64) as usize
            }
        }
    }
}

fn cancel_adjacent_inverses(w: &mut Vec<(usize, i8)>) {
    let mut i = 0;
    while i + 1 < w.len() {
        if w[i].0 == w[i + 1].0 && w[i].1 != w[i + 1].1 {
            w.drain(i..i + 2);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
}

fn straighten(
    spec: &AlgebraSpec,
    coeff: Scalar,
    word: Vec<(usize, i8)>,
    picker: &mut SwapPicker,
    budget: &mut u64,
    initial_budget: u64,
    out: &mut TermMap,
) -> Result<(), NcError> {
    let n = spec.num_gens();
    let mut stack: Vec<(Scalar, Vec<(usize, i8)>)> = vec![(coeff, word)];
    while let Some((c, mut w)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        cancel_adjacent_inverses(&mut w);
        let inversions: Vec<usize> =
            (0..w.len().saturating_sub(1)).filter(|&k| w[k].0 > w[k + 1].0).collect();
        if inversions.is_empty() {
            let mut expo = vec![0i32; n];
            for &(g, s) in &w {
                expo[g] += s as i32;
            }
            add_term(out, Expo(expo), c);
            continue;
        }
        if *budget == 0 {
            return Err(NcError::RewriteBudgetExceeded { budget: initial_budget });
        }
        *budget -= 1;
        let k = inversions[picker.pick(inversions.len())];
        let (hi, lo) = (w[k], w[k + 1]);
        let mut swapped = w.clone();
        swapped.swap(k, k + 1);
        stack.push((c.clone(), swapped));
        let Some(table) = spec.comm_table(lo.0, hi.0) else { continue };
        // corrections from [hi^s1, lo^s2] expressed through T = [g_lo, g_hi]
        let prefix = &w[..k];
        let suffix = &w[k + 2..];
        for (mexpo, mc) in table {
            let inner = spec.units_of(mexpo);
            let (sign_flip, wrap_l, wrap_r): (bool, Vec<(usize, i8)>, Vec<(usize, i8)>) =
                match (hi.1, lo.1) {
                    (1, 1) => (true, vec![], vec![]),
                    (-1, 1) => (false, vec![(hi.0, -1)], vec![(hi.0, -1)]),
                    (1, -1) => (false, vec![(lo.0, -1)], vec![(lo.0, -1)]),
                    (-1, -1) => (
                        true,
                        vec![(hi.0, -1), (lo.0, -1)],
                        vec![(lo.0, -1), (hi.0, -1)],
                    ),
                    _ => unreachable!(),
                };
            let mut neww =
                Vec::with_capacity(prefix.len() + suffix.len() + inner.len() + wrap_l.len() * 2);
            neww.extend_from_slice(prefix);
            neww.extend_from_slice(&wrap_l);
            neww.extend_from_slice(&inner);
            neww.extend_from_slice(&wrap_r);
            neww.extend_from_slice(suffix);
            let term_coeff = if sign_flip {
                c.mul_ref(&mc.neg_ref())
            } else {
                c.mul_ref(mc)
            };
            stack.push((term_coeff, neww));
        }
    }
    Ok(())
}

#[derive(Clone)]
pub struct NCElement {
    spec: Arc<AlgebraSpec>,
    terms: TermMap,
}

impl PartialEq for NCElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) && self.terms == other.terms
    }
}

impl Eq for NCElement {}

impl NCElement {
    pub fn zero(spec: &Arc<AlgebraSpec>) -> NCElement {
        NCElement { spec: spec.clone(), terms: TermMap::new() }
    }

    pub fn one(spec: &Arc<AlgebraSpec>) -> NCElement {
        NCElement::scalar(spec, Scalar::one())
    }

    pub fn scalar(spec: &Arc<AlgebraSpec>, c: Scalar) -> NCElement {
        let mut terms = TermMap::new();
        if !c.is_zero() {
            terms.insert(Expo::unit(spec.num_gens()), c);
        }
        NCElement { spec: spec.clone(), terms }
    }

    pub fn generator(spec: &Arc<AlgebraSpec>, name: &str) -> Result<NCElement, NcError> {
        let idx = spec.gen_index(name).ok_or_else(|| NcError::UnknownGenerator(name.into()))?;
        Ok(NCElement::gen_pow(spec, idx, 1))
    }

    pub fn gen_pow(spec: &Arc<AlgebraSpec>, idx: usize, e: i32) -> NCElement {
        let mut terms = TermMap::new();
        terms.insert(Expo::of_gen(spec.num_gens(), idx, e), Scalar::one());
        NCElement { spec: spec.clone(), terms }
    }

    pub fn from_terms(spec: &Arc<AlgebraSpec>, terms: TermMap) -> NCElement {
        NCElement { spec: spec.clone(), terms }
    }

    pub fn parse(spec: &Arc<AlgebraSpec>, text: &str) -> Result<NCElement, NcError> {
        parse::parse_element(spec, text)
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient_of(&self, expo: &Expo) -> Scalar {
        self.terms.get(expo).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.total_degree()).max().unwrap_or(0)
    }

    fn check_same_spec(&self, rhs: &NCElement) -> Result<(), NcError> {
        if Arc::ptr_eq(&self.spec, &rhs.spec) {
            Ok(())
        } else {
            Err(NcError::SpecMismatch {
                left: self.spec.name.clone(),
                right: rhs.spec.name.clone(),
            })
        }
    }

    pub fn add(&self, rhs: &NCElement) -> Result<NCElement, NcError> {
        self.check_same_spec(rhs)?;
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            add_term(&mut terms, e.clone(), c.clone());
        }
        Ok(NCElement { spec: self.spec.clone(), terms })
    }

    pub fn sub(&self, rhs: &NCElement) -> Result<NCElement, NcError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> NCElement {
        NCElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> NCElement {
        let mut terms = TermMap::new();
        for (e, k) in &self.terms {
            add_term(&mut terms, e.clone(), k.mul_ref(c));
        }
        NCElement { spec: self.spec.clone(), terms }
    }

    pub fn mul(&self, rhs: &NCElement) -> Result<NCElement, NcError> {
        self.mul_with(rhs, SwapOrder::Leftmost)
    }

    pub fn mul_with(&self, rhs: &NCElement, order: SwapOrder) -> Result<NCElement, NcError> {
        self.mul_with_budget(rhs, order, DEFAULT_SWAP_BUDGET)
    }

    pub fn mul_with_budget(
        &self,
        rhs: &NCElement,
        order: SwapOrder,
        budget: u64,
    ) -> Result<NCElement, NcError> {
        self.check_same_spec(rhs)?;
        let mut out = TermMap::new();
        let initial_budget = budget;
        let mut budget = budget;
        let mut picker = SwapPicker::new(order);
        for (e1, c1) in &self.terms {
            let w1 = self.spec.units_of(e1);
            for (e2, c2) in &rhs.terms {
                let mut word = w1.clone();
                word.extend(self.spec.units_of(e2));
                straighten(
                    &self.spec,
                    c1.mul_ref(c2),
                    word,
                    &mut picker,
                    &mut budget,
                    initial_budget,
                    &mut out,
                )?;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(NCElement { spec: self.spec.clone(), terms: out })
    }

    pub fn commutator(&self, rhs: &NCElement) -> Result<NCElement, NcError> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    pub fn pow(&self, k: u32) -> Result<NCElement, NcError> {
        let mut out = NCElement::one(&self.spec);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn map_scalars<F>(&self, mut f: F) -> Result<NCElement, NcError>
    where
        F: FnMut(&Scalar) -> Result<Scalar, ScalarError>,
    {
        let mut terms = TermMap::new();
        for (e, c) in &self.terms {
            let v = f(c)?;
            add_term(&mut terms, e.clone(), v);
        }
        Ok(NCElement { spec: self.spec.clone(), terms })
    }

    pub fn alpha_truncate(&self, order: u32) -> NCElement {
        self.map_scalars(|c| Ok(c.alpha_truncate(order))).unwrap()
    }

    /// Drop terms whose coefficient degree in `sym` exceeds `order`, without
    /// setting a sticky truncation flag.
    pub fn truncate_degree(&self, sym: SymbolId, order: i32) -> NCElement {
        let mut terms = TermMap::new();
        for (e, c) in &self.terms {
            let mut kept = Scalar::zero();
            for (m, k) in c.terms() {
                if m.exponent_of(sym) <= order {
                    kept = kept.add_ref(&Scalar::term(k.clone(), m.clone()));
                }
            }
            add_term(&mut terms, e.clone(), kept.with_truncation(c.truncation_order()));
        }
        NCElement { spec: self.spec.clone(), terms }
    }

    /// Most negative degree of `sym` across all coefficients (0 when absent).
    pub fn min_scalar_degree(&self, sym: SymbolId) -> i32 {
        self.terms
            .values()
            .filter_map(|c| c.degree_range(sym).map(|(lo, _)| lo))
            .min()
            .unwrap_or(0)
    }

    pub fn has_negative_scalar_degree(&self, sym: SymbolId) -> bool {
        self.min_scalar_degree(sym) < 0
    }
}

impl fmt::Display for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (expo, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let gens: Vec<String> = expo
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(idx, &e)| {
                    let name = &self.spec.gens[idx].name;
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff = if c.is_one() && !gens.is_empty() {
                String::new()
            } else if c.num_terms() > 1 {
                format!("({c})")
            } else {
                format!("{c}")
            };
            match (coeff.is_empty(), gens.is_empty()) {
                (true, _) => write!(f, "{}", gens.join("*"))?,
                (false, true) => write!(f, "{coeff}")?,
                (false, false) => write!(f, "{coeff}*{}", gens.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A multiplicative map into a (possibly different) algebra: an image for
/// every generator, plus inverse images where negative powers occur.
pub struct Substitution {
    target: Arc<AlgebraSpec>,
    images: Vec<Option<(NCElement, Option<NCElement>)>>,
}

impl Substitution {
    pub fn new(source: &Arc<AlgebraSpec>, target: &Arc<AlgebraSpec>) -> Substitution {
        Substitution { target: target.clone(), images: vec![None; source.num_gens()] }
    }

    pub fn target(&self) -> &Arc<AlgebraSpec> {
        &self.target
    }

    pub fn set(mut self, gen: usize, image: NCElement) -> Substitution {
        self.images[gen] = Some((image, None));
        self
    }

    pub fn set_with_inverse(mut self, gen: usize, image: NCElement, inv: NCElement) -> Substitution {
        self.images[gen] = Some((image, Some(inv)));
        self
    }

    pub fn image_of(&self, gen: usize) -> Option<&NCElement> {
        self.images[gen].as_ref().map(|(img, _)| img)
    }

    pub fn apply(&self, x: &NCElement) -> Result<NCElement, NcError> {
        let mut out = NCElement::zero(&self.target);
        for (expo, c) in &x.terms {
            let mut term = NCElement::scalar(&self.target, c.clone());
            for (idx, &e) in expo.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (img, inv) = self.images[idx].as_ref().ok_or_else(|| {
                    NcError::MissingImage { gen: x.spec.gens[idx].name.clone() }
                })?;
                let factor = if e > 0 {
                    img.pow(e as u32)?
                } else {
                    let invimg = inv.as_ref().ok_or_else(|| NcError::MissingImage {
                        gen: format!("{}^-1", x.spec.gens[idx].name),
                    })?;
                    invimg.pow((-e) as u32)?
                };
                term = term.mul(&factor)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl NCElement {
    /// Replace every exponential generator whose rate carries a positive
    /// degree in `grade` by its power series up to `order` in that symbol
    /// (plus an automatic margin compensating negative coefficient degrees).
    /// Non-exponential generators and exponentials graded zero map to their
    /// same-named generators in `target`.
    pub fn expand_exponentials(
        &self,
        target: &Arc<AlgebraSpec>,
        grade: SymbolId,
        order: i32,
    ) -> Result<NCElement, NcError> {
        let margin = (-self.min_scalar_degree(grade)).max(0);
        // inverse powers of expanded exponentials raise the needed series
        // order as well
        let max_expo: i32 = self
            .terms
            .keys()
            .flat_map(|e| e.0.iter().copied())
            .map(|e| e.abs())
            .max()
            .unwrap_or(1)
            .max(1);
        let series_order = (order + margin) * max_expo + 1;
        let mut occurs = vec![false; self.spec.num_gens()];
        for expo in self.terms.keys() {
            for (idx, &e) in expo.0.iter().enumerate() {
                occurs[idx] |= e != 0;
            }
        }
        let mut subst = Substitution::new(&self.spec, target);
        for (idx, g) in self.spec.gens.iter().enumerate() {
            if !occurs[idx] {
                continue;
            }
            let target_idx = |name: &str| {
                target.gen_index(name).ok_or_else(|| NcError::UnknownGenerator(name.to_string()))
            };
            match &g.exp {
                Some(exp)
                    if exp
                        .rate
                        .degree_range(grade)
                        .map(|(lo, _)| lo > 0)
                        .unwrap_or(false) =>
                {
                    let base_name = &self.spec.gens[exp.base].name;
                    let b = NCElement::gen_pow(target, target_idx(base_name)?, 1);
                    let series = exp_series(&b, &exp.rate, series_order as u32)?;
                    let inv_series =
                        exp_series(&b, &exp.rate.neg_ref(), series_order as u32)?;
                    subst = subst.set_with_inverse(idx, series, inv_series);
                }
                _ => {
                    let ti = target_idx(&g.name)?;
                    let img = NCElement::gen_pow(target, ti, 1);
                    if target.is_invertible(ti) {
                        let inv = NCElement::gen_pow(target, ti, -1);
                        subst = subst.set_with_inverse(idx, img, inv);
                    } else {
                        subst = subst.set(idx, img);
                    }
                }
            }
        }
        let expanded = subst.apply(self)?;
        Ok(expanded.truncate_degree(grade, order))
    }
}

/// Truncated power series of exp(rate * base): sum of rate^n base^n / n!.
pub fn exp_series(base: &NCElement, rate: &Scalar, order: u32) -> Result<NCElement, NcError> {
    let mut out = NCElement::one(base.spec());
    let mut power = NCElement::one(base.spec());
    let mut factorial = Scalar::one();
    for n in 1..=order {
        power = power.mul(base)?;
        factorial = factorial.mul_ref(&Scalar::from_int(n as i64));
        let coeff = rate.pow(n as i32)?.div_monomial(&factorial)?;
        out = out.add(&power.scale(&coeff))?;
    }
    Ok(out)
}

#[derive(Debug)]
pub struct JacobiViolation {
    pub triple: (String, String, String),
    pub residual: NCElement,
}

/// Soundness gate for a commutator table. Checks the Jacobi identity
/// [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 on every generator triple, and for
/// every exponential generator X = exp(c*b) the derivation rule
/// [g, X] = c * X * [g, b] (valid whenever [g, b] commutes with b and X,
/// which is verified first), together with [b, X] = 0.
pub fn jacobi_verify(spec: &Arc<AlgebraSpec>) -> Result<Vec<JacobiViolation>, NcError> {
    let n = spec.num_gens();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let x = NCElement::gen_pow(spec, i, 1);
                let y = NCElement::gen_pow(spec, j, 1);
                let z = NCElement::gen_pow(spec, k, 1);
                let s = x
                    .commutator(&y)?
                    .commutator(&z)?
                    .add(&y.commutator(&z)?.commutator(&x)?)?
                    .add(&z.commutator(&x)?.commutator(&y)?)?;
                if !s.is_zero() {
                    violations.push(JacobiViolation {
                        triple: (
                            spec.gens[i].name.clone(),
                            spec.gens[j].name.clone(),
                            spec.gens[k].name.clone(),
                        ),
                        residual: s,
                    });
                }
            }
        }
    }
    for (xi, xg) in spec.gens.iter().enumerate() {
        let Some(exp) = &xg.exp else { continue };
        let x = NCElement::gen_pow(spec, xi, 1);
        let b = NCElement::gen_pow(spec, exp.base, 1);
        let bx = b.commutator(&x)?;
        if !bx.is_zero() {
            violations.push(JacobiViolation {
                triple: (
                    spec.gens[exp.base].name.clone(),
                    xg.name.clone(),
                    String::new(),
                ),
                residual: bx,
            });
        }
        for (gi, gg) in spec.gens.iter().enumerate() {
            if gi == xi || gi == exp.base {
                continue;
            }
            let g = NCElement::gen_pow(spec, gi, 1);
            let gb = g.commutator(&b)?;
            // only checkable when [g, b] commutes with both b and X
            if !gb.commutator(&b)?.is_zero() || !gb.commutator(&x)?.is_zero() {
                continue;
            }
            let residual = g.commutator(&x)?.sub(&x.mul(&gb)?.scale(&exp.rate))?;
            if !residual.is_zero() {
                violations.push(JacobiViolation {
                    triple: (gg.name.clone(), spec.gens[exp.base].name.clone(), xg.name.clone()),
                    residual,
                });
            }
        }
    }
    Ok(violations)
}

/// Rebuild a spec with rescaled generators and substituted scalar symbols.
///
/// Each generator `g` is rescaled to `g' = scale(g) * g`; the commutator
/// table transforms as [g_i', g_j'] = s_i s_j [g_i, g_j] with old generators
/// rewritten through g = g'/s. Exponential rates transform accordingly.
/// Scales must be invertible scalar monomials.
pub fn transform_spec(
    spec: &Arc<AlgebraSpec>,
    new_name: &str,
    rename: &dyn Fn(&str) -> String,
    subst: &[(SymbolId, Scalar)],
    scale: &dyn Fn(&Generator) -> Scalar,
) -> Result<Arc<AlgebraSpec>, NcError> {
    let apply_subst = |s: &Scalar| -> Result<Scalar, NcError> {
        let mut out = s.clone();
        for (sym, val) in subst {
            out = out.substitute(*sym, val)?;
        }
        Ok(out)
    };
    let scales: Vec<Scalar> = spec.gens.iter().map(scale).collect();
    let mut gens = Vec::with_capacity(spec.gens.len());
    for (g, s) in spec.gens.iter().zip(&scales) {
        let sdim = s.dimension()?.unwrap_or(Dimension::NONE);
        let exp = match &g.exp {
            None => None,
            Some(e) => {
                let new_rate = apply_subst(&e.rate)?.div_monomial(&scales[e.base])?;
                Some(ExpGen { base: e.base, rate: new_rate })
            }
        };
        gens.push(Generator {
            name: rename(&g.name),
            dimension: g.dimension + sdim,
            exp,
        });
    }
    let mut comm = BTreeMap::new();
    for (&(i, j), table) in &spec.comm {
        let front = scales[i].mul_ref(&scales[j]);
        let mut new_table = TermMap::new();
        for (expo, c) in table {
            let mut coeff = apply_subst(c)?.mul_ref(&front);
            for (idx, &e) in expo.0.iter().enumerate() {
                if e != 0 {
                    coeff = coeff.mul_ref(&scales[idx].pow(-e)?);
                }
            }
            add_term(&mut new_table, expo.clone(), coeff);
        }
        if !new_table.is_empty() {
            comm.insert((i, j), new_table);
        }
    }
    Ok(Arc::new(AlgebraSpec { name: new_name.to_string(), gens, comm }))
}

#[cfg(test)]
mod tests;
