//! Exact linear algebra over the fraction field of the scalar ring, used to
//! decompose elements over a basis and to drive Lie-algebra closure.

use super::{NCElement, NcError};
use crate::scalar::Scalar;
use std::fmt;

/// A ratio of scalars. Kept reduced when the denominator divides the
/// numerator (in particular whenever the denominator is a monomial).
#[derive(Clone, Debug)]
pub struct RingFraction {
    pub num: Scalar,
    pub den: Scalar,
}

impl RingFraction {
    pub fn from_scalar(s: Scalar) -> RingFraction {
        RingFraction { num: s, den: Scalar::one() }
    }

    pub fn zero() -> RingFraction {
        RingFraction::from_scalar(Scalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduced(mut self) -> RingFraction {
        if self.num.is_zero() {
            self.den = Scalar::one();
            return self;
        }
        if self.den.is_one() {
            return self;
        }
        if self.den.is_monomial() {
            self.num = self.num.div_monomial(&self.den).expect("monomial division");
            self.den = Scalar::one();
            return self;
        }
        if let Some(q) = self.num.exact_div(&self.den) {
            return RingFraction { num: q, den: Scalar::one() };
        }
        self
    }

    pub fn add(&self, rhs: &RingFraction) -> RingFraction {
        RingFraction {
            num: self.num.mul_ref(&rhs.den).add_ref(&rhs.num.mul_ref(&self.den)),
            den: self.den.mul_ref(&rhs.den),
        }
        .reduced()
    }

    pub fn sub(&self, rhs: &RingFraction) -> RingFraction {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RingFraction {
        RingFraction { num: self.num.neg_ref(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &RingFraction) -> RingFraction {
        RingFraction { num: self.num.mul_ref(&rhs.num), den: self.den.mul_ref(&rhs.den) }.reduced()
    }

    pub fn div(&self, rhs: &RingFraction) -> RingFraction {
        assert!(!rhs.is_zero(), "division by zero fraction");
        RingFraction { num: self.num.mul_ref(&rhs.den), den: self.den.mul_ref(&rhs.num) }.reduced()
    }

    pub fn eq_scalar(&self, s: &Scalar) -> bool {
        self.num == s.mul_ref(&self.den)
    }

    /// The fraction as a plain scalar, when the denominator divides out.
    pub fn to_scalar(&self) -> Option<Scalar> {
        let r = self.clone().reduced();
        if r.den.is_one() {
            Some(r.num)
        } else {
            None
        }
    }

    fn complexity(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }
}

impl fmt::Display for RingFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[derive(Debug)]
pub enum SpanOutcome {
    /// One coefficient vector per target, aligned with the basis.
    Solved(Vec<Vec<RingFraction>>),
    NotInSpan { target_index: usize, residual: NCElement },
}

/// Express each target exactly as a linear combination of the basis, with
/// coefficients in the fraction field of the scalar ring. Gaussian
/// elimination, pivoting on entries of smallest support.
pub fn span_solve(targets: &[NCElement], basis: &[NCElement]) -> Result<SpanOutcome, NcError> {
    assert!(!basis.is_empty(), "empty basis");
    let spec = basis[0].spec().clone();
    for b in basis.iter().chain(targets) {
        if !std::sync::Arc::ptr_eq(b.spec(), &spec) {
            return Err(NcError::SpecMismatch {
                left: spec.name().to_string(),
                right: b.spec().name().to_string(),
            });
        }
    }
    // rows: every monomial occurring anywhere; columns: basis elements
    let mut monomials = std::collections::BTreeSet::new();
    for e in basis.iter().chain(targets) {
        for (expo, _) in e.terms() {
            monomials.insert(expo.clone());
        }
    }
    let monomials: Vec<_> = monomials.into_iter().collect();
    let nrows = monomials.len();
    let ncols = basis.len();
    let mut mat: Vec<Vec<RingFraction>> = (0..nrows)
        .map(|r| {
            (0..ncols)
                .map(|c| RingFraction::from_scalar(basis[c].coefficient_of(&monomials[r])))
                .collect()
        })
        .collect();
    let mut rhs: Vec<Vec<RingFraction>> = (0..nrows)
        .map(|r| {
            targets
                .iter()
                .map(|t| RingFraction::from_scalar(t.coefficient_of(&monomials[r])))
                .collect()
        })
        .collect();

    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut used_rows = vec![false; nrows];
    for col in 0..ncols {
        let pivot = (0..nrows)
            .filter(|&r| !used_rows[r] && !mat[r][col].is_zero())
            .min_by_key(|&r| mat[r][col].complexity());
        let Some(p) = pivot else {
            // the column may still be reachable through earlier pivots; a
            // truly dependent basis shows up as an unusable column
            return Err(NcError::DependentBasis { index: col });
        };
        used_rows[p] = true;
        pivot_row_of_col[col] = Some(p);
        let pv = mat[p][col].clone();
        for r in 0..nrows {
            if r == p || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].div(&pv);
            for c2 in 0..ncols {
                let delta = factor.mul(&mat[p][c2]);
                mat[r][c2] = mat[r][c2].sub(&delta);
            }
            for t in 0..targets.len() {
                let delta = factor.mul(&rhs[p][t]);
                rhs[r][t] = rhs[r][t].sub(&delta);
            }
        }
    }

    let mut solutions = Vec::with_capacity(targets.len());
    for (t, target) in targets.iter().enumerate() {
        // rows without pivots must have empty right-hand side
        let coeffs: Vec<RingFraction> = (0..ncols)
            .map(|col| {
                let p = pivot_row_of_col[col].unwrap();
                rhs[p][t].div(&mat[p][col])
            })
            .collect();
        // exact reconstruction check, clearing denominators
        let mut residual = target.clone();
        for (c, b) in coeffs.iter().zip(basis) {
            if let Some(s) = c.to_scalar() {
                residual = residual.sub(&b.scale(&s))?;
            } else {
                // denominator did not reduce: clear it through the residual
                let scaled = b.scale(&c.num).map_scalars(|s| {
                    s.exact_div(&c.den)
                        .ok_or_else(|| crate::scalar::ScalarError::DivisionByNonMonomial(
                            c.den.to_string(),
                        ))
                })?;
                residual = residual.sub(&scaled)?;
            }
        }
        if !residual.is_zero() {
            return Ok(SpanOutcome::NotInSpan { target_index: t, residual });
        }
        solutions.push(coeffs);
    }
    Ok(SpanOutcome::Solved(solutions))
}
