//! The two-particle side of the correspondence: the seven-element dynamical
//! algebra of conditional translations and boosts, the deformed group
//! exponents realized on both phase spaces, their first-order reduction
//! under the ansatz alpha = 1/(m_A phi), the linear-combination identities,
//! Lie-algebra closure of the reduced exponents, the adjoint-action tables,
//! and the classical-frame limit.
//!
//! Conventions: in the plain two-particle spec the generator `p_A` plays two
//! roles. The dynamical basis reads it as the renormalized momentum
//! conjugate to q_A; first-order reductions read it as the natural momentum,
//! with the renormalized one expanded as m_A phi + p_A. Both satisfy the
//! same commutation relation with q_A, so one spec hosts both conventions.

use crate::ncalg::{span_solve, AlgebraSpec, NCElement, NcError, SpanOutcome};
use crate::report::Report;
use crate::scalar::{alpha, symbol, Scalar, ScalarError};
use crate::specs;
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
pub enum QrfError {
    /// A first-order reduction left negative alpha-degrees behind, meaning
    /// inverse frame-mass factors were not absorbed by the ansatz.
    Ansatz { detail: String },
    /// Lie closure exceeded the dimension cap.
    ClosureDiverged { dimension: usize, cap: usize },
    /// The adjoint series failed to terminate within the iteration budget.
    AdjointBudget { iterations: usize },
    Nc(NcError),
    Scalar(ScalarError),
}

impl fmt::Display for QrfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QrfError::Ansatz { detail } => write!(f, "ansatz violation: {detail}"),
            QrfError::ClosureDiverged { dimension, cap } => {
                write!(f, "closure reached dimension {dimension}, cap {cap}")
            }
            QrfError::AdjointBudget { iterations } => {
                write!(f, "adjoint series not closed after {iterations} iterations")
            }
            QrfError::Nc(e) => write!(f, "{e}"),
            QrfError::Scalar(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for QrfError {}

impl From<NcError> for QrfError {
    fn from(e: NcError) -> Self {
        QrfError::Nc(e)
    }
}

impl From<ScalarError> for QrfError {
    fn from(e: ScalarError) -> Self {
        QrfError::Scalar(e)
    }
}

fn el(spec: &Arc<AlgebraSpec>, t: &str) -> NCElement {
    NCElement::parse(spec, t).unwrap_or_else(|e| panic!("bad builtin element `{t}`: {e}"))
}

/// The seven generators of the dynamical algebra on the plain two-particle
/// spec, with p_A read as the renormalized momentum.
pub struct DynamicalBasis {
    pub p_ab: NCElement,
    pub k_ab: NCElement,
    pub q_a: NCElement,
    pub q_b: NCElement,
    pub d_a: NCElement,
    pub d_b: NCElement,
    pub t_op: NCElement,
}

impl DynamicalBasis {
    pub fn new() -> DynamicalBasis {
        let spec = specs::two_particle_plain();
        DynamicalBasis {
            p_ab: el(&spec, "q_A*p_B"),
            k_ab: el(&spec, "m_A^-1*p_A*(t*p_B - m_B*q_B)"),
            q_a: el(&spec, "1/2*m_A^-1*p_A^2"),
            q_b: el(&spec, "1/2*m_B^-1*p_B^2"),
            d_a: el(&spec, "1/2*(q_A*p_A + p_A*q_A)"),
            d_b: el(&spec, "1/2*(q_B*p_B + p_B*q_B)"),
            t_op: el(&spec, "p_A*p_B"),
        }
    }

    pub fn all(&self) -> [&NCElement; 7] {
        [&self.p_ab, &self.k_ab, &self.q_a, &self.q_b, &self.d_a, &self.d_b, &self.t_op]
    }

    pub fn names() -> [&'static str; 7] {
        ["P_AB", "K_AB", "Q_A", "Q_B", "D_A", "D_B", "T"]
    }

    /// The same seven elements with the renormalized momentum expanded
    /// through the ansatz: p_A -> alpha^-1 + p_A, 1/m_A -> alpha phi.
    pub fn reduced() -> Result<DynamicalBasis, QrfError> {
        let basis = DynamicalBasis::new();
        let spec = specs::two_particle_plain();
        let p_idx = spec.gen_index("p_A").unwrap();
        let p_prime = el(&spec, "alpha^-1 + p_A");
        let mut subst = crate::ncalg::Substitution::new(&spec, &spec);
        for (idx, g) in spec.generators().iter().enumerate() {
            if idx == p_idx {
                subst = subst.set(idx, p_prime.clone());
            } else {
                subst = subst.set(idx, NCElement::gen_pow(&spec, spec.gen_index(&g.name).unwrap(), 1));
            }
        }
        let m_a_inv = Scalar::parse("alpha^-1*phi^-1")?;
        let reduce = |x: &NCElement| -> Result<NCElement, QrfError> {
            Ok(subst.apply(x)?.map_scalars(|s| s.substitute(symbol("m_A"), &m_a_inv))?)
        };
        Ok(DynamicalBasis {
            p_ab: reduce(&basis.p_ab)?,
            k_ab: reduce(&basis.k_ab)?,
            q_a: reduce(&basis.q_a)?,
            q_b: reduce(&basis.q_b)?,
            d_a: reduce(&basis.d_a)?,
            d_b: reduce(&basis.d_b)?,
            t_op: reduce(&basis.t_op)?,
        })
    }
}

impl Default for DynamicalBasis {
    fn default() -> Self {
        DynamicalBasis::new()
    }
}

/// The 21 commutators of the dynamical algebra: for each generator pair,
/// the expected combination as (coefficient, basis index) pairs. Indices
/// into [`DynamicalBasis::all`]: P_AB K_AB Q_A Q_B D_A D_B T.
#[rustfmt::skip]
fn dynamical_table() -> Vec<(usize, usize, Vec<(&'static str, usize)>)> {
    vec![
        (0, 1, vec![("i*hbar*m_B*m_A^-1", 4), ("-i*kappa*m_B*m_A^-1", 5),
                    ("2*i*kappa*m_B*m_A^-1*t", 3)]),
        (0, 2, vec![("i*kappa*m_A^-1", 6)]),
        (0, 3, vec![]),
        (0, 4, vec![("i*kappa", 0)]),
        (0, 5, vec![("-i*hbar", 0)]),
        (0, 6, vec![("2*i*kappa*m_B", 3)]),
        (1, 2, vec![]),
        (1, 3, vec![("-i*hbar*m_A^-1", 6)]),
        (1, 4, vec![("-i*kappa", 1)]),
        (1, 5, vec![("i*hbar", 1), ("-2*i*hbar*m_A^-1*t", 6)]),
        (1, 6, vec![("-2*i*hbar*m_B", 2)]),
        // kinetic terms carry dilation weight -2: [Q, D] = -2i Q; the
        // opposite sign would break Jacobi on (P_AB, Q_A, D_A)
        (2, 3, vec![]),
        (2, 4, vec![("-2*i*kappa", 2)]),
        (2, 5, vec![]),
        (2, 6, vec![]),
        (3, 4, vec![]),
        (3, 5, vec![("-2*i*hbar", 3)]),
        (3, 6, vec![]),
        (4, 5, vec![]),
        (4, 6, vec![("i*kappa", 6)]),
        (5, 6, vec![("i*hbar", 6)]),
    ]
}

/// All 21 displayed commutators, symbolically in kappa, hbar, m_A, m_B, t.
pub fn dynamical_table_verify() -> Result<Vec<(String, String, NCElement)>, QrfError> {
    let spec = specs::two_particle_plain();
    let basis = DynamicalBasis::new();
    let elements = basis.all();
    let names = DynamicalBasis::names();
    let mut mismatches = Vec::new();
    for (i, j, rhs) in dynamical_table() {
        let got = elements[i].commutator(elements[j])?;
        let mut want = NCElement::zero(&spec);
        for (coeff, which) in rhs {
            want = want.add(&elements[which].scale(&Scalar::parse(coeff)?))?;
        }
        let diff = got.sub(&want)?;
        if !diff.is_zero() {
            mismatches.push((names[i].to_string(), names[j].to_string(), diff));
        }
    }
    Ok(mismatches)
}

/// Jacobi identity over all 35 triples of the concrete basis.
pub fn dynamical_jacobi_verify() -> Result<Vec<(usize, usize, usize)>, QrfError> {
    let basis = DynamicalBasis::new();
    let e = basis.all();
    let mut violations = Vec::new();
    for i in 0..7 {
        for j in (i + 1)..7 {
            for k in (j + 1)..7 {
                let s = e[i]
                    .commutator(e[j])?
                    .commutator(e[k])?
                    .add(&e[j].commutator(e[k])?.commutator(e[i])?)?
                    .add(&e[k].commutator(e[i])?.commutator(e[j])?)?;
                if !s.is_zero() {
                    violations.push((i, j, k));
                }
            }
        }
    }
    Ok(violations)
}

// ---------------------------------------------------------------------------
// group exponents and first-order reduction

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExponentMode {
    Exact,
    FirstOrder,
}

/// The four operators sitting in the exponentials of the group element,
/// realized on both phase spaces. Order: [M-, P0-, P1-, K-exponent].
pub fn build_exponent_ops(mode: ExponentMode) -> Result<[NCElement; 4], QrfError> {
    let spec = specs::two_particle();
    let m_ex = el(&spec, "1/4*phi*(E_A*q_A + q_A*E_A) * m_B*H_B^-2");
    let p0_ex = el(
        &spec,
        "delta*(2*hbar^2*m_B^-1*kappa^-2*alpha^-2*(H_B^2 + H_B^-2 - 2) + xi)",
    );
    let p1_ex = el(&spec, "(q_A + gamma)*p_B");
    let k_ex = el(&spec, "phi*E_A*(t*p_B - 1/2*m_B*(H_B^2*q_B + q_B*H_B^2))");
    let exact = [m_ex, p0_ex, p1_ex, k_ex];
    match mode {
        ExponentMode::Exact => Ok(exact),
        ExponentMode::FirstOrder => {
            let plain = specs::two_particle_plain();
            let mut out = Vec::with_capacity(4);
            for x in &exact {
                out.push(first_order_reduce(x, &plain)?);
            }
            Ok(out.try_into().ok().unwrap())
        }
    }
}

/// Expand exponentials to first order, absorb the frame mass through
/// 1/m_A = alpha phi, and truncate at alpha^1. A surviving negative
/// alpha-degree signals mis-grouped inverse-mass factors.
pub fn first_order_reduce(
    x: &NCElement,
    plain: &Arc<AlgebraSpec>,
) -> Result<NCElement, QrfError> {
    let truncated = reduce_value(x, plain)?;
    if truncated.has_negative_scalar_degree(alpha()) {
        return Err(QrfError::Ansatz { detail: format!("negative alpha degree in {truncated}") });
    }
    Ok(truncated)
}

/// The same reduction without the grading check; used for phase-space
/// values like the renormalized momentum, whose constant part legitimately
/// reduces to 1/alpha.
pub fn reduce_value(x: &NCElement, plain: &Arc<AlgebraSpec>) -> Result<NCElement, QrfError> {
    let expanded = x.expand_exponentials(plain, alpha(), 1)?;
    let m_a_inv = Scalar::parse("alpha^-1*phi^-1")?;
    let substituted = expanded.map_scalars(|s| s.substitute(symbol("m_A"), &m_a_inv))?;
    Ok(substituted.alpha_truncate(1))
}

/// First-order exponents with the realization labels gamma and xi set to
/// zero, the seeds of the Lie closure.
pub fn first_order_seeds() -> Result<[NCElement; 4], QrfError> {
    let ops = build_exponent_ops(ExponentMode::FirstOrder)?;
    let mut out = Vec::with_capacity(4);
    for x in ops {
        let cleaned = x
            .map_scalars(|s| s.substitute_zero(symbol("gamma")))?
            .map_scalars(|s| s.substitute_zero(symbol("xi")))?
            .map_scalars(|s| Ok(s.clone().untruncated()));
        out.push(cleaned?);
    }
    Ok(out.try_into().ok().unwrap())
}

/// The displayed first-order forms in terms of the renormalized momentum
/// (written pre-ansatz as m_A phi + p_A), reduced through the same pipeline.
pub fn displayed_first_order_forms() -> Result<[NCElement; 4], QrfError> {
    let plain = specs::two_particle_plain();
    let pp = "(m_A*phi + p_A)";
    let m_text = format!(
        "-1/4*kappa*hbar^-1*m_B*m_A^-1*q_A*p_B + 1/4*m_B*m_A^-1*({pp}*q_A + q_A*{pp})"
    );
    let p0_text = "delta*(1/2*m_B^-1*p_B^2 + xi)".to_string();
    let p1_text = "(q_A + gamma)*p_B".to_string();
    let k_text = format!(
        "m_A^-1*{pp}*(t*p_B - m_B*q_B) - 1/4*kappa*hbar^-1*m_B*m_A^-1*(p_B*q_B + q_B*p_B)"
    );
    let mut out = Vec::with_capacity(4);
    for text in [m_text, p0_text, p1_text, k_text] {
        out.push(first_order_reduce(&el(&plain, &text), &plain)?);
    }
    Ok(out.try_into().ok().unwrap())
}

// ---------------------------------------------------------------------------
// linear-combination identities and closure

pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The four decompositions of the first-order exponents over the dynamical
/// basis, verified by exact span solving, with the expected coefficients
/// stated in frame-mass form and compared after the ansatz substitution.
pub fn identity_checks() -> Result<Vec<IdentityCheck>, QrfError> {
    let basis = DynamicalBasis::reduced()?;
    let ops = build_exponent_ops(ExponentMode::FirstOrder)?;
    let strip =
        |x: &NCElement| x.map_scalars(|s| Ok(s.clone().untruncated())).map_err(QrfError::Nc);
    let m_a_inv = Scalar::parse("alpha^-1*phi^-1")?;
    let expect = |text: &str| -> Result<Scalar, QrfError> {
        Ok(Scalar::parse(text)?.substitute(symbol("m_A"), &m_a_inv)?)
    };
    let mut out = Vec::new();

    // M-exponent over {P_AB, D_A}
    {
        let target = strip(&ops[0])?;
        let solution = span_solve(&[target], &[basis.p_ab.clone(), basis.d_a.clone()])?;
        let (passed, detail) = match solution {
            SpanOutcome::Solved(coeffs) => {
                let want0 = expect("-1/4*kappa*hbar^-1*m_B*m_A^-1")?;
                let want1 = expect("1/2*m_B*m_A^-1")?;
                if coeffs[0][0].eq_scalar(&want0) && coeffs[0][1].eq_scalar(&want1) {
                    (true, format!("coefficients ({}, {})", coeffs[0][0], coeffs[0][1]))
                } else {
                    (false, format!("got ({}, {})", coeffs[0][0], coeffs[0][1]))
                }
            }
            SpanOutcome::NotInSpan { residual, .. } => (false, format!("residual {residual}")),
        };
        out.push(IdentityCheck { name: "mass-exponent-decomposition", passed, detail });
    }

    // K-exponent over {K_AB, D_B}
    {
        let target = strip(&ops[3])?;
        let solution = span_solve(&[target], &[basis.k_ab.clone(), basis.d_b.clone()])?;
        let (passed, detail) = match solution {
            SpanOutcome::Solved(coeffs) => {
                let want1 = expect("-1/2*kappa*hbar^-1*m_B*m_A^-1")?;
                if coeffs[0][0].eq_scalar(&Scalar::one()) && coeffs[0][1].eq_scalar(&want1) {
                    (true, format!("coefficients ({}, {})", coeffs[0][0], coeffs[0][1]))
                } else {
                    (false, format!("got ({}, {})", coeffs[0][0], coeffs[0][1]))
                }
            }
            SpanOutcome::NotInSpan { residual, .. } => (false, format!("residual {residual}")),
        };
        out.push(IdentityCheck { name: "boost-exponent-decomposition", passed, detail });
    }

    // P0-exponent at xi = 0 equals delta Q_B
    {
        let target = strip(&ops[1])?.map_scalars(|s| s.substitute_zero(symbol("xi")))?;
        let solution = span_solve(&[target], &[basis.q_b.clone()])?;
        let (passed, detail) = match solution {
            SpanOutcome::Solved(coeffs) => {
                if coeffs[0][0].eq_scalar(&Scalar::sym("delta")) {
                    (true, format!("coefficient {}", coeffs[0][0]))
                } else {
                    (false, format!("got {}", coeffs[0][0]))
                }
            }
            SpanOutcome::NotInSpan { residual, .. } => (false, format!("residual {residual}")),
        };
        out.push(IdentityCheck { name: "time-exponent-decomposition", passed, detail });
    }

    // P1-exponent at gamma = 0 equals P_AB
    {
        let target = strip(&ops[2])?.map_scalars(|s| s.substitute_zero(symbol("gamma")))?;
        let diff = target.sub(&basis.p_ab)?;
        out.push(IdentityCheck {
            name: "translation-exponent-decomposition",
            passed: diff.is_zero(),
            detail: if diff.is_zero() { "equal".into() } else { format!("residual {diff}") },
        });
    }
    Ok(out)
}

pub struct ClosureResult {
    pub dimension: usize,
    pub basis: Vec<NCElement>,
    /// Exact coefficients of each closure basis element over the reduced
    /// dynamical basis.
    pub change_of_basis: Vec<Vec<crate::ncalg::RingFraction>>,
}

/// Iteratively close the seeds under commutators, testing span membership
/// exactly. Errors out beyond `cap` independent elements.
pub fn closure_generate(seeds: &[NCElement], cap: usize) -> Result<ClosureResult, QrfError> {
    let mut basis: Vec<NCElement> = Vec::new();
    for s in seeds {
        if s.is_zero() {
            continue;
        }
        if basis.is_empty() {
            basis.push(s.clone());
            continue;
        }
        if let SpanOutcome::NotInSpan { .. } = span_solve(&[s.clone()], &basis)? {
            basis.push(s.clone());
        }
    }
    let mut frontier_start = 0;
    loop {
        let len = basis.len();
        if len > cap {
            return Err(QrfError::ClosureDiverged { dimension: len, cap });
        }
        let mut added = false;
        for i in 0..len {
            for j in i.max(frontier_start)..len {
                if i == j {
                    continue;
                }
                let c = basis[i].commutator(&basis[j])?;
                if c.is_zero() {
                    continue;
                }
                if let SpanOutcome::NotInSpan { .. } = span_solve(&[c.clone()], &basis)? {
                    basis.push(c);
                    added = true;
                    if basis.len() > cap {
                        return Err(QrfError::ClosureDiverged { dimension: basis.len(), cap });
                    }
                }
            }
        }
        if !added {
            break;
        }
        frontier_start = len;
    }
    let reduced = DynamicalBasis::reduced()?;
    let dyn_basis: Vec<NCElement> = reduced.all().into_iter().cloned().collect();
    let mut change_of_basis = Vec::with_capacity(basis.len());
    for b in &basis {
        match span_solve(&[b.clone()], &dyn_basis)? {
            SpanOutcome::Solved(mut coeffs) => change_of_basis.push(coeffs.pop().unwrap()),
            SpanOutcome::NotInSpan { residual, .. } => {
                return Err(QrfError::Ansatz {
                    detail: format!("closure element outside the dynamical span: {residual}"),
                })
            }
        }
    }
    Ok(ClosureResult { dimension: basis.len(), basis, change_of_basis })
}

// ---------------------------------------------------------------------------
// adjoint actions

/// exp(X) Y exp(-X) = sum ad^n_X(Y)/n! with X = (i/hbar) * exponent,
/// accumulated in first-order arithmetic until the series terminates.
pub fn adjoint_transform(exponent: &NCElement, target: &NCElement) -> Result<NCElement, QrfError> {
    let x = exponent.scale(&Scalar::parse("i*hbar^-1").map_err(QrfError::Scalar)?).alpha_truncate(1);
    let mut out = target.alpha_truncate(1);
    let mut term = out.clone();
    let mut factorial = Scalar::one();
    for n in 1..=32u32 {
        term = x.commutator(&term)?.alpha_truncate(1);
        if term.is_zero() {
            return Ok(out);
        }
        factorial = factorial.mul_ref(&Scalar::from_int(n as i64));
        out = out.add(&term.map_scalars(|s| s.div_monomial(&factorial))?)?;
    }
    Err(QrfError::AdjointBudget { iterations: 32 })
}

/// The sixteen displayed transformation lines: each group exponential acting
/// on (q_A, p_A', q_B, p_B) at first order, plus the inverse round trips.
pub fn adjoint_table_verify() -> Result<Vec<(String, String, NCElement)>, QrfError> {
    let plain = specs::two_particle_plain();
    let ops = build_exponent_ops(ExponentMode::FirstOrder)?;
    let reduce = |t: &str| reduce_value(&el(&plain, t), &plain);
    let targets =
        [("q_A", "q_A"), ("p_A'", "m_A*phi + p_A"), ("q_B", "q_B"), ("p_B", "p_B")];
    let pp = "(m_A*phi + p_A)";
    // expected right-hand sides, per operator, in frame-mass form
    let table: [(&str, usize, [String; 4]); 4] = [
        (
            "mass",
            0,
            [
                format!("(1 + 1/2*kappa*hbar^-1*m_B*m_A^-1)*q_A"),
                format!(
                    "(1 - 1/2*kappa*hbar^-1*m_B*m_A^-1)*{pp} \
                     + 1/4*kappa^2*hbar^-2*m_B*m_A^-1*p_B \
                     + 1/8*phi*kappa^2*hbar^-2*m_B^2*m_A^-1"
                ),
                format!("q_B - 1/4*kappa*hbar^-1*m_B*m_A^-1*q_A"),
                "p_B".to_string(),
            ],
        ),
        (
            "time",
            1,
            [
                "q_A".to_string(),
                pp.to_string(),
                "q_B + delta*m_B^-1*p_B".to_string(),
                "p_B".to_string(),
            ],
        ),
        (
            "translation",
            2,
            [
                "q_A".to_string(),
                format!("{pp} - kappa*hbar^-1*p_B"),
                "q_A + q_B + gamma".to_string(),
                "p_B".to_string(),
            ],
        ),
        (
            "boost",
            3,
            [
                format!("q_A - kappa*hbar^-1*m_A^-1*(m_B*q_B - t*p_B)"),
                pp.to_string(),
                format!(
                    "(1 - 1/2*kappa*hbar^-1*m_B*m_A^-1)*q_B + m_A^-1*{pp}*t \
                     - 1/4*phi*kappa*hbar^-1*m_B*m_A^-1*t"
                ),
                format!(
                    "(1 + 1/2*kappa*hbar^-1*m_B*m_A^-1)*p_B + m_B*m_A^-1*{pp} \
                     + 1/4*phi*kappa*hbar^-1*m_B^2*m_A^-1"
                ),
            ],
        ),
    ];
    let mut mismatches = Vec::new();
    for (op_name, op_idx, expected) in table {
        for ((target_name, target_text), want_text) in targets.iter().zip(&expected) {
            let target = reduce(target_text)?;
            let got = adjoint_transform(&ops[op_idx], &target)?;
            let want = reduce(want_text)?;
            let diff = got.sub(&want)?.alpha_truncate(1);
            if !diff.is_zero() {
                mismatches.push((op_name.to_string(), target_name.to_string(), diff));
            }
        }
    }
    Ok(mismatches)
}

/// Applying an exponential and then its inverse returns each target to
/// itself at first order.
pub fn adjoint_round_trips() -> Result<Vec<(usize, String, NCElement)>, QrfError> {
    let plain = specs::two_particle_plain();
    let ops = build_exponent_ops(ExponentMode::FirstOrder)?;
    let reduce = |t: &str| reduce_value(&el(&plain, t), &plain);
    let targets = ["q_A", "m_A*phi + p_A", "q_B", "p_B"];
    let mut mismatches = Vec::new();
    for (op_idx, op) in ops.iter().enumerate() {
        for target_text in targets {
            let target = reduce(target_text)?;
            let forward = adjoint_transform(op, &target)?;
            let back = adjoint_transform(&op.neg(), &forward)?;
            let diff = back.sub(&target)?.alpha_truncate(1);
            if !diff.is_zero() {
                mismatches.push((op_idx, target_text.to_string(), diff));
            }
        }
    }
    Ok(mismatches)
}

// ---------------------------------------------------------------------------
// classical frame limit

/// kappa -> 0 of the exact exponents: the frame particle's phase space turns
/// into commuting classical functions (its exponential survives) while the
/// other particle stays quantum.
pub fn classical_frame_limit_ops() -> Result<[NCElement; 4], QrfError> {
    let hybrid = specs::classical_a_quantum_b();
    let kap = symbol("kappa");
    let exact = build_exponent_ops(ExponentMode::Exact)?;
    let mut out = Vec::with_capacity(4);
    for x in exact {
        let expanded = x.expand_exponentials(&hybrid, kap, 0)?;
        let limited = expanded.map_scalars(|s| s.substitute_zero(kap))?;
        out.push(limited);
    }
    Ok(out.try_into().ok().unwrap())
}

pub fn classical_frame_limit_checks(report: &mut Report) {
    report.check("d7", "classical-frame-limit-ops", || {
        let hybrid = specs::classical_a_quantum_b();
        let got = classical_frame_limit_ops()?;
        let expected = [
            el(&hybrid, "1/2*phi*q_A*E_A*m_B"),
            el(&hybrid, "delta*(1/2*m_B^-1*p_B^2 + xi)"),
            el(&hybrid, "(q_A + gamma)*p_B"),
            el(&hybrid, "phi*E_A*(t*p_B - m_B*q_B)"),
        ];
        for (i, (g, w)) in got.iter().zip(&expected).enumerate() {
            let diff = g.sub(w)?;
            if !diff.is_zero() {
                return Ok(Some(format!("exponent {i}: residual {diff}")));
            }
        }
        Ok(None)
    });

    report.check("d7", "classical-frame-limit-first-order", || {
        let plain = specs::classical_a_quantum_b_plain();
        let got = classical_frame_limit_ops()?;
        let mut reduced = Vec::with_capacity(4);
        for x in &got {
            let r = first_order_reduce(x, &plain)?
                .map_scalars(|s| s.substitute_zero(symbol("gamma")))?
                .map_scalars(|s| s.substitute_zero(symbol("xi")))?;
            reduced.push(r);
        }
        let expected = [
            el(&plain, "1/2*phi*q_A*m_B + 1/2*alpha*phi*q_A*p_A*m_B").alpha_truncate(1),
            el(&plain, "1/2*delta*m_B^-1*p_B^2").alpha_truncate(1),
            el(&plain, "q_A*p_B").alpha_truncate(1),
            el(&plain, "phi*(1 + alpha*p_A)*(t*p_B - m_B*q_B)").alpha_truncate(1),
        ];
        for (i, (g, w)) in reduced.iter().zip(&expected).enumerate() {
            let diff = g.sub(w)?;
            if !diff.is_zero() {
                return Ok(Some(format!("first-order exponent {i}: residual {diff}")));
            }
        }
        Ok(None)
    });
}

// ---------------------------------------------------------------------------
// suite

pub fn verify_suite() -> Report {
    let mut report = Report::new();

    {
        let start = std::time::Instant::now();
        let (passed, detail) = match dynamical_table_verify() {
            Ok(bad) if bad.is_empty() => {
                (true, "21/21 entries hold, symbolically in t".to_string())
            }
            Ok(bad) => {
                let (x, y, r) = &bad[0];
                (false, format!("[{x}, {y}]: residual {r}"))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        report.push("d7", "dynamical-table", passed, detail, start.elapsed().as_millis());
    }

    {
        let start = std::time::Instant::now();
        let (passed, detail) = match dynamical_jacobi_verify() {
            Ok(bad) if bad.is_empty() => (true, "35/35 triples vanish".to_string()),
            Ok(bad) => (false, format!("triple {:?}", bad[0])),
            Err(e) => (false, format!("error: {e}")),
        };
        report.push("d7", "dynamical-jacobi", passed, detail, start.elapsed().as_millis());
    }

    report.check("d7", "first-order-exponents-match-displayed-forms", || {
        let ops = build_exponent_ops(ExponentMode::FirstOrder)?;
        let displayed = displayed_first_order_forms()?;
        for (i, (g, w)) in ops.iter().zip(&displayed).enumerate() {
            let diff = g.sub(w)?.alpha_truncate(1);
            if !diff.is_zero() {
                return Ok(Some(format!("exponent {i}: residual {diff}")));
            }
        }
        Ok(None)
    });

    report.check("d7", "exact-exponents-zero-deformation", || {
        // E_A, H_B -> 1: the mass exponent collapses to (phi/2) q_A m_B
        let plain = specs::two_particle_plain();
        let exact = build_exponent_ops(ExponentMode::Exact)?;
        let expanded = exact[0].expand_exponentials(&plain, alpha(), 2)?;
        let limit = expanded.map_scalars(|s| s.substitute_zero(alpha()))?;
        let want = el(&plain, "1/2*phi*q_A*m_B");
        let diff = limit.sub(&want)?;
        Ok(if diff.is_zero() { None } else { Some(format!("got {limit}")) })
    });

    report.check("d7", "linear-combination-identities", || {
        for check in identity_checks()? {
            if !check.passed {
                return Ok(Some(format!("{}: {}", check.name, check.detail)));
            }
        }
        Ok(None)
    });

    report.check("d7", "closure-dimension-seven", || {
        let seeds = first_order_seeds()?;
        let result = closure_generate(&seeds, 12)?;
        if result.dimension != 7 {
            return Ok(Some(format!("dimension {}", result.dimension)));
        }
        Ok(None)
    });

    report.check("d7", "closure-singleton-seed", || {
        let basis = DynamicalBasis::reduced()?;
        let result = closure_generate(&[basis.q_a.clone()], 12)?;
        Ok(if result.dimension == 1 { None } else { Some(format!("dimension {}", result.dimension)) })
    });

    report.check("d7", "closure-contains-momentum-product-and-frame-energy", || {
        // [K_AB, D_B] contains T and [K_AB, T] contains Q_A
        let basis = DynamicalBasis::new();
        let c1 = basis.k_ab.commutator(&basis.d_b)?;
        match span_solve(&[c1], &[basis.k_ab.clone(), basis.t_op.clone()])? {
            SpanOutcome::Solved(coeffs) => {
                if coeffs[0][1].is_zero() {
                    return Ok(Some("momentum product missing from [K_AB, D_B]".into()));
                }
            }
            SpanOutcome::NotInSpan { residual, .. } => {
                return Ok(Some(format!("unexpected residual {residual}")))
            }
        }
        let c2 = basis.k_ab.commutator(&basis.t_op)?;
        match span_solve(&[c2], &[basis.q_a.clone()])? {
            SpanOutcome::Solved(coeffs) => {
                if coeffs[0][0].is_zero() {
                    return Ok(Some("frame energy missing from [K_AB, T]".into()));
                }
            }
            SpanOutcome::NotInSpan { residual, .. } => {
                return Ok(Some(format!("unexpected residual {residual}")))
            }
        }
        Ok(None)
    });

    report.check("d7", "relational-subalgebra-at-zero-time", || {
        // at t = 0 the span of {P_AB, K_AB, D_A, D_B} closes
        let basis = DynamicalBasis::new();
        let t_sym = symbol("t");
        let at_zero = |x: &NCElement| x.map_scalars(|s| s.substitute_zero(t_sym));
        let four = [
            at_zero(&basis.p_ab)?,
            at_zero(&basis.k_ab)?,
            at_zero(&basis.d_a)?,
            at_zero(&basis.d_b)?,
        ];
        for i in 0..4 {
            for j in (i + 1)..4 {
                let c = four[i].commutator(&four[j])?;
                if c.is_zero() {
                    continue;
                }
                if let SpanOutcome::NotInSpan { residual, .. } = span_solve(&[c], &four.to_vec())? {
                    return Ok(Some(format!("pair ({i}, {j}): residual {residual}")));
                }
            }
        }
        Ok(None)
    });

    classical_frame_limit_checks(&mut report);
    report
}

/// The adjoint-action checks as their own suite.
pub fn verify_adjoint_suite() -> Report {
    let mut report = Report::new();
    report.check("adjoint", "adjoint-table", || {
        let bad = adjoint_table_verify()?;
        Ok(bad.first().map(|(op, t, r)| format!("{op} exponential on {t}: residual {r}")))
    });
    report.check("adjoint", "adjoint-round-trips", || {
        let bad = adjoint_round_trips()?;
        Ok(bad.first().map(|(op, t, r)| format!("operator {op} on {t}: residual {r}")))
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries_hold() {
        assert!(dynamical_table_verify().unwrap().is_empty());
    }

    #[test]
    fn jacobi_holds_on_all_triples() {
        assert!(dynamical_jacobi_verify().unwrap().is_empty());
    }

    #[test]
    fn specific_table_lines() {
        let basis = DynamicalBasis::new();
        // [P_AB, D_A] = i kappa P_AB
        let got = basis.p_ab.commutator(&basis.d_a).unwrap();
        assert_eq!(got, basis.p_ab.scale(&Scalar::parse("i*kappa").unwrap()));
        // [P_AB, T] = 2 i kappa m_B Q_B
        let got = basis.p_ab.commutator(&basis.t_op).unwrap();
        assert_eq!(got, basis.q_b.scale(&Scalar::parse("2*i*kappa*m_B").unwrap()));
        // [Q_A, Q_B] = 0
        assert!(basis.q_a.commutator(&basis.q_b).unwrap().is_zero());
    }

    #[test]
    fn translation_exponent_is_unchanged_by_reduction() {
        let ops = build_exponent_ops(ExponentMode::FirstOrder).unwrap();
        let plain = specs::two_particle_plain();
        assert_eq!(
            ops[2].map_scalars(|s| Ok(s.clone().untruncated())).unwrap(),
            el(&plain, "(q_A + gamma)*p_B")
        );
    }

    #[test]
    fn reduction_rejects_unabsorbed_inverse_mass() {
        // a bare 1/alpha with no compensating factor cannot be graded
        let plain = specs::two_particle_plain();
        let bad = el(&plain, "alpha^-1*q_A");
        assert!(matches!(
            first_order_reduce(&bad, &plain),
            Err(QrfError::Ansatz { .. })
        ));
    }

    #[test]
    fn closure_reaches_dimension_seven() {
        let seeds = first_order_seeds().unwrap();
        let result = closure_generate(&seeds, 12).unwrap();
        assert_eq!(result.dimension, 7);
        assert_eq!(result.change_of_basis.len(), 7);
    }

    #[test]
    fn adjoint_translation_block() {
        // the translation exponential shifts the renormalized momentum by
        // -(kappa/hbar) p_B and the position of B by q_A + gamma
        let plain = specs::two_particle_plain();
        let ops = build_exponent_ops(ExponentMode::FirstOrder).unwrap();
        let p_prime = reduce_value(&el(&plain, "m_A*phi + p_A"), &plain).unwrap();
        let got = adjoint_transform(&ops[2], &p_prime).unwrap();
        let want = p_prime.sub(&el(&plain, "kappa*hbar^-1*p_B").alpha_truncate(1)).unwrap();
        assert_eq!(got.alpha_truncate(1), want.alpha_truncate(1));
    }

    #[test]
    fn suite_is_green() {
        let r = verify_suite();
        for c in &r.checks {
            assert!(c.passed, "{c}");
        }
        let r = verify_adjoint_suite();
        for c in &r.checks {
            assert!(c.passed, "{c}");
        }
    }
}
