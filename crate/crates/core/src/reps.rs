//! Phase-space realizations: the noncommutative coordinates on the
//! frame-particle Weyl algebra and the deformed generators on the second
//! particle's Weyl algebra, in exact exponential-generator form and as
//! truncated series, with exact relation and Casimir verification and the
//! classical / zero-deformation limits.

use crate::classical;
use crate::ncalg::{AlgebraSpec, NCElement, NcError, Substitution};
use crate::report::Report;
use crate::scalar::{alpha, symbol, Scalar};
use crate::specs;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RealizationMode {
    /// Exponential generators kept as first-class invertible symbols.
    Exact,
    /// Exponentials expanded to the given alpha order, with truncated
    /// scalar arithmetic throughout.
    Series(u32),
}

/// A multiplicative map from a source algebra into a phase-space algebra.
pub struct Realization {
    pub source: Arc<AlgebraSpec>,
    pub subst: Substitution,
    pub mode: RealizationMode,
}

impl Realization {
    pub fn image_of(&self, gen: &str) -> Option<&NCElement> {
        self.subst.image_of(self.source.gen_index(gen)?)
    }

    pub fn apply(&self, x: &NCElement) -> Result<NCElement, NcError> {
        self.subst.apply(x)
    }
}

fn el(spec: &Arc<AlgebraSpec>, t: &str) -> NCElement {
    NCElement::parse(spec, t).unwrap_or_else(|e| panic!("bad builtin element `{t}`: {e}"))
}

/// Coordinates on the frame Weyl algebra: a = q + gamma, v = phi E,
/// theta = (phi/4)(E q + q E), b = delta.
pub fn realize_coordinates(mode: RealizationMode) -> Result<Realization, NcError> {
    let source = specs::coordinates_physical();
    match mode {
        RealizationMode::Exact => {
            let target = specs::weyl_a();
            let subst = Substitution::new(&source, &target)
                .set(source.gen_index("a").unwrap(), el(&target, "q_A + gamma"))
                .set_with_inverse(
                    source.gen_index("v").unwrap(),
                    el(&target, "phi*E_A"),
                    el(&target, "phi^-1*E_A^-1"),
                )
                .set(
                    source.gen_index("theta").unwrap(),
                    el(&target, "1/4*phi*(E_A*q_A + q_A*E_A)"),
                )
                .set(source.gen_index("b").unwrap(), el(&target, "delta"));
            Ok(Realization { source, subst, mode })
        }
        RealizationMode::Series(order) => {
            let exact = realize_coordinates(RealizationMode::Exact)?;
            series_from_exact(exact, &specs::weyl_a_plain(), order)
        }
    }
}

/// Deformed generators on the second particle's Weyl algebra:
/// M' = m_B H^-2, P0' = (2 hbar^2 / m_B kappa^2 alpha^2)(H^2 + H^-2 - 2) + xi,
/// P1' = p_B, K' = t p_B - (m_B/2)(H^2 q_B + q_B H^2), W' = H^4,
/// where H = exp((kappa alpha / 4 hbar) p_B).
pub fn realize_generators(mode: RealizationMode) -> Result<Realization, NcError> {
    let source = specs::deformed_generators_physical();
    match mode {
        RealizationMode::Exact => {
            let target = specs::weyl_b();
            let h_idx = target.gen_index("H_B").unwrap();
            let subst = Substitution::new(&source, &target)
                .set_with_inverse(
                    source.gen_index("Mp").unwrap(),
                    NCElement::gen_pow(&target, h_idx, -2).scale(&Scalar::sym("m_B")),
                    NCElement::gen_pow(&target, h_idx, 2)
                        .scale(&Scalar::parse("m_B^-1").unwrap()),
                )
                .set(
                    source.gen_index("P0p").unwrap(),
                    el(
                        &target,
                        "2*hbar^2*m_B^-1*kappa^-2*alpha^-2*(H_B^2 + H_B^-2 - 2) + xi",
                    ),
                )
                .set(source.gen_index("P1p").unwrap(), el(&target, "p_B"))
                .set_with_inverse(
                    source.gen_index("Wp").unwrap(),
                    NCElement::gen_pow(&target, h_idx, 4),
                    NCElement::gen_pow(&target, h_idx, -4),
                )
                .set(
                    source.gen_index("Kp").unwrap(),
                    el(&target, "t*p_B - 1/2*m_B*(H_B^2*q_B + q_B*H_B^2)"),
                );
            Ok(Realization { source, subst, mode })
        }
        RealizationMode::Series(order) => {
            let exact = realize_generators(RealizationMode::Exact)?;
            series_from_exact(exact, &specs::weyl_b_plain(), order)
        }
    }
}

/// Laurent allowance of a commutator table: the most negative alpha-degree
/// among its coefficients. Series images must carry this many extra orders
/// so that substituted right-hand sides stay exact to the requested order.
fn table_alpha_margin(spec: &Arc<AlgebraSpec>) -> u32 {
    let mut margin = 0i32;
    for i in 0..spec.num_gens() {
        for j in (i + 1)..spec.num_gens() {
            if let Some(table) = spec.comm_table(i, j) {
                for c in table.values() {
                    if let Some((lo, _)) = c.degree_range(alpha()) {
                        margin = margin.max(-lo);
                    }
                }
            }
        }
    }
    margin as u32
}

/// Expand an exact realization's images into alpha series on the plain
/// (exponential-free) target. Images are kept to `order` plus the table's
/// Laurent margin; relation residuals are judged at `order`.
fn series_from_exact(
    exact: Realization,
    plain: &Arc<AlgebraSpec>,
    order: u32,
) -> Result<Realization, NcError> {
    let source = exact.source.clone();
    let internal = order + table_alpha_margin(&source);
    let mut subst = Substitution::new(&source, plain);
    for idx in 0..source.num_gens() {
        if let Some(img) = exact.subst.image_of(idx) {
            let expanded = img
                .expand_exponentials(plain, alpha(), internal as i32)?
                .alpha_truncate(internal);
            subst = subst.set(idx, expanded);
        }
    }
    Ok(Realization { source, subst, mode: RealizationMode::Series(order) })
}

/// Every commutator of images must equal the image of the table entry:
/// exactly in exact mode, to the truncation order in series mode.
pub fn relation_verify(real: &Realization) -> Result<Vec<(String, String, NCElement)>, NcError> {
    let spec = &real.source;
    let mut mismatches = Vec::new();
    for i in 0..spec.num_gens() {
        for j in (i + 1)..spec.num_gens() {
            let (Some(img_i), Some(img_j)) = (real.subst.image_of(i), real.subst.image_of(j))
            else {
                continue;
            };
            let lhs = img_i.commutator(img_j)?;
            let rhs = match spec.comm_table(i, j) {
                None => NCElement::zero(real.subst.target()),
                Some(table) => {
                    real.subst.apply(&NCElement::from_terms(spec, table.clone()))?
                }
            };
            let mut residual = lhs.sub(&rhs)?;
            if let RealizationMode::Series(order) = real.mode {
                residual = residual.alpha_truncate(order);
            }
            if !residual.is_zero() {
                mismatches.push((
                    spec.generator(i).name.clone(),
                    spec.generator(j).name.clone(),
                    residual,
                ));
            }
        }
    }
    Ok(mismatches)
}

/// Casimirs of the coordinate algebra on the exact frame realization:
/// I1 = a - (v^-1 theta + theta v^-1) evaluates to gamma, I2 = b to delta.
pub fn coordinate_casimirs(real: &Realization) -> Result<(NCElement, NCElement), NcError> {
    assert_eq!(real.mode, RealizationMode::Exact);
    let target = real.subst.target();
    let v_inv = el(target, "phi^-1*E_A^-1");
    let theta = real.image_of("theta").unwrap();
    let a = real.image_of("a").unwrap();
    let i1 = a.sub(&v_inv.mul(theta)?.add(&theta.mul(&v_inv)?)?)?;
    let i2 = real.image_of("b").unwrap().clone();
    Ok((i1, i2))
}

/// Deformed Casimirs on the exact generator realization:
/// hbar^2 C1 = 2 e^((kappa/2 hbar) alpha P1') M' P0'
///            - (sinh((kappa/4 hbar) alpha P1') / ((kappa/4 hbar) alpha))^2,
/// hbar C2 = i M' e^((kappa/2 hbar) alpha P1').
pub fn generator_casimirs(real: &Realization) -> Result<(NCElement, NCElement), NcError> {
    assert_eq!(real.mode, RealizationMode::Exact);
    let target = real.subst.target();
    let m_img = real.image_of("Mp").unwrap();
    let p0_img = real.image_of("P0p").unwrap();
    let h2 = el(target, "H_B^2");
    let c1 = h2
        .mul(m_img)?
        .mul(p0_img)?
        .scale(&Scalar::from_int(2))
        .sub(&el(target, "4*hbar^2*kappa^-2*alpha^-2*(H_B^2 - 2 + H_B^-2)"))?;
    let c2 = m_img.mul(&h2)?.scale(&Scalar::i());
    Ok((c1, c2))
}

// ---------------------------------------------------------------------------
// verification

fn expect_scalar(x: &NCElement, want: &str) -> Result<Option<String>, Box<dyn std::error::Error>> {
    let target = x.spec();
    let want_el = NCElement::scalar(target, Scalar::parse(want)?);
    let diff = x.sub(&want_el)?;
    if diff.is_zero() {
        Ok(None)
    } else {
        Ok(Some(format!("expected {want}, got {x}")))
    }
}

pub fn verify_suite(alpha_order: u32) -> Report {
    let mut report = Report::new();
    let order = alpha_order.max(1);

    report.check("reps", "coordinate-relations-exact", || {
        let real = realize_coordinates(RealizationMode::Exact)?;
        let bad = relation_verify(&real)?;
        Ok(bad.first().map(|(x, y, r)| format!("[{x}, {y}] image residual {r}")))
    });

    report.check("reps", "coordinate-relations-series", || {
        for n in 1..=order {
            let real = realize_coordinates(RealizationMode::Series(n))?;
            let bad = relation_verify(&real)?;
            if let Some((x, y, r)) = bad.first() {
                return Ok(Some(format!("order {n}: [{x}, {y}] residual {r}")));
            }
        }
        Ok(None)
    });

    report.check("reps", "generator-relations-exact", || {
        let real = realize_generators(RealizationMode::Exact)?;
        let bad = relation_verify(&real)?;
        Ok(bad.first().map(|(x, y, r)| format!("[{x}, {y}] image residual {r}")))
    });

    report.check("reps", "generator-relations-series", || {
        for n in 1..=order {
            let real = realize_generators(RealizationMode::Series(n))?;
            let bad = relation_verify(&real)?;
            if let Some((x, y, r)) = bad.first() {
                return Ok(Some(format!("order {n}: [{x}, {y}] residual {r}")));
            }
        }
        Ok(None)
    });

    report.check("reps", "coordinate-casimirs", || {
        let real = realize_coordinates(RealizationMode::Exact)?;
        let (i1, i2) = coordinate_casimirs(&real)?;
        if let Some(msg) = expect_scalar(&i1, "gamma")? {
            return Ok(Some(format!("I1: {msg}")));
        }
        if let Some(msg) = expect_scalar(&i2, "delta")? {
            return Ok(Some(format!("I2: {msg}")));
        }
        // centrality against all four realized coordinates
        for name in ["theta", "b", "a", "v"] {
            let img = real.image_of(name).unwrap();
            if !i1.commutator(img)?.is_zero() {
                return Ok(Some(format!("I1 fails to commute with the image of {name}")));
            }
        }
        Ok(None)
    });

    report.check("reps", "generator-casimirs", || {
        let real = realize_generators(RealizationMode::Exact)?;
        let (c1, c2) = generator_casimirs(&real)?;
        if let Some(msg) = expect_scalar(&c1, "2*m_B*xi")? {
            return Ok(Some(format!("hbar^2 C1: {msg}")));
        }
        if let Some(msg) = expect_scalar(&c2, "i*m_B")? {
            return Ok(Some(format!("hbar C2: {msg}")));
        }
        let c1_zero_xi = c1.map_scalars(|s| s.substitute_zero(symbol("xi")))?;
        if !c1_zero_xi.is_zero() {
            return Ok(Some(format!("C1 at zero internal energy: {c1_zero_xi}")));
        }
        for name in ["Mp", "P0p", "P1p", "Kp"] {
            let img = real.image_of(name).unwrap();
            if !c1.commutator(img)?.is_zero() || !c2.commutator(img)?.is_zero() {
                return Ok(Some(format!("Casimir fails to commute with the image of {name}")));
            }
        }
        Ok(None)
    });

    report.check("reps", "series-matches-displayed-first-order", || {
        let coords = realize_coordinates(RealizationMode::Series(1))?;
        let wa = specs::weyl_a_plain();
        let cases = [
            ("a", "q_A + gamma"),
            ("v", "phi + alpha*phi*p_A"),
            ("theta", "1/2*phi*q_A + 1/4*phi*alpha*(p_A*q_A + q_A*p_A)"),
            ("b", "delta"),
        ];
        for (gen, want) in cases {
            let img = coords.image_of(gen).unwrap().alpha_truncate(1);
            let diff = img.sub(&el(&wa, want).alpha_truncate(1))?;
            if !diff.is_zero() {
                return Ok(Some(format!("coordinate {gen}: got {img}")));
            }
        }
        let gens = realize_generators(RealizationMode::Series(1))?;
        let wb = specs::weyl_b_plain();
        let gcases = [
            ("Mp", "m_B - 1/2*kappa*alpha*hbar^-1*m_B*p_B"),
            ("P0p", "1/2*m_B^-1*p_B^2 + xi"),
            ("P1p", "p_B"),
            ("Kp", "-m_B*q_B - 1/4*kappa*alpha*hbar^-1*m_B*(p_B*q_B + q_B*p_B) + t*p_B"),
        ];
        for (gen, want) in gcases {
            let img = gens.image_of(gen).unwrap().alpha_truncate(1);
            let diff = img.sub(&el(&wb, want).alpha_truncate(1))?;
            if !diff.is_zero() {
                return Ok(Some(format!("generator {gen}: got {img}")));
            }
        }
        Ok(None)
    });

    report.check("reps", "exact-expands-to-series", || {
        for n in 1..=3u32 {
            let coords_exact = realize_coordinates(RealizationMode::Exact)?;
            let coords_series = realize_coordinates(RealizationMode::Series(n))?;
            for gen in ["theta", "b", "a", "v"] {
                let idx = coords_exact.source.gen_index(gen).unwrap();
                let expanded = coords_exact
                    .subst
                    .image_of(idx)
                    .unwrap()
                    .expand_exponentials(&specs::weyl_a_plain(), alpha(), n as i32)?
                    .alpha_truncate(n);
                let series = coords_series.subst.image_of(idx).unwrap().alpha_truncate(n);
                if !expanded.sub(&series)?.is_zero() {
                    return Ok(Some(format!("coordinate {gen} at order {n}")));
                }
            }
            let gens_exact = realize_generators(RealizationMode::Exact)?;
            let gens_series = realize_generators(RealizationMode::Series(n))?;
            for gen in ["Mp", "P0p", "P1p", "Wp", "Kp"] {
                let idx = gens_exact.source.gen_index(gen).unwrap();
                let expanded = gens_exact
                    .subst
                    .image_of(idx)
                    .unwrap()
                    .expand_exponentials(&specs::weyl_b_plain(), alpha(), n as i32)?
                    .alpha_truncate(n);
                let series = gens_series.subst.image_of(idx).unwrap().alpha_truncate(n);
                if !expanded.sub(&series)?.is_zero() {
                    return Ok(Some(format!("generator {gen} at order {n}")));
                }
            }
        }
        Ok(None)
    });

    classical_limit_checks(&mut report);
    report
}

/// kappa -> 0 on the frame side reproduces the fundamental Poisson brackets,
/// and alpha -> 0 on the generator side reproduces the undeformed phase-space
/// realization.
pub fn classical_limit_checks(report: &mut Report) {
    report.check("reps", "classical-limit-coordinate-brackets", || {
        let real = realize_coordinates(RealizationMode::Exact)?;
        let kap = symbol("kappa");
        let i_kappa = Scalar::parse("i*kappa")?;
        let table = classical::coordinate_poisson(false);
        let coord_syms: Vec<_> =
            ["theta", "b", "a", "v"].iter().map(|n| symbol(n)).collect();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let img_i = real.subst.image_of(i).unwrap();
                let img_j = real.subst.image_of(j).unwrap();
                let comm = img_i.commutator(img_j)?;
                let scaled = comm.map_scalars(|s| s.div_monomial(&i_kappa))?;
                let limit = scaled.map_scalars(|s| s.substitute_zero(kap))?;
                // the fundamental bracket, realized on the same target
                let bracket = table.fundamental(coord_syms[i], coord_syms[j]);
                let realized = real.subst.apply(&coordinate_scalar_to_element(&bracket)?)?;
                let realized = realized.map_scalars(|s| s.substitute_zero(kap))?;
                let diff = limit.sub(&realized)?;
                if !diff.is_zero() {
                    return Ok(Some(format!(
                        "pair ({}, {}): residual {diff}",
                        real.source.generator(i).name,
                        real.source.generator(j).name
                    )));
                }
            }
        }
        Ok(None)
    });

    report.check("reps", "classical-limit-realization-form", || {
        // at kappa -> 0 the symmetrized theta image collapses onto the
        // symplectic leaf realization (phi/2) q E
        let real = realize_coordinates(RealizationMode::Exact)?;
        let kap = symbol("kappa");
        let theta = real.image_of("theta").unwrap();
        let collapsed = theta.map_scalars(|s| s.substitute_zero(kap))?;
        let want = el(&specs::weyl_a(), "1/2*phi*q_A*E_A");
        let diff = collapsed.sub(&want)?;
        Ok(if diff.is_zero() { None } else { Some(format!("theta image at kappa=0: {collapsed}")) })
    });

    report.check("reps", "zero-deformation-generator-images", || {
        let real = realize_generators(RealizationMode::Exact)?;
        let wb = specs::weyl_b_plain();
        let cases = [
            ("Mp", "m_B"),
            ("P0p", "1/2*m_B^-1*p_B^2 + xi"),
            ("P1p", "p_B"),
            ("Kp", "t*p_B - m_B*q_B"),
        ];
        for (gen, want) in cases {
            let img = real.image_of(gen).unwrap();
            let expanded = img.expand_exponentials(&wb, alpha(), 2)?;
            let limit = expanded.map_scalars(|s| s.substitute_zero(alpha()))?;
            let diff = limit.sub(&el(&wb, want))?;
            if !diff.is_zero() {
                return Ok(Some(format!("{gen} at alpha=0: {limit}")));
            }
        }
        Ok(None)
    });

    report.check("reps", "zero-deformation-coordinate-images", || {
        let real = realize_coordinates(RealizationMode::Exact)?;
        let wa = specs::weyl_a_plain();
        let cases =
            [("a", "q_A + gamma"), ("v", "phi"), ("theta", "1/2*phi*q_A"), ("b", "delta")];
        for (gen, want) in cases {
            let img = real.image_of(gen).unwrap();
            let expanded = img.expand_exponentials(&wa, alpha(), 2)?;
            let limit = expanded.map_scalars(|s| s.substitute_zero(alpha()))?;
            let diff = limit.sub(&el(&wa, want))?;
            if !diff.is_zero() {
                return Ok(Some(format!("{gen} at alpha=0: {limit}")));
            }
        }
        Ok(None)
    });
}

/// Promote a classical bracket value (a scalar polynomial in the coordinate
/// symbols) to an element of the coordinate algebra, so a realization can
/// act on it. Parameters like alpha and phi stay scalar.
fn coordinate_scalar_to_element(s: &Scalar) -> Result<NCElement, NcError> {
    let spec = specs::coordinates_physical();
    let mut out = NCElement::zero(&spec);
    for (m, g) in s.terms() {
        let mut term = NCElement::scalar(&spec, Scalar::from_coeff(g.clone()));
        for &(sym, e) in m.factors() {
            let name = crate::scalar::symbol_name(sym);
            match spec.gen_index(&name) {
                Some(idx) => {
                    if e < 0 {
                        return Err(NcError::NegativeExponent { gen: name });
                    }
                    term = term.mul(&NCElement::gen_pow(&spec, idx, e))?;
                }
                None => {
                    term = term
                        .scale(&Scalar::from_symbol(sym).pow(e).map_err(NcError::Scalar)?);
                }
            }
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_images_satisfy_relations_exactly() {
        let real = realize_coordinates(RealizationMode::Exact).unwrap();
        assert!(relation_verify(&real).unwrap().is_empty());
    }

    #[test]
    fn generator_images_satisfy_relations_exactly() {
        let real = realize_generators(RealizationMode::Exact).unwrap();
        assert!(relation_verify(&real).unwrap().is_empty());
    }

    #[test]
    fn boost_momentum_commutator_in_closed_form() {
        // [K' image, P0' image] = i hbar^2/(kappa alpha) (1 - H^4)
        let real = realize_generators(RealizationMode::Exact).unwrap();
        let k = real.image_of("Kp").unwrap();
        let p0 = real.image_of("P0p").unwrap();
        let got = k.commutator(p0).unwrap();
        let want = el(
            real.subst.target(),
            "i*hbar^2*kappa^-1*alpha^-1 - i*hbar^2*kappa^-1*alpha^-1*H_B^4",
        );
        assert_eq!(got, want);
    }

    #[test]
    fn first_relation_is_scaled_boost_image() {
        // [a image, v image] = i kappa alpha (v image)
        let real = realize_coordinates(RealizationMode::Exact).unwrap();
        let a = real.image_of("a").unwrap();
        let v = real.image_of("v").unwrap();
        let got = a.commutator(v).unwrap();
        assert_eq!(got, v.scale(&Scalar::parse("i*kappa*alpha").unwrap()));
    }

    #[test]
    fn constant_image_is_central() {
        let real = realize_coordinates(RealizationMode::Exact).unwrap();
        let b = real.image_of("b").unwrap();
        for g in ["theta", "a", "v"] {
            assert!(b.commutator(real.image_of(g).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn series_relations_hold_to_order_eight() {
        for n in [1u32, 4, 8] {
            let real = realize_coordinates(RealizationMode::Series(n)).unwrap();
            assert!(relation_verify(&real).unwrap().is_empty(), "coordinate order {n}");
            let real = realize_generators(RealizationMode::Series(n)).unwrap();
            assert!(relation_verify(&real).unwrap().is_empty(), "generator order {n}");
        }
    }

    #[test]
    fn suite_is_green() {
        let r = verify_suite(4);
        for c in &r.checks {
            assert!(c.passed, "{c}");
        }
    }
}
