//! The commutative extended Galilei group and its compatible Poisson
//! structure on the group coordinates: composition law, central-phase
//! composition, fundamental brackets, multiplicativity of the brackets under
//! the group law, Casimir leaf functions, and the symplectic realization.

use crate::report::Report;
use crate::scalar::{
    alpha, register_symbol, set_exp_rule, symbol_dimension, Dimension, Scalar, ScalarError,
    SymbolId,
};
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Group element in the coordinates (theta, b, a, v). Coordinates are exact
/// scalars, so the same composition serves numeric tests and fully symbolic
/// identities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupElement {
    pub theta: Scalar,
    pub b: Scalar,
    pub a: Scalar,
    pub v: Scalar,
}

impl GroupElement {
    pub fn new(theta: Scalar, b: Scalar, a: Scalar, v: Scalar) -> GroupElement {
        GroupElement { theta, b, a, v }
    }

    pub fn identity() -> GroupElement {
        GroupElement::new(Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero())
    }

    pub fn from_rationals(theta: (i64, i64), b: (i64, i64), a: (i64, i64), v: (i64, i64)) -> Self {
        let r = |(p, q)| Scalar::from_ratio(p, q);
        GroupElement::new(r(theta), r(b), r(a), r(v))
    }
}

/// Composition g1 * g2, with g1 acting second:
/// (theta'', b'', a'', v'') =
/// (theta' + theta + v' a + v'^2 b / 2, b' + b, a' + a + v' b, v' + v).
pub fn compose(g1: &GroupElement, g2: &GroupElement) -> GroupElement {
    let half = Scalar::from_ratio(1, 2);
    GroupElement {
        theta: g1
            .theta
            .add_ref(&g2.theta)
            .add_ref(&g1.v.mul_ref(&g2.a))
            .add_ref(&half.mul_ref(&g1.v).mul_ref(&g1.v).mul_ref(&g2.b)),
        b: g1.b.add_ref(&g2.b),
        a: g1.a.add_ref(&g2.a).add_ref(&g1.v.mul_ref(&g2.b)),
        v: g1.v.add_ref(&g2.v),
    }
}

/// Two-sided inverse under [`compose`].
pub fn invert(g: &GroupElement) -> GroupElement {
    let half = Scalar::from_ratio(1, 2);
    GroupElement {
        theta: g
            .theta
            .neg_ref()
            .add_ref(&g.v.mul_ref(&g.a))
            .sub_ref(&half.mul_ref(&g.v).mul_ref(&g.v).mul_ref(&g.b)),
        b: g.b.neg_ref(),
        a: g.a.neg_ref().add_ref(&g.v.mul_ref(&g.b)),
        v: g.v.neg_ref(),
    }
}

/// A Poisson structure on named commutative symbols: an antisymmetric table
/// of fundamental brackets, extended to polynomials by the bivector formula
/// {f, g} = sum_(i<j) {x_i, x_j} (df/dx_i dg/dx_j - df/dx_j dg/dx_i).
#[derive(Clone)]
pub struct PoissonAlgebra {
    vars: Vec<SymbolId>,
    /// Key (x, y) with x < y by symbol id; value {x, y}.
    brackets: BTreeMap<(SymbolId, SymbolId), Scalar>,
}

impl PoissonAlgebra {
    pub fn new(vars: Vec<SymbolId>) -> PoissonAlgebra {
        PoissonAlgebra { vars, brackets: BTreeMap::new() }
    }

    pub fn set_bracket(&mut self, x: SymbolId, y: SymbolId, value: Scalar) {
        assert!(x != y, "bracket of a variable with itself");
        if x < y {
            self.brackets.insert((x, y), value);
        } else {
            self.brackets.insert((y, x), value.neg_ref());
        }
    }

    pub fn fundamental(&self, x: SymbolId, y: SymbolId) -> Scalar {
        if x < y {
            self.brackets.get(&(x, y)).cloned().unwrap_or_else(Scalar::zero)
        } else if y < x {
            self.brackets.get(&(y, x)).map(|s| s.neg_ref()).unwrap_or_else(Scalar::zero)
        } else {
            Scalar::zero()
        }
    }

    pub fn vars(&self) -> &[SymbolId] {
        &self.vars
    }

    pub fn bracket(&self, f: &Scalar, g: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (idx, &xi) in self.vars.iter().enumerate() {
            for &xj in &self.vars[idx + 1..] {
                let b = self.fundamental(xi, xj);
                if b.is_zero() {
                    continue;
                }
                let term = f
                    .derivative(xi)
                    .mul_ref(&g.derivative(xj))
                    .sub_ref(&f.derivative(xj).mul_ref(&g.derivative(xi)));
                out = out.add_ref(&b.mul_ref(&term));
            }
        }
        out
    }

    /// {x,{y,z}} + {y,{z,x}} + {z,{x,y}} on all variable triples.
    pub fn jacobi_violations(&self) -> Vec<(String, String, String, Scalar)> {
        let mut out = Vec::new();
        let names: Vec<String> =
            self.vars.iter().map(|&s| crate::scalar::symbol_name(s)).collect();
        for i in 0..self.vars.len() {
            for j in (i + 1)..self.vars.len() {
                for k in (j + 1)..self.vars.len() {
                    let (x, y, z) = (
                        Scalar::from_symbol(self.vars[i]),
                        Scalar::from_symbol(self.vars[j]),
                        Scalar::from_symbol(self.vars[k]),
                    );
                    let s = self
                        .bracket(&x, &self.bracket(&y, &z))
                        .add_ref(&self.bracket(&y, &self.bracket(&z, &x)))
                        .add_ref(&self.bracket(&z, &self.bracket(&x, &y)));
                    if !s.is_zero() {
                        out.push((names[i].clone(), names[j].clone(), names[k].clone(), s));
                    }
                }
            }
        }
        out
    }

    /// Brackets of a Poisson structure on phase-space-like variables must
    /// satisfy dim {x, y} = dim x + dim y - dim(action).
    pub fn check_dimensions(&self) -> Result<(), ScalarError> {
        let action = Dimension::new(2, -1, 1);
        for (&(x, y), val) in &self.brackets {
            if let Some(d) = val.dimension()? {
                let want = symbol_dimension(x) + symbol_dimension(y) - action;
                if d != want {
                    return Err(ScalarError::Inhomogeneous {
                        first: format!(
                            "{{{}, {}}} has {d}",
                            crate::scalar::symbol_name(x),
                            crate::scalar::symbol_name(y)
                        ),
                        second: format!("expected {want}"),
                    });
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// coordinate symbols and shipped algebras

fn coordinate_symbols() -> &'static [SymbolId; 4] {
    static CELL: OnceLock<[SymbolId; 4]> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            register_symbol("theta", Dimension::new(2, -1, 0)),
            register_symbol("b", Dimension::new(0, 1, 0)),
            register_symbol("a", Dimension::new(1, 0, 0)),
            register_symbol("v", Dimension::new(1, -1, 0)),
        ]
    })
}

fn primed_symbols() -> &'static [SymbolId; 4] {
    static CELL: OnceLock<[SymbolId; 4]> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            register_symbol("theta_1", Dimension::new(2, -1, 0)),
            register_symbol("b_1", Dimension::new(0, 1, 0)),
            register_symbol("a_1", Dimension::new(1, 0, 0)),
            register_symbol("v_1", Dimension::new(1, -1, 0)),
        ]
    })
}

fn symplectic_symbols() -> &'static [SymbolId; 3] {
    static CELL: OnceLock<[SymbolId; 3]> = OnceLock::new();
    CELL.get_or_init(|| {
        let q = register_symbol("q_cl", Dimension::new(1, 0, 0));
        let p = register_symbol("p_cl", Dimension::new(1, -1, 1));
        let e = register_symbol("E_cl", Dimension::NONE);
        set_exp_rule(e, p, Scalar::sym("alpha"));
        [q, p, e]
    })
}

/// The fundamental brackets on (theta, b, a, v):
/// {a, v} = alpha v, {a, theta} = alpha theta + beta1 alpha^2 v,
/// {v, theta} = -(alpha/2) v^2, b central. `with_beta1` keeps the optional
/// second deformation parameter.
pub fn coordinate_poisson(with_beta1: bool) -> PoissonAlgebra {
    let [theta, b, a, v] = *coordinate_symbols();
    let _ = b;
    let mut alg = PoissonAlgebra::new(vec![theta, b, a, v]);
    alg.set_bracket(a, v, Scalar::parse("alpha*v").unwrap());
    let a_theta = if with_beta1 {
        Scalar::parse("alpha*theta + beta1*alpha^2*v").unwrap()
    } else {
        Scalar::parse("alpha*theta").unwrap()
    };
    alg.set_bracket(a, theta, a_theta);
    alg.set_bracket(v, theta, Scalar::parse("-1/2*alpha*v^2").unwrap());
    alg
}

/// Two commuting copies of the coordinate algebra, for compatibility checks
/// of the bracket with the group law.
pub fn doubled_poisson(with_beta1: bool) -> PoissonAlgebra {
    let unprimed = *coordinate_symbols();
    let primed = *primed_symbols();
    let single = coordinate_poisson(with_beta1);
    let mut vars = unprimed.to_vec();
    vars.extend_from_slice(&primed);
    let mut alg = PoissonAlgebra::new(vars);
    let prime_of = |s: SymbolId| -> SymbolId {
        let idx = unprimed.iter().position(|&u| u == s).unwrap();
        primed[idx]
    };
    for i in 0..4 {
        for j in (i + 1)..4 {
            let val = single.fundamental(unprimed[i], unprimed[j]);
            if val.is_zero() {
                continue;
            }
            alg.set_bracket(unprimed[i], unprimed[j], val.clone());
            // same table on the primed copy, with primed right-hand sides
            let mut primed_val = val;
            for k in 0..4 {
                primed_val = primed_val
                    .substitute(unprimed[k], &Scalar::from_symbol(prime_of(unprimed[k])))
                    .unwrap();
            }
            alg.set_bracket(primed[i], primed[j], primed_val);
        }
    }
    alg
}

/// Symplectic algebra {q, p} = 1 with the exponential symbol E = exp(alpha p).
pub fn symplectic_poisson() -> PoissonAlgebra {
    let [q, p, e] = *symplectic_symbols();
    let _ = e;
    let mut alg = PoissonAlgebra::new(vec![q, p]);
    alg.set_bracket(q, p, Scalar::one());
    alg
}

/// Images of the coordinates under the symplectic realization:
/// a = q + gamma, v = phi E, theta = (phi/2) q E, b = delta.
pub fn symplectic_realization() -> BTreeMap<SymbolId, Scalar> {
    let [theta, b, a, v] = *coordinate_symbols();
    let mut images = BTreeMap::new();
    images.insert(a, Scalar::parse("q_cl + gamma").unwrap());
    images.insert(v, Scalar::parse("phi*E_cl").unwrap());
    images.insert(theta, Scalar::parse("1/2*phi*q_cl*E_cl").unwrap());
    images.insert(b, Scalar::sym("delta"));
    images
}

fn substitute_coordinates(value: &Scalar, images: &BTreeMap<SymbolId, Scalar>) -> Scalar {
    value.substitute_many(images).unwrap()
}

// ---------------------------------------------------------------------------
// verification

/// The six composite brackets {x'', y''} computed through the product rule
/// {x'x, y'y} = {x', y'} x y + x' y' {x, y} must reproduce the fundamental
/// table evaluated on the composites, beta1 included.
pub fn compatibility_verify(report: &mut Report) {
    report.check("classical", "bracket-group-law-compatibility", || {
        let alg = doubled_poisson(true);
        let unprimed = *coordinate_symbols();
        let primed = *primed_symbols();
        let g1 = GroupElement::new(
            Scalar::from_symbol(primed[0]),
            Scalar::from_symbol(primed[1]),
            Scalar::from_symbol(primed[2]),
            Scalar::from_symbol(primed[3]),
        );
        let g2 = GroupElement::new(
            Scalar::from_symbol(unprimed[0]),
            Scalar::from_symbol(unprimed[1]),
            Scalar::from_symbol(unprimed[2]),
            Scalar::from_symbol(unprimed[3]),
        );
        let composite = compose(&g1, &g2);
        let comps = [&composite.theta, &composite.b, &composite.a, &composite.v];
        let single = coordinate_poisson(true);
        let mut images = BTreeMap::new();
        for (k, &sym) in unprimed.iter().enumerate() {
            images.insert(sym, comps[k].clone());
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                let lhs = alg.bracket(comps[i], comps[j]);
                let rhs =
                    substitute_coordinates(&single.fundamental(unprimed[i], unprimed[j]), &images);
                let diff = lhs.sub_ref(&rhs);
                if !diff.is_zero() {
                    return Ok(Some(format!(
                        "composite pair ({}, {}): residual {diff}",
                        crate::scalar::symbol_name(unprimed[i]),
                        crate::scalar::symbol_name(unprimed[j])
                    )));
                }
            }
        }
        Ok(None)
    });
}

/// The leaf functions gamma = a - 2 theta / v and delta = b, as exact
/// Laurent scalars.
pub fn casimir_leaf_functions() -> (Scalar, Scalar) {
    let gamma = Scalar::sym("a")
        .sub_ref(&Scalar::from_int(2).mul_ref(&Scalar::sym("theta")).mul_ref(&Scalar::sym_pow("v", -1)));
    (gamma, Scalar::sym("b"))
}

/// gamma = a - 2 theta / v and delta = b Poisson-commute with every
/// coordinate; the 1/v is handled by clearing denominators:
/// {gamma, x} v^2 = {a, x} v^2 - 2({theta, x} v - theta {v, x}).
pub fn casimir_leaf_verify(report: &mut Report) {
    report.check("classical", "casimir-leaf-functions", || {
        let alg = coordinate_poisson(false);
        let [theta, b, a, v] = *coordinate_symbols();
        let (ts, _bs, as_, vs) = (
            Scalar::from_symbol(theta),
            Scalar::from_symbol(b),
            Scalar::from_symbol(a),
            Scalar::from_symbol(v),
        );
        for x in [theta, b, a, v] {
            let xs = Scalar::from_symbol(x);
            let cleared = alg
                .bracket(&as_, &xs)
                .mul_ref(&vs)
                .mul_ref(&vs)
                .sub_ref(
                    &Scalar::from_int(2).mul_ref(
                        &alg.bracket(&ts, &xs)
                            .mul_ref(&vs)
                            .sub_ref(&ts.mul_ref(&alg.bracket(&vs, &xs))),
                    ),
                );
            if !cleared.is_zero() {
                return Ok(Some(format!(
                    "{{gamma, {}}} v^2 = {cleared}",
                    crate::scalar::symbol_name(x)
                )));
            }
            let delta_bracket = alg.bracket(&Scalar::from_symbol(b), &xs);
            if !delta_bracket.is_zero() {
                return Ok(Some(format!(
                    "{{delta, {}}} = {delta_bracket}",
                    crate::scalar::symbol_name(x)
                )));
            }
        }
        Ok(None)
    });
}

/// The symplectic images reproduce the fundamental table exactly (beta1 = 0).
pub fn realization_bracket_verify(report: &mut Report) {
    report.check("classical", "symplectic-realization", || {
        let table = coordinate_poisson(false);
        let sympl = symplectic_poisson();
        let images = symplectic_realization();
        let coords = *coordinate_symbols();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let lhs = sympl.bracket(&images[&coords[i]], &images[&coords[j]]);
                let rhs = substitute_coordinates(&table.fundamental(coords[i], coords[j]), &images);
                let diff = lhs.sub_ref(&rhs);
                if !diff.is_zero() {
                    return Ok(Some(format!(
                        "realized pair ({}, {}): {lhs} vs {rhs}",
                        crate::scalar::symbol_name(coords[i]),
                        crate::scalar::symbol_name(coords[j])
                    )));
                }
            }
        }
        Ok(None)
    });
}

pub fn verify_suite() -> Report {
    let mut report = Report::new();

    report.check("classical", "group-law-associativity", || {
        let mut gs = Vec::new();
        for copy in 0..3 {
            let mut coords = Vec::new();
            for (name, dim) in [
                ("theta", Dimension::new(2, -1, 0)),
                ("b", Dimension::new(0, 1, 0)),
                ("a", Dimension::new(1, 0, 0)),
                ("v", Dimension::new(1, -1, 0)),
            ] {
                let sym = register_symbol(&format!("{name}_g{copy}"), dim);
                coords.push(Scalar::from_symbol(sym));
            }
            gs.push(GroupElement::new(
                coords[0].clone(),
                coords[1].clone(),
                coords[2].clone(),
                coords[3].clone(),
            ));
        }
        let left = compose(&compose(&gs[0], &gs[1]), &gs[2]);
        let right = compose(&gs[0], &compose(&gs[1], &gs[2]));
        Ok(if left == right { None } else { Some("associativity residual".into()) })
    });

    report.check("classical", "group-law-identity-inverse", || {
        let coords = *coordinate_symbols();
        let g = GroupElement::new(
            Scalar::from_symbol(coords[0]),
            Scalar::from_symbol(coords[1]),
            Scalar::from_symbol(coords[2]),
            Scalar::from_symbol(coords[3]),
        );
        let id = GroupElement::identity();
        if compose(&id, &g) != g || compose(&g, &id) != g {
            return Ok(Some("identity law fails".into()));
        }
        if compose(&invert(&g), &g) != id || compose(&g, &invert(&g)) != id {
            return Ok(Some("inverse law fails".into()));
        }
        Ok(None)
    });

    report.check("classical", "central-phase-composition", || {
        // (0,0,a,-v) * (0,0,-a,v) = (v a, 0, 0, 0), symbolically and at the
        // sample point a = 2, v = 3
        let z = Scalar::zero;
        let (a, v) = (Scalar::sym("a"), Scalar::sym("v"));
        let g1 = GroupElement::new(z(), z(), a.clone(), v.neg_ref());
        let g2 = GroupElement::new(z(), z(), a.neg_ref(), v.clone());
        let got = compose(&g1, &g2);
        let want = GroupElement::new(v.mul_ref(&a), z(), z(), z());
        if got != want {
            return Ok(Some(format!("symbolic composite ({}, ...)", got.theta)));
        }
        let n1 = GroupElement::from_rationals((0, 1), (0, 1), (2, 1), (-3, 1));
        let n2 = GroupElement::from_rationals((0, 1), (0, 1), (-2, 1), (3, 1));
        let ngot = compose(&n1, &n2);
        let nwant = GroupElement::from_rationals((6, 1), (0, 1), (0, 1), (0, 1));
        Ok(if ngot == nwant { None } else { Some(format!("numeric composite {ngot:?}")) })
    });

    report.check("classical", "bracket-jacobi", || {
        let v = coordinate_poisson(true).jacobi_violations();
        Ok(if v.is_empty() {
            None
        } else {
            Some(format!("triple ({}, {}, {}): {}", v[0].0, v[0].1, v[0].2, v[0].3))
        })
    });

    report.check("classical", "bracket-dimensions", || {
        coordinate_poisson(true).check_dimensions()?;
        symplectic_poisson().check_dimensions()?;
        Ok(None)
    });

    report.check("classical", "abelian-limit", || {
        let alg = coordinate_poisson(true);
        let coords = *coordinate_symbols();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let limit = alg.fundamental(coords[i], coords[j]).substitute_zero(alpha())?;
                if !limit.is_zero() {
                    return Ok(Some(format!("bracket survives the limit: {limit}")));
                }
            }
        }
        Ok(None)
    });

    compatibility_verify(&mut report);
    casimir_leaf_verify(&mut report);
    realization_bracket_verify(&mut report);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn leaf_functions_have_vanishing_cleared_brackets() {
        // direct Laurent form: {gamma, x} with the quotient handled by the
        // exponential-free derivation (v^-1 differentiates like a power)
        let (gamma, delta) = casimir_leaf_functions();
        let alg = coordinate_poisson(false);
        for name in ["theta", "b", "a", "v"] {
            let x = Scalar::sym(name);
            assert!(alg.bracket(&gamma, &x).is_zero(), "{{gamma, {name}}}");
            assert!(alg.bracket(&delta, &x).is_zero(), "{{delta, {name}}}");
        }
    }

    #[test]
    fn fundamental_brackets() {
        let alg = coordinate_poisson(true);
        let a = Scalar::sym("a");
        let v = Scalar::sym("v");
        let theta = Scalar::sym("theta");
        assert_eq!(alg.bracket(&a, &v), Scalar::parse("alpha*v").unwrap());
        assert_eq!(
            alg.bracket(&a, &theta),
            Scalar::parse("alpha*theta + beta1*alpha^2*v").unwrap()
        );
        assert_eq!(alg.bracket(&v, &theta), Scalar::parse("-1/2*alpha*v^2").unwrap());
        assert_eq!(alg.bracket(&Scalar::sym("b"), &theta), Scalar::zero());
    }

    #[test]
    fn realization_brackets_match_table() {
        let sympl = symplectic_poisson();
        let images = symplectic_realization();
        let [theta, b, a, v] = *coordinate_symbols();
        // {a, v} -> alpha phi E = alpha v-image
        assert_eq!(
            sympl.bracket(&images[&a], &images[&v]),
            Scalar::parse("alpha*phi*E_cl").unwrap()
        );
        // {v, theta} -> -(alpha/2) phi^2 E^2
        assert_eq!(
            sympl.bracket(&images[&v], &images[&theta]),
            Scalar::parse("-1/2*alpha*phi^2*E_cl^2").unwrap()
        );
        // constants are central
        assert_eq!(sympl.bracket(&images[&b], &images[&theta]), Scalar::zero());
    }

    #[test]
    fn suite_is_green() {
        let r = verify_suite();
        for c in &r.checks {
            assert!(c.passed, "{c}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn compose_associative_on_rationals(
            vals in proptest::collection::vec((-12i64..=12, 1i64..=4), 12)
        ) {
            let g = |k: usize| GroupElement::from_rationals(
                vals[k], vals[k+1], vals[k+2], vals[k+3],
            );
            let (g1, g2, g3) = (g(0), g(4), g(8));
            prop_assert_eq!(
                compose(&compose(&g1, &g2), &g3),
                compose(&g1, &compose(&g2, &g3))
            );
        }

        #[test]
        fn bracket_antisymmetric_on_random_polynomials(
            coeffs in proptest::collection::vec((-5i64..=5, 0usize..4, 0usize..4), 1..5)
        ) {
            let coords = *coordinate_symbols();
            let alg = coordinate_poisson(true);
            let mut f = Scalar::zero();
            for (c, i, j) in coeffs {
                let m = Scalar::from_symbol(coords[i]).mul_ref(&Scalar::from_symbol(coords[j]));
                f = f.add_ref(&m.scale(&crate::scalar::GaussRat::from_int(c)));
            }
            prop_assert!(alg.bracket(&f, &f).is_zero());
        }
    }
}
