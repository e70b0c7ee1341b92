use super::*;
use crate::specs;
use proptest::prelude::*;

fn el(spec: &Arc<AlgebraSpec>, text: &str) -> NCElement {
    NCElement::parse(spec, text).unwrap()
}

#[test]
fn product_reorders_against_the_table() {
    let spec = specs::coordinates_physical();
    let v = el(&spec, "v");
    let a = el(&spec, "a");
    // v*a = a*v - i kappa alpha v
    assert_eq!(v.mul(&a).unwrap(), el(&spec, "a*v - i*kappa*alpha*v"));
}

#[test]
fn ordered_input_is_a_fixed_point() {
    let spec = specs::coordinates_physical();
    let theta = el(&spec, "theta");
    let b = el(&spec, "b");
    assert_eq!(theta.mul(&b).unwrap(), el(&spec, "theta*b"));
}

#[test]
fn reordering_difference_is_the_commutator() {
    let spec = specs::coordinates_physical();
    let v = el(&spec, "v");
    let theta = el(&spec, "theta");
    let diff = v.mul(&theta).unwrap().sub(&theta.mul(&v).unwrap()).unwrap();
    assert_eq!(diff, el(&spec, "-1/2*i*kappa*alpha*v^2"));
}

#[test]
fn central_generator_commutes() {
    let spec = specs::coordinates_physical();
    let b = el(&spec, "b");
    let theta = el(&spec, "theta");
    assert!(b.commutator(&theta).unwrap().is_zero());
}

#[test]
fn exponential_commutator_matches_series_expansion() {
    // [q, E] = i kappa alpha E encoded directly; the oracle expands
    // [q, p^n] = i kappa n p^(n-1) termwise on the series of exp(alpha*p).
    let spec = specs::weyl_a();
    let plain = specs::weyl_a_plain();
    let q = el(&spec, "q_A");
    let e_gen = el(&spec, "E_A");
    let encoded = q.commutator(&e_gen).unwrap();
    let order = 6;
    let encoded_series = encoded.expand_exponentials(&plain, crate::scalar::alpha(), order).unwrap();

    let qp = el(&plain, "q_A");
    let p = el(&plain, "p_A");
    let mut oracle = NCElement::zero(&plain);
    let mut factorial = Scalar::one();
    let mut p_pow = NCElement::one(&plain);
    for n in 1..=(order as u32 + 1) {
        factorial = factorial.mul_ref(&Scalar::from_int(n as i64));
        // [q, p^n] = i kappa n p^(n-1)
        let coeff = Scalar::parse("i*kappa").unwrap()
            .mul_ref(&Scalar::from_int(n as i64))
            .mul_ref(&Scalar::sym_pow("alpha", n as i32))
            .div_monomial(&factorial)
            .unwrap();
        oracle = oracle.add(&p_pow.scale(&coeff)).unwrap();
        p_pow = p_pow.mul(&p).unwrap();
    }
    let oracle = oracle.truncate_degree(crate::scalar::alpha(), order);
    assert_eq!(encoded_series, oracle);
    // and the brute-force commutator of the series agrees too
    let e_series = exp_series(&p, &Scalar::sym("alpha"), order as u32 + 1).unwrap();
    let brute = qp.commutator(&e_series).unwrap().truncate_degree(crate::scalar::alpha(), order);
    assert_eq!(brute, oracle);
}

#[test]
fn exponential_inverse_cancels() {
    let spec = specs::weyl_a();
    let e_gen = el(&spec, "E_A");
    let e_inv = NCElement::gen_pow(&spec, spec.gen_index("E_A").unwrap(), -1);
    assert_eq!(e_gen.mul(&e_inv).unwrap(), NCElement::one(&spec));
    // q E^-1 = E^-1 q - i kappa alpha E^-1
    let q = el(&spec, "q_A");
    let got = q.mul(&e_inv).unwrap();
    let expect = e_inv
        .mul(&q)
        .unwrap()
        .sub(&e_inv.scale(&Scalar::parse("i*kappa*alpha").unwrap()))
        .unwrap();
    assert_eq!(got, expect);
}

#[test]
fn substitution_of_commutative_shift() {
    let spec = specs::coordinates_physical();
    let weyl = specs::weyl_a();
    let a_sq = el(&spec, "a^2");
    let image = el(&weyl, "q_A + gamma");
    let subst = Substitution::new(&spec, &weyl).set(spec.gen_index("a").unwrap(), image);
    // the other generators never occur in a^2, so sparse images suffice
    let got = subst.apply(&a_sq).unwrap();
    assert_eq!(got, el(&weyl, "q_A^2 + 2*gamma*q_A + gamma^2"));
}

#[test]
fn substitution_of_exponential_image() {
    let spec = specs::coordinates_physical();
    let weyl = specs::weyl_a();
    let v_sq = el(&spec, "v^2");
    let subst =
        Substitution::new(&spec, &weyl).set(spec.gen_index("v").unwrap(), el(&weyl, "phi*E_A"));
    assert_eq!(subst.apply(&v_sq).unwrap(), el(&weyl, "phi^2*E_A^2"));
}

#[test]
fn substituted_commutator_matches_image_of_relation() {
    // images: v -> phi E, theta -> (phi/4)(E q + q E); then [v, theta] image
    // must equal the image of -(i/2) kappa alpha v^2.
    let weyl = specs::weyl_a();
    let v_img = el(&weyl, "phi*E_A");
    let theta_img = el(&weyl, "1/4*phi*(E_A*q_A + q_A*E_A)");
    let lhs = v_img.commutator(&theta_img).unwrap();
    let rhs = el(&weyl, "-1/2*i*kappa*alpha*phi^2*E_A^2");
    assert_eq!(lhs, rhs);
}

#[test]
fn substitution_without_an_image_is_rejected() {
    let spec = specs::coordinates_physical();
    let weyl = specs::weyl_a();
    let subst = Substitution::new(&spec, &weyl)
        .set(spec.gen_index("a").unwrap(), el(&weyl, "q_A + gamma"));
    let needs_v = el(&spec, "a*v");
    match subst.apply(&needs_v) {
        Err(NcError::MissingImage { gen }) => assert_eq!(gen, "v"),
        other => panic!("expected a missing image, got {other:?}"),
    }
}

#[test]
fn jacobi_holds_for_shipped_specs() {
    for spec in [
        specs::coordinates(),
        specs::coordinates_physical(),
        specs::deformed_generators(),
        specs::deformed_generators_physical(),
        specs::weyl_a(),
        specs::weyl_b(),
        specs::two_particle(),
        specs::two_particle_plain(),
        specs::classical_a_quantum_b(),
    ] {
        let violations = jacobi_verify(&spec).unwrap();
        assert!(violations.is_empty(), "{}: {:?}", spec.name(), violations[0].triple);
    }
}

#[test]
fn corrupted_table_fails_jacobi() {
    // flip the sign of [P1, K] relative to the consistent table
    let text = "
algebra corrupted
gen M dim(-2,1,0)
gen P0 dim(0,-1,0)
gen P1 dim(-1,0,0)
gen W dim(0,0,0) exp(-lambda, P1)
gen K dim(-1,1,0)
comm [M, K] = -1/2 * lambda * M^2 * W
comm [P0, K] = -lambda^-1 + lambda^-1 * W
comm [P1, K] = M * W
comm [W, K] = lambda * M * W^2
";
    let spec = AlgebraSpec::parse(text).unwrap();
    let violations = jacobi_verify(&spec).unwrap();
    assert!(!violations.is_empty());
    // the bare Jacobi sum is blind to this flip (the non-boost sector is
    // abelian); the exponential-coherence check pins it to (K, P1, W)
    assert!(violations
        .iter()
        .any(|v| v.triple == ("K".to_string(), "P1".to_string(), "W".to_string())));
}

#[test]
fn corrupted_coordinate_table_fails_plain_jacobi() {
    let text = "
algebra corrupted-coordinates
gen theta dim(2,-1,0)
gen b dim(0,1,0)
gen a dim(1,0,0)
gen v dim(1,-1,0)
comm [a, v] = -lambda * v
comm [a, theta] = lambda * theta
comm [v, theta] = -1/2 * lambda * v^2
";
    let spec = AlgebraSpec::parse(text).unwrap();
    let violations = jacobi_verify(&spec).unwrap();
    assert!(violations.iter().any(|v| v.triple
        == ("theta".to_string(), "a".to_string(), "v".to_string())));
}

#[test]
fn runaway_rewriting_hits_the_budget() {
    // a table whose corrections raise the degree cannot terminate
    let text = "
algebra runaway
gen x dim(0,0,0)
gen y dim(0,0,0)
comm [x, y] = x^2*y^2
";
    let spec = AlgebraSpec::parse(text).unwrap();
    let x3 = el(&spec, "x^3");
    let y3 = el(&spec, "y^3");
    match y3.mul_with_budget(&x3, SwapOrder::Leftmost, 2_000) {
        Err(NcError::RewriteBudgetExceeded { .. }) => {}
        other => panic!("expected budget exhaustion, got {other:?}"),
    }
}

#[test]
fn canonical_form_is_stable_under_rebuild() {
    let s = Scalar::parse("1/2*i*kappa - 3*alpha^2*m_B^-1 + kappa").unwrap();
    let mut rebuilt = Scalar::zero();
    for (m, c) in s.terms() {
        rebuilt = rebuilt.add_ref(&Scalar::term(c.clone(), m.clone()));
    }
    assert_eq!(rebuilt, s);
    assert_eq!(rebuilt.to_string(), s.to_string());
}

#[test]
fn span_solve_disjoint_supports() {
    let spec = specs::two_particle_plain();
    let qa = el(&spec, "q_A");
    let pb = el(&spec, "p_B");
    match span_solve(&[qa], &[pb]).unwrap() {
        SpanOutcome::NotInSpan { residual, .. } => assert_eq!(residual, el(&spec, "q_A")),
        SpanOutcome::Solved(_) => panic!("q_A is not a multiple of p_B"),
    }
}

#[test]
fn span_solve_recovers_exact_coefficients() {
    let spec = specs::two_particle_plain();
    let b1 = el(&spec, "q_A*p_B");
    let b2 = el(&spec, "p_A*q_B + 2*q_A*p_B");
    let target = b1
        .scale(&Scalar::parse("m_B*m_A^-1").unwrap())
        .add(&b2.scale(&Scalar::parse("-1/4*kappa*hbar^-1").unwrap()))
        .unwrap();
    match span_solve(&[target], &[b1, b2]).unwrap() {
        SpanOutcome::Solved(coeffs) => {
            assert!(coeffs[0][0].eq_scalar(&Scalar::parse("m_B*m_A^-1").unwrap()));
            assert!(coeffs[0][1].eq_scalar(&Scalar::parse("-1/4*kappa*hbar^-1").unwrap()));
        }
        other => panic!("expected solution, got {other:?}"),
    }
}

#[test]
fn dependent_basis_is_reported() {
    let spec = specs::two_particle_plain();
    let b1 = el(&spec, "q_A");
    let b2 = el(&spec, "2*q_A");
    match span_solve(&[el(&spec, "q_A")], &[b1, b2]) {
        Err(NcError::DependentBasis { .. }) => {}
        other => panic!("expected dependent basis, got {other:?}"),
    }
}

#[test]
fn deformed_table_reduces_to_undeformed_at_zero_deformation() {
    // expand every table entry and send lambda -> 0
    let spec = specs::deformed_generators();
    let target = specs::galilei_coefficients();
    let lambda = crate::scalar::symbol("lambda");
    let expect = |t: &str| el(&target, t);
    let k = spec.gen_index("K").unwrap();
    let cases = [
        (spec.gen_index("M").unwrap(), expect("0")),
        (spec.gen_index("P0").unwrap(), expect("-P1")),
        (spec.gen_index("P1").unwrap(), expect("-M")),
    ];
    for (idx, want) in cases {
        let table = spec.comm_table(idx.min(k), idx.max(k)).cloned().unwrap_or_default();
        let entry = NCElement::from_terms(&spec, table);
        let expanded = entry.expand_exponentials(&target, lambda, 3).unwrap();
        let at_zero = expanded.map_scalars(|s| s.substitute_zero(lambda)).unwrap();
        assert_eq!(at_zero, want, "generator index {idx}");
    }
}

fn arb_element(spec: Arc<AlgebraSpec>, max_gen_deg: i32) -> impl Strategy<Value = NCElement> {
    let n = spec.num_gens();
    let coeff = prop_oneof![
        (-4i64..=4).prop_map(Scalar::from_int),
        (-3i64..=3).prop_map(|k| Scalar::i().mul_ref(&Scalar::from_int(k))),
        Just(Scalar::sym("kappa")),
        Just(Scalar::sym("alpha")),
    ];
    let term = (proptest::collection::vec(0..=max_gen_deg, n), coeff);
    proptest::collection::vec(term, 0..4).prop_map(move |terms| {
        let mut map = TermMap::new();
        for (exps, c) in terms {
            // keep total degree small so products stay quick
            let total: i32 = exps.iter().sum();
            if total > 4 {
                continue;
            }
            add_term(&mut map, Expo(exps), c);
        }
        NCElement::from_terms(&spec, map)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutator_with_self_vanishes(x in arb_element(specs::coordinates_physical(), 2)) {
        prop_assert!(x.commutator(&x).unwrap().is_zero());
    }

    #[test]
    fn multiplication_is_associative(
        x in arb_element(specs::coordinates_physical(), 2),
        y in arb_element(specs::coordinates_physical(), 2),
        z in arb_element(specs::coordinates_physical(), 2),
    ) {
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn weyl_multiplication_is_associative(
        x in arb_element(specs::weyl_a(), 2),
        y in arb_element(specs::weyl_a(), 2),
        z in arb_element(specs::weyl_a(), 2),
    ) {
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn normal_ordering_is_confluent(
        x in arb_element(specs::coordinates_physical(), 2),
        y in arb_element(specs::coordinates_physical(), 2),
        seed in any::<u64>(),
    ) {
        let leftmost = x.mul_with(&y, SwapOrder::Leftmost).unwrap();
        let rightmost = x.mul_with(&y, SwapOrder::Rightmost).unwrap();
        let random = x.mul_with(&y, SwapOrder::Seeded(seed)).unwrap();
        prop_assert_eq!(&leftmost, &rightmost);
        prop_assert_eq!(&leftmost, &random);
    }

    #[test]
    fn scalar_ring_axioms(
        a in proptest::collection::vec((-6i64..=6, 0u8..3u8, -2i32..=2), 0..4),
        b in proptest::collection::vec((-6i64..=6, 0u8..3u8, -2i32..=2), 0..4),
        c in proptest::collection::vec((-6i64..=6, 0u8..3u8, -2i32..=2), 0..4),
    ) {
        let build = |spec: &[(i64, u8, i32)]| {
            let syms = ["alpha", "kappa", "m_B"];
            let mut s = Scalar::zero();
            for (k, which, e) in spec {
                let m = Scalar::sym_pow(syms[*which as usize], *e);
                s = s.add_ref(&m.scale(&crate::scalar::GaussRat::from_int(*k)));
            }
            s
        };
        let (x, y, z) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(x.mul_ref(&y), y.mul_ref(&x));
        prop_assert_eq!(x.add_ref(&y), y.add_ref(&x));
        prop_assert_eq!(x.mul_ref(&y).mul_ref(&z), x.mul_ref(&y.mul_ref(&z)));
        prop_assert_eq!(x.add_ref(&y).add_ref(&z), x.add_ref(&y.add_ref(&z)));
        prop_assert_eq!(
            x.mul_ref(&y.add_ref(&z)),
            x.mul_ref(&y).add_ref(&x.mul_ref(&z))
        );
    }
}
