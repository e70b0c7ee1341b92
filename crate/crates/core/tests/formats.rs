//! The declarative spec format and the export formats, exercised end to end.

use qgal_core::hopf::{e_tensor, EMethod};
use qgal_core::ncalg::{AlgebraSpec, NCElement, NcError};
use qgal_core::scalar::Scalar;

#[test]
fn spec_text_format_round_trip() {
    let text = "
# a one-particle phase space with an exponential
algebra formats-demo
symbol rate_demo dim(-1,1,-1)
gen q dim(1,0,0)
gen p dim(1,-1,1)
gen X dim(0,0,0) exp(rate_demo, p)
comm [q, p] = i*kappa
comm [q, X] = i*kappa*rate_demo * X
";
    let spec = AlgebraSpec::parse(text).unwrap();
    assert_eq!(spec.num_gens(), 3);
    spec.check_dimensions().unwrap();
    let q = NCElement::generator(&spec, "q").unwrap();
    let x = NCElement::generator(&spec, "X").unwrap();
    let expect = NCElement::parse(&spec, "i*kappa*rate_demo*X").unwrap();
    assert_eq!(q.commutator(&x).unwrap(), expect);
}

#[test]
fn unordered_table_entries_are_rejected() {
    let text = "
algebra bad-order
gen x dim(0,0,0)
gen y dim(0,0,0)
comm [x, y] = y*x
";
    match AlgebraSpec::parse(text) {
        Err(NcError::Parse(msg)) => assert!(msg.contains("normal-ordered"), "{msg}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn element_display_parses_back() {
    let spec = qgal_core::specs::weyl_a();
    let x = NCElement::parse(&spec, "(q_A + phi*E_A)^2 - 1/3*i*alpha^-2*p_A*E_A^-1").unwrap();
    let back = NCElement::parse(&spec, &x.to_string()).unwrap();
    assert_eq!(x, back);
}

#[test]
fn scalar_display_parses_back() {
    let s = Scalar::parse("3/4 - 2*i*kappa^2*alpha^-1 + phi*m_B^3").unwrap();
    assert_eq!(Scalar::parse(&s.to_string()).unwrap(), s);
}

#[test]
fn tensor_listings_are_sorted_and_complete() {
    let e = e_tensor(2, EMethod::Recurrence).unwrap();
    let text = e.to_text();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), e.len());
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted, "listing must come out sorted");
    // unit coproduct: the only entry with a trivial lower index
    assert!(text.contains("(0 0 0 0 | 0 0 0 0 | 0 0 0 0) -> 1"));
    let json = e.to_json();
    assert!(json.starts_with('[') && json.ends_with(']'));
    assert_eq!(json.matches("\"lower\"").count(), e.len());
}
