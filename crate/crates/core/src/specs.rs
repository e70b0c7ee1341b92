//! The algebra specs shipped with the toolkit, written in the declarative
//! text format and cached so that every module shares one instance.
//!
//! Two normalizations coexist. The abstract one uses the dimensionful
//! parameter `lambda` (a length) and carries no factors of i; it is the
//! natural setting for the duality machinery. The physical one is obtained
//! by the substitution `lambda -> i*kappa*alpha` together with the generator
//! rescaling X -> -i*hbar*X, implemented by [`transform_spec`].

use crate::ncalg::{transform_spec, AlgebraSpec, NcError};
use crate::scalar::{symbol, Scalar};
use std::sync::{Arc, OnceLock};

fn cached(cell: &'static OnceLock<Arc<AlgebraSpec>>, build: fn() -> Arc<AlgebraSpec>) -> Arc<AlgebraSpec> {
    cell.get_or_init(build).clone()
}

const COORDINATES: &str = "
algebra coordinates-abstract
gen theta dim(2,-1,0)
gen b dim(0,1,0)
gen a dim(1,0,0)
gen v dim(1,-1,0)
comm [a, v] = lambda * v
comm [a, theta] = lambda * theta
comm [v, theta] = -1/2 * lambda * v^2
";

/// Noncommutative group coordinates (theta, b, a, v), abstract normalization.
pub fn coordinates() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(COORDINATES).expect("builtin spec"))
}

/// Same coordinates with physical commutators [a, v] = i*kappa*alpha*v etc.
pub fn coordinates_physical() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || {
        let ika = Scalar::parse("i*kappa*alpha").unwrap();
        transform_spec(
            &coordinates(),
            "coordinates-physical",
            &|n| n.to_string(),
            &[(symbol("lambda"), ika)],
            &|_| Scalar::one(),
        )
        .expect("builtin transform")
    })
}

const DEFORMED_GENERATORS: &str = "
algebra deformed-galilei-abstract
gen M dim(-2,1,0)
gen P0 dim(0,-1,0)
gen P1 dim(-1,0,0)
gen W dim(0,0,0) exp(-lambda, P1)
gen K dim(-1,1,0)
comm [M, K] = -1/2 * lambda * M^2 * W
comm [P0, K] = -lambda^-1 + lambda^-1 * W
comm [P1, K] = -M * W
comm [W, K] = lambda * M * W^2
";

/// Deformed extended Galilei generators, abstract normalization. `W` is the
/// formal exponential exp(-lambda*P1) entering the closed-form commutators.
pub fn deformed_generators() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(DEFORMED_GENERATORS).expect("builtin spec"))
}

/// Physical form: X' = -i*hbar*X, lambda -> i*kappa*alpha. Generator names
/// gain a `p` suffix; `Wp = exp((kappa/hbar)*alpha*P1p)`.
pub fn deformed_generators_physical() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || {
        let ika = Scalar::parse("i*kappa*alpha").unwrap();
        let minus_i_hbar = Scalar::parse("-i*hbar").unwrap();
        transform_spec(
            &deformed_generators(),
            "deformed-galilei-physical",
            &|n| format!("{n}p"),
            &[(symbol("lambda"), ika)],
            &|g| if g.name == "W" { Scalar::one() } else { minus_i_hbar.clone() },
        )
        .expect("builtin transform")
    })
}

const GALILEI_COEFFICIENTS: &str = "
algebra galilei-coefficients
gen M dim(-2,1,0)
gen P0 dim(0,-1,0)
gen P1 dim(-1,0,0)
";

/// Commutative polynomial algebra in (M, P0, P1); the home of expanded
/// commutator-table values and closed-form series.
pub fn galilei_coefficients() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(GALILEI_COEFFICIENTS).expect("builtin spec"))
}

const GALILEI_COEFFICIENTS_PHYSICAL: &str = "
algebra galilei-coefficients-physical
gen Mp dim(0,0,1)
gen P0p dim(2,-2,1)
gen P1p dim(1,-1,1)
";

pub fn galilei_coefficients_physical() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(GALILEI_COEFFICIENTS_PHYSICAL).expect("builtin spec"))
}

/// At zero deformation both generator tables collapse onto the undeformed
/// extended Galilei brackets: [K, P0] = P1, [K, P1] = M, [K, M] = 0 in the
/// abstract normalization, and [K', P0'] = -i hbar P1',
/// [K', P1'] = -i hbar M', [K', M'] = 0 in the physical one.
pub fn zero_deformation_table_checks(report: &mut crate::report::Report) {
    use crate::ncalg::NCElement;
    report.check("limits", "zero-deformation-abstract-table", || {
        let spec = deformed_generators();
        let target = galilei_coefficients();
        let lam = symbol("lambda");
        let k = spec.gen_index("K").unwrap();
        let cases = [("M", "0"), ("P0", "-P1"), ("P1", "-M")];
        for (gen, want) in cases {
            let idx = spec.gen_index(gen).unwrap();
            let table = spec.comm_table(idx.min(k), idx.max(k)).cloned().unwrap_or_default();
            let entry = NCElement::from_terms(&spec, table);
            let expanded = entry.expand_exponentials(&target, lam, 3)?;
            let at_zero = expanded.map_scalars(|s| s.substitute_zero(lam))?;
            let diff = at_zero.sub(&NCElement::parse(&target, want)?)?;
            if !diff.is_zero() {
                return Ok(Some(format!("[{gen}, K] at zero deformation: {at_zero}")));
            }
        }
        Ok(None)
    });
    report.check("limits", "zero-deformation-physical-table", || {
        let spec = deformed_generators_physical();
        let target = galilei_coefficients_physical();
        let alp = symbol("alpha");
        let k = spec.gen_index("Kp").unwrap();
        let cases = [("Mp", "0"), ("P0p", "i*hbar*P1p"), ("P1p", "i*hbar*Mp")];
        for (gen, want) in cases {
            let idx = spec.gen_index(gen).unwrap();
            let table = spec.comm_table(idx.min(k), idx.max(k)).cloned().unwrap_or_default();
            let entry = NCElement::from_terms(&spec, table);
            let expanded = entry.expand_exponentials(&target, alp, 3)?;
            let at_zero = expanded.map_scalars(|s| s.substitute_zero(alp))?;
            let diff = at_zero.sub(&NCElement::parse(&target, want)?)?;
            if !diff.is_zero() {
                return Ok(Some(format!("[{gen}, Kp] at zero deformation: {at_zero}")));
            }
        }
        Ok(None)
    });
}

const WEYL_A: &str = "
algebra weyl-a
gen q_A dim(1,0,0)
gen p_A dim(1,-1,1)
gen E_A dim(0,0,0) exp(alpha, p_A)
comm [q_A, p_A] = i*kappa
comm [q_A, E_A] = i*kappa*alpha * E_A
";

/// Frame-particle phase space with the exponential E_A = exp(alpha*p_A).
pub fn weyl_a() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(WEYL_A).expect("builtin spec"))
}

const WEYL_A_PLAIN: &str = "
algebra weyl-a-plain
gen q_A dim(1,0,0)
gen p_A dim(1,-1,1)
comm [q_A, p_A] = i*kappa
";

pub fn weyl_a_plain() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(WEYL_A_PLAIN).expect("builtin spec"))
}

const WEYL_B: &str = "
algebra weyl-b
gen q_B dim(1,0,0)
gen p_B dim(1,-1,1)
gen H_B dim(0,0,0) exp(1/4*kappa*alpha*hbar^-1, p_B)
comm [q_B, p_B] = i*hbar
comm [q_B, H_B] = 1/4*i*kappa*alpha * H_B
";

/// Transformed-particle phase space. H_B is the quarter-step exponential
/// exp((kappa*alpha/4*hbar)*p_B), so every exponential appearing in the
/// realization and in the Casimirs is an integer power of H_B.
pub fn weyl_b() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(WEYL_B).expect("builtin spec"))
}

const WEYL_B_PLAIN: &str = "
algebra weyl-b-plain
gen q_B dim(1,0,0)
gen p_B dim(1,-1,1)
comm [q_B, p_B] = i*hbar
";

pub fn weyl_b_plain() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(WEYL_B_PLAIN).expect("builtin spec"))
}

const TWO_PARTICLE: &str = "
algebra two-particle
gen q_A dim(1,0,0)
gen p_A dim(1,-1,1)
gen E_A dim(0,0,0) exp(alpha, p_A)
gen q_B dim(1,0,0)
gen p_B dim(1,-1,1)
gen H_B dim(0,0,0) exp(1/4*kappa*alpha*hbar^-1, p_B)
comm [q_A, p_A] = i*kappa
comm [q_A, E_A] = i*kappa*alpha * E_A
comm [q_B, p_B] = i*hbar
comm [q_B, H_B] = 1/4*i*kappa*alpha * H_B
";

/// Both particles, mutually commuting blocks, exponentials included.
pub fn two_particle() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(TWO_PARTICLE).expect("builtin spec"))
}

const TWO_PARTICLE_PLAIN: &str = "
algebra two-weyl
gen q_A dim(1,0,0)
gen p_A dim(1,-1,1)
gen q_B dim(1,0,0)
gen p_B dim(1,-1,1)
comm [q_A, p_A] = i*kappa
comm [q_B, p_B] = i*hbar
";

/// Plain two-particle Weyl algebra. Hosts both the dynamical seven-element
/// basis (p_A read as the renormalized momentum) and first-order reductions
/// (p_A read as the natural momentum).
pub fn two_particle_plain() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(TWO_PARTICLE_PLAIN).expect("builtin spec"))
}

const CLASSICAL_A_QUANTUM_B: &str = "
algebra classical-a-quantum-b
gen q_A dim(1,0,0)
gen p_A dim(1,-1,1)
gen E_A dim(0,0,0) exp(alpha, p_A)
gen q_B dim(1,0,0)
gen p_B dim(1,-1,1)
gen H_B dim(0,0,0) exp(1/4*kappa*alpha*hbar^-1, p_B)
comm [q_B, p_B] = i*hbar
comm [q_B, H_B] = 1/4*i*kappa*alpha * H_B
";

/// kappa -> 0 hybrid: the frame particle's phase space is commutative (its
/// exponential survives as a classical function) while particle B stays
/// quantum.
pub fn classical_a_quantum_b() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(CLASSICAL_A_QUANTUM_B).expect("builtin spec"))
}

const CLASSICAL_A_QUANTUM_B_PLAIN: &str = "
algebra classical-a-quantum-b-plain
gen q_A dim(1,0,0)
gen p_A dim(1,-1,1)
gen q_B dim(1,0,0)
gen p_B dim(1,-1,1)
comm [q_B, p_B] = i*hbar
";

pub fn classical_a_quantum_b_plain() -> Arc<AlgebraSpec> {
    static CELL: OnceLock<Arc<AlgebraSpec>> = OnceLock::new();
    cached(&CELL, || AlgebraSpec::parse(CLASSICAL_A_QUANTUM_B_PLAIN).expect("builtin spec"))
}

/// Dimensional homogeneity of every shipped commutator table.
pub fn check_all_dimensions() -> Result<(), NcError> {
    for spec in [
        coordinates(),
        coordinates_physical(),
        deformed_generators(),
        deformed_generators_physical(),
        galilei_coefficients(),
        galilei_coefficients_physical(),
        weyl_a(),
        weyl_a_plain(),
        weyl_b(),
        weyl_b_plain(),
        two_particle(),
        two_particle_plain(),
        classical_a_quantum_b(),
        classical_a_quantum_b_plain(),
    ] {
        spec.check_dimensions().map_err(NcError::Parse)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::NCElement;

    #[test]
    fn all_shipped_tables_are_dimensionally_homogeneous() {
        check_all_dimensions().unwrap();
    }

    #[test]
    fn physical_coordinate_table_matches_direct_form() {
        let spec = coordinates_physical();
        let a = NCElement::generator(&spec, "a").unwrap();
        let v = NCElement::generator(&spec, "v").unwrap();
        let expect = NCElement::parse(&spec, "i*kappa*alpha*v").unwrap();
        assert_eq!(a.commutator(&v).unwrap(), expect);
    }

    #[test]
    fn physical_generator_table_matches_deformed_relations() {
        let spec = deformed_generators_physical();
        let k = NCElement::generator(&spec, "Kp").unwrap();
        let p1 = NCElement::generator(&spec, "P1p").unwrap();
        let p0 = NCElement::generator(&spec, "P0p").unwrap();
        let m = NCElement::generator(&spec, "Mp").unwrap();
        let w = NCElement::generator(&spec, "Wp").unwrap();
        // [K', P1'] = -i hbar W' M'
        assert_eq!(
            k.commutator(&p1).unwrap(),
            NCElement::parse(&spec, "-i*hbar*Mp*Wp").unwrap()
        );
        // [K', P0'] = i hbar^2/(kappa alpha) (1 - W')
        assert_eq!(
            k.commutator(&p0).unwrap(),
            NCElement::parse(&spec, "i*hbar^2*kappa^-1*alpha^-1 - i*hbar^2*kappa^-1*alpha^-1*Wp")
                .unwrap()
        );
        // [K', M'] = (i/2) kappa alpha M'^2 W'
        assert_eq!(
            k.commutator(&m).unwrap(),
            NCElement::parse(&spec, "1/2*i*kappa*alpha*Mp^2*Wp").unwrap()
        );
        // [W', K'] = i kappa alpha M' W'^2
        assert_eq!(
            w.commutator(&k).unwrap(),
            NCElement::parse(&spec, "i*kappa*alpha*Mp*Wp^2").unwrap()
        );
    }
}
