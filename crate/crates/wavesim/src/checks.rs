//! Numerical validation scenarios: unitarity, semiclassical fidelity and its
//! convergence under width refinement, the controlled-superposition
//! residual, composition phases, and grid-refinement stability.

use crate::{Constants, GaussianSpec, Grid1d, WaveError, Wavepacket2d};

pub struct SimCheck {
    pub key: String,
    pub passed: bool,
    pub detail: String,
}

fn check(key: &str, passed: bool, detail: String) -> SimCheck {
    SimCheck { key: key.to_string(), passed, detail }
}

/// Norm drift stays below 1e-10 over 100 composed conditional operations.
pub fn unitarity_check() -> Result<SimCheck, WaveError> {
    let ga = Grid1d::new(256, -40.0, 40.0)?;
    let gb = Grid1d::new(256, -36.0, 36.0)?;
    let mut w = Wavepacket2d::product(
        ga,
        gb,
        Constants::default(),
        &GaussianSpec::new(0.0, 1.0, 2.0),
        &GaussianSpec::new(0.0, 0.0, 1.0),
    )?;
    let mut worst = 0.0f64;
    for k in 0..25 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        w.conditional_translation(sign)?;
        w.conditional_boost(0.2, sign)?;
        w.conditional_boost(0.2, -sign)?;
        w.conditional_translation(-sign)?;
        worst = worst.max((w.norm() - 1.0).abs());
    }
    Ok(check(
        "unitarity-drift",
        worst < 1e-10,
        format!("max |norm - 1| = {worst:.3e} over 100 operations"),
    ))
}

pub struct BoostScenario {
    pub consts: Constants,
    pub grid_a: Grid1d,
    pub grid_b: Grid1d,
    pub p0: f64,
    pub sigma_p: f64,
    pub t: f64,
}

impl BoostScenario {
    pub fn base() -> Result<BoostScenario, WaveError> {
        Ok(BoostScenario {
            consts: Constants { hbar: 1.0, kappa: 1.0, m_a: 10.0, m_b: 1.0 },
            grid_a: Grid1d::new(512, -300.0, 300.0)?,
            grid_b: Grid1d::new(512, -12.0, 12.0)?,
            p0: 2.0,
            sigma_p: 0.02,
            t: 1.0,
        })
    }

    pub fn frame_spec(&self, p_center: f64) -> GaussianSpec {
        // momentum width sigma_p corresponds to position width kappa/(2 sigma_p)
        GaussianSpec::new(0.0, p_center, self.consts.kappa / (2.0 * self.sigma_p))
    }

    /// |<exact | per-branch classical>| for a single- or two-branch frame.
    pub fn fidelity(&self, branches: &[f64], sigma_xb: f64) -> Result<f64, WaveError> {
        Ok(self.semiclassical_compare(branches, sigma_xb)?.0)
    }

    /// Fidelity between the conditional boost and the classical-parameter
    /// action, with the per-branch breakdown (each branch compared alone).
    pub fn semiclassical_compare(
        &self,
        branches: &[f64],
        sigma_xb: f64,
    ) -> Result<(f64, Vec<f64>), WaveError> {
        let spec_b = GaussianSpec::new(0.0, 0.0, sigma_xb);
        let frame: Vec<GaussianSpec> = branches.iter().map(|&p| self.frame_spec(p)).collect();
        let mut exact = if frame.len() == 1 {
            Wavepacket2d::product(self.grid_a, self.grid_b, self.consts, &frame[0], &spec_b)?
        } else {
            Wavepacket2d::superposition(self.grid_a, self.grid_b, self.consts, &frame, &spec_b)?
        };
        let approx = self.branchwise_classical(&frame, &spec_b)?;
        exact.conditional_boost(self.t, 1.0)?;
        let total = exact.fidelity(&approx);
        let mut per_branch = Vec::with_capacity(frame.len());
        for spec_a in &frame {
            let mut one =
                Wavepacket2d::product(self.grid_a, self.grid_b, self.consts, spec_a, &spec_b)?;
            let classical = self.branchwise_classical(std::slice::from_ref(spec_a), &spec_b)?;
            one.conditional_boost(self.t, 1.0)?;
            per_branch.push(one.fidelity(&classical));
        }
        Ok((total, per_branch))
    }

    /// 2-norm of (exact - branchwise classical).
    pub fn residual(&self, branches: &[f64], sigma_xb: f64) -> Result<f64, WaveError> {
        let spec_b = GaussianSpec::new(0.0, 0.0, sigma_xb);
        let frame: Vec<GaussianSpec> = branches.iter().map(|&p| self.frame_spec(p)).collect();
        let mut exact = if frame.len() == 1 {
            Wavepacket2d::product(self.grid_a, self.grid_b, self.consts, &frame[0], &spec_b)?
        } else {
            Wavepacket2d::superposition(self.grid_a, self.grid_b, self.consts, &frame, &spec_b)?
        };
        let approx = self.branchwise_classical(&frame, &spec_b)?;
        exact.conditional_boost(self.t, 1.0)?;
        let cell = self.grid_a.dx() * self.grid_b.dx();
        let mut acc = 0.0;
        for (x, y) in exact.amps.iter().zip(&approx.amps) {
            acc += (x - y).norm_sqr();
        }
        Ok((acc * cell).sqrt())
    }

    /// sum_i |chi_i> (x) B(p_i/m_A) |psi> / sqrt(branches)
    fn branchwise_classical(
        &self,
        frame: &[GaussianSpec],
        spec_b: &GaussianSpec,
    ) -> Result<Wavepacket2d, WaveError> {
        let mut acc: Option<Wavepacket2d> = None;
        for spec_a in frame {
            let mut branch =
                Wavepacket2d::product(self.grid_a, self.grid_b, self.consts, spec_a, spec_b)?;
            branch.classical_boost_b(spec_a.center_p / self.consts.m_a, self.t)?;
            acc = Some(match acc {
                None => branch,
                Some(mut a) => {
                    for (x, y) in a.amps.iter_mut().zip(&branch.amps) {
                        *x += y;
                    }
                    a
                }
            });
        }
        let mut out = acc.expect("at least one branch");
        let scale = 1.0 / (frame.len() as f64).sqrt();
        for c in &mut out.amps {
            *c *= scale;
        }
        Ok(out)
    }
}

/// Fidelity of the conditional boost against the classical-parameter boost
/// at momentum ratio sigma_p/p0 = 0.01, monotone loss when the frame packet
/// widens, and monotone convergence to 1 as the frame packet sharpens
/// (the semiclassical condition constrains the frame state).
pub fn semiclassical_fidelity_checks() -> Result<Vec<SimCheck>, WaveError> {
    let sc = BoostScenario::base()?;
    let mut out = Vec::new();

    let base = sc.fidelity(&[sc.p0], 1.0)?;
    out.push(check(
        "semiclassical-fidelity",
        base >= 0.999,
        format!("fidelity {base:.8} at sigma_p/p0 = 0.01"),
    ));

    let wide = sc.clone_with_sigma(2.0 * sc.sigma_p);
    let doubled = wide.fidelity(&[sc.p0], 1.0)?;
    out.push(check(
        "semiclassical-fidelity-monotone-in-width",
        doubled < base,
        format!("fidelity {base:.8} -> {doubled:.8} when the momentum width doubles"),
    ));

    // frame-width refinement: the defect shrinks like sigma_p^2
    let f1 = sc.clone_with_sigma(4.0 * sc.sigma_p).fidelity(&[sc.p0], 1.0)?;
    let f2 = sc.clone_with_sigma(2.0 * sc.sigma_p).fidelity(&[sc.p0], 1.0)?;
    let f3 = base;
    let monotone = f1 < f2 && f2 < f3;
    let extrapolated = f3 + (f3 - f2) / 3.0; // quadratic defect: each halving removes 3/4
    out.push(check(
        "semiclassical-fidelity-convergence",
        monotone && (1.0 - extrapolated).abs() < 1e-4,
        format!(
            "fidelities ({f1:.8}, {f2:.8}, {f3:.8}) under width halving; \
             zero-width extrapolation {extrapolated:.8}"
        ),
    ));
    Ok(out)
}

impl BoostScenario {
    pub fn clone_with_sigma(&self, sigma_p: f64) -> BoostScenario {
        BoostScenario {
            consts: self.consts,
            grid_a: self.grid_a,
            grid_b: self.grid_b,
            p0: self.p0,
            sigma_p,
            t: self.t,
        }
    }
}

/// The boost of a two-branch frame superposition agrees with the controlled
/// superposition of classical boosts, with monotone residual decay.
pub fn superposition_checks() -> Result<Vec<SimCheck>, WaveError> {
    let sc = BoostScenario::base()?;
    let mut out = Vec::new();

    let base = sc.residual(&[sc.p0, -sc.p0], 1.0)?;
    out.push(check(
        "superposition-residual",
        base <= 1e-2,
        format!("residual {base:.3e} at sigma_p/p0 = 0.01"),
    ));

    let scan: Vec<f64> = [4.0, 3.0, 2.0, 1.0]
        .iter()
        .map(|&f| sc.clone_with_sigma(f * sc.sigma_p).residual(&[sc.p0, -sc.p0], 1.0))
        .collect::<Result<_, _>>()?;
    let monotone = scan.windows(2).all(|p| p[1] < p[0]);
    let listed: Vec<String> = scan.iter().map(|r| format!("{r:.3e}")).collect();
    out.push(check(
        "superposition-residual-monotone",
        monotone,
        format!("residuals [{}] over the frame-width scan", listed.join(", ")),
    ));

    // degenerate branches: same boost on both, so the residual sits at the
    // single-branch level; position-separated to keep them orthogonal
    let sc2 = sc.clone_with_sigma(0.04);
    let spec_b = GaussianSpec::new(0.0, 0.0, 1.0);
    let sep = 66.0;
    let mut left = sc2.frame_spec(sc2.p0);
    left.center_x = -sep;
    let mut right = sc2.frame_spec(sc2.p0);
    right.center_x = sep;
    let frame = [left, right];
    let mut exact =
        Wavepacket2d::superposition(sc2.grid_a, sc2.grid_b, sc2.consts, &frame, &spec_b)?;
    let approx = sc2.branchwise_classical(&frame, &spec_b)?;
    exact.conditional_boost(sc2.t, 1.0)?;
    let cell = sc2.grid_a.dx() * sc2.grid_b.dx();
    let degenerate = {
        let mut acc = 0.0;
        for (x, y) in exact.amps.iter().zip(&approx.amps) {
            acc += (x - y).norm_sqr();
        }
        (acc * cell).sqrt()
    };
    let single = sc2.residual(&[sc2.p0], 1.0)?;
    out.push(check(
        "superposition-degenerate-branches",
        (degenerate - single).abs() <= 0.1 * single + 1e-9,
        format!("degenerate-branch residual {degenerate:.3e} vs single-branch {single:.3e}"),
    ));
    Ok(out)
}

/// Central-phase composition with classical parameters: translation, inverse
/// boost, inverse translation, boost leaves the state invariant up to the
/// phase v*a*m_B/hbar.
pub fn composition_phase_classical() -> Result<SimCheck, WaveError> {
    let consts = Constants { hbar: 1.0, kappa: 1.0, m_a: 10.0, m_b: 1.0 };
    let ga = Grid1d::new(128, -30.0, 30.0)?;
    let gb = Grid1d::new(512, -20.0, 20.0)?;
    let w0 = Wavepacket2d::product(
        ga,
        gb,
        consts,
        &GaussianSpec::new(0.0, 0.0, 2.0),
        &GaussianSpec::new(0.0, 0.0, 1.0),
    )?;
    let (a, v) = (1.5, 0.7);
    let mut w = w0.clone();
    w.classical_boost_b(v, 0.0)?;
    w.classical_translation_b(-a)?;
    w.classical_boost_b(-v, 0.0)?;
    w.classical_translation_b(a)?;
    let ov = w0.overlap(&w);
    let expected = v * a * consts.m_b / consts.hbar;
    let rel = (ov.arg() - expected).abs() / expected.abs();
    let mag_ok = (ov.norm() - 1.0).abs() < 1e-10;
    Ok(check(
        "composition-phase-classical",
        rel < 1e-6 && mag_ok,
        format!("measured phase {:.9}, expected {expected:.9}, relative error {rel:.3e}", ov.arg()),
    ))
}

/// The same composition with conditional operators on a sharp frame state:
/// the measured phase approaches <x_A><p_A> m_B / (m_A hbar).
pub fn composition_phase_conditional() -> Result<SimCheck, WaveError> {
    let consts = Constants { hbar: 1.0, kappa: 1.0, m_a: 1.0e6, m_b: 1.0 };
    let ga = Grid1d::new(512, -14.0, 34.0)?;
    let gb = Grid1d::new(512, -24.0, 24.0)?;
    let (x0, p0) = (10.0, 12.0);
    let w0 = Wavepacket2d::product(
        ga,
        gb,
        consts,
        &GaussianSpec::new(x0, p0, 1.0),
        &GaussianSpec::new(0.0, 0.0, 1.0),
    )?;
    let mut w = w0.clone();
    w.conditional_boost(0.0, 1.0)?;
    w.conditional_translation(-1.0)?;
    w.conditional_boost(0.0, -1.0)?;
    w.conditional_translation(1.0)?;
    let ov = w0.overlap(&w);
    let expected = x0 * p0 * consts.m_b / (consts.m_a * consts.hbar);
    let rel = (ov.arg() - expected).abs() / expected.abs();
    Ok(check(
        "composition-phase-conditional",
        rel < 1e-6,
        format!("measured phase {:.3e}, expected {expected:.3e}, relative error {rel:.3e}", ov.arg()),
    ))
}

/// Halving the grid spacing moves the reported fidelity by less than 1e-6.
pub fn grid_refinement_check() -> Result<SimCheck, WaveError> {
    let fidelity_at = |n: usize| -> Result<f64, WaveError> {
        let sc = BoostScenario {
            consts: Constants { hbar: 1.0, kappa: 1.0, m_a: 10.0, m_b: 1.0 },
            grid_a: Grid1d::new(n, -100.0, 100.0)?,
            grid_b: Grid1d::new(n, -12.0, 12.0)?,
            p0: 1.0,
            sigma_p: 0.05,
            t: 1.0,
        };
        sc.fidelity(&[sc.p0], 1.0)
    };
    let coarse = fidelity_at(256)?;
    let fine = fidelity_at(512)?;
    let diff = (coarse - fine).abs();
    Ok(check(
        "grid-refinement-stability",
        diff < 1e-6,
        format!("fidelity {coarse:.9} at 256 vs {fine:.9} at 512, |diff| = {diff:.3e}"),
    ))
}

/// The full numerical suite.
pub fn verify_suite() -> Vec<SimCheck> {
    let mut out = Vec::new();
    let mut run = |r: Result<Vec<SimCheck>, WaveError>, key: &str| match r {
        Ok(cs) => out.extend(cs),
        Err(e) => out.push(check(key, false, format!("error: {e}"))),
    };
    run(unitarity_check().map(|c| vec![c]), "unitarity-drift");
    run(semiclassical_fidelity_checks(), "semiclassical-fidelity");
    run(superposition_checks(), "superposition-residual");
    run(composition_phase_classical().map(|c| vec![c]), "composition-phase-classical");
    run(composition_phase_conditional().map(|c| vec![c]), "composition-phase-conditional");
    run(grid_refinement_check().map(|c| vec![c]), "grid-refinement-stability");
    out
}
