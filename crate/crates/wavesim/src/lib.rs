//! Spectral two-particle wavepacket simulator for conditional Galilei
//! transformations: translations of particle B controlled by the position of
//! particle A, boosts controlled by A's velocity, their classical-parameter
//! counterparts, and the semiclassical comparisons between the two.
//!
//! Every operator is applied in closed form in a basis where it is diagonal
//! (mixed position/momentum representations via FFT), so there is no
//! time-stepping error; the only numerics are grid discretization and
//! roundoff. States are complex grids over (x_A, x_B).

pub mod checks;

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum WaveError {
    /// Superposed frame branches overlap beyond the orthogonality threshold.
    BranchOverlap { overlap: f64, threshold: f64 },
    /// Probability reached the grid edge; shifted packets would wrap around.
    Aliasing { edge_mass: f64, threshold: f64 },
    Config(String),
}

impl fmt::Display for WaveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveError::BranchOverlap { overlap, threshold } => {
                write!(f, "branch overlap {overlap:.3e} above threshold {threshold:.0e}")
            }
            WaveError::Aliasing { edge_mass, threshold } => {
                write!(f, "edge amplitude {edge_mass:.3e} above threshold {threshold:.0e}")
            }
            WaveError::Config(msg) => write!(f, "config error: {msg}"),
        }
    }
}

impl std::error::Error for WaveError {}

pub const BRANCH_OVERLAP_THRESHOLD: f64 = 1e-6;
pub const EDGE_DECAY_THRESHOLD: f64 = 1e-8;

/// Uniform grid with a power-of-two point count and its discrete Fourier
/// dual.
#[derive(Clone, Copy, Debug)]
pub struct Grid1d {
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl Grid1d {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Grid1d, WaveError> {
        if n < 64 || !n.is_power_of_two() {
            return Err(WaveError::Config(format!("grid size {n} must be a power of two >= 64")));
        }
        if x_max <= x_min {
            return Err(WaveError::Config("empty grid interval".into()));
        }
        Ok(Grid1d { n, x_min, x_max })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    /// Angular wavenumber of FFT bin `j` (signed layout).
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as i64;
        let jj = if (j as i64) < n / 2 { j as i64 } else { j as i64 - n };
        2.0 * PI * jj as f64 / (self.n as f64 * self.dx())
    }

    /// Momentum of bin `j` for a particle quantized with `hbar_eff`.
    pub fn momentum(&self, j: usize, hbar_eff: f64) -> f64 {
        hbar_eff * self.wavenumber(j)
    }
}

/// Physical constants of the pair; kappa quantizes the frame particle A and
/// hbar particle B.
#[derive(Clone, Copy, Debug)]
pub struct Constants {
    pub hbar: f64,
    pub kappa: f64,
    pub m_a: f64,
    pub m_b: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { hbar: 1.0, kappa: 1.0, m_a: 10.0, m_b: 1.0 }
    }
}

/// Gaussian data: position center, momentum center, position width sigma,
/// overall phase.
#[derive(Clone, Copy, Debug)]
pub struct GaussianSpec {
    pub center_x: f64,
    pub center_p: f64,
    pub width: f64,
    pub phase: f64,
}

impl GaussianSpec {
    pub fn new(center_x: f64, center_p: f64, width: f64) -> GaussianSpec {
        GaussianSpec { center_x, center_p, width, phase: 0.0 }
    }
}

fn gaussian_1d(grid: &Grid1d, spec: &GaussianSpec, hbar_eff: f64) -> Vec<Complex64> {
    assert!(spec.width > 0.0, "width must be positive");
    let mut out = Vec::with_capacity(grid.n);
    for i in 0..grid.n {
        let x = grid.x(i);
        let envelope = (-(x - spec.center_x).powi(2) / (4.0 * spec.width * spec.width)).exp();
        let phase = spec.center_p * (x - spec.center_x) / hbar_eff + spec.phase;
        out.push(Complex64::from_polar(envelope, phase));
    }
    // exact grid normalization
    let norm: f64 = out.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.dx();
    let scale = 1.0 / norm.sqrt();
    for c in &mut out {
        *c *= scale;
    }
    out
}

fn overlap_1d(a: &[Complex64], b: &[Complex64], dx: f64) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>() * dx
}

/// Complex amplitude grid over (x_A, x_B), row-major with the B index
/// contiguous.
pub struct Wavepacket2d {
    pub amps: Vec<Complex64>,
    pub grid_a: Grid1d,
    pub grid_b: Grid1d,
    pub consts: Constants,
    fft: FftPair,
}

#[derive(Clone)]
struct FftPair {
    fwd_a: Arc<dyn rustfft::Fft<f64>>,
    inv_a: Arc<dyn rustfft::Fft<f64>>,
    fwd_b: Arc<dyn rustfft::Fft<f64>>,
    inv_b: Arc<dyn rustfft::Fft<f64>>,
}

impl FftPair {
    fn new(na: usize, nb: usize) -> FftPair {
        let mut planner = FftPlanner::new();
        FftPair {
            fwd_a: planner.plan_fft_forward(na),
            inv_a: planner.plan_fft_inverse(na),
            fwd_b: planner.plan_fft_forward(nb),
            inv_b: planner.plan_fft_inverse(nb),
        }
    }
}

impl Clone for Wavepacket2d {
    fn clone(&self) -> Self {
        Wavepacket2d {
            amps: self.amps.clone(),
            grid_a: self.grid_a,
            grid_b: self.grid_b,
            consts: self.consts,
            fft: self.fft.clone(),
        }
    }
}

impl Wavepacket2d {
    /// Product state chi_A (x) psi_B.
    pub fn product(
        grid_a: Grid1d,
        grid_b: Grid1d,
        consts: Constants,
        spec_a: &GaussianSpec,
        spec_b: &GaussianSpec,
    ) -> Result<Wavepacket2d, WaveError> {
        let chi = gaussian_1d(&grid_a, spec_a, consts.kappa);
        let psi = gaussian_1d(&grid_b, spec_b, consts.hbar);
        Wavepacket2d::from_branches(grid_a, grid_b, consts, &[chi], &psi)
    }

    /// Balanced superposition of frame branches times one B state. Branches
    /// must be mutually orthogonal below the threshold.
    pub fn superposition(
        grid_a: Grid1d,
        grid_b: Grid1d,
        consts: Constants,
        specs_a: &[GaussianSpec],
        spec_b: &GaussianSpec,
    ) -> Result<Wavepacket2d, WaveError> {
        let branches: Vec<Vec<Complex64>> =
            specs_a.iter().map(|s| gaussian_1d(&grid_a, s, consts.kappa)).collect();
        for i in 0..branches.len() {
            for j in (i + 1)..branches.len() {
                let ov = overlap_1d(&branches[i], &branches[j], grid_a.dx()).norm();
                if ov > BRANCH_OVERLAP_THRESHOLD {
                    return Err(WaveError::BranchOverlap {
                        overlap: ov,
                        threshold: BRANCH_OVERLAP_THRESHOLD,
                    });
                }
            }
        }
        let psi = gaussian_1d(&grid_b, spec_b, consts.hbar);
        Wavepacket2d::from_branches(grid_a, grid_b, consts, &branches, &psi)
    }

    fn from_branches(
        grid_a: Grid1d,
        grid_b: Grid1d,
        consts: Constants,
        branches: &[Vec<Complex64>],
        psi: &[Complex64],
    ) -> Result<Wavepacket2d, WaveError> {
        let mut chi = vec![Complex64::new(0.0, 0.0); grid_a.n];
        let weight = 1.0 / (branches.len() as f64).sqrt();
        for b in branches {
            for (acc, c) in chi.iter_mut().zip(b) {
                *acc += weight * c;
            }
        }
        let mut amps = Vec::with_capacity(grid_a.n * grid_b.n);
        for ca in &chi {
            for cb in psi {
                amps.push(ca * cb);
            }
        }
        let mut w = Wavepacket2d {
            amps,
            grid_a,
            grid_b,
            consts,
            fft: FftPair::new(grid_a.n, grid_b.n),
        };
        w.renormalize();
        Ok(w)
    }

    pub fn norm(&self) -> f64 {
        let cell = self.grid_a.dx() * self.grid_b.dx();
        (self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>() * cell).sqrt()
    }

    pub fn renormalize(&mut self) {
        let n = self.norm();
        let s = 1.0 / n;
        for c in &mut self.amps {
            *c *= s;
        }
    }

    pub fn overlap(&self, other: &Wavepacket2d) -> Complex64 {
        let cell = self.grid_a.dx() * self.grid_b.dx();
        self.amps.iter().zip(&other.amps).map(|(x, y)| x.conj() * y).sum::<Complex64>() * cell
    }

    pub fn fidelity(&self, other: &Wavepacket2d) -> f64 {
        self.overlap(other).norm()
    }

    fn row(&mut self, ia: usize) -> &mut [Complex64] {
        let nb = self.grid_b.n;
        &mut self.amps[ia * nb..(ia + 1) * nb]
    }

    fn fft_b(&mut self, forward: bool) {
        let nb = self.grid_b.n;
        let scale = 1.0 / (nb as f64).sqrt();
        let plan = if forward { self.fft.fwd_b.clone() } else { self.fft.inv_b.clone() };
        for ia in 0..self.grid_a.n {
            let row = self.row(ia);
            plan.process(row);
            for c in row {
                *c *= scale;
            }
        }
    }

    fn fft_a(&mut self, forward: bool) {
        let (na, nb) = (self.grid_a.n, self.grid_b.n);
        let scale = 1.0 / (na as f64).sqrt();
        let plan = if forward { self.fft.fwd_a.clone() } else { self.fft.inv_a.clone() };
        let mut col = vec![Complex64::new(0.0, 0.0); na];
        for jb in 0..nb {
            for ia in 0..na {
                col[ia] = self.amps[ia * nb + jb];
            }
            plan.process(&mut col);
            for ia in 0..na {
                self.amps[ia * nb + jb] = col[ia] * scale;
            }
        }
    }

    /// Largest |amplitude| on the outermost grid rows and columns, relative
    /// to the overall maximum; the aliasing guard.
    pub fn edge_mass(&self) -> f64 {
        let (na, nb) = (self.grid_a.n, self.grid_b.n);
        let maxabs =
            self.amps.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
        let mut edge = 0.0f64;
        for ia in 0..na {
            edge = edge.max(self.amps[ia * nb].norm());
            edge = edge.max(self.amps[ia * nb + nb - 1].norm());
        }
        for jb in 0..nb {
            edge = edge.max(self.amps[jb].norm());
            edge = edge.max(self.amps[(na - 1) * nb + jb].norm());
        }
        edge / maxabs
    }

    fn guard_edges(&self) -> Result<(), WaveError> {
        let edge = self.edge_mass();
        if edge > EDGE_DECAY_THRESHOLD {
            return Err(WaveError::Aliasing { edge_mass: edge, threshold: EDGE_DECAY_THRESHOLD });
        }
        Ok(())
    }

    /// Conditional translation: x_B -> x_B + x_A branchwise (the frame
    /// particle's position sets the shift). `sign` = -1 applies the inverse.
    pub fn conditional_translation(&mut self, sign: f64) -> Result<(), WaveError> {
        self.fft_b(true);
        let nb = self.grid_b.n;
        let grid_a = self.grid_a;
        let grid_b = self.grid_b;
        for ia in 0..self.grid_a.n {
            let shift = sign * grid_a.x(ia);
            let row = self.row(ia);
            for (jb, c) in row.iter_mut().enumerate().take(nb) {
                let k = grid_b.wavenumber(jb);
                *c *= Complex64::from_polar(1.0, -k * shift);
            }
        }
        self.fft_b(false);
        self.guard_edges()
    }

    /// Conditional boost: for every frame momentum p_A, particle B receives
    /// the Galilei boost of velocity p_A/m_A — position shift v t, momentum
    /// kick m_B v, and the exact central phase from splitting the
    /// exponential. `sign` = -1 applies the inverse.
    pub fn conditional_boost(&mut self, t: f64, sign: f64) -> Result<(), WaveError> {
        self.fft_a(true);
        let (grid_a, grid_b, consts) = (self.grid_a, self.grid_b, self.consts);
        let (fwd, inv) = (self.fft.fwd_b.clone(), self.fft.inv_b.clone());
        for ia in 0..grid_a.n {
            let p_a = grid_a.momentum(ia, consts.kappa);
            let v = sign * p_a / consts.m_a;
            boost_row(self.row(ia), &grid_b, &consts, v, t, &fwd, &inv);
        }
        self.fft_a(false);
        self.guard_edges()
    }

    /// Classical-parameter translation of particle B by `a`.
    pub fn classical_translation_b(&mut self, a: f64) -> Result<(), WaveError> {
        self.fft_b(true);
        let nb = self.grid_b.n;
        let grid_b = self.grid_b;
        for ia in 0..self.grid_a.n {
            let row = self.row(ia);
            for (jb, c) in row.iter_mut().enumerate().take(nb) {
                let k = grid_b.wavenumber(jb);
                *c *= Complex64::from_polar(1.0, -k * a);
            }
        }
        self.fft_b(false);
        self.guard_edges()
    }

    /// Classical-parameter boost of particle B with velocity `v`.
    pub fn classical_boost_b(&mut self, v: f64, t: f64) -> Result<(), WaveError> {
        let (grid_b, consts) = (self.grid_b, self.consts);
        let (fwd, inv) = (self.fft.fwd_b.clone(), self.fft.inv_b.clone());
        for ia in 0..self.grid_a.n {
            boost_row(self.row(ia), &grid_b, &consts, v, t, &fwd, &inv);
        }
        self.guard_edges()
    }

    /// Position centroid of particle B.
    pub fn centroid_x_b(&self) -> f64 {
        let cell = self.grid_a.dx() * self.grid_b.dx();
        let nb = self.grid_b.n;
        let mut acc = 0.0;
        for (idx, c) in self.amps.iter().enumerate() {
            acc += c.norm_sqr() * self.grid_b.x(idx % nb);
        }
        acc * cell
    }

    /// Momentum centroid of particle B. The unitary FFT keeps the summed
    /// bin weights normalized with the same cell measure as position space.
    pub fn centroid_p_b(&self) -> f64 {
        let mut w = self.clone();
        w.fft_b(true);
        let cell = w.grid_a.dx() * w.grid_b.dx();
        let nb = w.grid_b.n;
        let mut acc = 0.0;
        for (idx, c) in w.amps.iter().enumerate() {
            acc += c.norm_sqr() * w.grid_b.momentum(idx % nb, w.consts.hbar);
        }
        acc * cell
    }

    /// Position centroid of particle A.
    pub fn centroid_x_a(&self) -> f64 {
        let cell = self.grid_a.dx() * self.grid_b.dx();
        let nb = self.grid_b.n;
        let mut acc = 0.0;
        for (idx, c) in self.amps.iter().enumerate() {
            acc += c.norm_sqr() * self.grid_a.x(idx / nb);
        }
        acc * cell
    }
}

fn boost_row(
    row: &mut [Complex64],
    grid_b: &Grid1d,
    consts: &Constants,
    v: f64,
    t: f64,
    fwd: &Arc<dyn rustfft::Fft<f64>>,
    inv: &Arc<dyn rustfft::Fft<f64>>,
) {
    let nb = grid_b.n;
    let scale = 1.0 / (nb as f64).sqrt();
    // position shift by v t, applied in momentum space
    if t != 0.0 {
        fwd.process(row);
        for (jb, c) in row.iter_mut().enumerate().take(nb) {
            let k = grid_b.wavenumber(jb);
            *c *= scale * Complex64::from_polar(1.0, -k * v * t);
        }
        inv.process(row);
        for c in row.iter_mut() {
            *c *= scale;
        }
    }
    // momentum kick m_B v and the central phase -(m_B v^2 t)/(2 hbar)
    let central = -consts.m_b * v * v * t / (2.0 * consts.hbar);
    for (jb, c) in row.iter_mut().enumerate().take(nb) {
        let x = grid_b.x(jb);
        *c *= Complex64::from_polar(1.0, consts.m_b * v * x / consts.hbar + central);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_grids() -> (Grid1d, Grid1d) {
        (Grid1d::new(256, -40.0, 40.0).unwrap(), Grid1d::new(256, -20.0, 20.0).unwrap())
    }

    #[test]
    fn gaussian_is_normalized() {
        let (ga, gb) = default_grids();
        let w = Wavepacket2d::product(
            ga,
            gb,
            Constants::default(),
            &GaussianSpec::new(0.0, 1.0, 2.0),
            &GaussianSpec::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distant_branches_are_orthogonal() {
        let (ga, gb) = default_grids();
        // 12 widths apart: analytic overlap exp(-144/8) ~ 1.5e-8
        let w = Wavepacket2d::superposition(
            ga,
            gb,
            Constants::default(),
            &[GaussianSpec::new(-12.0, 0.0, 2.0), GaussianSpec::new(12.0, 0.0, 2.0)],
            &GaussianSpec::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn close_branches_are_rejected() {
        let (ga, gb) = default_grids();
        let got = Wavepacket2d::superposition(
            ga,
            gb,
            Constants::default(),
            &[GaussianSpec::new(-1.0, 0.0, 2.0), GaussianSpec::new(1.0, 0.0, 2.0)],
            &GaussianSpec::new(0.0, 0.0, 1.0),
        );
        assert!(matches!(got, Err(WaveError::BranchOverlap { .. })));
    }

    #[test]
    fn conditional_translation_shifts_by_frame_position() {
        let (ga, gb) = default_grids();
        let x0 = 3.0;
        let mut w = Wavepacket2d::product(
            ga,
            gb,
            Constants::default(),
            &GaussianSpec::new(x0, 0.0, 0.8),
            &GaussianSpec::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        w.conditional_translation(1.0).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
        let shift = w.centroid_x_b();
        assert!((shift - x0).abs() < ga.dx(), "centroid moved {shift}");
    }

    #[test]
    fn conditional_boost_kicks_momentum() {
        let (ga, gb) = default_grids();
        let consts = Constants::default();
        let p0 = 2.0;
        let mut w = Wavepacket2d::product(
            ga,
            gb,
            consts,
            &GaussianSpec::new(0.0, p0, 2.0),
            &GaussianSpec::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        w.conditional_boost(0.0, 1.0).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
        let kick = w.centroid_p_b();
        let expect = consts.m_b * p0 / consts.m_a;
        assert!((kick - expect).abs() < 1e-3, "kick {kick} vs {expect}");
        // position density unchanged at t = 0
        assert!(w.centroid_x_b().abs() < 1e-6);
    }

    #[test]
    fn branchwise_shift_of_superposed_frame() {
        let (ga, gb) = default_grids();
        let (x1, x2) = (-10.0, 10.0);
        let mut w = Wavepacket2d::superposition(
            ga,
            gb,
            Constants::default(),
            &[GaussianSpec::new(x1, 0.0, 0.8), GaussianSpec::new(x2, 0.0, 0.8)],
            &GaussianSpec::new(0.0, 0.0, 0.7),
        )
        .unwrap();
        w.conditional_translation(1.0).unwrap();
        // compare with the explicitly built branch-shifted state
        let mut want_amps = vec![Complex64::new(0.0, 0.0); ga.n * gb.n];
        for (branch_x, _) in [(x1, 0), (x2, 1)] {
            let chi = gaussian_1d(&ga, &GaussianSpec::new(branch_x, 0.0, 0.8), 1.0);
            for ia in 0..ga.n {
                for jb in 0..gb.n {
                    // psi shifted by x_A per branch, evaluated analytically
                    let x = gb.x(jb) - ga.x(ia);
                    let env = (-(x * x) / (4.0 * 0.49)).exp()
                        / (2.0 * PI * 0.49).powf(0.25);
                    want_amps[ia * gb.n + jb] += chi[ia] * env / 2.0_f64.sqrt();
                }
            }
        }
        let mut want = w.clone();
        want.amps = want_amps;
        want.renormalize();
        assert!(w.fidelity(&want) > 1.0 - 1e-6);
    }

    #[test]
    fn unitarity_over_composed_applications() {
        let ga = Grid1d::new(256, -40.0, 40.0).unwrap();
        let gb = Grid1d::new(256, -36.0, 36.0).unwrap();
        let mut w = Wavepacket2d::product(
            ga,
            gb,
            Constants::default(),
            &GaussianSpec::new(0.0, 1.0, 2.0),
            &GaussianSpec::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        for k in 0..25 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            w.conditional_translation(sign).unwrap();
            w.conditional_boost(0.1, sign).unwrap();
            w.conditional_boost(0.1, -sign).unwrap();
            w.conditional_translation(-sign).unwrap();
        }
        assert!((w.norm() - 1.0).abs() < 1e-10);
    }
}
