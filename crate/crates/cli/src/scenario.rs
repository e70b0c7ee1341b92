//! Scenario files: a grid, initial Gaussians, and an operator sequence,
//! executed against the wavepacket simulator with JSON metrics out.

use qgal_wavesim::{Constants, GaussianSpec, Grid1d, Wavepacket2d};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Deserialize)]
pub struct ScenarioConfig {
    pub constants: ConstantsConfig,
    pub grid_a: GridConfig,
    pub grid_b: GridConfig,
    /// One frame branch for a product state, several for a superposition.
    pub frame: Vec<GaussianConfig>,
    pub particle: GaussianConfig,
    #[serde(default)]
    pub ops: Vec<OpConfig>,
}

#[derive(Deserialize)]
pub struct ConstantsConfig {
    pub hbar: f64,
    pub kappa: f64,
    pub m_a: f64,
    pub m_b: f64,
}

#[derive(Deserialize)]
pub struct GridConfig {
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
}

#[derive(Deserialize)]
pub struct GaussianConfig {
    pub center_x: f64,
    pub center_p: f64,
    pub width: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OpConfig {
    ConditionalTranslation {
        #[serde(default = "one")]
        sign: f64,
    },
    ConditionalBoost {
        #[serde(default)]
        t: f64,
        #[serde(default = "one")]
        sign: f64,
    },
    ClassicalTranslation {
        a: f64,
    },
    ClassicalBoost {
        v: f64,
        #[serde(default)]
        t: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Serialize)]
pub struct Metrics {
    pub initial_norm: f64,
    pub final_norm: f64,
    pub overlap_with_initial_re: f64,
    pub overlap_with_initial_im: f64,
    pub overlap_phase: f64,
    pub centroid_x_a: f64,
    pub centroid_x_b: f64,
    pub centroid_p_b: f64,
    pub edge_mass: f64,
    pub ops_applied: usize,
}

impl Metrics {
    pub fn final_norm_ok(&self) -> bool {
        (self.final_norm - 1.0).abs() < 1e-9
    }

    pub fn summary(&self) -> String {
        format!(
            "norm {:.12}, <x_B> {:.6}, <p_B> {:.6}, overlap phase {:.6}",
            self.final_norm, self.centroid_x_b, self.centroid_p_b, self.overlap_phase
        )
    }
}

fn gauss(c: &GaussianConfig) -> GaussianSpec {
    GaussianSpec { center_x: c.center_x, center_p: c.center_p, width: c.width, phase: c.phase }
}

pub fn run(cfg: &ScenarioConfig, dump: Option<&PathBuf>) -> Result<Metrics, String> {
    let consts = Constants {
        hbar: cfg.constants.hbar,
        kappa: cfg.constants.kappa,
        m_a: cfg.constants.m_a,
        m_b: cfg.constants.m_b,
    };
    let ga = Grid1d::new(cfg.grid_a.n, cfg.grid_a.x_min, cfg.grid_a.x_max)
        .map_err(|e| e.to_string())?;
    let gb = Grid1d::new(cfg.grid_b.n, cfg.grid_b.x_min, cfg.grid_b.x_max)
        .map_err(|e| e.to_string())?;
    if cfg.frame.is_empty() {
        return Err("at least one frame branch required".into());
    }
    let frame: Vec<GaussianSpec> = cfg.frame.iter().map(gauss).collect();
    let particle = gauss(&cfg.particle);
    let initial = if frame.len() == 1 {
        Wavepacket2d::product(ga, gb, consts, &frame[0], &particle)
    } else {
        Wavepacket2d::superposition(ga, gb, consts, &frame, &particle)
    }
    .map_err(|e| e.to_string())?;

    let mut w = initial.clone();
    for op in &cfg.ops {
        match op {
            OpConfig::ConditionalTranslation { sign } => w.conditional_translation(*sign),
            OpConfig::ConditionalBoost { t, sign } => w.conditional_boost(*t, *sign),
            OpConfig::ClassicalTranslation { a } => w.classical_translation_b(*a),
            OpConfig::ClassicalBoost { v, t } => w.classical_boost_b(*v, *t),
        }
        .map_err(|e| e.to_string())?;
    }

    if let Some(path) = dump {
        dump_amplitudes(&w, path).map_err(|e| format!("amplitude dump: {e}"))?;
    }

    let ov = initial.overlap(&w);
    Ok(Metrics {
        initial_norm: initial.norm(),
        final_norm: w.norm(),
        overlap_with_initial_re: ov.re,
        overlap_with_initial_im: ov.im,
        overlap_phase: ov.arg(),
        centroid_x_a: w.centroid_x_a(),
        centroid_x_b: w.centroid_x_b(),
        centroid_p_b: w.centroid_p_b(),
        edge_mass: w.edge_mass(),
        ops_applied: cfg.ops.len(),
    })
}

fn dump_amplitudes(w: &Wavepacket2d, path: &PathBuf) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "# n_a n_b x_min_a x_max_a x_min_b x_max_b")?;
    writeln!(
        f,
        "{} {} {} {} {} {}",
        w.grid_a.n, w.grid_b.n, w.grid_a.x_min, w.grid_a.x_max, w.grid_b.x_min, w.grid_b.x_max
    )?;
    for c in &w.amps {
        writeln!(f, "{:.17e} {:.17e}", c.re, c.im)?;
    }
    Ok(())
}

pub fn run_from_file(path: &PathBuf, dump: Option<&PathBuf>) -> Result<Metrics, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let cfg: ScenarioConfig = serde_json::from_str(&text)
        .map_err(|e| format!("bad scenario config {}: {e}", path.display()))?;
    run(&cfg, dump)
}

pub fn run_command(config: PathBuf, dump: Option<PathBuf>) -> Result<ExitCode, String> {
    let metrics = run_from_file(&config, dump.as_ref())?;
    println!("{}", serde_json::to_string_pretty(&metrics).expect("metrics serialization"));
    Ok(if metrics.final_norm_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
