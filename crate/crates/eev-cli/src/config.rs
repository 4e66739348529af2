//! TOML configuration surface: parsing with unknown-key rejection, defaults,
//! resolution into a validated `SimConfig`, and the deterministic resolved
//! echo used by `print-config` and the run manifest.

use eev_core::ensemble::CapLength;
use eev_core::solver::SimConfig;
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicsSection {
    nu: Option<f64>,
    lid_velocity: Option<f64>,
    box_l: Option<f64>,
    forcing: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NumericsSection {
    nx: Option<usize>,
    ny: Option<usize>,
    nz: Option<usize>,
    dt: Option<f64>,
    t_end: Option<f64>,
    spin_up: Option<f64>,
    diag_interval: Option<usize>,
    max_divergence_rel: Option<f64>,
    threads: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleSection {
    size: Option<usize>,
    perturbation_amplitude: Option<f64>,
    perturbation_modes: Option<usize>,
    perturbation_seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EddyViscositySection {
    mu: Option<f64>,
    mu_beta: Option<f64>,
    /// Defaults to `dt` when omitted.
    tau: Option<f64>,
    /// One of "off", "box", "wall_distance".
    cap_length: Option<String>,
    re_eff_estimate: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    /// Checkpoint every this many steps; 0 writes only the final state.
    checkpoint_interval: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    physics: PhysicsSection,
    #[serde(default)]
    numerics: NumericsSection,
    #[serde(default)]
    ensemble: EnsembleSection,
    #[serde(default)]
    eddy_viscosity: EddyViscositySection,
    #[serde(default)]
    output: OutputSection,
}

/// Settings that steer the command layer rather than the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub checkpoint_interval: usize,
    pub threads: Option<usize>,
}

#[derive(Debug)]
pub enum ConfigError {
    /// Syntax / unknown key / type errors, with the parser's location info.
    Parse(String),
    /// A validated constraint failed.
    Constraint(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Parse(m) => write!(f, "config parse error: {m}"),
            ConfigError::Constraint(m) => write!(f, "config constraint violated: {m}"),
        }
    }
}

fn parse_cap(s: &str) -> Result<CapLength, ConfigError> {
    match s {
        "off" => Ok(CapLength::Off),
        "box" => Ok(CapLength::Box),
        "wall_distance" => Ok(CapLength::WallDistance),
        other => Err(ConfigError::Parse(format!(
            "eddy_viscosity.cap_length must be one of \"off\", \"box\", \"wall_distance\", got \"{other}\""
        ))),
    }
}

fn cap_name(c: CapLength) -> &'static str {
    match c {
        CapLength::Off => "off",
        CapLength::Box => "box",
        CapLength::WallDistance => "wall_distance",
    }
}

/// Parses the document and resolves it against the documented defaults into a
/// validated `SimConfig`.
pub fn parse_config(text: &str) -> Result<(SimConfig, RunOptions), ConfigError> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let mut cfg = SimConfig::desk_default();
    let d = cfg.clone();

    let p = &file.physics;
    cfg.nu = p.nu.unwrap_or(d.nu);
    cfg.lid_velocity = p.lid_velocity.unwrap_or(d.lid_velocity);
    cfg.box_l = p.box_l.unwrap_or(d.box_l);
    cfg.forcing = p.forcing.unwrap_or(d.forcing);

    let n = &file.numerics;
    cfg.nx = n.nx.unwrap_or(d.nx);
    cfg.ny = n.ny.unwrap_or(d.ny);
    cfg.nz = n.nz.unwrap_or(d.nz);
    cfg.dt = n.dt.unwrap_or(d.dt);
    cfg.t_end = n.t_end.unwrap_or(d.t_end);
    cfg.spin_up = n.spin_up.unwrap_or(d.spin_up);
    cfg.diag_interval = n.diag_interval.unwrap_or(d.diag_interval);
    cfg.max_divergence_rel = n.max_divergence_rel.unwrap_or(d.max_divergence_rel);

    let e = &file.ensemble;
    cfg.ensemble_size = e.size.unwrap_or(d.ensemble_size);
    cfg.perturbation.amplitude = e.perturbation_amplitude.unwrap_or(d.perturbation.amplitude);
    cfg.perturbation.modes = e.perturbation_modes.unwrap_or(d.perturbation.modes);
    cfg.perturbation.seed = e.perturbation_seed.unwrap_or(d.perturbation.seed);

    let ev = &file.eddy_viscosity;
    cfg.mu = ev.mu.unwrap_or(d.mu);
    cfg.mu_beta = ev.mu_beta.unwrap_or(d.mu_beta);
    cfg.tau = ev.tau.unwrap_or(cfg.dt);
    cfg.cap_length = match &ev.cap_length {
        Some(s) => parse_cap(s)?,
        None => d.cap_length,
    };
    cfg.re_eff_estimate = ev.re_eff_estimate.or(d.re_eff_estimate);

    cfg.validate().map_err(|err| ConfigError::Constraint(err.to_string()))?;

    let opts = RunOptions {
        checkpoint_interval: file.output.checkpoint_interval.unwrap_or(0),
        threads: file.numerics.threads,
    };
    Ok((cfg, opts))
}

fn f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Deterministic TOML echo of the resolved configuration; parsing it back
/// yields the same `SimConfig` and options.
pub fn render_config(cfg: &SimConfig, opts: &RunOptions) -> String {
    let mut s = String::new();
    s.push_str("[physics]\n");
    s.push_str(&format!("nu = {}\n", f(cfg.nu)));
    s.push_str(&format!("lid_velocity = {}\n", f(cfg.lid_velocity)));
    s.push_str(&format!("box_l = {}\n", f(cfg.box_l)));
    s.push_str(&format!(
        "forcing = [{}, {}, {}]\n",
        f(cfg.forcing[0]),
        f(cfg.forcing[1]),
        f(cfg.forcing[2])
    ));
    s.push_str("\n[numerics]\n");
    s.push_str(&format!("nx = {}\n", cfg.nx));
    s.push_str(&format!("ny = {}\n", cfg.ny));
    s.push_str(&format!("nz = {}\n", cfg.nz));
    s.push_str(&format!("dt = {}\n", f(cfg.dt)));
    s.push_str(&format!("t_end = {}\n", f(cfg.t_end)));
    s.push_str(&format!("spin_up = {}\n", f(cfg.spin_up)));
    s.push_str(&format!("diag_interval = {}\n", cfg.diag_interval));
    s.push_str(&format!("max_divergence_rel = {}\n", f(cfg.max_divergence_rel)));
    if let Some(t) = opts.threads {
        s.push_str(&format!("threads = {t}\n"));
    }
    s.push_str("\n[ensemble]\n");
    s.push_str(&format!("size = {}\n", cfg.ensemble_size));
    s.push_str(&format!("perturbation_amplitude = {}\n", f(cfg.perturbation.amplitude)));
    s.push_str(&format!("perturbation_modes = {}\n", cfg.perturbation.modes));
    s.push_str(&format!("perturbation_seed = {}\n", cfg.perturbation.seed));
    s.push_str("\n[eddy_viscosity]\n");
    s.push_str(&format!("mu = {}\n", f(cfg.mu)));
    s.push_str(&format!("mu_beta = {}\n", f(cfg.mu_beta)));
    s.push_str(&format!("tau = {}\n", f(cfg.tau)));
    s.push_str(&format!("cap_length = \"{}\"\n", cap_name(cfg.cap_length)));
    if let Some(re) = cfg.re_eff_estimate {
        s.push_str(&format!("re_eff_estimate = {}\n", f(re)));
    }
    s.push_str("\n[output]\n");
    s.push_str(&format!("checkpoint_interval = {}\n", opts.checkpoint_interval));
    s
}
