//! Simulation configuration and validation.

use crate::ensemble::{CapLength, EddyViscosityParams};
use crate::fields::Grid;
use crate::{CoreError, Result};

/// Divergence-free initial perturbation: a sum of `modes` random
/// streamfunction sine modes per member, scaled to peak amplitude
/// `amplitude`, seeded deterministically per `(seed, member)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    pub amplitude: f64,
    pub modes: usize,
    pub seed: u64,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        Self { amplitude: 0.0, modes: 4, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub nu: f64,
    pub lid_velocity: f64,
    pub box_l: f64,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub ensemble_size: usize,
    pub mu: f64,
    pub mu_beta: f64,
    pub tau: f64,
    pub cap_length: CapLength,
    /// A-priori effective-Reynolds estimate that freezes the near-wall slab
    /// breakpoint for the piecewise `mu(z)`; defaults to `U L / nu`.
    pub re_eff_estimate: Option<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub spin_up: f64,
    pub perturbation: PerturbationSpec,
    pub forcing: [f64; 3],
    /// Diagnostics every this many steps.
    pub diag_interval: usize,
    /// Hard ceiling on the per-step divergence check, relative to the
    /// velocity scale over `L`.
    pub max_divergence_rel: f64,
}

impl SimConfig {
    /// Defaults for a desk-scale shear run; callers override fields and then
    /// `validate`.
    pub fn desk_default() -> Self {
        Self {
            nu: 1e-2,
            lid_velocity: 1.0,
            box_l: 1.0,
            nx: 32,
            ny: 32,
            nz: 64,
            ensemble_size: 4,
            mu: 0.5,
            mu_beta: 0.5,
            tau: 5e-3,
            cap_length: CapLength::Off,
            re_eff_estimate: None,
            dt: 5e-3,
            t_end: 1.0,
            spin_up: 0.0,
            perturbation: PerturbationSpec::default(),
            forcing: [0.0; 3],
            diag_interval: 10,
            max_divergence_rel: 1e-8,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.box_l, self.nx, self.ny, self.nz)
    }

    /// Large-scale turnover time `T* = L/U` (infinite for a resting lid).
    pub fn turnover_time(&self) -> f64 {
        if self.lid_velocity > 0.0 {
            self.box_l / self.lid_velocity
        } else {
            f64::INFINITY
        }
    }

    /// Reynolds number `U L / nu`.
    pub fn reynolds(&self) -> f64 {
        self.lid_velocity * self.box_l / self.nu
    }

    /// A-priori near-wall slab fraction from the configured Reynolds
    /// estimate.
    pub fn beta_configured(&self) -> f64 {
        let re = self.re_eff_estimate.unwrap_or_else(|| self.reynolds());
        if re > 0.125 {
            (0.125 / re).min(1.0)
        } else {
            0.0
        }
    }

    pub fn eddy_params(&self) -> Result<EddyViscosityParams> {
        EddyViscosityParams::new(self.mu, self.mu_beta, self.tau, self.cap_length, self.beta_configured())
    }

    /// Velocity scale for relative tolerances.
    pub fn velocity_scale(&self) -> f64 {
        self.lid_velocity.abs().max(self.perturbation.amplitude.abs())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(CoreError::InvalidConfig(msg));
        if !(self.nu > 0.0) {
            return fail(format!("nu = {} must be positive", self.nu));
        }
        if self.lid_velocity < 0.0 {
            return fail(format!("lid_velocity = {} must be nonnegative", self.lid_velocity));
        }
        self.grid()?;
        if self.ensemble_size < 1 {
            return fail("ensemble_size must be at least 1".into());
        }
        self.eddy_params()?;
        if self.tau > self.turnover_time() * (1.0 + 1e-12) {
            return fail(format!(
                "tau = {} exceeds the turnover time T* = L/U = {}",
                self.tau,
                self.turnover_time()
            ));
        }
        if !(self.dt > 0.0) {
            return fail(format!("dt = {} must be positive", self.dt));
        }
        if !(self.spin_up >= 0.0) || self.t_end < self.spin_up {
            return fail(format!(
                "need t_end >= spin_up >= 0, got t_end = {}, spin_up = {}",
                self.t_end, self.spin_up
            ));
        }
        let grid = self.grid()?;
        let cfl = self.velocity_scale() * self.dt / grid.min_spacing();
        if cfl > 0.5 + 1e-12 {
            return fail(format!(
                "CFL number {cfl:.4} exceeds 0.5 (velocity scale {}, dt {}, min spacing {})",
                self.velocity_scale(),
                self.dt,
                grid.min_spacing()
            ));
        }
        if self.perturbation.amplitude < 0.0 {
            return fail("perturbation amplitude must be nonnegative".into());
        }
        if self.diag_interval == 0 {
            return fail("diag_interval must be at least 1".into());
        }
        if !(self.max_divergence_rel > 0.0) {
            return fail("max_divergence_rel must be positive".into());
        }
        if !self.forcing.iter().all(|f| f.is_finite()) {
            return fail("forcing must be finite".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_default_validates() {
        SimConfig::desk_default().validate().unwrap();
    }

    #[test]
    fn rejects_tau_beyond_turnover() {
        let mut cfg = SimConfig::desk_default();
        cfg.tau = 2.0 * cfg.box_l / cfg.lid_velocity;
        assert!(matches!(cfg.validate(), Err(CoreError::InvalidConfig(msg)) if msg.contains("T*")));
    }

    #[test]
    fn rejects_cfl_violation() {
        let mut cfg = SimConfig::desk_default();
        cfg.dt = 1.0;
        assert!(matches!(cfg.validate(), Err(CoreError::InvalidConfig(msg)) if msg.contains("CFL")));
    }

    #[test]
    fn cfl_uses_perturbation_amplitude() {
        let mut cfg = SimConfig::desk_default();
        cfg.perturbation.amplitude = 10.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn beta_from_reynolds_estimate() {
        let mut cfg = SimConfig::desk_default();
        cfg.nu = cfg.lid_velocity * cfg.box_l / 10.0; // Re = 10
        assert!((cfg.beta_configured() - 0.0125).abs() < 1e-15);
        cfg.re_eff_estimate = Some(500.0);
        assert!((cfg.beta_configured() - 0.125 / 500.0).abs() < 1e-18);
    }

    #[test]
    fn resting_lid_allows_any_tau() {
        let mut cfg = SimConfig::desk_default();
        cfg.lid_velocity = 0.0;
        cfg.tau = 100.0;
        cfg.perturbation.amplitude = 0.1;
        cfg.validate().unwrap();
    }
}
