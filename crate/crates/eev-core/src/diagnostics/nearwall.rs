//! Near-wall slab statistics over `S_beta`, the slab of thickness `beta * L`
//! below the moving lid, including a sub-cell reconstruction for slabs
//! thinner than the wall half-cell and the measured `nu_turb` scaling
//! exponent.

use crate::diagnostics::record::fluctuation_gradients;
use crate::ensemble::EddyViscosityParams;
use crate::fields::{volume_integral, Region, ScalarField};
use crate::solver::EnsembleState;
use crate::{CoreError, Result};

/// How a cell-centered profile is extended into the lid half-cell when the
/// slab is thinner than the grid can resolve directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reconstruction {
    /// Quantity vanishes quadratically at the wall (squared fluctuations and
    /// `nu_turb`): `q(zt) = p_top * (2 zt / dz)^2` for wall distance
    /// `zt <= dz/2`, cell-center constants beyond.
    VanishesAtWall,
    /// Piecewise-constant per layer (gradient-squared quantities).
    Constant,
}

/// Slab average over wall distance `zt in (0, beta_l)` below the lid of a
/// cell-centered field, via its horizontal averages.
pub fn slab_average_near_lid(f: &ScalarField, beta_l: f64, recon: Reconstruction) -> Result<f64> {
    let g = f.grid();
    let dz = g.dz();
    if !(beta_l > 0.0) || beta_l > g.box_length() + 1e-12 {
        return Err(CoreError::EmptyRegion(format!(
            "slab thickness {beta_l} must lie in (0, L]"
        )));
    }
    let ha = f.horizontal_average();
    let nz = g.nz();
    // profile indexed by layer from the lid down; layer m spans zt in
    // [m dz, (m+1) dz] with center value ha[nz-1-m]
    let prof = |m: usize| ha[nz - 1 - m];
    let t = beta_l.min(g.box_length());
    let mut integral = 0.0;
    match recon {
        Reconstruction::VanishesAtWall => {
            let s = t.min(0.5 * dz);
            integral += prof(0) * 4.0 / (3.0 * dz * dz) * s.powi(3);
            if t > 0.5 * dz {
                integral += prof(0) * (t.min(dz) - 0.5 * dz);
            }
        }
        Reconstruction::Constant => {
            integral += prof(0) * t.min(dz);
        }
    }
    let mut m = 1;
    while (m as f64) * dz < t && m < nz {
        let lo = m as f64 * dz;
        let hi = ((m + 1) as f64 * dz).min(t);
        integral += prof(m) * (hi - lo);
        m += 1;
    }
    Ok(integral / t)
}

/// Largest `mu` value attained anywhere in a slab of thickness
/// `beta_slab * L` below the lid, given the piecewise-in-z coefficient.
pub fn mu_slab_max(params: &EddyViscosityParams, beta_slab: f64) -> f64 {
    if params.beta <= 0.0 {
        params.mu
    } else if beta_slab <= params.beta {
        // slab entirely inside the configured near-wall layer
        params.mu_beta
    } else {
        params.mu.max(params.mu_beta)
    }
}

/// Cell-resolved slab averages of `nu_turb / nu_eff` and of the
/// ensemble-mean `|du'/dz|^2` over `S_beta`.
pub fn near_wall_stats(state: &EnsembleState, beta: f64, nu_eff: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(CoreError::Precondition(format!("beta = {beta} must lie in (0, 1]")));
    }
    if !(nu_eff > 0.0) {
        return Err(CoreError::Precondition(format!("nu_eff = {nu_eff} must be positive")));
    }
    let g = state.grid();
    let beta_l = beta * g.box_length();
    if beta_l < g.dz() {
        return Err(CoreError::Precondition(format!(
            "near-wall slab thickness {beta_l:.3e} is below one cell layer (dz = {:.3e}); \
             refine nz to resolve S_beta",
            g.dz()
        )));
    }
    let region = Region::Slab { z0: g.box_length() - beta_l, z1: g.box_length() };
    let slab_vol = beta_l * g.box_length() * g.box_length();
    let nu_ratio = volume_integral(&state.nu_turb, region)? / (nu_eff * slab_vol);
    let (dzf, _) = fluctuation_gradients(state)?;
    let dz_fluct = volume_integral(&dzf, region)? / slab_vol;
    Ok((nu_ratio, dz_fluct))
}

/// Least-squares slope of `log(horizontal avg of nu_turb)` against
/// `log(wall distance)` over the near-wall fitting window: the top
/// `max(4, ceil(beta L / dz))` layers. `None` when fewer than two window
/// layers carry positive values.
pub fn near_wall_scaling_exponent(state: &EnsembleState, beta: f64) -> Result<Option<f64>> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(CoreError::Precondition(format!("beta = {beta} must lie in (0, 1]")));
    }
    let g = state.grid();
    let nz = g.nz();
    let layers = ((beta * g.box_length() / g.dz()).ceil() as usize).clamp(4, nz);
    let ha = state.nu_turb.horizontal_average();
    let mut pts = Vec::new();
    for m in 0..layers {
        let val = ha[nz - 1 - m];
        if val > 0.0 {
            let zt = (m as f64 + 0.5) * g.dz();
            pts.push((zt.ln(), val.ln()));
        }
    }
    if pts.len() < 2 {
        return Ok(None);
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Ok(None);
    }
    Ok(Some((n * sxy - sx * sy) / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::CapLength;
    use crate::fields::{Grid, VectorField, WallBC};
    use crate::solver::{initialize_ensemble, SimConfig};
    use approx::assert_relative_eq;

    fn small_cfg() -> SimConfig {
        let mut cfg = SimConfig::desk_default();
        cfg.nx = 8;
        cfg.ny = 8;
        cfg.nz = 16;
        cfg.ensemble_size = 2;
        cfg
    }

    #[test]
    fn zero_nu_turb_gives_zero_ratio() {
        let cfg = small_cfg();
        let state = initialize_ensemble(&cfg).unwrap();
        let (ratio, dzf) = near_wall_stats(&state, 0.25, 0.05).unwrap();
        assert_eq!(ratio, 0.0);
        assert_eq!(dzf, 0.0);
    }

    #[test]
    fn nu_turb_equal_nu_eff_gives_ratio_one() {
        let cfg = small_cfg();
        let mut state = initialize_ensemble(&cfg).unwrap();
        let nu_eff = 0.037;
        state.nu_turb = ScalarField::constant(state.grid(), nu_eff);
        let (ratio, _) = near_wall_stats(&state, 0.5, nu_eff).unwrap();
        assert_relative_eq!(ratio, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn linear_fluctuation_gives_constant_dz_average() {
        // members +/- c(L - z) in x => u' = +/- c(L - z), |du'/dz|^2 = c^2
        let mut cfg = small_cfg();
        cfg.lid_velocity = 0.0;
        cfg.tau = 1.0;
        let mut state = initialize_ensemble(&cfg).unwrap();
        let grid = state.grid().clone();
        let c = 1.3;
        let l = grid.box_length();
        for (idx, m) in state.ensemble.members_mut().iter_mut().enumerate() {
            let sign = if idx == 0 { 1.0 } else { -1.0 };
            let mut f = VectorField::from_fn(
                &grid,
                move |_, _, z| sign * c * (l - z),
                |_, _, _| 0.0,
                |_, _, _| 0.0,
            );
            f.apply_boundary_conditions(&WallBC::new(0.0));
            *m = f;
        }
        state.stats = crate::ensemble::fluctuation_stats(&state.ensemble);
        // slab well away from the bottom wall, where the reflected ghost is
        // exact for the linear profile vanishing at the lid
        let (_, dzf) = near_wall_stats(&state, 0.25, 1.0).unwrap();
        assert_relative_eq!(dzf, c * c, max_relative = 1e-12);
    }

    #[test]
    fn sub_layer_beta_is_rejected_with_refinement_hint() {
        let cfg = small_cfg();
        let state = initialize_ensemble(&cfg).unwrap();
        let err = near_wall_stats(&state, 1e-4, 0.05).unwrap_err();
        assert!(matches!(err, CoreError::Precondition(msg) if msg.contains("refine nz")));
    }

    #[test]
    fn quadratic_reconstruction_is_exact_for_squared_wall_distance() {
        let g = Grid::new(1.0, 4, 4, 32).unwrap();
        let f = ScalarField::from_fn(&g, |_, _, z| (g.box_length() - z).powi(2));
        // sub-half-cell slab: exact average of zt^2 over (0, t) is t^2 / 3
        let t = 0.25 * g.dz();
        let avg = slab_average_near_lid(&f, t, Reconstruction::VanishesAtWall).unwrap();
        assert_relative_eq!(avg, t * t / 3.0, max_relative = 1e-12);
        // multi-layer slab stays close to the exact profile average t^2/3
        let t2 = 5.0 * g.dz();
        let avg2 = slab_average_near_lid(&f, t2, Reconstruction::VanishesAtWall).unwrap();
        assert_relative_eq!(avg2, t2 * t2 / 3.0, max_relative = 0.05);
    }

    #[test]
    fn constant_reconstruction_preserves_constants() {
        let g = Grid::new(2.0, 4, 4, 16).unwrap();
        let f = ScalarField::constant(&g, 1.7);
        for &t in &[0.1 * g.dz(), g.dz(), 3.7 * g.dz(), g.box_length()] {
            let avg = slab_average_near_lid(&f, t, Reconstruction::Constant).unwrap();
            assert_relative_eq!(avg, 1.7, max_relative = 1e-12);
        }
    }

    #[test]
    fn slab_average_rejects_empty_slab() {
        let g = Grid::new(1.0, 4, 4, 8).unwrap();
        let f = ScalarField::constant(&g, 1.0);
        assert!(slab_average_near_lid(&f, 0.0, Reconstruction::Constant).is_err());
    }

    #[test]
    fn scaling_exponent_recovers_power_laws() {
        let cfg = small_cfg();
        let mut state = initialize_ensemble(&cfg).unwrap();
        let g = state.grid().clone();
        let l = g.box_length();
        state.nu_turb = ScalarField::from_fn(&g, |_, _, z| 0.4 * (l - z).powi(2));
        let s2 = near_wall_scaling_exponent(&state, 0.25).unwrap().unwrap();
        assert_relative_eq!(s2, 2.0, epsilon = 1e-10);
        state.nu_turb = ScalarField::from_fn(&g, |_, _, z| 0.4 * (l - z));
        let s1 = near_wall_scaling_exponent(&state, 0.25).unwrap().unwrap();
        assert_relative_eq!(s1, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn scaling_exponent_absent_for_zero_nu_turb() {
        let cfg = small_cfg();
        let state = initialize_ensemble(&cfg).unwrap();
        assert_eq!(near_wall_scaling_exponent(&state, 0.25).unwrap(), None);
    }

    #[test]
    fn mu_slab_max_follows_piecewise_coefficient() {
        let p = EddyViscosityParams::new(0.5, 0.01, 0.1, CapLength::Off, 1e-3).unwrap();
        assert_eq!(mu_slab_max(&p, 1e-4), 0.01); // inside the configured layer
        assert_eq!(mu_slab_max(&p, 0.1), 0.5); // spans both pieces
        let uniform = EddyViscosityParams::uniform(0.3, 0.1).unwrap();
        assert_eq!(mu_slab_max(&uniform, 0.5), 0.3);
    }
}
