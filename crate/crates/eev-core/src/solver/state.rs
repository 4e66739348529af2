//! Ensemble state, deterministic initialization, and the IMEX time step with
//! its per-step energy ledger.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ensemble::{fluctuation_stats, turbulent_viscosity, Ensemble, FluctuationStats};
use crate::fields::{
    dot, kinetic_energy, max_abs_divergence, zip_with, Grid, ScalarField, VectorField, WallBC,
};
use crate::solver::advection::advection;
use crate::solver::config::SimConfig;
use crate::solver::diffusion::{diffuse_implicit, diffusion_quadratic_form};
use crate::solver::projection::pressure_project;
use crate::{CoreError, Result};

/// One step of the discrete energy balance, ensemble-averaged. The residual
/// is the left-hand side of the energy inequality minus its right-hand side;
/// it must stay below `slack`, which collects the measured advection
/// cross-term, the explicit-advection O(dt) consistency term, and an
/// iterative-solver allowance.
#[derive(Debug, Clone, Copy)]
pub struct LedgerEntry {
    pub step: usize,
    pub time: f64,
    pub kinetic_energy_before: f64,
    pub kinetic_energy_after: f64,
    pub dissipation: f64,
    pub boundary_work: f64,
    pub advection_cross: f64,
    pub advection_norm_sq: f64,
    pub residual: f64,
    pub slack: f64,
    pub max_divergence: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct EnsembleState {
    pub time: f64,
    pub step: usize,
    pub ensemble: Ensemble,
    pub pressures: Vec<ScalarField>,
    pub nu_turb: ScalarField,
    pub stats: FluctuationStats,
    pub ledger: Vec<LedgerEntry>,
}

impl EnsembleState {
    pub fn grid(&self) -> &Grid {
        self.ensemble.grid()
    }

    /// Ensemble average of the members' kinetic energies.
    pub fn mean_kinetic_energy(&self) -> f64 {
        let j = self.ensemble.size() as f64;
        self.ensemble.members().iter().map(kinetic_energy).sum::<f64>() / j
    }

    pub fn max_divergence(&self) -> f64 {
        self.ensemble
            .members()
            .iter()
            .map(max_abs_divergence)
            .fold(0.0, f64::max)
    }
}

struct Mode {
    family: u8,
    m: f64,
    n: f64,
    phase: f64,
    coeff: f64,
}

/// Solenoidal perturbation from random streamfunction sine modes; both the
/// tangential and wall-normal parts vanish at the walls.
fn perturbation_field(grid: &Grid, modes: usize, seed: u64, member: u64, amplitude: f64) -> VectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(member.wrapping_add(1));
    let l = grid.box_length();
    let pi = std::f64::consts::PI;
    let drawn: Vec<Mode> = (0..modes)
        .map(|_| Mode {
            family: rng.gen_range(0..2u8),
            m: rng.gen_range(1..4u32) as f64,
            n: rng.gen_range(1..4u32) as f64,
            phase: rng.gen_range(0.0..2.0 * pi),
            coeff: rng.gen_range(0.5..1.0),
        })
        .collect();
    // streamfunction psi = a sin(alpha s + phase) sin^2(pi n z / L) in the
    // (x,z) or (y,z) plane; velocity = (d psi/dz, -d psi/ds)
    let s_fn = move |n: f64, z: f64| (pi * n * z / l).sin().powi(2);
    let ds_fn = move |n: f64, z: f64| (pi * n / l) * (2.0 * pi * n * z / l).sin();
    let tangential = |modes: &[Mode], family: u8, s: f64, z: f64| -> f64 {
        modes
            .iter()
            .filter(|md| md.family == family)
            .map(|md| {
                let alpha = 2.0 * pi * md.m / l;
                let a = md.coeff * l / (pi * md.n.max(2.0 * md.m));
                a * (alpha * s + md.phase).sin() * ds_fn(md.n, z)
            })
            .sum()
    };
    let normal = |modes: &[Mode], x: f64, y: f64, z: f64| -> f64 {
        modes
            .iter()
            .map(|md| {
                let alpha = 2.0 * pi * md.m / l;
                let a = md.coeff * l / (pi * md.n.max(2.0 * md.m));
                let s = if md.family == 0 { x } else { y };
                -a * alpha * (alpha * s + md.phase).cos() * s_fn(md.n, z)
            })
            .sum()
    };
    let mut f = VectorField::from_fn(
        grid,
        |x, _, z| tangential(&drawn, 0, x, z),
        |_, y, z| tangential(&drawn, 1, y, z),
        |x, y, z| normal(&drawn, x, y, z),
    );
    let peak = f
        .u_raw()
        .iter()
        .chain(f.v_raw())
        .chain(f.w_raw())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > 0.0 {
        f.scale(amplitude / peak);
    }
    f
}

/// Builds the initial state: Couette base plus per-member solenoidal
/// perturbations, projected and with the shared eddy viscosity computed.
pub fn initialize_ensemble(cfg: &SimConfig) -> Result<EnsembleState> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let bc = WallBC::new(cfg.lid_velocity);
    let params = cfg.eddy_params()?;

    let mut members = Vec::with_capacity(cfg.ensemble_size);
    let mut pressures = Vec::with_capacity(cfg.ensemble_size);
    for j in 0..cfg.ensemble_size {
        let mut m = VectorField::couette(&grid, cfg.lid_velocity);
        if cfg.perturbation.amplitude > 0.0 {
            let p = perturbation_field(
                &grid,
                cfg.perturbation.modes,
                cfg.perturbation.seed,
                j as u64,
                cfg.perturbation.amplitude,
            );
            m.axpy(1.0, &p)?;
        }
        m.apply_boundary_conditions(&bc);
        let mut psi = ScalarField::zeros(&grid);
        pressure_project(&mut m, &mut psi, &bc)?;
        members.push(m);
        pressures.push(psi);
    }
    let ensemble = Ensemble::new(members)?;
    let stats = fluctuation_stats(&ensemble);
    let nu_turb = turbulent_viscosity(&stats, &params)?;
    Ok(EnsembleState {
        time: 0.0,
        step: 0,
        ensemble,
        pressures,
        nu_turb,
        stats,
        ledger: Vec::new(),
    })
}

struct MemberOutcome {
    velocity: VectorField,
    pressure: ScalarField,
    advection_cross: f64,
    advection_norm_sq: f64,
    dissipation: f64,
    boundary_work: f64,
    max_divergence: f64,
}

fn step_member(
    member: &VectorField,
    pressure: &ScalarField,
    nu_total: &ScalarField,
    cfg: &SimConfig,
    bc: &WallBC,
) -> Result<MemberOutcome> {
    let grid = member.grid().clone();
    let dt = cfg.dt;

    // explicit advection + forcing
    let n = advection(member);
    let advection_cross = dot(&n, member)?;
    let advection_norm_sq = dot(&n, &n)?;
    let mut rhs = member.clone();
    rhs.axpy(-dt, &n)?;
    if cfg.forcing != [0.0; 3] {
        let (nx, ny, nz) = (grid.nx(), grid.ny(), grid.nz());
        for k in 1..=nz {
            for j in 0..ny {
                for i in 0..nx {
                    let u = rhs.u(i as isize, j as isize, k) + dt * cfg.forcing[0];
                    let v = rhs.v(i as isize, j as isize, k) + dt * cfg.forcing[1];
                    rhs.set_u(i, j, k, u);
                    rhs.set_v(i, j, k, v);
                }
            }
        }
        for k in 1..nz {
            for j in 0..ny {
                for i in 0..nx {
                    let w = rhs.w(i as isize, j as isize, k) + dt * cfg.forcing[2];
                    rhs.set_w(i, j, k, w);
                }
            }
        }
    }

    // implicit diffusion with the frozen shared coefficient
    let mut vel = member.clone();
    diffuse_implicit(&mut vel, &rhs, nu_total, bc, dt)?;
    let (dissipation, boundary_work) = diffusion_quadratic_form(&vel, nu_total, bc);

    // projection
    let mut psi = pressure.clone();
    pressure_project(&mut vel, &mut psi, bc)?;
    let max_divergence = max_abs_divergence(&vel);

    Ok(MemberOutcome {
        velocity: vel,
        pressure: psi,
        advection_cross,
        advection_norm_sq,
        dissipation,
        boundary_work,
        max_divergence,
    })
}

/// One IMEX step for every member with the shared `nu_turb` frozen from the
/// previous step, followed by the statistics reduction and the energy-ledger
/// update.
pub fn advance(state: &mut EnsembleState, cfg: &SimConfig) -> Result<()> {
    let bc = WallBC::new(cfg.lid_velocity);
    let params = cfg.eddy_params()?;
    let nu_total = zip_with(&ScalarField::constant(state.grid(), cfg.nu), &state.nu_turb, |a, b| a + b)?;

    let ke_before = state.mean_kinetic_energy();
    let j = state.ensemble.size();

    let outcomes: Vec<MemberOutcome> = state
        .ensemble
        .members()
        .par_iter()
        .zip(state.pressures.par_iter())
        .map(|(m, p)| step_member(m, p, &nu_total, cfg, &bc))
        .collect::<Result<Vec<_>>>()?;

    let step = state.step + 1;
    for (idx, o) in outcomes.iter().enumerate() {
        if !o.velocity.all_finite() {
            return Err(CoreError::NonFinite {
                step,
                context: format!("member {idx} velocity after IMEX step"),
            });
        }
    }

    // sequential reductions for bit-reproducibility
    let inv_j = 1.0 / j as f64;
    let mut dissipation = 0.0;
    let mut boundary_work = 0.0;
    let mut advection_cross = 0.0;
    let mut advection_norm_sq = 0.0;
    let mut max_divergence = 0.0f64;
    for o in &outcomes {
        dissipation += o.dissipation * inv_j;
        boundary_work += o.boundary_work * inv_j;
        advection_cross += o.advection_cross * inv_j;
        advection_norm_sq += o.advection_norm_sq * inv_j;
        max_divergence = max_divergence.max(o.max_divergence);
    }

    let div_tol = cfg.max_divergence_rel * (cfg.velocity_scale() / cfg.box_l).max(1e-30)
        + 1e-14;
    if max_divergence > div_tol {
        return Err(CoreError::Precondition(format!(
            "divergence {max_divergence:.3e} exceeds tolerance {div_tol:.3e} at step {step}"
        )));
    }

    let (members, pressures): (Vec<_>, Vec<_>) =
        outcomes.into_iter().map(|o| (o.velocity, o.pressure)).unzip();
    state.ensemble = Ensemble::new(members)?;
    state.pressures = pressures;
    state.stats = fluctuation_stats(&state.ensemble);
    state.nu_turb = turbulent_viscosity(&state.stats, &params)?;
    if !state.nu_turb.all_finite() {
        return Err(CoreError::NonFinite { step, context: "eddy viscosity".into() });
    }

    let ke_after = state.mean_kinetic_energy();
    let residual = (ke_after - ke_before) / cfg.dt + dissipation - boundary_work;
    let slack = advection_cross.abs()
        + 0.5 * cfg.dt * advection_norm_sq
        + 1e-8 * (1.0 + 2.0 * ke_before) / cfg.dt
        + 1e-8 * (1.0 + dissipation + boundary_work.abs());
    let entry = LedgerEntry {
        step,
        time: state.time + cfg.dt,
        kinetic_energy_before: ke_before,
        kinetic_energy_after: ke_after,
        dissipation,
        boundary_work,
        advection_cross,
        advection_norm_sq,
        residual,
        slack,
        max_divergence,
        satisfied: residual <= slack,
    };
    state.ledger.push(entry);
    state.time += cfg.dt;
    state.step = step;
    Ok(())
}
