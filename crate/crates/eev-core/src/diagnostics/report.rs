//! Effective viscosity, the three dissipation bounds, and the per-interval
//! slab-term chain inequality, all evaluated from recorded diagnostics so
//! that a live run and a post-hoc report share one code path.

use crate::bounds::{mu_beta_threshold_coefficient, slab_multiplier};
use crate::diagnostics::averager::TimeAverager;
use crate::diagnostics::nearwall::mu_slab_max;
use crate::diagnostics::record::DissipationRecord;
use crate::solver::SimConfig;
use crate::{CoreError, Result};

pub const SERIES_EPS_MODEL: &str = "eps_model";
pub const SERIES_DISS_INTEGRAL: &str = "diss_integral";
pub const SERIES_GRADSQ_INTEGRAL: &str = "gradsq_integral";
pub const SERIES_NW_NU_TURB: &str = "nw_nu_turb_slab";
pub const SERIES_NW_DZ_FLUCT: &str = "nw_dz_fluct";
pub const SERIES_NW_GRADSQ: &str = "nw_gradsq";

/// Result of the effective-viscosity ratio of time-averaged integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveViscosity {
    pub nu_eff: f64,
    pub re_eff: f64,
    /// Near-wall fraction `(1/8) / re_eff`, clamped to at most 1.
    pub beta: f64,
    /// True when `re_eff < 1/8` forced the clamp; callers should warn.
    pub clamped: bool,
}

/// `nu_eff` from already-averaged dissipation and gradient integrals.
pub fn effective_viscosity_from_integrals(
    avg_diss_integral: f64,
    avg_gradsq_integral: f64,
    lid_velocity: f64,
    box_l: f64,
) -> Result<EffectiveViscosity> {
    if !(avg_gradsq_integral > 0.0) {
        return Err(CoreError::Undefined(format!(
            "undefined nu_eff: time-averaged gradient integral is {avg_gradsq_integral}"
        )));
    }
    let nu_eff = avg_diss_integral / avg_gradsq_integral;
    let re_eff = lid_velocity * box_l / nu_eff;
    let clamped = re_eff < 0.125;
    let beta = if clamped { 1.0 } else { 0.125 / re_eff };
    Ok(EffectiveViscosity { nu_eff, re_eff, beta, clamped })
}

/// `nu_eff`, `Re_eff` and the near-wall fraction from the registered
/// dissipation and gradient series.
pub fn effective_viscosity(
    avg: &TimeAverager,
    lid_velocity: f64,
    box_l: f64,
) -> Result<EffectiveViscosity> {
    effective_viscosity_from_integrals(
        avg.average(SERIES_DISS_INTEGRAL)?,
        avg.average(SERIES_GRADSQ_INTEGRAL)?,
        lid_velocity,
        box_l,
    )
}

/// Every named factor entering the three bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundMultipliers {
    /// The constant `5/2` term.
    pub base: f64,
    /// `16 nu / nu_eff`.
    pub viscous: f64,
    /// `32 * <slab average of nu_turb / nu_eff>`.
    pub slab: f64,
    /// `cbrt(3)/6 * C26^2`.
    pub slab_constant: f64,
    /// `tau / T*` with `T* = L / U` (zero for a resting lid).
    pub tau_over_turnover: f64,
    /// Largest `mu` attained in the near-wall slab.
    pub mu_slab: f64,
    /// `0.27064... / Re`, the hypothesis threshold on `mu_beta`.
    pub mu_beta_threshold: f64,
    /// `5 + 32 nu / nu_eff`, the closed-bound prefactor.
    pub closed_base: f64,
}

/// Both sides of the three dissipation bounds with satisfaction flags.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `<eps_model>` over the averaging window.
    pub lhs: f64,
    pub nu_eff: f64,
    pub re_eff: f64,
    /// A-posteriori near-wall fraction `(1/8)/Re_eff`.
    pub beta: f64,
    /// A-priori fraction that froze the solver's `mu(z)` breakpoint.
    pub beta_configured: f64,
    pub re_eff_clamped: bool,
    pub rhs_a: f64,
    pub satisfied_a: bool,
    /// Variant using the `|du'/dz|^2` slab average.
    pub rhs_b_dz: f64,
    pub satisfied_b_dz: bool,
    /// Variant using the full `|grad u'|^2` slab average.
    pub rhs_b_grad: f64,
    pub satisfied_b_grad: bool,
    pub rhs_c: f64,
    /// Whether `mu_beta` sits below its threshold, making `rhs_c` applicable.
    pub rhs_c_hypothesis_met: bool,
    /// `None` when the hypothesis is not met.
    pub satisfied_c: Option<bool>,
    /// `37 U^3/L`, the closed bound's universal ceiling.
    pub rhs_c_ceiling: f64,
    /// Relative gap between the window average of `eps_model` and its
    /// last-half-window average.
    pub convergence_indicator: f64,
    /// Last recorded near-wall scaling slope, if any.
    pub nw_slope: Option<f64>,
    pub multipliers: BoundMultipliers,
}

/// Rebuilds the averaging state a run maintains from its recorded rows.
pub fn averager_from_records(records: &[DissipationRecord], cfg: &SimConfig) -> Result<TimeAverager> {
    if records.is_empty() {
        return Err(CoreError::Precondition("no diagnostic records to average".into()));
    }
    let vol = cfg.grid()?.volume();
    let mut avg = TimeAverager::new(cfg.spin_up);
    for r in records {
        avg.record(SERIES_EPS_MODEL, r.t, r.eps_model);
        avg.record(SERIES_DISS_INTEGRAL, r.t, r.eps_model * vol);
        avg.record(SERIES_GRADSQ_INTEGRAL, r.t, r.eps_viscous * vol / cfg.nu);
        avg.record(SERIES_NW_NU_TURB, r.t, r.nw_nu_ratio * r.nu_eff_running);
        avg.record(SERIES_NW_DZ_FLUCT, r.t, r.nw_dz_fluct);
        avg.record(SERIES_NW_GRADSQ, r.t, r.nw_gradsq);
    }
    Ok(avg)
}

/// Evaluates all three bounds from the recorded diagnostics.
pub fn bound_report(records: &[DissipationRecord], cfg: &SimConfig) -> Result<BoundReport> {
    let avg = averager_from_records(records, cfg)?;
    let eff = effective_viscosity(&avg, cfg.lid_velocity, cfg.box_l)?;
    let u3l = cfg.lid_velocity.powi(3) / cfg.box_l;
    let params = cfg.eddy_params()?;

    let base = 2.5;
    let viscous = 16.0 * cfg.nu / eff.nu_eff;
    let slab = 32.0 * avg.average(SERIES_NW_NU_TURB)? / eff.nu_eff;
    let slab_constant = slab_multiplier();
    let turnover = cfg.turnover_time();
    let tau_over_turnover = if turnover.is_finite() { cfg.tau / turnover } else { 0.0 };
    let mu_slab = mu_slab_max(&params, eff.beta);
    let re = cfg.reynolds();
    let mu_beta_threshold =
        if re > 0.0 { mu_beta_threshold_coefficient() / re } else { f64::INFINITY };
    let closed_base = 5.0 + 32.0 * cfg.nu / eff.nu_eff;

    let lhs = avg.average(SERIES_EPS_MODEL)?;
    let rhs_a = (base + viscous + slab) * u3l;
    let slab_term = |fluct_avg: f64| {
        slab_constant * mu_slab * tau_over_turnover * eff.nu_eff * fluct_avg
    };
    let rhs_b_dz = (base + viscous) * u3l + slab_term(avg.average(SERIES_NW_DZ_FLUCT)?);
    let rhs_b_grad = (base + viscous) * u3l + slab_term(avg.average(SERIES_NW_GRADSQ)?);
    let rhs_c = closed_base * u3l;
    let hypothesis_met = cfg.mu_beta <= mu_beta_threshold * (1.0 + 1e-12);

    Ok(BoundReport {
        lhs,
        nu_eff: eff.nu_eff,
        re_eff: eff.re_eff,
        beta: eff.beta,
        beta_configured: cfg.beta_configured(),
        re_eff_clamped: eff.clamped,
        rhs_a,
        satisfied_a: lhs <= rhs_a,
        rhs_b_dz,
        satisfied_b_dz: lhs <= rhs_b_dz,
        rhs_b_grad,
        satisfied_b_grad: lhs <= rhs_b_grad,
        rhs_c,
        rhs_c_hypothesis_met: hypothesis_met,
        satisfied_c: if hypothesis_met { Some(lhs <= rhs_c) } else { None },
        rhs_c_ceiling: 37.0 * u3l,
        convergence_indicator: avg.convergence_indicator(SERIES_EPS_MODEL)?,
        nw_slope: records.iter().rev().find_map(|r| r.nw_slope),
        multipliers: BoundMultipliers {
            base,
            viscous,
            slab,
            slab_constant,
            tau_over_turnover,
            mu_slab,
            mu_beta_threshold,
            closed_base,
        },
    })
}

/// Both sides of the per-interval slab-term chain inequality
/// `32 (U^3/L) <nu_turb/nu_eff>_slab <= cbrt(3)/6 C26^2 mu (tau/T*) nu_eff
/// <|du'/dz|^2>_slab`, evaluated on one record.
pub fn proposition_chain(r: &DissipationRecord, cfg: &SimConfig) -> Result<(f64, f64)> {
    let params = cfg.eddy_params()?;
    let u3l = cfg.lid_velocity.powi(3) / cfg.box_l;
    let turnover = cfg.turnover_time();
    let tau_over_turnover = if turnover.is_finite() { cfg.tau / turnover } else { 0.0 };
    let lhs = 32.0 * u3l * r.nw_nu_ratio;
    let rhs = slab_multiplier()
        * mu_slab_max(&params, r.beta)
        * tau_over_turnover
        * r.nu_eff_running
        * r.nw_dz_fluct;
    Ok((lhs, rhs))
}

/// Chain satisfaction with a small relative slack for round-off.
pub fn proposition_chain_holds(r: &DissipationRecord, cfg: &SimConfig) -> Result<bool> {
    let (lhs, rhs) = proposition_chain(r, cfg)?;
    Ok(lhs <= rhs * (1.0 + 1e-9) + 1e-300)
}
