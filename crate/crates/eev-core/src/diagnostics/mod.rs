//! Averaged quantities the dissipation bounds speak about: the
//! viscous/turbulent dissipation split, effective viscosity and near-wall
//! slab statistics, time averaging, bound evaluation, and the diagnostics
//! table serialization.

pub mod averager;
pub mod csv;
pub mod nearwall;
pub mod record;
pub mod report;

pub use averager::TimeAverager;
pub use csv::{records_from_csv, records_to_csv, render_bound_report, sha256_hex, CSV_COLUMNS};
pub use nearwall::{
    mu_slab_max, near_wall_scaling_exponent, near_wall_stats, slab_average_near_lid,
    Reconstruction,
};
pub use record::{dissipation_rates, fluctuation_gradients, DissipationRates, DissipationRecord};
pub use report::{
    averager_from_records, bound_report, effective_viscosity,
    effective_viscosity_from_integrals, proposition_chain, proposition_chain_holds,
    BoundMultipliers, BoundReport, EffectiveViscosity, SERIES_DISS_INTEGRAL, SERIES_EPS_MODEL,
    SERIES_GRADSQ_INTEGRAL, SERIES_NW_DZ_FLUCT, SERIES_NW_GRADSQ, SERIES_NW_NU_TURB,
};
