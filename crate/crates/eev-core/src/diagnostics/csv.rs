//! Lossless text serialization of diagnostic records, the structured bound
//! report, and content hashing for run manifests.

use sha2::{Digest, Sha256};

use crate::diagnostics::record::DissipationRecord;
use crate::diagnostics::report::BoundReport;
use crate::{CoreError, Result};

/// Fixed column order of the diagnostics table.
pub const CSV_COLUMNS: [&str; 12] = [
    "t",
    "eps_viscous",
    "eps_turb",
    "eps_model",
    "kinetic_energy",
    "nu_eff_running",
    "re_eff_running",
    "beta",
    "nw_nu_ratio",
    "nw_dz_fluct",
    "nw_slope",
    "nw_gradsq",
];

/// 17-significant-digit decimal, enough for a lossless f64 round trip.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn records_to_csv(records: &[DissipationRecord]) -> String {
    let mut out = String::new();
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for r in records {
        let slope = r.nw_slope.unwrap_or(f64::NAN);
        let fields = [
            fmt(r.t),
            fmt(r.eps_viscous),
            fmt(r.eps_turb),
            fmt(r.eps_model),
            fmt(r.kinetic_energy),
            fmt(r.nu_eff_running),
            fmt(r.re_eff_running),
            fmt(r.beta),
            fmt(r.nw_nu_ratio),
            fmt(r.nw_dz_fluct),
            fmt(slope),
            fmt(r.nw_gradsq),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn parse_field(raw: &str, column: &str, line: usize) -> Result<f64> {
    raw.trim().parse::<f64>().map_err(|_| {
        CoreError::Malformed(format!(
            "line {line}: column '{column}' holds unparseable value '{raw}'"
        ))
    })
}

pub fn records_from_csv(text: &str) -> Result<Vec<DissipationRecord>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CoreError::Malformed("empty diagnostics table".into()))?;
    let found: Vec<&str> = header.split(',').map(str::trim).collect();
    let missing: Vec<&str> =
        CSV_COLUMNS.iter().copied().filter(|c| !found.contains(c)).collect();
    if !missing.is_empty() {
        return Err(CoreError::Malformed(format!(
            "diagnostics table is missing columns: {}",
            missing.join(", ")
        )));
    }
    if found != CSV_COLUMNS {
        return Err(CoreError::Malformed(format!(
            "diagnostics table columns out of order: found '{}'",
            header.trim()
        )));
    }
    let mut records = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != CSV_COLUMNS.len() {
            return Err(CoreError::Malformed(format!(
                "line {}: expected {} fields, found {}",
                lineno + 1,
                CSV_COLUMNS.len(),
                fields.len()
            )));
        }
        let get = |idx: usize| parse_field(fields[idx], CSV_COLUMNS[idx], lineno + 1);
        let slope = get(10)?;
        records.push(DissipationRecord {
            t: get(0)?,
            eps_viscous: get(1)?,
            eps_turb: get(2)?,
            eps_model: get(3)?,
            kinetic_energy: get(4)?,
            nu_eff_running: get(5)?,
            re_eff_running: get(6)?,
            beta: get(7)?,
            nw_nu_ratio: get(8)?,
            nw_dz_fluct: get(9)?,
            nw_slope: if slope.is_nan() { None } else { Some(slope) },
            nw_gradsq: get(11)?,
        });
    }
    Ok(records)
}

/// Structured text rendering of a bound report with every named multiplier.
pub fn render_bound_report(rep: &BoundReport) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        s.push_str(k);
        s.push_str(" = ");
        s.push_str(&v);
        s.push('\n');
    };
    let f = fmt;
    line("lhs_mean_eps_model", f(rep.lhs));
    line("nu_eff", f(rep.nu_eff));
    line("re_eff", f(rep.re_eff));
    line("beta", f(rep.beta));
    line("beta_configured", f(rep.beta_configured));
    line("re_eff_clamped", rep.re_eff_clamped.to_string());
    line("rhs_a", f(rep.rhs_a));
    line("satisfied_a", rep.satisfied_a.to_string());
    line("rhs_b_dz", f(rep.rhs_b_dz));
    line("satisfied_b_dz", rep.satisfied_b_dz.to_string());
    line("rhs_b_grad", f(rep.rhs_b_grad));
    line("satisfied_b_grad", rep.satisfied_b_grad.to_string());
    line("rhs_c", f(rep.rhs_c));
    line("rhs_c_hypothesis_met", rep.rhs_c_hypothesis_met.to_string());
    line(
        "satisfied_c",
        rep.satisfied_c.map(|b| b.to_string()).unwrap_or_else(|| "not_applicable".into()),
    );
    line("rhs_c_ceiling", f(rep.rhs_c_ceiling));
    line("convergence_indicator", f(rep.convergence_indicator));
    line(
        "nw_slope",
        rep.nw_slope.map(f).unwrap_or_else(|| "absent".into()),
    );
    let m = &rep.multipliers;
    line("multiplier_base", f(m.base));
    line("multiplier_viscous_16nu_over_nueff", f(m.viscous));
    line("multiplier_slab_32_ratio", f(m.slab));
    line("multiplier_slab_constant", f(m.slab_constant));
    line("multiplier_tau_over_turnover", f(m.tau_over_turnover));
    line("multiplier_mu_slab", f(m.mu_slab));
    line("multiplier_mu_beta_threshold", f(m.mu_beta_threshold));
    line("multiplier_closed_base", f(m.closed_base));
    s
}

/// Hex SHA-256 of a byte stream, for the run manifest.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(t: f64, slope: Option<f64>) -> DissipationRecord {
        DissipationRecord {
            t,
            eps_viscous: 1.0 / 3.0,
            eps_turb: 0.25,
            eps_model: 1.0 / 3.0 + 0.25,
            kinetic_energy: 0.123456789012345678,
            nu_eff_running: 1e-2,
            re_eff_running: 100.0,
            beta: 1.25e-3,
            nw_nu_ratio: 7.5e-9,
            nw_dz_fluct: 0.25,
            nw_slope: slope,
            nw_gradsq: 0.5,
        }
    }

    #[test]
    fn round_trip_is_lossless_and_stable() {
        let records = vec![sample(0.0, None), sample(0.5, Some(1.9)), sample(1.0, Some(2.0))];
        let text = records_to_csv(&records);
        let parsed = records_from_csv(&text).unwrap();
        assert_eq!(parsed, records);
        assert_eq!(records_to_csv(&parsed), text);
    }

    #[test]
    fn missing_column_is_named() {
        let text = "t,eps_viscous,eps_turb\n0,1,2\n";
        let err = records_from_csv(text).unwrap_err();
        assert!(matches!(err, CoreError::Malformed(msg) if msg.contains("eps_model")
            && msg.contains("missing columns")));
    }

    #[test]
    fn short_row_is_rejected_with_location() {
        let mut text = records_to_csv(&[sample(0.0, None)]);
        text.push_str("1.0,2.0\n");
        let err = records_from_csv(&text).unwrap_err();
        assert!(matches!(err, CoreError::Malformed(msg) if msg.contains("line 3")));
    }

    #[test]
    fn garbage_value_is_rejected_with_column_name() {
        let text = records_to_csv(&[sample(0.0, None)]).replace("2.5000000000000000e-1", "oops");
        let err = records_from_csv(&text).unwrap_err();
        assert!(matches!(err, CoreError::Malformed(msg) if msg.contains("eps_turb")));
    }

    #[test]
    fn hash_is_deterministic_and_content_sensitive() {
        let a = sha256_hex(b"abc");
        assert_eq!(a, sha256_hex(b"abc"));
        assert_eq!(a.len(), 64);
        assert_ne!(a, sha256_hex(b"abd"));
        // published reference digest of "abc"
        assert_eq!(a, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
