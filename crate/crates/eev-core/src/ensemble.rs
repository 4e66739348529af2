//! Ensemble statistics — mean, fluctuation magnitude, turbulent kinetic
//! energy — and the eddy-viscosity field computed from them, including the
//! length-scale-capped variant.

use crate::fields::{Grid, ScalarField, VectorField};
use crate::{CoreError, Result};

/// A finite ensemble of velocity realizations sharing one grid.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<VectorField>,
    labels: Vec<String>,
}

impl Ensemble {
    pub fn new(members: Vec<VectorField>) -> Result<Self> {
        let labels = (0..members.len()).map(|j| format!("omega_{j}")).collect();
        Self::with_labels(members, labels)
    }

    pub fn with_labels(members: Vec<VectorField>, labels: Vec<String>) -> Result<Self> {
        if members.is_empty() {
            return Err(CoreError::EmptyEnsemble);
        }
        if labels.len() != members.len() {
            return Err(CoreError::InvalidConfig(format!(
                "{} labels for {} members",
                labels.len(),
                members.len()
            )));
        }
        for m in &members[1..] {
            members[0].check_grid(m, "ensemble member")?;
        }
        Ok(Self { members, labels })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn grid(&self) -> &Grid {
        self.members[0].grid()
    }

    pub fn members(&self) -> &[VectorField] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [VectorField] {
        &mut self.members
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Ensemble mean, squared fluctuation magnitude at cell centers, and TKE
/// density.
#[derive(Debug, Clone)]
pub struct FluctuationStats {
    pub mean: VectorField,
    pub fluct_mag_sq: ScalarField,
    pub tke: ScalarField,
}

/// Length-scale cap applied to `|u'| tau` when forming the eddy viscosity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapLength {
    Off,
    /// Cap at the domain size `L`.
    Box,
    /// Cap at the distance to the nearest wall.
    WallDistance,
}

/// Eddy-viscosity calibration. `mu` applies outside the near-wall slab
/// `(1-beta)L < z < L`, `mu_beta` inside it; `beta = 0` makes `mu` global.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EddyViscosityParams {
    pub mu: f64,
    pub mu_beta: f64,
    pub tau: f64,
    pub cap_length: CapLength,
    pub beta: f64,
}

impl EddyViscosityParams {
    pub fn new(mu: f64, mu_beta: f64, tau: f64, cap_length: CapLength, beta: f64) -> Result<Self> {
        if !(mu > 0.0) || !(mu_beta > 0.0) || !(tau > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "mu = {mu}, mu_beta = {mu_beta}, tau = {tau} must all be positive"
            )));
        }
        if !(0.0..1.0).contains(&beta) {
            return Err(CoreError::InvalidConfig(format!("beta = {beta} must lie in [0, 1)")));
        }
        Ok(Self { mu, mu_beta, tau, cap_length, beta })
    }

    /// Uniform `mu` everywhere, no cap.
    pub fn uniform(mu: f64, tau: f64) -> Result<Self> {
        Self::new(mu, mu, tau, CapLength::Off, 0.0)
    }

    /// `mu` at height `z`: `mu_beta` inside the slab, `mu` outside.
    pub fn mu_at(&self, z: f64, box_l: f64) -> f64 {
        if self.beta > 0.0 && z > (1.0 - self.beta) * box_l {
            self.mu_beta
        } else {
            self.mu
        }
    }
}

/// Pointwise arithmetic mean of the members (ghost layers included). The
/// reduction order is fixed for bit-reproducibility.
pub fn ensemble_mean(e: &Ensemble) -> VectorField {
    let mut mean = e.members()[0].clone();
    for m in &e.members()[1..] {
        mean.axpy(1.0, m).expect("members share a grid");
    }
    mean.scale(1.0 / e.size() as f64);
    mean
}

/// Mean, `|u'|^2` ensemble-averaged and interpolated to cell centers, and
/// `k' = |u'|^2 / 2`.
///
/// The second moment is accumulated at the native staggered locations of each
/// component and interpolated to centers afterwards, which keeps it
/// nonnegative by construction.
pub fn fluctuation_stats(e: &Ensemble) -> FluctuationStats {
    let g = e.grid().clone();
    let mean = ensemble_mean(e);
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let plane = nx * ny;
    let mut su = vec![0.0; plane * (nz + 2)];
    let mut sv = vec![0.0; plane * (nz + 2)];
    let mut sw = vec![0.0; plane * (nz + 1)];
    for m in e.members() {
        for (acc, (a, b)) in su.iter_mut().zip(m.u_raw().iter().zip(mean.u_raw())) {
            let d = a - b;
            *acc += d * d;
        }
        for (acc, (a, b)) in sv.iter_mut().zip(m.v_raw().iter().zip(mean.v_raw())) {
            let d = a - b;
            *acc += d * d;
        }
        for (acc, (a, b)) in sw.iter_mut().zip(m.w_raw().iter().zip(mean.w_raw())) {
            let d = a - b;
            *acc += d * d;
        }
    }
    let inv_j = 1.0 / e.size() as f64;
    let mut msq = ScalarField::zeros(&g);
    for k in 0..nz {
        let ks = k + 1;
        for j in 0..ny {
            for i in 0..nx {
                let ip = (i + 1) % nx;
                let jp = (j + 1) % ny;
                let m = 0.5 * (su[i + nx * j + plane * ks] + su[ip + nx * j + plane * ks])
                    + 0.5 * (sv[i + nx * j + plane * ks] + sv[i + nx * jp + plane * ks])
                    + 0.5 * (sw[i + nx * j + plane * k] + sw[i + nx * j + plane * (k + 1)]);
                msq.set(i, j, k, m * inv_j);
            }
        }
    }
    let mut tke = msq.clone();
    for v in tke.data_mut() {
        *v *= 0.5;
    }
    FluctuationStats { mean, fluct_mag_sq: msq, tke }
}

/// Eddy-viscosity field from the fluctuation statistics.
///
/// Uncapped: `nu_turb = mu(z) tau |u'|^2`. Capped: `nu_turb =
/// mu(z) min{|u'| tau, cap(x)} |u'|`, with `cap` the box size or the wall
/// distance; the capped form reduces to the uncapped one when the cap is
/// inactive.
pub fn turbulent_viscosity(s: &FluctuationStats, p: &EddyViscosityParams) -> Result<ScalarField> {
    let g = s.fluct_mag_sq.grid().clone();
    let l = g.box_length();
    let mut out = ScalarField::zeros(&g);
    for k in 0..g.nz() {
        let z = g.zc(k);
        let mu = p.mu_at(z, l);
        let cap = match p.cap_length {
            CapLength::Off => f64::INFINITY,
            CapLength::Box => l,
            CapLength::WallDistance => z.min(l - z),
        };
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                let msq = s.fluct_mag_sq.get(i, j, k);
                if msq < 0.0 {
                    return Err(CoreError::Precondition(format!(
                        "fluct_mag_sq negative ({msq}) at cell ({i},{j},{k})"
                    )));
                }
                let mag = msq.sqrt();
                out.set(i, j, k, mu * (mag * p.tau).min(cap) * mag);
            }
        }
    }
    Ok(out)
}

/// Fluctuation scale `U'`: square root of the running time average of the
/// box-mean of `|u'|^2`. Samples are `(t, box-mean of fluct_mag_sq)` in
/// nondecreasing time order; the average is trapezoidal.
pub fn fluctuation_scale(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.is_empty() {
        return Err(CoreError::Precondition("fluctuation_scale needs at least one sample".into()));
    }
    let span = samples[samples.len() - 1].0 - samples[0].0;
    let avg = if span > 0.0 {
        let mut acc = 0.0;
        for w in samples.windows(2) {
            acc += 0.5 * (w[1].1 + w[0].1) * (w[1].0 - w[0].0);
        }
        acc / span
    } else {
        samples.iter().map(|s| s.1).sum::<f64>() / samples.len() as f64
    };
    if avg < 0.0 {
        return Err(CoreError::Domain(format!("negative mean-square fluctuation {avg}")));
    }
    Ok(avg.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{volume_integral, Region};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Grid {
        Grid::new(1.0, 6, 6, 8).unwrap()
    }

    fn random_member(g: &Grid, seed: u64) -> VectorField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = VectorField::zeros(g);
        for x in v.u_raw_mut().iter_mut() {
            *x = rng.gen_range(-1.0..1.0);
        }
        for x in v.v_raw_mut().iter_mut() {
            *x = rng.gen_range(-1.0..1.0);
        }
        for x in v.w_raw_mut().iter_mut() {
            *x = rng.gen_range(-1.0..1.0);
        }
        v
    }

    fn constant_x(g: &Grid, a: f64) -> VectorField {
        let mut v = VectorField::from_fn(g, |_, _, _| a, |_, _, _| 0.0, |_, _, _| 0.0);
        // constant ghost extension keeps the raw-storage mean exact
        let nz = g.nz();
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                v.set_u(i, j, 0, a);
                v.set_u(i, j, nz + 1, a);
            }
        }
        v
    }

    #[test]
    fn empty_ensemble_is_rejected() {
        assert!(matches!(Ensemble::new(vec![]), Err(CoreError::EmptyEnsemble)));
    }

    #[test]
    fn mean_of_single_member_is_bit_exact() {
        let g = grid();
        let m = random_member(&g, 3);
        let e = Ensemble::new(vec![m.clone()]).unwrap();
        assert_eq!(ensemble_mean(&e), m);
    }

    #[test]
    fn mean_of_symmetric_pair_is_zero() {
        let g = grid();
        let mut neg = random_member(&g, 5);
        let pos = random_member(&g, 5);
        neg.scale(-1.0);
        let e = Ensemble::new(vec![pos, neg]).unwrap();
        let mean = ensemble_mean(&e);
        assert!(mean.u_raw().iter().all(|&x| x == 0.0));
        assert!(mean.w_raw().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn mean_matches_compensated_summation_oracle() {
        let g = grid();
        let members: Vec<_> = (0..16).map(|s| random_member(&g, 100 + s)).collect();
        let e = Ensemble::new(members.clone()).unwrap();
        let mean = ensemble_mean(&e);
        // Kahan-compensated oracle on a few probe entries of each component
        for idx in [0usize, 17, 101, 199] {
            let mut sum = 0.0;
            let mut c = 0.0;
            for m in &members {
                let y = m.u_raw()[idx] - c;
                let t = sum + y;
                c = (t - sum) - y;
                sum = t;
            }
            assert_relative_eq!(mean.u_raw()[idx], sum / 16.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn identical_members_have_zero_fluctuation() {
        let g = grid();
        let m = random_member(&g, 11);
        let e = Ensemble::new(vec![m.clone(), m.clone(), m]).unwrap();
        let s = fluctuation_stats(&e);
        assert_eq!(s.fluct_mag_sq.max_abs(), 0.0);
        assert_eq!(s.tke.max_abs(), 0.0);
    }

    #[test]
    fn two_point_symmetric_ensemble() {
        let g = grid();
        let a = 0.75;
        let e = Ensemble::new(vec![constant_x(&g, a), constant_x(&g, -a)]).unwrap();
        let s = fluctuation_stats(&e);
        for v in s.fluct_mag_sq.data() {
            assert_relative_eq!(*v, a * a, max_relative = 1e-14);
        }
        for v in s.tke.data() {
            assert_relative_eq!(*v, 0.5 * a * a, max_relative = 1e-14);
        }
    }

    #[test]
    fn matches_two_pass_oracle() {
        let g = grid();
        let members: Vec<_> = (0..8).map(|s| random_member(&g, 40 + s)).collect();
        let e = Ensemble::new(members.clone()).unwrap();
        let s = fluctuation_stats(&e);

        // oracle: explicit mean, explicit deviations, independent center interp
        let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
        for (i, j, k) in [(0, 0, 0), (3, 2, 5), (nx - 1, ny - 1, nz - 1)] {
            let ks = k + 1;
            let face_msq = |get: &dyn Fn(&VectorField) -> f64| {
                let mean = members.iter().map(|m| get(m)).sum::<f64>() / 8.0;
                members.iter().map(|m| (get(m) - mean).powi(2)).sum::<f64>() / 8.0
            };
            let (ii, jj) = (i as isize, j as isize);
            let expected = 0.5
                * (face_msq(&|m: &VectorField| m.u(ii, jj, ks))
                    + face_msq(&|m: &VectorField| m.u(ii + 1, jj, ks)))
                + 0.5
                    * (face_msq(&|m: &VectorField| m.v(ii, jj, ks))
                        + face_msq(&|m: &VectorField| m.v(ii, jj + 1, ks)))
                + 0.5
                    * (face_msq(&|m: &VectorField| m.w(ii, jj, k))
                        + face_msq(&|m: &VectorField| m.w(ii, jj, k + 1)));
            assert_relative_eq!(s.fluct_mag_sq.get(i, j, k), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn fluctuations_sum_to_zero_pointwise() {
        let g = grid();
        let members: Vec<_> = (0..5).map(|s| random_member(&g, 70 + s)).collect();
        let e = Ensemble::new(members.clone()).unwrap();
        let mean = ensemble_mean(&e);
        let n = mean.u_raw().len();
        for idx in (0..n).step_by(37) {
            let sum: f64 = members.iter().map(|m| m.u_raw()[idx] - mean.u_raw()[idx]).sum();
            assert!(sum.abs() < 1e-13, "fluctuation sum {sum} at {idx}");
        }
    }

    #[test]
    fn tke_is_half_mag_sq() {
        let g = grid();
        let e = Ensemble::new((0..4).map(|s| random_member(&g, s)).collect()).unwrap();
        let s = fluctuation_stats(&e);
        for (t, m) in s.tke.data().iter().zip(s.fluct_mag_sq.data()) {
            assert_eq!(*t, 0.5 * m);
        }
    }

    #[test]
    fn viscosity_of_zero_fluctuation_is_zero() {
        let g = grid();
        let e = Ensemble::new(vec![random_member(&g, 1); 3]).unwrap();
        let s = fluctuation_stats(&e);
        let p = EddyViscosityParams::uniform(0.5, 0.1).unwrap();
        assert_eq!(turbulent_viscosity(&s, &p).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn viscosity_direct_formula_and_cap() {
        let g = grid();
        // |u'|^2 = 4 from members +/-(2,0,0)
        let e = Ensemble::new(vec![constant_x(&g, 2.0), constant_x(&g, -2.0)]).unwrap();
        let s = fluctuation_stats(&e);
        let p = EddyViscosityParams::uniform(1.0, 1.0).unwrap();
        let nt = turbulent_viscosity(&s, &p).unwrap();
        for v in nt.data() {
            assert_relative_eq!(*v, 4.0, max_relative = 1e-13);
        }
        // cap at L = 1: min{2, 1} * 2 = 2
        let pc = EddyViscosityParams::new(1.0, 1.0, 1.0, CapLength::Box, 0.0).unwrap();
        let ntc = turbulent_viscosity(&s, &pc).unwrap();
        for v in ntc.data() {
            assert_relative_eq!(*v, 2.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn wall_distance_cap() {
        let g = grid();
        let e = Ensemble::new(vec![constant_x(&g, 2.0), constant_x(&g, -2.0)]).unwrap();
        let s = fluctuation_stats(&e);
        let p = EddyViscosityParams::new(1.0, 1.0, 1.0, CapLength::WallDistance, 0.0).unwrap();
        let nt = turbulent_viscosity(&s, &p).unwrap();
        for k in 0..g.nz() {
            let d = g.zc(k).min(g.box_length() - g.zc(k));
            let expect = (2.0f64).min(d) * 2.0;
            assert_relative_eq!(nt.get(2, 3, k), expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn piecewise_mu_switches_at_breakpoint() {
        let g = Grid::new(1.0, 4, 4, 16).unwrap();
        let e = Ensemble::new(vec![constant_x(&g, 1.0), constant_x(&g, -1.0)]).unwrap();
        let s = fluctuation_stats(&e);
        let beta = 0.25;
        let p = EddyViscosityParams::new(0.5, 0.1, 0.01, CapLength::Off, beta).unwrap();
        let nt = turbulent_viscosity(&s, &p).unwrap();
        for k in 0..g.nz() {
            let expect = if g.zc(k) > (1.0 - beta) * g.box_length() { 0.001 } else { 0.005 };
            assert_relative_eq!(nt.get(0, 0, k), expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn negative_mag_sq_is_rejected() {
        let g = grid();
        let e = Ensemble::new(vec![random_member(&g, 1); 2]).unwrap();
        let mut s = fluctuation_stats(&e);
        s.fluct_mag_sq.set(1, 1, 1, -1e-3);
        let p = EddyViscosityParams::uniform(1.0, 1.0).unwrap();
        assert!(matches!(turbulent_viscosity(&s, &p), Err(CoreError::Precondition(_))));
    }

    #[test]
    fn universality_recomputation_is_bit_identical() {
        let g = grid();
        let e = Ensemble::new((0..6).map(|s| random_member(&g, 300 + s)).collect()).unwrap();
        let s = fluctuation_stats(&e);
        let p = EddyViscosityParams::new(0.7, 0.2, 0.05, CapLength::Box, 0.1).unwrap();
        let a = turbulent_viscosity(&s, &p).unwrap();
        let b = turbulent_viscosity(&fluctuation_stats(&e), &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scaling_by_lambda() {
        let g = grid();
        let members: Vec<_> = (0..4).map(|s| random_member(&g, 500 + s)).collect();
        let lambda = 2.5;
        let scaled: Vec<_> = members
            .iter()
            .map(|m| {
                let mut s = m.clone();
                s.scale(lambda);
                s
            })
            .collect();
        let s1 = fluctuation_stats(&Ensemble::new(members).unwrap());
        let s2 = fluctuation_stats(&Ensemble::new(scaled).unwrap());
        let p = EddyViscosityParams::uniform(0.3, 0.02).unwrap();
        let n1 = turbulent_viscosity(&s1, &p).unwrap();
        let n2 = turbulent_viscosity(&s2, &p).unwrap();
        for (a, b) in s1.fluct_mag_sq.data().iter().zip(s2.fluct_mag_sq.data()) {
            assert_relative_eq!(*b, lambda * lambda * a, max_relative = 1e-12);
        }
        for (a, b) in n1.data().iter().zip(n2.data()) {
            assert_relative_eq!(*b, lambda * lambda * a, max_relative = 1e-12);
        }
    }

    #[test]
    fn shift_invariance() {
        let g = grid();
        let members: Vec<_> = (0..4).map(|s| random_member(&g, 600 + s)).collect();
        let shift = random_member(&g, 999);
        let shifted: Vec<_> = members
            .iter()
            .map(|m| {
                let mut s = m.clone();
                s.axpy(1.0, &shift).unwrap();
                s
            })
            .collect();
        let s1 = fluctuation_stats(&Ensemble::new(members).unwrap());
        let s2 = fluctuation_stats(&Ensemble::new(shifted).unwrap());
        for (a, b) in s1.fluct_mag_sq.data().iter().zip(s2.fluct_mag_sq.data()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn fluctuation_scale_examples() {
        assert!(fluctuation_scale(&[]).is_err());
        assert_eq!(fluctuation_scale(&[(0.0, 0.0), (1.0, 0.0)]).unwrap(), 0.0);
        let c = 0.81;
        let samples: Vec<_> = (0..10).map(|i| (i as f64 * 0.1, c)).collect();
        assert_relative_eq!(fluctuation_scale(&samples).unwrap(), c.sqrt(), max_relative = 1e-14);
        // linear ramp f(t) = t on [0,2]: trapezoid average is exactly 1
        let ramp: Vec<_> = (0..=20).map(|i| (0.1 * i as f64, 0.1 * i as f64)).collect();
        assert_relative_eq!(fluctuation_scale(&ramp).unwrap(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn fluctuation_scale_matches_quadrature_oracle() {
        // synthetic series f(t) = 2 + sin(3t) on nonuniform samples
        let mut ts: Vec<f64> = (0..40).map(|i| (i as f64 / 39.0).powf(1.3) * 2.0).collect();
        ts.dedup();
        let samples: Vec<_> = ts.iter().map(|&t| (t, 2.0 + (3.0 * t).sin())).collect();
        let span = ts[ts.len() - 1] - ts[0];
        let mut oracle = 0.0;
        for w in samples.windows(2) {
            oracle += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
        }
        oracle = (oracle / span).sqrt();
        assert_relative_eq!(fluctuation_scale(&samples).unwrap(), oracle, max_relative = 1e-10);
    }

    #[test]
    fn commuting_averages_and_cauchy_schwarz() {
        // recorded scalar functional phi_j(t_n): time-average then ensemble
        // average equals the reverse order
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let j = 5;
        let n = 12;
        let times: Vec<f64> = (0..n).map(|i| i as f64 * 0.3).collect();
        let series: Vec<Vec<f64>> =
            (0..j).map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let trap = |vals: &[f64]| {
            let mut acc = 0.0;
            for i in 1..n {
                acc += 0.5 * (vals[i] + vals[i - 1]) * (times[i] - times[i - 1]);
            }
            acc / (times[n - 1] - times[0])
        };
        let time_then_ens = series.iter().map(|s| trap(s)).sum::<f64>() / j as f64;
        let ens_series: Vec<f64> =
            (0..n).map(|i| series.iter().map(|s| s[i]).sum::<f64>() / j as f64).collect();
        let ens_then_time = trap(&ens_series);
        assert_relative_eq!(time_then_ens, ens_then_time, max_relative = 1e-13);

        // Cauchy-Schwarz on a pair of recorded series
        let phi = &series[0];
        let psi = &series[1];
        let prod: Vec<f64> = phi.iter().zip(psi).map(|(a, b)| a * b).collect();
        let sq = |s: &[f64]| s.iter().map(|x| x * x).collect::<Vec<_>>();
        let lhs = trap(&prod);
        let rhs = trap(&sq(phi)).sqrt() * trap(&sq(psi)).sqrt();
        assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs}");
    }

    #[test]
    fn stats_snapshot_round_trips_through_checkpoint() {
        use crate::fields::checkpoint;
        let g = grid();
        let e = Ensemble::new((0..3).map(|s| random_member(&g, s)).collect()).unwrap();
        let s = fluctuation_stats(&e);
        let mut buf = Vec::new();
        checkpoint::write_scalar(&mut buf, &s.fluct_mag_sq).unwrap();
        let back = checkpoint::read_scalar(&mut buf.as_slice()).unwrap();
        assert_eq!(back, s.fluct_mag_sq);
    }

    #[test]
    fn box_mean_consistency_with_volume_integral() {
        let g = grid();
        let e = Ensemble::new((0..3).map(|s| random_member(&g, 20 + s)).collect()).unwrap();
        let s = fluctuation_stats(&e);
        let mean_sq =
            volume_integral(&s.fluct_mag_sq, Region::WholeBox).unwrap() / g.volume();
        let u_prime = fluctuation_scale(&[(0.0, mean_sq)]).unwrap();
        assert_relative_eq!(u_prime, mean_sq.sqrt(), max_relative = 1e-14);
    }
}
