//! Running trapezoidal time averages over the post-spin-up window, with a
//! last-half-window average as the convergence surrogate for the long-time
//! limit.

use std::collections::BTreeMap;

use crate::{CoreError, Result};

#[derive(Debug, Clone, Default)]
pub struct TimeAverager {
    spin_up: f64,
    series: BTreeMap<String, Vec<(f64, f64)>>,
}

fn trapezoid_average(samples: &[(f64, f64)]) -> f64 {
    let span = samples[samples.len() - 1].0 - samples[0].0;
    if span <= 0.0 {
        return samples.iter().map(|s| s.1).sum::<f64>() / samples.len() as f64;
    }
    let mut acc = 0.0;
    for w in samples.windows(2) {
        acc += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
    }
    acc / span
}

impl TimeAverager {
    pub fn new(spin_up: f64) -> Self {
        Self { spin_up, series: BTreeMap::new() }
    }

    pub fn spin_up(&self) -> f64 {
        self.spin_up
    }

    /// Records a sample; samples before the spin-up window are discarded.
    /// Times must be nondecreasing per series.
    pub fn record(&mut self, id: &str, t: f64, value: f64) {
        if t + 1e-15 < self.spin_up {
            return;
        }
        let s = self.series.entry(id.to_string()).or_default();
        if let Some(&(last, _)) = s.last() {
            debug_assert!(t >= last, "samples must be time-ordered");
        }
        s.push((t, value));
    }

    fn samples(&self, id: &str) -> Result<&[(f64, f64)]> {
        match self.series.get(id) {
            Some(s) if !s.is_empty() => Ok(s),
            _ => Err(CoreError::Precondition(format!("no samples recorded for series '{id}'"))),
        }
    }

    /// Trapezoidal average over `[spin_up, t_last]`.
    pub fn average(&self, id: &str) -> Result<f64> {
        Ok(trapezoid_average(self.samples(id)?))
    }

    /// Average over the last half of the window, as a tail surrogate.
    pub fn half_window_average(&self, id: &str) -> Result<f64> {
        let s = self.samples(id)?;
        let mid = 0.5 * (s[0].0 + s[s.len() - 1].0);
        let tail: Vec<(f64, f64)> = s.iter().copied().filter(|&(t, _)| t >= mid).collect();
        if tail.is_empty() {
            return Ok(trapezoid_average(s));
        }
        Ok(trapezoid_average(&tail))
    }

    /// Relative difference between the window average and the tail average;
    /// small values indicate a converged running mean.
    pub fn convergence_indicator(&self, id: &str) -> Result<f64> {
        let full = self.average(id)?;
        let half = self.half_window_average(id)?;
        let scale = full.abs().max(half.abs());
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok((full - half).abs() / scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_series_averages_to_constant() {
        let mut a = TimeAverager::new(0.0);
        for i in 0..20 {
            a.record("phi", 0.1 * i as f64, 3.25);
        }
        assert_relative_eq!(a.average("phi").unwrap(), 3.25, max_relative = 1e-14);
        assert!(a.convergence_indicator("phi").unwrap() < 1e-13);
    }

    #[test]
    fn linear_series_averages_to_midpoint() {
        let mut a = TimeAverager::new(0.0);
        let t_end = 2.0;
        for i in 0..=40 {
            let t = t_end * i as f64 / 40.0;
            a.record("phi", t, t);
        }
        assert_relative_eq!(a.average("phi").unwrap(), t_end / 2.0, max_relative = 1e-13);
    }

    #[test]
    fn spin_up_window_is_excluded() {
        let mut a = TimeAverager::new(1.0);
        for i in 0..=20 {
            let t = 0.1 * i as f64;
            a.record("phi", t, if t < 1.0 { 100.0 } else { 2.0 });
        }
        assert_relative_eq!(a.average("phi").unwrap(), 2.0, max_relative = 1e-13);
    }

    #[test]
    fn query_before_samples_errors() {
        let a = TimeAverager::new(0.0);
        assert!(a.average("phi").is_err());
    }

    #[test]
    fn convergent_series_has_small_indicator() {
        let mut a = TimeAverager::new(0.0);
        for i in 0..=400 {
            let t = 0.05 * i as f64;
            a.record("phi", t, 1.0 + (-t).exp());
        }
        let ind = a.convergence_indicator("phi").unwrap();
        assert!(ind < 0.05, "indicator {ind}");
        // surrogate is within the indicator of the tail average
        let full = a.average("phi").unwrap();
        let tail = a.half_window_average("phi").unwrap();
        assert!((full - tail).abs() <= ind * full.abs().max(tail.abs()) + 1e-15);
    }

    #[test]
    fn commuting_averages_to_round_off() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let j = 6;
        let n = 25;
        let times: Vec<f64> = (0..n).map(|i| 0.2 * i as f64).collect();
        let member_series: Vec<Vec<f64>> =
            (0..j).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();

        // time average each member, then ensemble-average the results
        let mut per_member = Vec::new();
        for s in &member_series {
            let mut a = TimeAverager::new(0.0);
            for (i, &t) in times.iter().enumerate() {
                a.record("phi", t, s[i]);
            }
            per_member.push(a.average("phi").unwrap());
        }
        let time_then_ens = per_member.iter().sum::<f64>() / j as f64;

        // ensemble-average first, then time average
        let mut a = TimeAverager::new(0.0);
        for (i, &t) in times.iter().enumerate() {
            let mean = member_series.iter().map(|s| s[i]).sum::<f64>() / j as f64;
            a.record("phi", t, mean);
        }
        let ens_then_time = a.average("phi").unwrap();
        assert_relative_eq!(time_then_ens, ens_then_time, epsilon = 1e-12);
    }
}
