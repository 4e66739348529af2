use super::gamma::gamma;
use crate::{CoreError, Result};

/// Exponent triple for the `L^p`–`L^q` Hardy inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyParams {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
}

impl HardyParams {
    /// Validates `1 < p <= q < inf` and the coupling `(alpha+1)/q = 1/p - 1`.
    pub fn new(p: f64, q: f64, alpha: f64) -> Result<Self> {
        if !(p > 1.0 && p <= q && q.is_finite()) {
            return Err(CoreError::Domain(format!(
                "require 1 < p <= q < inf, got p={p}, q={q}"
            )));
        }
        let lhs = (alpha + 1.0) / q;
        let rhs = 1.0 / p - 1.0;
        if (lhs - rhs).abs() > 1e-12 {
            return Err(CoreError::Domain(format!(
                "(alpha+1)/q = {lhs} must equal 1/p - 1 = {rhs}"
            )));
        }
        Ok(Self { p, q, alpha })
    }

    /// The admissible `alpha` for given exponents.
    pub fn coupled(p: f64, q: f64) -> Result<Self> {
        let alpha = q * (1.0 / p - 1.0) - 1.0;
        Self::new(p, q, alpha)
    }
}

/// Which endpoint of the sampled function is pinned at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroAt {
    Start,
    End,
}

/// Uniformly sampled function on `[0, x_max]`.
#[derive(Debug, Clone)]
pub struct TestFunction1D {
    x_max: f64,
    samples: Vec<f64>,
    zero_at: Option<ZeroAt>,
}

impl TestFunction1D {
    pub fn new(x_max: f64, samples: Vec<f64>, zero_at: Option<ZeroAt>) -> Result<Self> {
        if samples.len() < 4 || !(x_max > 0.0) {
            return Err(CoreError::Precondition(
                "need x_max > 0 and at least 4 samples".into(),
            ));
        }
        let scale = samples.iter().fold(0f64, |m, v| m.max(v.abs())).max(1e-300);
        if let Some(z) = zero_at {
            let endpoint = match z {
                ZeroAt::Start => samples[0],
                ZeroAt::End => *samples.last().unwrap(),
            };
            if endpoint.abs() > 1e-12 * scale {
                return Err(CoreError::Precondition(format!(
                    "declared zero endpoint is {endpoint:.3e}"
                )));
            }
        }
        Ok(Self {
            x_max,
            samples,
            zero_at,
        })
    }

    pub fn from_fn(x_max: f64, n: usize, zero_at: Option<ZeroAt>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let dx = x_max / n as f64;
        let samples = (0..=n).map(|i| f(i as f64 * dx)).collect();
        Self::new(x_max, samples, zero_at)
    }

    pub fn dx(&self) -> f64 {
        self.x_max / (self.samples.len() - 1) as f64
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Second-order finite-difference derivative (one-sided at the ends).
    pub fn derivative(&self) -> Vec<f64> {
        derivative_uniform(&self.samples, self.dx())
    }
}

fn derivative_uniform(s: &[f64], h: f64) -> Vec<f64> {
    let n = s.len();
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h);
    d[n - 1] = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (s[i + 1] - s[i - 1]) / (2.0 * h);
    }
    d
}

fn trapezoid(s: &[f64], h: f64) -> f64 {
    if s.len() < 2 {
        return 0.0;
    }
    let mut acc = 0.5 * (s[0] + s[s.len() - 1]);
    for v in &s[1..s.len() - 1] {
        acc += v;
    }
    acc * h
}

/// Outcome of an inequality check: `ratio = lhs/rhs`, defined as zero when both
/// sides vanish.
#[derive(Debug, Clone, Copy)]
pub struct CheckResult {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl CheckResult {
    fn from_sides(lhs: f64, rhs: f64) -> Self {
        let ratio = if rhs == 0.0 { 0.0 } else { lhs / rhs };
        Self { lhs, rhs, ratio }
    }
}

/// Classical Hardy constant `(p/(p-1))^p`.
pub fn hardy_classic_constant(p: f64) -> f64 {
    (p / (p - 1.0)).powf(p)
}

/// Optimal constant of the `L^p`–`L^q` Hardy inequality, as a product of
/// Gamma-function factors.
///
/// Degenerates at `p = q`; callers wanting that case should use
/// [`hardy_classic_constant`].
pub fn bliss_constant(p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(CoreError::Domain(format!("require p > 1, got p={p}")));
    }
    if !(q > p) {
        if q == p {
            return Err(CoreError::Domain(
                "formula degenerates at p = q; use hardy_classic_constant".into(),
            ));
        }
        return Err(CoreError::Domain(format!("require q >= p, got p={p}, q={q}")));
    }
    let pp = p / (p - 1.0);
    let d = q - p;
    let factor = (d / p * gamma(p * q / d)) / (gamma(p / d) * gamma(p * (q - 1.0) / d));
    Ok((pp / q).powf(1.0 / p) * factor)
}

/// Checks `int |F/x|^p <= (p/(p-1))^p int |F'|^p` on `[0, x_max]`.
///
/// The singular first cell uses the expansion `F(x) ~ F'(0) x`.
pub fn hardy_classic_check(f: &TestFunction1D, p: f64) -> Result<CheckResult> {
    if f.zero_at != Some(ZeroAt::Start) {
        return Err(CoreError::Precondition("F(0) = 0 required".into()));
    }
    if !(p > 1.0) {
        return Err(CoreError::Domain(format!("require p > 1, got p={p}")));
    }
    let h = f.dx();
    let s = f.samples();
    let d = f.derivative();

    // first cell: |F/x|^p ~ |F'(0)|^p
    let mut lhs = d[0].abs().powf(p) * h;
    let quotient: Vec<f64> = s
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, v)| (v / (i as f64 * h)).abs().powf(p))
        .collect();
    lhs += trapezoid_with_ends(&quotient, h);

    let deriv_p: Vec<f64> = d.iter().map(|v| v.abs().powf(p)).collect();
    let rhs = hardy_classic_constant(p) * trapezoid(&deriv_p, h);
    Ok(CheckResult::from_sides(lhs, rhs))
}

// trapezoid over samples that start at x = h (first cell excluded upstream)
fn trapezoid_with_ends(s: &[f64], h: f64) -> f64 {
    trapezoid(s, h)
}

/// Checks `(int x^alpha F^q)^(1/q) <= C_pq (int f^p)^(1/p)` with
/// `F(x) = int_0^x f`, treating `f` as zero beyond `x_max` (the constant tail
/// of `F` is integrated analytically).
pub fn hardy_lplq_check(f: &TestFunction1D, hp: HardyParams) -> Result<CheckResult> {
    let scale = f.samples().iter().fold(0f64, |m, v| m.max(v.abs()));
    if f.samples().iter().any(|&v| v < -1e-12 * scale.max(1e-300)) {
        return Err(CoreError::Precondition("f must be non-negative".into()));
    }
    let h = f.dx();
    let s = f.samples();
    let n = s.len() - 1;

    // cumulative integral of f (trapezoid)
    let mut cum = vec![0.0; n + 1];
    for i in 1..=n {
        cum[i] = cum[i - 1] + 0.5 * (s[i - 1] + s[i]) * h;
    }

    let (q, alpha) = (hp.q, hp.alpha);
    // first cell: f ~ f(0) so F ~ f(0) x and x^alpha F^q ~ f0^q x^(alpha+q);
    // alpha + q + 1 = q/p > 0 for admissible parameters
    let mut lhs_pow = s[0].powf(q) * h.powf(alpha + q + 1.0) / (alpha + q + 1.0);

    // remaining cells: 5-point Gauss-Legendre on x^alpha * F_lin(x)^q
    const GX: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const GW: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    for c in 1..n {
        let xa = c as f64 * h;
        let half = 0.5 * h;
        let mid = xa + half;
        let mut acc = 0.0;
        for (gx, gw) in GX.iter().zip(GW.iter()) {
            let x = mid + half * gx;
            let t = (x - xa) / h;
            let fv = cum[c] * (1.0 - t) + cum[c + 1] * t;
            acc += gw * x.powf(alpha) * fv.powf(q);
        }
        lhs_pow += acc * half;
    }
    // tail x > x_max with F frozen at F(x_max); alpha + 1 < 0 for p < q
    if alpha + 1.0 < 0.0 {
        lhs_pow += cum[n].powf(q) * f.x_max().powf(alpha + 1.0) / (-(alpha + 1.0));
    }
    let lhs = lhs_pow.powf(1.0 / q);

    let fp: Vec<f64> = s.iter().map(|v| v.powf(hp.p)).collect();
    let norm_p = trapezoid(&fp, h).powf(1.0 / hp.p);
    let c_pq = bliss_constant(hp.p, hp.q)?;
    Ok(CheckResult::from_sides(lhs, c_pq * norm_p))
}

/// Sampled field on the near-wall slab `(1-beta)L < z < L`, stored as
/// independent `(x, y)` lines of `nz+1` uniform samples ending at `z = L`.
#[derive(Debug, Clone)]
pub struct SlabProfile {
    pub beta: f64,
    pub box_l: f64,
    pub lines: Vec<Vec<f64>>,
}

impl SlabProfile {
    pub fn new(beta: f64, box_l: f64, lines: Vec<Vec<f64>>) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0 && box_l > 0.0) {
            return Err(CoreError::Domain(format!("invalid slab beta={beta}, L={box_l}")));
        }
        if lines.is_empty() || lines.iter().any(|l| l.len() < 4) {
            return Err(CoreError::Precondition(
                "each slab line needs at least 4 samples".into(),
            ));
        }
        Ok(Self { beta, box_l, lines })
    }

    fn dz(&self) -> f64 {
        self.beta * self.box_l / (self.lines[0].len() - 1) as f64
    }

    fn check_wall_zero(&self) -> Result<()> {
        for l in &self.lines {
            let scale = l.iter().fold(0f64, |m, v| m.max(v.abs())).max(1e-300);
            let wall = *l.last().unwrap();
            if wall.abs() > 1e-12 * scale {
                return Err(CoreError::Precondition(format!(
                    "field must vanish at z = L, got {wall:.3e}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-line check of `(int |L-z|^-4 |F|^6 dz)^(1/6) <= C26 (int |F_z|^2 dz)^(1/2)`;
/// reports the line with the largest ratio.
pub fn near_wall_lemma_check(f: &SlabProfile) -> Result<CheckResult> {
    f.check_wall_zero()?;
    let c26 = bliss_constant(2.0, 6.0)?;
    let h = f.dz();
    let mut worst = CheckResult::from_sides(0.0, 0.0);
    for line in &f.lines {
        let n = line.len() - 1;
        // work in s = L - z so the zero endpoint sits at s = 0
        let rev: Vec<f64> = line.iter().rev().copied().collect();
        let d = derivative_uniform(&rev, h);
        // first cell: F ~ F'(0) s so s^-4 F^6 ~ |F'(0)|^6 s^2
        let mut lhs_pow = d[0].abs().powi(6) * h.powi(3) / 3.0;
        let integrand: Vec<f64> = rev
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, v)| (i as f64 * h).powi(-4) * v.powi(6))
            .collect();
        lhs_pow += trapezoid(&integrand, h);
        let lhs = lhs_pow.powf(1.0 / 6.0);

        let d2: Vec<f64> = d.iter().map(|v| v * v).collect();
        let rhs = c26 * trapezoid(&d2, h).sqrt();
        let res = CheckResult::from_sides(lhs, rhs);
        if res.ratio > worst.ratio || (worst.rhs == 0.0 && rhs > 0.0) {
            worst = res;
        }
        let _ = n;
    }
    Ok(worst)
}

/// Checks the slab estimate
/// `int_{S_beta} |u'|^2 <= 3^(-2/3) C26^2 (beta L)^2 int_{S_beta} |du'/dz|^2`
/// for a three-component fluctuation field sampled on slab lines.
pub fn slab_estimate_check(components: [&SlabProfile; 3]) -> Result<CheckResult> {
    let c26 = bliss_constant(2.0, 6.0)?;
    let beta = components[0].beta;
    let box_l = components[0].box_l;
    let mut lhs = 0.0;
    let mut grad = 0.0;
    for comp in components {
        if comp.beta != beta || comp.box_l != box_l {
            return Err(CoreError::GridMismatch("slab components disagree".into()));
        }
        comp.check_wall_zero()?;
        let h = comp.dz();
        for line in &comp.lines {
            let sq: Vec<f64> = line.iter().map(|v| v * v).collect();
            lhs += trapezoid(&sq, h);
            let d = derivative_uniform(line, h);
            let dsq: Vec<f64> = d.iter().map(|v| v * v).collect();
            grad += trapezoid(&dsq, h);
        }
    }
    let rhs = 3f64.powf(-2.0 / 3.0) * c26 * c26 * (beta * box_l).powi(2) * grad;
    Ok(CheckResult::from_sides(lhs, rhs))
}

/// Sweeps the near-extremal family `f_c(x) = (1 + c x^2)^(-3/2)` of the
/// `(p,q) = (2,6)` inequality and returns the supremum ratio observed.
pub fn extremal_sweep_26(n: usize, c_values: &[f64]) -> Result<f64> {
    let hp = HardyParams::coupled(2.0, 6.0)?;
    let mut sup: f64 = 0.0;
    for &c in c_values {
        let x_max = 60.0 / c.sqrt();
        let f = TestFunction1D::from_fn(x_max, n, None, |x| (1.0 + c * x * x).powf(-1.5))?;
        let res = hardy_lplq_check(&f, hp)?;
        sup = sup.max(res.ratio);
    }
    Ok(sup)
}
