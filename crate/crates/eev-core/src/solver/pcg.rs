//! Jacobi-preconditioned conjugate gradient on flat index spaces.

use crate::{CoreError, Result};

#[derive(Debug, Clone, Copy)]
pub struct PcgOutcome {
    pub iterations: usize,
    /// Final residual norm relative to the right-hand-side norm.
    pub relative_residual: f64,
}

pub const PCG_TOL: f64 = 1e-10;
pub const PCG_MAX_ITER: usize = 500;

fn remove_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    for x in v {
        *x -= m;
    }
}

/// Solves `A x = b` for symmetric positive (semi-)definite `A` given as a
/// matrix-free application, with inverse-diagonal preconditioning and warm
/// start in `x`. With `gauge_mean_zero` the constant nullspace is projected
/// out of `b`, the iterate, and the answer (pressure-Poisson gauge).
pub fn pcg_solve(
    apply: impl Fn(&[f64], &mut [f64]),
    diag_inv: &[f64],
    b: &[f64],
    x: &mut [f64],
    tol_rel: f64,
    max_iter: usize,
    gauge_mean_zero: bool,
) -> Result<PcgOutcome> {
    let n = b.len();
    assert_eq!(x.len(), n);
    assert_eq!(diag_inv.len(), n);

    let mut b = b.to_vec();
    if gauge_mean_zero {
        remove_mean(&mut b);
        remove_mean(x);
    }
    let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if b_norm == 0.0 {
        x.fill(0.0);
        return Ok(PcgOutcome { iterations: 0, relative_residual: 0.0 });
    }

    let mut ax = vec![0.0; n];
    apply(x, &mut ax);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    if gauge_mean_zero {
        remove_mean(&mut r);
    }
    let mut z: Vec<f64> = r.iter().zip(diag_inv).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = r.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>();
    let mut res = r.iter().map(|v| v * v).sum::<f64>().sqrt();

    for it in 0..max_iter {
        if res <= tol_rel * b_norm {
            if gauge_mean_zero {
                remove_mean(x);
            }
            return Ok(PcgOutcome { iterations: it, relative_residual: res / b_norm });
        }
        apply(&p, &mut ax);
        let pap = p.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>();
        if !(pap > 0.0) {
            return Err(CoreError::SolveDiverged {
                iterations: it,
                residual: res / b_norm,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ax[i];
        }
        if gauge_mean_zero && it % 32 == 31 {
            remove_mean(&mut r);
        }
        for i in 0..n {
            z[i] = r[i] * diag_inv[i];
        }
        let rz_new = r.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        res = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    if res <= tol_rel * b_norm {
        if gauge_mean_zero {
            remove_mean(x);
        }
        return Ok(PcgOutcome { iterations: max_iter, relative_residual: res / b_norm });
    }
    Err(CoreError::SolveDiverged { iterations: max_iter, residual: res / b_norm })
}
