//! Incompressibility projection: subtract the gradient of a cell-centered
//! potential solved from a pressure Poisson equation (periodic in x,y,
//! homogeneous Neumann in z, mean-zero gauge).

use crate::fields::{divergence, gradient_faces, Grid, ScalarField, VectorField, WallBC};
use crate::solver::pcg::{pcg_solve, PcgOutcome, PCG_MAX_ITER, PCG_TOL};
use crate::Result;

/// `y = (-Laplacian) x` on cell centers with the projection's boundary
/// conditions.
fn apply_neg_laplacian(g: &Grid, x: &[f64], y: &mut [f64]) {
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
    let idx = |i: usize, j: usize, k: usize| i + nx * (j + ny * k);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let x0 = x[idx(i, j, k)];
                let xe = x[idx((i + 1) % nx, j, k)];
                let xw = x[idx((i + nx - 1) % nx, j, k)];
                let xn = x[idx(i, (j + 1) % ny, k)];
                let xs = x[idx(i, (j + ny - 1) % ny, k)];
                let mut acc = (2.0 * x0 - xe - xw) / (dx * dx) + (2.0 * x0 - xn - xs) / (dy * dy);
                if k + 1 < nz {
                    acc += (x0 - x[idx(i, j, k + 1)]) / (dz * dz);
                }
                if k > 0 {
                    acc += (x0 - x[idx(i, j, k - 1)]) / (dz * dz);
                }
                y[idx(i, j, k)] = acc;
            }
        }
    }
}

fn poisson_diag_inv(g: &Grid) -> Vec<f64> {
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
    let lateral = 2.0 / (dx * dx) + 2.0 / (dy * dy);
    (0..nx * ny * nz)
        .map(|flat| {
            let k = flat / (nx * ny);
            let zfaces = if k == 0 || k == nz - 1 { 1.0 } else { 2.0 };
            1.0 / (lateral + zfaces / (dz * dz))
        })
        .collect()
}

/// Projects `v` onto the discretely divergence-free space. `psi` is the
/// potential (mean-zero gauge) and serves as warm start across steps; the
/// wall-normal velocity at the walls is preserved (zero). Ghost layers are
/// refreshed from `bc` afterwards.
pub fn pressure_project(
    v: &mut VectorField,
    psi: &mut ScalarField,
    bc: &WallBC,
) -> Result<PcgOutcome> {
    let g = v.grid().clone();
    let div = divergence(v);
    let b: Vec<f64> = div.data().iter().map(|d| -d).collect();
    let diag_inv = poisson_diag_inv(&g);
    let outcome = pcg_solve(
        |x, y| apply_neg_laplacian(&g, x, y),
        &diag_inv,
        &b,
        psi.data_mut(),
        PCG_TOL,
        PCG_MAX_ITER,
        true,
    )?;
    let grad = gradient_faces(psi);
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    for k in 1..=nz {
        for j in 0..ny {
            for i in 0..nx {
                let (ii, jj) = (i as isize, j as isize);
                let nu = v.u(ii, jj, k) - grad.u(ii, jj, k);
                let nv = v.v(ii, jj, k) - grad.v(ii, jj, k);
                v.set_u(i, j, k, nu);
                v.set_v(i, j, k, nv);
            }
        }
    }
    for k in 1..nz {
        for j in 0..ny {
            for i in 0..nx {
                let nw = v.w(i as isize, j as isize, k) - grad.w(i as isize, j as isize, k);
                v.set_w(i, j, k, nw);
            }
        }
    }
    v.apply_boundary_conditions(bc);
    Ok(outcome)
}
