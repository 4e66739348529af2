//! Implicit variable-coefficient diffusion: one backward-Euler solve per
//! velocity component with the shared coefficient field `a = nu + nu_turb`
//! frozen over the step, plus the exact discrete quadratic form of the same
//! operator used by the energy ledger.
//!
//! Tangential components impose the wall value through ghost elimination
//! (half-cell gradient at the wall); the wall-normal component has its wall
//! faces pinned to zero.

use crate::fields::{Grid, ScalarField, VectorField, WallBC};
use crate::solver::pcg::{pcg_solve, PcgOutcome, PCG_MAX_ITER, PCG_TOL};
use crate::Result;

/// Which staggered component a solve addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    U,
    V,
    W,
}

/// Coefficient field `a = nu + nu_turb` at cell centers with the edge
/// averages the staggered operators need. Edge locations are named by the
/// plane the edge is normal to; the index convention is that `edge_xy(i,j,k)`
/// sits at `(i dx, j dy)` in layer `k`, `edge_xz(i,j,k)` at `(i dx, z-face
/// k+1)` in row `j`, and `edge_yz(i,j,k)` at `(j dy, z-face k+1)` in column
/// `i`.
pub struct DiffusionCoeff<'a> {
    grid: Grid,
    a: &'a ScalarField,
}

impl<'a> DiffusionCoeff<'a> {
    pub fn new(nu_total: &'a ScalarField) -> Self {
        Self { grid: nu_total.grid().clone(), a: nu_total }
    }

    #[inline]
    fn ac(&self, i: isize, j: isize, k: usize) -> f64 {
        self.a.at(i, j, k)
    }

    /// Average over cells `(i-1,i) x (j-1,j)` in layer `k`.
    #[inline]
    fn edge_xy(&self, i: isize, j: isize, k: usize) -> f64 {
        0.25 * (self.ac(i - 1, j - 1, k) + self.ac(i, j - 1, k) + self.ac(i - 1, j, k) + self.ac(i, j, k))
    }

    /// Average over cells `(i-1,i) x layers (k,k+1)` in row `j`.
    #[inline]
    fn edge_xz(&self, i: isize, j: isize, k: usize) -> f64 {
        0.25 * (self.ac(i - 1, j, k) + self.ac(i, j, k) + self.ac(i - 1, j, k + 1) + self.ac(i, j, k + 1))
    }

    /// Average over cells `(j-1,j) x layers (k,k+1)` in column `i`.
    #[inline]
    fn edge_yz(&self, i: isize, j: isize, k: usize) -> f64 {
        0.25 * (self.ac(i, j - 1, k) + self.ac(i, j, k) + self.ac(i, j - 1, k + 1) + self.ac(i, j, k + 1))
    }
}

/// All z-layer conventions below use 0-based cell layers `k in 0..nz`; the
/// tangential unknowns live at storage layers `ks = k+1`.
struct TangentialOp<'a> {
    c: &'a DiffusionCoeff<'a>,
    comp: Component,
    dt: f64,
}

impl TangentialOp<'_> {
    #[inline]
    fn idx(&self, nx: usize, ny: usize, i: usize, j: usize, k: usize) -> usize {
        i + nx * (j + ny * k)
    }

    /// z-edge coefficient between layers `k` and `k+1` under this component's
    /// face footprint.
    #[inline]
    fn zedge(&self, i: isize, j: isize, k: usize) -> f64 {
        match self.comp {
            Component::U => self.c.edge_xz(i, j, k),
            Component::V => self.c.edge_yz(i, j, k),
            Component::W => unreachable!("tangential operator"),
        }
    }

    /// Wall coefficient: average of the two wall-adjacent cells under the
    /// face.
    #[inline]
    fn wall_a(&self, i: isize, j: isize, k: usize) -> f64 {
        match self.comp {
            Component::U => 0.5 * (self.c.ac(i - 1, j, k) + self.c.ac(i, j, k)),
            Component::V => 0.5 * (self.c.ac(i, j - 1, k) + self.c.ac(i, j, k)),
            Component::W => unreachable!("tangential operator"),
        }
    }

    /// `y = (I - dt L0) x` where `L0` is the diffusion operator with
    /// homogeneous wall data.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let g = &self.c.grid;
        let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
        let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
        let at = |x: &[f64], i: isize, j: isize, k: usize| -> f64 {
            x[self.idx(nx, ny, g.wrap_x(i), g.wrap_y(j), k)]
        };
        for k in 0..nz {
            for j in 0..ny {
                let jj = j as isize;
                for i in 0..nx {
                    let ii = i as isize;
                    let x0 = at(x, ii, jj, k);
                    // fluxes carry units of (coefficient * difference); the
                    // 1/h^2 factors are applied once per direction below
                    let (fx_w, fx_e, fy_s, fy_n) = match self.comp {
                        Component::U => (
                            self.c.ac(ii - 1, jj, k) * (x0 - at(x, ii - 1, jj, k)),
                            self.c.ac(ii, jj, k) * (at(x, ii + 1, jj, k) - x0),
                            self.c.edge_xy(ii, jj, k) * (x0 - at(x, ii, jj - 1, k)),
                            self.c.edge_xy(ii, jj + 1, k) * (at(x, ii, jj + 1, k) - x0),
                        ),
                        Component::V => (
                            self.c.edge_xy(ii, jj, k) * (x0 - at(x, ii - 1, jj, k)),
                            self.c.edge_xy(ii + 1, jj, k) * (at(x, ii + 1, jj, k) - x0),
                            self.c.ac(ii, jj - 1, k) * (x0 - at(x, ii, jj - 1, k)),
                            self.c.ac(ii, jj, k) * (at(x, ii, jj + 1, k) - x0),
                        ),
                        Component::W => unreachable!(),
                    };
                    let lap_x = (fx_e - fx_w) / (dx * dx);
                    let lap_y = (fy_n - fy_s) / (dy * dy);

                    let fz_b = if k == 0 {
                        // ghost elimination: homogeneous wall value through a
                        // half-cell gradient
                        2.0 * self.wall_a(ii, jj, 0) * x0
                    } else {
                        self.zedge(ii, jj, k - 1) * (x0 - at(x, ii, jj, k - 1))
                    };
                    let fz_t = if k == nz - 1 {
                        -2.0 * self.wall_a(ii, jj, nz - 1) * x0
                    } else {
                        self.zedge(ii, jj, k) * (at(x, ii, jj, k + 1) - x0)
                    };
                    let lap_z = (fz_t - fz_b) / (dz * dz);

                    y[self.idx(nx, ny, i, j, k)] = x0 - self.dt * (lap_x + lap_y + lap_z);
                }
            }
        }
    }

    fn diag_inv(&self) -> Vec<f64> {
        let g = &self.c.grid;
        let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
        let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
        let mut d = vec![0.0; nx * ny * nz];
        for k in 0..nz {
            for j in 0..ny {
                let jj = j as isize;
                for i in 0..nx {
                    let ii = i as isize;
                    let (cx, cy) = match self.comp {
                        Component::U => (
                            self.c.ac(ii - 1, jj, k) + self.c.ac(ii, jj, k),
                            self.c.edge_xy(ii, jj, k) + self.c.edge_xy(ii, jj + 1, k),
                        ),
                        Component::V => (
                            self.c.edge_xy(ii, jj, k) + self.c.edge_xy(ii + 1, jj, k),
                            self.c.ac(ii, jj - 1, k) + self.c.ac(ii, jj, k),
                        ),
                        Component::W => unreachable!(),
                    };
                    let cz_b = if k == 0 { 2.0 * self.wall_a(ii, jj, 0) } else { self.zedge(ii, jj, k - 1) };
                    let cz_t = if k == nz - 1 {
                        2.0 * self.wall_a(ii, jj, nz - 1)
                    } else {
                        self.zedge(ii, jj, k)
                    };
                    let diag =
                        1.0 + self.dt * (cx / (dx * dx) + cy / (dy * dy) + (cz_b + cz_t) / (dz * dz));
                    d[self.idx(nx, ny, i, j, k)] = 1.0 / diag;
                }
            }
        }
        d
    }
}

struct NormalOp<'a> {
    c: &'a DiffusionCoeff<'a>,
    dt: f64,
}

impl NormalOp<'_> {
    // unknowns: w at interior z-faces kf = 1..nz-1, flat index
    // i + nx*(j + ny*(kf-1))
    #[inline]
    fn idx(&self, nx: usize, ny: usize, i: usize, j: usize, kf: usize) -> usize {
        i + nx * (j + ny * (kf - 1))
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let g = &self.c.grid;
        let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
        let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
        let at = |x: &[f64], i: isize, j: isize, kf: usize| -> f64 {
            if kf == 0 || kf == nz {
                0.0
            } else {
                x[self.idx(nx, ny, g.wrap_x(i), g.wrap_y(j), kf)]
            }
        };
        for kf in 1..nz {
            for j in 0..ny {
                let jj = j as isize;
                for i in 0..nx {
                    let ii = i as isize;
                    let x0 = at(x, ii, jj, kf);
                    let lap_x = (self.c.edge_xz(ii + 1, jj, kf - 1) * (at(x, ii + 1, jj, kf) - x0)
                        - self.c.edge_xz(ii, jj, kf - 1) * (x0 - at(x, ii - 1, jj, kf)))
                        / (dx * dx);
                    let lap_y = (self.c.edge_yz(ii, jj + 1, kf - 1) * (at(x, ii, jj + 1, kf) - x0)
                        - self.c.edge_yz(ii, jj, kf - 1) * (x0 - at(x, ii, jj - 1, kf)))
                        / (dy * dy);
                    let lap_z = (self.c.ac(ii, jj, kf) * (at(x, ii, jj, kf + 1) - x0)
                        - self.c.ac(ii, jj, kf - 1) * (x0 - at(x, ii, jj, kf - 1)))
                        / (dz * dz);
                    y[self.idx(nx, ny, i, j, kf)] = x0 - self.dt * (lap_x + lap_y + lap_z);
                }
            }
        }
    }

    fn diag_inv(&self) -> Vec<f64> {
        let g = &self.c.grid;
        let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
        let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
        let mut d = vec![0.0; nx * ny * (nz - 1)];
        for kf in 1..nz {
            for j in 0..ny {
                let jj = j as isize;
                for i in 0..nx {
                    let ii = i as isize;
                    let cx = self.c.edge_xz(ii, jj, kf - 1) + self.c.edge_xz(ii + 1, jj, kf - 1);
                    let cy = self.c.edge_yz(ii, jj, kf - 1) + self.c.edge_yz(ii, jj + 1, kf - 1);
                    let cz = self.c.ac(ii, jj, kf - 1) + self.c.ac(ii, jj, kf);
                    let diag =
                        1.0 + self.dt * (cx / (dx * dx) + cy / (dy * dy) + cz / (dz * dz));
                    d[self.idx(nx, ny, i, j, kf)] = 1.0 / diag;
                }
            }
        }
        d
    }
}

/// Backward-Euler diffusion step: solves `(I - dt L) v_new = rhs` component by
/// component, with the wall data of `bc` entering through the right-hand side.
/// `v` supplies the warm start and receives the solution (ghosts refreshed).
pub fn diffuse_implicit(
    v: &mut VectorField,
    rhs: &VectorField,
    nu_total: &ScalarField,
    bc: &WallBC,
    dt: f64,
) -> Result<[PcgOutcome; 3]> {
    let c = DiffusionCoeff::new(nu_total);
    let g = c.grid.clone();
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let dz = g.dz();
    let plane = nx * ny;

    let mut outcomes = [PcgOutcome { iterations: 0, relative_residual: 0.0 }; 3];

    for (ci, comp) in [Component::U, Component::V].into_iter().enumerate() {
        let op = TangentialOp { c: &c, comp, dt };
        let mut b = vec![0.0; plane * nz];
        let mut x = vec![0.0; plane * nz];
        let (rhs_raw, x_raw) = match comp {
            Component::U => (rhs.u_raw(), v.u_raw()),
            Component::V => (rhs.v_raw(), v.v_raw()),
            Component::W => unreachable!(),
        };
        for k in 0..nz {
            let src = plane * (k + 1);
            b[plane * k..plane * (k + 1)].copy_from_slice(&rhs_raw[src..src + plane]);
            x[plane * k..plane * (k + 1)].copy_from_slice(&x_raw[src..src + plane]);
        }
        // inhomogeneous lid data for u: ghost elimination puts
        // dt * 2 a_w g / dz^2 into the rhs of the top layer
        let g_lid = match comp {
            Component::U => bc.lid_velocity,
            _ => 0.0,
        };
        if g_lid != 0.0 {
            for j in 0..ny {
                for i in 0..nx {
                    let aw = op.wall_a(i as isize, j as isize, nz - 1);
                    b[i + nx * (j + ny * (nz - 1))] += dt * 2.0 * aw * g_lid / (dz * dz);
                }
            }
        }
        let diag_inv = op.diag_inv();
        let out = pcg_solve(|x, y| op.apply(x, y), &diag_inv, &b, &mut x, PCG_TOL, PCG_MAX_ITER, false)?;
        outcomes[ci] = out;
        for k in 0..nz {
            let dst = plane * (k + 1);
            match comp {
                Component::U => {
                    v.u_raw_mut()[dst..dst + plane].copy_from_slice(&x[plane * k..plane * (k + 1)])
                }
                Component::V => {
                    v.v_raw_mut()[dst..dst + plane].copy_from_slice(&x[plane * k..plane * (k + 1)])
                }
                Component::W => unreachable!(),
            }
        }
    }

    // wall-normal component
    {
        let op = NormalOp { c: &c, dt };
        let n = plane * (nz - 1);
        let mut b = vec![0.0; n];
        let mut x = vec![0.0; n];
        b.copy_from_slice(&rhs.w_raw()[plane..plane * nz]);
        x.copy_from_slice(&v.w_raw()[plane..plane * nz]);
        let diag_inv = op.diag_inv();
        let out = pcg_solve(|x, y| op.apply(x, y), &diag_inv, &b, &mut x, PCG_TOL, PCG_MAX_ITER, false)?;
        outcomes[2] = out;
        v.w_raw_mut()[plane..plane * nz].copy_from_slice(&x);
    }

    v.apply_boundary_conditions(bc);
    Ok(outcomes)
}

/// Exact quadratic form of the diffusion operator: returns `(dissipation,
/// boundary_work)` such that `(L v, v) * vol = -dissipation + boundary_work`
/// identically for the discrete operator with the wall data of `bc`.
pub fn diffusion_quadratic_form(v: &VectorField, nu_total: &ScalarField, bc: &WallBC) -> (f64, f64) {
    let c = DiffusionCoeff::new(nu_total);
    let g = c.grid.clone();
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
    let vol = g.cell_volume();
    let da = dx * dy;
    let mut diss = 0.0;
    let mut work = 0.0;

    // tangential components: every interior coupling pair counted once via
    // its east/north/top face, wall half-cells separately
    for (comp, g_lid) in [(Component::U, bc.lid_velocity), (Component::V, 0.0)] {
        let op = TangentialOp { c: &c, comp, dt: 0.0 };
        let val = |i: isize, j: isize, k: usize| -> f64 {
            match comp {
                Component::U => v.u(i, j, k + 1),
                Component::V => v.v(i, j, k + 1),
                Component::W => unreachable!(),
            }
        };
        for k in 0..nz {
            for j in 0..ny {
                let jj = j as isize;
                for i in 0..nx {
                    let ii = i as isize;
                    let x0 = val(ii, jj, k);
                    let a_e = match comp {
                        Component::U => c.ac(ii, jj, k),
                        Component::V => c.edge_xy(ii + 1, jj, k),
                        Component::W => unreachable!(),
                    };
                    let d_e = (val(ii + 1, jj, k) - x0) / dx;
                    diss += a_e * d_e * d_e * vol;
                    let a_n = match comp {
                        Component::U => c.edge_xy(ii, jj + 1, k),
                        Component::V => c.ac(ii, jj, k),
                        Component::W => unreachable!(),
                    };
                    let d_n = (val(ii, jj + 1, k) - x0) / dy;
                    diss += a_n * d_n * d_n * vol;
                    if k + 1 < nz {
                        let a_t = op.zedge(ii, jj, k);
                        let d_t = (val(ii, jj, k + 1) - x0) / dz;
                        diss += a_t * d_t * d_t * vol;
                    }
                    if k == 0 {
                        let aw = op.wall_a(ii, jj, 0);
                        let grad = x0 / (0.5 * dz);
                        diss += aw * grad * grad * (0.5 * dz) * da;
                    }
                    if k == nz - 1 {
                        let aw = op.wall_a(ii, jj, nz - 1);
                        let grad = (g_lid - x0) / (0.5 * dz);
                        diss += aw * grad * grad * (0.5 * dz) * da;
                        work += aw * g_lid * grad * da;
                    }
                }
            }
        }
    }

    // wall-normal component: wall faces pinned at zero, full-cell gradients
    for kf in 0..nz {
        for j in 0..ny {
            let jj = j as isize;
            for i in 0..nx {
                let ii = i as isize;
                let w0 = v.w(ii, jj, kf);
                // z pair between faces kf and kf+1 across cell kf (covers
                // both pinned walls)
                let d_z = (v.w(ii, jj, kf + 1) - w0) / dz;
                diss += c.ac(ii, jj, kf) * d_z * d_z * vol;
                // lateral pairs only between interior unknowns
                if kf >= 1 {
                    let d_e = (v.w(ii + 1, jj, kf) - w0) / dx;
                    diss += c.edge_xz(ii + 1, jj, kf - 1) * d_e * d_e * vol;
                    let d_n = (v.w(ii, jj + 1, kf) - w0) / dy;
                    diss += c.edge_yz(ii, jj + 1, kf - 1) * d_n * d_n * vol;
                }
            }
        }
    }
    (diss, work)
}
