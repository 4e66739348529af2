use super::Grid;
use crate::{CoreError, Result};

/// Tangential wall data: the lid at `z = L` moves with velocity `(U,0,0)`, the
/// wall at `z = 0` is fixed. Wall-normal velocity vanishes at both walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallBC {
    pub lid_velocity: f64,
}

impl WallBC {
    pub fn new(lid_velocity: f64) -> Self {
        Self { lid_velocity }
    }
}

/// Staggered (MAC) vector field.
///
/// Storage layout, x-fastest:
/// * `u` on x-faces at `(i dx, (j+1/2) dy, (ks-1/2) dz)`, dims `nx*ny*(nz+2)`
///   where `ks = 0` and `ks = nz+1` are wall ghost layers;
/// * `v` on y-faces at `((i+1/2) dx, j dy, (ks-1/2) dz)`, same z layout;
/// * `w` on z-faces at `((i+1/2) dx, (j+1/2) dy, k dz)`, dims `nx*ny*(nz+1)`
///   with `k = 0` and `k = nz` pinned to the walls.
///
/// x and y indices wrap periodically; there are no stored side ghosts.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    u: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
}

impl VectorField {
    pub fn zeros(grid: &Grid) -> Self {
        let plane = grid.nx() * grid.ny();
        Self {
            grid: grid.clone(),
            u: vec![0.0; plane * (grid.nz() + 2)],
            v: vec![0.0; plane * (grid.nz() + 2)],
            w: vec![0.0; plane * (grid.nz() + 1)],
        }
    }

    /// Samples analytic component functions at their staggered interior
    /// locations; ghost layers are left zero until boundary conditions are
    /// applied.
    pub fn from_fn(
        grid: &Grid,
        fu: impl Fn(f64, f64, f64) -> f64,
        fv: impl Fn(f64, f64, f64) -> f64,
        fw: impl Fn(f64, f64, f64) -> f64,
    ) -> Self {
        let mut f = Self::zeros(grid);
        for k in 0..grid.nz() {
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    let zc = grid.zc(k);
                    f.set_u(i, j, k + 1, fu(grid.xf(i), grid.yc(j), zc));
                    f.set_v(i, j, k + 1, fv(grid.xc(i), grid.yf(j), zc));
                }
            }
        }
        for k in 0..=grid.nz() {
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    f.set_w(i, j, k, fw(grid.xc(i), grid.yc(j), grid.zf(k)));
                }
            }
        }
        f
    }

    /// Laminar Couette profile `(U z/L, 0, 0)`.
    pub fn couette(grid: &Grid, lid_velocity: f64) -> Self {
        let l = grid.box_length();
        Self::from_fn(grid, |_, _, z| lid_velocity * z / l, |_, _, _| 0.0, |_, _, _| 0.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    fn plane(&self) -> usize {
        self.grid.nx() * self.grid.ny()
    }

    #[inline]
    fn uv_idx(&self, i: usize, j: usize, ks: usize) -> usize {
        i + self.grid.nx() * j + self.plane() * ks
    }

    /// `u` at storage layer `ks` (0 = bottom ghost, 1..=nz interior, nz+1 = top
    /// ghost), periodic wrap in i,j.
    #[inline]
    pub fn u(&self, i: isize, j: isize, ks: usize) -> f64 {
        self.u[self.uv_idx(self.grid.wrap_x(i), self.grid.wrap_y(j), ks)]
    }

    #[inline]
    pub fn v(&self, i: isize, j: isize, ks: usize) -> f64 {
        self.v[self.uv_idx(self.grid.wrap_x(i), self.grid.wrap_y(j), ks)]
    }

    /// `w` at z-face `k` in `0..=nz`, periodic wrap in i,j.
    #[inline]
    pub fn w(&self, i: isize, j: isize, k: usize) -> f64 {
        self.w[self.uv_idx(self.grid.wrap_x(i), self.grid.wrap_y(j), k)]
    }

    #[inline]
    pub fn set_u(&mut self, i: usize, j: usize, ks: usize, val: f64) {
        let idx = self.uv_idx(i, j, ks);
        self.u[idx] = val;
    }
    #[inline]
    pub fn set_v(&mut self, i: usize, j: usize, ks: usize, val: f64) {
        let idx = self.uv_idx(i, j, ks);
        self.v[idx] = val;
    }
    #[inline]
    pub fn set_w(&mut self, i: usize, j: usize, k: usize, val: f64) {
        let idx = self.uv_idx(i, j, k);
        self.w[idx] = val;
    }

    pub fn u_raw(&self) -> &[f64] {
        &self.u
    }
    pub fn v_raw(&self) -> &[f64] {
        &self.v
    }
    pub fn w_raw(&self) -> &[f64] {
        &self.w
    }
    pub fn u_raw_mut(&mut self) -> &mut [f64] {
        &mut self.u
    }
    pub fn v_raw_mut(&mut self) -> &mut [f64] {
        &mut self.v
    }
    pub fn w_raw_mut(&mut self) -> &mut [f64] {
        &mut self.w
    }

    /// Fills the z ghost layers so linearly interpolated wall values match the
    /// boundary data, and pins the wall-normal component at the walls.
    pub fn apply_boundary_conditions(&mut self, bc: &WallBC) {
        let (nx, ny, nz) = (self.grid.nx(), self.grid.ny(), self.grid.nz());
        for j in 0..ny {
            for i in 0..nx {
                let ub = -self.u[self.uv_idx(i, j, 1)];
                self.set_u(i, j, 0, ub);
                let ut = 2.0 * bc.lid_velocity - self.u[self.uv_idx(i, j, nz)];
                self.set_u(i, j, nz + 1, ut);
                let vb = -self.v[self.uv_idx(i, j, 1)];
                self.set_v(i, j, 0, vb);
                let vt = -self.v[self.uv_idx(i, j, nz)];
                self.set_v(i, j, nz + 1, vt);
                self.set_w(i, j, 0, 0.0);
                self.set_w(i, j, nz, 0.0);
            }
        }
    }

    /// Linearly interpolated tangential velocity at the two walls, for BC
    /// verification: `(u, v)` at `z = 0` and `z = L` for column `(i, j)`.
    pub fn wall_values(&self, i: usize, j: usize) -> ((f64, f64), (f64, f64)) {
        let nz = self.grid.nz();
        let idx1 = self.uv_idx(i, j, 1);
        let idx0 = self.uv_idx(i, j, 0);
        let idxn = self.uv_idx(i, j, nz);
        let idxt = self.uv_idx(i, j, nz + 1);
        (
            (
                0.5 * (self.u[idx0] + self.u[idx1]),
                0.5 * (self.v[idx0] + self.v[idx1]),
            ),
            (
                0.5 * (self.u[idxn] + self.u[idxt]),
                0.5 * (self.v[idxn] + self.v[idxt]),
            ),
        )
    }

    pub fn all_finite(&self) -> bool {
        self.u.iter().chain(&self.v).chain(&self.w).all(|x| x.is_finite())
    }

    pub fn check_grid(&self, other: &VectorField, what: &str) -> Result<()> {
        self.grid.check_same(other.grid(), what)
    }

    /// `self += scale * other` over all storage (ghosts included).
    pub fn axpy(&mut self, scale: f64, other: &VectorField) -> Result<()> {
        self.check_grid(other, "axpy")?;
        for (a, b) in self.u.iter_mut().zip(&other.u) {
            *a += scale * b;
        }
        for (a, b) in self.v.iter_mut().zip(&other.v) {
            *a += scale * b;
        }
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a += scale * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, s: f64) {
        for x in self.u.iter_mut().chain(&mut self.v).chain(&mut self.w) {
            *x *= s;
        }
    }

    pub(crate) fn from_parts(grid: Grid, u: Vec<f64>, v: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        let plane = grid.nx() * grid.ny();
        if u.len() != plane * (grid.nz() + 2)
            || v.len() != plane * (grid.nz() + 2)
            || w.len() != plane * (grid.nz() + 1)
        {
            return Err(CoreError::Malformed("vector payload lengths do not match grid".into()));
        }
        Ok(Self { grid, u, v, w })
    }
}
