use super::{Grid, ScalarField, VectorField};
use crate::{CoreError, Result};

/// Integration region for [`volume_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    WholeBox,
    /// Horizontal slab `z0 < z < z1`.
    Slab { z0: f64, z1: f64 },
}

/// Midpoint-rule volume integral; slab regions weight partially covered cell
/// layers proportionally.
pub fn volume_integral(f: &ScalarField, region: Region) -> Result<f64> {
    let g = f.grid();
    let weights = layer_weights(g, region)?;
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let mut acc = 0.0;
    for k in 0..nz {
        if weights[k] == 0.0 {
            continue;
        }
        let mut layer = 0.0;
        for j in 0..ny {
            for i in 0..nx {
                layer += f.get(i, j, k);
            }
        }
        acc += layer * weights[k];
    }
    Ok(acc * g.cell_volume())
}

/// Fraction of each z cell layer covered by the region.
pub fn layer_weights(g: &Grid, region: Region) -> Result<Vec<f64>> {
    let nz = g.nz();
    match region {
        Region::WholeBox => Ok(vec![1.0; nz]),
        Region::Slab { z0, z1 } => {
            if !(z0 < z1) {
                return Err(CoreError::EmptyRegion(format!("slab [{z0}, {z1}]")));
            }
            if z1 <= 0.0 || z0 >= g.box_length() {
                return Err(CoreError::EmptyRegion(format!(
                    "slab [{z0}, {z1}] outside [0, {}]",
                    g.box_length()
                )));
            }
            let dz = g.dz();
            let mut w = vec![0.0; nz];
            for (k, wk) in w.iter_mut().enumerate() {
                let lo = (k as f64 * dz).max(z0);
                let hi = ((k + 1) as f64 * dz).min(z1);
                *wk = ((hi - lo) / dz).max(0.0);
            }
            Ok(w)
        }
    }
}

/// Second-order discrete divergence at cell centers.
pub fn divergence(v: &VectorField) -> ScalarField {
    let g = v.grid();
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
    let mut out = ScalarField::zeros(g);
    for k in 0..nz {
        let ks = k + 1;
        for j in 0..ny {
            for i in 0..nx {
                let div = (v.u(i as isize + 1, j as isize, ks) - v.u(i as isize, j as isize, ks)) / dx
                    + (v.v(i as isize, j as isize + 1, ks) - v.v(i as isize, j as isize, ks)) / dy
                    + (v.w(i as isize, j as isize, k + 1) - v.w(i as isize, j as isize, k)) / dz;
                out.set(i, j, k, div);
            }
        }
    }
    out
}

pub fn max_abs_divergence(v: &VectorField) -> f64 {
    divergence(v).max_abs()
}

/// Squared z-derivatives of the tangential component sampled at the four
/// wall-normal edges around cell `(i,j,k)`, averaged. `get(face, layer)`
/// reads the component at its staggered face with the given z storage layer.
/// The compact ghost difference at a wall edge equals the one-sided half-cell
/// gradient `(u1 - wall) / (dz/2)`, matching the energy ledger's quadratic
/// form.
#[inline]
fn tangential_dz_sq(get: impl Fn(isize, usize) -> f64, k: usize, dz: f64) -> f64 {
    let mut acc = 0.0;
    for a in 0..2isize {
        for c in [k, k + 1] {
            let d = (get(a, c + 1) - get(a, c)) / dz;
            acc += d * d;
        }
    }
    0.25 * acc
}

/// Pointwise squared full gradient `sum_{a,b} (d u_a / d x_b)^2` at cell
/// centers: every partial is a compact difference at its natural staggered
/// location, and the squares (not the values) are averaged to the center, so
/// no oscillatory component is attenuated relative to the squared-magnitude
/// statistics. Requires boundary ghosts to be filled.
pub fn gradient_sq(v: &VectorField) -> ScalarField {
    let g = v.grid();
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
    let mut out = ScalarField::zeros(g);
    for k in 0..nz {
        let ks = k + 1;
        for j in 0..ny {
            let jj = j as isize;
            for i in 0..nx {
                let ii = i as isize;
                // diagonal entries, native at the center
                let dudx = (v.u(ii + 1, jj, ks) - v.u(ii, jj, ks)) / dx;
                let dvdy = (v.v(ii, jj + 1, ks) - v.v(ii, jj, ks)) / dy;
                let dwdz = (v.w(ii, jj, k + 1) - v.w(ii, jj, k)) / dz;
                let mut s = dudx * dudx + dvdy * dvdy + dwdz * dwdz;

                // du/dy at the four surrounding xy-edges
                let mut dudy = 0.0;
                // dv/dx likewise
                let mut dvdx = 0.0;
                for a in 0..2isize {
                    for b in 0..2isize {
                        let d = (v.u(ii + a, jj + b, ks) - v.u(ii + a, jj + b - 1, ks)) / dy;
                        dudy += d * d;
                        let d = (v.v(ii + b, jj + a, ks) - v.v(ii + b - 1, jj + a, ks)) / dx;
                        dvdx += d * d;
                    }
                }
                s += 0.25 * (dudy + dvdx);

                // z derivatives of the tangential components at wall-normal
                // edges (the ghost encodes the wall value)
                s += tangential_dz_sq(|a, c| v.u(ii + a, jj, c), k, dz);
                s += tangential_dz_sq(|a, c| v.v(ii, jj + a, c), k, dz);

                // dw/dx, dw/dy at the four surrounding edges on the two
                // bounding z-faces (wall faces carry w = 0 exactly)
                let mut dwdx = 0.0;
                let mut dwdy = 0.0;
                for a in 0..2isize {
                    for c in [k, k + 1] {
                        let d = (v.w(ii + a, jj, c) - v.w(ii + a - 1, jj, c)) / dx;
                        dwdx += d * d;
                        let d = (v.w(ii, jj + a, c) - v.w(ii, jj + a - 1, c)) / dy;
                        dwdy += d * d;
                    }
                }
                s += 0.25 * (dwdx + dwdy);

                out.set(i, j, k, s);
            }
        }
    }
    out
}

/// Squared z-derivatives of all three components at cell centers (the
/// z-derivative part of [`gradient_sq`], same stencils).
pub fn dz_sq(v: &VectorField) -> ScalarField {
    let g = v.grid();
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let dz = g.dz();
    let mut out = ScalarField::zeros(g);
    for k in 0..nz {
        for j in 0..ny {
            let jj = j as isize;
            for i in 0..nx {
                let ii = i as isize;
                let mut s = tangential_dz_sq(|a, c| v.u(ii + a, jj, c), k, dz);
                s += tangential_dz_sq(|a, c| v.v(ii, jj + a, c), k, dz);
                let dwdz = (v.w(ii, jj, k + 1) - v.w(ii, jj, k)) / dz;
                out.set(i, j, k, s + dwdz * dwdz);
            }
        }
    }
    out
}

/// x-velocity interpolated to cell centers.
pub fn center_u(v: &VectorField) -> ScalarField {
    let g = v.grid();
    let mut out = ScalarField::zeros(g);
    for k in 0..g.nz() {
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                out.set(
                    i,
                    j,
                    k,
                    0.5 * (v.u(i as isize, j as isize, k + 1) + v.u(i as isize + 1, j as isize, k + 1)),
                );
            }
        }
    }
    out
}

pub fn center_v(v: &VectorField) -> ScalarField {
    let g = v.grid();
    let mut out = ScalarField::zeros(g);
    for k in 0..g.nz() {
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                out.set(
                    i,
                    j,
                    k,
                    0.5 * (v.v(i as isize, j as isize, k + 1) + v.v(i as isize, j as isize + 1, k + 1)),
                );
            }
        }
    }
    out
}

pub fn center_w(v: &VectorField) -> ScalarField {
    let g = v.grid();
    let mut out = ScalarField::zeros(g);
    for k in 0..g.nz() {
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                out.set(
                    i,
                    j,
                    k,
                    0.5 * (v.w(i as isize, j as isize, k) + v.w(i as isize, j as isize, k + 1)),
                );
            }
        }
    }
    out
}

/// Gradient of a cell-centered scalar evaluated at the staggered velocity
/// locations. The wall-normal component is zero on the wall faces (homogeneous
/// Neumann in z); ghost layers of the output are zero.
pub fn gradient_faces(q: &ScalarField) -> VectorField {
    let g = q.grid().clone();
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let (dx, dy, dz) = (g.dx(), g.dy(), g.dz());
    let mut out = VectorField::zeros(&g);
    for k in 0..nz {
        for j in 0..ny {
            let jj = j as isize;
            for i in 0..nx {
                let ii = i as isize;
                out.set_u(i, j, k + 1, (q.at(ii, jj, k) - q.at(ii - 1, jj, k)) / dx);
                out.set_v(i, j, k + 1, (q.at(ii, jj, k) - q.at(ii, jj - 1, k)) / dy);
                if k > 0 {
                    out.set_w(i, j, k, (q.at(ii, jj, k) - q.at(ii, jj, k - 1)) / dz);
                }
            }
        }
    }
    out
}

/// Discrete L2 inner product over the interior staggered unknowns (uniform
/// cell-volume weight; wall w faces are pinned and excluded).
pub fn dot(a: &VectorField, b: &VectorField) -> Result<f64> {
    a.check_grid(b, "dot")?;
    let g = a.grid();
    let (nx, ny, nz) = (g.nx(), g.ny(), g.nz());
    let mut acc = 0.0;
    for k in 1..=nz {
        for j in 0..ny {
            for i in 0..nx {
                let (ii, jj) = (i as isize, j as isize);
                acc += a.u(ii, jj, k) * b.u(ii, jj, k) + a.v(ii, jj, k) * b.v(ii, jj, k);
            }
        }
    }
    for k in 1..nz {
        for j in 0..ny {
            for i in 0..nx {
                let (ii, jj) = (i as isize, j as isize);
                acc += a.w(ii, jj, k) * b.w(ii, jj, k);
            }
        }
    }
    Ok(acc * g.cell_volume())
}

pub fn norm_sq(a: &VectorField) -> f64 {
    dot(a, a).expect("same field")
}

/// `(1/2) ||u||^2` in the discrete L2 norm.
pub fn kinetic_energy(a: &VectorField) -> f64 {
    0.5 * norm_sq(a)
}
