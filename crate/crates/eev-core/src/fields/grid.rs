use crate::{CoreError, Result};

/// Uniform structured grid on the box `(0,L)^3`, periodic in x,y with walls at
/// `z = 0` and `z = L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    box_l: f64,
    nx: usize,
    ny: usize,
    nz: usize,
    dx: f64,
    dy: f64,
    dz: f64,
}

impl Grid {
    pub fn new(box_l: f64, nx: usize, ny: usize, nz: usize) -> Result<Self> {
        if !(box_l > 0.0) {
            return Err(CoreError::InvalidConfig(format!("box length {box_l} must be positive")));
        }
        if nx < 4 || ny < 4 || nz < 4 {
            return Err(CoreError::InvalidConfig(format!(
                "grid sizes must be at least 4, got {nx}x{ny}x{nz}"
            )));
        }
        Ok(Self {
            box_l,
            nx,
            ny,
            nz,
            dx: box_l / nx as f64,
            dy: box_l / ny as f64,
            dz: box_l / nz as f64,
        })
    }

    pub fn box_length(&self) -> f64 {
        self.box_l
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn nz(&self) -> usize {
        self.nz
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dy(&self) -> f64 {
        self.dy
    }
    pub fn dz(&self) -> f64 {
        self.dz
    }
    pub fn min_spacing(&self) -> f64 {
        self.dx.min(self.dy).min(self.dz)
    }
    pub fn cells(&self) -> usize {
        self.nx * self.ny * self.nz
    }
    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy * self.dz
    }
    pub fn volume(&self) -> f64 {
        self.box_l.powi(3)
    }

    /// Cell-center coordinates.
    pub fn xc(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }
    pub fn yc(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dy
    }
    pub fn zc(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.dz
    }
    /// Face coordinates (x-faces at `i*dx`, likewise y and z).
    pub fn xf(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }
    pub fn yf(&self, j: usize) -> f64 {
        j as f64 * self.dy
    }
    pub fn zf(&self, k: usize) -> f64 {
        k as f64 * self.dz
    }

    #[inline]
    pub fn wrap_x(&self, i: isize) -> usize {
        i.rem_euclid(self.nx as isize) as usize
    }
    #[inline]
    pub fn wrap_y(&self, j: isize) -> usize {
        j.rem_euclid(self.ny as isize) as usize
    }

    pub(crate) fn check_same(&self, other: &Grid, what: &str) -> Result<()> {
        if self != other {
            return Err(CoreError::GridMismatch(format!(
                "{what}: {}x{}x{} vs {}x{}x{}",
                self.nx, self.ny, self.nz, other.nx, other.ny, other.nz
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::Grid;

    #[test]
    fn spacing_is_exact() {
        let g = Grid::new(2.0, 8, 16, 32).unwrap();
        assert_eq!(g.dx(), 2.0 / 8.0);
        assert_eq!(g.dy(), 2.0 / 16.0);
        assert_eq!(g.dz(), 2.0 / 32.0);
    }

    #[test]
    fn rejects_small_grids() {
        assert!(Grid::new(1.0, 3, 8, 8).is_err());
        assert!(Grid::new(0.0, 8, 8, 8).is_err());
    }

    #[test]
    fn periodic_wrap() {
        let g = Grid::new(1.0, 8, 8, 8).unwrap();
        assert_eq!(g.wrap_x(-1), 7);
        assert_eq!(g.wrap_x(8), 0);
        assert_eq!(g.wrap_y(17), 1);
    }
}
