use super::Grid;
use crate::{CoreError, Result};

/// Cell-centered scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            data: vec![0.0; grid.cells()],
        }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let mut s = Self::zeros(grid);
        for k in 0..grid.nz() {
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    let v = f(grid.xc(i), grid.yc(j), grid.zc(k));
                    let idx = s.idx(i, j, k);
                    s.data[idx] = v;
                }
            }
        }
        s
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self {
            grid: grid.clone(),
            data: vec![value; grid.cells()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.grid.nx() * (j + self.grid.ny() * k)
    }

    /// Value at cell `(i,j,k)` with periodic wrap in x,y.
    #[inline]
    pub fn at(&self, i: isize, j: isize, k: usize) -> f64 {
        let i = self.grid.wrap_x(i);
        let j = self.grid.wrap_y(j);
        self.data[self.idx(i, j, k)]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.idx(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let idx = self.idx(i, j, k);
        self.data[idx] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Mean over all cells.
    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn check_grid(&self, other: &ScalarField, what: &str) -> Result<()> {
        self.grid.check_same(&other.grid, what)
    }

    /// Horizontal (x,y) average per z layer.
    pub fn horizontal_average(&self) -> Vec<f64> {
        let (nx, ny, nz) = (self.grid.nx(), self.grid.ny(), self.grid.nz());
        let mut prof = vec![0.0; nz];
        for k in 0..nz {
            let mut acc = 0.0;
            for j in 0..ny {
                for i in 0..nx {
                    acc += self.get(i, j, k);
                }
            }
            prof[k] = acc / (nx * ny) as f64;
        }
        prof
    }
}

/// Pointwise binary combination of two fields on the same grid.
pub fn zip_with(a: &ScalarField, b: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
    a.check_grid(b, "zip_with")?;
    let mut out = a.clone();
    for (o, bv) in out.data.iter_mut().zip(b.data.iter()) {
        *o = f(*o, *bv);
    }
    Ok(out)
}

impl std::ops::AddAssign<&ScalarField> for ScalarField {
    fn add_assign(&mut self, rhs: &ScalarField) {
        assert_eq!(self.grid, rhs.grid, "grid mismatch");
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
    }
}

impl From<(Grid, Vec<f64>)> for ScalarField {
    fn from((grid, data): (Grid, Vec<f64>)) -> Self {
        assert_eq!(data.len(), grid.cells());
        Self { grid, data }
    }
}

impl ScalarField {
    pub(crate) fn from_parts(grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.cells() {
            return Err(CoreError::Malformed(format!(
                "scalar payload has {} values, expected {}",
                data.len(),
                grid.cells()
            )));
        }
        Ok(Self { grid, data })
    }
}
