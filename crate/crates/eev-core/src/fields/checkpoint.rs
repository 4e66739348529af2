//! Binary checkpoint format.
//!
//! Layout: magic `"EEV1"`, then `nx, ny, nz` as little-endian `u64`, `L` as
//! little-endian `f64`, then any number of field payloads as contiguous
//! little-endian `f64` in x-fastest order. Payload lengths are implied by the
//! grid and the writer's schema; readers supply the expected length.

use std::io::{Read, Write};

use super::{Grid, ScalarField, VectorField};
use crate::{CoreError, Result};

pub const MAGIC: &[u8; 4] = b"EEV1";

pub fn write_header<W: Write>(w: &mut W, grid: &Grid) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(grid.nx() as u64).to_le_bytes())?;
    w.write_all(&(grid.ny() as u64).to_le_bytes())?;
    w.write_all(&(grid.nz() as u64).to_le_bytes())?;
    w.write_all(&grid.box_length().to_le_bytes())?;
    Ok(())
}

pub fn read_header<R: Read>(r: &mut R) -> Result<Grid> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CoreError::Malformed(format!("bad magic {magic:?}, expected {MAGIC:?}")));
    }
    let mut b8 = [0u8; 8];
    let mut dims = [0u64; 3];
    for d in &mut dims {
        r.read_exact(&mut b8)?;
        *d = u64::from_le_bytes(b8);
    }
    r.read_exact(&mut b8)?;
    let l = f64::from_le_bytes(b8);
    if dims.iter().any(|&d| d > usize::MAX as u64) {
        return Err(CoreError::Malformed("grid dimension overflows usize".into()));
    }
    Grid::new(l, dims[0] as usize, dims[1] as usize, dims[2] as usize)
        .map_err(|e| CoreError::Malformed(format!("header grid invalid: {e}")))
}

pub fn write_payload<W: Write>(w: &mut W, data: &[f64]) -> Result<()> {
    for x in data {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_payload<R: Read>(r: &mut R, len: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; len * 8];
    r.read_exact(&mut bytes)
        .map_err(|e| CoreError::Malformed(format!("payload truncated: {e}")))?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

/// One cell-centered scalar payload.
pub fn write_scalar<W: Write>(w: &mut W, f: &ScalarField) -> Result<()> {
    write_header(w, f.grid())?;
    write_payload(w, f.data())
}

pub fn read_scalar<R: Read>(r: &mut R) -> Result<ScalarField> {
    let grid = read_header(r)?;
    let data = read_payload(r, grid.cells())?;
    ScalarField::from_parts(grid, data)
}

/// Writes the three component payloads of a staggered vector field (ghost
/// layers included, so a round trip is bit-exact).
pub fn write_vector_payloads<W: Write>(w: &mut W, v: &VectorField) -> Result<()> {
    write_payload(w, v.u_raw())?;
    write_payload(w, v.v_raw())?;
    write_payload(w, v.w_raw())
}

pub fn read_vector_payloads<R: Read>(r: &mut R, grid: &Grid) -> Result<VectorField> {
    let plane = grid.nx() * grid.ny();
    let u = read_payload(r, plane * (grid.nz() + 2))?;
    let v = read_payload(r, plane * (grid.nz() + 2))?;
    let w = read_payload(r, plane * (grid.nz() + 1))?;
    VectorField::from_parts(grid.clone(), u, v, w)
}

pub fn write_vector<W: Write>(w: &mut W, v: &VectorField) -> Result<()> {
    write_header(w, v.grid())?;
    write_vector_payloads(w, v)
}

pub fn read_vector<R: Read>(r: &mut R) -> Result<VectorField> {
    let grid = read_header(r)?;
    read_vector_payloads(r, &grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::WallBC;

    #[test]
    fn scalar_round_trip_is_bit_exact() {
        let g = Grid::new(1.5, 4, 6, 8).unwrap();
        let f = ScalarField::from_fn(&g, |x, y, z| (x * 31.0).sin() * y - z.exp());
        let mut buf = Vec::new();
        write_scalar(&mut buf, &f).unwrap();
        let back = read_scalar(&mut buf.as_slice()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn vector_round_trip_preserves_ghosts() {
        let g = Grid::new(2.0, 4, 4, 8).unwrap();
        let mut v = VectorField::from_fn(
            &g,
            |x, y, z| x + y * z,
            |x, _, z| x - z,
            |_, y, z| y * z,
        );
        v.apply_boundary_conditions(&WallBC::new(1.25));
        let mut buf = Vec::new();
        write_vector(&mut buf, &v).unwrap();
        let back = read_vector(&mut buf.as_slice()).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn header_size_is_fixed() {
        let g = Grid::new(1.0, 4, 4, 4).unwrap();
        let mut buf = Vec::new();
        write_header(&mut buf, &g).unwrap();
        assert_eq!(buf.len(), 4 + 3 * 8 + 8);
    }

    #[test]
    fn rejects_bad_magic() {
        let g = Grid::new(1.0, 4, 4, 4).unwrap();
        let f = ScalarField::constant(&g, 1.0);
        let mut buf = Vec::new();
        write_scalar(&mut buf, &f).unwrap();
        buf[0] = b'X';
        assert!(matches!(read_scalar(&mut buf.as_slice()), Err(CoreError::Malformed(_))));
    }

    #[test]
    fn rejects_truncated_payload() {
        let g = Grid::new(1.0, 4, 4, 4).unwrap();
        let f = ScalarField::constant(&g, 1.0);
        let mut buf = Vec::new();
        write_scalar(&mut buf, &f).unwrap();
        buf.truncate(buf.len() - 9);
        assert!(read_scalar(&mut buf.as_slice()).is_err());
    }
}
