//! Dense matrix and vector exchange formats.
//!
//! CSV: one matrix row per line, each cell written as two fields `re,im`.
//! Binary: 16-byte header (`b"LCSM"`, 4 reserved zero bytes, `n_rows` and
//! `n_cols` as little-endian `u32`) followed by row-major little-endian
//! `f64` pairs `re, im`.

use std::io::{Read, Write};

use crate::linalg::CMatrix;
use crate::{Error, Result, C64};

pub const BINARY_MAGIC: &[u8; 4] = b"LCSM";

pub fn write_matrix_csv<W: Write>(m: &CMatrix, mut w: W) -> Result<()> {
    for i in 0..m.nrows() {
        let cells: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:e},{:e}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Reads the `re,im` CSV layout. With `real_only`, every field is a real
/// entry instead.
pub fn read_matrix_csv<R: Read>(mut r: R, real_only: bool) -> Result<CMatrix> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::CorruptFile(format!("line {}: {e}", lineno + 1)))?;
        let row = if real_only {
            fields.into_iter().map(|v| C64::new(v, 0.0)).collect()
        } else {
            if fields.len() % 2 != 0 {
                return Err(Error::CorruptFile(format!(
                    "line {}: odd number of fields for re,im pairs",
                    lineno + 1
                )));
            }
            fields.chunks(2).map(|c| C64::new(c[0], c[1])).collect()
        };
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::CorruptFile("ragged rows".into()));
    }
    Ok(CMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

pub fn write_matrix_binary<W: Write>(m: &CMatrix, mut w: W) -> Result<()> {
    let to_u32 = |v: usize| {
        u32::try_from(v).map_err(|_| Error::UnsupportedFormat(format!("dimension {v} exceeds u32")))
    };
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&[0u8; 4])?;
    w.write_all(&to_u32(m.nrows())?.to_le_bytes())?;
    w.write_all(&to_u32(m.ncols())?.to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            w.write_all(&m[(i, j)].re.to_le_bytes())?;
            w.write_all(&m[(i, j)].im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_matrix_binary<R: Read>(mut r: R) -> Result<CMatrix> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)
        .map_err(|_| Error::CorruptFile("truncated header".into()))?;
    if &header[..4] != BINARY_MAGIC {
        return Err(Error::UnsupportedFormat("bad magic".into()));
    }
    let rows = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != rows * cols * 16 {
        return Err(Error::CorruptFile(format!(
            "expected {} payload bytes, found {}",
            rows * cols * 16,
            body.len()
        )));
    }
    let f = |k: usize| f64::from_le_bytes(body[8 * k..8 * k + 8].try_into().unwrap());
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        C64::new(f(k), f(k + 1))
    }))
}

/// A vector stored as a single-column matrix.
pub fn column(m: &CMatrix) -> Result<Vec<C64>> {
    if m.ncols() == 1 {
        Ok(m.column(0).iter().copied().collect())
    } else if m.nrows() == 1 {
        Ok(m.row(0).iter().copied().collect())
    } else {
        Err(Error::DimensionMismatch(format!(
            "expected a vector, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

pub fn vector_matrix(x: &[C64]) -> CMatrix {
    CMatrix::from_fn(x.len(), 1, |i, _| x[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CMatrix {
        CMatrix::from_fn(2, 3, |i, j| C64::new(i as f64 - 0.1 * j as f64, 1.0 / (1.0 + j as f64)))
    }

    #[test]
    fn csv_roundtrip() {
        let m = sample();
        let mut buf = Vec::new();
        write_matrix_csv(&m, &mut buf).unwrap();
        assert_eq!(read_matrix_csv(&buf[..], false).unwrap(), m);
    }

    #[test]
    fn real_csv_identity() {
        let m = read_matrix_csv("1,0\n0,1\n".as_bytes(), true).unwrap();
        assert_eq!(m, CMatrix::identity(2, 2));
        assert!(read_matrix_csv("1,0\n0\n".as_bytes(), true).is_err());
        assert!(read_matrix_csv("1,x".as_bytes(), true).is_err());
    }

    #[test]
    fn binary_roundtrip_is_bit_exact() {
        let m = sample();
        let mut buf = Vec::new();
        write_matrix_binary(&m, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 6 * 16);
        let back = read_matrix_binary(&buf[..]).unwrap();
        for (a, b) in m.iter().zip(back.iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert!(read_matrix_binary(&buf[..20]).is_err());
        assert!(matches!(read_matrix_binary(&b"XXXX0000000000000000"[..]), Err(Error::UnsupportedFormat(_))));
    }
}
