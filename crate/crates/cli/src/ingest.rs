//! Vector, matrix and image input.
//!
//! The format is chosen by file extension: `.csv` (complex `re,im` pairs, or
//! real entries when asked), `.bin` (the binary matrix layout) and `.pgm`
//! (binary P5 greymap, 8- or 16-bit big-endian, flattened row-major and
//! normalized to `[0, 1]`).

use std::path::Path;

use levelcs::io::{column, read_matrix_binary, read_matrix_csv};
use levelcs::linalg::CMatrix;
use levelcs::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Binary,
    Pgm,
}

pub fn format_of(path: &Path) -> Result<Format> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "csv" => Ok(Format::Csv),
        "bin" => Ok(Format::Binary),
        "pgm" => Ok(Format::Pgm),
        _ => Err(Error::UnsupportedFormat(format!(
            "{}: expected .csv, .bin or .pgm",
            path.display()
        ))),
    }
}

pub fn matrix_from_bytes(path: &Path, bytes: &[u8], real_csv: bool) -> Result<CMatrix> {
    match format_of(path)? {
        Format::Csv => read_matrix_csv(bytes, real_csv),
        Format::Binary => read_matrix_binary(bytes),
        Format::Pgm => {
            let img = parse_pgm(bytes)?;
            Ok(CMatrix::from_fn(img.height, img.width, |i, j| {
                C64::new(img.pixels[i * img.width + j], 0.0)
            }))
        }
    }
}

/// A vector: a single row or column of a CSV/binary matrix, or the pixels
/// of an image. CSV vectors hold real entries unless every line is a
/// `re,im` pair.
pub fn vector_from_bytes(path: &Path, bytes: &[u8]) -> Result<Vec<C64>> {
    match format_of(path)? {
        Format::Csv => {
            let m = match read_matrix_csv(bytes, false) {
                Ok(m) if m.ncols() == 1 => m,
                _ => read_matrix_csv(bytes, true)?,
            };
            column(&m)
        }
        Format::Binary => column(&read_matrix_binary(bytes)?),
        Format::Pgm => Ok(parse_pgm(bytes)?.pixels.into_iter().map(|v| C64::new(v, 0.0)).collect()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    /// Row-major, in `[0, 1]`.
    pub pixels: Vec<f64>,
}

pub fn parse_pgm(bytes: &[u8]) -> Result<Image> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::UnsupportedFormat("only binary P5 greymaps are supported".into()));
    }
    let mut pos = 2;
    let mut header = [0usize; 3];
    for field in header.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::CorruptFile("truncated PGM header".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::CorruptFile("bad PGM header field".into()))?;
    }
    let [width, height, maxval] = header;
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::CorruptFile("missing whitespace after PGM maxval".into()));
    }
    pos += 1;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::CorruptFile(format!("PGM maxval {maxval} outside 1..=65535")));
    }
    let depth = if maxval < 256 { 1 } else { 2 };
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::CorruptFile("PGM dimensions overflow".into()))?;
    let body = &bytes[pos..];
    if body.len() < count * depth {
        return Err(Error::CorruptFile(format!(
            "PGM body has {} bytes, expected {}",
            body.len(),
            count * depth
        )));
    }
    let pixels = (0..count)
        .map(|k| {
            let v = if depth == 1 {
                body[k] as usize
            } else {
                u16::from_be_bytes([body[2 * k], body[2 * k + 1]]) as usize
            };
            if v > maxval {
                Err(Error::CorruptFile(format!("sample {v} exceeds maxval {maxval}")))
            } else {
                Ok(v as f64 / maxval as f64)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Image { width, height, pixels })
}

/// 8-bit P5 greymap of `pixels`, clipped to `[0, 1]`.
pub fn encode_pgm(width: usize, height: usize, pixels: &[f64]) -> Result<Vec<u8>> {
    if pixels.len() != width * height {
        return Err(Error::LengthMismatch {
            expected: width * height,
            got: pixels.len(),
        });
    }
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(pixels.iter().map(|&v| {
        let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        (v * 255.0).round() as u8
    }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_eight_bit() {
        let mut bytes = b"P5\n# comment\n2 2\n255\n".to_vec();
        bytes.extend([0u8, 255, 255, 0]);
        let img = parse_pgm(&bytes).unwrap();
        assert_eq!((img.width, img.height), (2, 2));
        assert_eq!(img.pixels, vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn pgm_sixteen_bit_is_big_endian() {
        let mut bytes = b"P5 2 1 65535\n".to_vec();
        bytes.extend([0x00, 0xff, 0xff, 0xff]);
        let img = parse_pgm(&bytes).unwrap();
        assert_eq!(img.pixels, vec![255.0 / 65535.0, 1.0]);
    }

    #[test]
    fn pgm_rejects_other_formats_and_truncation() {
        assert!(matches!(parse_pgm(b"P2 1 1 255\n0"), Err(Error::UnsupportedFormat(_))));
        assert!(matches!(parse_pgm(b"P5 2 2 255\n\x00"), Err(Error::CorruptFile(_))));
        assert!(matches!(parse_pgm(b"P5 2"), Err(Error::CorruptFile(_))));
        assert!(parse_pgm(b"P5 1 1 255\n\x00").is_ok());
        assert!(matches!(parse_pgm(b"P5 1 1 9\n\x0a"), Err(Error::CorruptFile(_))));
    }

    #[test]
    fn pgm_encode_round_trip() {
        let px = [0.0, 1.0, 0.2, 2.0, -1.0, 0.5];
        let img = parse_pgm(&encode_pgm(3, 2, &px).unwrap()).unwrap();
        let expect = [0.0, 1.0, 51.0 / 255.0, 1.0, 0.0, 128.0 / 255.0];
        for (a, b) in img.pixels.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_real_matrix() {
        let m = matrix_from_bytes(Path::new("eye.csv"), b"1,0\n0,1\n", true).unwrap();
        assert_eq!(m, CMatrix::identity(2, 2));
    }

    #[test]
    fn csv_vectors() {
        let v = vector_from_bytes(Path::new("v.csv"), b"1\n2\n3\n").unwrap();
        assert_eq!(v, vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        let v = vector_from_bytes(Path::new("v.csv"), b"1,-1\n0,2\n").unwrap();
        assert_eq!(v, vec![C64::new(1.0, -1.0), C64::new(0.0, 2.0)]);
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let m = CMatrix::from_fn(3, 2, |i, j| C64::new(0.1 * i as f64 - 1e-300, (j as f64).sqrt() / 3.0));
        let mut buf = Vec::new();
        levelcs::io::write_matrix_binary(&m, &mut buf).unwrap();
        let back = matrix_from_bytes(Path::new("m.bin"), &buf, false).unwrap();
        for (a, b) in m.iter().zip(back.iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn unknown_extension() {
        assert!(matches!(format_of(Path::new("x.png")), Err(Error::UnsupportedFormat(_))));
    }
}
