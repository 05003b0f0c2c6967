//! Display images: binary PGM ("P5"), maxval 65535, 16-bit big-endian
//! samples. Display normalization (plain min-max or dB) lives here too and is
//! never applied in the numeric pipeline.

use std::fs;
use std::path::Path;

use crate::error::{CliError, Result};

/// Floor of the dB display scale.
pub const DB_FLOOR: f64 = -60.0;

/// Min-max normalization into `[0, 1]`; a constant image maps to all zeros.
pub fn display_normalize(values: &[f64]) -> Vec<f64> {
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - min) / (max - min)).collect()
}

/// dB display scale: `20*log10(|v| / max|v|)` clamped to `[DB_FLOOR, 0]` and
/// mapped onto `[0, 1]`.
pub fn display_db(values: &[f64]) -> Vec<f64> {
    let max = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if max == 0.0 {
        return vec![0.0; values.len()];
    }
    values
        .iter()
        .map(|v| {
            let db = if *v == 0.0 { DB_FLOOR } else { (20.0 * (v.abs() / max).log10()).clamp(DB_FLOOR, 0.0) };
            (db - DB_FLOOR) / -DB_FLOOR
        })
        .collect()
}

/// Writes normalized `[0, 1]` values as a 16-bit binary PGM.
pub fn write_pgm16(path: &Path, width: usize, height: usize, values: &[f64]) -> Result<()> {
    if values.len() != width * height {
        return Err(CliError::Domain(format!(
            "PGM payload is {} values for a {width}x{height} image",
            values.len()
        )));
    }
    let mut bytes = format!("P5\n{width} {height}\n65535\n").into_bytes();
    for &v in values {
        let q = (v.clamp(0.0, 1.0) * 65535.0).round() as u16;
        bytes.extend_from_slice(&q.to_be_bytes());
    }
    fs::write(path, bytes).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

/// Reads a binary PGM (maxval up to 65535) into `[0, 1]` values.
pub fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let bytes =
        fs::read(path).map_err(|e| CliError::io(&format!("reading {}", path.display()), e))?;
    parse_pgm(&bytes).map_err(|e| match e {
        CliError::Format(m) => CliError::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_pgm(bytes: &[u8]) -> Result<(usize, usize, Vec<f64>)> {
    if bytes.len() < 2 || &bytes[0..2] != b"P5" {
        return Err(CliError::Format("not a binary PGM (missing P5 magic)".into()));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        // Skip whitespace and '#' comment lines between header fields.
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(CliError::Format("malformed PGM header".into()));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Format("malformed PGM header".into()))?;
    }
    let (width, height, maxval) = (fields[0], fields[1], fields[2]);
    if maxval == 0 || maxval > 65535 {
        return Err(CliError::Format(format!("unsupported PGM maxval {maxval}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(CliError::Format("missing raster separator".into()));
    }
    pos += 1;
    let bytes_per_sample = if maxval < 256 { 1 } else { 2 };
    let expected = width * height * bytes_per_sample;
    let raster = &bytes[pos..];
    if raster.len() != expected {
        return Err(CliError::Format(format!(
            "raster length mismatch: {width}x{height} at {bytes_per_sample} B/sample needs {expected} bytes, found {}",
            raster.len()
        )));
    }
    let scale = 1.0 / maxval as f64;
    let data = if bytes_per_sample == 1 {
        raster.iter().map(|&b| b as f64 * scale).collect()
    } else {
        raster
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 * scale)
            .collect()
    };
    Ok((width, height, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_normalize_stretches_and_handles_constants() {
        assert_eq!(display_normalize(&[1.0, 3.0, 2.0]), vec![0.0, 1.0, 0.5]);
        assert_eq!(display_normalize(&[0.7; 4]), vec![0.0; 4]);
    }

    #[test]
    fn db_scale_maps_peak_to_one_and_floor_to_zero() {
        let out = display_db(&[1.0, 0.1, 0.0]);
        assert!((out[0] - 1.0).abs() < 1e-12);
        assert!((out[1] - (1.0 - 20.0 / 60.0)).abs() < 1e-12);
        assert_eq!(out[2], 0.0);
    }

    #[test]
    fn pgm_parse_rejects_garbage() {
        assert!(matches!(parse_pgm(b"P6\n1 1\n255\n0"), Err(CliError::Format(_))));
        assert!(matches!(parse_pgm(b"P5\n2 2\n255\nab"), Err(CliError::Format(_))));
    }

    #[test]
    fn pgm_parse_supports_comments_and_8bit() {
        let (w, h, data) = parse_pgm(b"P5\n# a comment\n2 1\n255\n\x00\xff").unwrap();
        assert_eq!((w, h), (2, 1));
        assert_eq!(data, vec![0.0, 1.0]);
    }
}
