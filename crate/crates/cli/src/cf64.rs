//! CF64 container: the pipeline's bit-exact complex-matrix file format.
//!
//! Layout, all little-endian:
//!
//! ```text
//! offset  size  field
//! 0       4     magic bytes 0x43 0x46 0x36 0x34 ("CF64")
//! 4       4     version, u32 (currently 1)
//! 8       4     rows, u32
//! 12      4     cols, u32
//! 16      16*n  rows*cols samples row-major, each f64 real then f64 imaginary
//! ```

use std::fs;
use std::path::Path;

use isar_core::{Complex, ComplexMatrix};

use crate::error::{CliError, Result};

pub const MAGIC: [u8; 4] = *b"CF64";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 16;

pub fn write_cf64(path: &Path, m: &ComplexMatrix) -> Result<()> {
    let mut bytes = Vec::with_capacity(HEADER_LEN + 16 * m.data.len());
    bytes.extend_from_slice(&MAGIC);
    bytes.extend_from_slice(&VERSION.to_le_bytes());
    bytes.extend_from_slice(&(m.rows as u32).to_le_bytes());
    bytes.extend_from_slice(&(m.cols as u32).to_le_bytes());
    for z in &m.data {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::write(path, bytes).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

pub fn read_cf64(path: &Path) -> Result<ComplexMatrix> {
    let bytes =
        fs::read(path).map_err(|e| CliError::io(&format!("reading {}", path.display()), e))?;
    parse_cf64(&bytes).map_err(|e| match e {
        CliError::Format(m) => CliError::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_cf64(bytes: &[u8]) -> Result<ComplexMatrix> {
    if bytes.len() < HEADER_LEN {
        return Err(CliError::Format(format!(
            "file too short for a CF64 header ({} bytes)",
            bytes.len()
        )));
    }
    if bytes[0..4] != MAGIC {
        return Err(CliError::Format(format!(
            "bad magic: expected {:02x?} (\"CF64\"), found {:02x?}",
            MAGIC,
            &bytes[0..4]
        )));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(CliError::Format(format!("unsupported CF64 version {version}")));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let expected = HEADER_LEN + 16 * rows * cols;
    if bytes.len() != expected {
        return Err(CliError::Format(format!(
            "payload length mismatch: {rows}x{cols} needs {expected} bytes, file has {}",
            bytes.len()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for chunk in bytes[HEADER_LEN..].chunks_exact(16) {
        let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
        data.push(Complex::new(re, im));
    }
    ComplexMatrix::new(rows, cols, data)
        .map_err(|e| CliError::Format(format!("invalid CF64 payload: {e}")))
}
