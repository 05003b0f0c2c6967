//! Command-line pipeline over `isar-core`: scene simulation, range-Doppler
//! imaging, per-image self-supervised enhancement, lambda sweeps, and image
//! metrics, with bit-exact file formats (CF64, 16-bit PGM, CSV) and
//! reproducible run sidecars.

pub mod args;
pub mod cf64;
pub mod commands;
pub mod error;
pub mod pgm;
pub mod scene;
pub mod sidecar;

pub use error::{CliError, Result};
