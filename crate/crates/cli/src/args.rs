//! Command-line surface. The parsing structs live in the library so tests
//! (and sidecar replay) can parse a recorded argv with `try_parse_from`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

/// ISAR imaging pipeline: simulate scenes, form range-Doppler images, enhance
/// them with a per-image self-supervised network, and score the results.
#[derive(Debug, Parser)]
#[command(name = "isar", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the phase history of a point-scatterer scene (CF64 out).
    Simulate(SimulateArgs),
    /// Form the range-Doppler image of a phase history (CF64 + display PGM).
    Rdimage(RdimageArgs),
    /// Train the enhancer on one RD image and write the enhanced result.
    Enhance(EnhanceArgs),
    /// Run the enhancer across a list of lambda values and summarize metrics.
    Sweep(SweepArgs),
    /// Compute image-quality metrics for an image file.
    Metrics(MetricsArgs),
}

fn fmt_path<P: AsRef<Path>>(p: P) -> String {
    p.as_ref().to_string_lossy().into_owned()
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Scene file: one `range_m,cross_range_m,reflectivity` per line.
    pub scene: PathBuf,
    /// Carrier frequency in Hz.
    #[arg(long, default_value_t = 9.0e9)]
    pub carrier_hz: f64,
    /// Waveform bandwidth in Hz.
    #[arg(long, default_value_t = 150.0e6)]
    pub bandwidth_hz: f64,
    /// Range (frequency) samples per pulse.
    #[arg(long, default_value_t = 128)]
    pub n_range: usize,
    /// Pulse count.
    #[arg(long, default_value_t = 128)]
    pub n_pulse: usize,
    /// Target rotation rate in rad/s.
    #[arg(long, default_value_t = 0.13)]
    pub rotation_rate_rad_s: f64,
    /// Pulse repetition interval in seconds.
    #[arg(long, default_value_t = 1.0e-3)]
    pub pulse_interval_s: f64,
    /// Add complex Gaussian noise at this SNR (dB); omit for a clean echo.
    #[arg(long)]
    pub snr_db: Option<f64>,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Permit a scene with no scatterers.
    #[arg(long)]
    pub allow_empty: bool,
    /// Output phase-history path (CF64).
    #[arg(long)]
    pub out: PathBuf,
}

impl SimulateArgs {
    pub fn canonical_argv(&self) -> Vec<String> {
        let mut argv = vec![
            "simulate".into(),
            fmt_path(&self.scene),
            "--carrier-hz".into(),
            self.carrier_hz.to_string(),
            "--bandwidth-hz".into(),
            self.bandwidth_hz.to_string(),
            "--n-range".into(),
            self.n_range.to_string(),
            "--n-pulse".into(),
            self.n_pulse.to_string(),
            "--rotation-rate-rad-s".into(),
            self.rotation_rate_rad_s.to_string(),
            "--pulse-interval-s".into(),
            self.pulse_interval_s.to_string(),
        ];
        if let Some(snr) = self.snr_db {
            argv.push("--snr-db".into());
            argv.push(snr.to_string());
        }
        argv.push("--seed".into());
        argv.push(self.seed.to_string());
        if self.allow_empty {
            argv.push("--allow-empty".into());
        }
        argv.push("--out".into());
        argv.push(fmt_path(&self.out));
        argv
    }

    pub fn config_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("scene".into(), fmt_path(&self.scene));
        m.insert("carrier_hz".into(), self.carrier_hz.to_string());
        m.insert("bandwidth_hz".into(), self.bandwidth_hz.to_string());
        m.insert("n_range".into(), self.n_range.to_string());
        m.insert("n_pulse".into(), self.n_pulse.to_string());
        m.insert("rotation_rate_rad_s".into(), self.rotation_rate_rad_s.to_string());
        m.insert("pulse_interval_s".into(), self.pulse_interval_s.to_string());
        m.insert(
            "snr_db".into(),
            self.snr_db.map_or_else(|| "none".into(), |v| v.to_string()),
        );
        m.insert("seed".into(), self.seed.to_string());
        m.insert("allow_empty".into(), self.allow_empty.to_string());
        m.insert("out".into(), fmt_path(&self.out));
        m
    }
}

#[derive(Debug, Clone, Args)]
pub struct RdimageArgs {
    /// Input phase history (CF64).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Display image of the normalized magnitude (16-bit PGM).
    #[arg(long)]
    pub out_pgm: PathBuf,
    /// Complex range-Doppler image (CF64).
    #[arg(long)]
    pub out_cf64: PathBuf,
    /// Render the display image on a dB scale instead of linear min-max.
    #[arg(long)]
    pub db: bool,
}

impl RdimageArgs {
    pub fn canonical_argv(&self) -> Vec<String> {
        let mut argv = vec![
            "rdimage".into(),
            "--in".into(),
            fmt_path(&self.input),
            "--out-pgm".into(),
            fmt_path(&self.out_pgm),
            "--out-cf64".into(),
            fmt_path(&self.out_cf64),
        ];
        if self.db {
            argv.push("--db".into());
        }
        argv
    }

    pub fn config_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("in".into(), fmt_path(&self.input));
        m.insert("out_pgm".into(), fmt_path(&self.out_pgm));
        m.insert("out_cf64".into(), fmt_path(&self.out_cf64));
        m.insert("db".into(), self.db.to_string());
        m
    }
}

#[derive(Debug, Clone, Args)]
pub struct EnhanceArgs {
    /// Input range-Doppler image (CF64).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Sparsity weight of the training loss.
    #[arg(long)]
    pub lambda: f64,
    /// Learning rate.
    #[arg(long, default_value_t = 1e-4)]
    pub lr: f64,
    /// Training epochs (one full-image gradient step each).
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    /// Network-initialization seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Enhanced display image (16-bit PGM, display min-max normalized).
    #[arg(long)]
    pub out_pgm: PathBuf,
    /// Optional per-epoch loss table (CSV: epoch,total,fidelity,sparsity).
    #[arg(long)]
    pub out_loss_csv: Option<PathBuf>,
    /// Render the display image on a dB scale instead of linear min-max.
    #[arg(long)]
    pub db: bool,
}

impl EnhanceArgs {
    pub fn canonical_argv(&self) -> Vec<String> {
        let mut argv = vec![
            "enhance".into(),
            "--in".into(),
            fmt_path(&self.input),
            "--lambda".into(),
            self.lambda.to_string(),
            "--lr".into(),
            self.lr.to_string(),
            "--epochs".into(),
            self.epochs.to_string(),
            "--seed".into(),
            self.seed.to_string(),
            "--out-pgm".into(),
            fmt_path(&self.out_pgm),
        ];
        if let Some(csv) = &self.out_loss_csv {
            argv.push("--out-loss-csv".into());
            argv.push(fmt_path(csv));
        }
        if self.db {
            argv.push("--db".into());
        }
        argv
    }

    pub fn config_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("in".into(), fmt_path(&self.input));
        m.insert("lambda".into(), self.lambda.to_string());
        m.insert("lr".into(), self.lr.to_string());
        m.insert("epochs".into(), self.epochs.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("out_pgm".into(), fmt_path(&self.out_pgm));
        m.insert(
            "out_loss_csv".into(),
            self.out_loss_csv.as_ref().map_or_else(|| "none".into(), fmt_path),
        );
        m.insert("db".into(), self.db.to_string());
        m
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Input range-Doppler image (CF64).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Comma-separated lambda list, e.g. `0.1,0.2,0.3`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambdas: Vec<f64>,
    /// Learning rate for every branch.
    #[arg(long, default_value_t = 1e-4)]
    pub lr: f64,
    /// Training epochs for every branch.
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    /// Shared network-initialization seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Target mask (PGM, nonzero = target); adds a TBR column when given.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Output directory (one subdirectory per lambda plus summary.csv).
    #[arg(long)]
    pub out_dir: PathBuf,
}

impl SweepArgs {
    pub fn canonical_argv(&self) -> Vec<String> {
        let lambda_list =
            self.lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        let mut argv = vec![
            "sweep".into(),
            "--in".into(),
            fmt_path(&self.input),
            "--lambdas".into(),
            lambda_list,
            "--lr".into(),
            self.lr.to_string(),
            "--epochs".into(),
            self.epochs.to_string(),
            "--seed".into(),
            self.seed.to_string(),
        ];
        if let Some(mask) = &self.mask {
            argv.push("--mask".into());
            argv.push(fmt_path(mask));
        }
        argv.push("--out-dir".into());
        argv.push(fmt_path(&self.out_dir));
        argv
    }

    pub fn config_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("in".into(), fmt_path(&self.input));
        m.insert(
            "lambdas".into(),
            self.lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","),
        );
        m.insert("lr".into(), self.lr.to_string());
        m.insert("epochs".into(), self.epochs.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("mask".into(), self.mask.as_ref().map_or_else(|| "none".into(), fmt_path));
        m.insert("out_dir".into(), fmt_path(&self.out_dir));
        m
    }
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    /// Input image: PGM or CF64 (detected by magic bytes).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Reference image for PSNR (PGM or CF64).
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Target mask (PGM, nonzero = target) for TBR.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Output CSV path (header `metric,value`).
    #[arg(long)]
    pub out_csv: PathBuf,
}

impl MetricsArgs {
    pub fn canonical_argv(&self) -> Vec<String> {
        let mut argv = vec!["metrics".into(), "--in".into(), fmt_path(&self.input)];
        if let Some(r) = &self.reference {
            argv.push("--reference".into());
            argv.push(fmt_path(r));
        }
        if let Some(mask) = &self.mask {
            argv.push("--mask".into());
            argv.push(fmt_path(mask));
        }
        argv.push("--out-csv".into());
        argv.push(fmt_path(&self.out_csv));
        argv
    }

    pub fn config_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("in".into(), fmt_path(&self.input));
        m.insert(
            "reference".into(),
            self.reference.as_ref().map_or_else(|| "none".into(), fmt_path),
        );
        m.insert("mask".into(), self.mask.as_ref().map_or_else(|| "none".into(), fmt_path));
        m.insert("out_csv".into(), fmt_path(&self.out_csv));
        m
    }
}
