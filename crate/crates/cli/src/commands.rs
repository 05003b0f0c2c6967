//! Pipeline drivers behind the subcommands: simulate -> rdimage -> enhance /
//! sweep -> metrics. Every run writes a sidecar with its resolved
//! configuration so artifacts are reproducible from the sidecar alone.

use std::fs;
use std::path::Path;

use isar_core::enhancer::{train, TrainConfig};
use isar_core::metrics::{image_contrast, image_entropy, l1_mean, psnr, tbr};
use isar_core::radar_sim::{add_noise, simulate_echo, RadarParams};
use isar_core::rd_imaging::{magnitude_normalize, rd_image};
use isar_core::Tensor;

use crate::args::{Command, EnhanceArgs, MetricsArgs, RdimageArgs, SimulateArgs, SweepArgs};
use crate::cf64::{parse_cf64, read_cf64, write_cf64, MAGIC};
use crate::error::{CliError, Result};
use crate::pgm::{display_db, display_normalize, parse_pgm, read_pgm, write_pgm16};
use crate::scene::load_scene;
use crate::sidecar::{sidecar_path, write_sidecar, RunSidecar};

/// Round-trip-safe float formatting for CSV output (17 significant digits).
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text.as_bytes())
        .map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

/// Loads an image file as a single-channel tensor, detecting CF64 (complex,
/// normalized to magnitude) or PGM by magic bytes.
pub fn load_image_tensor(path: &Path) -> Result<Tensor> {
    let bytes =
        fs::read(path).map_err(|e| CliError::io(&format!("reading {}", path.display()), e))?;
    if bytes.len() >= 4 && bytes[0..4] == MAGIC {
        let m = parse_cf64(&bytes)?;
        let img = magnitude_normalize(&m)?;
        Ok(img.to_tensor())
    } else if bytes.len() >= 2 && &bytes[0..2] == b"P5" {
        let (w, h, data) = parse_pgm(&bytes)?;
        Ok(Tensor::from_vec(h, w, 1, data)?)
    } else {
        Err(CliError::Format(format!(
            "{}: neither CF64 nor PGM magic found",
            path.display()
        )))
    }
}

fn load_mask(path: &Path) -> Result<(usize, usize, Vec<bool>)> {
    let (w, h, data) = read_pgm(path)?;
    Ok((w, h, data.iter().map(|&v| v > 0.0).collect()))
}

pub fn run_simulate(args: &SimulateArgs) -> Result<()> {
    // Downstream RD imaging is radix-2 only; reject bad sizes at the source.
    for (name, n) in [("--n-range", args.n_range), ("--n-pulse", args.n_pulse)] {
        if n == 0 || n & (n - 1) != 0 {
            return Err(CliError::Domain(format!("{name} {n} is not a power of two")));
        }
    }
    let scene = load_scene(&args.scene)?;
    if scene.is_empty() && !args.allow_empty {
        return Err(CliError::Domain(format!(
            "{}: scene has no scatterers (pass --allow-empty to permit)",
            args.scene.display()
        )));
    }
    let params = RadarParams {
        carrier_hz: args.carrier_hz,
        bandwidth_hz: args.bandwidth_hz,
        n_range: args.n_range,
        n_pulse: args.n_pulse,
        rotation_rate_rad_s: args.rotation_rate_rad_s,
        pulse_interval_s: args.pulse_interval_s,
    };
    let mut echo = simulate_echo(&scene, &params)?;
    if let Some(snr_db) = args.snr_db {
        echo = add_noise(&echo, snr_db, args.seed)?;
    }
    write_cf64(&args.out, &echo)?;
    write_sidecar(
        &sidecar_path(&args.out),
        &RunSidecar {
            command: "simulate".into(),
            argv: args.canonical_argv(),
            config: args.config_map(),
            outputs: vec![args.out.to_string_lossy().into_owned()],
        },
    )
}

pub fn run_rdimage(args: &RdimageArgs) -> Result<()> {
    let echo = read_cf64(&args.input)?;
    let img = rd_image(&echo)?;
    write_cf64(&args.out_cf64, &img)?;
    let mag = magnitude_normalize(&img)?;
    let display = if args.db { display_db(&mag.data) } else { display_normalize(&mag.data) };
    write_pgm16(&args.out_pgm, mag.width, mag.height, &display)?;
    write_sidecar(
        &sidecar_path(&args.out_cf64),
        &RunSidecar {
            command: "rdimage".into(),
            argv: args.canonical_argv(),
            config: args.config_map(),
            outputs: vec![
                args.out_cf64.to_string_lossy().into_owned(),
                args.out_pgm.to_string_lossy().into_owned(),
            ],
        },
    )
}

fn loss_csv(report: &isar_core::TrainReport) -> String {
    let mut csv = String::from("epoch,total,fidelity,sparsity\n");
    for e in 0..report.loss_history.len() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            e + 1,
            fmt_g17(report.loss_history[e]),
            fmt_g17(report.fidelity_history[e]),
            fmt_g17(report.sparsity_history[e]),
        ));
    }
    csv
}

pub fn run_enhance(args: &EnhanceArgs) -> Result<()> {
    let m = read_cf64(&args.input)?;
    let y = magnitude_normalize(&m)?;
    let config = TrainConfig {
        lambda: args.lambda,
        learning_rate: args.lr,
        epochs: args.epochs,
        seed: args.seed,
    };
    let (enhanced, report) = train(&y, &config)?;
    let display =
        if args.db { display_db(&enhanced.data) } else { display_normalize(&enhanced.data) };
    write_pgm16(&args.out_pgm, enhanced.width, enhanced.height, &display)?;
    let mut outputs = vec![args.out_pgm.to_string_lossy().into_owned()];
    if let Some(csv_path) = &args.out_loss_csv {
        write_text(csv_path, &loss_csv(&report))?;
        outputs.push(csv_path.to_string_lossy().into_owned());
    }
    write_sidecar(
        &sidecar_path(&args.out_pgm),
        &RunSidecar {
            command: "enhance".into(),
            argv: args.canonical_argv(),
            config: args.config_map(),
            outputs,
        },
    )
}

pub fn run_sweep(args: &SweepArgs) -> Result<()> {
    if args.lambdas.is_empty() {
        return Err(CliError::Usage("lambda list is empty".into()));
    }
    let m = read_cf64(&args.input)?;
    let y = magnitude_normalize(&m)?;
    let mask = match &args.mask {
        Some(path) => {
            let (w, h, mask) = load_mask(path)?;
            if w != y.width || h != y.height {
                return Err(CliError::Domain(format!(
                    "mask is {w}x{h} for a {}x{} image",
                    y.width, y.height
                )));
            }
            Some(mask)
        }
        None => None,
    };

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::io(&format!("creating {}", args.out_dir.display()), e))?;

    let mut summary = if mask.is_some() {
        String::from("lambda,entropy,contrast,l1_mean,tbr\n")
    } else {
        String::from("lambda,entropy,contrast,l1_mean\n")
    };
    let mut outputs = Vec::new();

    for &lambda in &args.lambdas {
        let config = TrainConfig {
            lambda,
            learning_rate: args.lr,
            epochs: args.epochs,
            seed: args.seed,
        };
        let (enhanced, report) = train(&y, &config)?;

        let branch = args.out_dir.join(format!("lambda_{lambda}"));
        fs::create_dir_all(&branch)
            .map_err(|e| CliError::io(&format!("creating {}", branch.display()), e))?;
        let pgm_path = branch.join("enhanced.pgm");
        write_pgm16(&pgm_path, enhanced.width, enhanced.height, &display_normalize(&enhanced.data))?;
        let csv_path = branch.join("loss.csv");
        write_text(&csv_path, &loss_csv(&report))?;
        outputs.push(pgm_path.to_string_lossy().into_owned());
        outputs.push(csv_path.to_string_lossy().into_owned());

        summary.push_str(&format!(
            "{},{},{},{}",
            fmt_g17(lambda),
            fmt_g17(image_entropy(&enhanced)?),
            fmt_g17(image_contrast(&enhanced)?),
            fmt_g17(l1_mean(&enhanced)),
        ));
        if let Some(mask) = &mask {
            summary.push_str(&format!(",{}", fmt_g17(tbr(&enhanced, mask)?)));
        }
        summary.push('\n');
    }

    let summary_path = args.out_dir.join("summary.csv");
    write_text(&summary_path, &summary)?;
    outputs.push(summary_path.to_string_lossy().into_owned());
    write_sidecar(
        &args.out_dir.join("run.json"),
        &RunSidecar {
            command: "sweep".into(),
            argv: args.canonical_argv(),
            config: args.config_map(),
            outputs,
        },
    )
}

pub fn run_metrics(args: &MetricsArgs) -> Result<()> {
    let img = load_image_tensor(&args.input)?;
    let mut csv = String::from("metric,value\n");
    csv.push_str(&format!("entropy,{}\n", fmt_g17(image_entropy(&img)?)));
    csv.push_str(&format!("contrast,{}\n", fmt_g17(image_contrast(&img)?)));
    csv.push_str(&format!("l1_mean,{}\n", fmt_g17(l1_mean(&img))));
    if let Some(mask_path) = &args.mask {
        let (w, h, mask) = load_mask(mask_path)?;
        if w != img.width || h != img.height {
            return Err(CliError::Domain(format!(
                "mask is {w}x{h} for a {}x{} image",
                img.width, img.height
            )));
        }
        csv.push_str(&format!("tbr,{}\n", fmt_g17(tbr(&img, &mask)?)));
    }
    if let Some(ref_path) = &args.reference {
        let reference = load_image_tensor(ref_path)?;
        csv.push_str(&format!("psnr,{}\n", fmt_g17(psnr(&img, &reference)?)));
    }
    write_text(&args.out_csv, &csv)?;
    write_sidecar(
        &sidecar_path(&args.out_csv),
        &RunSidecar {
            command: "metrics".into(),
            argv: args.canonical_argv(),
            config: args.config_map(),
            outputs: vec![args.out_csv.to_string_lossy().into_owned()],
        },
    )
}

pub fn run_command(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Simulate(a) => run_simulate(a),
        Command::Rdimage(a) => run_rdimage(a),
        Command::Enhance(a) => run_enhance(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Metrics(a) => run_metrics(a),
    }
}
