//! Synthetic ISAR phase-history generation from point-scatterer scenes.
//!
//! Small-angle turntable geometry with dechirped stepped-frequency sampling:
//! the sample at frequency index `i`, pulse index `m` is
//!
//! ```text
//! sum_k  a_k * exp(-j * 4*pi * f_i * r_k(m) / c)
//! f_i    = carrier - bandwidth/2 + i * bandwidth / (n_range - 1)
//! r_k(m) = range_k + cross_range_k * theta(m),   theta(m) = rot_rate * pri * m
//! ```
//!
//! which makes range-Doppler image formation an exact 2-D DFT relationship
//! and point-target localization analytically checkable.

use crate::complex::{Complex, ComplexMatrix};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Largest total rotation angle (rad) for which the small-angle model is kept.
pub const MAX_TOTAL_ROTATION_RAD: f64 = 0.2;

/// Ideal point scatterer: slant-range and cross-range offsets from the scene
/// center, plus a non-negative reflectivity amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    pub range_m: f64,
    pub cross_range_m: f64,
    pub reflectivity: f64,
}

impl Scatterer {
    pub fn new(range_m: f64, cross_range_m: f64, reflectivity: f64) -> Self {
        Self { range_m, cross_range_m, reflectivity }
    }
}

/// Radar and collection-geometry parameters.
///
/// The default rotation rate and pulse interval are chosen so that one
/// Doppler bin spans roughly one range cell at the default geometry:
/// total rotation 0.13 rad/s * 1 ms * 128 pulses = 0.01664 rad, giving a
/// cross-range cell of ~1.0 m against a ~0.99 m range cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarParams {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub n_range: usize,
    pub n_pulse: usize,
    pub rotation_rate_rad_s: f64,
    pub pulse_interval_s: f64,
}

impl Default for RadarParams {
    fn default() -> Self {
        Self {
            carrier_hz: 9.0e9,
            bandwidth_hz: 150.0e6,
            n_range: 128,
            n_pulse: 128,
            rotation_rate_rad_s: 0.13,
            pulse_interval_s: 1.0e-3,
        }
    }
}

impl RadarParams {
    /// Frequency step between adjacent range samples.
    pub fn frequency_step_hz(&self) -> f64 {
        self.bandwidth_hz / (self.n_range - 1) as f64
    }

    /// Transmitted frequency at range sample `i`.
    pub fn frequency_hz(&self, i: usize) -> f64 {
        self.carrier_hz - self.bandwidth_hz / 2.0 + i as f64 * self.frequency_step_hz()
    }

    /// Look angle at pulse `m`.
    pub fn rotation_angle_rad(&self, m: usize) -> f64 {
        self.rotation_rate_rad_s * self.pulse_interval_s * m as f64
    }

    /// Total rotation over the coherent processing interval.
    pub fn total_rotation_rad(&self) -> f64 {
        self.rotation_rate_rad_s * self.pulse_interval_s * self.n_pulse as f64
    }

    /// Range extent of one image cell: `c / (2 * n_range * df)`.
    pub fn range_resolution_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.n_range as f64 * self.frequency_step_hz())
    }

    /// Cross-range extent of one Doppler cell: `c / (2 * fc * w * T * M)`.
    pub fn cross_range_resolution_m(&self) -> f64 {
        SPEED_OF_LIGHT
            / (2.0
                * self.carrier_hz
                * self.rotation_rate_rad_s
                * self.pulse_interval_s
                * self.n_pulse as f64)
    }

    /// Half-extent of the unambiguous range swath.
    pub fn range_extent_m(&self) -> f64 {
        self.range_resolution_m() * self.n_range as f64 / 2.0
    }

    /// Half-extent of the unambiguous cross-range swath.
    pub fn cross_range_extent_m(&self) -> f64 {
        self.cross_range_resolution_m() * self.n_pulse as f64 / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_hz > self.bandwidth_hz && self.bandwidth_hz > 0.0) {
            return Err(Error::Domain(format!(
                "need carrier > bandwidth > 0, got carrier {} Hz, bandwidth {} Hz",
                self.carrier_hz, self.bandwidth_hz
            )));
        }
        if self.n_range < 2 || self.n_pulse < 2 {
            return Err(Error::Domain(format!(
                "need n_range, n_pulse >= 2, got {}x{}",
                self.n_range, self.n_pulse
            )));
        }
        if !(self.rotation_rate_rad_s.is_finite() && self.pulse_interval_s > 0.0) {
            return Err(Error::Domain("rotation rate / pulse interval out of range".into()));
        }
        let total = self.total_rotation_rad().abs();
        if total >= MAX_TOTAL_ROTATION_RAD {
            return Err(Error::Domain(format!(
                "total rotation {total:.4} rad breaks the small-angle model (limit {MAX_TOTAL_ROTATION_RAD})"
            )));
        }
        Ok(())
    }
}

fn validate_scene(scene: &[Scatterer], params: &RadarParams) -> Result<()> {
    let r_max = params.range_extent_m();
    let x_max = params.cross_range_extent_m();
    for (k, s) in scene.iter().enumerate() {
        if !(s.reflectivity >= 0.0) {
            return Err(Error::Domain(format!(
                "scatterer {k}: reflectivity {} must be >= 0",
                s.reflectivity
            )));
        }
        if !s.range_m.is_finite() || s.range_m.abs() >= r_max {
            return Err(Error::Domain(format!(
                "scatterer {k}: range {} m outside unambiguous extent +-{r_max:.3} m",
                s.range_m
            )));
        }
        if !s.cross_range_m.is_finite() || s.cross_range_m.abs() >= x_max {
            return Err(Error::Domain(format!(
                "scatterer {k}: cross-range {} m outside unambiguous extent +-{x_max:.3} m",
                s.cross_range_m
            )));
        }
    }
    Ok(())
}

/// Simulates the `n_range x n_pulse` phase history of a scene (row =
/// frequency index, column = pulse index) by superposition over scatterers.
pub fn simulate_echo(scene: &[Scatterer], params: &RadarParams) -> Result<ComplexMatrix> {
    params.validate()?;
    validate_scene(scene, params)?;

    let mut echo = ComplexMatrix::zeros(params.n_range, params.n_pulse);
    let four_pi_over_c = 4.0 * std::f64::consts::PI / SPEED_OF_LIGHT;
    for i in 0..params.n_range {
        let f_i = params.frequency_hz(i);
        for m in 0..params.n_pulse {
            let theta = params.rotation_angle_rad(m);
            let mut acc = Complex::ZERO;
            for s in scene {
                let r = s.range_m + s.cross_range_m * theta;
                acc += Complex::cis(-four_pi_over_c * f_i * r).scale(s.reflectivity);
            }
            echo.set(i, m, acc);
        }
    }
    Ok(echo)
}

/// Adds circular complex Gaussian noise at the requested SNR. `snr_db` of
/// `f64::INFINITY` returns the input untouched; results are fully determined
/// by `seed`.
pub fn add_noise(echo: &ComplexMatrix, snr_db: f64, seed: u64) -> Result<ComplexMatrix> {
    if snr_db == f64::INFINITY {
        return Ok(echo.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::Domain(format!("snr_db must be finite or +inf, got {snr_db}")));
    }
    let p_signal = echo.mean_power();
    if p_signal == 0.0 {
        return Err(Error::Domain("all-zero echo: SNR is undefined".into()));
    }
    let sigma_sq = p_signal / 10f64.powf(snr_db / 10.0);
    let s = (sigma_sq / 2.0).sqrt();

    let mut rng = SplitMix64::new(seed);
    let mut out = echo.clone();
    for z in &mut out.data {
        z.re += s * rng.next_normal();
        z.im += s * rng.next_normal();
    }
    Ok(out)
}
