//! Shared fixtures for the pipeline benchmarks.

use isar_core::radar_sim::{add_noise, simulate_echo, RadarParams, Scatterer};
use isar_core::rd_imaging::{magnitude_normalize, rd_image, RealImage};
use isar_core::ComplexMatrix;

/// Noisy three-point scene at the given image size.
pub fn test_echo(n: usize) -> ComplexMatrix {
    let params = RadarParams { n_range: n, n_pulse: n, ..RadarParams::default() };
    let dr = params.range_resolution_m();
    let dx = params.cross_range_resolution_m();
    let scene = [
        Scatterer::new(4.0 * dr, 0.0, 1.0),
        Scatterer::new(-3.0 * dr, 2.0 * dx, 0.8),
        Scatterer::new(0.0, -4.0 * dx, 0.9),
    ];
    let echo = simulate_echo(&scene, &params).unwrap();
    add_noise(&echo, 0.0, 1).unwrap()
}

/// Normalized RD image of [`test_echo`].
pub fn test_image(n: usize) -> RealImage {
    magnitude_normalize(&rd_image(&test_echo(n)).unwrap()).unwrap()
}
