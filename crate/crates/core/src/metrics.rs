//! Image-quality metrics on intensity (squared magnitude), plus the
//! closed-form soft-thresholding solution of the network-free objective.

use crate::error::{Error, Result};
use crate::tensor_nn::Tensor;

/// Sentinel for infinite-dB cases so CSV output stays finite.
pub const DB_CAP: f64 = 300.0;

/// Shannon entropy of the normalized intensity distribution
/// `p_i = v_i^2 / sum(v^2)`, with `0 * ln 0 := 0`. Lower is sharper.
pub fn image_entropy(img: &Tensor) -> Result<f64> {
    let total: f64 = img.data.iter().map(|v| v * v).sum();
    if total == 0.0 {
        return Err(Error::Domain("entropy of an all-zero image is undefined".into()));
    }
    let mut h = 0.0;
    for &v in &img.data {
        let p = v * v / total;
        if p > 0.0 {
            h -= p * p.ln();
        }
    }
    Ok(h)
}

/// Intensity contrast: standard deviation of `v^2` over its mean.
pub fn image_contrast(img: &Tensor) -> Result<f64> {
    let n = img.len() as f64;
    let mean: f64 = img.data.iter().map(|v| v * v).sum::<f64>() / n;
    if mean == 0.0 {
        return Err(Error::Domain("contrast of an all-zero image is undefined".into()));
    }
    let var: f64 = img.data.iter().map(|v| (v * v - mean) * (v * v - mean)).sum::<f64>() / n;
    Ok(var.sqrt() / mean)
}

/// Target-to-background ratio in dB: mean intensity over the mask's true
/// cells against mean intensity over its false cells. Infinite ratios are
/// capped at +-[`DB_CAP`].
pub fn tbr(img: &Tensor, target_mask: &[bool]) -> Result<f64> {
    if target_mask.len() != img.len() {
        return Err(Error::Shape(format!(
            "mask has {} cells for a {} image",
            target_mask.len(),
            img.shape_str()
        )));
    }
    let mut sum_t = 0.0;
    let mut n_t = 0usize;
    let mut sum_b = 0.0;
    let mut n_b = 0usize;
    for (&v, &m) in img.data.iter().zip(target_mask) {
        if m {
            sum_t += v * v;
            n_t += 1;
        } else {
            sum_b += v * v;
            n_b += 1;
        }
    }
    if n_t == 0 || n_b == 0 {
        return Err(Error::Domain(format!(
            "mask needs both sides populated: {n_t} target, {n_b} background cells"
        )));
    }
    let mean_t = sum_t / n_t as f64;
    let mean_b = sum_b / n_b as f64;
    if mean_b == 0.0 {
        return Ok(DB_CAP);
    }
    if mean_t == 0.0 {
        return Ok(-DB_CAP);
    }
    Ok((10.0 * (mean_t / mean_b).log10()).clamp(-DB_CAP, DB_CAP))
}

/// Peak signal-to-noise ratio against `reference`, in dB, capped at
/// [`DB_CAP`] when the images are identical.
pub fn psnr(img: &Tensor, reference: &Tensor) -> Result<f64> {
    if !img.same_shape(reference) {
        return Err(Error::Shape(format!(
            "psnr operands {} vs {}",
            img.shape_str(),
            reference.shape_str()
        )));
    }
    let peak = reference.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Domain(format!("reference maximum must be positive, got {peak}")));
    }
    let n = img.len() as f64;
    let mse: f64 = img
        .data
        .iter()
        .zip(&reference.data)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n;
    if mse == 0.0 {
        return Ok(DB_CAP);
    }
    Ok((10.0 * (peak * peak / mse).log10()).min(DB_CAP))
}

/// Mean absolute value; the sparsity measure reported in sweep summaries.
pub fn l1_mean(img: &Tensor) -> f64 {
    if img.is_empty() {
        return 0.0;
    }
    img.data.iter().map(|v| v.abs()).sum::<f64>() / img.len() as f64
}

/// Elementwise minimizer of `mean((u - y)^2) + lambda * mean(|u|)`:
/// `sign(y) * max(0, |y| - lambda/2)`. (The shared `1/N` of both mean
/// reductions cancels; the `1/2` comes from the square's derivative.)
pub fn soft_threshold(y: &Tensor, lambda: f64) -> Result<Tensor> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    let half = lambda / 2.0;
    Ok(y.map(|v| v.signum() * (v.abs() - half).max(0.0)))
}
