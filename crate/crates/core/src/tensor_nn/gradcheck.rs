//! Central finite-difference gradient checking.

use crate::error::{Error, Result};

/// Compares an analytic gradient against central finite differences of `f`
/// at `point`, coordinate by coordinate.
///
/// Returns the maximum over coordinates of
/// `|analytic - numeric| / max(1e-12, |analytic| + |numeric|)`.
pub fn gradient_check(
    f: impl Fn(&[f64]) -> f64,
    point: &[f64],
    analytic: &[f64],
    step: f64,
) -> Result<f64> {
    if analytic.len() != point.len() {
        return Err(Error::Shape(format!(
            "analytic gradient has {} entries for a {}-dim point",
            analytic.len(),
            point.len()
        )));
    }
    if !(step > 0.0) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {step}")));
    }

    let mut buf = point.to_vec();
    let mut max_rel = 0.0f64;
    for i in 0..point.len() {
        buf[i] = point[i] + step;
        let fp = f(&buf);
        buf[i] = point[i] - step;
        let fm = f(&buf);
        buf[i] = point[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite function value near coordinate {i}: f+={fp}, f-={fm}"
            )));
        }
        let numeric = (fp - fm) / (2.0 * step);
        let rel = (analytic[i] - numeric).abs() / f64::max(1e-12, analytic[i].abs() + numeric.abs());
        max_rel = max_rel.max(rel);
    }
    Ok(max_rel)
}
