//! Adam optimizer with bias correction, applied to flat parameter arrays.

use crate::error::{Error, Result};

pub const BETA1: f64 = 0.9;
pub const BETA2: f64 = 0.999;
pub const EPSILON: f64 = 1e-8;

/// Per-parameter-array moment state.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    /// First moment (exponential average of gradients).
    pub m: Vec<f64>,
    /// Second moment (exponential average of squared gradients).
    pub v: Vec<f64>,
    /// Step counter.
    pub t: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self { m: vec![0.0; len], v: vec![0.0; len], t: 0 }
    }
}

/// One bias-corrected Adam update, in place. A zero gradient with fresh state
/// leaves the parameters bit-identical (`0 / (0 + eps) = 0`).
pub fn adam_step(param: &mut [f64], grad: &[f64], state: &mut AdamState, lr: f64) -> Result<()> {
    if param.len() != grad.len() || param.len() != state.m.len() || param.len() != state.v.len() {
        return Err(Error::Shape(format!(
            "adam arrays disagree: param {} grad {} state {}",
            param.len(),
            grad.len(),
            state.m.len()
        )));
    }
    if !(lr > 0.0) {
        return Err(Error::Domain(format!("learning rate must be positive, got {lr}")));
    }
    state.t += 1;
    let bc1 = 1.0 - BETA1.powi(state.t as i32);
    let bc2 = 1.0 - BETA2.powi(state.t as i32);
    for i in 0..param.len() {
        let g = grad[i];
        state.m[i] = BETA1 * state.m[i] + (1.0 - BETA1) * g;
        state.v[i] = BETA2 * state.v[i] + (1.0 - BETA2) * g * g;
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        param[i] -= lr * m_hat / (v_hat.sqrt() + EPSILON);
    }
    Ok(())
}
