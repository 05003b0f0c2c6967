//! Loss terms with analytic gradients: mean-squared fidelity and mean-absolute
//! sparsity. Both reduce by MEAN over all elements so their scale is roughly
//! independent of image size.

use crate::error::{Error, Result};
use crate::tensor_nn::Tensor;

/// Squared-L2 fidelity term: `mean((a - b)^2)` with gradient `2(a - b) / N`
/// taken with respect to `a`.
pub fn l2_term(a: &Tensor, b: &Tensor) -> Result<(f64, Tensor)> {
    if !a.same_shape(b) {
        return Err(Error::Shape(format!("l2 operands {} vs {}", a.shape_str(), b.shape_str())));
    }
    let n = a.len() as f64;
    let mut value = 0.0;
    let mut grad = Tensor::zeros(a.height, a.width, a.channels);
    for (i, (&av, &bv)) in a.data.iter().zip(&b.data).enumerate() {
        let d = av - bv;
        value += d * d;
        grad.data[i] = 2.0 * d / n;
    }
    Ok((value / n, grad))
}

/// L1 sparsity term: `mean(|a|)` with gradient `sign(a) / N`, `sign(0) = 0`.
pub fn l1_term(a: &Tensor) -> (f64, Tensor) {
    let n = a.len() as f64;
    let mut value = 0.0;
    let mut grad = Tensor::zeros(a.height, a.width, a.channels);
    for (i, &av) in a.data.iter().enumerate() {
        value += av.abs();
        grad.data[i] = if av > 0.0 {
            1.0 / n
        } else if av < 0.0 {
            -1.0 / n
        } else {
            0.0
        };
    }
    (value / n, grad)
}
