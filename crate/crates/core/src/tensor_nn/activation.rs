//! ReLU activation and its subgradient.

use crate::error::{Error, Result};
use crate::tensor_nn::Tensor;

/// Elementwise `max(0, x)`.
pub fn relu_forward(input: &Tensor) -> Tensor {
    input.map(|v| v.max(0.0))
}

/// Upstream gradient where the forward input was strictly positive, zero
/// elsewhere. The subgradient at exactly zero is taken as zero.
pub fn relu_backward(input: &Tensor, grad_output: &Tensor) -> Result<Tensor> {
    if !input.same_shape(grad_output) {
        return Err(Error::Shape(format!(
            "relu input {} vs grad {}",
            input.shape_str(),
            grad_output.shape_str()
        )));
    }
    let data = input
        .data
        .iter()
        .zip(&grad_output.data)
        .map(|(&x, &g)| if x > 0.0 { g } else { 0.0 })
        .collect();
    Ok(Tensor { height: input.height, width: input.width, channels: input.channels, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> Tensor {
        Tensor::from_vec(1, 1, 1, vec![v]).unwrap()
    }

    #[test]
    fn forward_clamps_negative_passes_positive() {
        assert_eq!(relu_forward(&scalar(-1.0)).data, vec![0.0]);
        assert_eq!(relu_forward(&scalar(2.5)).data, vec![2.5]);
        assert_eq!(relu_forward(&scalar(0.0)).data, vec![0.0]);
    }

    #[test]
    fn backward_gates_on_input_sign() {
        assert_eq!(relu_backward(&scalar(3.0), &scalar(5.0)).unwrap().data, vec![5.0]);
        assert_eq!(relu_backward(&scalar(-3.0), &scalar(5.0)).unwrap().data, vec![0.0]);
        // Declared subgradient convention at the kink.
        assert_eq!(relu_backward(&scalar(0.0), &scalar(5.0)).unwrap().data, vec![0.0]);
    }

    #[test]
    fn backward_shape_mismatch_errors() {
        let a = Tensor::zeros(2, 2, 1);
        let b = Tensor::zeros(2, 3, 1);
        assert!(matches!(relu_backward(&a, &b), Err(Error::Shape(_))));
    }
}
