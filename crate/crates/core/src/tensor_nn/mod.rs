//! Minimal deterministic neural-network kernel set: tensors, same-padded 3x3
//! convolution with a full backward pass, ReLU, L1/L2 loss terms with
//! gradients, Adam, and a finite-difference gradient checker.
//!
//! Everything here is a pure function of its arguments; identical inputs give
//! bit-identical outputs.

mod activation;
mod adam;
mod conv;
mod gradcheck;
mod loss;
mod tensor;

pub use activation::{relu_backward, relu_forward};
pub use adam::{adam_step, AdamState, BETA1, BETA2, EPSILON};
pub use conv::{conv2d_backward, conv2d_forward, ConvLayerParams, KERNEL_SIZE};
pub use gradcheck::gradient_check;
pub use loss::{l1_term, l2_term};
pub use tensor::Tensor;
