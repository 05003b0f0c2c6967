//! ISAR imaging and self-supervised image enhancement.
//!
//! The pipeline runs end to end in this crate: synthetic phase-history
//! generation from point-scatterer scenes ([`radar_sim`]), range-Doppler
//! image formation over in-repo FFTs ([`rd_imaging`]), a from-scratch
//! three-layer convolutional enhancer trained per image with a
//! sparsity-regularized self-supervised loss ([`enhancer`] on top of
//! [`tensor_nn`]), and quantitative image-quality metrics ([`metrics`]).
//!
//! Everything is deterministic: stochastic steps are seeded through a
//! splitmix64 stream and all operations are pure functions of their inputs.

// Guards are written as `!(x > 0.0)` on purpose: the negation also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod enhancer;
pub mod error;
pub mod metrics;
pub mod radar_sim;
pub mod rd_imaging;
pub mod rng;
pub mod tensor_nn;

pub use complex::{Complex, ComplexMatrix};
pub use enhancer::{NetworkParams, TrainConfig, TrainReport};
pub use error::{Error, Result};
pub use radar_sim::{RadarParams, Scatterer};
pub use rd_imaging::RealImage;
pub use tensor_nn::{AdamState, ConvLayerParams, Tensor};
