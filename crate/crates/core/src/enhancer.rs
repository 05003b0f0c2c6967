//! Self-supervised single-image enhancement network.
//!
//! A three-layer convolutional map (3x3 kernels, channel chain 1 -> 64 -> 64
//! -> 1, ReLU between layers, no activation after the last) is trained on the
//! degraded image itself: the fidelity term pulls the output toward the input
//! while the L1 term pulls it toward the all-zero image, so minimizing
//!
//! ```text
//! loss = mean((F(y) - y)^2) + lambda * mean(|F(y)|)
//! ```
//!
//! sharpens strong pixels and suppresses the noise floor. Training runs one
//! full-image gradient step per epoch (the data set is the single image).

use crate::error::{Error, Result};
use crate::rd_imaging::RealImage;
use crate::rng::SplitMix64;
use crate::tensor_nn::{
    adam_step, conv2d_backward, conv2d_forward, l1_term, l2_term, relu_backward, relu_forward,
    AdamState, ConvLayerParams, Tensor,
};

/// Hidden width of the two inner layers.
pub const HIDDEN_CHANNELS: usize = 64;

/// The three convolution layers (1 -> 64 -> 64 -> 1, all 3x3).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    pub layer1: ConvLayerParams,
    pub layer2: ConvLayerParams,
    pub layer3: ConvLayerParams,
}

impl NetworkParams {
    /// Total number of kernel weights: `3*3*(1*64 + 64*64 + 64*1)`.
    pub fn kernel_weight_count(&self) -> usize {
        self.layer1.kernel_len() + self.layer2.kernel_len() + self.layer3.kernel_len()
    }

    /// Total number of biases: `64 + 64 + 1`.
    pub fn bias_count(&self) -> usize {
        self.layer1.biases.len() + self.layer2.biases.len() + self.layer3.biases.len()
    }
}

/// Training configuration. `new` fills in the protocol defaults
/// (learning rate 1e-4, 100 epochs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub lambda: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl TrainConfig {
    pub const DEFAULT_LEARNING_RATE: f64 = 1e-4;
    pub const DEFAULT_EPOCHS: usize = 100;

    pub fn new(lambda: f64, seed: u64) -> Self {
        Self {
            lambda,
            learning_rate: Self::DEFAULT_LEARNING_RATE,
            epochs: Self::DEFAULT_EPOCHS,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) {
            return Err(Error::Domain(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::Domain(format!(
                "learning rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

/// Per-epoch observability of the optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Total loss at the start of each epoch (before that epoch's step).
    pub loss_history: Vec<f64>,
    /// Fidelity (squared-L2) term per epoch.
    pub fidelity_history: Vec<f64>,
    /// Sparsity (L1) term per epoch.
    pub sparsity_history: Vec<f64>,
    pub final_params: NetworkParams,
}

/// Intermediate activations of one forward pass, kept for backpropagation.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub pre1: Tensor,
    pub act1: Tensor,
    pub pre2: Tensor,
    pub act2: Tensor,
    pub output: Tensor,
}

/// Gradients of the loss with respect to every parameter array.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub kernels1: Vec<f64>,
    pub biases1: Vec<f64>,
    pub kernels2: Vec<f64>,
    pub biases2: Vec<f64>,
    pub kernels3: Vec<f64>,
    pub biases3: Vec<f64>,
}

/// Loss value split into its terms, plus the gradient with respect to the
/// network output.
#[derive(Debug, Clone)]
pub struct LossValue {
    pub total: f64,
    pub fidelity: f64,
    pub sparsity: f64,
    pub grad: Tensor,
}

/// He-initialized network: kernels drawn from a zero-mean Gaussian with
/// standard deviation `sqrt(2 / (9 * in_channels))`, biases zero. Fully
/// determined by the seed.
pub fn init_network(seed: u64) -> NetworkParams {
    let mut rng = SplitMix64::new(seed);
    let mut layer = |in_c: usize, out_c: usize| {
        let std = (2.0 / (9.0 * in_c as f64)).sqrt();
        let kernels = (0..9 * in_c * out_c).map(|_| std * rng.next_normal()).collect();
        ConvLayerParams::new(in_c, out_c, kernels, vec![0.0; out_c])
            .expect("generated layer dimensions are consistent")
    };
    NetworkParams {
        layer1: layer(1, HIDDEN_CHANNELS),
        layer2: layer(HIDDEN_CHANNELS, HIDDEN_CHANNELS),
        layer3: layer(HIDDEN_CHANNELS, 1),
    }
}

/// Forward pass keeping every intermediate activation.
pub fn forward_trace(params: &NetworkParams, y: &Tensor) -> Result<ForwardTrace> {
    if y.channels != 1 {
        return Err(Error::Shape(format!(
            "network input must be HxWx1, got {}",
            y.shape_str()
        )));
    }
    let pre1 = conv2d_forward(y, &params.layer1)?;
    let act1 = relu_forward(&pre1);
    let pre2 = conv2d_forward(&act1, &params.layer2)?;
    let act2 = relu_forward(&pre2);
    let output = conv2d_forward(&act2, &params.layer3)?;
    Ok(ForwardTrace { pre1, act1, pre2, act2, output })
}

/// conv -> ReLU -> conv -> ReLU -> conv; output is unclamped.
pub fn forward(params: &NetworkParams, y: &Tensor) -> Result<Tensor> {
    Ok(forward_trace(params, y)?.output)
}

/// Training loss `l2(output, y) + lambda * l1(output)` with its gradient.
pub fn loss(output: &Tensor, y: &Tensor, lambda: f64) -> Result<LossValue> {
    let (fidelity, l2_grad) = l2_term(output, y)?;
    let (sparsity, l1_grad) = l1_term(output);
    let mut grad = l2_grad;
    if lambda != 0.0 {
        for (g, s) in grad.data.iter_mut().zip(&l1_grad.data) {
            *g += lambda * s;
        }
    }
    Ok(LossValue { total: fidelity + lambda * sparsity, fidelity, sparsity, grad })
}

/// Backpropagates `grad_output` through the three layers.
pub fn backward(
    params: &NetworkParams,
    y: &Tensor,
    trace: &ForwardTrace,
    grad_output: &Tensor,
) -> Result<Gradients> {
    let (d_act2, kernels3, biases3) = conv2d_backward(&trace.act2, &params.layer3, grad_output)?;
    let d_pre2 = relu_backward(&trace.pre2, &d_act2)?;
    let (d_act1, kernels2, biases2) = conv2d_backward(&trace.act1, &params.layer2, &d_pre2)?;
    let d_pre1 = relu_backward(&trace.pre1, &d_act1)?;
    let (_, kernels1, biases1) = conv2d_backward(y, &params.layer1, &d_pre1)?;
    Ok(Gradients { kernels1, biases1, kernels2, biases2, kernels3, biases3 })
}

/// Trains the network on the single image `y` and returns the enhanced image
/// `F(y)` together with the per-epoch loss histories.
pub fn train(y: &RealImage, config: &TrainConfig) -> Result<(Tensor, TrainReport)> {
    config.validate()?;
    let y_t = y.to_tensor();
    let mut params = init_network(config.seed);

    let mut st_k1 = AdamState::new(params.layer1.kernel_len());
    let mut st_b1 = AdamState::new(params.layer1.biases.len());
    let mut st_k2 = AdamState::new(params.layer2.kernel_len());
    let mut st_b2 = AdamState::new(params.layer2.biases.len());
    let mut st_k3 = AdamState::new(params.layer3.kernel_len());
    let mut st_b3 = AdamState::new(params.layer3.biases.len());

    let mut loss_history = Vec::with_capacity(config.epochs);
    let mut fidelity_history = Vec::with_capacity(config.epochs);
    let mut sparsity_history = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let trace = forward_trace(&params, &y_t)?;
        let lv = loss(&trace.output, &y_t, config.lambda)?;
        if !lv.total.is_finite() {
            return Err(Error::Numeric(format!("non-finite loss at epoch {epoch}")));
        }
        loss_history.push(lv.total);
        fidelity_history.push(lv.fidelity);
        sparsity_history.push(lv.sparsity);

        let grads = backward(&params, &y_t, &trace, &lv.grad)?;
        let lr = config.learning_rate;
        adam_step(&mut params.layer1.kernels, &grads.kernels1, &mut st_k1, lr)?;
        adam_step(&mut params.layer1.biases, &grads.biases1, &mut st_b1, lr)?;
        adam_step(&mut params.layer2.kernels, &grads.kernels2, &mut st_k2, lr)?;
        adam_step(&mut params.layer2.biases, &grads.biases2, &mut st_b2, lr)?;
        adam_step(&mut params.layer3.kernels, &grads.kernels3, &mut st_k3, lr)?;
        adam_step(&mut params.layer3.biases, &grads.biases3, &mut st_b3, lr)?;
    }

    let enhanced = forward(&params, &y_t)?;
    let report = TrainReport { loss_history, fidelity_history, sparsity_history, final_params: params };
    Ok((enhanced, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image_from(data: Vec<f64>, h: usize, w: usize) -> RealImage {
        RealImage { height: h, width: w, data }
    }

    fn random_image(h: usize, w: usize, seed: u64) -> RealImage {
        let mut rng = SplitMix64::new(seed);
        image_from((0..h * w).map(|_| rng.next_f64()).collect(), h, w)
    }

    #[test]
    fn init_is_deterministic_and_seed_sensitive() {
        assert_eq!(init_network(7), init_network(7));
        let a = init_network(7);
        let b = init_network(8);
        assert_ne!(a.layer1.kernels, b.layer1.kernels);
    }

    #[test]
    fn init_layer2_std_matches_he_target() {
        let params = init_network(1);
        let k = &params.layer2.kernels;
        let n = k.len() as f64;
        let mean = k.iter().sum::<f64>() / n;
        let std = (k.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        let target = (2.0 / 576.0f64).sqrt();
        assert!((std - target).abs() < 0.05 * target, "std {std} vs {target}");
    }

    #[test]
    fn architecture_parameter_counts() {
        let params = init_network(0);
        // 3*3 * (1*64 + 64*64 + 64*1) kernel weights, 64 + 64 + 1 biases.
        assert_eq!(params.kernel_weight_count(), 9 * (64 + 64 * 64 + 64));
        assert_eq!(params.kernel_weight_count(), 38_016);
        assert_eq!(params.bias_count(), 129);
        assert_eq!(params.layer1.in_channels, 1);
        assert_eq!(params.layer3.out_channels, 1);
    }

    #[test]
    fn zero_input_zero_bias_network_outputs_zero() {
        let params = init_network(3);
        let y = Tensor::zeros(4, 4, 1);
        let out = forward(&params, &y).unwrap();
        assert!(out.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn identity_composition_reproduces_positive_input() {
        // Layer 1 copies the input into channel 0, layer 2 passes channel 0
        // through, layer 3 reads channel 0 back out. ReLU is transparent for
        // positive values.
        let mut params = init_network(0);
        params.layer1 = ConvLayerParams::zeros(1, HIDDEN_CHANNELS);
        params.layer2 = ConvLayerParams::zeros(HIDDEN_CHANNELS, HIDDEN_CHANNELS);
        params.layer3 = ConvLayerParams::zeros(HIDDEN_CHANNELS, 1);
        let i1 = params.layer1.kidx(1, 1, 0, 0);
        params.layer1.kernels[i1] = 1.0;
        let i2 = params.layer2.kidx(1, 1, 0, 0);
        params.layer2.kernels[i2] = 1.0;
        let i3 = params.layer3.kidx(1, 1, 0, 0);
        params.layer3.kernels[i3] = 1.0;

        let y = Tensor::from_vec(3, 3, 1, (1..=9).map(|v| v as f64 * 0.1).collect()).unwrap();
        let out = forward(&params, &y).unwrap();
        assert_eq!(out, y);
    }

    #[test]
    fn forward_matches_straight_line_composition() {
        // Independent re-implementation: direct nested-loop convolution with
        // no fast-path bookkeeping.
        fn naive_conv(x: &Tensor, l: &ConvLayerParams) -> Tensor {
            let mut out = Tensor::zeros(x.height, x.width, l.out_channels);
            for r in 0..x.height {
                for c in 0..x.width {
                    for co in 0..l.out_channels {
                        let mut acc = l.biases[co];
                        for kr in 0..3 {
                            for kc in 0..3 {
                                let ir = r as i64 + kr as i64 - 1;
                                let jc = c as i64 + kc as i64 - 1;
                                if ir < 0 || jc < 0 || ir >= x.height as i64 || jc >= x.width as i64
                                {
                                    continue;
                                }
                                for ci in 0..l.in_channels {
                                    acc += x.get(ir as usize, jc as usize, ci)
                                        * l.kernels[l.kidx(kr, kc, ci, co)];
                                }
                            }
                        }
                        out.set(r, c, co, acc);
                    }
                }
            }
            out
        }

        let params = init_network(12);
        let y = random_image(5, 6, 90).to_tensor();
        let fast = forward(&params, &y).unwrap();

        let a1 = naive_conv(&y, &params.layer1).map(|v| v.max(0.0));
        let a2 = naive_conv(&a1, &params.layer2).map(|v| v.max(0.0));
        let slow = naive_conv(&a2, &params.layer3);
        for (f, s) in fast.data.iter().zip(&slow.data) {
            assert!((f - s).abs() <= 1e-12, "{f} vs {s}");
        }
    }

    #[test]
    fn loss_hand_values() {
        let ones = Tensor::from_vec(2, 2, 1, vec![1.0; 4]).unwrap();
        let lv = loss(&ones, &ones, 0.0).unwrap();
        assert_eq!(lv.total, 0.0);

        let lv = loss(&ones, &ones, 0.1).unwrap();
        assert!((lv.total - 0.1).abs() < 1e-15);
        assert_eq!(lv.fidelity, 0.0);
        assert_eq!(lv.sparsity, 1.0);

        let zeros = Tensor::zeros(2, 2, 1);
        let lv = loss(&zeros, &ones, 0.7).unwrap();
        assert_eq!(lv.total, 1.0);
    }

    #[test]
    fn lambda_zero_gradient_is_exactly_the_l2_gradient() {
        let out = Tensor::from_vec(2, 2, 1, vec![0.5, -0.25, 1.0, 0.0]).unwrap();
        let y = Tensor::from_vec(2, 2, 1, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let lv = loss(&out, &y, 0.0).unwrap();
        let (_, l2g) = l2_term(&out, &y).unwrap();
        assert_eq!(lv.grad, l2g);
    }

    #[test]
    fn zero_epochs_returns_untrained_response() {
        let y = random_image(8, 8, 4);
        let config = TrainConfig { epochs: 0, ..TrainConfig::new(0.1, 4) };
        let (enhanced, report) = train(&y, &config).unwrap();
        assert!(report.loss_history.is_empty());
        let expect = forward(&init_network(4), &y.to_tensor()).unwrap();
        assert_eq!(enhanced, expect);
    }

    #[test]
    fn training_descends_and_decomposes() {
        let y = random_image(16, 16, 5);
        let config = TrainConfig { epochs: 30, ..TrainConfig::new(0.2, 5) };
        let (_, report) = train(&y, &config).unwrap();
        assert_eq!(report.loss_history.len(), 30);
        assert!(report.loss_history[29] < report.loss_history[0]);
        for e in 0..30 {
            let recomposed = report.fidelity_history[e] + 0.2 * report.sparsity_history[e];
            assert!((report.loss_history[e] - recomposed).abs() <= 1e-12);
        }
    }

    #[test]
    fn training_is_deterministic() {
        let y = random_image(8, 8, 6);
        let config = TrainConfig { epochs: 5, ..TrainConfig::new(0.1, 6) };
        let (a, ra) = train(&y, &config).unwrap();
        let (b, rb) = train(&y, &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra.loss_history, rb.loss_history);
        assert_eq!(ra.final_params, rb.final_params);
    }

    #[test]
    fn negative_lambda_rejected() {
        let y = random_image(4, 4, 1);
        let config = TrainConfig::new(-0.1, 1);
        assert!(matches!(train(&y, &config), Err(Error::Domain(_))));
    }

    #[test]
    fn diverging_training_reports_the_epoch() {
        // An absurd learning rate overflows the activations after one step.
        let y = random_image(4, 4, 2);
        let config = TrainConfig { learning_rate: 1e280, epochs: 5, ..TrainConfig::new(0.1, 2) };
        let err = train(&y, &config).unwrap_err();
        match err {
            Error::Numeric(msg) => assert!(msg.contains("epoch"), "{msg}"),
            other => panic!("expected numeric error, got {other:?}"),
        }
    }
}
