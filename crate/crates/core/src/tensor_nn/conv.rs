//! Same-padded 3x3 convolution (cross-correlation convention) with the full
//! analytic backward pass.
//!
//! Spatial dimensions are always preserved: zero padding of 1 on each border.
//! The inner loops run over the output-channel axis, which is minor in both
//! the kernel and activation layouts, so they compile to straight
//! multiply-add streams. Interior pixels are processed four at a time so each
//! pass over the kernel stack feeds four accumulator chains; border pixels
//! take a scalar path. Every output element accumulates its taps in the same
//! fixed (kr, kc, ci) order either way.

use crate::error::{Error, Result};
use crate::tensor_nn::Tensor;

/// Kernel spatial extent; fixed by the architecture.
pub const KERNEL_SIZE: usize = 3;

/// Pixels handled per pass in the interior fast path.
const TILE: usize = 4;

/// Parameters of one convolution layer: a `3 x 3 x in_channels x out_channels`
/// kernel stack (row-major in that axis order) plus one bias per output channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvLayerParams {
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernels: Vec<f64>,
    pub biases: Vec<f64>,
}

impl ConvLayerParams {
    pub fn new(
        in_channels: usize,
        out_channels: usize,
        kernels: Vec<f64>,
        biases: Vec<f64>,
    ) -> Result<Self> {
        let expected = KERNEL_SIZE * KERNEL_SIZE * in_channels * out_channels;
        if kernels.len() != expected {
            return Err(Error::Shape(format!(
                "kernel stack 3x3x{in_channels}x{out_channels} needs {expected} weights, got {}",
                kernels.len()
            )));
        }
        if biases.len() != out_channels {
            return Err(Error::Shape(format!(
                "bias vector needs {out_channels} entries, got {}",
                biases.len()
            )));
        }
        if kernels.iter().chain(biases.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite layer parameter".into()));
        }
        Ok(Self { in_channels, out_channels, kernels, biases })
    }

    pub fn zeros(in_channels: usize, out_channels: usize) -> Self {
        Self {
            in_channels,
            out_channels,
            kernels: vec![0.0; KERNEL_SIZE * KERNEL_SIZE * in_channels * out_channels],
            biases: vec![0.0; out_channels],
        }
    }

    /// Flat index of kernel weight `(kr, kc, ci, co)`.
    #[inline]
    pub fn kidx(&self, kr: usize, kc: usize, ci: usize, co: usize) -> usize {
        ((kr * KERNEL_SIZE + kc) * self.in_channels + ci) * self.out_channels + co
    }

    pub fn kernel_len(&self) -> usize {
        self.kernels.len()
    }
}

fn check_input_channels(input: &Tensor, layer: &ConvLayerParams) -> Result<()> {
    if input.channels != layer.in_channels {
        return Err(Error::Shape(format!(
            "input {} vs layer expecting 3x3x{}x{} kernels",
            input.shape_str(),
            layer.in_channels,
            layer.out_channels
        )));
    }
    Ok(())
}

#[inline]
fn kr_bounds(r: usize, h: usize) -> (usize, usize) {
    (usize::from(r == 0), if r + 1 == h { 2 } else { 3 })
}

/// Same-padded cross-correlation plus per-channel bias. Output spatial
/// dimensions equal the input's; output channel count is the layer's.
pub fn conv2d_forward(input: &Tensor, layer: &ConvLayerParams) -> Result<Tensor> {
    check_input_channels(input, layer)?;
    let (h, w) = (input.height, input.width);
    let ic = layer.in_channels;
    let oc = layer.out_channels;
    let mut out = Tensor::zeros(h, w, oc);
    let x = &input.data;
    let kernels = &layer.kernels;
    let mut acc = vec![0.0f64; TILE * oc];

    for r in 0..h {
        let (kr_lo, kr_hi) = kr_bounds(r, h);

        let scalar = |c: usize, acc: &mut [f64]| {
            acc.copy_from_slice(&layer.biases);
            let kc_lo = usize::from(c == 0);
            let kc_hi = if c + 1 == w { 2 } else { 3 };
            for kr in kr_lo..kr_hi {
                let ir = r + kr - 1;
                for kc in kc_lo..kc_hi {
                    let jc = c + kc - 1;
                    let in_base = (ir * w + jc) * ic;
                    let k_base = (kr * KERNEL_SIZE + kc) * ic * oc;
                    for ci in 0..ic {
                        let xv = x[in_base + ci];
                        let ks = &kernels[k_base + ci * oc..k_base + (ci + 1) * oc];
                        for (a, &k) in acc.iter_mut().zip(ks) {
                            *a += xv * k;
                        }
                    }
                }
            }
        };

        let mut c = 0;
        while c < w {
            if c >= 1 && c + TILE < w {
                // Interior tile: all nine taps valid for the whole block.
                for t in 0..TILE {
                    acc[t * oc..(t + 1) * oc].copy_from_slice(&layer.biases);
                }
                let (a0, rest) = acc.split_at_mut(oc);
                let (a1, rest) = rest.split_at_mut(oc);
                let (a2, a3) = rest.split_at_mut(oc);
                for kr in kr_lo..kr_hi {
                    let ir = r + kr - 1;
                    for kc in 0..KERNEL_SIZE {
                        let in_base = (ir * w + c + kc - 1) * ic;
                        let k_base = (kr * KERNEL_SIZE + kc) * ic * oc;
                        for ci in 0..ic {
                            let x0 = x[in_base + ci];
                            let x1 = x[in_base + ic + ci];
                            let x2 = x[in_base + 2 * ic + ci];
                            let x3 = x[in_base + 3 * ic + ci];
                            let ks = &kernels[k_base + ci * oc..k_base + (ci + 1) * oc];
                            for (j, &k) in ks.iter().enumerate() {
                                a0[j] += x0 * k;
                                a1[j] += x1 * k;
                                a2[j] += x2 * k;
                                a3[j] += x3 * k;
                            }
                        }
                    }
                }
                let o_base = (r * w + c) * oc;
                out.data[o_base..o_base + oc].copy_from_slice(a0);
                out.data[o_base + oc..o_base + 2 * oc].copy_from_slice(a1);
                out.data[o_base + 2 * oc..o_base + 3 * oc].copy_from_slice(a2);
                out.data[o_base + 3 * oc..o_base + 4 * oc].copy_from_slice(a3);
                c += TILE;
            } else {
                let (head, _) = acc.split_at_mut(oc);
                scalar(c, head);
                let o_base = (r * w + c) * oc;
                out.data[o_base..o_base + oc].copy_from_slice(head);
                c += 1;
            }
        }
    }
    Ok(out)
}

/// Exact analytic gradients of [`conv2d_forward`] with respect to the input,
/// the kernel stack, and the biases.
pub fn conv2d_backward(
    input: &Tensor,
    layer: &ConvLayerParams,
    grad_output: &Tensor,
) -> Result<(Tensor, Vec<f64>, Vec<f64>)> {
    check_input_channels(input, layer)?;
    let (h, w) = (input.height, input.width);
    let ic = layer.in_channels;
    let oc = layer.out_channels;
    if grad_output.height != h || grad_output.width != w || grad_output.channels != oc {
        return Err(Error::Shape(format!(
            "grad_output {} vs expected {h}x{w}x{oc}",
            grad_output.shape_str()
        )));
    }
    let x = &input.data;
    let god = &grad_output.data;
    let kernels = &layer.kernels;

    // Bias and kernel gradients accumulate over output pixels row-major.
    let mut grad_kernels = vec![0.0f64; layer.kernel_len()];
    let mut grad_biases = vec![0.0f64; oc];
    for r in 0..h {
        let (kr_lo, kr_hi) = kr_bounds(r, h);
        let mut c = 0;
        while c < w {
            if c >= 1 && c + TILE < w {
                let g_base = (r * w + c) * oc;
                let g = &god[g_base..g_base + TILE * oc];
                let (g0, grest) = g.split_at(oc);
                let (g1, grest) = grest.split_at(oc);
                let (g2, g3) = grest.split_at(oc);
                for (j, gb) in grad_biases.iter_mut().enumerate() {
                    *gb += g0[j] + g1[j] + g2[j] + g3[j];
                }
                for kr in kr_lo..kr_hi {
                    let ir = r + kr - 1;
                    for kc in 0..KERNEL_SIZE {
                        let in_base = (ir * w + c + kc - 1) * ic;
                        let k_base = (kr * KERNEL_SIZE + kc) * ic * oc;
                        for ci in 0..ic {
                            let x0 = x[in_base + ci];
                            let x1 = x[in_base + ic + ci];
                            let x2 = x[in_base + 2 * ic + ci];
                            let x3 = x[in_base + 3 * ic + ci];
                            let gk = &mut grad_kernels[k_base + ci * oc..k_base + (ci + 1) * oc];
                            for (j, gkv) in gk.iter_mut().enumerate() {
                                *gkv += x0 * g0[j] + x1 * g1[j] + x2 * g2[j] + x3 * g3[j];
                            }
                        }
                    }
                }
                c += TILE;
            } else {
                let kc_lo = usize::from(c == 0);
                let kc_hi = if c + 1 == w { 2 } else { 3 };
                let g_base = (r * w + c) * oc;
                let g = &god[g_base..g_base + oc];
                for (gb, &gv) in grad_biases.iter_mut().zip(g) {
                    *gb += gv;
                }
                for kr in kr_lo..kr_hi {
                    let ir = r + kr - 1;
                    for kc in kc_lo..kc_hi {
                        let jc = c + kc - 1;
                        let in_base = (ir * w + jc) * ic;
                        let k_base = (kr * KERNEL_SIZE + kc) * ic * oc;
                        for ci in 0..ic {
                            let xv = x[in_base + ci];
                            let gk = &mut grad_kernels[k_base + ci * oc..k_base + (ci + 1) * oc];
                            for (gkv, &gv) in gk.iter_mut().zip(g) {
                                *gkv += xv * gv;
                            }
                        }
                    }
                }
                c += 1;
            }
        }
    }

    // Input gradient in gather form: each input pixel sums the kernel-weighted
    // upstream gradients of the output pixels it fed.
    let mut grad_input = Tensor::zeros(h, w, ic);
    let gi = &mut grad_input.data;
    for ir in 0..h {
        // Output rows r = ir + 1 - kr must stay in [0, h).
        let kr_lo = (ir + 2).saturating_sub(h).min(2);
        let kr_hi = (ir + 1).min(2);
        let mut jc = 0;
        while jc < w {
            if jc >= 1 && jc + TILE < w {
                let gi_base = (ir * w + jc) * ic;
                for kr in kr_lo..=kr_hi {
                    let r = ir + 1 - kr;
                    for kc in 0..KERNEL_SIZE {
                        let g_base = (r * w + jc + 1 - kc) * oc;
                        let g = &god[g_base..g_base + TILE * oc];
                        let (g0, grest) = g.split_at(oc);
                        let (g1, grest) = grest.split_at(oc);
                        let (g2, g3) = grest.split_at(oc);
                        let k_base = (kr * KERNEL_SIZE + kc) * ic * oc;
                        for ci in 0..ic {
                            let ks = &kernels[k_base + ci * oc..k_base + (ci + 1) * oc];
                            let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
                            for (j, &k) in ks.iter().enumerate() {
                                s0 += k * g0[j];
                                s1 += k * g1[j];
                                s2 += k * g2[j];
                                s3 += k * g3[j];
                            }
                            gi[gi_base + ci] += s0;
                            gi[gi_base + ic + ci] += s1;
                            gi[gi_base + 2 * ic + ci] += s2;
                            gi[gi_base + 3 * ic + ci] += s3;
                        }
                    }
                }
                jc += TILE;
            } else {
                let gi_base = (ir * w + jc) * ic;
                for kr in kr_lo..=kr_hi {
                    let r = ir + 1 - kr;
                    for kc in 0..KERNEL_SIZE {
                        let Some(c) = (jc + 1).checked_sub(kc).filter(|&c| c < w) else {
                            continue;
                        };
                        let g_base = (r * w + c) * oc;
                        let g = &god[g_base..g_base + oc];
                        let k_base = (kr * KERNEL_SIZE + kc) * ic * oc;
                        for ci in 0..ic {
                            let ks = &kernels[k_base + ci * oc..k_base + (ci + 1) * oc];
                            let mut s = 0.0;
                            for (&k, &gv) in ks.iter().zip(g) {
                                s += k * gv;
                            }
                            gi[gi_base + ci] += s;
                        }
                    }
                }
                jc += 1;
            }
        }
    }

    Ok((grad_input, grad_kernels, grad_biases))
}
