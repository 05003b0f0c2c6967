//! Rank-3 real tensor: the universal carrier for images, activations,
//! kernels-as-stacks, and gradients.

use crate::error::{Error, Result};

/// `height x width x channels` tensor of 64-bit floats, row-major with the
/// channel index minor: `index = (r * width + c) * channels + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Self { height, width, channels, data: vec![0.0; height * width * channels] }
    }

    /// Builds a tensor from existing data, validating length and finiteness.
    pub fn from_vec(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        let expected = height * width * channels;
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "tensor {height}x{width}x{channels} needs {expected} values, got {}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite value at index {i}")));
        }
        Ok(Self { height, width, channels, data })
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let mut data = Vec::with_capacity(height * width * channels);
        for r in 0..height {
            for c in 0..width {
                for k in 0..channels {
                    data.push(f(r, c, k));
                }
            }
        }
        Self { height, width, channels, data }
    }

    #[inline]
    pub fn idx(&self, r: usize, c: usize, k: usize) -> usize {
        (r * self.width + c) * self.channels + k
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize, k: usize) -> f64 {
        self.data[self.idx(r, c, k)]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, k: usize, v: f64) {
        let i = self.idx(r, c, k);
        self.data[i] = v;
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn same_shape(&self, other: &Tensor) -> bool {
        self.height == other.height && self.width == other.width && self.channels == other.channels
    }

    pub fn shape_str(&self) -> String {
        format!("{}x{}x{}", self.height, self.width, self.channels)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor {
        Tensor {
            height: self.height,
            width: self.width,
            channels: self.channels,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_row_major_channel_minor() {
        let t = Tensor::from_fn(2, 3, 4, |r, c, k| (r * 100 + c * 10 + k) as f64);
        // (r * width + c) * channels + k at (1, 2, 3).
        assert_eq!(t.idx(1, 2, 3), 23);
        assert_eq!(t.get(1, 2, 3), 123.0);
    }

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(matches!(
            Tensor::from_vec(2, 2, 1, vec![0.0; 3]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn from_vec_rejects_non_finite() {
        assert!(matches!(
            Tensor::from_vec(1, 2, 1, vec![1.0, f64::INFINITY]),
            Err(Error::Numeric(_))
        ));
    }
}
