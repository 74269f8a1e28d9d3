//! Dense rank-3 value grids (channels x height x width).
//!
//! A [`Grid`] holds images, masks, noise and network outputs. Model-space
//! grids carry values in `[-1, 1]`; decoded masks are binary `{0, 1}`.
//! All grid math is done in 64-bit so that schedule-level identities can be
//! tested exactly; networks cast at their own boundary.

use crate::error::{DdmmError, Result};
use ndarray::Array3;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    data: Array3<f64>,
}

impl Grid {
    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        Grid {
            data: Array3::zeros((channels, height, width)),
        }
    }

    pub fn from_elem(channels: usize, height: usize, width: usize, value: f64) -> Self {
        Grid {
            data: Array3::from_elem((channels, height, width), value),
        }
    }

    pub fn from_fn(
        channels: usize,
        height: usize,
        width: usize,
        f: impl Fn(usize, usize, usize) -> f64,
    ) -> Self {
        Grid {
            data: Array3::from_shape_fn((channels, height, width), |(c, y, x)| f(c, y, x)),
        }
    }

    pub fn from_vec(channels: usize, height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != channels * height * width {
            return Err(DdmmError::ShapeMismatch {
                expected: format!("{} values", channels * height * width),
                actual: format!("{} values", values.len()),
            });
        }
        Ok(Grid {
            data: Array3::from_shape_vec((channels, height, width), values)
                .expect("length checked above"),
        })
    }

    pub fn from_array(data: Array3<f64>) -> Self {
        Grid { data }
    }

    pub fn channels(&self) -> usize {
        self.data.dim().0
    }

    pub fn height(&self) -> usize {
        self.data.dim().1
    }

    pub fn width(&self) -> usize {
        self.data.dim().2
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        self.data.dim()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.data[(c, y, x)]
    }

    pub fn set(&mut self, c: usize, y: usize, x: usize, value: f64) {
        self.data[(c, y, x)] = value;
    }

    pub fn data(&self) -> &Array3<f64> {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut Array3<f64> {
        &mut self.data
    }

    /// Contiguous row-major (channel, row, column) view of the values.
    pub fn as_slice(&self) -> &[f64] {
        self.data.as_slice().expect("grids are always contiguous")
    }

    pub fn as_slice_mut(&mut self) -> &mut [f64] {
        self.data
            .as_slice_mut()
            .expect("grids are always contiguous")
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.as_slice().iter()
    }

    pub fn same_shape(&self, other: &Grid) -> bool {
        self.shape() == other.shape()
    }

    pub fn check_same_shape(&self, other: &Grid) -> Result<()> {
        if !self.same_shape(other) {
            return Err(DdmmError::ShapeMismatch {
                expected: format!("{:?}", self.shape()),
                actual: format!("{:?}", other.shape()),
            });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Grid {
        Grid {
            data: self.data.mapv(|v| f(v)),
        }
    }

    pub fn zip_map(&self, other: &Grid, f: impl Fn(f64, f64) -> f64) -> Result<Grid> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.data.zip_mut_with(&other.data, |a, &b| *a = f(*a, b));
        Ok(out)
    }

    /// `a * self + b * other`, the workhorse of the diffusion kernel.
    pub fn scale_add(&self, a: f64, other: &Grid, b: f64) -> Result<Grid> {
        self.zip_map(other, |x, y| a * x + b * y)
    }

    pub fn scaled(&self, a: f64) -> Grid {
        self.map(|v| a * v)
    }

    pub fn clamped(&self, lo: f64, hi: f64) -> Grid {
        self.map(|v| v.clamp(lo, hi))
    }

    pub fn all_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }

    /// True when every value is exactly 0.0 or 1.0.
    pub fn is_binary(&self) -> bool {
        self.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.iter().sum::<f64>() / self.len() as f64
    }

    pub fn mean_sq(&self) -> f64 {
        self.iter().map(|v| v * v).sum::<f64>() / self.len() as f64
    }

    pub fn max_abs_diff(&self, other: &Grid) -> f64 {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Binary `{0,1}` mask -> model-space `{-1,+1}` signal.
pub fn encode_mask(mask: &Grid) -> Result<Grid> {
    if !mask.is_binary() {
        return Err(DdmmError::invalid("mask is not binary {0,1}"));
    }
    Ok(mask.map(|v| v * 2.0 - 1.0))
}

/// Model-space signal -> binary `{0,1}` mask, thresholded at 0.
pub fn decode_mask(soft: &Grid) -> Grid {
    soft.map(|v| if v >= 0.0 { 1.0 } else { 0.0 })
}
