//! Spatial tensors and 2×2 average pooling.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Row-major `n × c × h × w` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    shape: [usize; 4],
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn new(shape: [usize; 4], data: Vec<f64>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(Error::Shape(format!(
                "{} values for tensor of shape {shape:?}",
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn from_fn(shape: [usize; 4], mut f: impl FnMut([usize; 4]) -> f64) -> Self {
        let [n, c, h, w] = shape;
        let mut data = Vec::with_capacity(n * c * h * w);
        for a in 0..n {
            for b in 0..c {
                for y in 0..h {
                    for x in 0..w {
                        data.push(f([a, b, y, x]));
                    }
                }
            }
        }
        Self { shape, data }
    }

    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, idx: [usize; 4]) -> f64 {
        let [_, c, h, w] = self.shape;
        self.data[((idx[0] * c + idx[1]) * h + idx[2]) * w + idx[3]]
    }

    /// Features per sample (`c·h·w`).
    pub fn sample_len(&self) -> usize {
        self.shape[1] * self.shape[2] * self.shape[3]
    }

    /// The flattened (channel, row, column) features of sample `i`.
    pub fn sample(&self, i: usize) -> &[f64] {
        let len = self.sample_len();
        &self.data[i * len..(i + 1) * len]
    }
}

/// Non-overlapping 2×2 mean pooling with stride 2. Odd trailing rows and
/// columns are averaged over the cells that exist.
pub fn avg_pool_2x2(t: &Tensor4) -> Result<Tensor4> {
    let [n, c, h, w] = t.shape;
    if h == 0 || w == 0 {
        return Err(Error::Shape(format!("spatial dims must be positive, got {h}x{w}")));
    }
    let (oh, ow) = (h.div_ceil(2), w.div_ceil(2));
    let mut out = Vec::with_capacity(n * c * oh * ow);
    for a in 0..n {
        for b in 0..c {
            let plane = &t.data[(a * c + b) * h * w..(a * c + b + 1) * h * w];
            for oy in 0..oh {
                for ox in 0..ow {
                    let mut sum = 0.0;
                    let mut cnt = 0usize;
                    for y in 2 * oy..(2 * oy + 2).min(h) {
                        for x in 2 * ox..(2 * ox + 2).min(w) {
                            sum += plane[y * w + x];
                            cnt += 1;
                        }
                    }
                    out.push(sum / cnt as f64);
                }
            }
        }
    }
    Ok(Tensor4 {
        shape: [n, c, oh, ow],
        data: out,
    })
}
