use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// Four-dimensional FFT over a `[n0, n1, n2, n3]` C-order array, built from
/// cached 1D plans applied along each axis.
pub struct Fft4 {
    dims: [usize; 4],
    plans: Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>,
}

impl Fft4 {
    pub fn new(dims: [usize; 4]) -> Self {
        Fft4 { dims, plans: Mutex::new(HashMap::new()) }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    fn plan(&self, len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
        let mut plans = self.plans.lock().unwrap();
        plans
            .entry((len, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    }

    /// Unnormalized forward transform, in place.
    pub fn forward(&self, data: &mut [Complex<f64>]) {
        self.transform(data, false);
    }

    /// Inverse transform including the `1/N` normalization, in place.
    pub fn inverse(&self, data: &mut [Complex<f64>]) {
        self.transform(data, true);
        let scale = 1.0 / self.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex<f64>], inverse: bool) {
        assert_eq!(data.len(), self.len());
        let [n0, n1, n2, n3] = self.dims;
        // Strides of a C-order [n0][n1][n2][n3] array.
        let strides = [n1 * n2 * n3, n2 * n3, n3, 1];
        let mut line: Vec<Complex<f64>> = Vec::new();
        for axis in 0..4 {
            let len = self.dims[axis];
            if len == 1 {
                continue;
            }
            let plan = self.plan(len, inverse);
            line.resize(len, Complex::default());
            let stride = strides[axis];
            // Iterate over all lines along `axis`.
            let outer: [usize; 3] = match axis {
                0 => [n1, n2, n3],
                1 => [n0, n2, n3],
                2 => [n0, n1, n3],
                _ => [n0, n1, n2],
            };
            let ostrides: [usize; 3] = match axis {
                0 => [strides[1], strides[2], strides[3]],
                1 => [strides[0], strides[2], strides[3]],
                2 => [strides[0], strides[1], strides[3]],
                _ => [strides[0], strides[1], strides[2]],
            };
            for a in 0..outer[0] {
                for b in 0..outer[1] {
                    for c in 0..outer[2] {
                        let base = a * ostrides[0] + b * ostrides[1] + c * ostrides[2];
                        for (i, v) in line.iter_mut().enumerate() {
                            *v = data[base + i * stride];
                        }
                        plan.process(&mut line);
                        for (i, v) in line.iter().enumerate() {
                            data[base + i * stride] = *v;
                        }
                    }
                }
            }
        }
    }
}

/// Real field to complex buffer.
pub fn to_complex(src: &[f64]) -> Vec<Complex<f64>> {
    src.iter().map(|&v| Complex::new(v, 0.0)).collect()
}

/// Real parts of a complex buffer.
pub fn to_real(src: &[Complex<f64>]) -> Vec<f64> {
    src.iter().map(|v| v.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let dims = [4, 2, 2, 3];
        let fft = Fft4::new(dims);
        let n = fft.len();
        let orig: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut buf = to_complex(&orig);
        fft.forward(&mut buf);
        fft.inverse(&mut buf);
        for (a, b) in orig.iter().zip(&buf) {
            assert!((a - b.re).abs() < 1e-12);
            assert!(b.im.abs() < 1e-12);
        }
    }

    #[test]
    fn matches_naive_dft_on_one_axis() {
        let dims = [1, 1, 1, 8];
        let fft = Fft4::new(dims);
        let orig: Vec<f64> = (0..8).map(|i| (i as f64).cos()).collect();
        let mut buf = to_complex(&orig);
        fft.forward(&mut buf);
        for k in 0..8 {
            let mut acc = Complex::new(0.0, 0.0);
            for (j, &v) in orig.iter().enumerate() {
                let ph = -2.0 * std::f64::consts::PI * (k * j) as f64 / 8.0;
                acc += Complex::new(ph.cos(), ph.sin()) * v;
            }
            assert!((acc - buf[k]).norm() < 1e-10);
        }
    }
}
