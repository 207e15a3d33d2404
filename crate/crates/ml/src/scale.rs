//! Per-feature z-scoring, fitted on training rows only.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

#[derive(Debug, Clone)]
pub struct Standardizer {
    pub mean: Array1<f64>,
    /// Population standard deviation; constant columns get 1 so they map to 0.
    pub scale: Array1<f64>,
}

impl Standardizer {
    pub fn fit(x: ArrayView2<f64>) -> Self {
        let n = x.nrows().max(1) as f64;
        let mean = x.sum_axis(Axis(0)) / n;
        let mut scale = Array1::zeros(x.ncols());
        for (j, col) in x.axis_iter(Axis(1)).enumerate() {
            let var = col.iter().map(|v| (v - mean[j]).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            scale[j] = if sd > 1e-12 * (1.0 + mean[j].abs()) { sd } else { 1.0 };
        }
        Standardizer { mean, scale }
    }

    pub fn identity(d: usize) -> Self {
        Standardizer { mean: Array1::zeros(d), scale: Array1::ones(d) }
    }

    pub fn transform(&self, x: ArrayView2<f64>) -> Array2<f64> {
        (&x - &self.mean) / &self.scale
    }

    pub fn transform_row(&self, x: ArrayView1<f64>) -> Array1<f64> {
        (&x - &self.mean) / &self.scale
    }
}
