//! Gaussian class blobs for classifier tests.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use stylo_ml::LabeledDataset;

/// `n` rows in `k` balanced classes, `d` features with unit noise. Class
/// means are drawn per feature from N(0, spread²).
pub fn blobs(n: usize, d: usize, k: usize, spread: f64, seed: u64) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean_dist = Normal::new(0.0, spread).unwrap();
    let means: Vec<Vec<f64>> = (0..k).map(|_| (0..d).map(|_| mean_dist.sample(&mut rng)).collect()).collect();
    let noise = Normal::new(0.0, 1.0).unwrap();
    let y: Vec<usize> = (0..n).map(|i| i % k).collect();
    let x = Array2::from_shape_fn((n, d), |(i, j)| means[y[i]][j] + noise.sample(&mut rng));
    let labels: Vec<String> = y.iter().map(|c| format!("class{c}")).collect();
    LabeledDataset::new(
        (0..n).map(|i| format!("doc{i:04}")).collect(),
        (0..d).map(|j| format!("F{j:03}")).collect(),
        x,
        &labels,
    )
    .unwrap()
}
