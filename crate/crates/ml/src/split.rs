//! Stratified train / validation / test partition.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::MlError;

#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    /// Fraction of each class held out for testing.
    pub test: f64,
    /// Fraction of each class's remaining examples held out for validation.
    pub validation: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { test: 0.2, validation: 0.15, seed: 0 }
    }
}

/// Row indices, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

/// Per class: `max(1, round(test·n))` to test, then `max(1, round(validation·rest))`
/// to validation, the rest to training. Every class needs at least 3 examples
/// so each part gets one.
pub fn stratified_split(y: &[usize], n_classes: usize, spec: &SplitSpec) -> Result<Split, MlError> {
    if !(0.0..1.0).contains(&spec.test) || !(0.0..1.0).contains(&spec.validation) {
        return Err(MlError::Config(format!("split fractions must be in [0, 1): {spec:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Split { train: Vec::new(), validation: Vec::new(), test: Vec::new() };
    for class in 0..n_classes {
        let mut idx: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        if idx.len() < 3 {
            return Err(MlError::TooFewExamples { class: class.to_string(), count: idx.len(), needed: 3 });
        }
        idx.shuffle(&mut rng);
        let n = idx.len();
        let n_test = ((spec.test * n as f64).round() as usize).clamp(1, n - 2);
        let rest = n - n_test;
        let n_val = ((spec.validation * rest as f64).round() as usize).clamp(1, rest - 1);
        out.test.extend_from_slice(&idx[..n_test]);
        out.validation.extend_from_slice(&idx[n_test..n_test + n_val]);
        out.train.extend_from_slice(&idx[n_test + n_val..]);
    }
    out.train.sort_unstable();
    out.validation.sort_unstable();
    out.test.sort_unstable();
    Ok(out)
}
