//! Interventional Shapley values against a background sample.
//!
//! The value of a coalition S is the mean model output over background rows
//! with the features in S replaced by those of the explained row.

use ndarray::ArrayView2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::MlError;

/// Largest feature count the exact enumerator accepts.
pub const EXACT_MAX_FEATURES: usize = 20;

#[derive(Debug, Clone)]
pub struct ShapleyEstimate {
    pub values: Vec<f64>,
    /// Standard error of each value.
    pub std_errors: Vec<f64>,
    /// Standard error of `values.iter().sum()`.
    pub sum_std_error: f64,
    /// Mean output over the whole background.
    pub base_value: f64,
    /// Output at the explained row.
    pub output: f64,
    pub n_permutations: usize,
}

impl ShapleyEstimate {
    /// |Σφ − (f(x) − E f(b))|. Zero when the permutation pairs cover the
    /// background an equal number of times.
    pub fn efficiency_gap(&self) -> f64 {
        (self.values.iter().sum::<f64>() - (self.output - self.base_value)).abs()
    }
}

fn check(x: &[f64], background: ArrayView2<f64>) -> Result<(), MlError> {
    if background.nrows() == 0 {
        return Err(MlError::Empty("background rows"));
    }
    if background.ncols() != x.len() {
        return Err(MlError::Shape(format!("row has {} features, background {}", x.len(), background.ncols())));
    }
    Ok(())
}

/// Exact values by enumerating all 2^d coalitions.
pub fn exact_shapley<F>(f: &F, x: &[f64], background: ArrayView2<f64>) -> Result<Vec<f64>, MlError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check(x, background)?;
    let d = x.len();
    if d > EXACT_MAX_FEATURES {
        return Err(MlError::TooManyFeatures { features: d, max: EXACT_MAX_FEATURES });
    }
    let v: Vec<f64> = (0..1usize << d)
        .into_par_iter()
        .map(|mask| {
            let mut z = vec![0.0; d];
            let mut acc = 0.0;
            for b in background.rows() {
                for j in 0..d {
                    z[j] = if mask >> j & 1 == 1 { x[j] } else { b[j] };
                }
                acc += f(&z);
            }
            acc / background.nrows() as f64
        })
        .collect();
    // weight(s) = s!(d−s−1)!/d!
    let fact: Vec<f64> = (0..=d)
        .scan(1.0, |a, i| {
            if i > 0 {
                *a *= i as f64;
            }
            Some(*a)
        })
        .collect();
    let mut phi = vec![0.0; d];
    for mask in 0..1usize << d {
        let s = mask.count_ones() as usize;
        for (i, p) in phi.iter_mut().enumerate() {
            if mask >> i & 1 == 0 {
                *p += fact[s] * fact[d - s - 1] / fact[d] * (v[mask | 1 << i] - v[mask]);
            }
        }
    }
    Ok(phi)
}

/// Permutation-sampling estimate. Permutations come in antithetic pairs (a
/// random order and its reverse) that share one background row; pair `p`
/// uses background row `p mod m` and generator stream `p`, so the result is
/// independent of thread scheduling. Odd counts are rounded up.
pub fn sample_shapley<F>(
    f: &F,
    x: &[f64],
    background: ArrayView2<f64>,
    n_permutations: usize,
    seed: u64,
) -> Result<ShapleyEstimate, MlError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check(x, background)?;
    let d = x.len();
    let pairs = n_permutations.div_ceil(2).max(1);
    let m = background.nrows();
    let contributions: Vec<Vec<f64>> = (0..pairs)
        .into_par_iter()
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p as u64);
            let mut order: Vec<usize> = (0..d).collect();
            order.shuffle(&mut rng);
            let b = background.row(p % m);
            let mut phi = vec![0.0; d];
            for pass in 0..2 {
                let mut z = b.to_vec();
                let mut prev = f(&z);
                let walk: Box<dyn Iterator<Item = &usize>> =
                    if pass == 0 { Box::new(order.iter()) } else { Box::new(order.iter().rev()) };
                for &j in walk {
                    z[j] = x[j];
                    let cur = f(&z);
                    phi[j] += (cur - prev) / 2.0;
                    prev = cur;
                }
            }
            phi
        })
        .collect();

    let n = pairs as f64;
    let mut values = vec![0.0; d];
    for c in &contributions {
        for (v, a) in values.iter_mut().zip(c) {
            *v += a;
        }
    }
    values.iter_mut().for_each(|v| *v /= n);
    let se = |samples: &mut dyn Iterator<Item = f64>, mean: f64| -> f64 {
        if pairs < 2 {
            return f64::INFINITY;
        }
        let ss: f64 = samples.map(|s| (s - mean).powi(2)).sum();
        (ss / (n - 1.0) / n).sqrt()
    };
    let std_errors = (0..d).map(|j| se(&mut contributions.iter().map(|c| c[j]), values[j])).collect();
    let total: f64 = values.iter().sum();
    let sum_std_error = se(&mut contributions.iter().map(|c| c.iter().sum::<f64>()), total);
    let base_value = background.rows().into_iter().map(|b| f(&b.to_vec())).sum::<f64>() / m as f64;
    Ok(ShapleyEstimate { values, std_errors, sum_std_error, base_value, output: f(x), n_permutations: 2 * pairs })
}

/// ‖estimate − exact‖₂ / ‖exact‖₂ (absolute norm when the exact values vanish).
pub fn relative_error(estimate: &[f64], exact: &[f64]) -> f64 {
    let diff: f64 = estimate.iter().zip(exact).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = exact.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        diff / norm
    } else {
        diff
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn linear_model_is_exact() {
        // φ_j = w_j (x_j − mean b_j) for a linear model.
        let w = [2.0, -1.0, 0.5];
        let f = |z: &[f64]| z.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        let bg = array![[0.0, 1.0, 2.0], [2.0, 3.0, 0.0]];
        let x = [1.0, 1.0, 1.0];
        let want = [0.0, 1.0, 0.0];
        let exact = exact_shapley(&f, &x, bg.view()).unwrap();
        let est = sample_shapley(&f, &x, bg.view(), 8, 0).unwrap();
        for j in 0..3 {
            assert!((exact[j] - want[j]).abs() < 1e-12);
            assert!((est.values[j] - want[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn interaction_is_split_evenly() {
        let f = |z: &[f64]| z[0] * z[1];
        let bg = array![[0.0, 0.0]];
        let exact = exact_shapley(&f, &[1.0, 1.0], bg.view()).unwrap();
        assert_eq!(exact, [0.5, 0.5]);
        // With two features every antithetic pair covers both orders.
        let est = sample_shapley(&f, &[1.0, 1.0], bg.view(), 2, 9).unwrap();
        assert_eq!(est.values, [0.5, 0.5]);
    }

    #[test]
    fn efficiency_is_exact_over_whole_background_cycles() {
        let f = |z: &[f64]| (z[0] - z[1]).tanh() + z[2] * z[0];
        let bg = array![[0.0, 1.0, 2.0], [2.0, 3.0, 0.0], [1.0, -1.0, 0.5]];
        let est = sample_shapley(&f, &[0.3, 0.2, -1.0], bg.view(), 60, 4).unwrap();
        assert!(est.efficiency_gap() < 1e-12);
    }

    #[test]
    fn too_many_features() {
        let bg = ndarray::Array2::zeros((1, 21));
        let err = exact_shapley(&|_: &[f64]| 0.0, &[0.0; 21], bg.view()).unwrap_err();
        assert!(matches!(err, MlError::TooManyFeatures { features: 21, .. }));
    }
}
