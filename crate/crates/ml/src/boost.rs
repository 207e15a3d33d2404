//! Multi-class AdaBoost (SAMME) over depth-one trees.

use ndarray::{ArrayView1, ArrayView2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::tree::{DecisionTree, TreeParams};

#[derive(Debug, Clone)]
pub struct AdaBoost {
    stumps: Vec<(DecisionTree, f64)>,
    n_classes: usize,
}

impl AdaBoost {
    /// Stops early when a stump is perfect or no better than chance
    /// (error ≥ 1 − 1/K). With no usable stump the model is uniform.
    pub fn fit(x: ArrayView2<f64>, y: &[usize], n_classes: usize, rounds: usize, learning_rate: f64) -> Self {
        let n = y.len();
        let k = n_classes as f64;
        let mut w = vec![1.0 / n as f64; n];
        let mut stumps = Vec::new();
        // Stumps consider every feature, so the generator is never consulted.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..rounds {
            let stump = DecisionTree::fit(x, y, &w, n_classes, &TreeParams::stump(), &mut rng);
            let miss: Vec<bool> = (0..n).map(|i| stump.predict_row(x.row(i)) != y[i]).collect();
            let total: f64 = w.iter().sum();
            let err = w.iter().zip(&miss).filter(|(_, &m)| m).map(|(w, _)| w).sum::<f64>() / total;
            if err <= 1e-12 {
                stumps.push((stump, 1.0));
                break;
            }
            if err >= 1.0 - 1.0 / k {
                break;
            }
            let alpha = learning_rate * (((1.0 - err) / err).ln() + (k - 1.0).ln());
            for (wi, &m) in w.iter_mut().zip(&miss) {
                if m {
                    *wi *= alpha.exp();
                }
            }
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= s);
            stumps.push((stump, alpha));
        }
        AdaBoost { stumps, n_classes }
    }

    pub fn n_stumps(&self) -> usize {
        self.stumps.len()
    }

    /// Vote share per class: Σ α·[stump votes k] / Σ α.
    pub fn decision_row(&self, x: ArrayView1<f64>) -> Vec<f64> {
        let mut s = vec![0.0; self.n_classes];
        let total: f64 = self.stumps.iter().map(|(_, a)| a).sum();
        if total <= 0.0 {
            return s;
        }
        for (t, a) in &self.stumps {
            s[t.predict_row(x)] += a / total;
        }
        s
    }

    /// softmax(decision / (K − 1)).
    pub fn predict_proba_row(&self, x: ArrayView1<f64>) -> Vec<f64> {
        let km1 = (self.n_classes as f64 - 1.0).max(1.0);
        let d: Vec<f64> = self.decision_row(x).iter().map(|v| v / km1).collect();
        crate::softmax(&d)
    }
}
