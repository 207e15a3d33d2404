//! Bagged CART forest with per-split feature subsampling.

use ndarray::{ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::tree::{DecisionTree, MaxFeatures, TreeParams};

#[derive(Debug, Clone)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
    n_classes: usize,
}

impl RandomForest {
    /// Tree `t` draws its bootstrap sample and feature subsets from stream `t`
    /// of the seeded generator, so the forest does not depend on how rayon
    /// schedules the work.
    pub fn fit(x: ArrayView2<f64>, y: &[usize], n_classes: usize, n_trees: usize, seed: u64) -> Self {
        let params = TreeParams { max_features: MaxFeatures::Sqrt, ..Default::default() };
        Self::fit_with(x, y, n_classes, n_trees, &params, seed)
    }

    pub fn fit_with(
        x: ArrayView2<f64>,
        y: &[usize],
        n_classes: usize,
        n_trees: usize,
        params: &TreeParams,
        seed: u64,
    ) -> Self {
        let n = y.len();
        let trees = (0..n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t as u64);
                let mut w = vec![0.0; n];
                for _ in 0..n {
                    w[rng.random_range(0..n)] += 1.0;
                }
                DecisionTree::fit(x, y, &w, n_classes, params, &mut rng)
            })
            .collect();
        RandomForest { trees, n_classes }
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn truncate(&mut self, n_trees: usize) {
        self.trees.truncate(n_trees.max(1));
    }

    /// Mean leaf distribution over the first `n_trees` trees.
    pub fn predict_proba_prefix(&self, x: ArrayView1<f64>, n_trees: usize) -> Vec<f64> {
        let m = n_trees.clamp(1, self.trees.len());
        let mut p = vec![0.0; self.n_classes];
        for t in &self.trees[..m] {
            for (a, b) in p.iter_mut().zip(t.predict_proba_row(x)) {
                *a += b;
            }
        }
        p.iter_mut().for_each(|v| *v /= m as f64);
        p
    }

    pub fn predict_proba_row(&self, x: ArrayView1<f64>) -> Vec<f64> {
        self.predict_proba_prefix(x, self.trees.len())
    }
}
