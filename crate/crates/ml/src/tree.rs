//! Weighted CART classification trees (Gini impurity).

use ndarray::{ArrayView1, ArrayView2};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxFeatures {
    All,
    Sqrt,
    Count(usize),
}

impl MaxFeatures {
    fn resolve(self, d: usize) -> usize {
        match self {
            MaxFeatures::All => d,
            MaxFeatures::Sqrt => ((d as f64).sqrt().round() as usize).max(1),
            MaxFeatures::Count(k) => k.clamp(1, d.max(1)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub max_features: MaxFeatures,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: None, min_samples_split: 2, max_features: MaxFeatures::All }
    }
}

impl TreeParams {
    pub fn stump() -> Self {
        TreeParams { max_depth: Some(1), ..Default::default() }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(Vec<f64>),
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_classes: usize,
}

struct Builder<'a> {
    x: ArrayView2<'a, f64>,
    y: &'a [usize],
    w: &'a [f64],
    k: usize,
    params: &'a TreeParams,
    n_try: usize,
    nodes: Vec<Node>,
}

impl DecisionTree {
    /// Rows with zero weight are ignored entirely. `rng` only matters when
    /// `max_features` is below the number of columns.
    pub fn fit(
        x: ArrayView2<f64>,
        y: &[usize],
        w: &[f64],
        n_classes: usize,
        params: &TreeParams,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        assert_eq!(x.nrows(), y.len());
        assert_eq!(y.len(), w.len());
        let mut b = Builder {
            x: x.view(),
            y,
            w,
            k: n_classes,
            params,
            n_try: params.max_features.resolve(x.ncols()),
            nodes: Vec::new(),
        };
        let idx: Vec<usize> = (0..y.len()).filter(|&i| w[i] > 0.0).collect();
        b.grow(idx, 0, rng);
        DecisionTree { nodes: b.nodes, n_classes }
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn depth(&self) -> usize {
        fn d(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + d(nodes, *left).max(d(nodes, *right)),
            }
        }
        d(&self.nodes, 0)
    }

    /// Class distribution of the leaf `x` falls into.
    pub fn predict_proba_row(&self, x: ArrayView1<f64>) -> &[f64] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf(p) => return p,
                Node::Split { feature, threshold, left, right } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn predict_row(&self, x: ArrayView1<f64>) -> usize {
        crate::argmax(self.predict_proba_row(x))
    }
}

impl Builder<'_> {
    fn class_weights(&self, idx: &[usize]) -> Vec<f64> {
        let mut c = vec![0.0; self.k];
        for &i in idx {
            c[self.y[i]] += self.w[i];
        }
        c
    }

    fn grow(&mut self, idx: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let counts = self.class_weights(&idx);
        let total: f64 = counts.iter().sum();
        let pure = counts.iter().filter(|&&c| c > 0.0).count() <= 1;
        let at_depth = self.params.max_depth.is_some_and(|m| depth >= m);
        let split = if pure || at_depth || idx.len() < self.params.min_samples_split {
            None
        } else {
            self.best_split(&idx, &counts, rng)
        };
        let me = self.nodes.len();
        match split {
            None => {
                let p = if total > 0.0 {
                    counts.iter().map(|c| c / total).collect()
                } else {
                    vec![1.0 / self.k as f64; self.k]
                };
                self.nodes.push(Node::Leaf(p));
            }
            Some((feature, threshold)) => {
                self.nodes.push(Node::Leaf(Vec::new()));
                let (l, r): (Vec<usize>, Vec<usize>) =
                    idx.into_iter().partition(|&i| self.x[[i, feature]] <= threshold);
                let left = self.grow(l, depth + 1, rng);
                let right = self.grow(r, depth + 1, rng);
                self.nodes[me] = Node::Split { feature, threshold, left, right };
            }
        }
        me
    }

    /// Features are tried in random order; the search continues past
    /// `n_try` features until at least one valid split turns up.
    fn best_split(&self, idx: &[usize], counts: &[f64], rng: &mut ChaCha8Rng) -> Option<(usize, f64)> {
        let d = self.x.ncols();
        let mut order: Vec<usize> = (0..d).collect();
        if self.n_try < d {
            order.shuffle(rng);
        }
        let mut best: Option<(f64, usize, f64)> = None;
        let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(idx.len());
        for (tried, &f) in order.iter().enumerate() {
            if tried >= self.n_try && best.is_some() {
                break;
            }
            pairs.clear();
            pairs.extend(idx.iter().map(|&i| (self.x[[i, f]], i)));
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            if pairs[0].0 == pairs[pairs.len() - 1].0 {
                continue;
            }
            let mut left = vec![0.0; self.k];
            let mut wl = 0.0;
            let total: f64 = counts.iter().sum();
            for p in 0..pairs.len() - 1 {
                let (v, i) = pairs[p];
                left[self.y[i]] += self.w[i];
                wl += self.w[i];
                let next = pairs[p + 1].0;
                if v == next {
                    continue;
                }
                let wr = total - wl;
                if wl <= 0.0 || wr <= 0.0 {
                    continue;
                }
                // Maximising Σl²/wl + Σr²/wr minimises weighted Gini impurity.
                let mut score = 0.0;
                for c in 0..self.k {
                    let r = counts[c] - left[c];
                    score += left[c] * left[c] / wl + r * r / wr;
                }
                if best.is_none_or(|(s, _, _)| score > s + 1e-12) {
                    let mut thr = v + (next - v) / 2.0;
                    if thr >= next {
                        thr = v;
                    }
                    best = Some((score, f, thr));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}
