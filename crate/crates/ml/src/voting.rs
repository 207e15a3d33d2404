//! Soft-voting ensemble: random forest, AdaBoost and logistic regression.

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rayon::prelude::*;

use crate::boost::AdaBoost;
use crate::forest::RandomForest;
use crate::logistic::{LogisticParams, LogisticRegression};
use crate::scale::Standardizer;
use crate::MlError;

#[derive(Debug, Clone)]
pub struct Hyperparams {
    /// Largest forest grown; validation picks among `forest_sizes` up to it.
    pub n_trees: usize,
    pub forest_sizes: Vec<usize>,
    pub boost_rounds: usize,
    pub boost_learning_rate: f64,
    pub logistic: LogisticParams,
    /// Feed z-scored features to the tree models too. Trees are invariant to
    /// per-feature affine maps, so this only matters for the round-off.
    pub standardize_trees: bool,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            n_trees: 200,
            forest_sizes: vec![25, 50, 100, 200],
            boost_rounds: 100,
            boost_learning_rate: 1.0,
            logistic: LogisticParams::default(),
            standardize_trees: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Forest,
    Boost,
    Logistic,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Forest, Component::Boost, Component::Logistic];

    pub fn as_str(self) -> &'static str {
        match self {
            Component::Forest => "random_forest",
            Component::Boost => "adaboost",
            Component::Logistic => "logistic_regression",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VotingModel {
    pub scaler: Standardizer,
    pub forest: RandomForest,
    pub boost: AdaBoost,
    pub logistic: LogisticRegression,
    pub n_classes: usize,
    pub standardize_trees: bool,
}

impl VotingModel {
    /// Fits all three models on `x`/`y` (raw features). Validation rows pick
    /// the forest size and stop logistic regression early.
    pub fn fit(
        x: ArrayView2<f64>,
        y: &[usize],
        validation: Option<(ArrayView2<f64>, &[usize])>,
        n_classes: usize,
        hp: &Hyperparams,
    ) -> Result<Self, MlError> {
        if x.nrows() == 0 {
            return Err(MlError::Empty("training rows"));
        }
        if x.nrows() != y.len() {
            return Err(MlError::Shape(format!("{} rows, {} labels", x.nrows(), y.len())));
        }
        if y.iter().any(|&c| c >= n_classes) {
            return Err(MlError::Shape(format!("label out of range for {n_classes} classes")));
        }
        if hp.n_trees == 0 {
            return Err(MlError::Config("n_trees must be positive".into()));
        }
        let scaler = Standardizer::fit(x);
        let z = scaler.transform(x);
        let tree_x = if hp.standardize_trees { z.clone() } else { x.to_owned() };
        let zval = validation.map(|(vx, vy)| (scaler.transform(vx), vx, vy));

        let mut forest = RandomForest::fit(tree_x.view(), y, n_classes, hp.n_trees, hp.seed);
        let boost = AdaBoost::fit(tree_x.view(), y, n_classes, hp.boost_rounds, hp.boost_learning_rate);
        let logistic = LogisticRegression::fit(
            z.view(),
            y,
            n_classes,
            zval.as_ref().map(|(z, _, vy)| (z.view(), *vy)),
            &hp.logistic,
        );

        if let Some((vz, vx, vy)) = &zval {
            let val_tree = if hp.standardize_trees { vz.view() } else { vx.view() };
            let mut sizes: Vec<usize> = hp.forest_sizes.iter().copied().filter(|&s| s > 0 && s < hp.n_trees).collect();
            sizes.push(hp.n_trees);
            let best = sizes
                .iter()
                .map(|&s| {
                    let p = val_tree.rows().into_iter().map(|r| forest.predict_proba_prefix(r, s));
                    (crate::log_loss(p, vy), s)
                })
                .fold((f64::INFINITY, hp.n_trees), |a, b| if b.0 < a.0 { b } else { a });
            forest.truncate(best.1);
        }
        Ok(VotingModel { scaler, forest, boost, logistic, n_classes, standardize_trees: hp.standardize_trees })
    }

    pub fn component_proba_row(&self, c: Component, x: ArrayView1<f64>) -> Vec<f64> {
        let z = self.scaler.transform_row(x);
        let tree_x = if self.standardize_trees { z.view() } else { x.view() };
        match c {
            Component::Forest => self.forest.predict_proba_row(tree_x),
            Component::Boost => self.boost.predict_proba_row(tree_x),
            Component::Logistic => self.logistic.predict_proba_row(z.view()),
        }
    }

    /// Unweighted mean of the three class distributions.
    pub fn predict_proba_row(&self, x: ArrayView1<f64>) -> Vec<f64> {
        let mut p = vec![0.0; self.n_classes];
        for c in Component::ALL {
            for (a, b) in p.iter_mut().zip(self.component_proba_row(c, x)) {
                *a += b;
            }
        }
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= s);
        p
    }

    pub fn predict_proba(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let rows: Vec<Vec<f64>> = (0..x.nrows()).into_par_iter().map(|i| self.predict_proba_row(x.row(i))).collect();
        let mut out = Array2::zeros((x.nrows(), self.n_classes));
        for (mut o, r) in out.axis_iter_mut(Axis(0)).zip(rows) {
            o.iter_mut().zip(r).for_each(|(a, b)| *a = b);
        }
        out
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<usize> {
        self.predict_proba(x).rows().into_iter().map(|r| crate::argmax(r.as_slice().unwrap())).collect()
    }

    pub fn predict_component(&self, c: Component, x: ArrayView2<f64>) -> Vec<usize> {
        (0..x.nrows()).into_par_iter().map(|i| crate::argmax(&self.component_proba_row(c, x.row(i)))).collect()
    }
}
