//! Classification and attribution over stylometric feature matrices.
//!
//! A [`VotingModel`] averages the class distributions of a random forest,
//! SAMME AdaBoost and multinomial logistic regression. [`shapley`] explains
//! its per-class probabilities; [`report`] aggregates the explanations per
//! class next to the raw class means.
//!
//! All randomness comes from seeded ChaCha streams indexed by work item, so
//! results do not depend on the rayon thread count.

pub mod boost;
pub mod dataset;
pub mod eval;
pub mod forest;
pub mod logistic;
pub mod pipeline;
pub mod report;
pub mod scale;
pub mod shapley;
pub mod split;
pub mod tree;
pub mod voting;

pub use dataset::{read_labels, LabeledDataset};
pub use eval::{accuracy, confusion, macro_f1, per_class_f1};
pub use pipeline::{train_and_evaluate, Evaluation};
pub use report::{class_means, explain_classes, AttributionReport, AttributionRow, ExplainConfig};
pub use shapley::{exact_shapley, relative_error, sample_shapley, ShapleyEstimate};
pub use split::{stratified_split, Split, SplitSpec};
pub use voting::{Component, Hyperparams, VotingModel};

#[derive(Debug, thiserror::Error)]
pub enum MlError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite value for `{feature}` in document `{doc_id}`")]
    NonFinite { doc_id: String, feature: String },
    #[error("no label for document `{0}`")]
    MissingLabel(String),
    #[error("labels line {line}: {message}")]
    Labels { line: usize, message: String },
    #[error("need at least 2 classes, found {0}")]
    TooFewClasses(usize),
    #[error("class `{class}` has {count} examples, need at least {needed}")]
    TooFewExamples { class: String, count: usize, needed: usize },
    #[error("predictions and gold labels differ in length: {pred} vs {gold}")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("no {0}")]
    Empty(&'static str),
    #[error("exact enumeration supports at most {max} features, got {features}")]
    TooManyFeatures { features: usize, max: usize },
    #[error("no rows of class `{0}` to explain")]
    NoRowsToExplain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Index of the largest value; the first one on ties.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

pub fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Mean negative log-probability of the true class, clipped at 1e-15.
pub fn log_loss<I: IntoIterator<Item = Vec<f64>>>(proba: I, y: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut n = 0;
    for (p, &c) in proba.into_iter().zip(y) {
        total -= p[c].max(1e-15).ln();
        n += 1;
    }
    total / n.max(1) as f64
}
