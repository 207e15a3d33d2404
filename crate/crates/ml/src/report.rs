//! Per-class attribution summaries.

use std::io::Write;

use ndarray::{Array2, ArrayView2};
use stylo_core::matrix::format_value;

use crate::dataset::LabeledDataset;
use crate::shapley::sample_shapley;
use crate::voting::VotingModel;
use crate::MlError;

/// `[class][feature]` mean of the raw features.
pub fn class_means(x: ArrayView2<f64>, y: &[usize], n_classes: usize) -> Array2<f64> {
    let mut sums = Array2::zeros((n_classes, x.ncols()));
    let mut counts = vec![0usize; n_classes];
    for (row, &c) in x.rows().into_iter().zip(y) {
        let mut s = sums.row_mut(c);
        s += &row;
        counts[c] += 1;
    }
    for (c, &n) in counts.iter().enumerate() {
        if n > 0 {
            sums.row_mut(c).mapv_inplace(|v| v / n as f64);
        } else {
            sums.row_mut(c).fill(f64::NAN);
        }
    }
    sums
}

#[derive(Debug, Clone)]
pub struct ExplainConfig {
    /// Explained rows per class, taken in order from the candidate rows.
    pub rows_per_class: usize,
    pub n_permutations: usize,
    pub seed: u64,
    /// Keep only this many features per class, by |mean Shapley value|.
    pub top: Option<usize>,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        ExplainConfig { rows_per_class: 10, n_permutations: 500, seed: 0, top: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributionRow {
    pub class: String,
    pub metric_id: String,
    /// Mean Shapley value for P(class) over the explained rows of that class.
    pub shapley_mean: f64,
    pub class_mean: f64,
    pub description: String,
}

#[derive(Debug, Clone, Default)]
pub struct AttributionReport {
    pub rows: Vec<AttributionRow>,
}

impl AttributionReport {
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "class\tmetric_id\tshapley_mean\tclass_mean\tdescription")?;
        for r in &self.rows {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                r.class,
                r.metric_id,
                format_value(r.shapley_mean),
                format_value(r.class_mean),
                r.description.replace(['\t', '\n'], " ")
            )?;
        }
        Ok(())
    }
}

/// For every class c, explains P(c) on the rows of class c among
/// `explain_rows` against the `background_rows`. Rows within a class are
/// sorted by descending mean Shapley value.
pub fn explain_classes(
    model: &VotingModel,
    ds: &LabeledDataset,
    explain_rows: &[usize],
    background_rows: &[usize],
    describe: &dyn Fn(&str) -> String,
    cfg: &ExplainConfig,
) -> Result<AttributionReport, MlError> {
    if background_rows.is_empty() {
        return Err(MlError::Empty("background rows"));
    }
    let background = ds.x.select(ndarray::Axis(0), background_rows);
    let means = class_means(ds.x.view(), &ds.y, ds.n_classes());
    let d = ds.x.ncols();
    let mut report = AttributionReport::default();
    for (c, name) in ds.class_names.iter().enumerate() {
        let rows: Vec<usize> =
            explain_rows.iter().copied().filter(|&i| ds.y[i] == c).take(cfg.rows_per_class).collect();
        if rows.is_empty() {
            return Err(MlError::NoRowsToExplain(name.clone()));
        }
        let f = |z: &[f64]| model.predict_proba_row(ndarray::ArrayView1::from(z))[c];
        let mut acc = vec![0.0; d];
        for &i in &rows {
            let seed = cfg.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let x = ds.x.row(i).to_vec();
            let est = sample_shapley(&f, &x, background.view(), cfg.n_permutations, seed)?;
            for (a, v) in acc.iter_mut().zip(est.values) {
                *a += v / rows.len() as f64;
            }
        }
        let mut class_rows: Vec<AttributionRow> = (0..d)
            .map(|j| AttributionRow {
                class: name.clone(),
                metric_id: ds.feature_ids[j].clone(),
                shapley_mean: acc[j],
                class_mean: means[[c, j]],
                description: describe(&ds.feature_ids[j]),
            })
            .collect();
        if let Some(k) = cfg.top {
            class_rows.sort_by(|a, b| b.shapley_mean.abs().total_cmp(&a.shapley_mean.abs()));
            class_rows.truncate(k);
        }
        class_rows.sort_by(|a, b| b.shapley_mean.total_cmp(&a.shapley_mean));
        report.rows.extend(class_rows);
    }
    Ok(report)
}
