//! Labelled feature matrices.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use ndarray::{Array2, ArrayView1};
use stylo_core::FeatureMatrix;

use crate::MlError;

/// Feature rows with one class label each. Class ids index `class_names`,
/// which is sorted so that the id assignment does not depend on row order.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub doc_ids: Vec<String>,
    pub feature_ids: Vec<String>,
    pub x: Array2<f64>,
    pub y: Vec<usize>,
    pub class_names: Vec<String>,
}

impl LabeledDataset {
    pub fn new(
        doc_ids: Vec<String>,
        feature_ids: Vec<String>,
        x: Array2<f64>,
        labels: &[String],
    ) -> Result<Self, MlError> {
        if x.nrows() != labels.len() || x.nrows() != doc_ids.len() {
            return Err(MlError::Shape(format!(
                "{} rows, {} labels, {} doc ids",
                x.nrows(),
                labels.len(),
                doc_ids.len()
            )));
        }
        if x.ncols() != feature_ids.len() {
            return Err(MlError::Shape(format!("{} columns, {} feature ids", x.ncols(), feature_ids.len())));
        }
        if let Some((r, c)) = x.indexed_iter().find(|(_, v)| !v.is_finite()).map(|(ix, _)| ix) {
            return Err(MlError::NonFinite { doc_id: doc_ids[r].clone(), feature: feature_ids[c].clone() });
        }
        let mut class_names: Vec<String> = labels.to_vec();
        class_names.sort();
        class_names.dedup();
        let index: HashMap<&str, usize> = class_names.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let y = labels.iter().map(|l| index[l.as_str()]).collect();
        let ds = LabeledDataset { doc_ids, feature_ids, x, y, class_names };
        ds.check_classes(2)?;
        Ok(ds)
    }

    /// Joins a feature matrix with a `doc_id,label` table. Every document in
    /// the matrix needs a label; extra labels are ignored.
    pub fn from_matrix(matrix: &FeatureMatrix, labels: &BTreeMap<String, String>) -> Result<Self, MlError> {
        let mut names = Vec::with_capacity(matrix.rows());
        for id in &matrix.doc_ids {
            match labels.get(id) {
                Some(l) => names.push(l.clone()),
                None => return Err(MlError::MissingLabel(id.clone())),
            }
        }
        let x = Array2::from_shape_fn((matrix.rows(), matrix.cols()), |(i, j)| matrix.values[i][j]);
        Self::new(matrix.doc_ids.clone(), matrix.metric_ids.clone(), x, &names)
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n_classes()];
        for &y in &self.y {
            c[y] += 1;
        }
        c
    }

    /// At least two classes with at least `min_per_class` examples each.
    pub fn check_classes(&self, min_per_class: usize) -> Result<(), MlError> {
        if self.n_classes() < 2 {
            return Err(MlError::TooFewClasses(self.n_classes()));
        }
        for (name, &n) in self.class_names.iter().zip(&self.class_counts()) {
            if n < min_per_class {
                return Err(MlError::TooFewExamples { class: name.clone(), count: n, needed: min_per_class });
            }
        }
        Ok(())
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.x.row(i)
    }

    /// Rows `idx` as a new matrix plus their labels.
    pub fn subset(&self, idx: &[usize]) -> (Array2<f64>, Vec<usize>) {
        (self.x.select(ndarray::Axis(0), idx), idx.iter().map(|&i| self.y[i]).collect())
    }
}

/// Reads a two-column `doc_id,label` CSV with a header row.
pub fn read_labels<R: Read>(reader: R) -> Result<BTreeMap<String, String>, MlError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut out = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| MlError::Labels { line, message: e.to_string() })?;
        if rec.len() != 2 {
            return Err(MlError::Labels { line, message: format!("expected 2 fields, found {}", rec.len()) });
        }
        let id = stylo_core::matrix::decode_doc_id(rec[0].trim());
        let label = rec[1].trim().to_string();
        if label.is_empty() {
            return Err(MlError::Labels { line, message: format!("empty label for `{id}`") });
        }
        if out.insert(id.clone(), label).is_some() {
            return Err(MlError::Labels { line, message: format!("duplicate doc_id `{id}`") });
        }
    }
    Ok(out)
}
