//! Split, fit, and score on held-out documents.

use std::io::Write;

use stylo_core::matrix::{encode_doc_id, format_value};

use crate::dataset::LabeledDataset;
use crate::eval::{macro_f1, per_class_f1};
use crate::split::{stratified_split, Split, SplitSpec};
use crate::voting::{Component, Hyperparams, VotingModel};
use crate::MlError;

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub split: Split,
    pub model: VotingModel,
    /// Predictions for `split.test`, in the same order.
    pub test_pred: Vec<usize>,
    pub test_gold: Vec<usize>,
    pub macro_f1: f64,
    pub class_f1: Vec<Option<f64>>,
    pub component_macro_f1: Vec<(Component, f64)>,
}

pub fn train_and_evaluate(ds: &LabeledDataset, split: &SplitSpec, hp: &Hyperparams) -> Result<Evaluation, MlError> {
    let parts = stratified_split(&ds.y, ds.n_classes(), split).map_err(|e| match e {
        MlError::TooFewExamples { class, count, needed } => MlError::TooFewExamples {
            class: class.parse::<usize>().map(|c| ds.class_names[c].clone()).unwrap_or(class),
            count,
            needed,
        },
        e => e,
    })?;
    let (xt, yt) = ds.subset(&parts.train);
    let (xv, yv) = ds.subset(&parts.validation);
    let (xs, ys) = ds.subset(&parts.test);
    let model = VotingModel::fit(xt.view(), &yt, Some((xv.view(), &yv)), ds.n_classes(), hp)?;
    let test_pred = model.predict(xs.view());
    let k = ds.n_classes();
    let component_macro_f1 = Component::ALL
        .iter()
        .map(|&c| Ok((c, macro_f1(&model.predict_component(c, xs.view()), &ys, k)?)))
        .collect::<Result<_, MlError>>()?;
    Ok(Evaluation {
        macro_f1: macro_f1(&test_pred, &ys, k)?,
        class_f1: per_class_f1(&test_pred, &ys, k)?,
        component_macro_f1,
        split: parts,
        model,
        test_pred,
        test_gold: ys,
    })
}

impl Evaluation {
    /// Two-column `key\tvalue` summary.
    pub fn write_summary<W: Write>(&self, ds: &LabeledDataset, mut w: W) -> std::io::Result<()> {
        writeln!(w, "key\tvalue")?;
        writeln!(w, "train_docs\t{}", self.split.train.len())?;
        writeln!(w, "validation_docs\t{}", self.split.validation.len())?;
        writeln!(w, "test_docs\t{}", self.split.test.len())?;
        writeln!(w, "forest_trees\t{}", self.model.forest.n_trees())?;
        writeln!(w, "boost_stumps\t{}", self.model.boost.n_stumps())?;
        writeln!(w, "logistic_epochs\t{}", self.model.logistic.best_epoch)?;
        writeln!(w, "macro_f1\t{}", format_value(self.macro_f1))?;
        for (c, f) in &self.component_macro_f1 {
            writeln!(w, "macro_f1.{}\t{}", c.as_str(), format_value(*f))?;
        }
        for (name, f) in ds.class_names.iter().zip(&self.class_f1) {
            let v = f.map(format_value).unwrap_or_else(|| "NA".into());
            writeln!(w, "f1.{name}\t{v}")?;
        }
        Ok(())
    }

    /// `doc_id,gold,predicted` for the test documents.
    pub fn write_predictions<W: Write>(&self, ds: &LabeledDataset, mut w: W) -> std::io::Result<()> {
        writeln!(w, "doc_id,gold,predicted")?;
        for ((&i, &g), &p) in self.split.test.iter().zip(&self.test_gold).zip(&self.test_pred) {
            writeln!(w, "{},{},{}", encode_doc_id(&ds.doc_ids[i]), ds.class_names[g], ds.class_names[p])?;
        }
        Ok(())
    }
}
