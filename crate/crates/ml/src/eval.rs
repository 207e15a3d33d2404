//! Classification scores.

use crate::MlError;

fn check(pred: &[usize], gold: &[usize]) -> Result<(), MlError> {
    if pred.len() != gold.len() {
        return Err(MlError::LengthMismatch { pred: pred.len(), gold: gold.len() });
    }
    if gold.is_empty() {
        return Err(MlError::Empty("predictions"));
    }
    Ok(())
}

/// `[gold][pred]` counts over classes `0..n_classes`.
pub fn confusion(pred: &[usize], gold: &[usize], n_classes: usize) -> Result<Vec<Vec<usize>>, MlError> {
    check(pred, gold)?;
    let mut m = vec![vec![0; n_classes]; n_classes];
    for (&p, &g) in pred.iter().zip(gold) {
        if p >= n_classes || g >= n_classes {
            return Err(MlError::Shape(format!("label {} out of range for {n_classes} classes", p.max(g))));
        }
        m[g][p] += 1;
    }
    Ok(m)
}

/// F1 per class; `None` for classes absent from both gold and predictions.
/// A class that is present but never correctly predicted scores 0.
pub fn per_class_f1(pred: &[usize], gold: &[usize], n_classes: usize) -> Result<Vec<Option<f64>>, MlError> {
    let m = confusion(pred, gold, n_classes)?;
    Ok((0..n_classes)
        .map(|c| {
            let tp = m[c][c] as f64;
            let fp = (0..n_classes).map(|g| m[g][c]).sum::<usize>() as f64 - tp;
            let fn_ = m[c].iter().sum::<usize>() as f64 - tp;
            if tp + fp + fn_ == 0.0 {
                None
            } else {
                Some(2.0 * tp / (2.0 * tp + fp + fn_))
            }
        })
        .collect())
}

/// Unweighted mean of per-class F1 over classes seen in gold or predictions.
pub fn macro_f1(pred: &[usize], gold: &[usize], n_classes: usize) -> Result<f64, MlError> {
    let f: Vec<f64> = per_class_f1(pred, gold, n_classes)?.into_iter().flatten().collect();
    Ok(f.iter().sum::<f64>() / f.len() as f64)
}

pub fn accuracy(pred: &[usize], gold: &[usize]) -> Result<f64, MlError> {
    check(pred, gold)?;
    Ok(pred.iter().zip(gold).filter(|(p, g)| p == g).count() as f64 / gold.len() as f64)
}
