//! Multinomial logistic regression, full-batch gradient descent with L2
//! and early stopping on validation log-loss.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

#[derive(Debug, Clone)]
pub struct LogisticParams {
    pub learning_rate: f64,
    pub l2: f64,
    pub max_epochs: usize,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams { learning_rate: 0.1, l2: 1e-3, max_epochs: 1000, patience: 10 }
    }
}

#[derive(Debug, Clone)]
pub struct LogisticRegression {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
    /// Epoch whose weights were kept (1-based).
    pub best_epoch: usize,
}

fn proba(x: ArrayView2<f64>, w: &Array2<f64>, b: &Array1<f64>) -> Array2<f64> {
    let mut z = x.dot(w) + b;
    for mut row in z.axis_iter_mut(Axis(0)) {
        let p = crate::softmax(row.as_slice().unwrap());
        row.iter_mut().zip(p).for_each(|(a, b)| *a = b);
    }
    z
}

impl LogisticRegression {
    /// Without validation rows, trains for `max_epochs`.
    pub fn fit(
        x: ArrayView2<f64>,
        y: &[usize],
        n_classes: usize,
        validation: Option<(ArrayView2<f64>, &[usize])>,
        params: &LogisticParams,
    ) -> Self {
        let (n, d) = x.dim();
        let mut onehot = Array2::<f64>::zeros((n, n_classes));
        for (i, &c) in y.iter().enumerate() {
            onehot[[i, c]] = 1.0;
        }
        let mut w = Array2::<f64>::zeros((d, n_classes));
        let mut b = Array1::<f64>::zeros(n_classes);
        let mut best = (f64::INFINITY, w.clone(), b.clone(), 0);
        let mut stale = 0;
        for epoch in 1..=params.max_epochs {
            let diff = proba(x, &w, &b) - &onehot;
            let gw = x.t().dot(&diff) / n as f64 + &(&w * params.l2);
            let gb = diff.sum_axis(Axis(0)) / n as f64;
            w.scaled_add(-params.learning_rate, &gw);
            b.scaled_add(-params.learning_rate, &gb);
            if let Some((vx, vy)) = validation {
                let p = proba(vx, &w, &b);
                let loss = crate::log_loss(p.rows().into_iter().map(|r| r.to_vec()), vy);
                if loss < best.0 - 1e-9 {
                    best = (loss, w.clone(), b.clone(), epoch);
                    stale = 0;
                } else {
                    stale += 1;
                    if stale >= params.patience {
                        break;
                    }
                }
            } else {
                best = (0.0, w.clone(), b.clone(), epoch);
            }
        }
        LogisticRegression { weights: best.1, bias: best.2, best_epoch: best.3 }
    }

    pub fn predict_proba_row(&self, x: ArrayView1<f64>) -> Vec<f64> {
        let z = x.dot(&self.weights) + &self.bias;
        crate::softmax(z.as_slice().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn separable_line() {
        let x = array![[-2.0], [-1.0], [1.0], [2.0]];
        let y = [0, 0, 1, 1];
        let m = LogisticRegression::fit(x.view(), &y, 2, None, &LogisticParams::default());
        assert_eq!(m.best_epoch, 1000);
        assert!(m.predict_proba_row(array![1.5].view())[1] > 0.9);
        assert!(m.predict_proba_row(array![-1.5].view())[0] > 0.9);
    }

    #[test]
    fn zero_features_learn_the_prior() {
        let x = Array2::zeros((4, 2));
        let m = LogisticRegression::fit(x.view(), &[0, 1, 1, 1], 2, None, &LogisticParams::default());
        let p = m.predict_proba_row(x.row(0));
        assert!((p[1] - 0.75).abs() < 1e-3, "{p:?}");
    }

    #[test]
    fn early_stopping_keeps_the_best_epoch() {
        // Validation labels contradict training, so loss rises from the start.
        let x = array![[-1.0], [1.0]];
        let v = array![[-1.0], [1.0]];
        let m = LogisticRegression::fit(x.view(), &[0, 1], 2, Some((v.view(), &[1, 0])), &LogisticParams::default());
        assert_eq!(m.best_epoch, 1);
    }
}
