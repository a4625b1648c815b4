//! Multinomial logistic regression trained by full-batch gradient descent,
//! with an optional penalty on input gradients.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{argmax, dot, softmax};
use crate::dataset::Matrix;
use crate::rng::rng_from;

/// A penalty on the per-row input gradients of the predicted-class logit.
pub trait InputGradientPenalty: Sync {
    /// Returns the penalty value and its gradient with respect to each
    /// row's input-gradient vector.
    fn evaluate(&self, input_grads: &[Vec<f64>]) -> (f64, Vec<Vec<f64>>);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub epochs: usize,
    pub lr: f64,
    pub lambda: f64,
    /// Std-dev of the Gaussian initial weights; 0 starts from all zeros.
    pub init_scale: f64,
    pub seed: u64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            epochs: 200,
            lr: 0.01,
            lambda: 0.0,
            init_scale: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Logistic {
    /// One row per class.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl Logistic {
    pub fn n_classes(&self) -> usize {
        self.bias.len()
    }

    pub fn logits(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| dot(w, x) + b)
            .collect()
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        argmax(&self.logits(x))
    }

    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        softmax(&self.logits(x))
    }

    /// Gradient of the predicted-class logit with respect to the input. For a
    /// linear model this is that class's weight row.
    pub fn input_gradient(&self, x: &[f64]) -> Vec<f64> {
        self.weights[self.predict(x)].clone()
    }
}

/// Mean cross-entropy plus `lambda * penalty`, and its gradient with respect
/// to weights and bias. The predicted class used for input gradients is
/// treated as locally constant.
pub fn logistic_objective(
    model: &Logistic,
    x: &Matrix,
    y: &[usize],
    lambda: f64,
    penalty: Option<&dyn InputGradientPenalty>,
) -> (f64, Vec<Vec<f64>>, Vec<f64>) {
    let n = y.len() as f64;
    let l = model.n_classes();
    let d = x.cols();
    let mut gw = vec![vec![0.0; d]; l];
    let mut gb = vec![0.0; l];
    let mut loss = 0.0;
    let mut predicted = Vec::with_capacity(y.len());
    for (i, &yi) in y.iter().enumerate() {
        let row = x.row(i);
        let z = model.logits(row);
        predicted.push(argmax(&z));
        let p = softmax(&z);
        loss -= p[yi].max(f64::MIN_POSITIVE).ln();
        for c in 0..l {
            let r = (p[c] - f64::from(u8::from(c == yi))) / n;
            gb[c] += r;
            for (g, v) in gw[c].iter_mut().zip(row) {
                *g += r * v;
            }
        }
    }
    loss /= n;

    if let Some(pen) = penalty.filter(|_| lambda != 0.0) {
        let grads: Vec<Vec<f64>> = predicted
            .iter()
            .map(|&c| model.weights[c].clone())
            .collect();
        let (value, dg) = pen.evaluate(&grads);
        loss += lambda * value;
        for (c, g) in predicted.iter().zip(&dg) {
            for (w, v) in gw[*c].iter_mut().zip(g) {
                *w += lambda * v;
            }
        }
    }
    (loss, gw, gb)
}

pub fn train_logistic(
    x: &Matrix,
    y: &[usize],
    n_classes: usize,
    params: LogisticParams,
    penalty: Option<&dyn InputGradientPenalty>,
) -> Logistic {
    let d = x.cols();
    let mut rng = rng_from(params.seed);
    let mut model = Logistic {
        weights: (0..n_classes)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        params.init_scale * z
                    })
                    .collect()
            })
            .collect(),
        bias: vec![0.0; n_classes],
    };
    for _ in 0..params.epochs {
        let (_, gw, gb) = logistic_objective(&model, x, y, params.lambda, penalty);
        for (w, g) in model.weights.iter_mut().zip(&gw) {
            for (wi, gi) in w.iter_mut().zip(g) {
                *wi -= params.lr * gi;
            }
        }
        for (b, g) in model.bias.iter_mut().zip(&gb) {
            *b -= params.lr * g;
        }
    }
    model
}
