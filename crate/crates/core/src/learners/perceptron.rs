use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{argmax, dot, softmax};
use crate::dataset::Matrix;
use crate::rng::rng_from;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerceptronParams {
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
}

impl Default for PerceptronParams {
    fn default() -> Self {
        PerceptronParams {
            epochs: 100,
            lr: 1.0,
            seed: 0,
        }
    }
}

/// One-vs-rest linear perceptrons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perceptron {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl Perceptron {
    pub fn n_classes(&self) -> usize {
        self.bias.len()
    }

    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| dot(w, x) + b)
            .collect()
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        argmax(&self.scores(x))
    }

    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        softmax(&self.scores(x))
    }
}

/// Mistake-driven updates with a seeded per-epoch shuffle. Sample weights
/// scale each update by `w_i * n / sum(w)`, so uniform weights give the
/// classic rule and zero-weight rows are never learned from.
pub fn train_perceptron(
    x: &Matrix,
    y: &[usize],
    n_classes: usize,
    weights: Option<&[f64]>,
    params: PerceptronParams,
) -> Perceptron {
    let d = x.cols();
    let n = y.len();
    let scale: Vec<f64> = match weights {
        Some(w) => {
            let total: f64 = w.iter().sum();
            w.iter().map(|wi| wi * n as f64 / total).collect()
        }
        None => vec![1.0; n],
    };
    let mut model = Perceptron {
        weights: vec![vec![0.0; d]; n_classes],
        bias: vec![0.0; n_classes],
    };
    let mut rng = rng_from(params.seed);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        let mut mistakes = 0usize;
        for &i in &order {
            if scale[i] <= 0.0 {
                continue;
            }
            let row = x.row(i);
            for c in 0..n_classes {
                let target = if y[i] == c { 1.0 } else { -1.0 };
                let s = dot(&model.weights[c], row) + model.bias[c];
                if target * s <= 0.0 {
                    mistakes += 1;
                    let step = params.lr * scale[i] * target;
                    for (w, v) in model.weights[c].iter_mut().zip(row) {
                        *w += step * v;
                    }
                    model.bias[c] += step;
                }
            }
        }
        if mistakes == 0 {
            break;
        }
    }
    model
}
