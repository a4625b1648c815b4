//! From-scratch base models shared by pools, selection internals,
//! landmarking and the meta-level.

mod knn;
mod logistic;
mod naive_bayes;
mod perceptron;
mod tree;

pub use knn::{euclidean as knn_distance, knn_neighbors, knn_neighbors_excluding, NeighborList};
pub use logistic::{
    logistic_objective, train_logistic, InputGradientPenalty, Logistic, LogisticParams,
};
pub use naive_bayes::{train_gaussian_nb, GaussianNb};
pub use perceptron::{train_perceptron, Perceptron, PerceptronParams};
pub use tree::{train_tree, DecisionTree, TreeNode, TreeParams};

use serde::{Deserialize, Serialize};

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.iter().map(|e| e / total).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Tree(DecisionTree),
    Perceptron(Perceptron),
    GaussianNb(GaussianNb),
    Logistic(Logistic),
}

impl TrainedModel {
    pub fn n_classes(&self) -> usize {
        match self {
            TrainedModel::Tree(m) => m.n_classes,
            TrainedModel::Perceptron(m) => m.n_classes(),
            TrainedModel::GaussianNb(m) => m.n_classes(),
            TrainedModel::Logistic(m) => m.n_classes(),
        }
    }

    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        match self {
            TrainedModel::Tree(m) => m.predict_proba(x),
            TrainedModel::Perceptron(m) => m.predict_proba(x),
            TrainedModel::GaussianNb(m) => m.predict_proba(x),
            TrainedModel::Logistic(m) => m.predict_proba(x),
        }
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        match self {
            TrainedModel::Tree(m) => m.predict(x),
            TrainedModel::Perceptron(m) => m.predict(x),
            TrainedModel::GaussianNb(m) => m.predict(x),
            TrainedModel::Logistic(m) => m.predict(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_ties_low() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(argmax(&[0.0, 0.0]), 0);
    }

    #[test]
    fn softmax_is_simplex() {
        let p = softmax(&[1000.0, 999.0, -5.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|v| *v >= 0.0));
    }
}
