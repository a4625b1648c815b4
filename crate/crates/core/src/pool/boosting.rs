//! Discrete multiclass AdaBoost (SAMME).

use serde::{Deserialize, Serialize};

use super::{Pool, PoolOptions, PoolScheme};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::learners::{train_perceptron, train_tree, PerceptronParams, TrainedModel, TreeParams};
use crate::rng::derive_indexed;

/// Floor on the weighted error so a perfect round gets a finite, dominant
/// weight instead of an infinite one.
const MIN_ERROR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoostBase {
    Perceptron,
    /// Depth-1 decision tree.
    Stump,
}

/// `ln((1 - err) / err) + ln(L - 1)`.
pub fn samme_alpha(err: f64, n_classes: usize) -> f64 {
    let err = err.max(MIN_ERROR);
    ((1.0 - err) / err).ln() + ((n_classes - 1) as f64).ln()
}

/// Rounds stop once a learner is perfect (kept) or no better than chance
/// (`err >= 1 - 1/L`, discarded). Fewer than two retained rounds is a
/// [`Error::DegeneratePool`].
pub fn adaboost_samme(
    base: BoostBase,
    train: &Dataset,
    rounds: usize,
    seed: u64,
    opts: &PoolOptions,
) -> Result<Pool> {
    if rounds < 2 {
        return Err(Error::InvalidPool(format!("{rounds} boosting rounds < 2")));
    }
    let n = train.n_rows();
    let l = train.n_classes;
    let chance = 1.0 - 1.0 / l as f64;
    let mut w = vec![1.0 / n as f64; n];
    let mut models = Vec::new();
    let mut alphas = Vec::new();

    for t in 0..rounds {
        let round_seed = derive_indexed(seed, t as u64);
        let model = match base {
            BoostBase::Perceptron => TrainedModel::Perceptron(train_perceptron(
                &train.features,
                &train.labels,
                l,
                Some(&w),
                PerceptronParams {
                    epochs: opts.perceptron_epochs,
                    lr: opts.perceptron_lr,
                    seed: round_seed,
                },
            )),
            BoostBase::Stump => TrainedModel::Tree(train_tree(
                &train.features,
                &train.labels,
                l,
                Some(&w),
                TreeParams {
                    max_depth: Some(1),
                    feature_subsample: None,
                    seed: round_seed,
                },
            )?),
        };
        let miss: Vec<bool> = (0..n)
            .map(|i| model.predict(train.row(i)) != train.labels[i])
            .collect();
        let total: f64 = w.iter().sum();
        let err: f64 = w
            .iter()
            .zip(&miss)
            .filter(|(_, m)| **m)
            .map(|(wi, _)| wi)
            .sum::<f64>()
            / total;

        if err >= chance {
            break;
        }
        let alpha = samme_alpha(err, l);
        models.push(model);
        alphas.push(alpha);
        if err <= 0.0 {
            break;
        }
        for (wi, m) in w.iter_mut().zip(&miss) {
            if *m {
                *wi *= alpha.exp();
            }
        }
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|wi| *wi /= total);
    }

    if models.len() < 2 {
        return Err(Error::DegeneratePool(models.len()));
    }
    Ok(Pool {
        scheme: match base {
            BoostBase::Perceptron => PoolScheme::BSP,
            BoostBase::Stump => PoolScheme::BSDT,
        },
        models,
        boost_weights: Some(alphas),
        bootstrap: None,
        seed,
    })
}
