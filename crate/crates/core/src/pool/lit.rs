//! Locally independent training for linear members: each new logistic model
//! is penalised for input gradients aligned with those of earlier members.

use super::{Pool, PoolOptions, PoolScheme};
use crate::dataset::Dataset;
use crate::learners::{dot, train_logistic, InputGradientPenalty, LogisticParams, TrainedModel};
use crate::rng::derive_indexed;

/// Squared cosine similarity; 0 when either vector is zero.
pub fn cos_squared(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (dot(a, a).sqrt(), dot(b, b).sqrt());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let c = dot(a, b) / (na * nb);
    c * c
}

/// `sum over frozen members of mean_j cos^2(g_j, h_j)`.
pub struct CosSquaredPenalty {
    /// `frozen[m][j]`: input gradient of frozen member `m` at row `j`.
    pub frozen: Vec<Vec<Vec<f64>>>,
}

impl InputGradientPenalty for CosSquaredPenalty {
    fn evaluate(&self, grads: &[Vec<f64>]) -> (f64, Vec<Vec<f64>>) {
        let n = grads.len() as f64;
        let mut value = 0.0;
        let mut out: Vec<Vec<f64>> = grads.iter().map(|g| vec![0.0; g.len()]).collect();
        for member in &self.frozen {
            for ((g, h), o) in grads.iter().zip(member).zip(out.iter_mut()) {
                let (ng, nh) = (dot(g, g).sqrt(), dot(h, h).sqrt());
                if ng == 0.0 || nh == 0.0 {
                    continue;
                }
                let c = dot(g, h) / (ng * nh);
                value += c * c / n;
                // d cos / d g = h / (|g||h|) - cos * g / |g|^2
                let k = 2.0 * c / n;
                for ((oi, gi), hi) in o.iter_mut().zip(g).zip(h) {
                    *oi += k * (hi / (ng * nh) - c * gi / (ng * ng));
                }
            }
        }
        (value, out)
    }
}

/// Trains `size` logistic models in sequence; model `m` carries the
/// cos^2 penalty against the frozen models `0..m`.
pub fn lit_train_pool(
    train: &Dataset,
    size: usize,
    lambda: f64,
    seed: u64,
    opts: &PoolOptions,
) -> Pool {
    let mut penalty = CosSquaredPenalty { frozen: Vec::new() };
    let mut models = Vec::with_capacity(size);
    for m in 0..size {
        let params = LogisticParams {
            epochs: opts.logistic_epochs,
            lr: opts.logistic_lr,
            lambda,
            init_scale: opts.lit_init_scale,
            seed: derive_indexed(seed, m as u64),
        };
        let model = train_logistic(
            &train.features,
            &train.labels,
            train.n_classes,
            params,
            Some(&penalty),
        );
        if lambda != 0.0 {
            penalty.frozen.push(
                train
                    .features
                    .iter_rows()
                    .map(|r| model.input_gradient(r))
                    .collect(),
            );
        }
        models.push(TrainedModel::Logistic(model));
    }
    Pool {
        scheme: PoolScheme::LIT,
        models,
        boost_weights: None,
        bootstrap: None,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_identities() {
        let g = [0.3, -1.2, 2.0];
        assert!((cos_squared(&g, &g) - 1.0).abs() < 1e-12);
        assert_eq!(cos_squared(&[1.0, 0.0], &[0.0, 5.0]), 0.0);
        assert_eq!(cos_squared(&[0.0, 0.0], &[1.0, 1.0]), 0.0);
        assert_eq!(
            cos_squared(&[1.0, 2.0], &[3.0, -1.0]),
            cos_squared(&[3.0, -1.0], &[1.0, 2.0])
        );
    }

    #[test]
    fn penalty_gradient_matches_finite_differences() {
        let pen = CosSquaredPenalty {
            frozen: vec![vec![vec![1.0, 0.5], vec![-0.3, 2.0]]],
        };
        let grads = vec![vec![0.7, -0.2], vec![1.1, 0.4]];
        let (_, analytic) = pen.evaluate(&grads);
        let h = 1e-6;
        for j in 0..2 {
            for k in 0..2 {
                let mut up = grads.clone();
                let mut dn = grads.clone();
                up[j][k] += h;
                dn[j][k] -= h;
                let fd = (pen.evaluate(&up).0 - pen.evaluate(&dn).0) / (2.0 * h);
                assert!((fd - analytic[j][k]).abs() < 1e-6);
            }
        }
    }

    fn toy() -> Dataset {
        use crate::dataset::{synth_dataset, SynthSpec};
        synth_dataset(
            &SynthSpec {
                n: 60,
                d: 2,
                classes: 3,
                cluster_std: 1.0,
                imbalance: 0.0,
                label_noise: 0.0,
                informative: 2,
            },
            17,
        )
        .unwrap()
    }

    fn mean_abs_cos(pool: &Pool, ds: &Dataset) -> f64 {
        let grads: Vec<Vec<Vec<f64>>> = pool
            .models
            .iter()
            .map(|m| match m {
                TrainedModel::Logistic(l) => ds
                    .features
                    .iter_rows()
                    .map(|r| l.input_gradient(r))
                    .collect(),
                _ => unreachable!(),
            })
            .collect();
        let (mut total, mut count) = (0.0, 0.0);
        for a in 0..grads.len() {
            for b in a + 1..grads.len() {
                for j in 0..ds.n_rows() {
                    total += cos_squared(&grads[a][j], &grads[b][j]).sqrt();
                    count += 1.0;
                }
            }
        }
        total / count
    }

    #[test]
    fn total_loss_gradient_matches_central_differences() {
        use crate::learners::{logistic_objective, Logistic};
        let ds = toy();
        let frozen = train_logistic(
            &ds.features,
            &ds.labels,
            3,
            LogisticParams {
                init_scale: 0.5,
                seed: 1,
                ..Default::default()
            },
            None,
        );
        let pen = CosSquaredPenalty {
            frozen: vec![ds
                .features
                .iter_rows()
                .map(|r| frozen.input_gradient(r))
                .collect()],
        };
        let model = train_logistic(
            &ds.features,
            &ds.labels,
            3,
            LogisticParams {
                init_scale: 0.5,
                seed: 2,
                epochs: 5,
                ..Default::default()
            },
            None,
        );
        let lambda = 1.0;
        let (_, gw, gb) = logistic_objective(&model, &ds.features, &ds.labels, lambda, Some(&pen));
        let loss =
            |m: &Logistic| logistic_objective(m, &ds.features, &ds.labels, lambda, Some(&pen)).0;
        let h = 1e-6;
        let mut worst: f64 = 0.0;
        for c in 0..3 {
            for k in 0..2 {
                let (mut up, mut dn) = (model.clone(), model.clone());
                up.weights[c][k] += h;
                dn.weights[c][k] -= h;
                worst = worst.max(((loss(&up) - loss(&dn)) / (2.0 * h) - gw[c][k]).abs());
            }
            let (mut up, mut dn) = (model.clone(), model.clone());
            up.bias[c] += h;
            dn.bias[c] -= h;
            worst = worst.max(((loss(&up) - loss(&dn)) / (2.0 * h) - gb[c]).abs());
        }
        assert!(worst < 1e-5, "max abs diff {worst}");
    }

    #[test]
    fn penalty_lowers_gradient_alignment() {
        let ds = toy();
        let opts = PoolOptions::default();
        let plain = lit_train_pool(&ds, 5, 0.0, 3, &opts);
        let lit = lit_train_pool(&ds, 5, 1.0, 3, &opts);
        let (a, b) = (mean_abs_cos(&plain, &ds), mean_abs_cos(&lit, &ds));
        assert!(b < a, "lambda=1 mean |cos| {b} not below lambda=0 {a}");
    }

    #[test]
    fn zero_lambda_members_are_independent() {
        let ds = toy();
        let opts = PoolOptions::default();
        let pool = lit_train_pool(&ds, 3, 0.0, 3, &opts);
        for (m, model) in pool.models.iter().enumerate() {
            let solo = train_logistic(
                &ds.features,
                &ds.labels,
                3,
                LogisticParams {
                    epochs: opts.logistic_epochs,
                    lr: opts.logistic_lr,
                    lambda: 0.0,
                    init_scale: opts.lit_init_scale,
                    seed: derive_indexed(3, m as u64),
                },
                None,
            );
            assert_eq!(model, &TrainedModel::Logistic(solo));
        }
    }
}
