//! The seven pool-generation schemes and output profiles.

mod boosting;
mod flt;
mod lit;

pub use boosting::{adaboost_samme, samme_alpha, BoostBase};
pub use flt::{flt_bandwidth, flt_weights};
pub use lit::{cos_squared, lit_train_pool, CosSquaredPenalty};

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::learners::{
    argmax, train_perceptron, train_tree, PerceptronParams, TrainedModel, TreeParams,
};
use crate::rng::{derive_indexed, rng_from};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PoolScheme {
    /// Bagging with perceptrons.
    BP,
    /// Bagging with decision trees.
    BDT,
    /// SAMME boosting with perceptrons.
    BSP,
    /// SAMME boosting with decision stumps.
    BSDT,
    RF,
    /// Forest of local trees.
    FLT,
    /// Locally independent training.
    LIT,
}

impl PoolScheme {
    pub const ALL: [PoolScheme; 7] = [
        PoolScheme::BP,
        PoolScheme::BDT,
        PoolScheme::BSP,
        PoolScheme::BSDT,
        PoolScheme::RF,
        PoolScheme::FLT,
        PoolScheme::LIT,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PoolScheme::BP => "BP",
            PoolScheme::BDT => "BDT",
            PoolScheme::BSP => "BSP",
            PoolScheme::BSDT => "BSDT",
            PoolScheme::RF => "RF",
            PoolScheme::FLT => "FLT",
            PoolScheme::LIT => "LIT",
        }
    }
}

impl fmt::Display for PoolScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PoolScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PoolScheme::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pool scheme `{s}`")))
    }
}

/// Hyperparameters of the base learners inside pools.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolOptions {
    pub perceptron_epochs: usize,
    pub perceptron_lr: f64,
    pub logistic_epochs: usize,
    pub logistic_lr: f64,
    pub lit_lambda: f64,
    pub lit_init_scale: f64,
    pub flt_max_depth: Option<usize>,
    pub flt_bandwidth_sample: usize,
}

impl From<&Config> for PoolOptions {
    fn from(c: &Config) -> Self {
        PoolOptions {
            perceptron_epochs: c.perceptron_epochs,
            perceptron_lr: c.perceptron_lr,
            logistic_epochs: c.logistic_epochs,
            logistic_lr: c.logistic_lr,
            lit_lambda: c.lit_lambda,
            lit_init_scale: c.lit_init_scale,
            flt_max_depth: c.flt_max_depth,
            flt_bandwidth_sample: c.flt_bandwidth_sample,
        }
    }
}

impl Default for PoolOptions {
    fn default() -> Self {
        PoolOptions::from(&Config::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pool {
    pub scheme: PoolScheme,
    pub models: Vec<TrainedModel>,
    /// SAMME round weights, boosting schemes only.
    pub boost_weights: Option<Vec<f64>>,
    /// Bootstrap row indices per model, bagging schemes only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<Vec<Vec<usize>>>,
    pub seed: u64,
}

impl Pool {
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.models[0].n_classes()
    }

    /// Hard prediction of every member.
    pub fn predict_all(&self, x: &[f64]) -> Vec<usize> {
        self.models.iter().map(|m| m.predict(x)).collect()
    }

    /// Static combination: alpha-weighted vote for boosted pools, plain
    /// majority otherwise.
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut tally = vec![0.0; self.n_classes()];
        for (i, m) in self.models.iter().enumerate() {
            let w = self.boost_weights.as_ref().map_or(1.0, |a| a[i]);
            tally[m.predict(x)] += w;
        }
        argmax(&tally)
    }
}

/// Hard predictions of every pool member on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputProfile(pub Vec<usize>);

impl OutputProfile {
    /// Number of matching entries.
    pub fn similarity(&self, other: &OutputProfile) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a == b).count()
    }
}

pub fn output_profiles(pool: &Pool, ds: &Dataset) -> Vec<OutputProfile> {
    (0..ds.n_rows())
        .map(|j| OutputProfile(pool.predict_all(ds.row(j))))
        .collect()
}

/// Indices of the `k` profiles most similar to `query`; ties go to the lower
/// row index. `exclude` skips one candidate row.
pub fn most_similar_profiles(
    profiles: &[OutputProfile],
    query: &OutputProfile,
    k: usize,
    exclude: Option<usize>,
) -> Vec<usize> {
    let mut scored: Vec<(usize, usize)> = profiles
        .iter()
        .enumerate()
        .filter(|(j, _)| Some(*j) != exclude)
        .map(|(j, p)| (p.similarity(query), j))
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    scored.into_iter().take(k).map(|(_, j)| j).collect()
}

fn bootstrap_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = rng_from(seed);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

#[derive(Clone, Copy)]
enum BagBase {
    Perceptron,
    Tree,
    RandomTree(usize),
}

fn bagging(
    scheme: PoolScheme,
    base: BagBase,
    train: &Dataset,
    size: usize,
    seed: u64,
    opts: &PoolOptions,
) -> Pool {
    let n = train.n_rows();
    let members: Vec<(TrainedModel, Vec<usize>)> = (0..size)
        .into_par_iter()
        .map(|m| {
            let model_seed = derive_indexed(seed, m as u64);
            let idx = bootstrap_indices(n, model_seed);
            let x = train.features.select_rows(&idx);
            let y: Vec<usize> = idx.iter().map(|&i| train.labels[i]).collect();
            let learner_seed = derive_indexed(model_seed, 1);
            let model = match base {
                BagBase::Perceptron => TrainedModel::Perceptron(train_perceptron(
                    &x,
                    &y,
                    train.n_classes,
                    None,
                    PerceptronParams {
                        epochs: opts.perceptron_epochs,
                        lr: opts.perceptron_lr,
                        seed: learner_seed,
                    },
                )),
                BagBase::Tree | BagBase::RandomTree(_) => {
                    let feature_subsample = match base {
                        BagBase::RandomTree(m) => Some(m),
                        _ => None,
                    };
                    let params = TreeParams {
                        max_depth: None,
                        feature_subsample,
                        seed: learner_seed,
                    };
                    TrainedModel::Tree(
                        train_tree(&x, &y, train.n_classes, None, params)
                            .expect("bootstrap rows carry unit weight"),
                    )
                }
            };
            (model, idx)
        })
        .collect();
    let (models, bootstrap) = members.into_iter().unzip();
    Pool {
        scheme,
        models,
        boost_weights: None,
        bootstrap: Some(bootstrap),
        seed,
    }
}

/// Candidate features per split for random forests: `ceil(sqrt(d))`.
pub fn rf_feature_subsample(d: usize) -> usize {
    ((d as f64).sqrt().ceil() as usize).max(1)
}

pub fn generate_pool(
    scheme: PoolScheme,
    train: &Dataset,
    size: usize,
    seed: u64,
    opts: &PoolOptions,
) -> Result<Pool> {
    if size < 2 {
        return Err(Error::InvalidPool(format!("pool size {size} < 2")));
    }
    match scheme {
        PoolScheme::BP => Ok(bagging(
            scheme,
            BagBase::Perceptron,
            train,
            size,
            seed,
            opts,
        )),
        PoolScheme::BDT => Ok(bagging(scheme, BagBase::Tree, train, size, seed, opts)),
        PoolScheme::RF => {
            let m = rf_feature_subsample(train.n_features());
            Ok(bagging(
                scheme,
                BagBase::RandomTree(m),
                train,
                size,
                seed,
                opts,
            ))
        }
        PoolScheme::BSP => adaboost_samme(BoostBase::Perceptron, train, size, seed, opts),
        PoolScheme::BSDT => adaboost_samme(BoostBase::Stump, train, size, seed, opts),
        PoolScheme::FLT => Ok(flt::flt_pool(train, size, seed, opts)),
        PoolScheme::LIT => Ok(lit_train_pool(train, size, opts.lit_lambda, seed, opts)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{synth_dataset, SynthSpec};

    pub(crate) fn toy(seed: u64) -> Dataset {
        synth_dataset(
            &SynthSpec {
                n: 60,
                d: 4,
                classes: 3,
                cluster_std: 1.5,
                imbalance: 0.2,
                label_noise: 0.05,
                informative: 3,
            },
            seed,
        )
        .unwrap()
    }

    #[test]
    fn every_scheme_fills_the_pool() {
        let ds = toy(1);
        for scheme in PoolScheme::ALL {
            match generate_pool(scheme, &ds, 12, 3, &PoolOptions::default()) {
                Ok(pool) => {
                    assert_eq!(pool.scheme, scheme);
                    if matches!(scheme, PoolScheme::BSP | PoolScheme::BSDT) {
                        assert!(pool.len() >= 2 && pool.len() <= 12);
                    } else {
                        assert_eq!(pool.len(), 12);
                    }
                    assert!(pool.models.iter().all(|m| m.n_classes() == 3));
                }
                Err(Error::DegeneratePool(_)) => {
                    assert!(matches!(scheme, PoolScheme::BSP | PoolScheme::BSDT))
                }
                Err(e) => panic!("{scheme}: {e}"),
            }
        }
    }

    #[test]
    fn default_pool_has_one_hundred_members() {
        let ds = toy(2);
        for scheme in [PoolScheme::BP, PoolScheme::RF, PoolScheme::FLT] {
            let pool = generate_pool(scheme, &ds, 100, 1, &PoolOptions::default()).unwrap();
            assert_eq!(pool.len(), 100);
        }
    }

    #[test]
    fn rf_subsample_width() {
        assert_eq!(rf_feature_subsample(9), 3);
        assert_eq!(rf_feature_subsample(10), 4);
        assert_eq!(rf_feature_subsample(1), 1);
    }

    #[test]
    fn bootstrap_samples_have_n_rows_and_differ() {
        let ds = toy(3);
        let pool = generate_pool(PoolScheme::BP, &ds, 100, 9, &PoolOptions::default()).unwrap();
        let boots = pool.bootstrap.as_ref().unwrap();
        let n = ds.n_rows();
        let mut unique_total = 0.0;
        for b in boots {
            assert_eq!(b.len(), n);
            let mut u = b.clone();
            u.sort_unstable();
            u.dedup();
            unique_total += u.len() as f64 / n as f64;
        }
        let mut sorted: Vec<Vec<usize>> = boots
            .iter()
            .map(|b| {
                let mut s = b.clone();
                s.sort_unstable();
                s
            })
            .collect();
        sorted.dedup();
        assert_eq!(sorted.len(), 100);
        let mean_unique = unique_total / 100.0;
        assert!(
            (mean_unique - (1.0 - (-1.0f64).exp())).abs() < 0.05,
            "{mean_unique}"
        );
    }

    #[test]
    fn regeneration_is_identical() {
        let ds = toy(4);
        for scheme in PoolScheme::ALL {
            let a = generate_pool(scheme, &ds, 6, 21, &PoolOptions::default());
            let b = generate_pool(scheme, &ds, 6, 21, &PoolOptions::default());
            match (a, b) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                _ => panic!("{scheme} nondeterministic"),
            }
        }
    }

    #[test]
    fn size_below_two_rejected() {
        assert!(generate_pool(PoolScheme::BP, &toy(1), 1, 0, &PoolOptions::default()).is_err());
    }

    #[test]
    fn profiles_zip_member_predictions() {
        let ds = toy(5);
        let pool = generate_pool(PoolScheme::BDT, &ds, 2, 0, &PoolOptions::default()).unwrap();
        let sub = ds.subset(&[0, 1, 2, 3]);
        let profiles = output_profiles(&pool, &sub);
        assert_eq!(profiles.len(), 4);
        for (j, p) in profiles.iter().enumerate() {
            assert_eq!(p.0.len(), 2);
            assert_eq!(p.0[0], pool.models[0].predict(sub.row(j)));
            assert_eq!(p.0[1], pool.models[1].predict(sub.row(j)));
            assert_eq!(p.similarity(p), 2);
        }
        let again = output_profiles(&pool, &sub);
        assert_eq!(profiles, again);
    }

    #[test]
    fn profile_ranking_ties_to_lower_row() {
        let profiles = vec![
            OutputProfile(vec![0, 1, 1]),
            OutputProfile(vec![1, 1, 1]),
            OutputProfile(vec![0, 1, 1]),
            OutputProfile(vec![0, 0, 0]),
        ];
        let q = OutputProfile(vec![0, 1, 1]);
        assert_eq!(most_similar_profiles(&profiles, &q, 3, None), vec![0, 2, 1]);
        assert_eq!(most_similar_profiles(&profiles, &q, 2, Some(0)), vec![2, 1]);
    }
}
