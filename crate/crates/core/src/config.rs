//! Tunables for the whole pipeline. Every default here can be overridden by a
//! config file (all keys optional).

use serde::{Deserialize, Serialize};

use crate::rng::StableHasher;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub pool_size: usize,
    /// Region-of-competence size.
    pub k: usize,
    pub workers: usize,
    pub train_ratio: f64,

    pub perceptron_epochs: usize,
    pub perceptron_lr: f64,
    pub logistic_epochs: usize,
    pub logistic_lr: f64,
    pub lit_lambda: f64,
    /// Std-dev of the random initial weights of LIT members.
    pub lit_init_scale: f64,
    /// Depth cap for the anchor-weighted trees of FLT pools.
    pub flt_max_depth: Option<usize>,
    pub flt_bandwidth_sample: usize,

    pub metades_kp: usize,
    pub metades_gamma: f64,
    pub desmi_p: f64,
    pub mla_eps: f64,

    pub mf_bins: usize,
    pub mf_folds: usize,
    pub mf_cor_threshold: f64,

    pub rf_trees: usize,
    pub rf_max_depth: usize,
    pub knn_k: usize,
    pub win_tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            pool_size: 100,
            k: 7,
            workers: 0,
            train_ratio: 0.75,
            perceptron_epochs: 100,
            perceptron_lr: 1.0,
            logistic_epochs: 200,
            logistic_lr: 0.01,
            lit_lambda: 1.0,
            lit_init_scale: 0.1,
            flt_max_depth: Some(5),
            flt_bandwidth_sample: 200,
            metades_kp: 5,
            metades_gamma: 0.5,
            desmi_p: 0.4,
            mla_eps: 1e-12,
            mf_bins: 10,
            mf_folds: 4,
            mf_cor_threshold: 0.9,
            rf_trees: 100,
            rf_max_depth: 5,
            knn_k: 2,
            win_tol: 1e-12,
        }
    }
}

impl Config {
    /// Hash of every setting that affects a grid result. `workers` is
    /// excluded: it never changes results.
    pub fn grid_hash(&self) -> u64 {
        let mut c = self.clone();
        c.workers = 0;
        let text = serde_json::to_string(&c).expect("config serializes");
        StableHasher::new(0).str(&text).finish()
    }
}
