//! Dataset characterisation: a fixed, versioned vector of meta-features
//! computed from a training partition only.

mod complexity;
mod info;
mod landmarking;
mod model;
mod stats;

pub use complexity::{fisher_ratio_max, loo_1nn_error, mst_borderline_fraction};
pub use info::discretize;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dataset::{Dataset, Matrix};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "mfs-1";

/// Canonical feature order of schema `mfs-1`.
pub const SCHEMA: [&str; 55] = [
    // general
    "nr_inst",
    "nr_attr",
    "nr_class",
    "attr_to_inst",
    "freq_class.mean",
    "freq_class.sd",
    // statistical
    "mean.mean",
    "mean.sd",
    "sd.mean",
    "sd.sd",
    "skewness.mean",
    "skewness.sd",
    "kurtosis.mean",
    "kurtosis.sd",
    "cor_abs.mean",
    "cor_abs.sd",
    "iq_range.mean",
    "iq_range.sd",
    "var.mean",
    "var.sd",
    "range.mean",
    "range.sd",
    "sparsity.mean",
    "sparsity.sd",
    "nr_outliers",
    "nr_cor_attr",
    // information-theoretic
    "attr_ent.mean",
    "attr_ent.sd",
    "class_ent",
    "joint_ent.mean",
    "joint_ent.sd",
    "mut_inf.mean",
    "mut_inf.sd",
    "eq_num_attr",
    "ns_ratio",
    // model-based
    "leaves",
    "nodes",
    "tree_depth.mean",
    "tree_depth.sd",
    "leaves_per_class.mean",
    "leaves_per_class.sd",
    "nodes_per_attr",
    // landmarking
    "best_node",
    "worst_node",
    "random_node",
    "one_nn",
    "naive_bayes",
    // complexity
    "f1",
    "f2",
    "f3",
    "n1",
    "n3",
    "t2",
    "c1",
    "c2",
];

pub fn schema_index(name: &str) -> Option<usize> {
    SCHEMA.iter().position(|n| *n == name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaFeatureVector {
    pub schema_version: String,
    pub values: Vec<f64>,
    /// `true` where the raw value was non-finite and replaced by 0.
    pub imputed: Vec<bool>,
}

impl MetaFeatureVector {
    pub fn names(&self) -> &'static [&'static str] {
        &SCHEMA
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        schema_index(name).map(|i| self.values[i])
    }

    pub fn check_schema(&self, version: &str) -> Result<()> {
        if self.schema_version != version || self.values.len() != SCHEMA.len() {
            return Err(Error::SchemaMismatch {
                expected: format!("{version} ({} values)", SCHEMA.len()),
                got: format!("{} ({} values)", self.schema_version, self.values.len()),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaFeatureOptions {
    pub bins: usize,
    pub folds: usize,
    pub cor_threshold: f64,
}

impl From<&Config> for MetaFeatureOptions {
    fn from(c: &Config) -> Self {
        MetaFeatureOptions {
            bins: c.mf_bins,
            folds: c.mf_folds,
            cor_threshold: c.mf_cor_threshold,
        }
    }
}

impl Default for MetaFeatureOptions {
    fn default() -> Self {
        MetaFeatureOptions::from(&Config::default())
    }
}

/// Population mean and standard deviation; `(0, 0)` for an empty list.
pub fn summarize_values(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Summary of the finite entries; `(NaN, NaN)` when there are none, so the
/// feature is imputed and flagged.
pub(crate) fn summarize_defined(values: &[f64]) -> (f64, f64) {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        summarize_values(&finite)
    }
}

/// Non-finite entries become 0; the mask marks them.
pub fn impute_vector(raw: &[f64]) -> (Vec<f64>, Vec<bool>) {
    raw.iter()
        .map(|v| {
            if v.is_finite() {
                (*v, false)
            } else {
                (0.0, true)
            }
        })
        .unzip()
}

/// Rows sorted by (label, features) so every downstream computation is
/// independent of the input row order.
fn canonical(train: &Dataset) -> Dataset {
    let mut order: Vec<usize> = (0..train.n_rows()).collect();
    order.sort_by(|&a, &b| {
        train.labels[a].cmp(&train.labels[b]).then_with(|| {
            train
                .row(a)
                .iter()
                .zip(train.row(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    train.subset(&order)
}

pub(crate) struct Ctx<'a> {
    pub x: &'a Matrix,
    pub y: &'a [usize],
    pub n_classes: usize,
    pub opts: MetaFeatureOptions,
    pub seed: u64,
}

/// Extracts the `mfs-1` vector. Reads nothing but `train`.
pub fn extract_meta_features(
    train: &Dataset,
    seed: u64,
    opts: &MetaFeatureOptions,
) -> MetaFeatureVector {
    let ds = canonical(train);
    let ctx = Ctx {
        x: &ds.features,
        y: &ds.labels,
        n_classes: ds.n_classes,
        opts: *opts,
        seed,
    };
    let mut raw = Vec::with_capacity(SCHEMA.len());
    stats::general(&ctx, &mut raw);
    stats::statistical(&ctx, &mut raw);
    info::info_theoretic(&ctx, &mut raw);
    model::model_based(&ctx, &mut raw);
    landmarking::landmarking(&ctx, &mut raw);
    complexity::complexity(&ctx, &mut raw);
    debug_assert_eq!(raw.len(), SCHEMA.len());
    let (values, imputed) = impute_vector(&raw);
    MetaFeatureVector {
        schema_version: SCHEMA_VERSION.to_string(),
        values,
        imputed,
    }
}
