//! Meta-models: a random forest for pool recommendation with a fixed
//! method, distance-weighted k-NN otherwise, and a two-stage chain for
//! recommending both.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{MetaDataset, MetaTarget, Scenario};
use crate::config::Config;
use crate::dataset::{Matrix, ScalerParams};
use crate::error::{Error, Result};
use crate::learners::{argmax, knn_neighbors, train_tree, DecisionTree, TreeParams};
use crate::metafeatures::MetaFeatureVector;
use crate::pool::{rf_feature_subsample, PoolScheme};
use crate::rng::{derive_indexed, derive_seed, rng_from};
use crate::selection::DsMethod;

/// Number of labels in either candidate set.
const N_LABELS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSpace {
    Pool,
    Ds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetaClassifier {
    RandomForest {
        max_depth: usize,
        feature_subsample: usize,
        trees: Vec<DecisionTree>,
    },
    Knn {
        k: usize,
        rows: Matrix,
        labels: Vec<usize>,
    },
}

impl MetaClassifier {
    fn fit_forest(x: &Matrix, y: &[usize], n_trees: usize, max_depth: usize, seed: u64) -> Self {
        let n = x.rows();
        let m = rf_feature_subsample(x.cols());
        let trees = (0..n_trees)
            .map(|t| {
                let s = derive_indexed(seed, t as u64);
                let mut rng = rng_from(s);
                let mut counts = vec![0.0; n];
                for _ in 0..n {
                    counts[rng.random_range(0..n)] += 1.0;
                }
                let params = TreeParams {
                    max_depth: Some(max_depth),
                    feature_subsample: Some(m),
                    seed: s,
                };
                train_tree(x, y, N_LABELS, Some(&counts), params).expect("bootstrap is nonempty")
            })
            .collect();
        MetaClassifier::RandomForest {
            max_depth,
            feature_subsample: m,
            trees,
        }
    }

    fn predict(&self, x: &[f64]) -> usize {
        match self {
            MetaClassifier::RandomForest { trees, .. } => {
                let mut p = vec![0.0; N_LABELS];
                for t in trees {
                    for (a, b) in p.iter_mut().zip(t.predict_proba(x)) {
                        *a += b;
                    }
                }
                argmax(&p)
            }
            MetaClassifier::Knn { k, rows, labels } => knn_vote(rows, labels, *k, x),
        }
    }
}

/// Inverse-distance vote over the `k` nearest rows. Exact matches outvote
/// everything else; remaining ties go to the label of the nearest tied
/// neighbour.
fn knn_vote(rows: &Matrix, labels: &[usize], k: usize, x: &[f64]) -> usize {
    let nn = knn_neighbors(rows, x, k).expect("k clamped at fit");
    let exact = nn.distances[0] == 0.0;
    let mut tally = vec![0.0; N_LABELS];
    for (&i, &d) in nn.indices.iter().zip(&nn.distances) {
        let w = if exact {
            if d == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            1.0 / d
        };
        tally[labels[i]] += w;
    }
    let top = tally.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    nn.indices
        .iter()
        .map(|&i| labels[i])
        .find(|&l| tally[l] == top)
        .expect("some neighbour carries the top vote")
}

/// A fitted meta-classifier and the z-scoring of its inputs, fitted on the
/// meta-training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaModel {
    pub label_space: LabelSpace,
    pub scaler: ScalerParams,
    pub classifier: MetaClassifier,
    pub warnings: Vec<String>,
}

impl MetaModel {
    pub fn fit_forest(
        x: &Matrix,
        y: &[usize],
        space: LabelSpace,
        trees: usize,
        depth: usize,
        seed: u64,
    ) -> Self {
        let scaler = ScalerParams::fit(x);
        let xs = scaler.transform_matrix(x);
        MetaModel {
            label_space: space,
            scaler,
            classifier: MetaClassifier::fit_forest(&xs, y, trees, depth, seed),
            warnings: Vec::new(),
        }
    }

    /// `k` is clamped to the number of rows; the clamp is recorded.
    pub fn fit_knn(x: &Matrix, y: &[usize], space: LabelSpace, k: usize) -> Self {
        let scaler = ScalerParams::fit(x);
        let rows = scaler.transform_matrix(x);
        let mut warnings = Vec::new();
        let k_eff = k.min(rows.rows()).max(1);
        if k_eff != k {
            warnings.push(format!("k = {k} clamped to {k_eff} meta-training rows"));
        }
        MetaModel {
            label_space: space,
            scaler,
            classifier: MetaClassifier::Knn {
                k: k_eff,
                rows,
                labels: y.to_vec(),
            },
            warnings,
        }
    }

    pub fn input_dimension(&self) -> usize {
        self.scaler.means.len()
    }

    /// Label index for an unscaled input.
    pub fn predict(&self, input: &[f64]) -> usize {
        self.classifier.predict(&self.scaler.transform_row(input))
    }
}

/// Pool first; the method stage sees the meta-features followed by a
/// one-hot encoding of the pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    pub stage1: MetaModel,
    pub stage2: MetaModel,
}

impl ChainModel {
    pub fn stage2_input(mf: &[f64], pool: PoolScheme) -> Vec<f64> {
        let mut v = mf.to_vec();
        v.extend((0..N_LABELS).map(|i| if i == pool.index() { 1.0 } else { 0.0 }));
        v
    }

    pub fn predict(&self, mf: &[f64]) -> MetaTarget {
        let pool = PoolScheme::ALL[self.stage1.predict(mf)];
        let ds = DsMethod::ALL[self.stage2.predict(&Self::stage2_input(mf, pool))];
        MetaTarget::pair(pool, ds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum RecommenderModel {
    Single(MetaModel),
    Chain(ChainModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommender {
    pub scenario: Scenario,
    pub schema_version: String,
    pub dimension: usize,
    pub model: RecommenderModel,
}

/// Random forest for the fixed-method scenario, k-NN for the others.
pub fn train_recommender(mt: &MetaDataset, cfg: &Config) -> Result<Recommender> {
    if mt.rows.is_empty() {
        return Err(Error::EmptyMetaDataset);
    }
    let rows: Vec<Vec<f64>> = mt.rows.iter().map(|r| r.features.clone()).collect();
    let x = Matrix::from_rows(&rows);
    let pools = || -> Result<Vec<usize>> {
        mt.rows
            .iter()
            .map(|r| {
                r.target
                    .pool
                    .map(PoolScheme::index)
                    .ok_or(Error::IncompleteGrid)
            })
            .collect()
    };
    let methods = || -> Result<Vec<usize>> {
        mt.rows
            .iter()
            .map(|r| {
                r.target
                    .ds
                    .map(DsMethod::index)
                    .ok_or(Error::IncompleteGrid)
            })
            .collect()
    };
    let seed = derive_seed(cfg.seed, &["recommender", &mt.scenario.to_string()]);
    let model = match mt.scenario {
        Scenario::Pool { .. } => RecommenderModel::Single(MetaModel::fit_forest(
            &x,
            &pools()?,
            LabelSpace::Pool,
            cfg.rf_trees,
            cfg.rf_max_depth,
            seed,
        )),
        Scenario::Ds { .. } => RecommenderModel::Single(MetaModel::fit_knn(
            &x,
            &methods()?,
            LabelSpace::Ds,
            cfg.knn_k,
        )),
        Scenario::PoolDs => {
            let p = pools()?;
            let stage2_rows: Vec<Vec<f64>> = rows
                .iter()
                .zip(&p)
                .map(|(r, &pi)| ChainModel::stage2_input(r, PoolScheme::ALL[pi]))
                .collect();
            RecommenderModel::Chain(ChainModel {
                stage1: MetaModel::fit_knn(&x, &p, LabelSpace::Pool, cfg.knn_k),
                stage2: MetaModel::fit_knn(
                    &Matrix::from_rows(&stage2_rows),
                    &methods()?,
                    LabelSpace::Ds,
                    cfg.knn_k,
                ),
            })
        }
    };
    Ok(Recommender {
        scenario: mt.scenario,
        schema_version: mt.schema_version.clone(),
        dimension: mt.dimension(),
        model,
    })
}

pub fn recommend(model: &Recommender, mf: &MetaFeatureVector) -> Result<MetaTarget> {
    if mf.schema_version != model.schema_version || mf.values.len() != model.dimension {
        return Err(Error::SchemaMismatch {
            expected: format!("{} ({} values)", model.schema_version, model.dimension),
            got: format!("{} ({} values)", mf.schema_version, mf.values.len()),
        });
    }
    Ok(match &model.model {
        RecommenderModel::Single(m) => {
            let label = m.predict(&mf.values);
            match m.label_space {
                LabelSpace::Pool => MetaTarget::pool(PoolScheme::ALL[label]),
                LabelSpace::Ds => MetaTarget::ds(DsMethod::ALL[label]),
            }
        }
        RecommenderModel::Chain(c) => c.predict(&mf.values),
    })
}
