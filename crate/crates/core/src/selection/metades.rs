//! META-DES: a Gaussian naive Bayes meta-classifier predicts whether each
//! pool member is competent for a query from five groups of meta-features.
//!
//! For model `i` and instance `x` the meta-vector is
//! `[f1 (K) | f2 (K) | f3 | f4 (Kp) | f5]`:
//! correctness on the region neighbours, posterior of each neighbour's true
//! class, overall local accuracy, correctness on the `Kp` DSEL rows with the
//! most similar output profiles, and the model's confidence on `x`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DsContext, DselOutputs, RegionOfCompetence};
use crate::dataset::Matrix;
use crate::error::{Error, Result};
use crate::learners::{knn_neighbors_excluding, train_gaussian_nb, GaussianNb};
use crate::pool::{most_similar_profiles, OutputProfile};

pub const META_DES_KP: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaDesModel {
    pub nb: GaussianNb,
    pub k: usize,
    pub kp: usize,
    /// Selection threshold on P(competent).
    pub gamma: f64,
    pub dsel_profiles: Vec<OutputProfile>,
    pub seed: u64,
}

impl MetaDesModel {
    pub fn dimension(&self) -> usize {
        meta_dimension(self.k, self.kp)
    }

    pub fn competence(&self, meta_vector: &[f64]) -> f64 {
        self.nb.predict_proba(meta_vector)[1]
    }
}

pub fn meta_dimension(k: usize, kp: usize) -> usize {
    2 * k + kp + 2
}

/// Builds the meta-vector of `model` for one instance given its region
/// neighbours and most-similar profile rows.
pub fn meta_vector(
    out: &DselOutputs,
    model: usize,
    neighbors: &[usize],
    similar: &[usize],
    confidence: f64,
) -> Vec<f64> {
    let mut v = Vec::with_capacity(2 * neighbors.len() + similar.len() + 2);
    let f1: Vec<f64> = neighbors
        .iter()
        .map(|&j| f64::from(u8::from(out.correct(model, j))))
        .collect();
    let f3 = f1.iter().sum::<f64>() / f1.len() as f64;
    v.extend_from_slice(&f1);
    v.extend(
        neighbors
            .iter()
            .map(|&j| out.probas[model][j][out.labels[j]]),
    );
    v.push(f3);
    v.extend(
        similar
            .iter()
            .map(|&j| f64::from(u8::from(out.correct(model, j)))),
    );
    v.push(confidence);
    v
}

fn max_of(p: &[f64]) -> f64 {
    p.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Meta-training pairs for every (model, DSEL row); each row is left out of
/// its own neighbour and profile candidates.
pub fn metades_training_pairs(
    ctx: &DsContext<'_>,
    k: usize,
    kp: usize,
) -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
    let n = ctx.dsel.n_rows();
    let need = k.max(kp) + 1;
    if n < need {
        return Err(Error::DselTooSmall { have: n, need });
    }
    let out = &ctx.outputs;
    let profiles = out.profiles();
    let per_row: Vec<Vec<(Vec<f64>, usize)>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let roc = knn_neighbors_excluding(&ctx.dsel.features, ctx.dsel.row(j), k, Some(j))
                .expect("size checked above");
            let similar = most_similar_profiles(&profiles, &profiles[j], kp, Some(j));
            (0..out.n_models())
                .map(|i| {
                    let v = meta_vector(out, i, &roc.indices, &similar, max_of(&out.probas[i][j]));
                    (v, usize::from(out.correct(i, j)))
                })
                .collect()
        })
        .collect();
    Ok(per_row.into_iter().flatten().unzip())
}

pub fn metades_fit(
    ctx: &DsContext<'_>,
    k: usize,
    kp: usize,
    gamma: f64,
    seed: u64,
) -> Result<MetaDesModel> {
    let (vectors, labels) = metades_training_pairs(ctx, k, kp)?;
    if labels.iter().all(|&y| y == labels[0]) {
        return Err(Error::SingleMetaClass);
    }
    let nb = train_gaussian_nb(&Matrix::from_rows(&vectors), &labels, 2);
    Ok(MetaDesModel {
        nb,
        k,
        kp,
        gamma,
        dsel_profiles: ctx.outputs.profiles(),
        seed,
    })
}

/// Meta-vectors of every pool member at `x`.
pub fn query_meta_vectors(
    meta: &MetaDesModel,
    ctx: &DsContext<'_>,
    x: &[f64],
    roc: &RegionOfCompetence,
) -> Vec<Vec<f64>> {
    let query = OutputProfile(ctx.pool.predict_all(x));
    let similar = most_similar_profiles(&meta.dsel_profiles, &query, meta.kp, None);
    let neighbors = &roc.indices()[..meta.k.min(roc.k())];
    ctx.pool
        .models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            meta_vector(
                &ctx.outputs,
                i,
                neighbors,
                &similar,
                max_of(&m.predict_proba(x)),
            )
        })
        .collect()
}

/// Models with P(competent) above the threshold; the whole pool when none
/// qualifies.
pub fn metades_select(
    meta: &MetaDesModel,
    ctx: &DsContext<'_>,
    x: &[f64],
    roc: &RegionOfCompetence,
) -> Vec<usize> {
    let chosen: Vec<usize> = query_meta_vectors(meta, ctx, x, roc)
        .iter()
        .enumerate()
        .filter(|(_, v)| meta.competence(v) > meta.gamma)
        .map(|(i, _)| i)
        .collect();
    if chosen.is_empty() {
        (0..ctx.pool.len()).collect()
    } else {
        chosen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::learners::{DecisionTree, TrainedModel, TreeNode};
    use crate::pool::{Pool, PoolScheme};
    use crate::selection::{ds_predict, region_of_competence, DsMethod, DsOptions};

    fn stump(threshold: f64, flipped: bool) -> TrainedModel {
        let (lo, hi) = if flipped { (1, 0) } else { (0, 1) };
        let leaf = |c: usize| {
            let mut freq = vec![0.2, 0.2];
            freq[c] = 0.8;
            TreeNode::Leaf { freq }
        };
        TrainedModel::Tree(DecisionTree {
            n_classes: 2,
            nodes: vec![
                TreeNode::Split {
                    feature: 0,
                    threshold,
                    left: 1,
                    right: 2,
                },
                leaf(lo),
                leaf(hi),
            ],
        })
    }

    fn setup() -> (Dataset, Pool) {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64]).collect();
        let y = (0..40).map(|i| usize::from(i >= 20)).collect();
        let ds = Dataset::new(
            "line",
            crate::dataset::Matrix::from_rows(&rows),
            y,
            vec!["x".into()],
            2,
        )
        .unwrap();
        let pool = Pool {
            scheme: PoolScheme::BDT,
            // always right, always wrong, right only on the upper half
            models: vec![stump(19.5, false), stump(19.5, true), stump(-1.0, false)],
            boost_weights: None,
            bootstrap: None,
            seed: 0,
        };
        (ds, pool)
    }

    #[test]
    fn dimension_and_f3() {
        let (ds, pool) = setup();
        let ctx = DsContext::new(&pool, &ds, DsOptions::default()).unwrap();
        let (vectors, labels) = metades_training_pairs(&ctx, 7, 5).unwrap();
        assert_eq!(vectors.len(), 40 * 3);
        assert_eq!(labels.len(), vectors.len());
        for v in &vectors {
            assert_eq!(v.len(), 21);
            assert_eq!(v.len(), meta_dimension(7, 5));
            let mean_f1 = v[..7].iter().sum::<f64>() / 7.0;
            assert_eq!(v[14], mean_f1);
        }
    }

    #[test]
    fn competent_model_scores_higher_and_is_always_selected() {
        let (ds, pool) = setup();
        let ctx = DsContext::new(&pool, &ds, DsOptions::default()).unwrap();
        let meta = metades_fit(&ctx, 7, 5, 0.5, 0).unwrap();
        assert_eq!(meta.dimension(), 21);
        for q in [2.5, 10.5, 19.25, 25.5, 38.5] {
            let roc = region_of_competence(&ds, &[q], 7).unwrap();
            let vecs = query_meta_vectors(&meta, &ctx, &[q], &roc);
            assert!(meta.competence(&vecs[0]) > meta.competence(&vecs[1]));
            let sel = metades_select(&meta, &ctx, &[q], &roc);
            assert!(sel.contains(&0), "query {q}: {sel:?}");
            assert_eq!(sel, metades_select(&meta, &ctx, &[q], &roc));
            assert_eq!(
                ds_predict(DsMethod::MetaDes, &ctx, Some(&meta), &[q]).unwrap(),
                usize::from(q >= 20.0)
            );
        }
    }

    #[test]
    fn unreachable_threshold_falls_back_to_pool() {
        let (ds, pool) = setup();
        let ctx = DsContext::new(&pool, &ds, DsOptions::default()).unwrap();
        let mut meta = metades_fit(&ctx, 7, 5, 0.5, 0).unwrap();
        meta.gamma = 1.0;
        let roc = region_of_competence(&ds, &[3.0], 7).unwrap();
        assert_eq!(metades_select(&meta, &ctx, &[3.0], &roc), vec![0, 1, 2]);
    }

    #[test]
    fn errors() {
        let (ds, pool) = setup();
        let ctx = DsContext::new(&pool, &ds, DsOptions::default()).unwrap();
        assert!(matches!(
            ds_predict(DsMethod::MetaDes, &ctx, None, &[1.0]),
            Err(Error::MissingMetaModel)
        ));
        let small = ds.subset(&[0, 1, 2, 3, 36, 37, 38]);
        let ctx = DsContext::new(&pool, &small, DsOptions::default()).unwrap();
        assert!(matches!(
            metades_fit(&ctx, 7, 5, 0.5, 0),
            Err(Error::DselTooSmall { .. })
        ));
        let right = Pool {
            models: vec![stump(19.5, false), stump(19.5, false)],
            ..pool.clone()
        };
        let ctx = DsContext::new(&right, &ds, DsOptions::default()).unwrap();
        assert!(matches!(
            metades_fit(&ctx, 7, 5, 0.5, 0),
            Err(Error::SingleMetaClass)
        ));
    }
}
