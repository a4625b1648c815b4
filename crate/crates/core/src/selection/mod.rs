//! Dynamic selection: per-query choice of one model or a sub-ensemble from
//! a pool, driven by local competence on a K-nearest-neighbour region of
//! the dynamic-selection set (DSEL).

mod metades;
mod methods;

pub use metades::{
    meta_dimension, meta_vector, metades_fit, metades_select, metades_training_pairs,
    query_meta_vectors, MetaDesModel, META_DES_KP,
};
pub use methods::{
    des_mi_select, des_p_select, knora_e_select, knora_u_vote, majority_vote, mla_select,
    ola_select,
};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::learners::{knn_neighbors, NeighborList};
use crate::pool::{OutputProfile, Pool};

pub const DEFAULT_K: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DsMethod {
    #[serde(rename = "OLA")]
    Ola,
    #[serde(rename = "MLA")]
    Mla,
    #[serde(rename = "KNORA-E")]
    KnoraE,
    #[serde(rename = "KNORA-U")]
    KnoraU,
    #[serde(rename = "META-DES")]
    MetaDes,
    #[serde(rename = "DES-MI")]
    DesMi,
    #[serde(rename = "DES-P")]
    DesP,
}

impl DsMethod {
    pub const ALL: [DsMethod; 7] = [
        DsMethod::Ola,
        DsMethod::Mla,
        DsMethod::KnoraE,
        DsMethod::KnoraU,
        DsMethod::MetaDes,
        DsMethod::DesMi,
        DsMethod::DesP,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            DsMethod::Ola => "OLA",
            DsMethod::Mla => "MLA",
            DsMethod::KnoraE => "KNORA-E",
            DsMethod::KnoraU => "KNORA-U",
            DsMethod::MetaDes => "META-DES",
            DsMethod::DesMi => "DES-MI",
            DsMethod::DesP => "DES-P",
        }
    }
}

impl fmt::Display for DsMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DsMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('_', "-");
        DsMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown DS method `{s}`")))
    }
}

/// Settings shared by the selection methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DsOptions {
    pub k: usize,
    pub kp: usize,
    pub gamma: f64,
    pub desmi_p: f64,
    pub mla_eps: f64,
}

impl From<&Config> for DsOptions {
    fn from(c: &Config) -> Self {
        DsOptions {
            k: c.k,
            kp: c.metades_kp,
            gamma: c.metades_gamma,
            desmi_p: c.desmi_p,
            mla_eps: c.mla_eps,
        }
    }
}

impl Default for DsOptions {
    fn default() -> Self {
        DsOptions::from(&Config::default())
    }
}

/// The K nearest DSEL rows of a query with their true labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionOfCompetence {
    pub neighbors: NeighborList,
    pub labels: Vec<usize>,
}

impl RegionOfCompetence {
    pub fn k(&self) -> usize {
        self.neighbors.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.neighbors.indices
    }

    pub fn distances(&self) -> &[f64] {
        &self.neighbors.distances
    }
}

pub fn region_of_competence(dsel: &Dataset, x: &[f64], k: usize) -> Result<RegionOfCompetence> {
    if dsel.n_rows() < k {
        return Err(Error::DselTooSmall {
            have: dsel.n_rows(),
            need: k,
        });
    }
    let neighbors = knn_neighbors(&dsel.features, x, k)?;
    let labels = neighbors.indices.iter().map(|&i| dsel.labels[i]).collect();
    Ok(RegionOfCompetence { neighbors, labels })
}

/// Pool outputs on every DSEL row, computed once and shared by all methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DselOutputs {
    /// `preds[model][row]`.
    pub preds: Vec<Vec<usize>>,
    /// `probas[model][row][class]`.
    pub probas: Vec<Vec<Vec<f64>>>,
    pub labels: Vec<usize>,
    pub n_classes: usize,
}

impl DselOutputs {
    pub fn compute(pool: &Pool, dsel: &Dataset) -> DselOutputs {
        let per_model: Vec<(Vec<usize>, Vec<Vec<f64>>)> = pool
            .models
            .par_iter()
            .map(|m| {
                let probas: Vec<Vec<f64>> = dsel
                    .features
                    .iter_rows()
                    .map(|r| m.predict_proba(r))
                    .collect();
                let preds = dsel.features.iter_rows().map(|r| m.predict(r)).collect();
                (preds, probas)
            })
            .collect();
        let (preds, probas) = per_model.into_iter().unzip();
        DselOutputs {
            preds,
            probas,
            labels: dsel.labels.clone(),
            n_classes: dsel.n_classes,
        }
    }

    /// Outputs from hard predictions alone; posteriors are one-hot.
    pub fn from_predictions(preds: Vec<Vec<usize>>, labels: Vec<usize>, n_classes: usize) -> Self {
        let probas = preds
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&p| {
                        let mut v = vec![0.0; n_classes];
                        v[p] = 1.0;
                        v
                    })
                    .collect()
            })
            .collect();
        DselOutputs {
            preds,
            probas,
            labels,
            n_classes,
        }
    }

    pub fn n_models(&self) -> usize {
        self.preds.len()
    }

    pub fn correct(&self, model: usize, row: usize) -> bool {
        self.preds[model][row] == self.labels[row]
    }

    /// `table[model][neighbor]`: whether the model is right on each region
    /// neighbour, neighbours in distance order.
    pub fn local_correctness(&self, roc: &RegionOfCompetence) -> Vec<Vec<bool>> {
        (0..self.n_models())
            .map(|i| roc.indices().iter().map(|&j| self.correct(i, j)).collect())
            .collect()
    }

    pub fn profiles(&self) -> Vec<OutputProfile> {
        (0..self.labels.len())
            .map(|j| OutputProfile(self.preds.iter().map(|p| p[j]).collect()))
            .collect()
    }
}

/// Everything a selection method needs at query time for one pool.
#[derive(Debug, Clone)]
pub struct DsContext<'a> {
    pub pool: &'a Pool,
    pub dsel: &'a Dataset,
    pub outputs: DselOutputs,
    pub options: DsOptions,
}

impl<'a> DsContext<'a> {
    pub fn new(pool: &'a Pool, dsel: &'a Dataset, options: DsOptions) -> Result<Self> {
        if dsel.n_rows() < options.k {
            return Err(Error::DselTooSmall {
                have: dsel.n_rows(),
                need: options.k,
            });
        }
        Ok(DsContext {
            pool,
            dsel,
            outputs: DselOutputs::compute(pool, dsel),
            options,
        })
    }

    pub fn region(&self, x: &[f64]) -> Result<RegionOfCompetence> {
        region_of_competence(self.dsel, x, self.options.k)
    }
}

/// Label for `x` under `method`. `meta` must be present exactly for
/// META-DES.
pub fn ds_predict(
    method: DsMethod,
    ctx: &DsContext<'_>,
    meta: Option<&MetaDesModel>,
    x: &[f64],
) -> Result<usize> {
    let roc = ctx.region(x)?;
    ds_predict_with_region(method, ctx, meta, x, &roc)
}

/// As [`ds_predict`] with a precomputed region of competence.
pub fn ds_predict_with_region(
    method: DsMethod,
    ctx: &DsContext<'_>,
    meta: Option<&MetaDesModel>,
    x: &[f64],
    roc: &RegionOfCompetence,
) -> Result<usize> {
    let out = &ctx.outputs;
    let l = out.n_classes;
    let query = ctx.pool.predict_all(x);
    let label = match method {
        DsMethod::Ola => query[ola_select(out, roc)],
        DsMethod::Mla => query[mla_select(out, roc, ctx.options.mla_eps)],
        DsMethod::KnoraE => majority_vote(&query, &knora_e_select(out, roc), l),
        DsMethod::KnoraU => knora_u_vote(out, roc, &query, l),
        DsMethod::DesP => majority_vote(&query, &des_p_select(out, roc), l),
        DsMethod::DesMi => majority_vote(&query, &des_mi_select(out, roc, ctx.options.desmi_p), l),
        DsMethod::MetaDes => {
            let meta = meta.ok_or(Error::MissingMetaModel)?;
            majority_vote(&query, &metades_select(meta, ctx, x, roc), l)
        }
    };
    Ok(label)
}
