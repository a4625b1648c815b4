//! Meta-learning recommendation of a pool scheme, a selection method, or
//! both, plus the majority and average baselines.
//!
//! A meta-dataset holds one row per training dataset: its meta-feature
//! vector and the best configuration found on its grid.

mod model;
mod table;

pub use model::{
    recommend, train_recommender, ChainModel, LabelSpace, MetaClassifier, MetaModel, Recommender,
    RecommenderModel,
};
pub use table::{read_meta_dataset, write_meta_dataset};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::GridResult;
use crate::metafeatures::MetaFeatureVector;
use crate::pool::PoolScheme;
use crate::selection::DsMethod;

/// Which part of the configuration is recommended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum Scenario {
    /// Recommend a pool scheme for a fixed selection method.
    Pool { fixed_ds: DsMethod },
    /// Recommend a selection method for a fixed pool scheme.
    Ds { fixed_pool: PoolScheme },
    /// Recommend both, pool first.
    PoolDs,
}

impl Scenario {
    /// Every scenario: seven of each fixed kind, then the chained one.
    pub fn all() -> Vec<Scenario> {
        let mut out: Vec<Scenario> = DsMethod::ALL
            .iter()
            .map(|&d| Scenario::Pool { fixed_ds: d })
            .collect();
        out.extend(
            PoolScheme::ALL
                .iter()
                .map(|&p| Scenario::Ds { fixed_pool: p }),
        );
        out.push(Scenario::PoolDs);
        out
    }

    pub fn label(&self) -> &'static str {
        match self {
            Scenario::Pool { .. } => "MLRS-P",
            Scenario::Ds { .. } => "MLRS-DS",
            Scenario::PoolDs => "MLRS-PDS",
        }
    }

    /// Candidate cells in canonical order (pool order, then method order).
    pub fn candidates(&self) -> Vec<(PoolScheme, DsMethod)> {
        match *self {
            Scenario::Pool { fixed_ds } => PoolScheme::ALL.iter().map(|&p| (p, fixed_ds)).collect(),
            Scenario::Ds { fixed_pool } => DsMethod::ALL.iter().map(|&d| (fixed_pool, d)).collect(),
            Scenario::PoolDs => PoolScheme::ALL
                .iter()
                .flat_map(|&p| DsMethod::ALL.iter().map(move |&d| (p, d)))
                .collect(),
        }
    }

    /// The target naming `cell` under this scenario.
    pub fn target_of(&self, cell: (PoolScheme, DsMethod)) -> MetaTarget {
        match self {
            Scenario::Pool { .. } => MetaTarget::pool(cell.0),
            Scenario::Ds { .. } => MetaTarget::ds(cell.1),
            Scenario::PoolDs => MetaTarget::pair(cell.0, cell.1),
        }
    }

    /// Grid cell a target refers to; `None` when the target does not fit
    /// the scenario.
    pub fn cell_of(&self, t: &MetaTarget) -> Option<(PoolScheme, DsMethod)> {
        match (*self, t.pool, t.ds) {
            (Scenario::Pool { fixed_ds }, Some(p), None) => Some((p, fixed_ds)),
            (Scenario::Ds { fixed_pool }, None, Some(d)) => Some((fixed_pool, d)),
            (Scenario::PoolDs, Some(p), Some(d)) => Some((p, d)),
            _ => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Pool { fixed_ds } => write!(f, "MLRS-P[{fixed_ds}]"),
            Scenario::Ds { fixed_pool } => write!(f, "MLRS-DS[{fixed_pool}]"),
            Scenario::PoolDs => f.write_str("MLRS-PDS"),
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown scenario {s:?}"));
        let s = s.trim();
        if s.eq_ignore_ascii_case("MLRS-PDS") || s.eq_ignore_ascii_case("pds") {
            return Ok(Scenario::PoolDs);
        }
        let (head, rest) = s.split_once('[').ok_or_else(bad)?;
        let fixed = rest.strip_suffix(']').ok_or_else(bad)?;
        match head.to_ascii_uppercase().as_str() {
            "MLRS-P" | "P" => Ok(Scenario::Pool {
                fixed_ds: fixed.parse()?,
            }),
            "MLRS-DS" | "DS" => Ok(Scenario::Ds {
                fixed_pool: fixed.parse()?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetaTarget {
    pub pool: Option<PoolScheme>,
    pub ds: Option<DsMethod>,
}

impl MetaTarget {
    pub fn pool(p: PoolScheme) -> Self {
        MetaTarget {
            pool: Some(p),
            ds: None,
        }
    }

    pub fn ds(d: DsMethod) -> Self {
        MetaTarget {
            pool: None,
            ds: Some(d),
        }
    }

    pub fn pair(p: PoolScheme, d: DsMethod) -> Self {
        MetaTarget {
            pool: Some(p),
            ds: Some(d),
        }
    }
}

impl fmt::Display for MetaTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.pool, self.ds) {
            (Some(p), Some(d)) => write!(f, "({p}, {d})"),
            (Some(p), None) => write!(f, "{p}"),
            (None, Some(d)) => write!(f, "{d}"),
            (None, None) => f.write_str("-"),
        }
    }
}

/// Best accuracy over `candidates`; `None` if any is excluded.
pub fn best_accuracy(grid: &GridResult, candidates: &[(PoolScheme, DsMethod)]) -> Option<f64> {
    candidates
        .iter()
        .map(|&(p, d)| grid.accuracy(p, d))
        .try_fold(f64::NEG_INFINITY, |m, a| a.map(|a| m.max(a)))
}

/// Whether `cell` reaches the best accuracy over `candidates` within `tol`.
/// `None` if any candidate is excluded.
pub fn is_win(
    grid: &GridResult,
    candidates: &[(PoolScheme, DsMethod)],
    cell: (PoolScheme, DsMethod),
    tol: f64,
) -> Option<bool> {
    let best = best_accuracy(grid, candidates)?;
    Some(grid.accuracy(cell.0, cell.1)? >= best - tol)
}

/// The best candidate of the scenario; ties go to the earliest candidate in
/// canonical order.
pub fn label_meta_target(grid: &GridResult, scenario: &Scenario, tol: f64) -> Result<MetaTarget> {
    let candidates = scenario.candidates();
    let best = best_accuracy(grid, &candidates).ok_or(Error::IncompleteGrid)?;
    let cell = candidates
        .into_iter()
        .find(|&(p, d)| grid.accuracy(p, d).is_some_and(|a| a >= best - tol))
        .expect("the maximum is attained");
    Ok(scenario.target_of(cell))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaRow {
    pub dataset_id: String,
    pub features: Vec<f64>,
    pub target: MetaTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub dataset_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaDataset {
    pub scenario: Scenario,
    pub schema_version: String,
    pub feature_names: Vec<String>,
    pub rows: Vec<MetaRow>,
    pub excluded: Vec<Exclusion>,
}

impl MetaDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.feature_names.len()
    }
}

/// A dataset's grid and the meta-features of its train partition.
#[derive(Debug, Clone, Copy)]
pub struct MetaSource<'a> {
    pub grid: &'a GridResult,
    pub meta_features: &'a MetaFeatureVector,
}

/// One row per source. Sources with an excluded candidate cell go to the
/// exclusion list instead.
pub fn build_meta_dataset(
    sources: &[MetaSource<'_>],
    scenario: Scenario,
    tol: f64,
) -> Result<MetaDataset> {
    if sources.len() < 2 {
        return Err(Error::CorpusTooSmall(sources.len()));
    }
    let version = sources[0].meta_features.schema_version.clone();
    let candidates = scenario.candidates();
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for s in sources {
        s.meta_features.check_schema(&version)?;
        let id = s.grid.dataset_id.clone();
        if let Some(reason) = s.grid.exclusion(&candidates) {
            excluded.push(Exclusion {
                dataset_id: id,
                reason,
            });
            continue;
        }
        rows.push(MetaRow {
            dataset_id: id,
            features: s.meta_features.values.clone(),
            target: label_meta_target(s.grid, &scenario, tol)?,
        });
    }
    Ok(MetaDataset {
        scenario,
        schema_version: version,
        feature_names: sources[0]
            .meta_features
            .names()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
        excluded,
    })
}

/// Index of the largest count; ties to the lowest index.
fn mode(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// The most frequent target. For the chained scenario: the modal pool, then
/// the modal method among rows with that pool. Ties go to canonical order.
pub fn baseline_majority(mt: &MetaDataset) -> Result<MetaTarget> {
    if mt.rows.is_empty() {
        return Err(Error::EmptyMetaDataset);
    }
    let pool_mode = |rows: &mut dyn Iterator<Item = &MetaRow>| {
        let mut c = [0usize; 7];
        rows.filter_map(|r| r.target.pool)
            .for_each(|p| c[p.index()] += 1);
        PoolScheme::ALL[mode(&c)]
    };
    let ds_mode = |rows: &mut dyn Iterator<Item = &MetaRow>| {
        let mut c = [0usize; 7];
        rows.filter_map(|r| r.target.ds)
            .for_each(|d| c[d.index()] += 1);
        DsMethod::ALL[mode(&c)]
    };
    Ok(match mt.scenario {
        Scenario::Pool { .. } => MetaTarget::pool(pool_mode(&mut mt.rows.iter())),
        Scenario::Ds { .. } => MetaTarget::ds(ds_mode(&mut mt.rows.iter())),
        Scenario::PoolDs => {
            let p = pool_mode(&mut mt.rows.iter());
            let d = ds_mode(&mut mt.rows.iter().filter(|r| r.target.pool == Some(p)));
            MetaTarget::pair(p, d)
        }
    })
}

/// The average baseline under its three readings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageBaseline {
    /// Mean over candidates of their win rates.
    pub win_rate: f64,
    /// Mean over candidates of their win counts.
    pub mean_wins: f64,
    /// Mean accuracy over candidates and datasets.
    pub accuracy: f64,
    /// Datasets counted (those with every candidate evaluated).
    pub n: usize,
}

pub fn baseline_average(grids: &[&GridResult], scenario: &Scenario, tol: f64) -> AverageBaseline {
    let candidates = scenario.candidates();
    let c = candidates.len() as f64;
    let (mut winners, mut acc, mut n) = (0.0, 0.0, 0usize);
    for g in grids {
        let Some(best) = best_accuracy(g, &candidates) else {
            continue;
        };
        n += 1;
        for &(p, d) in &candidates {
            let a = g.accuracy(p, d).expect("complete");
            acc += a;
            if a >= best - tol {
                winners += 1.0;
            }
        }
    }
    if n == 0 {
        return AverageBaseline {
            win_rate: 0.0,
            mean_wins: 0.0,
            accuracy: 0.0,
            n,
        };
    }
    AverageBaseline {
        win_rate: winners / c / n as f64,
        mean_wins: winners / c,
        accuracy: acc / c / n as f64,
        n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_strings_round_trip() {
        for s in Scenario::all() {
            assert_eq!(s.to_string().parse::<Scenario>().unwrap(), s);
        }
        assert_eq!(
            "ds[RF]".parse::<Scenario>().unwrap(),
            Scenario::Ds {
                fixed_pool: PoolScheme::RF
            }
        );
        assert!("MLRS-X[RF]".parse::<Scenario>().is_err());
    }

    #[test]
    fn candidate_counts() {
        assert_eq!(Scenario::PoolDs.candidates().len(), 49);
        assert_eq!(
            Scenario::Pool {
                fixed_ds: DsMethod::Ola
            }
            .candidates()
            .len(),
            7
        );
        for s in Scenario::all() {
            for c in s.candidates() {
                assert_eq!(s.cell_of(&s.target_of(c)), Some(c));
            }
        }
    }

    #[test]
    fn mode_ties_to_first() {
        assert_eq!(mode(&[1, 3, 3, 0]), 1);
        assert_eq!(mode(&[0, 0, 0]), 0);
    }
}
