//! Leave-one-dataset-out evaluation of the recommenders and baselines.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{run_grid, split_dataset, train_meta_features, GridCache, GridResult};
use crate::config::Config;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metafeatures::MetaFeatureVector;
use crate::pool::PoolScheme;
use crate::recommender::{
    baseline_average, baseline_majority, best_accuracy, build_meta_dataset, is_win, recommend,
    train_recommender, AverageBaseline, Exclusion, MetaSource, MetaTarget, Scenario,
};
use crate::selection::DsMethod;

/// Everything the protocol needs from one dataset: its grid and the
/// meta-features of its train partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEvaluation {
    pub grid: GridResult,
    pub meta_features: MetaFeatureVector,
}

impl DatasetEvaluation {
    pub fn id(&self) -> &str {
        &self.grid.dataset_id
    }

    fn source(&self) -> MetaSource<'_> {
        MetaSource {
            grid: &self.grid,
            meta_features: &self.meta_features,
        }
    }
}

/// Grids (through `cache` when given) and meta-features for every dataset,
/// in corpus order.
pub fn evaluate_corpus(
    corpus: &[Dataset],
    cfg: &Config,
    cache: Option<&GridCache>,
) -> Result<Vec<DatasetEvaluation>> {
    corpus
        .par_iter()
        .map(|ds| {
            let grid = match cache {
                Some(c) => c.get_or_run(ds, cfg)?,
                None => run_grid(ds, cfg)?,
            };
            let split = split_dataset(ds, cfg)?;
            Ok(DatasetEvaluation {
                grid,
                meta_features: train_meta_features(&split.train, cfg),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldOutcome {
    pub dataset_id: String,
    pub recommendation: MetaTarget,
    pub win: bool,
    pub accuracy: f64,
    pub best_accuracy: f64,
    pub majority: MetaTarget,
    pub majority_win: bool,
}

/// A named strategy scored against the full 7x7 grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    pub wins: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    /// Datasets scored (held-out datasets not excluded).
    pub n: usize,
    pub mlrs_wins: usize,
    pub majority_wins: usize,
    pub average: AverageBaseline,
    pub folds: Vec<FoldOutcome>,
    pub excluded: Vec<Exclusion>,
    /// Chained scenario only: the two single-stage recommenders with their
    /// best fixed choice and the top four fixed pairs.
    pub comparisons: Vec<ComparisonRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LodoReport {
    pub seed: u64,
    pub config_hash: String,
    pub n_datasets: usize,
    pub scenarios: Vec<ScenarioReport>,
    /// Union of per-scenario exclusions, by dataset id.
    pub exclusions: Vec<Exclusion>,
}

struct FoldExtra {
    p_win: bool,
    ds_win: bool,
}

/// Trains on every dataset but `held_out` and scores the recommendation on
/// `held_out`'s grid. Only the held-out meta-features and grid are read.
fn fold(
    evals: &[DatasetEvaluation],
    held_out: usize,
    scenario: Scenario,
    cfg: &Config,
) -> Result<FoldOutcome> {
    let q = &evals[held_out];
    let sources: Vec<MetaSource<'_>> = evals
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != held_out)
        .map(|(_, e)| e.source())
        .collect();
    let mt = build_meta_dataset(&sources, scenario, cfg.win_tol)?;
    let model = train_recommender(&mt, cfg)?;
    let rec = recommend(&model, &q.meta_features)?;
    let majority = baseline_majority(&mt)?;
    let candidates = scenario.candidates();
    let cell = scenario
        .cell_of(&rec)
        .expect("recommendation fits its scenario");
    let mcell = scenario
        .cell_of(&majority)
        .expect("majority fits its scenario");
    Ok(FoldOutcome {
        dataset_id: q.id().to_string(),
        recommendation: rec,
        win: is_win(&q.grid, &candidates, cell, cfg.win_tol).expect("held-out grid complete"),
        accuracy: q.grid.accuracy(cell.0, cell.1).expect("complete"),
        best_accuracy: best_accuracy(&q.grid, &candidates).expect("complete"),
        majority,
        majority_win: is_win(&q.grid, &candidates, mcell, cfg.win_tol).expect("complete"),
    })
}

fn single_stage_win(
    evals: &[DatasetEvaluation],
    held_out: usize,
    scenario: Scenario,
    cfg: &Config,
) -> Result<bool> {
    let o = fold(evals, held_out, scenario, cfg)?;
    let cell = scenario.cell_of(&o.recommendation).expect("fits");
    Ok(is_win(
        &evals[held_out].grid,
        &Scenario::PoolDs.candidates(),
        cell,
        cfg.win_tol,
    )
    .expect("complete"))
}

/// Full-grid wins per cell over `grids`.
fn pair_wins(grids: &[&GridResult], tol: f64) -> Vec<((PoolScheme, DsMethod), usize)> {
    let all = Scenario::PoolDs.candidates();
    all.iter()
        .map(|&c| {
            let w = grids
                .iter()
                .filter(|g| is_win(g, &all, c, tol) == Some(true))
                .count();
            (c, w)
        })
        .collect()
}

/// Method (or pool) that attains the full-grid maximum on the most datasets.
fn best_fixed<T: Copy>(
    grids: &[&GridResult],
    tol: f64,
    options: &[T],
    pick: impl Fn((PoolScheme, DsMethod)) -> T,
    eq: impl Fn(T, T) -> bool,
) -> T {
    let all = Scenario::PoolDs.candidates();
    let mut best = (options[0], 0usize);
    for &o in options {
        let w = grids
            .iter()
            .filter(|g| {
                all.iter()
                    .any(|&c| eq(pick(c), o) && is_win(g, &all, c, tol) == Some(true))
            })
            .count();
        if w > best.1 {
            best = (o, w);
        }
    }
    best.0
}

pub fn lodo_evaluate(
    evals: &[DatasetEvaluation],
    scenario: Scenario,
    cfg: &Config,
) -> Result<ScenarioReport> {
    if evals.len() < 3 {
        return Err(Error::CorpusTooSmall(evals.len()));
    }
    let candidates = scenario.candidates();
    let mut excluded = Vec::new();
    let mut scored = Vec::new();
    for (i, e) in evals.iter().enumerate() {
        match e.grid.exclusion(&candidates) {
            Some(reason) => excluded.push(Exclusion {
                dataset_id: e.id().to_string(),
                reason,
            }),
            None => scored.push(i),
        }
    }
    let grids: Vec<&GridResult> = scored.iter().map(|&i| &evals[i].grid).collect();

    let chained = scenario == Scenario::PoolDs;
    let best_ds = best_fixed(&grids, cfg.win_tol, &DsMethod::ALL, |c| c.1, |a, b| a == b);
    let best_pool = best_fixed(
        &grids,
        cfg.win_tol,
        &PoolScheme::ALL,
        |c| c.0,
        |a, b| a == b,
    );

    let results = scored
        .par_iter()
        .map(|&i| {
            let outcome = fold(evals, i, scenario, cfg)?;
            let extra = if chained {
                Some(FoldExtra {
                    p_win: single_stage_win(evals, i, Scenario::Pool { fixed_ds: best_ds }, cfg)?,
                    ds_win: single_stage_win(
                        evals,
                        i,
                        Scenario::Ds {
                            fixed_pool: best_pool,
                        },
                        cfg,
                    )?,
                })
            } else {
                None
            };
            Ok((outcome, extra))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = results.len();
    let mut comparisons = Vec::new();
    if chained {
        let extras: Vec<&FoldExtra> = results.iter().filter_map(|(_, x)| x.as_ref()).collect();
        comparisons.push(ComparisonRow {
            label: "MLRS-PDS".into(),
            wins: results.iter().filter(|(o, _)| o.win).count(),
            n,
        });
        comparisons.push(ComparisonRow {
            label: format!("MLRS-P with {best_ds}"),
            wins: extras.iter().filter(|x| x.p_win).count(),
            n,
        });
        comparisons.push(ComparisonRow {
            label: format!("MLRS-DS with {best_pool}"),
            wins: extras.iter().filter(|x| x.ds_win).count(),
            n,
        });
        let mut pairs = pair_wins(&grids, cfg.win_tol);
        // stable sort keeps canonical order among equal counts
        pairs.sort_by(|a, b| b.1.cmp(&a.1));
        for ((p, d), w) in pairs.into_iter().take(4) {
            comparisons.push(ComparisonRow {
                label: format!("({p}, {d})"),
                wins: w,
                n,
            });
        }
    }
    let folds: Vec<FoldOutcome> = results.into_iter().map(|(o, _)| o).collect();
    Ok(ScenarioReport {
        scenario,
        n,
        mlrs_wins: folds.iter().filter(|f| f.win).count(),
        majority_wins: folds.iter().filter(|f| f.majority_win).count(),
        average: baseline_average(&grids, &scenario, cfg.win_tol),
        folds,
        excluded,
        comparisons,
    })
}

/// Every scenario: seven fixed methods, seven fixed pools, then the chain.
pub fn lodo_all(evals: &[DatasetEvaluation], cfg: &Config) -> Result<LodoReport> {
    let scenarios = Scenario::all()
        .into_iter()
        .map(|s| lodo_evaluate(evals, s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut exclusions: Vec<Exclusion> = Vec::new();
    for e in scenarios.iter().flat_map(|s| &s.excluded) {
        if !exclusions.iter().any(|x| x.dataset_id == e.dataset_id) {
            exclusions.push(e.clone());
        }
    }
    exclusions.sort_by(|a, b| a.dataset_id.cmp(&b.dataset_id));
    Ok(LodoReport {
        seed: cfg.seed,
        config_hash: format!("{:016x}", cfg.grid_hash()),
        n_datasets: evals.len(),
        scenarios,
        exclusions,
    })
}
