//! The 7x7 (pool scheme, selection method) accuracy grid of one dataset.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dataset::{stratified_split, zscore_fit_apply, Dataset, SplitPair};
use crate::error::{Error, Result};
use crate::metafeatures::{extract_meta_features, MetaFeatureOptions, MetaFeatureVector};
use crate::pool::{generate_pool, PoolOptions, PoolScheme};
use crate::rng::derive_seed;
use crate::selection::{
    ds_predict_with_region, majority_vote, metades_fit, region_of_competence, DsContext, DsMethod,
    DsOptions, MetaDesModel, RegionOfCompetence,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Cell {
    Ok { accuracy: f64 },
    Excluded { reason: String },
}

impl Cell {
    pub fn accuracy(&self) -> Option<f64> {
        match self {
            Cell::Ok { accuracy } => Some(*accuracy),
            Cell::Excluded { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub dataset_id: String,
    pub seed: u64,
    pub config_hash: String,
    pub pool_size: usize,
    pub k: usize,
    pub n_train: usize,
    pub n_test: usize,
    /// `cells[pool.index()][method.index()]`.
    pub cells: Vec<Vec<Cell>>,
    /// Non-fatal events, e.g. a META-DES fallback.
    pub notes: Vec<String>,
}

impl GridResult {
    pub fn cell(&self, pool: PoolScheme, ds: DsMethod) -> &Cell {
        &self.cells[pool.index()][ds.index()]
    }

    pub fn accuracy(&self, pool: PoolScheme, ds: DsMethod) -> Option<f64> {
        self.cell(pool, ds).accuracy()
    }

    /// First exclusion reason among `cells`, if any.
    pub fn exclusion(&self, cells: &[(PoolScheme, DsMethod)]) -> Option<String> {
        cells.iter().find_map(|&(p, d)| match self.cell(p, d) {
            Cell::Excluded { reason } => Some(format!("{p}/{d}: {reason}")),
            Cell::Ok { .. } => None,
        })
    }
}

/// Per-task seed: `hash64(master, dataset id, labels...)`.
pub fn task_seed(cfg: &Config, dataset_id: &str, labels: &[&str]) -> u64 {
    let mut all = vec![dataset_id];
    all.extend_from_slice(labels);
    derive_seed(cfg.seed, &all)
}

/// The single stratified split used for both the grid and the meta-features.
pub fn split_dataset(ds: &Dataset, cfg: &Config) -> Result<SplitPair> {
    stratified_split(ds, cfg.train_ratio, task_seed(cfg, &ds.id, &["split"]))
}

/// Meta-features of the train partition.
pub fn dataset_meta_features(ds: &Dataset, cfg: &Config) -> Result<MetaFeatureVector> {
    let split = split_dataset(ds, cfg)?;
    Ok(train_meta_features(&split.train, cfg))
}

pub fn train_meta_features(train: &Dataset, cfg: &Config) -> MetaFeatureVector {
    extract_meta_features(
        train,
        task_seed(cfg, &train.id, &["meta-features"]),
        &MetaFeatureOptions::from(cfg),
    )
}

struct SchemeRow {
    cells: Vec<Cell>,
    notes: Vec<String>,
}

fn evaluate_scheme(
    scheme: PoolScheme,
    train: &Dataset,
    test: &Dataset,
    regions: &[RegionOfCompetence],
    cfg: &Config,
) -> Result<SchemeRow> {
    let seed = task_seed(cfg, &train.id, &[scheme.name()]);
    let pool = match generate_pool(scheme, train, cfg.pool_size, seed, &PoolOptions::from(cfg)) {
        Ok(p) => p,
        Err(e @ Error::DegeneratePool(_)) => {
            let reason = e.to_string();
            return Ok(SchemeRow {
                cells: vec![Cell::Excluded { reason }; DsMethod::ALL.len()],
                notes: Vec::new(),
            });
        }
        Err(e) => return Err(e),
    };
    let ctx = DsContext::new(&pool, train, DsOptions::from(cfg))?;
    let mut notes = Vec::new();
    let meta_seed = task_seed(cfg, &train.id, &[scheme.name(), DsMethod::MetaDes.name()]);
    let meta: Option<MetaDesModel> =
        match metades_fit(&ctx, cfg.k, cfg.metades_kp, cfg.metades_gamma, meta_seed) {
            Ok(m) => Some(m),
            Err(Error::SingleMetaClass) => {
                notes.push(format!(
                    "{scheme}: META-DES meta-labels have one class; whole-pool vote used"
                ));
                None
            }
            Err(e) => return Err(e),
        };
    let n_test = test.n_rows() as f64;
    let cells = DsMethod::ALL
        .par_iter()
        .map(|&method| {
            let mut hits = 0usize;
            for (i, roc) in regions.iter().enumerate() {
                let x = test.row(i);
                let label = match (method, meta.as_ref()) {
                    (DsMethod::MetaDes, None) => {
                        let all: Vec<usize> = (0..pool.len()).collect();
                        majority_vote(&pool.predict_all(x), &all, pool.n_classes())
                    }
                    (_, m) => ds_predict_with_region(method, &ctx, m, x, roc)?,
                };
                hits += usize::from(label == test.labels[i]);
            }
            Ok(Cell::Ok {
                accuracy: hits as f64 / n_test,
            })
        })
        .collect::<Result<Vec<Cell>>>()?;
    Ok(SchemeRow { cells, notes })
}

/// One stratified split, z-scoring fitted on train, each pool generated once
/// on train and shared by all seven methods. Rows of schemes whose pool
/// degenerates are excluded.
pub fn run_grid(ds: &Dataset, cfg: &Config) -> Result<GridResult> {
    let split = split_dataset(ds, cfg)?;
    let (_, scaled) = zscore_fit_apply(&split.train, &[&split.test]);
    let (train, test) = (&scaled[0], &scaled[1]);
    let regions = test
        .features
        .iter_rows()
        .map(|x| region_of_competence(train, x, cfg.k))
        .collect::<Result<Vec<_>>>()?;
    let rows = PoolScheme::ALL
        .par_iter()
        .map(|&s| evaluate_scheme(s, train, test, &regions, cfg))
        .collect::<Result<Vec<SchemeRow>>>()?;
    let mut cells = Vec::with_capacity(rows.len());
    let mut notes = Vec::new();
    for row in rows {
        cells.push(row.cells);
        notes.extend(row.notes);
    }
    Ok(GridResult {
        dataset_id: ds.id.clone(),
        seed: cfg.seed,
        config_hash: format!("{:016x}", cfg.grid_hash()),
        pool_size: cfg.pool_size,
        k: cfg.k,
        n_train: train.n_rows(),
        n_test: test.n_rows(),
        cells,
        notes,
    })
}

/// Write-once on-disk grid cache, one JSON file per
/// (dataset id, config hash, seed).
#[derive(Debug, Clone)]
pub struct GridCache {
    dir: PathBuf,
}

impl GridCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        GridCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, dataset_id: &str, cfg: &Config) -> PathBuf {
        let id: String = dataset_id
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        self.dir
            .join(format!("{id}-{:016x}-{}.json", cfg.grid_hash(), cfg.seed))
    }

    pub fn load(&self, dataset_id: &str, cfg: &Config) -> Result<Option<GridResult>> {
        let path = self.path(dataset_id, cfg);
        match fs::read_to_string(&path) {
            Ok(text) => {
                let grid: GridResult = serde_json::from_str(&text)?;
                Ok((grid.dataset_id == dataset_id).then_some(grid))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    pub fn store(&self, grid: &GridResult, cfg: &Config) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path(&grid.dataset_id, cfg);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(grid)?).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
    }

    pub fn get_or_run(&self, ds: &Dataset, cfg: &Config) -> Result<GridResult> {
        if let Some(g) = self.load(&ds.id, cfg)? {
            return Ok(g);
        }
        let grid = run_grid(ds, cfg)?;
        self.store(&grid, cfg)?;
        Ok(grid)
    }
}
