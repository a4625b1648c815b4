//! Grid evaluation, the leave-one-dataset-out protocol and report output.

mod grid;
mod lodo;
mod report;

pub use grid::{
    dataset_meta_features, run_grid, split_dataset, task_seed, train_meta_features, Cell,
    GridCache, GridResult,
};
pub use lodo::{
    evaluate_corpus, lodo_all, lodo_evaluate, ComparisonRow, DatasetEvaluation, FoldOutcome,
    LodoReport, ScenarioReport,
};
pub use report::{
    comparison_table_markdown, fixed_table_markdown, format_fraction, format_rate, read_report,
    report_markdown, write_report, FixedRow,
};

use crate::error::{Error, Result};

/// Runs `f` on a rayon pool with `workers` threads; 0 uses the global pool.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
