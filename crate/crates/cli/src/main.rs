use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mlrs_core::dataset::{load_dataset, write_dataset, Dataset, ManifestRecord};
use mlrs_core::harness::{
    dataset_meta_features, evaluate_corpus, lodo_all, lodo_evaluate, read_report, report_markdown,
    run_grid, with_workers, write_report, GridCache, LodoReport,
};
use mlrs_core::metafeatures::SCHEMA;
use mlrs_core::recommender::{
    build_meta_dataset, read_meta_dataset, recommend, train_recommender, write_meta_dataset,
    MetaSource, Scenario,
};
use mlrs_core::registry::{self, Artifact};
use mlrs_core::Config;

#[derive(Parser)]
#[command(
    name = "mlrs",
    version,
    about = "Dynamic ensemble selection with a meta-learning recommender"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    pool_size: Option<usize>,
    /// Region-of-competence size.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// TOML file whose keys override the defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus from a JSONL manifest.
    Synth {
        /// One manifest record per line.
        #[arg(long, conflicts_with = "random")]
        manifest: Option<PathBuf>,
        /// Draw a random manifest with this many datasets instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Evaluate the 7x7 grid of one dataset.
    Grid {
        dataset: PathBuf,
        /// Ignore and do not fill the grid cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Print the meta-feature vector of a dataset's train partition as CSV.
    Metafeatures { dataset: PathBuf },
    /// Build a meta-dataset CSV.
    BuildMt {
        /// Dataset CSV files or directories of them.
        #[arg(long, required = true, num_args = 1..)]
        data: Vec<PathBuf>,
        /// e.g. `MLRS-P[META-DES]`, `MLRS-DS[RF]` or `MLRS-PDS`.
        #[arg(long)]
        scenario: String,
    },
    /// Train a recommender from a meta-dataset CSV.
    Train {
        #[arg(long)]
        mt: PathBuf,
    },
    /// Recommend a configuration for a dataset.
    Recommend {
        #[arg(long)]
        model: PathBuf,
        dataset: PathBuf,
    },
    /// Leave-one-dataset-out evaluation.
    Lodo {
        #[arg(long, required = true, num_args = 1..)]
        data: Vec<PathBuf>,
        /// A single scenario; every scenario when omitted.
        #[arg(long)]
        scenario: Option<String>,
    },
    /// Render a saved LODO report as markdown.
    Report { report: PathBuf },
}

fn load_config(g: &Global) -> Result<Config> {
    let mut cfg = match &g.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => Config::default(),
    };
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    if let Some(v) = g.pool_size {
        cfg.pool_size = v;
    }
    if let Some(v) = g.k {
        cfg.k = v;
    }
    if let Some(v) = g.workers {
        cfg.workers = v;
    }
    Ok(cfg)
}

/// CSV files named directly or found (sorted) in the given directories.
fn dataset_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "csv"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        bail!("no dataset files found");
    }
    Ok(out)
}

fn load_all(inputs: &[PathBuf]) -> Result<Vec<Dataset>> {
    dataset_paths(inputs)?
        .iter()
        .map(|p| load_dataset(p).with_context(|| format!("loading {}", p.display())))
        .collect()
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn read_manifest(path: &Path) -> Result<Vec<ManifestRecord>> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .with_context(|| format!("{} line {}", path.display(), i + 1))?,
        );
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli.global)?;
    let out = cli.global.out.clone();
    let cache = GridCache::new(out.join("cache"));
    match cli.command {
        Command::Synth { manifest, random } => {
            let records = match (manifest, random) {
                (Some(m), None) => read_manifest(&m)?,
                (None, Some(n)) => ManifestRecord::corpus(n, cfg.seed),
                _ => bail!("give exactly one of --manifest or --random"),
            };
            let dir = out.join("datasets");
            create_dir(&dir)?;
            let mut lines = String::new();
            for r in &records {
                let ds = r.generate()?;
                write_dataset(&ds, dir.join(format!("{}.csv", file_safe(&r.id))))?;
                lines.push_str(&serde_json::to_string(r)?);
                lines.push('\n');
            }
            fs::write(out.join("manifest.jsonl"), lines)?;
            println!("wrote {} datasets to {}", records.len(), dir.display());
        }
        Command::Grid { dataset, no_cache } => {
            let ds = load_dataset(&dataset)?;
            let grid = with_workers(cfg.workers, || {
                if no_cache {
                    run_grid(&ds, &cfg)
                } else {
                    cache.get_or_run(&ds, &cfg)
                }
            })??;
            let dir = out.join("grids");
            create_dir(&dir)?;
            let path = dir.join(format!("{}.json", file_safe(&ds.id)));
            fs::write(&path, serde_json::to_string_pretty(&grid)?)?;
            println!("{}", path.display());
        }
        Command::Metafeatures { dataset } => {
            let ds = load_dataset(&dataset)?;
            let mf = dataset_meta_features(&ds, &cfg)?;
            println!("dataset_id,{}", SCHEMA.join(","));
            let values: Vec<String> = mf.values.iter().map(|v| v.to_string()).collect();
            println!("{},{}", ds.id, values.join(","));
        }
        Command::BuildMt { data, scenario } => {
            let scenario: Scenario = scenario.parse()?;
            let corpus = load_all(&data)?;
            let evals =
                with_workers(cfg.workers, || evaluate_corpus(&corpus, &cfg, Some(&cache)))??;
            let sources: Vec<MetaSource<'_>> = evals
                .iter()
                .map(|e| MetaSource {
                    grid: &e.grid,
                    meta_features: &e.meta_features,
                })
                .collect();
            let mt = build_meta_dataset(&sources, scenario, cfg.win_tol)?;
            create_dir(&out)?;
            let path = out.join(format!("mt-{}.csv", file_safe(&scenario.to_string())));
            write_meta_dataset(&mt, &path)?;
            for e in &mt.excluded {
                eprintln!("excluded {}: {}", e.dataset_id, e.reason);
            }
            println!("{}", path.display());
        }
        Command::Train { mt } => {
            let mt = read_meta_dataset(&mt)?;
            let model = train_recommender(&mt, &cfg)?;
            create_dir(&out)?;
            let path = out.join(format!(
                "recommender-{}.json",
                file_safe(&mt.scenario.to_string())
            ));
            registry::save(&Artifact::Recommender(model), &path)?;
            println!("{}", path.display());
        }
        Command::Recommend { model, dataset } => {
            let model = registry::load_recommender(&model)?;
            let ds = load_dataset(&dataset)?;
            let mf = dataset_meta_features(&ds, &cfg)?;
            let target = recommend(&model, &mf)?;
            println!("{}", serde_json::to_string(&target)?);
        }
        Command::Lodo { data, scenario } => {
            let corpus = load_all(&data)?;
            let report = with_workers(cfg.workers, || -> mlrs_core::Result<LodoReport> {
                let evals = evaluate_corpus(&corpus, &cfg, Some(&cache))?;
                match &scenario {
                    None => lodo_all(&evals, &cfg),
                    Some(s) => {
                        let one = lodo_evaluate(&evals, s.parse()?, &cfg)?;
                        Ok(LodoReport {
                            seed: cfg.seed,
                            config_hash: format!("{:016x}", cfg.grid_hash()),
                            n_datasets: evals.len(),
                            exclusions: one.excluded.clone(),
                            scenarios: vec![one],
                        })
                    }
                }
            })??;
            let dir = out.join("report");
            write_report(&report, &dir)?;
            print!("{}", report_markdown(&report));
        }
        Command::Report { report } => {
            print!("{}", report_markdown(&read_report(&report)?));
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
