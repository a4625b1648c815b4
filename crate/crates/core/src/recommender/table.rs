//! CSV persistence of a meta-dataset: a `#` header line carrying the
//! scenario and schema, then one row per dataset.

use std::fs;
use std::path::Path;

use super::{MetaDataset, MetaRow, MetaTarget, Scenario};
use crate::error::{Error, Result};
use crate::metafeatures::{SCHEMA, SCHEMA_VERSION};

const TAG: &str = "# meta-dataset";

pub fn write_meta_dataset(mt: &MetaDataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["dataset_id".to_string()];
    header.extend(mt.feature_names.iter().cloned());
    header.extend(["target_pool".to_string(), "target_ds".to_string()]);
    w.write_record(&header)?;
    for r in &mt.rows {
        let mut rec = vec![r.dataset_id.clone()];
        rec.extend(r.features.iter().map(|v| v.to_string()));
        rec.push(r.target.pool.map(|p| p.to_string()).unwrap_or_default());
        rec.push(r.target.ds.map(|d| d.to_string()).unwrap_or_default());
        w.write_record(&rec)?;
    }
    let body = String::from_utf8(
        w.into_inner()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?,
    )
    .expect("csv output is utf-8");
    let excluded = serde_json::to_string(&mt.excluded)?;
    let text = format!(
        "{TAG} scenario={} schema={} excluded={excluded}\n{body}",
        mt.scenario, mt.schema_version
    );
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_meta_dataset(path: &Path) -> Result<MetaDataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (first, body) = text.split_once('\n').unwrap_or((&text, ""));
    let bad = |m: &str| Error::InvalidArgument(format!("{}: {m}", path.display()));
    let meta = first
        .strip_prefix(TAG)
        .ok_or_else(|| bad("missing meta-dataset header line"))?;
    let field = |key: &str| {
        meta.split_whitespace()
            .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
            .ok_or_else(|| bad(&format!("header lacks {key}")))
    };
    let scenario: Scenario = field("scenario")?.parse()?;
    let schema_version = field("schema")?.to_string();
    let excluded_at = meta
        .find("excluded=")
        .ok_or_else(|| bad("header lacks excluded"))?;
    let excluded = serde_json::from_str(&meta[excluded_at + "excluded=".len()..])?;

    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.len() < 3 {
        return Err(bad("too few columns"));
    }
    let feature_names = header[1..header.len() - 2].to_vec();
    if schema_version == SCHEMA_VERSION && feature_names != SCHEMA {
        return Err(Error::SchemaMismatch {
            expected: SCHEMA_VERSION.to_string(),
            got: format!("{} columns", feature_names.len()),
        });
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let n = rec.len();
        let features = (1..n - 2)
            .map(|i| {
                rec[i]
                    .parse::<f64>()
                    .map_err(|_| bad(&format!("bad value {:?}", &rec[i])))
            })
            .collect::<Result<Vec<f64>>>()?;
        let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
        let target = MetaTarget {
            pool: opt(&rec[n - 2]).map(|s| s.parse()).transpose()?,
            ds: opt(&rec[n - 1]).map(|s| s.parse()).transpose()?,
        };
        rows.push(MetaRow {
            dataset_id: rec[0].to_string(),
            features,
            target,
        });
    }
    Ok(MetaDataset {
        scenario,
        schema_version,
        feature_names,
        rows,
        excluded,
    })
}
