use std::collections::HashMap;
use std::path::Path;

use super::{Dataset, Matrix};
use crate::error::{Error, Result};

/// Reads a comma-separated file with a header row; the last column is the
/// class label. Labels are re-encoded to `0..L` in first-appearance order.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    parse_dataset(&id, &text)
}

pub fn parse_dataset(id: &str, text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = match records.next() {
        Some(r) => r?,
        None => return Err(Error::MissingHeader),
    };
    if header.len() < 2 {
        return Err(Error::MissingHeader);
    }
    // a header whose cells all parse as numbers is data, not a header
    if header.iter().all(|c| c.parse::<f64>().is_ok()) {
        return Err(Error::MissingHeader);
    }
    let width = header.len();
    let feature_names: Vec<String> = header.iter().take(width - 1).map(str::to_string).collect();

    let mut data = Vec::new();
    let mut labels = Vec::new();
    let mut codes: HashMap<String, usize> = HashMap::new();
    for (i, rec) in records.enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        if rec.len() != width {
            return Err(Error::RaggedRow(line));
        }
        for (j, cell) in rec.iter().take(width - 1).enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| Error::NonNumericFeature(feature_names[j].clone()))?;
            if !v.is_finite() {
                return Err(Error::NonNumericFeature(feature_names[j].clone()));
            }
            data.push(v);
        }
        let raw = rec.get(width - 1).unwrap_or_default().to_string();
        let next = codes.len();
        labels.push(*codes.entry(raw).or_insert(next));
    }
    if codes.len() < 2 {
        return Err(Error::SingleClass);
    }
    let n = labels.len();
    Dataset::new(
        id,
        Matrix::new(n, width - 1, data),
        labels,
        feature_names,
        codes.len(),
    )
}

/// Writes `ds` in the format [`load_dataset`] reads, with a `class` column
/// holding the label codes.
pub fn write_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    let mut header = ds.feature_names.clone();
    header.push("class".into());
    w.write_record(&header)?;
    for i in 0..ds.n_rows() {
        let mut rec: Vec<String> = ds.row(i).iter().map(|v| v.to_string()).collect();
        rec.push(ds.labels[i].to_string());
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
