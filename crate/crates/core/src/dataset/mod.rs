//! Dataset representation, ingestion, synthesis, splitting and scaling.

mod load;
mod scale;
mod split;
mod synth;

pub use load::{load_dataset, parse_dataset, write_dataset};
pub use scale::{zscore_fit_apply, ScalerParams};
pub use split::{stratified_split, SplitPair};
pub use synth::{synth_dataset, ManifestRecord, SynthSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix shape mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix::new(idx.len(), self.cols, data)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// A labelled classification dataset.
///
/// Labels are dense class ids in `[0, n_classes)` and every class occurs at
/// least once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub id: String,
    pub features: Matrix,
    pub labels: Vec<usize>,
    pub feature_names: Vec<String>,
    pub n_classes: usize,
}

impl Dataset {
    pub fn new(
        id: impl Into<String>,
        features: Matrix,
        labels: Vec<usize>,
        feature_names: Vec<String>,
        n_classes: usize,
    ) -> Result<Self> {
        let ds = Dataset {
            id: id.into(),
            features,
            labels,
            feature_names,
            n_classes,
        };
        ds.validate()?;
        Ok(ds)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDataset(m));
        if self.n_classes < 2 {
            return Err(Error::SingleClass);
        }
        if self.features.rows() != self.labels.len() {
            return bad(format!(
                "{} feature rows but {} labels",
                self.features.rows(),
                self.labels.len()
            ));
        }
        if self.feature_names.len() != self.features.cols() {
            return bad("feature_names length differs from column count".into());
        }
        if self.features.cols() == 0 {
            return bad("no feature columns".into());
        }
        if let Some(v) = self.features.as_slice().iter().find(|v| !v.is_finite()) {
            return bad(format!("non-finite feature value {v}"));
        }
        let counts = self.class_counts_checked()?;
        if let Some(c) = counts.iter().position(|&n| n == 0) {
            return bad(format!("class {c} has no rows"));
        }
        Ok(())
    }

    fn class_counts_checked(&self) -> Result<Vec<usize>> {
        let mut counts = vec![0usize; self.n_classes];
        for &y in &self.labels {
            if y >= self.n_classes {
                return Err(Error::InvalidDataset(format!(
                    "label {y} outside [0, {})",
                    self.n_classes
                )));
            }
            counts[y] += 1;
        }
        Ok(counts)
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    /// Row subset sharing this dataset's class space. Not validated: a
    /// subset may miss classes.
    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            id: self.id.clone(),
            features: self.features.select_rows(idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            n_classes: self.n_classes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_missing_class_and_nan() {
        let m = Matrix::from_rows(&[vec![0.0], vec![1.0]]);
        assert!(Dataset::new("x", m.clone(), vec![0, 0], vec!["a".into()], 2).is_err());
        assert!(Dataset::new("x", m, vec![0, 1], vec!["a".into()], 2).is_ok());
        let m = Matrix::from_rows(&[vec![f64::NAN], vec![1.0]]);
        assert!(Dataset::new("x", m, vec![0, 1], vec!["a".into()], 2).is_err());
    }

    #[test]
    fn select_rows_copies_in_order() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]);
        let s = m.select_rows(&[2, 0, 2]);
        assert_eq!(s.as_slice(), &[5.0, 6.0, 1.0, 2.0, 5.0, 6.0]);
    }
}
