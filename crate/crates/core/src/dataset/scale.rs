use serde::{Deserialize, Serialize};

use super::{Dataset, Matrix};

/// Column means and population standard deviations. Zero-variance columns
/// carry `std = 1`, so they pass through centred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl ScalerParams {
    pub fn fit(x: &Matrix) -> ScalerParams {
        let n = x.rows() as f64;
        let d = x.cols();
        let mut means = vec![0.0; d];
        for r in x.iter_rows() {
            for (m, v) in means.iter_mut().zip(r) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut vars = vec![0.0; d];
        for r in x.iter_rows() {
            for ((s, v), m) in vars.iter_mut().zip(r).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        let stds = vars
            .iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > 0.0 && sd.is_finite() {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        ScalerParams { means, stds }
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn transform_matrix(&self, x: &Matrix) -> Matrix {
        let mut out = x.clone();
        for i in 0..out.rows() {
            let row = out.row_mut(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v - self.means[j]) / self.stds[j];
            }
        }
        out
    }

    pub fn transform(&self, ds: &Dataset) -> Dataset {
        Dataset {
            features: self.transform_matrix(&ds.features),
            ..ds.clone()
        }
    }
}

/// Fits on `train` and applies the same transform to `train` and every
/// dataset in `others`.
pub fn zscore_fit_apply(train: &Dataset, others: &[&Dataset]) -> (ScalerParams, Vec<Dataset>) {
    let params = ScalerParams::fit(&train.features);
    let mut out = vec![params.transform(train)];
    out.extend(others.iter().map(|d| params.transform(d)));
    (params, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(rows: &[Vec<f64>]) -> Dataset {
        let n = rows.len();
        let d = rows[0].len();
        Dataset::new(
            "t",
            Matrix::from_rows(rows),
            (0..n).map(|i| i % 2).collect(),
            (0..d).map(|j| format!("c{j}")).collect(),
            2,
        )
        .unwrap()
    }

    #[test]
    fn hand_values() {
        let train = ds(&[vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]]);
        let (p, out) = zscore_fit_apply(&train, &[]);
        assert_eq!(p.stds[1], 1.0);
        let col0 = out[0].features.column(0);
        let z = 1.0 / (2.0f64 / 3.0).sqrt();
        for (a, b) in col0.iter().zip([-z, 0.0, z]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((col0[2] - 1.2247).abs() < 1e-4);
        assert_eq!(out[0].features.column(1), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn others_use_train_params() {
        let train = ds(&[vec![0.0], vec![2.0]]);
        let test = ds(&[vec![4.0], vec![1.0]]);
        let (_, out) = zscore_fit_apply(&train, &[&test]);
        assert_eq!(out[1].features.column(0), vec![3.0, 0.0]);
    }
}
