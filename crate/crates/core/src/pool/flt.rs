//! Forest of local trees: each tree sees the training set re-weighted by a
//! Gaussian kernel around a random anchor row.

use rand::seq::index::sample;
use rand::Rng as _;

use super::{Pool, PoolOptions, PoolScheme};
use crate::dataset::{Dataset, Matrix};
use crate::learners::{train_tree, TrainedModel, TreeParams};
use crate::rng::{derive_indexed, rng_from};

/// `exp(-|x_j - x_anchor|^2 / (2 sigma^2))`, floored at the smallest
/// positive double so every row keeps a nonzero weight.
pub fn flt_weights(x: &Matrix, anchor: usize, sigma: f64) -> Vec<f64> {
    let a = x.row(anchor);
    let denom = 2.0 * sigma * sigma;
    x.iter_rows()
        .map(|r| {
            let d2: f64 = r.iter().zip(a).map(|(u, v)| (u - v) * (u - v)).sum();
            (-d2 / denom).exp().max(f64::MIN_POSITIVE)
        })
        .collect()
}

/// Median pairwise Euclidean distance over a seeded subsample of at most
/// `cap` rows; 1 when that median is zero.
pub fn flt_bandwidth(x: &Matrix, cap: usize, seed: u64) -> f64 {
    let n = x.rows();
    let mut rows: Vec<usize> = if n > cap {
        sample(&mut rng_from(seed), n, cap).into_vec()
    } else {
        (0..n).collect()
    };
    rows.sort_unstable();
    let mut dists = Vec::with_capacity(rows.len() * rows.len() / 2);
    for (a, &i) in rows.iter().enumerate() {
        for &j in &rows[a + 1..] {
            dists.push(crate::learners::knn_distance(x.row(i), x.row(j)));
        }
    }
    if dists.is_empty() {
        return 1.0;
    }
    dists.sort_by(f64::total_cmp);
    let m = dists.len();
    let median = if m % 2 == 1 {
        dists[m / 2]
    } else {
        0.5 * (dists[m / 2 - 1] + dists[m / 2])
    };
    if median > 0.0 {
        median
    } else {
        1.0
    }
}

pub(super) fn flt_pool(train: &Dataset, size: usize, seed: u64, opts: &PoolOptions) -> Pool {
    let sigma = flt_bandwidth(&train.features, opts.flt_bandwidth_sample, seed);
    let n = train.n_rows();
    let models = (0..size)
        .map(|m| {
            let model_seed = derive_indexed(seed, m as u64);
            let anchor = rng_from(model_seed).random_range(0..n);
            let w = flt_weights(&train.features, anchor, sigma);
            let params = TreeParams {
                max_depth: opts.flt_max_depth,
                feature_subsample: None,
                seed: derive_indexed(model_seed, 1),
            };
            TrainedModel::Tree(
                train_tree(
                    &train.features,
                    &train.labels,
                    train.n_classes,
                    Some(&w),
                    params,
                )
                .expect("kernel weights are positive"),
            )
        })
        .collect();
    Pool {
        scheme: PoolScheme::FLT,
        models,
        boost_weights: None,
        bootstrap: None,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_weight_is_one() {
        let x = Matrix::from_rows(&[vec![0.0, 1.0], vec![3.0, 4.0], vec![-2.0, 0.5]]);
        assert_eq!(flt_weights(&x, 1, 0.7)[1], 1.0);
    }

    #[test]
    fn coincident_points_all_one() {
        let x = Matrix::from_rows(&[vec![2.0], vec![2.0], vec![2.0]]);
        assert_eq!(flt_weights(&x, 0, 0.3), vec![1.0; 3]);
        assert_eq!(flt_bandwidth(&x, 200, 0), 1.0);
    }

    #[test]
    fn weights_decrease_with_distance() {
        let x = Matrix::from_rows(&(0..20).map(|i| vec![i as f64 * 0.25]).collect::<Vec<_>>());
        let w = flt_weights(&x, 0, 1.5);
        assert!(w.windows(2).all(|p| p[1] < p[0]));
        assert!(w.iter().all(|v| *v > 0.0 && *v <= 1.0));
    }

    #[test]
    fn bandwidth_median() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![3.0]]);
        // pairwise distances 1, 3, 2
        assert_eq!(flt_bandwidth(&x, 200, 0), 2.0);
    }
}
