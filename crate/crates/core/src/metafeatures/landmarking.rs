//! Cross-validated accuracies of cheap learners.
//!
//! Folds are assigned per class by ranking rows on a seeded hash of their
//! content, so the assignment does not depend on row order.

use rand::Rng as _;

use super::info::attribute_info;
use super::Ctx;
use crate::dataset::Matrix;
use crate::learners::{argmax, knn_neighbors, train_gaussian_nb, train_tree, TreeParams};
use crate::rng::{derive_seed, rng_from, StableHasher};

pub(crate) fn content_folds(
    x: &Matrix,
    y: &[usize],
    n_classes: usize,
    folds: usize,
    seed: u64,
) -> Vec<usize> {
    let hashes: Vec<u64> = (0..y.len())
        .map(|i| {
            x.row(i)
                .iter()
                .fold(StableHasher::new(seed).u64(y[i] as u64), |h, v| h.f64(*v))
                .finish()
        })
        .collect();
    let mut fold = vec![0usize; y.len()];
    for c in 0..n_classes {
        let mut members: Vec<usize> = (0..y.len()).filter(|&i| y[i] == c).collect();
        members.sort_by_key(|&i| (hashes[i], i));
        for (rank, i) in members.into_iter().enumerate() {
            fold[i] = rank % folds;
        }
    }
    fold
}

type Learner<'a> = dyn Fn(&Matrix, &[usize], &Matrix) -> Vec<usize> + 'a;

fn cv_accuracy(ctx: &Ctx<'_>, folds: &[usize], learner: &Learner<'_>) -> f64 {
    let mut accs = Vec::new();
    for f in 0..ctx.opts.folds {
        let test: Vec<usize> = (0..folds.len()).filter(|&i| folds[i] == f).collect();
        let train: Vec<usize> = (0..folds.len()).filter(|&i| folds[i] != f).collect();
        if test.is_empty() || train.is_empty() {
            continue;
        }
        let xtr = ctx.x.select_rows(&train);
        let ytr: Vec<usize> = train.iter().map(|&i| ctx.y[i]).collect();
        let xte = ctx.x.select_rows(&test);
        let pred = learner(&xtr, &ytr, &xte);
        let hits = pred
            .iter()
            .zip(&test)
            .filter(|(p, &i)| **p == ctx.y[i])
            .count();
        accs.push(hits as f64 / test.len() as f64);
    }
    if accs.is_empty() {
        f64::NAN
    } else {
        accs.iter().sum::<f64>() / accs.len() as f64
    }
}

fn stump_cv(ctx: &Ctx<'_>, folds: &[usize], pick: &dyn Fn(&Matrix, &[usize]) -> usize) -> f64 {
    let l = ctx.n_classes;
    let params = TreeParams {
        max_depth: Some(1),
        ..TreeParams::default()
    };
    let learner = |xtr: &Matrix, ytr: &[usize], xte: &Matrix| -> Vec<usize> {
        let j = pick(xtr, ytr);
        let t = train_tree(&column(xtr, j), ytr, l, None, params).expect("unit weights");
        xte.iter_rows().map(|r| t.predict(&r[j..=j])).collect()
    };
    cv_accuracy(ctx, folds, &learner)
}

fn column(x: &Matrix, j: usize) -> Matrix {
    Matrix::new(x.rows(), 1, x.column(j))
}

pub(super) fn landmarking(ctx: &Ctx<'_>, out: &mut Vec<f64>) {
    let folds = content_folds(ctx.x, ctx.y, ctx.n_classes, ctx.opts.folds, ctx.seed);
    let l = ctx.n_classes;
    let bins = ctx.opts.bins;
    let d = ctx.x.cols();
    let best = |xtr: &Matrix, ytr: &[usize]| argmax(&attribute_info(xtr, ytr, l, bins).mut_inf);
    let worst = |xtr: &Matrix, ytr: &[usize]| {
        let neg: Vec<f64> = attribute_info(xtr, ytr, l, bins)
            .mut_inf
            .iter()
            .map(|m| -m)
            .collect();
        argmax(&neg)
    };
    let random_attr = rng_from(derive_seed(ctx.seed, &["random_node"])).random_range(0..d);
    let random = move |_: &Matrix, _: &[usize]| random_attr;

    let one_nn = |xtr: &Matrix, ytr: &[usize], xte: &Matrix| -> Vec<usize> {
        xte.iter_rows()
            .map(|r| ytr[knn_neighbors(xtr, r, 1).expect("nonempty train").indices[0]])
            .collect()
    };
    let nb = |xtr: &Matrix, ytr: &[usize], xte: &Matrix| -> Vec<usize> {
        let m = train_gaussian_nb(xtr, ytr, l);
        xte.iter_rows().map(|r| m.predict(r)).collect()
    };

    out.push(stump_cv(ctx, &folds, &best));
    out.push(stump_cv(ctx, &folds, &worst));
    out.push(stump_cv(ctx, &folds, &random));
    out.push(cv_accuracy(ctx, &folds, &one_nn));
    out.push(cv_accuracy(ctx, &folds, &nb));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_are_stratified_and_order_free() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![i as f64, (i * i % 7) as f64])
            .collect();
        let y: Vec<usize> = (0..40).map(|i| i % 2).collect();
        let x = Matrix::from_rows(&rows);
        let f = content_folds(&x, &y, 2, 4, 3);
        for c in 0..2 {
            for k in 0..4 {
                let n = (0..40).filter(|&i| y[i] == c && f[i] == k).count();
                assert_eq!(n, 5);
            }
        }
        let perm: Vec<usize> = (0..40).rev().collect();
        let xp = x.select_rows(&perm);
        let yp: Vec<usize> = perm.iter().map(|&i| y[i]).collect();
        let fp = content_folds(&xp, &yp, 2, 4, 3);
        for (k, &i) in perm.iter().enumerate() {
            assert_eq!(fp[k], f[i]);
        }
    }
}
