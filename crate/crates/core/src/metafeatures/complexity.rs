//! Data-complexity measures: feature overlap (f1-f3), neighbourhood (n1,
//! n3), dimensionality (t2) and class balance (c1, c2).

use super::Ctx;
use crate::dataset::Matrix;
use crate::learners::{knn_distance, knn_neighbors_excluding};

/// Largest between-class / within-class variance ratio over attributes.
/// A zero within-class spread yields `+inf`.
pub fn fisher_ratio_max(x: &Matrix, y: &[usize], n_classes: usize) -> f64 {
    let n = y.len() as f64;
    let mut best = f64::NAN;
    for j in 0..x.cols() {
        let col = x.column(j);
        let mu = col.iter().sum::<f64>() / n;
        let mut sums = vec![0.0; n_classes];
        let mut counts = vec![0.0; n_classes];
        for (v, &c) in col.iter().zip(y) {
            sums[c] += v;
            counts[c] += 1.0;
        }
        let means: Vec<f64> = sums
            .iter()
            .zip(&counts)
            .map(|(s, k)| if *k > 0.0 { s / k } else { 0.0 })
            .collect();
        let between: f64 = (0..n_classes)
            .map(|c| counts[c] * (means[c] - mu).powi(2))
            .sum();
        let within: f64 = col
            .iter()
            .zip(y)
            .map(|(v, &c)| (v - means[c]).powi(2))
            .sum();
        let ratio = between / within;
        if !ratio.is_nan() && (best.is_nan() || ratio > best) {
            best = ratio;
        }
    }
    best
}

struct PairOverlap {
    /// Overlap volume: product over attributes of overlap / range.
    volume: f64,
    /// Best single-attribute fraction of points outside the overlap.
    efficiency: f64,
}

fn pair_overlap(x: &Matrix, y: &[usize], a: usize, b: usize) -> PairOverlap {
    let rows: Vec<usize> = (0..y.len()).filter(|&i| y[i] == a || y[i] == b).collect();
    let mut volume = 1.0;
    let mut efficiency: f64 = 0.0;
    for j in 0..x.cols() {
        let bounds = |c: usize| {
            rows.iter()
                .filter(|&&i| y[i] == c)
                .map(|&i| x.get(i, j))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                })
        };
        let (amin, amax) = bounds(a);
        let (bmin, bmax) = bounds(b);
        let minmax = amax.min(bmax);
        let maxmin = amin.max(bmin);
        let span = amax.max(bmax) - amin.min(bmin);
        volume *= if span > 0.0 {
            (minmax - maxmin).max(0.0) / span
        } else {
            1.0
        };
        let inside = if minmax >= maxmin {
            rows.iter()
                .filter(|&&i| {
                    let v = x.get(i, j);
                    v >= maxmin && v <= minmax
                })
                .count()
        } else {
            0
        };
        efficiency = efficiency.max(1.0 - inside as f64 / rows.len() as f64);
    }
    PairOverlap { volume, efficiency }
}

/// Fraction of points incident to a Euclidean minimum-spanning-tree edge
/// that joins two different classes.
pub fn mst_borderline_fraction(x: &Matrix, y: &[usize]) -> f64 {
    let n = y.len();
    if n < 2 {
        return 0.0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut border = vec![false; n];
    best[0] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        if parent[u] != usize::MAX && y[parent[u]] != y[u] {
            border[u] = true;
            border[parent[u]] = true;
        }
        for v in 0..n {
            if !in_tree[v] {
                let d = knn_distance(x.row(u), x.row(v));
                if d < best[v] {
                    best[v] = d;
                    parent[v] = u;
                }
            }
        }
    }
    border.iter().filter(|b| **b).count() as f64 / n as f64
}

/// Leave-one-out error of the 1-NN classifier.
pub fn loo_1nn_error(x: &Matrix, y: &[usize]) -> f64 {
    let n = y.len();
    if n < 2 {
        return f64::NAN;
    }
    let wrong = (0..n)
        .filter(|&i| {
            let nn = knn_neighbors_excluding(x, x.row(i), 1, Some(i)).expect("n >= 2");
            y[nn.indices[0]] != y[i]
        })
        .count();
    wrong as f64 / n as f64
}

pub(super) fn complexity(ctx: &Ctx<'_>, out: &mut Vec<f64>) {
    let (x, y, l) = (ctx.x, ctx.y, ctx.n_classes);
    let n = y.len() as f64;

    let mut present = vec![false; l];
    for &c in y {
        present[c] = true;
    }
    let classes: Vec<usize> = (0..l).filter(|&c| present[c]).collect();
    let (mut f2, mut f3, mut pairs) = (0.0, 0.0, 0.0);
    for (i, &a) in classes.iter().enumerate() {
        for &b in &classes[i + 1..] {
            let o = pair_overlap(x, y, a, b);
            f2 += o.volume;
            f3 += o.efficiency;
            pairs += 1.0;
        }
    }

    let mut counts = vec![0.0; l];
    for &c in y {
        counts[c] += 1.0;
    }
    let ent: f64 = counts
        .iter()
        .filter(|&&k| k > 0.0)
        .map(|k| {
            let p = k / n;
            -p * p.ln()
        })
        .sum();
    let c1 = ent / (l as f64).ln();
    let ir = (l as f64 - 1.0) / l as f64 * counts.iter().map(|k| k / (n - k)).sum::<f64>();
    let c2 = 1.0 - 1.0 / ir;

    out.extend([
        fisher_ratio_max(x, y, l),
        f2 / pairs,
        f3 / pairs,
        mst_borderline_fraction(x, y),
        loo_1nn_error(x, y),
        x.cols() as f64 / n,
        c1,
        c2,
    ]);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fisher_ratio_by_hand() {
        // classes {0,2} and {4,6}: between = 4*4 = 16, within = 4*1 = 4
        let x = Matrix::from_rows(&[vec![0.0], vec![2.0], vec![4.0], vec![6.0]]);
        assert!((fisher_ratio_max(&x, &[0, 0, 1, 1], 2) - 4.0).abs() < 1e-12);
        let x = Matrix::from_rows(&[vec![0.0], vec![0.0], vec![1.0], vec![1.0]]);
        assert_eq!(fisher_ratio_max(&x, &[0, 0, 1, 1], 2), f64::INFINITY);
    }

    #[test]
    fn overlap_measures() {
        // attribute 0 separates, attribute 1 overlaps fully
        let x = Matrix::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![3.0, 0.0],
            vec![4.0, 1.0],
        ]);
        let o = pair_overlap(&x, &[0, 0, 1, 1], 0, 1);
        assert_eq!(o.volume, 0.0);
        assert_eq!(o.efficiency, 1.0);
    }

    #[test]
    fn mst_border_on_a_line() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        // single class change between rows 1 and 2
        assert_eq!(mst_borderline_fraction(&x, &[0, 0, 1, 1]), 0.5);
        assert_eq!(mst_borderline_fraction(&x, &[0, 1, 0, 1]), 1.0);
    }
}
