use serde::{Deserialize, Serialize};

use crate::dataset::Matrix;
use crate::error::{Error, Result};

/// Neighbours in ascending distance; equal distances resolve to the lower
/// row index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborList {
    pub indices: Vec<usize>,
    pub distances: Vec<f64>,
}

impl NeighborList {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn knn_neighbors(reference: &Matrix, query: &[f64], k: usize) -> Result<NeighborList> {
    knn_neighbors_excluding(reference, query, k, None)
}

/// Exhaustive k-NN that optionally skips one reference row (leave-one-out).
pub fn knn_neighbors_excluding(
    reference: &Matrix,
    query: &[f64],
    k: usize,
    exclude: Option<usize>,
) -> Result<NeighborList> {
    let available = reference.rows() - usize::from(exclude.is_some_and(|e| e < reference.rows()));
    if k > available {
        return Err(Error::KTooLarge { k, n: available });
    }
    let mut all: Vec<(f64, usize)> = (0..reference.rows())
        .filter(|&i| Some(i) != exclude)
        .map(|i| (euclidean(reference.row(i), query), i))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < all.len() && k > 0 {
        all.select_nth_unstable_by(k - 1, cmp);
        all.truncate(k);
    }
    all.sort_by(cmp);
    all.truncate(k);
    Ok(NeighborList {
        indices: all.iter().map(|p| p.1).collect(),
        distances: all.iter().map(|p| p.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn line_example() {
        let r = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]);
        let nl = knn_neighbors(&r, &[0.9], 2).unwrap();
        assert_eq!(nl.indices, vec![1, 0]);
        assert!((nl.distances[0] - 0.1).abs() < 1e-12);
        assert!((nl.distances[1] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn identity_first() {
        let r = Matrix::from_rows(&[vec![3.0, 1.0], vec![0.5, 0.5], vec![0.0, 0.0]]);
        let nl = knn_neighbors(&r, &[0.5, 0.5], 1).unwrap();
        assert_eq!(nl.indices, vec![1]);
        assert_eq!(nl.distances, vec![0.0]);
    }

    #[test]
    fn ties_go_to_lower_index() {
        let r = Matrix::from_rows(&[vec![1.0], vec![-1.0], vec![1.0]]);
        let nl = knn_neighbors(&r, &[0.0], 3).unwrap();
        assert_eq!(nl.indices, vec![0, 1, 2]);
    }

    #[test]
    fn too_large() {
        let r = Matrix::from_rows(&[vec![1.0], vec![2.0]]);
        assert!(matches!(
            knn_neighbors(&r, &[0.0], 3),
            Err(Error::KTooLarge { .. })
        ));
        assert!(knn_neighbors_excluding(&r, &[0.0], 2, Some(0)).is_err());
    }

    #[test]
    fn matches_full_sort_oracle() {
        let mut rng = crate::rng::rng_from(42);
        for _ in 0..20 {
            let rows: Vec<Vec<f64>> = (0..50)
                .map(|_| vec![rng.random_range(0..4) as f64, rng.random_range(-1.0..1.0)])
                .collect();
            let r = Matrix::from_rows(&rows);
            let q = [1.0, 0.0];
            let k = rng.random_range(1..=50);
            let nl = knn_neighbors(&r, &q, k).unwrap();
            let mut oracle: Vec<(f64, usize)> = rows
                .iter()
                .enumerate()
                .map(|(i, p)| (((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt(), i))
                .collect();
            oracle.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let want: Vec<usize> = oracle[..k].iter().map(|p| p.1).collect();
            assert_eq!(nl.indices, want);
            assert!(nl.distances.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
