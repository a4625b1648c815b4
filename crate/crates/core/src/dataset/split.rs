use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::rng::rng_from;

/// A stratified train/test partition of a parent dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPair {
    pub train: Dataset,
    pub test: Dataset,
    /// Parent row indices, in partition order.
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
    pub seed: u64,
}

/// Per-class train counts: floors of `ratio * count`, topped up by largest
/// fractional remainder (ties to the lower class) until the total equals
/// `round(ratio * n)`.
pub(crate) fn allocate(counts: &[usize], ratio: f64) -> Vec<usize> {
    let n: usize = counts.iter().sum();
    let exact: Vec<f64> = counts.iter().map(|&c| ratio * c as f64).collect();
    let mut alloc: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let target = ((ratio * n as f64).round() as usize).min(n);
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut have: usize = alloc.iter().sum();
    for &c in &order {
        if have >= target {
            break;
        }
        if alloc[c] < counts[c] {
            alloc[c] += 1;
            have += 1;
        }
    }
    alloc
}

pub fn stratified_split(ds: &Dataset, train_ratio: f64, seed: u64) -> Result<SplitPair> {
    if !(train_ratio > 0.0 && train_ratio < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train_ratio {train_ratio} outside (0, 1)"
        )));
    }
    let counts = ds.class_counts();
    let alloc = allocate(&counts, train_ratio);
    for (c, (&a, &n)) in alloc.iter().zip(&counts).enumerate() {
        if a < 1 || n - a < 1 {
            return Err(Error::ClassTooSmall(c));
        }
    }

    let mut order: Vec<usize> = (0..ds.n_rows()).collect();
    order.shuffle(&mut rng_from(seed));
    let mut taken = vec![0usize; ds.n_classes];
    let (mut train_rows, mut test_rows) = (Vec::new(), Vec::new());
    for i in order {
        let y = ds.labels[i];
        if taken[y] < alloc[y] {
            taken[y] += 1;
            train_rows.push(i);
        } else {
            test_rows.push(i);
        }
    }
    Ok(SplitPair {
        train: ds.subset(&train_rows),
        test: ds.subset(&test_rows),
        train_rows,
        test_rows,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Matrix;
    use proptest::prelude::*;

    fn with_counts(counts: &[usize]) -> Dataset {
        let labels: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(c, &k)| std::iter::repeat_n(c, k))
            .collect();
        let n = labels.len();
        let x = Matrix::new(n, 1, (0..n).map(|i| i as f64).collect());
        Dataset::new("t", x, labels, vec!["x".into()], counts.len()).unwrap()
    }

    #[test]
    fn sixty_forty() {
        let s = stratified_split(&with_counts(&[60, 40]), 0.75, 5).unwrap();
        assert_eq!(s.train.n_rows(), 75);
        assert_eq!(s.train.class_counts(), vec![45, 30]);
        assert_eq!(s.test.class_counts(), vec![15, 10]);
    }

    #[test]
    fn singleton_class_rejected() {
        assert!(matches!(
            stratified_split(&with_counts(&[10, 1]), 0.75, 0),
            Err(Error::ClassTooSmall(1))
        ));
    }

    #[test]
    fn same_seed_same_rows() {
        let ds = with_counts(&[30, 20, 13]);
        let a = stratified_split(&ds, 0.75, 9).unwrap();
        let b = stratified_split(&ds, 0.75, 9).unwrap();
        assert_eq!(a.train_rows, b.train_rows);
        assert_eq!(a.test_rows, b.test_rows);
        let c = stratified_split(&ds, 0.75, 10).unwrap();
        assert_ne!(a.train_rows, c.train_rows);
    }

    proptest! {
        #[test]
        fn split_is_partition_and_stratified(
            counts in prop::collection::vec(4usize..40, 2..5),
            seed in any::<u64>(),
            ratio in 0.5f64..0.8,
        ) {
            let ds = with_counts(&counts);
            let s = stratified_split(&ds, ratio, seed).unwrap();
            let mut all: Vec<usize> = s.train_rows.iter().chain(&s.test_rows).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..ds.n_rows()).collect::<Vec<_>>());
            let tc = s.train.class_counts();
            for (c, &n) in counts.iter().enumerate() {
                let want = ratio * n as f64;
                prop_assert!((tc[c] as f64 - want).abs() <= 1.0);
            }
            // partition rows carry the parent's values
            for (k, &i) in s.test_rows.iter().enumerate() {
                prop_assert_eq!(s.test.row(k), ds.row(i));
            }
        }
    }
}
