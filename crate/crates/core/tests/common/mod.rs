#![allow(dead_code)]

use mlrs_core::dataset::{synth_dataset, Dataset, Matrix, SynthSpec};

pub fn spec(n: usize, d: usize, classes: usize) -> SynthSpec {
    SynthSpec {
        n,
        d,
        classes,
        cluster_std: 1.0,
        imbalance: 0.0,
        label_noise: 0.05,
        informative: d,
    }
}

pub fn synth(n: usize, d: usize, classes: usize, seed: u64) -> Dataset {
    synth_dataset(&spec(n, d, classes), seed).unwrap()
}

pub fn dataset(rows: &[Vec<f64>], labels: &[usize], n_classes: usize) -> Dataset {
    let d = rows[0].len();
    Dataset::new(
        "t",
        Matrix::from_rows(rows),
        labels.to_vec(),
        (0..d).map(|j| format!("x{j}")).collect(),
        n_classes,
    )
    .unwrap()
}

pub fn permuted(ds: &Dataset, seed: u64) -> Dataset {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..ds.n_rows()).collect();
    order.shuffle(&mut mlrs_core::rng::rng_from(seed));
    ds.subset(&order)
}

use mlrs_core::harness::{Cell, GridResult};
use mlrs_core::metafeatures::{MetaFeatureVector, SCHEMA, SCHEMA_VERSION};

/// A grid with the given accuracies, `acc[pool][method]`.
pub fn grid(id: &str, acc: &[[f64; 7]; 7]) -> GridResult {
    GridResult {
        dataset_id: id.to_string(),
        seed: 0,
        config_hash: "0".into(),
        pool_size: 10,
        k: 7,
        n_train: 30,
        n_test: 10,
        cells: acc
            .iter()
            .map(|r| r.iter().map(|&a| Cell::Ok { accuracy: a }).collect())
            .collect(),
        notes: Vec::new(),
    }
}

pub fn mf(values: Vec<f64>) -> MetaFeatureVector {
    assert_eq!(values.len(), SCHEMA.len());
    MetaFeatureVector {
        schema_version: SCHEMA_VERSION.into(),
        imputed: vec![false; values.len()],
        values,
    }
}

/// A meta-feature vector that is `v` in every slot.
pub fn mf_const(v: f64) -> MetaFeatureVector {
    mf(vec![v; SCHEMA.len()])
}

/// Linearly separable two-class toy: a perceptron fits it in one pass.
pub fn separable(n: usize) -> Dataset {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let c = (i % 2) as f64;
            vec![c * 10.0 + (i as f64 * 0.37).sin(), (i as f64 * 0.91).cos()]
        })
        .collect();
    let y: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let mut ds = dataset(&rows, &y, 2);
    ds.id = "separable".into();
    ds
}
pub mod oracles;
