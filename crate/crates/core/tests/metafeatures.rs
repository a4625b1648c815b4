mod common;

use common::{dataset, permuted, synth};
use mlrs_core::metafeatures::{
    extract_meta_features, loo_1nn_error, MetaFeatureOptions, SCHEMA, SCHEMA_VERSION,
};
use mlrs_core::rng::rng_from;
use rand::Rng;

fn brute_loo_1nn(rows: &[Vec<f64>], y: &[usize]) -> f64 {
    let mut wrong = 0;
    for i in 0..rows.len() {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..rows.len() {
            if i == j {
                continue;
            }
            let d: f64 = rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if d < best.0 {
                best = (d, j);
            }
        }
        if y[best.1] != y[i] {
            wrong += 1;
        }
    }
    wrong as f64 / rows.len() as f64
}

#[test]
fn schema_length_and_finite() {
    for seed in 0..6 {
        let ds = synth(
            80 + 10 * seed as usize,
            2 + seed as usize,
            2 + seed as usize % 3,
            seed,
        );
        let mf = extract_meta_features(&ds, 7, &MetaFeatureOptions::default());
        assert_eq!(mf.schema_version, SCHEMA_VERSION);
        assert_eq!(mf.values.len(), 55);
        assert_eq!(mf.imputed.len(), 55);
        assert_eq!(mf.names().len(), SCHEMA.len());
        assert!(mf.values.iter().all(|v| v.is_finite()));
    }
}

#[test]
fn balanced_labels_give_c1_one_and_c2_zero() {
    for classes in 2..=4 {
        let rows: Vec<Vec<f64>> = (0..classes * 10)
            .map(|i| vec![i as f64, (i % 3) as f64])
            .collect();
        let y: Vec<usize> = (0..classes * 10).map(|i| i % classes).collect();
        let mf = extract_meta_features(
            &dataset(&rows, &y, classes),
            0,
            &MetaFeatureOptions::default(),
        );
        assert!((mf.get("c1").unwrap() - 1.0).abs() < 1e-12);
        assert!(mf.get("c2").unwrap().abs() < 1e-12);
    }
}

#[test]
fn imbalance_raises_c2() {
    let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64]).collect();
    let y: Vec<usize> = (0..40).map(|i| usize::from(i >= 30)).collect();
    let mf = extract_meta_features(&dataset(&rows, &y, 2), 0, &MetaFeatureOptions::default());
    // IR = 1/2 * (30/10 + 10/30) = 5/3
    assert!((mf.get("c2").unwrap() - 0.4).abs() < 1e-12);
    assert!(mf.get("c1").unwrap() < 1.0);
}

#[test]
fn constant_single_attribute() {
    let rows = vec![vec![3.0]; 12];
    let y: Vec<usize> = (0..12).map(|i| i % 2).collect();
    let mf = extract_meta_features(&dataset(&rows, &y, 2), 0, &MetaFeatureOptions::default());
    assert_eq!(mf.get("attr_ent.mean"), Some(0.0));
    for name in ["cor_abs.mean", "cor_abs.sd"] {
        let i = mlrs_core::metafeatures::schema_index(name).unwrap();
        assert!(mf.imputed[i], "{name} should be imputed");
        assert_eq!(mf.values[i], 0.0);
    }
    assert!(mf.values.iter().all(|v| v.is_finite()));
}

#[test]
fn n3_matches_brute_force() {
    let mut rng = rng_from(11);
    for trial in 0..30 {
        let n = rng.random_range(4..=50);
        let d = rng.random_range(1..=4);
        let classes = rng.random_range(2..=3);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let mut y: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
        for c in 0..classes {
            y[c] = c;
        }
        let ds = dataset(&rows, &y, classes);
        let expected = brute_loo_1nn(&rows, &y);
        assert_eq!(
            loo_1nn_error(&ds.features, &ds.labels),
            expected,
            "trial {trial}"
        );
        let mf = extract_meta_features(&ds, 0, &MetaFeatureOptions::default());
        assert!(
            (mf.get("n3").unwrap() - expected).abs() < 1e-12,
            "trial {trial}"
        );
    }
}

#[test]
fn t2_is_dimension_over_rows() {
    let ds = synth(90, 7, 3, 5);
    let mf = extract_meta_features(&ds, 0, &MetaFeatureOptions::default());
    assert_eq!(mf.get("t2").unwrap(), 7.0 / 90.0);
    assert_eq!(mf.get("t2"), mf.get("attr_to_inst"));
}

#[test]
fn invariant_to_row_order_and_deterministic() {
    let ds = synth(150, 5, 3, 21);
    let opts = MetaFeatureOptions::default();
    let a = extract_meta_features(&ds, 4, &opts);
    let b = extract_meta_features(&ds, 4, &opts);
    let c = extract_meta_features(&permuted(&ds, 99), 4, &opts);
    assert_eq!(a, b);
    assert_eq!(
        a.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        c.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
}

#[test]
fn landmarkers_are_accuracies() {
    let ds = synth(120, 4, 2, 8);
    let mf = extract_meta_features(&ds, 1, &MetaFeatureOptions::default());
    for name in [
        "best_node",
        "worst_node",
        "random_node",
        "one_nn",
        "naive_bayes",
    ] {
        let v = mf.get(name).unwrap();
        assert!((0.0..=1.0).contains(&v), "{name} = {v}");
    }
    assert!(mf.get("best_node").unwrap() >= 0.5);
}
