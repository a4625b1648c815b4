//! Brute-force reference implementations of the selection rules, written
//! against plain correctness tables rather than the library types.

use mlrs_core::learners::NeighborList;
use mlrs_core::rng::rng_from;
use mlrs_core::selection::{DselOutputs, RegionOfCompetence};
use rand::Rng;

/// One random selection problem.
pub struct Micro {
    pub n_models: usize,
    pub n_classes: usize,
    /// `correct[m][j]` for region neighbour `j` (distance order).
    pub correct: Vec<Vec<bool>>,
    pub distances: Vec<f64>,
    pub region_labels: Vec<usize>,
    pub query_preds: Vec<usize>,
    pub outputs: DselOutputs,
    pub roc: RegionOfCompetence,
}

pub fn micro(seed: u64) -> Micro {
    let mut rng = rng_from(seed);
    let n_models = rng.random_range(1..=5);
    let n_classes = rng.random_range(2..=4);
    let k = rng.random_range(1..=7);
    let n_dsel = k + rng.random_range(0..5);
    let labels: Vec<usize> = (0..n_dsel)
        .map(|_| rng.random_range(0..n_classes))
        .collect();
    let preds: Vec<Vec<usize>> = (0..n_models)
        .map(|_| {
            labels
                .iter()
                .map(|&y| {
                    if rng.random_bool(0.55) {
                        y
                    } else {
                        rng.random_range(0..n_classes)
                    }
                })
                .collect()
        })
        .collect();
    let mut rows: Vec<usize> = (0..n_dsel).collect();
    for i in (1..rows.len()).rev() {
        rows.swap(i, rng.random_range(0..=i));
    }
    rows.truncate(k);
    let mut distances: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..3.0)).collect();
    distances.sort_by(f64::total_cmp);
    let region_labels: Vec<usize> = rows.iter().map(|&j| labels[j]).collect();
    let correct = preds
        .iter()
        .map(|p| rows.iter().map(|&j| p[j] == labels[j]).collect())
        .collect();
    let query_preds = (0..n_models)
        .map(|_| rng.random_range(0..n_classes))
        .collect();
    Micro {
        n_models,
        n_classes,
        correct,
        distances: distances.clone(),
        region_labels: region_labels.clone(),
        query_preds,
        outputs: DselOutputs::from_predictions(preds, labels, n_classes),
        roc: RegionOfCompetence {
            neighbors: NeighborList {
                indices: rows,
                distances,
            },
            labels: region_labels,
        },
    }
}

fn first_max<T: PartialOrd + Copy>(v: &[T]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

pub fn vote(preds: &[usize], chosen: &[usize], l: usize) -> usize {
    let mut t = vec![0usize; l];
    for &m in chosen {
        t[preds[m]] += 1;
    }
    first_max(&t)
}

fn hits(row: &[bool]) -> usize {
    row.iter().filter(|c| **c).count()
}

pub fn ola(p: &Micro) -> usize {
    let h: Vec<usize> = p.correct.iter().map(|r| hits(r)).collect();
    first_max(&h)
}

pub fn mla(p: &Micro) -> usize {
    let s: Vec<f64> = p
        .correct
        .iter()
        .map(|r| {
            let mut s = 0.0;
            for (j, c) in r.iter().enumerate() {
                if *c {
                    s += 1.0 / (p.distances[j] + 1e-12);
                }
            }
            s
        })
        .collect();
    first_max(&s)
}

/// Leading run of correct neighbours per model; the longest run decides.
pub fn knora_e(p: &Micro) -> Vec<usize> {
    let runs: Vec<usize> = p
        .correct
        .iter()
        .map(|r| r.iter().take_while(|c| **c).count())
        .collect();
    let top = *runs.iter().max().unwrap();
    if top == 0 {
        return (0..p.n_models).collect();
    }
    (0..p.n_models).filter(|&m| runs[m] >= top).collect()
}

pub fn knora_u(p: &Micro) -> usize {
    let w: Vec<usize> = p.correct.iter().map(|r| hits(r)).collect();
    if w.iter().all(|x| *x == 0) {
        return vote(
            &p.query_preds,
            &(0..p.n_models).collect::<Vec<_>>(),
            p.n_classes,
        );
    }
    let mut t = vec![0usize; p.n_classes];
    for m in 0..p.n_models {
        t[p.query_preds[m]] += w[m];
    }
    first_max(&t)
}

/// Integer form of `hits / K > 1 / L`.
pub fn des_p(p: &Micro) -> Vec<usize> {
    let k = p.distances.len();
    let keep: Vec<usize> = (0..p.n_models)
        .filter(|&m| hits(&p.correct[m]) * p.n_classes > k)
        .collect();
    if keep.is_empty() {
        (0..p.n_models).collect()
    } else {
        keep
    }
}

/// Exact scores over the common denominator 420 = lcm(1..=7).
pub fn des_mi(p: &Micro, frac: f64) -> Vec<usize> {
    let mut count = vec![0i64; p.n_classes];
    for &y in &p.region_labels {
        count[y] += 1;
    }
    let score: Vec<i64> = p
        .correct
        .iter()
        .map(|r| {
            r.iter()
                .zip(&p.region_labels)
                .filter(|(c, _)| **c)
                .map(|(_, &y)| 420 / count[y])
                .sum()
        })
        .collect();
    let keep = ((frac * p.n_models as f64).ceil() as usize).clamp(1, p.n_models);
    let mut chosen = Vec::new();
    let mut left: Vec<usize> = (0..p.n_models).collect();
    for _ in 0..keep {
        let s: Vec<i64> = left.iter().map(|&m| score[m]).collect();
        chosen.push(left.remove(first_max(&s)));
    }
    chosen.sort_unstable();
    chosen
}
