//! Competence estimates over a region of competence. Competence ties go to
//! the lower model index, vote ties to the lower class index.

use super::{DselOutputs, RegionOfCompetence};
use crate::learners::argmax;

fn local_accuracy(out: &DselOutputs, roc: &RegionOfCompetence) -> Vec<f64> {
    let k = roc.k() as f64;
    out.local_correctness(roc)
        .iter()
        .map(|row| row.iter().filter(|c| **c).count() as f64 / k)
        .collect()
}

/// Plain vote of the selected models' predictions.
pub fn majority_vote(query_preds: &[usize], selected: &[usize], n_classes: usize) -> usize {
    let mut tally = vec![0.0; n_classes];
    for &i in selected {
        tally[query_preds[i]] += 1.0;
    }
    argmax(&tally)
}

/// Overall local accuracy: the single most accurate model on the region.
pub fn ola_select(out: &DselOutputs, roc: &RegionOfCompetence) -> usize {
    argmax(&local_accuracy(out, roc))
}

/// Local accuracy with neighbours weighted by `1 / (distance + eps)`.
pub fn mla_select(out: &DselOutputs, roc: &RegionOfCompetence, eps: f64) -> usize {
    let w: Vec<f64> = roc.distances().iter().map(|d| 1.0 / (d + eps)).collect();
    let total: f64 = w.iter().sum();
    let comp: Vec<f64> = out
        .local_correctness(roc)
        .iter()
        .map(|row| {
            row.iter()
                .zip(&w)
                .filter(|(c, _)| **c)
                .map(|(_, wj)| wj)
                .sum::<f64>()
                / total
        })
        .collect();
    argmax(&comp)
}

/// KNORA-Eliminate: models correct on all of the `k'` nearest neighbours,
/// shrinking `k'` from K until someone qualifies; the whole pool if nobody
/// is right even on the nearest neighbour.
pub fn knora_e_select(out: &DselOutputs, roc: &RegionOfCompetence) -> Vec<usize> {
    let table = out.local_correctness(roc);
    for kp in (1..=roc.k()).rev() {
        let chosen: Vec<usize> = table
            .iter()
            .enumerate()
            .filter(|(_, row)| row[..kp].iter().all(|c| *c))
            .map(|(i, _)| i)
            .collect();
        if !chosen.is_empty() {
            return chosen;
        }
    }
    (0..out.n_models()).collect()
}

/// KNORA-Union: every model votes with weight equal to its number of
/// correctly classified neighbours. All-zero weights fall back to an
/// unweighted vote of the pool.
pub fn knora_u_vote(
    out: &DselOutputs,
    roc: &RegionOfCompetence,
    query_preds: &[usize],
    n_classes: usize,
) -> usize {
    let weights: Vec<usize> = out
        .local_correctness(roc)
        .iter()
        .map(|row| row.iter().filter(|c| **c).count())
        .collect();
    if weights.iter().all(|w| *w == 0) {
        let all: Vec<usize> = (0..out.n_models()).collect();
        return majority_vote(query_preds, &all, n_classes);
    }
    let mut tally = vec![0.0; n_classes];
    for (p, w) in query_preds.iter().zip(&weights) {
        tally[*p] += *w as f64;
    }
    argmax(&tally)
}

/// DES-Performance: models whose local accuracy beats random guessing
/// (`1/L`) strictly; the whole pool when none does.
pub fn des_p_select(out: &DselOutputs, roc: &RegionOfCompetence) -> Vec<usize> {
    let chance = 1.0 / out.n_classes as f64;
    let chosen: Vec<usize> = local_accuracy(out, roc)
        .iter()
        .enumerate()
        .filter(|(_, a)| **a - chance > 0.0)
        .map(|(i, _)| i)
        .collect();
    if chosen.is_empty() {
        (0..out.n_models()).collect()
    } else {
        chosen
    }
}

/// DES for multiclass imbalance: neighbours weighted inversely to their
/// class frequency inside the region; the top `ceil(p * |pool|)` models by
/// weighted accuracy are kept.
///
/// The score is accumulated per class (hits / class count, classes in
/// order) so that equal scores compare equal in floating point.
pub fn des_mi_select(out: &DselOutputs, roc: &RegionOfCompetence, p: f64) -> Vec<usize> {
    let l = out.n_classes;
    let mut counts = vec![0usize; l];
    for &y in &roc.labels {
        counts[y] += 1;
    }
    let present = counts.iter().filter(|c| **c > 0).count() as f64;
    let comp: Vec<f64> = out
        .local_correctness(roc)
        .iter()
        .map(|row| {
            let mut hits = vec![0usize; l];
            for (c, &y) in row.iter().zip(&roc.labels) {
                if *c {
                    hits[y] += 1;
                }
            }
            (0..l)
                .filter(|&c| counts[c] > 0)
                .map(|c| hits[c] as f64 / counts[c] as f64)
                .sum::<f64>()
                / present
        })
        .collect();
    let n = out.n_models();
    let keep = ((p * n as f64).ceil() as usize).clamp(1, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| comp[b].total_cmp(&comp[a]).then(a.cmp(&b)));
    order.truncate(keep);
    order.sort_unstable();
    order
}
