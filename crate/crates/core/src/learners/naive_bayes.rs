use serde::{Deserialize, Serialize};

use super::argmax;
use crate::dataset::Matrix;

/// Gaussian naive Bayes. Classes absent from training get prior 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    pub priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub vars: Vec<Vec<f64>>,
}

impl GaussianNb {
    pub fn n_classes(&self) -> usize {
        self.priors.len()
    }

    pub fn joint_log_likelihood(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n_classes())
            .map(|c| {
                if self.priors[c] <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let ll: f64 = x
                    .iter()
                    .zip(self.means[c].iter().zip(&self.vars[c]))
                    .map(|(v, (m, s))| {
                        -0.5 * (2.0 * std::f64::consts::PI * s).ln() - (v - m) * (v - m) / (2.0 * s)
                    })
                    .sum();
                self.priors[c].ln() + ll
            })
            .collect()
    }

    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let jll = self.joint_log_likelihood(x);
        let max = jll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = jll.iter().map(|l| (l - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        exps.iter().map(|e| e / total).collect()
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        argmax(&self.predict_proba(x))
    }
}

/// Variances are smoothed by `1e-9 * max feature variance` (or `1e-9` when
/// every feature is constant).
pub fn train_gaussian_nb(x: &Matrix, y: &[usize], n_classes: usize) -> GaussianNb {
    let d = x.cols();
    let n = y.len() as f64;
    let mut counts = vec![0.0; n_classes];
    let mut means = vec![vec![0.0; d]; n_classes];
    for (i, &c) in y.iter().enumerate() {
        counts[c] += 1.0;
        for (m, v) in means[c].iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    for c in 0..n_classes {
        if counts[c] > 0.0 {
            means[c].iter_mut().for_each(|m| *m /= counts[c]);
        }
    }
    let mut vars = vec![vec![0.0; d]; n_classes];
    for (i, &c) in y.iter().enumerate() {
        for ((s, v), m) in vars[c].iter_mut().zip(x.row(i)).zip(&means[c]) {
            *s += (v - m) * (v - m);
        }
    }

    let mut max_var: f64 = 0.0;
    for j in 0..d {
        let col = x.column(j);
        let mu = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n;
        max_var = max_var.max(var);
    }
    let eps = if max_var > 0.0 { 1e-9 * max_var } else { 1e-9 };
    for c in 0..n_classes {
        for s in vars[c].iter_mut() {
            *s = if counts[c] > 0.0 { *s / counts[c] } else { 0.0 } + eps;
        }
    }
    GaussianNb {
        priors: counts.iter().map(|k| k / n).collect(),
        means,
        vars,
    }
}
