use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::rng::{derive_indexed, rng_from};

/// Parameters of a Gaussian-cluster classification problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n: usize,
    pub d: usize,
    pub classes: usize,
    pub cluster_std: f64,
    /// 0 gives uniform class priors; priors decay geometrically by
    /// `1 - imbalance` per class.
    pub imbalance: f64,
    pub label_noise: f64,
    pub informative: usize,
}

/// One line of a corpus manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    #[serde(flatten)]
    pub spec: SynthSpec,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if self.classes < 2 {
            return bad("classes must be >= 2");
        }
        if self.n < 2 * self.classes {
            return bad("n must be >= 2 * classes");
        }
        if self.d == 0 {
            return bad("d must be >= 1");
        }
        if self.informative == 0 || self.informative > self.d {
            return bad("informative must be in [1, d]");
        }
        if !(self.cluster_std.is_finite() && self.cluster_std >= 0.0) {
            return bad("cluster_std must be finite and >= 0");
        }
        if !(0.0..=1.0).contains(&self.imbalance) {
            return bad("imbalance must be in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.label_noise) {
            return bad("label_noise must be in [0, 1]");
        }
        Ok(())
    }

    /// Rows per class: one guaranteed row each, the remainder split by the
    /// geometric priors with largest-remainder rounding.
    pub fn class_sizes(&self) -> Vec<usize> {
        let ratio = 1.0 - self.imbalance;
        let priors: Vec<f64> = (0..self.classes).map(|c| ratio.powi(c as i32)).collect();
        let total: f64 = priors.iter().sum();
        let spare = self.n - self.classes;
        let exact: Vec<f64> = priors.iter().map(|p| p / total * spare as f64).collect();
        let mut sizes: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
        let mut left = spare - sizes.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..self.classes).collect();
        order.sort_by(|&a, &b| {
            let (fa, fb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
            fb.total_cmp(&fa).then(a.cmp(&b))
        });
        for &c in order.iter().cycle() {
            if left == 0 {
                break;
            }
            sizes[c] += 1;
            left -= 1;
        }
        sizes.iter().map(|s| s + 1).collect()
    }
}

pub fn synth_dataset(spec: &SynthSpec, seed: u64) -> Result<Dataset> {
    synth_named(&format!("synth-{seed}"), spec, seed)
}

pub(crate) fn synth_named(id: &str, spec: &SynthSpec, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = rng_from(seed);
    let means: Vec<Vec<f64>> = (0..spec.classes)
        .map(|_| {
            (0..spec.informative)
                .map(|_| rng.random_range(-3.0..3.0))
                .collect()
        })
        .collect();

    let mut labels: Vec<usize> = spec
        .class_sizes()
        .iter()
        .enumerate()
        .flat_map(|(c, &k)| std::iter::repeat_n(c, k))
        .collect();
    labels.shuffle(&mut rng);

    let mut data = Vec::with_capacity(spec.n * spec.d);
    for &y in &labels {
        for j in 0..spec.d {
            let z: f64 = StandardNormal.sample(&mut rng);
            if j < spec.informative {
                data.push(means[y][j] + spec.cluster_std * z);
            } else {
                data.push(z);
            }
        }
    }

    let flips = (spec.label_noise * spec.n as f64).round() as usize;
    if flips > 0 {
        let mut counts = vec![0usize; spec.classes];
        for &y in &labels {
            counts[y] += 1;
        }
        let mut noise_rng = rng_from(derive_indexed(seed, 1));
        for i in sample(&mut noise_rng, spec.n, flips.min(spec.n)).into_vec() {
            let new = noise_rng.random_range(0..spec.classes);
            // never empty a class
            if counts[labels[i]] > 1 {
                counts[labels[i]] -= 1;
                counts[new] += 1;
                labels[i] = new;
            }
        }
    }

    let names = (0..spec.d).map(|j| format!("x{j}")).collect();
    Dataset::new(
        id,
        Matrix::new(spec.n, spec.d, data),
        labels,
        names,
        spec.classes,
    )
}

impl ManifestRecord {
    pub fn generate(&self) -> Result<Dataset> {
        synth_named(&self.id, &self.spec, self.seed)
    }

    /// A seeded manifest whose specs spread across sizes, dimensionalities,
    /// class counts, overlap, imbalance and label noise.
    pub fn corpus(count: usize, seed: u64) -> Vec<ManifestRecord> {
        let mut rng = rng_from(seed);
        (0..count)
            .map(|i| {
                let classes = rng.random_range(2..=4);
                let d = rng.random_range(2..=10);
                let spec = SynthSpec {
                    n: rng.random_range(120..=320),
                    d,
                    classes,
                    cluster_std: rng.random_range(0.4..3.0),
                    imbalance: if rng.random_bool(0.4) {
                        0.0
                    } else {
                        rng.random_range(0.0..0.7)
                    },
                    label_noise: if rng.random_bool(0.5) {
                        0.0
                    } else {
                        rng.random_range(0.0..0.2)
                    },
                    informative: rng.random_range(1..=d),
                };
                ManifestRecord {
                    id: format!("synth{i:03}"),
                    spec,
                    seed: rng.random(),
                }
            })
            .collect()
    }
}
