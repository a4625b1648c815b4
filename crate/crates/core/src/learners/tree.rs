//! Weighted CART classifier with Gini impurity.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::argmax;
use crate::dataset::Matrix;
use crate::error::{Error, Result};
use crate::rng::rng_from;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    /// Candidate features examined per split.
    pub feature_subsample: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    /// Per-class training weight reaching the leaf.
    Leaf { freq: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub n_classes: usize,
    /// Arena; the root is node 0.
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    fn leaf_for(&self, x: &[f64]) -> &[f64] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
                TreeNode::Leaf { freq } => return freq,
            }
        }
    }

    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let freq = self.leaf_for(x);
        let total: f64 = freq.iter().sum();
        freq.iter().map(|f| f / total).collect()
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        argmax(self.leaf_for(x))
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    pub fn n_internal(&self) -> usize {
        self.nodes.len() - self.n_leaves()
    }

    /// Depth of every node, root at depth 0, in arena order.
    pub fn node_depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.nodes.len()];
        for i in 0..self.nodes.len() {
            if let TreeNode::Split { left, right, .. } = self.nodes[i] {
                depth[left] = depth[i] + 1;
                depth[right] = depth[i] + 1;
            }
        }
        depth
    }

    /// Predicted class of every leaf.
    pub fn leaf_classes(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Leaf { freq } => Some(argmax(freq)),
                _ => None,
            })
            .collect()
    }
}

struct Builder<'a> {
    x: &'a Matrix,
    y: &'a [usize],
    w: &'a [f64],
    n_classes: usize,
    params: TreeParams,
    rng: crate::rng::Rng,
    nodes: Vec<TreeNode>,
}

struct Split {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

impl Builder<'_> {
    fn freq(&self, rows: &[usize]) -> Vec<f64> {
        let mut f = vec![0.0; self.n_classes];
        for &i in rows {
            f[self.y[i]] += self.w[i];
        }
        f
    }

    fn build(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let freq = self.freq(&rows);
        let pure = freq.iter().filter(|&&f| f > 0.0).count() <= 1;
        let capped = self.params.max_depth.is_some_and(|m| depth >= m);
        let split = if pure || capped || rows.len() < 2 {
            None
        } else {
            self.best_split(&rows)
        };
        let Some(split) = split else {
            self.nodes.push(TreeNode::Leaf { freq });
            return self.nodes.len() - 1;
        };
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { freq: Vec::new() });
        let (l, r): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&i| self.x.get(i, split.feature) <= split.threshold);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[id] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        id
    }

    fn best_split(&mut self, rows: &[usize]) -> Option<Split> {
        let d = self.x.cols();
        let mut order: Vec<usize> = (0..d).collect();
        let wanted = match self.params.feature_subsample {
            Some(m) if m < d => {
                order.shuffle(&mut self.rng);
                m.max(1)
            }
            _ => d,
        };
        let mut best: Option<Split> = None;
        let mut examined = 0;
        for &f in &order {
            if examined >= wanted {
                break;
            }
            // constant features do not count towards the candidate budget
            if let Some(s) = self.best_on_feature(rows, f) {
                examined += 1;
                if best.as_ref().is_none_or(|b| s.impurity < b.impurity) {
                    best = Some(s);
                }
            }
        }
        best
    }

    fn best_on_feature(&self, rows: &[usize], f: usize) -> Option<Split> {
        let mut sorted: Vec<usize> = rows.to_vec();
        sorted.sort_by(|&a, &b| self.x.get(a, f).total_cmp(&self.x.get(b, f)));
        let first = self.x.get(sorted[0], f);
        let last = self.x.get(*sorted.last()?, f);
        if first == last {
            return None;
        }
        let total = self.freq(rows);
        let mut left = vec![0.0; self.n_classes];
        let mut best: Option<Split> = None;
        for k in 0..sorted.len() - 1 {
            let i = sorted[k];
            left[self.y[i]] += self.w[i];
            let (a, b) = (self.x.get(i, f), self.x.get(sorted[k + 1], f));
            if a == b {
                continue;
            }
            let imp = weighted_gini(&left, &total);
            if best.as_ref().is_none_or(|s| imp < s.impurity) {
                let mid = 0.5 * (a + b);
                let threshold = if mid < b { mid } else { a };
                best = Some(Split {
                    feature: f,
                    threshold,
                    impurity: imp,
                });
            }
        }
        best
    }
}

/// W_L * gini(L) + W_R * gini(R).
fn weighted_gini(left: &[f64], total: &[f64]) -> f64 {
    let (mut wl, mut wr, mut sl, mut sr) = (0.0, 0.0, 0.0, 0.0);
    for (l, t) in left.iter().zip(total) {
        let r = t - l;
        wl += l;
        wr += r;
        sl += l * l;
        sr += r * r;
    }
    let part = |w: f64, s: f64| if w > 0.0 { w - s / w } else { 0.0 };
    part(wl, sl) + part(wr, sr)
}

/// Rows with zero weight are ignored entirely.
pub fn train_tree(
    x: &Matrix,
    y: &[usize],
    n_classes: usize,
    weights: Option<&[f64]>,
    params: TreeParams,
) -> Result<DecisionTree> {
    let ones;
    let w = match weights {
        Some(w) => w,
        None => {
            ones = vec![1.0; y.len()];
            &ones
        }
    };
    let rows: Vec<usize> = (0..y.len()).filter(|&i| w[i] > 0.0).collect();
    if rows.is_empty() {
        return Err(Error::AllZeroWeights);
    }
    let mut b = Builder {
        x,
        y,
        w,
        n_classes,
        params,
        rng: rng_from(params.seed),
        nodes: Vec::new(),
    };
    b.build(rows, 0);
    Ok(DecisionTree {
        n_classes,
        nodes: b.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> (Matrix, Vec<usize>) {
        (
            Matrix::from_rows(&[
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
            ]),
            vec![0, 1, 1, 0],
        )
    }

    #[test]
    fn xor_is_shattered() {
        let (x, y) = xor();
        let t = train_tree(&x, &y, 2, None, TreeParams::default()).unwrap();
        for (i, &label) in y.iter().enumerate() {
            assert_eq!(t.predict(x.row(i)), label);
        }
    }

    #[test]
    fn zero_weight_rows_equal_deleted_rows() {
        let x = Matrix::from_rows(&[
            vec![0.0, 5.0],
            vec![1.0, 3.0],
            vec![2.0, 1.0],
            vec![3.0, 4.0],
            vec![4.0, 0.0],
        ]);
        let y = vec![0, 1, 0, 1, 1];
        let w = vec![1.0, 0.0, 2.0, 1.0, 0.0];
        let weighted = train_tree(&x, &y, 2, Some(&w), TreeParams::default()).unwrap();
        let keep = [0, 2, 3];
        let xs = x.select_rows(&keep);
        let ys: Vec<usize> = keep.iter().map(|&i| y[i]).collect();
        let ws: Vec<f64> = keep.iter().map(|&i| w[i]).collect();
        let deleted = train_tree(&xs, &ys, 2, Some(&ws), TreeParams::default()).unwrap();
        assert_eq!(weighted, deleted);
    }

    #[test]
    fn pure_leaf_is_one_hot() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![5.0], vec![6.0]]);
        let y = vec![0, 1, 2, 2];
        let t = train_tree(&x, &y, 3, None, TreeParams::default()).unwrap();
        for node in &t.nodes {
            if let TreeNode::Leaf { freq } = node {
                if freq[2] > 0.0 {
                    assert_eq!(freq[0] + freq[1], 0.0);
                }
            }
        }
        assert_eq!(t.predict_proba(&[5.5]), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn depth_cap_and_all_zero() {
        let (x, y) = xor();
        let stump = train_tree(
            &x,
            &y,
            2,
            None,
            TreeParams {
                max_depth: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(stump.node_depths().into_iter().max().unwrap() <= 1);
        assert!(matches!(
            train_tree(&x, &y, 2, Some(&[0.0; 4]), TreeParams::default()),
            Err(Error::AllZeroWeights)
        ));
    }

    #[test]
    fn introspection_counts() {
        let (x, y) = xor();
        let t = train_tree(&x, &y, 2, None, TreeParams::default()).unwrap();
        assert_eq!(t.n_leaves(), 4);
        assert_eq!(t.n_internal(), 3);
        assert_eq!(t.leaf_classes().len(), 4);
    }
}
