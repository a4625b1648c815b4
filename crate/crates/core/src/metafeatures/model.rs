//! Meta-features from the structure of one unlimited-depth tree.

use super::{summarize_values, Ctx};
use crate::learners::{train_tree, TreeParams};

pub(super) fn model_based(ctx: &Ctx<'_>, out: &mut Vec<f64>) {
    let tree =
        train_tree(ctx.x, ctx.y, ctx.n_classes, None, TreeParams::default()).expect("unit weights");
    let leaves = tree.n_leaves() as f64;
    let nodes = tree.n_internal() as f64;
    let depths: Vec<f64> = tree.node_depths().iter().map(|&d| d as f64).collect();
    let (dm, ds) = summarize_values(&depths);
    let mut per_class = vec![0.0; ctx.n_classes];
    for c in tree.leaf_classes() {
        per_class[c] += 1.0 / leaves;
    }
    let (lm, ls) = summarize_values(&per_class);
    out.extend([leaves, nodes, dm, ds, lm, ls, nodes / ctx.x.cols() as f64]);
}
