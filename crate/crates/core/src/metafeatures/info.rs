//! Entropy-based meta-features over equal-width discretised attributes.

use super::{summarize_defined, Ctx};

/// Equal-width bin index of every value; a constant column maps to bin 0.
pub fn discretize(col: &[f64], bins: usize) -> Vec<usize> {
    let min = col.iter().copied().fold(f64::INFINITY, f64::min);
    let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = max - min;
    col.iter()
        .map(|v| {
            if width > 0.0 {
                (((v - min) / width * bins as f64) as usize).min(bins - 1)
            } else {
                0
            }
        })
        .collect()
}

/// Shannon entropy (bits) of a count vector.
pub(crate) fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

pub(crate) struct AttributeInfo {
    pub attr_ent: Vec<f64>,
    pub joint_ent: Vec<f64>,
    pub mut_inf: Vec<f64>,
    pub class_ent: f64,
}

pub(crate) fn attribute_info(
    x: &crate::dataset::Matrix,
    y: &[usize],
    n_classes: usize,
    bins: usize,
) -> AttributeInfo {
    let mut class_counts = vec![0usize; n_classes];
    for &c in y {
        class_counts[c] += 1;
    }
    let class_ent = entropy(&class_counts);
    let (mut attr_ent, mut joint_ent, mut mut_inf) = (Vec::new(), Vec::new(), Vec::new());
    for j in 0..x.cols() {
        let b = discretize(&x.column(j), bins);
        let mut marginal = vec![0usize; bins];
        let mut joint = vec![0usize; bins * n_classes];
        for (bi, &c) in b.iter().zip(y) {
            marginal[*bi] += 1;
            joint[bi * n_classes + c] += 1;
        }
        let ha = entropy(&marginal);
        let hj = entropy(&joint);
        attr_ent.push(ha);
        joint_ent.push(hj);
        mut_inf.push(ha + class_ent - hj);
    }
    AttributeInfo {
        attr_ent,
        joint_ent,
        mut_inf,
        class_ent,
    }
}

pub(super) fn info_theoretic(ctx: &Ctx<'_>, out: &mut Vec<f64>) {
    let info = attribute_info(ctx.x, ctx.y, ctx.n_classes, ctx.opts.bins);
    let (ae_m, ae_s) = summarize_defined(&info.attr_ent);
    let (je_m, je_s) = summarize_defined(&info.joint_ent);
    let (mi_m, mi_s) = summarize_defined(&info.mut_inf);
    let eq_num_attr = info.class_ent / mi_m;
    let ns_ratio = (ae_m - mi_m) / mi_m;
    out.extend([
        ae_m,
        ae_s,
        info.class_ent,
        je_m,
        je_s,
        mi_m,
        mi_s,
        eq_num_attr,
        ns_ratio,
    ]);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_and_entropy() {
        assert_eq!(discretize(&[0.0, 0.5, 1.0], 10), vec![0, 5, 9]);
        assert_eq!(discretize(&[3.0, 3.0], 10), vec![0, 0]);
        assert_eq!(entropy(&[5, 5]), 1.0);
        assert_eq!(entropy(&[4, 0]), 0.0);
        assert!((entropy(&[1, 1, 1, 1]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_of_copied_label() {
        let x = crate::dataset::Matrix::from_rows(&[vec![0.0], vec![1.0], vec![0.0], vec![1.0]]);
        let info = attribute_info(&x, &[0, 1, 0, 1], 2, 10);
        assert!((info.mut_inf[0] - 1.0).abs() < 1e-12);
        assert_eq!(info.class_ent, 1.0);
    }
}
