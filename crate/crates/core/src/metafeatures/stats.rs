//! General and statistical meta-features.

use super::{summarize_defined, summarize_values, Ctx};

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub(crate) struct ColumnStats {
    pub mean: f64,
    pub var: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
    pub sparsity: f64,
}

pub(crate) fn column_stats(col: &[f64]) -> ColumnStats {
    let n = col.len() as f64;
    let mean = col.iter().sum::<f64>() / n;
    let moment = |p: i32| col.iter().map(|v| (v - mean).powi(p)).sum::<f64>() / n;
    let m2 = moment(2);
    let (skewness, kurtosis) = if m2 > 0.0 {
        (moment(3) / m2.powf(1.5), moment(4) / (m2 * m2) - 3.0)
    } else {
        (f64::NAN, f64::NAN)
    };
    let mut sorted = col.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut unique = sorted.clone();
    unique.dedup();
    let sparsity = (n / unique.len() as f64 - 1.0) / (n - 1.0);
    ColumnStats {
        mean,
        var: m2,
        skewness,
        kurtosis,
        q1: quantile(&sorted, 0.25),
        q3: quantile(&sorted, 0.75),
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        sparsity,
    }
}

pub(crate) fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

pub(super) fn general(ctx: &Ctx<'_>, out: &mut Vec<f64>) {
    let n = ctx.x.rows() as f64;
    let d = ctx.x.cols() as f64;
    let mut counts = vec![0.0; ctx.n_classes];
    for &y in ctx.y {
        counts[y] += 1.0;
    }
    let freq: Vec<f64> = counts.iter().map(|c| c / n).collect();
    let (fm, fs) = summarize_values(&freq);
    out.extend([n, d, ctx.n_classes as f64, d / n, fm, fs]);
}

pub(super) fn statistical(ctx: &Ctx<'_>, out: &mut Vec<f64>) {
    let d = ctx.x.cols();
    let cols: Vec<Vec<f64>> = (0..d).map(|j| ctx.x.column(j)).collect();
    let stats: Vec<ColumnStats> = cols.iter().map(|c| column_stats(c)).collect();
    let pick = |f: &dyn Fn(&ColumnStats) -> f64| stats.iter().map(f).collect::<Vec<f64>>();

    let mut cors = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            if stats[a].var > 0.0 && stats[b].var > 0.0 {
                cors.push(pearson(&cols[a], &cols[b]).abs());
            }
        }
    }
    let nr_cor = cors.iter().filter(|c| **c > ctx.opts.cor_threshold).count() as f64;
    let nr_outliers = stats
        .iter()
        .zip(&cols)
        .filter(|(s, col)| {
            let iqr = s.q3 - s.q1;
            let (lo, hi) = (s.q1 - 1.5 * iqr, s.q3 + 1.5 * iqr);
            col.iter().any(|v| *v < lo || *v > hi)
        })
        .count() as f64;

    let groups: [Vec<f64>; 9] = [
        pick(&|s| s.mean),
        pick(&|s| s.var.sqrt()),
        pick(&|s| s.skewness),
        pick(&|s| s.kurtosis),
        cors,
        pick(&|s| s.q3 - s.q1),
        pick(&|s| s.var),
        pick(&|s| s.max - s.min),
        pick(&|s| s.sparsity),
    ];
    for g in &groups {
        let (m, s) = summarize_defined(g);
        out.extend([m, s]);
    }
    out.extend([nr_outliers, nr_cor]);
}
