//! Threshold-free detection metrics over scored samples.
//!
//! The out-distribution is the positive class and higher scores mean "more
//! anomalous". AUROC is computed as the Mann–Whitney rank statistic with ties
//! counted at half weight, which equals the trapezoidal area under the ROC
//! staircase.

use crate::error::{Error, Result};
use crate::io::records::{Label, ScoreRecord};
use serde::Serialize;

/// One point of the ROC staircase at a given decision threshold
/// (classify as OUT when score ≥ threshold).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    pub threshold: f64,
}

/// Per-interval statistics of the remaining score, split by membership.
/// Means and variances are `None` for empty groups; variances are population
/// variances so singleton groups report 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceStats {
    pub lo: f64,
    pub hi: f64,
    pub mean_in: Option<f64>,
    pub var_in: Option<f64>,
    pub count_in: usize,
    pub mean_out: Option<f64>,
    pub var_out: Option<f64>,
    pub count_out: usize,
}

/// Per-label histogram over [0, 1] with out-of-range values clamped into the
/// boundary bins and counted separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramCounts {
    pub n_bins: usize,
    #[serde(rename = "in")]
    pub in_counts: Vec<u64>,
    #[serde(rename = "out")]
    pub out_counts: Vec<u64>,
    pub clamped_low_in: u64,
    pub clamped_low_out: u64,
    pub clamped_high_in: u64,
    pub clamped_high_out: u64,
}

/// Machine-readable evaluation summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalSummary {
    pub auroc: f64,
    pub n_in: usize,
    pub n_out: usize,
    pub histogram: HistogramCounts,
    pub slices: Vec<SliceStats>,
}

fn split_counts(records: &[ScoreRecord]) -> Result<(usize, usize)> {
    let n_out = records.iter().filter(|r| r.label == Label::Out).count();
    let n_in = records.len() - n_out;
    if n_in == 0 || n_out == 0 {
        return Err(Error::UndefinedMetric(format!(
            "need at least one record of each label, got {n_in} in / {n_out} out"
        )));
    }
    Ok((n_in, n_out))
}

/// Probability that a random OUT sample scores above a random IN sample,
/// ties at half weight. One sort, O(n log n).
pub fn auroc(records: &[ScoreRecord]) -> Result<f64> {
    let (n_in, n_out) = split_counts(records)?;
    let mut scored: Vec<(f64, Label)> = records.iter().map(|r| (r.score, r.label)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Average ranks over tie groups; ranks are 1-based.
    let mut rank_sum_out = 0.0f64;
    let mut i = 0;
    while i < scored.len() {
        let mut j = i;
        while j + 1 < scored.len() && scored[j + 1].0 == scored[i].0 {
            j += 1;
        }
        let avg_rank = (i + 1 + j + 1) as f64 / 2.0;
        for entry in &scored[i..=j] {
            if entry.1 == Label::Out {
                rank_sum_out += avg_rank;
            }
        }
        i = j + 1;
    }

    let u_out = rank_sum_out - (n_out * (n_out + 1)) as f64 / 2.0;
    Ok(u_out / (n_out as f64 * n_in as f64))
}

/// ROC staircase: the (0,0) anchor at threshold +∞, then one point per
/// distinct score in descending order, ending at (1,1) on the minimum score.
pub fn roc_curve(records: &[ScoreRecord]) -> Result<Vec<RocPoint>> {
    let (n_in, n_out) = split_counts(records)?;
    let mut scored: Vec<(f64, Label)> = records.iter().map(|r| (r.score, r.label)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < scored.len() {
        let threshold = scored[i].0;
        while i < scored.len() && scored[i].0 == threshold {
            match scored[i].1 {
                Label::Out => tp += 1,
                Label::In => fp += 1,
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / n_in as f64,
            tpr: tp as f64 / n_out as f64,
            threshold,
        });
    }
    Ok(points)
}

/// Trapezoidal area under a ROC staircase returned by [`roc_curve`].
pub fn trapezoid_area(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
        .sum()
}

/// Partition (0, 1) into `n_slices` equal intervals [lo, hi) — the last one
/// closed at 1 — and report per-label mean and population variance of the
/// remaining score for the samples whose max probability falls in each
/// interval.
///
/// `samples` are (label, max probability, remaining score) triples.
pub fn slice_analysis(samples: &[(Label, f64, f64)], n_slices: usize) -> Result<Vec<SliceStats>> {
    if n_slices == 0 {
        return Err(Error::InvalidInput(
            "slice count must be at least 1".to_string(),
        ));
    }
    let mut groups: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); n_slices];
    for &(label, p_max, s_rem) in samples {
        if !(0.0..=1.0).contains(&p_max) || !p_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "max probability {p_max} outside [0, 1]"
            )));
        }
        let idx = ((p_max * n_slices as f64).floor() as usize).min(n_slices - 1);
        match label {
            Label::In => groups[idx].0.push(s_rem),
            Label::Out => groups[idx].1.push(s_rem),
        }
    }

    fn stats(values: &[f64]) -> (Option<f64>, Option<f64>) {
        if values.is_empty() {
            return (None, None);
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        (Some(mean), Some(var))
    }

    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(i, (ins, outs))| {
            let (mean_in, var_in) = stats(&ins);
            let (mean_out, var_out) = stats(&outs);
            SliceStats {
                lo: i as f64 / n_slices as f64,
                hi: (i + 1) as f64 / n_slices as f64,
                mean_in,
                var_in,
                count_in: ins.len(),
                mean_out,
                var_out,
                count_out: outs.len(),
            }
        })
        .collect())
}

/// Equal-width per-label histogram of scores over [0, 1]. A score of exactly
/// 1 lands in the last bin; out-of-range scores are clamped into the boundary
/// bins and tallied.
pub fn histogram(records: &[ScoreRecord], n_bins: usize) -> Result<HistogramCounts> {
    if n_bins == 0 {
        return Err(Error::InvalidInput(
            "bin count must be at least 1".to_string(),
        ));
    }
    let mut h = HistogramCounts {
        n_bins,
        in_counts: vec![0; n_bins],
        out_counts: vec![0; n_bins],
        clamped_low_in: 0,
        clamped_low_out: 0,
        clamped_high_in: 0,
        clamped_high_out: 0,
    };
    for r in records {
        let (idx, low, high) = if r.score < 0.0 {
            (0, 1, 0)
        } else if r.score > 1.0 {
            (n_bins - 1, 0, 1)
        } else {
            (
                ((r.score * n_bins as f64).floor() as usize).min(n_bins - 1),
                0,
                0,
            )
        };
        match r.label {
            Label::In => {
                h.in_counts[idx] += 1;
                h.clamped_low_in += low;
                h.clamped_high_in += high;
            }
            Label::Out => {
                h.out_counts[idx] += 1;
                h.clamped_low_out += low;
                h.clamped_high_out += high;
            }
        }
    }
    Ok(h)
}

/// Bundle everything the evaluation emits for one score set.
pub fn summarize(
    records: &[ScoreRecord],
    slice_samples: &[(Label, f64, f64)],
    n_slices: usize,
    n_bins: usize,
) -> Result<EvalSummary> {
    let (n_in, n_out) = split_counts(records)?;
    Ok(EvalSummary {
        auroc: auroc(records)?,
        n_in,
        n_out,
        histogram: histogram(records, n_bins)?,
        slices: slice_analysis(slice_samples, n_slices)?,
    })
}
